//! Helmholtz layer-potential kernels, panel product quadrature, Nyström assembly and L2
//! re-weighting.

mod assemble;
mod kernels;
mod near;

pub use assemble::{assemble, assemble_with, dump_matrix, l2_unweight, l2_weight, AssemblyMode, NystromMatrix, Weighting};
pub use kernels::{kernel_dlp, kernel_slp, kernel_sprime, KernelTag, PairGeometry};
pub use near::{is_near, panel_product_quadrature};

use crate::error::{invalid, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Complex wavenumber with positive real part and nonnegative imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wavenumber {
    pub re: f64,
    pub im: f64,
}

impl Wavenumber {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re > 0.0) || !re.is_finite() || !(im >= 0.0) || !im.is_finite() {
            return invalid(format!("wavenumber needs Re k > 0 and Im k >= 0, got {re} + {im}i"));
        }
        Ok(Self { re, im })
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// `2 pi / Re k`.
    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.re
    }
}

/// Integral equation discretized by the Nyström matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Formulation {
    /// `u = (S + i eta D) sigma` with `eta = alpha k + beta`; exterior trace
    /// `(i eta / 2) sigma + (S + i eta K) sigma`.
    DirichletCfie { alpha: f64, beta: f64 },
    /// `u = S sigma`; exterior normal trace `-sigma/2 + S' sigma`.
    NeumannSingleLayer,
    /// Principal-value Laplace double layer without an identity term.
    LaplaceDlp,
}

impl Formulation {
    /// Dirichlet formulation with the default coupling `alpha = 1.2`, `beta = 0.8`.
    pub fn dirichlet() -> Self {
        Self::DirichletCfie { alpha: 1.2, beta: 0.8 }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Self::DirichletCfie { .. } => "dirichlet-cfie",
            Self::NeumannSingleLayer => "neumann-single-layer",
            Self::LaplaceDlp => "laplace-dlp",
        }
    }

    /// Kernel of the integral operator.
    pub fn kernel(&self, k: Complex64) -> KernelTag {
        match *self {
            Self::DirichletCfie { alpha, beta } => KernelTag::Combined { eta: alpha * k + beta },
            Self::NeumannSingleLayer => KernelTag::Sprime,
            Self::LaplaceDlp => KernelTag::LaplaceDlp,
        }
    }

    /// Coefficient of the identity.
    pub fn identity(&self, k: Complex64) -> Complex64 {
        match *self {
            Self::DirichletCfie { alpha, beta } => 0.5 * Complex64::i() * (alpha * k + beta),
            Self::NeumannSingleLayer => Complex64::new(-0.5, 0.0),
            Self::LaplaceDlp => Complex64::new(0.0, 0.0),
        }
    }

    /// Kernel of the off-surface representation.
    pub fn representation(&self, k: Complex64) -> KernelTag {
        match *self {
            Self::DirichletCfie { alpha, beta } => KernelTag::Combined { eta: alpha * k + beta },
            Self::NeumannSingleLayer => KernelTag::Slp,
            Self::LaplaceDlp => KernelTag::LaplaceDlp,
        }
    }
}
