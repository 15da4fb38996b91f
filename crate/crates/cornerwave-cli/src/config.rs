//! Experiment configuration: a JSON file overridden field by field from flags.

use clap::Args;
use cornerwave::geometry::{PiecewiseCurve, Polygon, SmoothingKernel};
use cornerwave::layerpot::Wavenumber;
use cornerwave::solver::{BoundaryCondition, DEFAULT_NODE_BUDGET};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::CliError;

/// Every setting is optional here; defaults are applied by [`Settings::resolve`].
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentConfig {
    /// Polygon or circle JSON file.
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Smoothing kernel: poly:K, gauss or gauss:EPS.
    #[arg(long)]
    pub kernel: Option<String>,
    /// Rounding widths, comma separated; 0 selects the corner-reference mesh.
    #[arg(long, value_delimiter = ',')]
    pub h: Option<Vec<f64>>,
    /// Real part of the wavenumber.
    #[arg(long, allow_negative_numbers = true)]
    pub k_re: Option<f64>,
    /// Imaginary part of the wavenumber (default 0).
    #[arg(long, allow_negative_numbers = true)]
    pub k_im: Option<f64>,
    /// dirichlet or neumann.
    #[arg(long)]
    pub bc: Option<String>,
    /// Incidence angle in radians, in [0, 2pi).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Cross-section kind: bi, mono or far.
    #[arg(long)]
    pub kind: Option<String>,
    /// Cross-section circle radius about the centroid.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Angle (or polyline) sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Panel resolution tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Concurrent solves in a convergence sweep.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Smallest corner-reference panel relative to its edge.
    #[arg(long)]
    pub depth_scale: Option<f64>,
    /// Also run the point-source verification.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub verify: Option<bool>,
    /// Radius of the verification circle.
    #[arg(long)]
    pub verify_radius: Option<f64>,
    /// Largest number of unknowns a dense solve may use.
    #[arg(long)]
    pub node_budget: Option<usize>,
    /// Leave wall-clock timings out of the outputs so reruns are byte-identical.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub deterministic: Option<bool>,
    /// Diffeomorphism construction: harmonic or gauss-map.
    #[arg(long)]
    pub method: Option<String>,
    /// Support-function coefficients JSON for gauss-map.
    #[arg(long)]
    pub support: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: ExperimentConfig) -> Self {
        macro_rules! pick {
            ($($f:ident),*) => { Self { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            geometry, kernel, h, k_re, k_im, bc, phi, kind, radius, samples, tol, jobs, out, depth_scale, verify,
            verify_radius, node_budget, deterministic, method, support
        )
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

/// Scatterer read from a geometry file.
#[derive(Debug, Clone)]
pub enum Shape {
    Polygon(Polygon),
    Circle { center: [f64; 2], radius: f64 },
}

impl Shape {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct CircleSpec {
            center: [f64; 2],
            radius: f64,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum File {
            Polygon { vertices: Vec<[f64; 2]> },
            Circle { circle: CircleSpec },
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read geometry {}: {e}", path.display())))?;
        let file: File = serde_json::from_str(&text).map_err(|e| {
            CliError::Usage(format!("geometry {} is neither {{\"vertices\": ...}} nor {{\"circle\": ...}}: {e}", path.display()))
        })?;
        match file {
            File::Polygon { vertices } => Ok(Shape::Polygon(Polygon::new(vertices)?)),
            File::Circle { circle } => {
                PiecewiseCurve::circle(circle.center, circle.radius)?;
                Ok(Shape::Circle { center: circle.center, radius: circle.radius })
            }
        }
    }
}

/// Fully defaulted settings; their JSON is what the provenance hash covers.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub geometry: Option<PathBuf>,
    pub kernel: SmoothingKernel,
    pub h: Vec<f64>,
    pub k: Option<Wavenumber>,
    pub bc: BoundaryCondition,
    pub phi: f64,
    pub kind: String,
    pub radius: f64,
    pub samples: usize,
    pub tol: f64,
    pub jobs: usize,
    #[serde(skip)]
    pub out: PathBuf,
    pub depth_scale: f64,
    pub verify: bool,
    pub verify_radius: Option<f64>,
    pub node_budget: usize,
    pub deterministic: bool,
    pub method: String,
    pub support: Option<PathBuf>,
}

impl Settings {
    pub fn resolve(c: ExperimentConfig) -> Result<Self, CliError> {
        let kernel = SmoothingKernel::parse(c.kernel.as_deref().unwrap_or("poly:8"))?;
        let h = c.h.unwrap_or_default();
        if h.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return Err(CliError::Usage("rounding widths must be finite and nonnegative".into()));
        }
        let k = match c.k_re {
            Some(re) => Some(Wavenumber::new(re, c.k_im.unwrap_or(0.0))?),
            None if c.k_im.is_some() => return Err(CliError::Usage("--k-im given without --k-re".into())),
            None => None,
        };
        let kind = c.kind.unwrap_or_else(|| "bi".into());
        if !["bi", "mono", "far"].contains(&kind.as_str()) {
            return Err(CliError::Usage(format!("unknown cross-section kind '{kind}', expected bi, mono or far")));
        }
        let method = c.method.unwrap_or_else(|| "harmonic".into());
        if !["harmonic", "gauss-map"].contains(&method.as_str()) {
            return Err(CliError::Usage(format!("unknown method '{method}', expected harmonic or gauss-map")));
        }
        let jobs = c.jobs.unwrap_or(1);
        if jobs == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        Ok(Self {
            geometry: c.geometry,
            kernel,
            h,
            k,
            bc: BoundaryCondition::parse(c.bc.as_deref().unwrap_or("dirichlet"))?,
            phi: c.phi.unwrap_or(0.0),
            kind,
            radius: c.radius.unwrap_or(10.0),
            samples: c.samples.unwrap_or(360),
            tol: c.tol.unwrap_or(1e-10),
            jobs,
            out: c.out.unwrap_or_else(|| PathBuf::from(".")),
            depth_scale: c.depth_scale.unwrap_or(1e-10),
            verify: c.verify.unwrap_or(false),
            verify_radius: c.verify_radius,
            node_budget: c.node_budget.unwrap_or(DEFAULT_NODE_BUDGET),
            deterministic: c.deterministic.unwrap_or(false),
            method,
            support: c.support,
        })
    }

    pub fn shape(&self) -> Result<Shape, CliError> {
        match &self.geometry {
            Some(p) => Shape::load(p),
            None => Err(CliError::Usage("--geometry is required".into())),
        }
    }

    pub fn wavenumber(&self) -> Result<Wavenumber, CliError> {
        self.k.ok_or_else(|| CliError::Usage("--k-re is required".into()))
    }

    /// Rounding widths, required nonempty for polygons.
    pub fn widths(&self) -> Result<&[f64], CliError> {
        if self.h.is_empty() {
            return Err(CliError::Usage("--h is required for polygon geometries".into()));
        }
        Ok(&self.h)
    }
}
