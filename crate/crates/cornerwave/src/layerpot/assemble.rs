use super::kernels::KernelTag;
use super::near::{is_near, near_weights, pair_geometry};
use super::{Formulation, Wavenumber};
use crate::error::{invalid, Result};
use crate::panels::{BoundaryMesh, ORDER};
use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use std::io::Write;

/// Whether the L2 similarity transform has been applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    Plain,
    L2,
}

/// Row scheduling for assembly; both modes produce identical matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssemblyMode {
    Parallel,
    Serial,
}

/// Dense Nyström matrix over the mesh nodes.
#[derive(Debug, Clone)]
pub struct NystromMatrix {
    pub matrix: Mat<Complex64>,
    pub formulation: Formulation,
    pub weighting: Weighting,
}

impl NystromMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Assembles the formulation's matrix `c I + K` with near and self entries from product
/// quadrature and all other entries from the plain panel rule.
pub fn assemble(mesh: &BoundaryMesh, formulation: Formulation, k: Wavenumber) -> Result<NystromMatrix> {
    assemble_with(mesh, formulation, k, AssemblyMode::Parallel)
}

pub fn assemble_with(
    mesh: &BoundaryMesh,
    formulation: Formulation,
    k: Wavenumber,
    mode: AssemblyMode,
) -> Result<NystromMatrix> {
    let lam = k.wavelength();
    if (mesh.wavelength() - lam).abs() > 1e-10 * lam {
        return invalid(format!(
            "mesh was built for wavelength {} but the wavenumber gives {}",
            mesh.wavelength(),
            lam
        ));
    }
    let kv = k.value();
    let kernel = formulation.kernel(kv);
    let diag = formulation.identity(kv);
    let n = mesh.len();
    let mut rows = vec![Complex64::new(0.0, 0.0); n * n];
    let fill = |(j, row): (usize, &mut [Complex64])| {
        fill_row(mesh, kernel, kv, j, row);
        row[j] += diag;
    };
    match mode {
        AssemblyMode::Parallel => rows.par_chunks_mut(n).enumerate().for_each(fill),
        AssemblyMode::Serial => rows.chunks_mut(n).enumerate().for_each(fill),
    }
    let matrix = Mat::from_fn(n, n, |i, j| rows[i * n + j]);
    Ok(NystromMatrix { matrix, formulation, weighting: Weighting::Plain })
}

pub(crate) fn fill_row(mesh: &BoundaryMesh, kernel: KernelTag, k: Complex64, j: usize, row: &mut [Complex64]) {
    let curve = mesh.curve();
    let params = mesh.params();
    let normals = mesh.normals();
    let weights = mesh.weights();
    let target = params[j];
    let n_x = normals[j];
    let mut near = [Complex64::new(0.0, 0.0); ORDER];
    for q in 0..mesh.panels().len() {
        let base = q * ORDER;
        if is_near(mesh, j, q) {
            near_weights(mesh, j, q, kernel, k, &mut near);
            row[base..base + ORDER].copy_from_slice(&near);
        } else {
            for l in base..base + ORDER {
                let g = pair_geometry(curve, target, n_x, params[l], normals[l]);
                row[l] = kernel.eval(k, &g) * weights[l];
            }
        }
    }
}

/// Applies `A -> D^{1/2} A D^{-1/2}` and `b -> D^{1/2} b` with `D = diag(h)`.
pub fn l2_weight(m: &mut NystromMatrix, rhs: &mut [Complex64], h: &[f64]) -> Result<()> {
    let n = m.dim();
    if m.weighting != Weighting::Plain {
        return invalid("matrix is already L2 weighted");
    }
    if h.len() != n || rhs.len() != n {
        return invalid(format!("weights ({}) and rhs ({}) must match the matrix dimension {n}", h.len(), rhs.len()));
    }
    if let Some(bad) = h.iter().position(|&w| !(w > 0.0)) {
        return invalid(format!("weight {bad} is not positive: {}", h[bad]));
    }
    let s: Vec<f64> = h.iter().map(|w| w.sqrt()).collect();
    for col in 0..n {
        let inv = 1.0 / s[col];
        for row in 0..n {
            let v = m.matrix[(row, col)];
            m.matrix[(row, col)] = v * (s[row] * inv);
        }
    }
    for (b, si) in rhs.iter_mut().zip(&s) {
        *b *= *si;
    }
    m.weighting = Weighting::L2;
    Ok(())
}

/// `sigma_j = sigma~_j / sqrt(h_j)`.
pub fn l2_unweight(weighted: &[Complex64], h: &[f64]) -> Vec<Complex64> {
    weighted.iter().zip(h).map(|(v, w)| v / w.sqrt()).collect()
}

/// Writes the matrix as a little-endian `u64` dimension followed by row-major `(re, im)` `f64`
/// pairs. The layout is a debugging aid and may change.
pub fn dump_matrix<W: Write>(m: &NystromMatrix, out: &mut W) -> Result<()> {
    let n = m.dim();
    out.write_all(&(n as u64).to_le_bytes())?;
    for i in 0..n {
        for j in 0..n {
            let v = m.matrix[(i, j)];
            out.write_all(&v.re.to_le_bytes())?;
            out.write_all(&v.im.to_le_bytes())?;
        }
    }
    Ok(())
}
