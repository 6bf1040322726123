//! Laplacian construction and dense symmetric spectral calculus.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::Graph;

const CLAMP_REL: f64 = 1e-10;

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub eigenvalues: DVector<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl SymEig {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let eig = SymmetricEigen::new(m.clone());
        let mut order: Vec<usize> = (0..m.nrows()).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues = DVector::from_iterator(order.len(), order.iter().map(|&i| eig.eigenvalues[i]));
        let mut eigenvectors = DMatrix::zeros(m.nrows(), m.ncols());
        for (k, &i) in order.iter().enumerate() {
            eigenvectors.set_column(k, &eig.eigenvectors.column(i));
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V f(Λ) Vᵀ`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let vals: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.with_values(&vals)
    }

    /// `V diag(vals) Vᵀ` for precomputed per-mode values.
    pub fn with_values(&self, vals: &[f64]) -> DMatrix<f64> {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (k, &fk) in vals.iter().enumerate() {
            scaled.column_mut(k).scale_mut(fk);
        }
        let mut out = scaled * v.transpose();
        // restore exact symmetry lost to rounding
        let n = out.nrows();
        for i in 0..n {
            for j in i + 1..n {
                let s = 0.5 * (out[(i, j)] + out[(j, i)]);
                out[(i, j)] = s;
                out[(j, i)] = s;
            }
        }
        out
    }

    /// `V diag(vals) Vᵀ u` without forming the matrix.
    pub fn apply_values(&self, vals: &[f64], u: &DVector<f64>) -> DVector<f64> {
        let v = &self.eigenvectors;
        let mut coeff = v.transpose() * u;
        for (c, &fk) in coeff.iter_mut().zip(vals) {
            *c *= fk;
        }
        v * coeff
    }
}

#[derive(Debug, Clone)]
pub struct SpectralLaplacian {
    pub laplacian: DMatrix<f64>,
    pub eig: SymEig,
    pub lambda_max: f64,
}

impl SpectralLaplacian {
    pub fn eigenvalues(&self) -> &DVector<f64> {
        &self.eig.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eig.eigenvectors
    }

    pub fn n(&self) -> usize {
        self.eig.dim()
    }

    /// Smallest eigenvalue above the clamping threshold, if any.
    pub fn lambda2(&self) -> Option<f64> {
        self.eig.eigenvalues.iter().copied().find(|&l| l > 0.0)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        self.eig.map(f)
    }
}

/// `L = D - A` with its full eigendecomposition; eigenvalues below
/// `1e-10 λ_max` are set to exactly zero so the kernel is exact.
pub fn laplacian(g: &Graph) -> Result<SpectralLaplacian> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut l = -g.adjacency();
    for v in 0..g.n() {
        l[(v, v)] = g.degree(v) as f64;
    }
    Ok(from_laplacian_matrix(l))
}

pub fn from_laplacian_matrix(l: DMatrix<f64>) -> SpectralLaplacian {
    let mut eig = SymEig::new(&l);
    let lambda_max = eig.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x));
    let thresh = CLAMP_REL * lambda_max.max(f64::MIN_POSITIVE);
    for x in eig.eigenvalues.iter_mut() {
        if *x < thresh {
            *x = 0.0;
        }
    }
    SpectralLaplacian {
        laplacian: l,
        eig,
        lambda_max,
    }
}
