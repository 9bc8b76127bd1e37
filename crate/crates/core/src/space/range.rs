//! Truncated range-space representation of H(b): the defect operator
//! D = I - T_b T_conj(b) at finite truncation, its eigendecomposition with
//! a relative spectral cutoff, and the pseudoinverse pairing
//! <f, g>_b = <D^+ f, g>_2 on the numerical range.

use super::SpaceError;
use crate::hardy::{toeplitz_analytic_matrix, TaylorVector};
use crate::symbol::MomentSequence;
use crate::C64;
use nalgebra::{DMatrix, DVector};

pub struct RangeRep {
    n: usize,
    /// Eigenvalues of D, descending, clamped at zero.
    eigvals: Vec<f64>,
    /// Matching eigenvector columns.
    eigvecs: DMatrix<C64>,
    cutoff_abs: f64,
    rank: usize,
}

fn eigendecompose(d: DMatrix<C64>, cutoff_rel: f64) -> (Vec<f64>, DMatrix<C64>, f64, usize) {
    let n = d.nrows();
    let eig = nalgebra::SymmetricEigen::new(d);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigvals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let mut eigvecs = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        eigvecs.set_column(col, &eig.eigenvectors.column(i));
    }
    let top = eigvals.first().copied().unwrap_or(0.0);
    let cutoff_abs = cutoff_rel * top.max(f64::MIN_POSITIVE);
    let rank = eigvals.iter().filter(|&&l| l > cutoff_abs).count();
    (eigvals, eigvecs, cutoff_abs, rank)
}

impl RangeRep {
    /// D = I - T_b T_conj(b): the analytic-times-co-analytic product is
    /// formed at size n + headroom and cropped, which reproduces the
    /// principal block of the full operator exactly.
    pub fn build(b: &TaylorVector, n: usize, headroom: usize, cutoff_rel: f64) -> Self {
        let big = n + headroom;
        let l = toeplitz_analytic_matrix(b, big, 0);
        let product = &l * l.adjoint();
        let mut d = DMatrix::from_fn(n, n, |i, j| -product[(i, j)]);
        for i in 0..n {
            d[(i, i)] += 1.0;
        }
        let (eigvals, eigvecs, cutoff_abs, rank) = eigendecompose(d, cutoff_rel);
        RangeRep { n, eigvals, eigvecs, cutoff_abs, rank }
    }

    /// The conjugate-side defect I - T_conj(b) T_b. The co-analytic-first
    /// product has entries reaching into the coefficient tail; they are
    /// resummed through the moments of |b|^2, which closes the tail exactly:
    /// (T_conj(b) T_b)[i, j] = m_{j-i} - sum_{k < max(i,j)} conj(b_{k-i}) b_{k-j}.
    pub fn build_conjugate(
        b: &TaylorVector,
        moments: &MomentSequence,
        n: usize,
        cutoff_rel: f64,
    ) -> Self {
        let get = |k: i64| -> C64 {
            if k < 0 {
                C64::new(0.0, 0.0)
            } else {
                b.get(k as usize)
            }
        };
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut v = moments.signed(j as i64 - i as i64);
                for k in 0..i.max(j) {
                    v -= get(k as i64 - i as i64).conj() * get(k as i64 - j as i64);
                }
                d[(i, j)] = -v;
            }
            d[(i, i)] += 1.0;
        }
        let (eigvals, eigvecs, cutoff_abs, rank) = eigendecompose(d, cutoff_rel);
        RangeRep { n, eigvals, eigvecs, cutoff_abs, rank }
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff_abs
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigvals
    }

    fn to_vec(&self, f: &TaylorVector) -> DVector<C64> {
        DVector::from_fn(self.n, |k, _| f.get(k))
    }

    /// Coefficients of f along the kept eigenvectors.
    fn spectral_coords(&self, f: &TaylorVector) -> DVector<C64> {
        let v = self.to_vec(f);
        DVector::from_fn(self.rank, |i, _| self.eigvecs.column(i).dotc(&v))
    }

    /// Relative norm of the component of f outside the numerical range,
    /// computed by explicit subtraction to dodge cancellation.
    pub fn range_residual(&self, f: &TaylorVector) -> f64 {
        let v = self.to_vec(f);
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let c = self.spectral_coords(f);
        let mut rest = v;
        for i in 0..self.rank {
            rest -= self.eigvecs.column(i) * c[i];
        }
        rest.norm() / norm
    }

    /// <D^+ f, g>_2 over the kept spectrum.
    pub fn pairing(&self, f: &TaylorVector, g: &TaylorVector) -> C64 {
        let cf = self.spectral_coords(f);
        let cg = self.spectral_coords(g);
        (0..self.rank).map(|i| cf[i] * cg[i].conj() / self.eigvals[i]).sum()
    }

    pub fn apply_pinv(&self, f: &TaylorVector) -> DVector<C64> {
        let cf = self.spectral_coords(f);
        let mut out = DVector::zeros(self.n);
        for i in 0..self.rank {
            out += self.eigvecs.column(i) * (cf[i] / C64::new(self.eigvals[i], 0.0));
        }
        out
    }

    /// Orthonormal H(b) basis vector sqrt(lambda_i) q_i as coefficients.
    pub fn hb_basis_vector(&self, i: usize) -> DVector<C64> {
        self.eigvecs.column(i) * C64::new(self.eigvals[i].sqrt(), 0.0)
    }

    /// H(b) coordinates of f in the orthonormal basis: (q_i^H f)/sqrt(l_i).
    pub fn hb_coords(&self, f: &TaylorVector) -> DVector<C64> {
        let cf = self.spectral_coords(f);
        DVector::from_fn(self.rank, |i, _| cf[i] / C64::new(self.eigvals[i].sqrt(), 0.0))
    }

    /// Matrix of the compression of the backward shift to the numerical
    /// range, in the orthonormal H(b) basis.
    pub fn xb_matrix(&self) -> DMatrix<C64> {
        // Z q_j dropped into coordinates: X[i,j] = sqrt(l_j/l_i) q_i^H Z q_j
        let mut shifted = DMatrix::zeros(self.n, self.n);
        for j in 0..self.rank {
            let col = self.eigvecs.column(j);
            for k in 0..self.n - 1 {
                shifted[(k, j)] = col[k + 1];
            }
        }
        let mut x = DMatrix::zeros(self.rank, self.rank);
        for i in 0..self.rank {
            for j in 0..self.rank {
                let w = self.eigvecs.column(i).dotc(&shifted.column(j));
                x[(i, j)] = w * (self.eigvals[j] / self.eigvals[i]).sqrt();
            }
        }
        x
    }
}

/// Evaluation context for H(b) inner products: exact model space for finite
/// Blaschke symbols, truncated pseudoinverse representation otherwise.
pub enum HbContext {
    Exact(super::ModelSpace),
    Truncated { rep: RangeRep, threshold: f64 },
}

impl HbContext {
    /// General H(b) pairing with a range-membership check.
    pub fn hb_inner(&self, f: &TaylorVector, g: &TaylorVector) -> Result<C64, SpaceError> {
        let (value, residual, threshold) = self.hb_inner_with_residual(f, g);
        if residual > threshold {
            return Err(SpaceError::VectorOutsideRange { residual, threshold });
        }
        Ok(value)
    }

    /// Pairing plus the worst range/projection residual of the two inputs.
    pub fn hb_inner_with_residual(&self, f: &TaylorVector, g: &TaylorVector) -> (C64, f64, f64) {
        match self {
            HbContext::Exact(ms) => {
                let residual = ms.projection_residual(f).max(ms.projection_residual(g));
                let value = ms.coords(g).dotc(&ms.coords(f));
                (value, residual, 1e-8)
            }
            HbContext::Truncated { rep, threshold } => {
                let residual = rep.range_residual(f).max(rep.range_residual(g));
                (rep.pairing(f, g), residual, *threshold)
            }
        }
    }
}
