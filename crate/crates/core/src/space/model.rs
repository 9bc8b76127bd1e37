//! Exact finite-dimensional representation of the model space of a finite
//! Blaschke product.
//!
//! For an inner symbol the space is H^2 minus its shift-invariant image, of
//! dimension equal to the Blaschke degree, and the H(b) inner product is
//! the plain H^2 pairing. We carry the Takenaka-Malmquist-Walsh basis
//!
//!   g_k = sqrt(1 - |a_k|^2)/(1 - conj(a_k) z) * prod_{i<k} (z - a_i)/(1 - conj(a_i) z),
//!
//! which is orthonormal and handles repeated zeros without special cases.
//! Basis functions are stored as Taylor vectors truncated where the
//! geometric coefficient decay reaches the machine floor, so every pairing
//! below is exact to roundoff.

use super::SpaceError;
use crate::hardy::{self, h2_inner, TaylorVector};
use crate::C64;
use nalgebra::{DMatrix, DVector};

pub struct ModelSpace {
    zeros: Vec<C64>,
    basis: Vec<TaylorVector>,
    symbol: TaylorVector,
    n_trunc: usize,
}

fn mul_trunc(a: &[C64], b: &[C64], n: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai.norm() == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of 1/(1 - conj(a) z).
fn cauchy_kernel(a: C64, n: usize) -> Vec<C64> {
    let q = a.conj();
    let mut out = Vec::with_capacity(n);
    let mut p = C64::new(1.0, 0.0);
    for _ in 0..n {
        out.push(p);
        p *= q;
    }
    out
}

/// Coefficients of the unnormalized factor (z - a)/(1 - conj(a) z).
fn mobius_factor(a: C64, n: usize) -> Vec<C64> {
    let kernel = cauchy_kernel(a, n);
    let numer = [-a, C64::new(1.0, 0.0)];
    mul_trunc(&numer, &kernel, n)
}

/// Coefficients of the normalized Blaschke factor: z for a zero at the
/// origin, (|a|/a)(a - z)/(1 - conj(a) z) otherwise.
fn blaschke_factor_coeffs(a: C64, n: usize) -> Vec<C64> {
    if a.norm() < 1e-15 {
        let mut out = vec![C64::new(0.0, 0.0); n];
        if n > 1 {
            out[1] = C64::new(1.0, 0.0);
        }
        out
    } else {
        let scale = -a.norm() / a;
        mobius_factor(a, n).into_iter().map(|c| c * scale).collect()
    }
}

impl ModelSpace {
    pub fn new(zeros: &[C64]) -> Result<Self, SpaceError> {
        let r = zeros.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        if r >= 0.97 {
            return Err(SpaceError::ZerosTooCloseToBoundary(r));
        }
        let n_trunc = if r < 1e-12 {
            (zeros.len() + 2).max(64)
        } else {
            // geometric decay r^k below 1e-18 relative
            let needed = (1e-18f64.ln() / r.ln()).ceil() as usize;
            needed.clamp(64, 16384)
        };

        let mut basis = Vec::with_capacity(zeros.len());
        let mut prefix = vec![C64::new(0.0, 0.0); n_trunc];
        prefix[0] = C64::new(1.0, 0.0);
        for (k, &a) in zeros.iter().enumerate() {
            let norm = (1.0 - a.norm_sqr()).sqrt();
            let kernel = cauchy_kernel(a, n_trunc);
            let mut coeffs = mul_trunc(&prefix, &kernel, n_trunc);
            for c in &mut coeffs {
                *c *= norm;
            }
            basis.push(TaylorVector::new(coeffs).expect("non-empty").with_origin(format!("tmw_{k}")));
            prefix = mul_trunc(&prefix, &mobius_factor(a, n_trunc), n_trunc);
        }

        let mut symbol_coeffs = vec![C64::new(0.0, 0.0); n_trunc];
        symbol_coeffs[0] = C64::new(1.0, 0.0);
        for &a in zeros {
            symbol_coeffs = mul_trunc(&symbol_coeffs, &blaschke_factor_coeffs(a, n_trunc), n_trunc);
        }
        let symbol = TaylorVector::new(symbol_coeffs).expect("non-empty");

        Ok(ModelSpace { zeros: zeros.to_vec(), basis, symbol, n_trunc })
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn truncation(&self) -> usize {
        self.n_trunc
    }

    pub fn symbol(&self) -> &TaylorVector {
        &self.symbol
    }

    pub fn basis(&self) -> &[TaylorVector] {
        &self.basis
    }

    /// S*^m of the symbol, in the shared truncation.
    pub fn orbit_vector(&self, m: usize) -> TaylorVector {
        hardy::shift_down(&self.symbol, m)
    }

    /// Coordinates of f in the orthonormal basis.
    pub fn coords(&self, f: &TaylorVector) -> DVector<C64> {
        DVector::from_iterator(self.degree(), self.basis.iter().map(|g| h2_inner(f, g)))
    }

    /// Reassembles a coordinate vector into a Taylor vector.
    pub fn embed(&self, c: &DVector<C64>) -> TaylorVector {
        let mut acc = TaylorVector::zero(self.n_trunc);
        for (k, g) in self.basis.iter().enumerate() {
            acc = acc.add(&g.scale(c[k]));
        }
        acc
    }

    /// Norm of the component of f orthogonal to the space, relative to |f|.
    /// Computed by explicit subtraction: the Parseval route loses half the
    /// digits to cancellation.
    pub fn projection_residual(&self, f: &TaylorVector) -> f64 {
        let norm = f.h2_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let inside = self.embed(&self.coords(f));
        let len = f.len().max(inside.len());
        let mut acc = 0.0;
        for k in 0..len {
            acc += (f.get(k) - inside.get(k)).norm_sqr();
        }
        acc.sqrt() / norm
    }

    /// Matrix of the restricted backward shift in the orthonormal basis.
    pub fn xb_matrix(&self) -> DMatrix<C64> {
        let d = self.degree();
        DMatrix::from_fn(d, d, |i, j| {
            h2_inner(&hardy::shift_down(&self.basis[j], 1), &self.basis[i])
        })
    }

    /// Matrix of the compression of multiplication by z^power.
    pub fn compressed_multiplication(&self, power: usize) -> DMatrix<C64> {
        let d = self.degree();
        DMatrix::from_fn(d, d, |i, j| {
            h2_inner(&hardy::shift_up(&self.basis[j], power), &self.basis[i])
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_orthonormal() {
        let ms = ModelSpace::new(&[
            C64::new(0.5, 0.2),
            C64::new(0.5, 0.2), // repeated zero
            C64::new(-0.3, 0.4),
        ])
        .unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = h2_inner(&ms.basis()[i], &ms.basis()[j]);
                assert!((got - C64::new(want, 0.0)).norm() < 1e-13, "({i},{j})");
            }
        }
    }

    #[test]
    fn orbit_vectors_live_in_the_space() {
        let ms = ModelSpace::new(&[C64::new(0.4, -0.1), C64::new(0.2, 0.3)]).unwrap();
        for m in 1..=6 {
            let v = ms.orbit_vector(m);
            assert!(ms.projection_residual(&v) < 1e-12, "orbit index {m}");
        }
        // the symbol itself is not in its model space
        assert!(ms.projection_residual(ms.symbol()) > 0.5);
    }

    #[test]
    fn z_cubed_model_space_is_polynomials_below_degree_three() {
        let ms = ModelSpace::new(&[C64::new(0.0, 0.0); 3]).unwrap();
        assert_eq!(ms.degree(), 3);
        for k in 0..3 {
            let mono = TaylorVector::monomial(k, 8);
            assert!(ms.projection_residual(&mono) < 1e-13);
        }
        let z3 = TaylorVector::monomial(3, 8);
        assert!(ms.projection_residual(&z3) > 0.99);
    }

    #[test]
    fn xb_matrix_agrees_with_coefficient_shift() {
        let ms = ModelSpace::new(&[C64::new(0.3, 0.3), C64::new(-0.5, 0.0)]).unwrap();
        let x = ms.xb_matrix();
        for m in 1..=3 {
            let v = ms.orbit_vector(m);
            let shifted = ms.orbit_vector(m + 1);
            let got = &x * ms.coords(&v);
            let want = ms.coords(&shifted);
            assert!((got - want).norm() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn compressed_shift_adjoint_is_backward_shift() {
        let ms = ModelSpace::new(&[C64::new(0.25, -0.35), C64::new(0.1, 0.6)]).unwrap();
        let a_z = ms.compressed_multiplication(1);
        let x = ms.xb_matrix();
        assert!((a_z.adjoint() - x).norm() < 1e-12);
    }

    #[test]
    fn embed_inverts_coords() {
        let ms = ModelSpace::new(&[C64::new(0.45, 0.15)]).unwrap();
        let v = ms.orbit_vector(1);
        let back = ms.embed(&ms.coords(&v));
        let diff: f64 =
            (0..v.len()).map(|k| (v.get(k) - back.get(k)).norm_sqr()).sum::<f64>().sqrt();
        assert!(diff < 1e-12);
    }

    #[test]
    fn zeros_near_boundary_rejected() {
        assert!(matches!(
            ModelSpace::new(&[C64::new(0.99, 0.0)]),
            Err(SpaceError::ZerosTooCloseToBoundary(_))
        ));
    }
}
