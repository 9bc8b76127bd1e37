//! The H(b) geometry: Gram matrices of the backward-shift orbit by
//! independent methods, general H(b) inner products, the restricted shift
//! and its adjoint, and the defect-identity suite.
//!
//! Orbit indices are 1-based throughout: the orbit is {S*^n b : n >= 1},
//! matching the orthogonality conditions downstream, which never use n = 0
//! (b itself need not lie in H(b)).

mod defect;
mod model;
mod range;

pub use defect::{verify_defect_identities, DefectReport};
pub use model::ModelSpace;
pub use range::{HbContext, RangeRep};

use crate::hardy::{self, TaylorVector};
use crate::symbol::MomentSequence;
use crate::C64;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("construction requires an extreme symbol (declared class is nonextreme)")]
    NonextremeDeclared,
    #[error("orbit vector {index} lies outside the numerical range of the defect operator: residual {residual:.3e} > {threshold:.3e} (truncation too small)")]
    RangeResidual { index: usize, residual: f64, threshold: f64 },
    #[error("vector outside the numerical range: residual {residual:.3e} > {threshold:.3e}")]
    VectorOutsideRange { residual: f64, threshold: f64 },
    #[error("blaschke zeros too close to the boundary for the exact representation (max |a| = {0})")]
    ZerosTooCloseToBoundary(f64),
    #[error("orbit size {orbit} needs at least {needed} Taylor coefficients, have {have}")]
    NotEnoughCoefficients { orbit: usize, needed: usize, have: usize },
    #[error(transparent)]
    Hardy(#[from] hardy::HardyError),
}

/// Which of the independent constructions produced a Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GramMethod {
    MomentFormula,
    ClosedForm,
    PseudoinverseOracle,
    /// Exact finite-dimensional model-space route (finite Blaschke only).
    ExactModel,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct GramMeta {
    pub truncation: usize,
    pub spectral_cutoff: Option<f64>,
    pub max_range_residual: Option<f64>,
}

/// Hermitian PSD matrix G(i, j) = <S*^i b, S*^j b>_b, i, j = 1..n_orbit.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    mat: DMatrix<C64>,
    method: GramMethod,
    symbol: Option<String>,
    meta: GramMeta,
}

impl GramMatrix {
    fn new(mat: DMatrix<C64>, method: GramMethod, symbol: Option<String>, meta: GramMeta) -> Self {
        GramMatrix { mat, method, symbol, meta }
    }

    pub fn n_orbit(&self) -> usize {
        self.mat.nrows()
    }

    /// Entry at 1-based orbit indices.
    pub fn orbit(&self, i: usize, j: usize) -> C64 {
        assert!(i >= 1 && j >= 1, "orbit indices are 1-based");
        self.mat[(i - 1, j - 1)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn method(&self) -> GramMethod {
        self.method
    }

    pub fn symbol(&self) -> Option<&str> {
        self.symbol.as_deref()
    }

    pub fn meta(&self) -> &GramMeta {
        &self.meta
    }

    pub fn hermitian_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> =
            nalgebra::SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn max_abs_diff(&self, other: &GramMatrix) -> f64 {
        assert_eq!(self.n_orbit(), other.n_orbit());
        let mut worst = 0.0f64;
        for i in 0..self.mat.nrows() {
            for j in 0..self.mat.ncols() {
                worst = worst.max((self.mat[(i, j)] - other.mat[(i, j)]).norm());
            }
        }
        worst
    }
}

/// S*^m b as a coefficient vector.
pub fn orbit_vector(b: &TaylorVector, m: usize) -> TaylorVector {
    hardy::shift_down(b, m)
}

/// The reproducing kernel of H(b) at the origin, 1 - conj(b(0)) b.
pub fn kernel_at_zero(b: &TaylorVector) -> TaylorVector {
    let scaled = b.scale(-b.get(0).conj());
    let mut coeffs: Vec<C64> = scaled.coeffs().to_vec();
    coeffs[0] += 1.0;
    TaylorVector::new(coeffs).expect("non-empty")
}

/// The restricted backward shift X_b acting on coefficient vectors.
pub fn apply_xb(f: &TaylorVector) -> TaylorVector {
    hardy::shift_down(f, 1)
}

/// The adjoint X_b^* f = S f - <f, S*b>_b b.
pub fn apply_xb_star(
    f: &TaylorVector,
    b: &TaylorVector,
    ctx: &HbContext,
) -> Result<TaylorVector, SpaceError> {
    let s_b = orbit_vector(b, 1);
    let coeff = ctx.hb_inner(f, &s_b)?;
    Ok(hardy::shift_up(f, 1).add(&b.scale(-coeff)))
}

/// The pairing of the co-analytic images of two orbit vectors, expressed
/// through moments of |b|^2: for m, n >= 1,
///   <T_conj(b) S*^m b, T_conj(b) S*^n b> = -m_{n-m}  (m < n),
/// the conjugate of that for m > n, and 1 - m_0 on the diagonal.
pub fn conjugate_pair_term(moments: &MomentSequence, m: usize, n: usize) -> C64 {
    assert!(m >= 1 && n >= 1);
    if m == n {
        C64::new(1.0 - moments.norm_sqr(), 0.0)
    } else {
        -moments.signed(n as i64 - m as i64)
    }
}

fn require_extreme(extreme: bool) -> Result<(), SpaceError> {
    if extreme {
        Ok(())
    } else {
        Err(SpaceError::NonextremeDeclared)
    }
}

/// Gram matrix from the inner-product decomposition: H^2 tail pairing plus
/// the moment term. Requires an extreme symbol (the moment form of the
/// co-analytic pairing rests on the density of polynomials in L^2(rho)).
pub fn gram_via_moments(
    b: &TaylorVector,
    moments: &MomentSequence,
    n_orbit: usize,
    extreme: bool,
) -> Result<GramMatrix, SpaceError> {
    require_extreme(extreme)?;
    let mut mat = DMatrix::zeros(n_orbit, n_orbit);
    for i in 1..=n_orbit {
        for j in i..=n_orbit {
            let (tail, _) = hardy::tail_inner(b, i, j);
            let v = tail + conjugate_pair_term(moments, i, j);
            mat[(i - 1, j - 1)] = v;
            mat[(j - 1, i - 1)] = v.conj();
        }
    }
    let meta = GramMeta { truncation: b.len(), ..Default::default() };
    Ok(GramMatrix::new(mat, GramMethod::MomentFormula, b.origin().map(String::from), meta))
}

/// Gram matrix from low-order Taylor coefficients only:
/// G(m, n) = delta_{mn} - sum_{k < m} b_k conj(b_{k + n - m}) for m <= n.
pub fn gram_closed_form(
    b: &TaylorVector,
    n_orbit: usize,
    extreme: bool,
) -> Result<GramMatrix, SpaceError> {
    require_extreme(extreme)?;
    if b.len() < 2 * n_orbit {
        return Err(SpaceError::NotEnoughCoefficients {
            orbit: n_orbit,
            needed: 2 * n_orbit,
            have: b.len(),
        });
    }
    let mut mat = DMatrix::zeros(n_orbit, n_orbit);
    for i in 1..=n_orbit {
        for j in i..=n_orbit {
            let d = j - i;
            let mut v = if d == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            for k in 0..i {
                v -= b.get(k) * b.get(k + d).conj();
            }
            mat[(i - 1, j - 1)] = v;
            mat[(j - 1, i - 1)] = v.conj();
        }
    }
    let meta = GramMeta { truncation: b.len(), ..Default::default() };
    Ok(GramMatrix::new(mat, GramMethod::ClosedForm, b.origin().map(String::from), meta))
}

/// Options for the range-space oracle.
#[derive(Debug, Clone, Copy)]
pub struct PinvOptions {
    /// Relative spectral cutoff for the pseudoinverse.
    pub cutoff_rel: f64,
    /// Range-membership residual above which an orbit vector is rejected.
    pub range_threshold: f64,
    /// Extra rows reserved when forming the operator product.
    pub headroom: usize,
}

impl Default for PinvOptions {
    fn default() -> Self {
        PinvOptions { cutoff_rel: 1e-10, range_threshold: 1e-6, headroom: 0 }
    }
}

/// Range-space oracle: G(m, n) = <D^+ S*^m b, S*^n b>_2 with
/// D = I - T_b T_conj(b) truncated at `n_trunc`. Works for any b.
pub fn gram_via_pseudoinverse(
    b: &TaylorVector,
    n_trunc: usize,
    n_orbit: usize,
    opts: PinvOptions,
) -> Result<GramMatrix, SpaceError> {
    let rep = RangeRep::build(b, n_trunc, opts.headroom, opts.cutoff_rel);
    gram_from_range_rep(&rep, b, n_orbit, opts.range_threshold)
}

pub fn gram_from_range_rep(
    rep: &RangeRep,
    b: &TaylorVector,
    n_orbit: usize,
    range_threshold: f64,
) -> Result<GramMatrix, SpaceError> {
    let orbit: Vec<TaylorVector> = (1..=n_orbit).map(|m| orbit_vector(b, m)).collect();
    let mut max_residual = 0.0f64;
    for (idx, v) in orbit.iter().enumerate() {
        let r = rep.range_residual(v);
        max_residual = max_residual.max(r);
        if r > range_threshold {
            return Err(SpaceError::RangeResidual {
                index: idx + 1,
                residual: r,
                threshold: range_threshold,
            });
        }
    }
    let mut mat = DMatrix::zeros(n_orbit, n_orbit);
    for i in 0..n_orbit {
        for j in i..n_orbit {
            let v = rep.pairing(&orbit[i], &orbit[j]);
            mat[(i, j)] = v;
            mat[(j, i)] = v.conj();
        }
    }
    let meta = GramMeta {
        truncation: rep.truncation(),
        spectral_cutoff: Some(rep.cutoff()),
        max_range_residual: Some(max_residual),
    };
    Ok(GramMatrix::new(mat, GramMethod::PseudoinverseOracle, b.origin().map(String::from), meta))
}

/// Exact Gram of the orbit in the model space of a finite Blaschke product.
pub fn gram_exact_model(ms: &ModelSpace, n_orbit: usize) -> GramMatrix {
    let mut mat = DMatrix::zeros(n_orbit, n_orbit);
    let coords: Vec<_> = (1..=n_orbit).map(|m| ms.coords(&ms.orbit_vector(m))).collect();
    for i in 0..n_orbit {
        for j in i..n_orbit {
            let v = coords[j].dotc(&coords[i]);
            mat[(i, j)] = v;
            mat[(j, i)] = v.conj();
        }
    }
    let meta = GramMeta { truncation: ms.truncation(), ..Default::default() };
    GramMatrix::new(mat, GramMethod::ExactModel, ms.symbol().origin().map(String::from), meta)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CyclicityReport {
    pub min_eigenvalue: f64,
    /// Numerical rank of each leading principal minor.
    pub ranks: Vec<usize>,
    pub full_rank: usize,
}

/// Evidence that the orbit stays linearly independent: smallest eigenvalue
/// and the numerical rank profile of the leading principal minors.
pub fn cyclicity_check(g: &GramMatrix, cutoff_rel: f64) -> CyclicityReport {
    let n = g.n_orbit();
    let full = g.eigenvalues();
    let scale = full.last().copied().unwrap_or(0.0).max(0.0);
    let cut = cutoff_rel * scale.max(f64::MIN_POSITIVE);
    let mut ranks = Vec::with_capacity(n);
    for k in 1..=n {
        let minor = g.matrix().view((0, 0), (k, k)).into_owned();
        let ev = nalgebra::SymmetricEigen::new(minor).eigenvalues;
        ranks.push(ev.iter().filter(|&&l| l > cut).count());
    }
    CyclicityReport {
        min_eigenvalue: full.first().copied().unwrap_or(0.0),
        full_rank: *ranks.last().unwrap_or(&0),
        ranks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{
        evaluate_boundary, moments_of_modulus_squared, taylor_coefficients, SymbolSpec,
    };

    fn z_cubed_taylor(n: usize) -> TaylorVector {
        TaylorVector::monomial(3, n)
    }

    fn symbol_data(spec: &SymbolSpec, grid: usize, order: usize) -> (TaylorVector, MomentSequence) {
        let g = evaluate_boundary(spec, grid).unwrap();
        let (t, _) = taylor_coefficients(&g, order).unwrap();
        let m = moments_of_modulus_squared(&g, order).unwrap();
        (t, m)
    }

    #[test]
    fn kernel_at_zero_cases() {
        // b(0) = 0 gives the constant kernel
        let b = z_cubed_taylor(8);
        let k = kernel_at_zero(&b);
        assert_eq!(k.get(0), C64::new(1.0, 0.0));
        assert!(k.coeffs()[1..].iter().all(|c| c.norm() == 0.0));

        // b = (1+z)/2: k_0 = (3/4, -1/4)
        let b = TaylorVector::from_real(&[0.5, 0.5]);
        let k = kernel_at_zero(&b);
        assert!((k.get(0) - C64::new(0.75, 0.0)).norm() < 1e-15);
        assert!((k.get(1) - C64::new(-0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn moments_gram_of_z_cubed_is_identity() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.0, 0.0); 3]);
        let (b, m) = symbol_data(&spec, 64, 16);
        let g = gram_via_moments(&b, &m, 3, true).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.orbit(i, j) - C64::new(want, 0.0)).norm() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn closed_form_matches_moment_form_on_inner_symbol() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.5, 0.1), C64::new(-0.2, 0.4)]);
        let (b, m) = symbol_data(&spec, 512, 256);
        let gm = gram_via_moments(&b, &m, 8, true).unwrap();
        let gc = gram_closed_form(&b, 8, true).unwrap();
        assert!(gm.max_abs_diff(&gc) < 1e-10);
        assert!(gm.hermitian_residual() < 1e-12);
        assert!(gm.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn closed_form_diagonal_is_tail_energy() {
        // G(n, n) = 1 - sum_{k<n} |b_k|^2
        let spec = SymbolSpec::blaschke(vec![C64::new(0.3, -0.3), C64::new(0.6, 0.0)]);
        let (b, _) = symbol_data(&spec, 512, 256);
        let g = gram_closed_form(&b, 6, true).unwrap();
        for n in 1..=6 {
            let want = 1.0 - (0..n).map(|k| b.get(k).norm_sqr()).sum::<f64>();
            assert!((g.orbit(n, n) - C64::new(want, 0.0)).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn nonextreme_declaration_rejected() {
        let b = TaylorVector::from_real(&[0.5, 0.5]).padded(16);
        let m = MomentSequence::from_values(vec![C64::new(0.5, 0.0), C64::new(0.25, 0.0)]);
        assert!(matches!(gram_via_moments(&b, &m, 3, false), Err(SpaceError::NonextremeDeclared)));
        assert!(matches!(gram_closed_form(&b, 3, false), Err(SpaceError::NonextremeDeclared)));
    }

    #[test]
    fn pseudoinverse_gram_identity_for_z_cubed() {
        let b = z_cubed_taylor(32);
        let g = gram_via_pseudoinverse(&b, 32, 3, PinvOptions::default()).unwrap();
        for i in 1..=3 {
            for j in 1..=3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.orbit(i, j) - C64::new(want, 0.0)).norm() < 1e-10, "({i},{j})");
            }
        }
    }

    #[test]
    fn pseudoinverse_gram_matches_closed_form_on_blaschke() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.4, 0.2), C64::new(-0.3, 0.1)]);
        let (b, _) = symbol_data(&spec, 256, 128);
        let g_oracle = gram_via_pseudoinverse(&b, 96, 5, PinvOptions::default()).unwrap();
        let g_closed = gram_closed_form(&b, 5, true).unwrap();
        assert!(g_oracle.max_abs_diff(&g_closed) < 1e-10);
    }

    #[test]
    fn strict_contraction_needs_no_cutoff() {
        // |b| strictly below 1: D is invertible, every vector is in range
        let spec = SymbolSpec::polynomial(vec![C64::new(0.25, 0.0), C64::new(0.25, 0.0)]);
        let (b, _) = symbol_data(&spec, 64, 32);
        let b = b.truncated(24);
        let rep = RangeRep::build(&b, 24, 0, 1e-10);
        assert_eq!(rep.rank(), 24);
        let g = gram_from_range_rep(&rep, &b, 4, 1e-10).unwrap();
        assert!(g.meta().max_range_residual.unwrap() < 1e-12);
    }

    #[test]
    fn cyclicity_rank_saturates_at_degree() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.5, 0.1), C64::new(-0.2, 0.4)]);
        let (b, m) = symbol_data(&spec, 512, 256);
        let g = gram_via_moments(&b, &m, 6, true).unwrap();
        let rep = cyclicity_check(&g, 1e-10);
        assert_eq!(rep.full_rank, 2, "dim of the model space is the degree");
        assert_eq!(rep.ranks, vec![1, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn cyclicity_of_identity_gram() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.0, 0.0); 3]);
        let (b, m) = symbol_data(&spec, 64, 16);
        let g = gram_via_moments(&b, &m, 3, true).unwrap();
        let rep = cyclicity_check(&g, 1e-10);
        assert!((rep.min_eigenvalue - 1.0).abs() < 1e-10);
        assert_eq!(rep.full_rank, 3);
    }
}
