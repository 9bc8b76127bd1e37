//! Truncated Hardy-space linear algebra.
//!
//! Elements of H^2 are carried as truncated Taylor coefficient vectors.
//! The co-analytic Toeplitz action never raises degree, so it is exact at
//! any truncation; the analytic action raises degree by deg(b) and is made
//! exact by reserving headroom rows. These are the only two truncation
//! regimes in the crate, and both are surfaced explicitly.

use crate::fft;
use crate::C64;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HardyError {
    #[error("forward shift overflow: nonzero coefficient would pass degree {0} (reserve headroom)")]
    ShiftOverflow(usize),
    #[error("empty coefficient vector")]
    Empty,
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
}

/// Truncated power-series coefficient vector: the working representation of
/// H^2 elements.
///
/// `tail_energy` is an upper bound on the squared H^2 norm of the
/// coefficients this representation discarded (0 for exactly known
/// polynomials; the aliasing estimate for grid-derived vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorVector {
    coeffs: Vec<C64>,
    origin: Option<String>,
    tail_energy: f64,
}

impl TaylorVector {
    pub fn new(coeffs: Vec<C64>) -> Result<Self, HardyError> {
        if coeffs.is_empty() {
            return Err(HardyError::Empty);
        }
        for (k, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(HardyError::NonFinite(k));
            }
        }
        Ok(Self { coeffs, origin: None, tail_energy: 0.0 })
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| C64::new(x, 0.0)).collect()).expect("non-empty")
    }

    pub fn zero(len: usize) -> Self {
        Self { coeffs: vec![C64::new(0.0, 0.0); len.max(1)], origin: None, tail_energy: 0.0 }
    }

    /// The monomial z^k, stored at length `len` (must satisfy k < len).
    pub fn monomial(k: usize, len: usize) -> Self {
        assert!(k < len);
        let mut v = Self::zero(len);
        v.coeffs[k] = C64::new(1.0, 0.0);
        v
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = Some(origin.into());
        self
    }

    pub fn with_tail_energy(mut self, tail: f64) -> Self {
        self.tail_energy = tail.max(0.0);
        self
    }

    /// Pads with zeros up to `len` (no-op if already at least that long).
    pub fn padded(&self, len: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        if coeffs.len() < len {
            coeffs.resize(len, C64::new(0.0, 0.0));
        }
        Self { coeffs, origin: self.origin.clone(), tail_energy: self.tail_energy }
    }

    pub fn truncated(&self, len: usize) -> Self {
        let len = len.max(1).min(self.coeffs.len());
        let dropped: f64 = self.coeffs[len..].iter().map(|c| c.norm_sqr()).sum();
        Self {
            coeffs: self.coeffs[..len].to_vec(),
            origin: self.origin.clone(),
            tail_energy: self.tail_energy + dropped,
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of z^k; zero beyond the stored range.
    pub fn get(&self, k: usize) -> C64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn origin(&self) -> Option<&str> {
        self.origin.as_deref()
    }

    pub fn tail_energy(&self) -> f64 {
        self.tail_energy
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn h2_norm(&self) -> f64 {
        self.energy().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            origin: self.origin.clone(),
            tail_energy: self.tail_energy * s.norm_sqr(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.len().max(other.len());
        let coeffs = (0..len).map(|k| self.get(k) + other.get(k)).collect();
        Self {
            coeffs,
            origin: None,
            // (a+b)^2 <= 2a^2 + 2b^2 on the discarded tails
            tail_energy: 2.0 * (self.tail_energy + other.tail_energy),
        }
    }

    /// Evaluates the truncated series at a point of the closed disk.
    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Plain H^2 pairing sum f_k conj(g_k) over the common range.
pub fn h2_inner(f: &TaylorVector, g: &TaylorVector) -> C64 {
    let n = f.len().min(g.len());
    (0..n).map(|k| f.get(k) * g.get(k).conj()).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    Forward,
    Backward,
}

/// Coefficient shift. Backward discards the lowest `power` coefficients
/// (irreversibly; callers keep originals if they need both directions).
/// Forward errors if a nonzero coefficient would pass the stored degree.
pub fn shift(f: &TaylorVector, direction: ShiftDirection, power: usize) -> Result<TaylorVector, HardyError> {
    match direction {
        ShiftDirection::Backward => Ok(shift_down(f, power)),
        ShiftDirection::Forward => {
            let n = f.len();
            for k in n.saturating_sub(power)..n {
                if f.get(k).norm() != 0.0 {
                    return Err(HardyError::ShiftOverflow(n - 1));
                }
            }
            let mut coeffs = vec![C64::new(0.0, 0.0); n];
            for k in 0..n.saturating_sub(power) {
                coeffs[k + power] = f.get(k);
            }
            Ok(TaylorVector { coeffs, origin: f.origin.clone(), tail_energy: f.tail_energy })
        }
    }
}

/// Backward shift by `power`, shrinking the representation.
pub fn shift_down(f: &TaylorVector, power: usize) -> TaylorVector {
    if power >= f.len() {
        return TaylorVector::zero(1).with_tail_energy(f.tail_energy);
    }
    TaylorVector {
        coeffs: f.coeffs[power..].to_vec(),
        origin: f.origin.clone(),
        tail_energy: f.tail_energy,
    }
}

/// Forward shift by `power`, growing the representation (no data loss).
pub fn shift_up(f: &TaylorVector, power: usize) -> TaylorVector {
    let mut coeffs = vec![C64::new(0.0, 0.0); f.len() + power];
    coeffs[power..].copy_from_slice(&f.coeffs);
    TaylorVector { coeffs, origin: f.origin.clone(), tail_energy: f.tail_energy }
}

/// Co-analytic Toeplitz action (T_conj(b) f)_j = sum_k conj(b_k) f_{j+k}.
/// Exact at truncation: the action never raises degree.
pub fn toeplitz_conj_apply(b: &TaylorVector, f: &TaylorVector) -> TaylorVector {
    let n = f.len();
    let coeffs = (0..n)
        .map(|j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..b.len().min(n - j) {
                acc += b.get(k).conj() * f.get(j + k);
            }
            acc
        })
        .collect();
    TaylorVector { coeffs, origin: None, tail_energy: f.tail_energy + b.tail_energy }
}

/// Lower-triangular Toeplitz matrix of multiplication by b, sized
/// (n + headroom) x n so that products with the co-analytic action stay
/// exact on degree < n for polynomial b of degree <= headroom.
pub fn toeplitz_analytic_matrix(b: &TaylorVector, n: usize, headroom: usize) -> DMatrix<C64> {
    let rows = n + headroom;
    DMatrix::from_fn(rows, n, |i, j| if i >= j { b.get(i - j) } else { C64::new(0.0, 0.0) })
}

/// Quadrature pairing <z^j, z^k> in L^2(rho d theta / 2 pi) from boundary
/// samples of rho on the uniform grid.
pub fn weighted_inner(rho: &[f64], j: usize, k: usize) -> C64 {
    let m = rho.len();
    let mut acc = C64::new(0.0, 0.0);
    for (idx, &r) in rho.iter().enumerate() {
        let theta = fft::grid_angle(idx, m);
        let phase = (j as f64 - k as f64) * theta;
        acc += C64::new(0.0, phase).exp() * r;
    }
    acc / (m as f64)
}

/// Analytic projection of rho * f via spectral multiplication, truncated to
/// `n` coefficients.
pub fn cauchy_transform(rho: &[f64], f: &TaylorVector, n: usize) -> TaylorVector {
    let m = rho.len();
    assert!(f.len() <= m, "truncation exceeds grid size");
    let mut samples = fft::evaluate_on_grid(f.coeffs(), m);
    for (s, &r) in samples.iter_mut().zip(rho) {
        *s *= r;
    }
    let bins = fft::analysis(&samples);
    let n = n.min(m);
    let tail: f64 = bins[n..].iter().map(|c| c.norm_sqr()).sum();
    TaylorVector { coeffs: bins[..n].to_vec(), origin: None, tail_energy: tail }
}

/// Residual of the intertwining relation between the Cauchy transform and
/// the backward shift: || P(rho conj(z) f) - S* P(rho f) ||_2.
pub fn intertwining_residual(rho: &[f64], f: &TaylorVector, n: usize) -> f64 {
    let m = rho.len();
    let mut samples = fft::evaluate_on_grid(f.coeffs(), m);
    for (idx, s) in samples.iter_mut().enumerate() {
        let theta = fft::grid_angle(idx, m);
        *s *= rho[idx] * C64::new(0.0, -theta).exp();
    }
    let lhs_bins = fft::analysis(&samples);
    let lhs = &lhs_bins[..n.min(m)];
    let rhs = shift_down(&cauchy_transform(rho, f, n.min(m) + 1), 1);
    let mut acc = 0.0;
    for (k, l) in lhs.iter().enumerate() {
        acc += (l - rhs.get(k)).norm_sqr();
    }
    acc.sqrt()
}

/// H^2 pairing of shifted coefficient tails,
/// <S*^m b, S*^n b>_2 = sum_j b_{m+j} conj(b_{n+j}),
/// together with the Cauchy-Schwarz bound on the part lost to truncation.
pub fn tail_inner(b: &TaylorVector, m: usize, n: usize) -> (C64, f64) {
    let len = b.len();
    let hi = m.max(n);
    let mut acc = C64::new(0.0, 0.0);
    if hi < len {
        for j in 0..(len - hi) {
            acc += b.get(m + j) * b.get(n + j).conj();
        }
    }
    (acc, b.tail_energy)
}
