//! Fourier analysis of boundary data: Taylor coefficients, moments of
//! |b|^2, parity classification, and the inner/extremality diagnostics.

use super::{BoundaryGrid, SymbolError, SymbolSpec};
use crate::fft;
use crate::hardy::TaylorVector;
use crate::C64;
use serde::{Deserialize, Serialize};

/// The numbers m_k = <z^k, |b|^2>_2.
///
/// Orientation convention, fixed here once and consumed by every
/// downstream formula through [`MomentSequence::signed`]:
///
///   m_k = (1/2 pi) integral of e^{+ i k theta} |b(e^{i theta})|^2 d theta,
///
/// equivalently m_k = sum_j b_j conj(b_{j+k}), and m_{-k} = conj(m_k).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    values: Vec<C64>,
}

impl MomentSequence {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    /// m_k for k >= 0 (zero beyond the computed order).
    pub fn get(&self, k: usize) -> C64 {
        self.values.get(k).copied().unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    /// m_k for any sign of k, via conjugate symmetry of real |b|^2.
    pub fn signed(&self, k: i64) -> C64 {
        if k >= 0 {
            self.get(k as usize)
        } else {
            self.get((-k) as usize).conj()
        }
    }

    /// m_0 = squared L^2 norm of b.
    pub fn norm_sqr(&self) -> f64 {
        self.get(0).re
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn from_values(values: Vec<C64>) -> Self {
        MomentSequence { values }
    }
}

/// Taylor coefficients b_0..b_order of the sampled symbol via discrete
/// Fourier analysis, plus the aliasing indicator: the energy carried by the
/// discarded high bins.
pub fn taylor_coefficients(
    grid: &BoundaryGrid,
    order: usize,
) -> Result<(TaylorVector, f64), SymbolError> {
    let m = grid.size();
    if order > m / 2 {
        return Err(SymbolError::OrderTooLarge(order, m));
    }
    let bins = fft::analysis(grid.samples());
    let aliasing: f64 = bins[(order + 1).min(m)..].iter().map(|c| c.norm_sqr()).sum();
    let taylor = TaylorVector::new(bins[..=order].to_vec())
        .map_err(|e| SymbolError::Schema(e.to_string()))?
        .with_tail_energy(aliasing);
    Ok((taylor, aliasing))
}

/// Moments m_k = <z^k, |b|^2>_2 for k = 0..order by spectral quadrature.
pub fn moments_of_modulus_squared(
    grid: &BoundaryGrid,
    order: usize,
) -> Result<MomentSequence, SymbolError> {
    let m = grid.size();
    if order > m / 2 {
        return Err(SymbolError::OrderTooLarge(order, m));
    }
    let sq: Vec<C64> = grid.samples().iter().map(|s| C64::new(s.norm_sqr(), 0.0)).collect();
    let bins = fft::analysis(&sq);
    // analysis bin k is (1/2pi) int e^{-ik theta}|b|^2; our convention is the
    // conjugate.
    let values = bins[..=order].iter().map(|c| c.conj()).collect();
    Ok(MomentSequence { values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
    Neither,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParityReport {
    pub class: Parity,
    /// Energy fraction in odd-index coefficients (obstruction to evenness).
    pub even_defect: f64,
    /// Energy fraction in even-index coefficients (obstruction to oddness).
    pub odd_defect: f64,
}

/// Classifies a coefficient vector as even, odd or neither by the energy in
/// the wrong-parity indices relative to the total.
pub fn parity_classify(coeffs: &TaylorVector, tol: f64) -> Result<ParityReport, SymbolError> {
    let total = coeffs.energy();
    if total == 0.0 {
        return Err(SymbolError::ZeroVector);
    }
    let odd_energy: f64 =
        (1..coeffs.len()).step_by(2).map(|k| coeffs.get(k).norm_sqr()).sum();
    let even_energy = total - odd_energy;
    let even_defect = odd_energy / total;
    let odd_defect = even_energy / total;
    let class = if even_defect <= tol * tol {
        Parity::Even
    } else if odd_defect <= tol * tol {
        Parity::Odd
    } else {
        Parity::Neither
    };
    Ok(ParityReport { class, even_defect, odd_defect })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InnerReport {
    pub inner: bool,
    /// max over the grid of | |b|^2 - 1 |.
    pub max_deviation: f64,
}

/// Inner iff |b| = 1 across the grid within `tol`.
pub fn inner_diagnostic(grid: &BoundaryGrid, tol: f64) -> InnerReport {
    let max_deviation = grid
        .samples()
        .iter()
        .map(|s| (s.norm_sqr() - 1.0).abs())
        .fold(0.0f64, f64::max);
    InnerReport { inner: max_deviation <= tol, max_deviation }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalityVerdict {
    Extreme,
    Nonextreme,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExtremalityReport {
    pub verdict: ExtremalityVerdict,
    /// Estimates of (1/2 pi) int log rho at successively doubled grids.
    pub estimates: Vec<f64>,
    /// Fraction of samples with rho at the machine floor, per level.
    pub zero_fractions: Vec<f64>,
    pub inner_short_circuit: bool,
}

const RHO_FLOOR: f64 = 1e-14;

/// Heuristic extremality diagnostic: estimates int log(1 - |b|^2) on
/// refined grids. Divergence to -infinity (or rho vanishing on a resolved
/// arc) indicates an extreme point; convergence indicates nonextreme. The
/// declared class on the spec always overrides this verdict downstream.
pub fn extremality_diagnostic(
    spec: &SymbolSpec,
    base_size: usize,
    levels: usize,
) -> Result<ExtremalityReport, SymbolError> {
    let levels = levels.max(3);
    let base_grid = super::evaluate_boundary(spec, base_size)?;
    if inner_diagnostic(&base_grid, 1e-10).inner {
        return Ok(ExtremalityReport {
            verdict: ExtremalityVerdict::Extreme,
            estimates: vec![],
            zero_fractions: vec![],
            inner_short_circuit: true,
        });
    }

    let mut estimates = Vec::with_capacity(levels);
    let mut zero_fractions = Vec::with_capacity(levels);
    for level in 0..levels {
        let m = base_size << level;
        let grid = super::evaluate_boundary(spec, m)?;
        let mut sum = 0.0;
        let mut zeros = 0usize;
        for &r in grid.rho() {
            if r <= RHO_FLOOR {
                zeros += 1;
            } else {
                sum += r.ln();
            }
        }
        estimates.push(sum / m as f64);
        zero_fractions.push(zeros as f64 / m as f64);
    }

    let zf_last = *zero_fractions.last().unwrap();
    let zf_first = zero_fractions[0];
    let verdict = if zf_last >= 0.01 && zf_first >= 0.5 * zf_last {
        // rho vanishes on an arc the grid resolves at every level
        ExtremalityVerdict::Extreme
    } else {
        let diffs: Vec<f64> =
            estimates.windows(2).map(|w| w[1] - w[0]).collect();
        let d_first = diffs.first().copied().unwrap_or(0.0);
        let d_last = diffs.last().copied().unwrap_or(0.0);
        if d_last.abs() <= 0.6 * d_first.abs() + 1e-9 && d_last.abs() < 0.05 {
            ExtremalityVerdict::Nonextreme
        } else if d_last < -0.01 && d_last.abs() >= 0.8 * d_first.abs() {
            // decrements not shrinking: linear divergence in the level
            ExtremalityVerdict::Extreme
        } else {
            ExtremalityVerdict::Inconclusive
        }
    };

    Ok(ExtremalityReport { verdict, estimates, zero_fractions, inner_short_circuit: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{evaluate_boundary, ModulusArc, ModulusProfile};
    use std::f64::consts::PI;

    fn half_one_plus_z() -> SymbolSpec {
        SymbolSpec::polynomial(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)])
    }

    fn two_arc_even() -> SymbolSpec {
        SymbolSpec::outer(ModulusProfile::PiecewiseConstant {
            default: 0.5,
            arcs: vec![
                ModulusArc { arc: [-PI / 4.0, PI / 4.0], value: 1.0 },
                ModulusArc { arc: [3.0 * PI / 4.0, 5.0 * PI / 4.0], value: 1.0 },
            ],
        })
    }

    #[test]
    fn taylor_of_z_cubed() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.0, 0.0); 3]);
        let grid = evaluate_boundary(&spec, 64).unwrap();
        let (t, aliasing) = taylor_coefficients(&grid, 8).unwrap();
        for k in 0..=8 {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((t.get(k) - C64::new(want, 0.0)).norm() < 1e-13, "k={k}");
        }
        assert!(aliasing < 1e-24);
    }

    #[test]
    fn taylor_of_half_one_plus_z() {
        let grid = evaluate_boundary(&half_one_plus_z(), 64).unwrap();
        let (t, _) = taylor_coefficients(&grid, 8).unwrap();
        assert!((t.get(0) - C64::new(0.5, 0.0)).norm() < 1e-13);
        assert!((t.get(1) - C64::new(0.5, 0.0)).norm() < 1e-13);
        for k in 2..=8 {
            assert!(t.get(k).norm() < 1e-13);
        }
    }

    #[test]
    fn moments_of_inner_symbol() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.4, 0.3), C64::new(-0.2, 0.0)]);
        let grid = evaluate_boundary(&spec, 256).unwrap();
        let m = moments_of_modulus_squared(&grid, 16).unwrap();
        assert!((m.get(0) - C64::new(1.0, 0.0)).norm() < 1e-12);
        for k in 1..=16 {
            assert!(m.get(k).norm() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn moments_of_half_one_plus_z() {
        let grid = evaluate_boundary(&half_one_plus_z(), 256).unwrap();
        let m = moments_of_modulus_squared(&grid, 8).unwrap();
        assert!((m.get(0) - C64::new(0.5, 0.0)).norm() < 1e-13);
        assert!((m.get(1) - C64::new(0.25, 0.0)).norm() < 1e-13);
        for k in 2..=8 {
            assert!(m.get(k).norm() < 1e-13, "k={k}");
        }
        // orientation sanity: m_1 = sum b_j conj(b_{j+1}) = 1/4 with +k phase
        assert!((m.signed(-1) - C64::new(0.25, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn even_symbol_has_vanishing_odd_moments() {
        let grid = evaluate_boundary(&two_arc_even(), 1024).unwrap();
        let m = moments_of_modulus_squared(&grid, 12).unwrap();
        for k in (1..=12).step_by(2) {
            assert!(m.get(k).norm() < 1e-12, "odd moment {k}");
        }
        assert!(m.get(2).norm() > 1e-3, "even moments should be alive");
    }

    #[test]
    fn moment_coefficient_consistency() {
        // m_n from quadrature equals sum_k b_k conj(b_{k+n}), converging
        // under grid refinement
        let mut worst = [0.0f64; 2];
        for (level, m_sz) in [4096usize, 8192].iter().enumerate() {
            let grid = evaluate_boundary(&two_arc_even(), *m_sz).unwrap();
            let m = moments_of_modulus_squared(&grid, 6).unwrap();
            let (b, _) = taylor_coefficients(&grid, m_sz / 2).unwrap();
            for n in 0..=6 {
                let direct: C64 = (0..b.len()).map(|k| b.get(k) * b.get(k + n).conj()).sum();
                worst[level] = worst[level].max((m.get(n) - direct).norm());
            }
        }
        assert!(worst[0] <= 1e-3, "coarse level disagrees: {}", worst[0]);
        assert!(worst[1] < worst[0], "no convergence: {:?}", worst);
    }

    #[test]
    fn parseval_against_quadrature_under_refinement() {
        // sum |b_k|^2 approaches m_0 at the O(1/M) rate set by the
        // coefficient tail of the arc symbol
        let mut last = f64::INFINITY;
        for logm in [15usize, 16, 17] {
            let m_sz = 1usize << logm;
            let grid = evaluate_boundary(&two_arc_even(), m_sz).unwrap();
            let m = moments_of_modulus_squared(&grid, 4).unwrap();
            let (b, _) = taylor_coefficients(&grid, m_sz / 2).unwrap();
            let diff = (b.energy() - m.norm_sqr()).abs();
            assert!(diff < last, "not decreasing at M=2^{logm}");
            last = diff;
        }
        assert!(last <= 1e-6, "parseval defect {last} at the finest grid");
    }

    #[test]
    fn parity_cases() {
        let odd = TaylorVector::new(vec![
            C64::new(0.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.25, 0.0),
        ])
        .unwrap();
        assert_eq!(parity_classify(&odd, 1e-9).unwrap().class, Parity::Odd);

        let even = TaylorVector::new(vec![
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.3, 0.0),
        ])
        .unwrap();
        assert_eq!(parity_classify(&even, 1e-9).unwrap().class, Parity::Even);

        let neither =
            TaylorVector::new(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)]).unwrap();
        let rep = parity_classify(&neither, 1e-9).unwrap();
        assert_eq!(rep.class, Parity::Neither);
        assert!((rep.even_defect - 0.5).abs() < 1e-15);
        assert!((rep.odd_defect - 0.5).abs() < 1e-15);

        let zero = TaylorVector::zero(4);
        assert!(parity_classify(&zero, 1e-9).is_err());
    }

    #[test]
    fn inner_diagnostic_cases() {
        let blaschke = SymbolSpec::blaschke(vec![C64::new(0.3, -0.5)]);
        let grid = evaluate_boundary(&blaschke, 128).unwrap();
        let rep = inner_diagnostic(&grid, 1e-10);
        assert!(rep.inner);
        assert!(rep.max_deviation <= 1e-12);

        let grid = evaluate_boundary(&half_one_plus_z(), 128).unwrap();
        let rep = inner_diagnostic(&grid, 1e-10);
        assert!(!rep.inner);
        assert!((rep.max_deviation - 1.0).abs() < 1e-12, "deviation 1 at theta = pi");

        let grid = evaluate_boundary(&two_arc_even(), 1024).unwrap();
        let rep = inner_diagnostic(&grid, 1e-10);
        assert!(!rep.inner);
        assert!((rep.max_deviation - 0.75).abs() < 1e-9, "1 - 1/4 on the half arcs");
    }

    #[test]
    fn extremality_nonextreme_polynomial() {
        let rep = extremality_diagnostic(&half_one_plus_z(), 1024, 4).unwrap();
        assert_eq!(rep.verdict, ExtremalityVerdict::Nonextreme);
        let last = *rep.estimates.last().unwrap();
        assert!((last - (-2.0 * 2.0f64.ln())).abs() < 0.01, "limit -2 log 2, got {last}");
    }

    #[test]
    fn extremality_inner_short_circuit() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.2, 0.1), C64::new(0.0, 0.0)]);
        let rep = extremality_diagnostic(&spec, 256, 3).unwrap();
        assert_eq!(rep.verdict, ExtremalityVerdict::Extreme);
        assert!(rep.inner_short_circuit);
    }

    #[test]
    fn extremality_two_arc_outer_diverges() {
        let rep = extremality_diagnostic(&two_arc_even(), 1024, 3).unwrap();
        assert_eq!(rep.verdict, ExtremalityVerdict::Extreme);
        assert!(!rep.inner_short_circuit);
        assert!(rep.zero_fractions.iter().all(|&z| z > 0.4), "rho = 0 on half the circle");
    }
}
