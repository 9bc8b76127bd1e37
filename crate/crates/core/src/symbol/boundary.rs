//! Boundary sampling of symbols and the outer-function constructor.

use super::{ModulusProfile, SymbolError, SymbolKind, SymbolSpec};
use crate::fft;
use crate::hardy::TaylorVector;
use crate::C64;

/// Tolerance for |b| exceeding 1 from roundoff; anything above rejects the
/// symbol, anything within clamps rho to zero rather than letting a
/// negative measure through.
pub const NORM_TOL: f64 = 1e-9;

/// Samples of b and of rho = 1 - |b|^2 on the uniform grid.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    size: usize,
    samples: Vec<C64>,
    rho: Vec<f64>,
}

impl BoundaryGrid {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn angle(&self, j: usize) -> f64 {
        fft::grid_angle(j, self.size)
    }

    fn from_samples(samples: Vec<C64>) -> Result<Self, SymbolError> {
        let size = samples.len();
        let max_abs = samples.iter().map(|s| s.norm()).fold(0.0f64, f64::max);
        if max_abs > 1.0 + NORM_TOL {
            return Err(SymbolError::NormExceeded(max_abs));
        }
        let rho = samples
            .iter()
            .map(|s| {
                let r = 1.0 - s.norm_sqr();
                if r < 0.0 {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        Ok(BoundaryGrid { size, samples, rho })
    }
}

fn check_grid_size(size: usize) -> Result<(), SymbolError> {
    if !fft::is_power_of_two(size) || size < 16 {
        return Err(SymbolError::BadGridSize(size));
    }
    Ok(())
}

/// Normalized Blaschke factor with zero at `a`, evaluated at `z`.
fn blaschke_factor(a: C64, z: C64) -> C64 {
    if a.norm() < 1e-15 {
        z
    } else {
        (a.norm() / a) * (a - z) / (C64::new(1.0, 0.0) - a.conj() * z)
    }
}

fn raw_samples(spec: &SymbolSpec, size: usize) -> Result<Vec<C64>, SymbolError> {
    match &spec.kind {
        SymbolKind::Blaschke { zeros } => Ok((0..size)
            .map(|j| {
                let z = C64::new(0.0, fft::grid_angle(j, size)).exp();
                zeros.iter().fold(C64::new(1.0, 0.0), |acc, &a| acc * blaschke_factor(a, z))
            })
            .collect()),
        SymbolKind::Polynomial { coeffs } => {
            let v = TaylorVector::new(coeffs.clone())
                .map_err(|e| SymbolError::Schema(e.to_string()))?;
            Ok((0..size)
                .map(|j| v.eval(C64::new(0.0, fft::grid_angle(j, size)).exp()))
                .collect())
        }
        SymbolKind::OuterFromModulus { profile } => Ok(profile.outer_boundary(size)?.samples),
        SymbolKind::Product { factors } => {
            if factors.is_empty() {
                return Err(SymbolError::EmptyProduct);
            }
            let mut acc = vec![C64::new(1.0, 0.0); size];
            for f in factors {
                let part = raw_samples(f, size)?;
                for (a, p) in acc.iter_mut().zip(&part) {
                    *a *= p;
                }
            }
            Ok(acc)
        }
        SymbolKind::Scaled { scale, factor } => {
            let mut part = raw_samples(factor, size)?;
            for p in &mut part {
                *p *= scale;
            }
            Ok(part)
        }
    }
}

/// Samples b and rho = 1 - |b|^2 on the uniform `size`-point grid.
pub fn evaluate_boundary(spec: &SymbolSpec, size: usize) -> Result<BoundaryGrid, SymbolError> {
    check_grid_size(size)?;
    spec.validate()?;
    BoundaryGrid::from_samples(raw_samples(spec, size)?)
}

/// Builds the outer function F with |F| = w on the grid and returns its
/// boundary samples together with Taylor coefficients up to size/2.
pub fn construct_outer_from_modulus(
    profile: &ModulusProfile,
    size: usize,
) -> Result<(BoundaryGrid, TaylorVector), SymbolError> {
    check_grid_size(size)?;
    let boundary = profile.outer_boundary(size)?;
    let grid = BoundaryGrid::from_samples(boundary.samples)?;
    let (taylor, _aliasing) = super::taylor_coefficients(&grid, size / 2)?;
    Ok((grid, taylor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{ModulusArc, SineFactor};
    use std::f64::consts::PI;

    #[test]
    fn inner_symbol_has_unimodular_samples_and_zero_rho() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.0, 0.0); 3]);
        let grid = evaluate_boundary(&spec, 64).unwrap();
        for (j, s) in grid.samples().iter().enumerate() {
            assert!((s.norm() - 1.0).abs() <= 1e-12, "j={j}");
            assert!(grid.rho()[j].abs() <= 1e-12);
        }
    }

    #[test]
    fn generic_blaschke_is_unimodular() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.5, 0.2), C64::new(-0.3, 0.6)]);
        let grid = evaluate_boundary(&spec, 128).unwrap();
        for s in grid.samples() {
            assert!((s.norm() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn half_one_plus_z_rho_is_sin_squared() {
        let spec = SymbolSpec::polynomial(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);
        let grid = evaluate_boundary(&spec, 64).unwrap();
        for j in 0..64 {
            let want = (grid.angle(j) / 2.0).sin().powi(2);
            assert!((grid.rho()[j] - want).abs() < 1e-12, "j={j}");
        }
    }

    #[test]
    fn constant_outer_has_constant_modulus() {
        let spec = SymbolSpec::outer(ModulusProfile::PiecewiseConstant { default: 0.5, arcs: vec![] });
        let grid = evaluate_boundary(&spec, 64).unwrap();
        for s in grid.samples() {
            assert!((s.norm() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn norm_violation_is_rejected() {
        let spec = SymbolSpec::polynomial(vec![C64::new(1.0, 0.0), C64::new(0.5, 0.0)]);
        assert!(matches!(evaluate_boundary(&spec, 64), Err(SymbolError::NormExceeded(_))));
    }

    #[test]
    fn grid_size_must_be_power_of_two() {
        let spec = SymbolSpec::blaschke(vec![C64::new(0.0, 0.0)]);
        assert!(matches!(evaluate_boundary(&spec, 48), Err(SymbolError::BadGridSize(48))));
        assert!(matches!(evaluate_boundary(&spec, 8), Err(SymbolError::BadGridSize(8))));
    }

    #[test]
    fn outer_constructor_matches_direct_polynomial() {
        // w = |cos(theta/2)| is the boundary modulus of (1+z)/2
        let profile = ModulusProfile::SinePowers {
            scale: 0.5,
            sine_powers: vec![SineFactor { theta0: PI, power: 1.0 }],
        };
        let (_grid, taylor) = construct_outer_from_modulus(&profile, 4096).unwrap();
        assert!((taylor.get(0) - C64::new(0.5, 0.0)).norm() < 1e-8);
        assert!((taylor.get(1) - C64::new(0.5, 0.0)).norm() < 1e-8);
        for k in 2..32 {
            assert!(taylor.get(k).norm() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn two_arc_even_outer_has_even_coefficients() {
        let profile = ModulusProfile::PiecewiseConstant {
            default: 0.5,
            arcs: vec![
                ModulusArc { arc: [-PI / 4.0, PI / 4.0], value: 1.0 },
                ModulusArc { arc: [3.0 * PI / 4.0, 5.0 * PI / 4.0], value: 1.0 },
            ],
        };
        let (_grid, taylor) = construct_outer_from_modulus(&profile, 4096).unwrap();
        for k in (1..256).step_by(2) {
            assert!(taylor.get(k).norm() < 1e-8, "odd coefficient {k}");
        }
        assert!(taylor.get(0).norm() > 0.1);
    }
}
