//! Operator-norm verification of the defect identities of the restricted
//! backward shift:
//!
//!   I - X X*           = (S*b) outer (S*b)          (all b)
//!   I - X* X           = k_0 outer k_0              (extreme b)
//!   I - X*^n X^n       = sum_{j<n} (X*^j k_0) outer (X*^j k_0)   (extreme b)
//!
//! In the exact model-space representation the residuals are full operator
//! norms and sit at roundoff. In the truncated representation the raw
//! compression carries an O(1) artifact at the truncation edge (the
//! forward shift inside X* falls off the end of the basis), so residuals
//! are measured on the span of the natural probe family — the orbit
//! vectors and the kernel at zero — which is the subspace every downstream
//! computation lives in. Those residuals shrink under refinement.

use super::range::HbContext;
use super::{kernel_at_zero, orbit_vector};
use crate::hardy::TaylorVector;
use crate::C64;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefectReport {
    pub identity: String,
    pub residual: f64,
    pub truncation: usize,
    pub pass: bool,
}

fn operator_norm(m: &DMatrix<C64>) -> f64 {
    m.clone().svd(false, false).singular_values.iter().copied().fold(0.0f64, f64::max)
}

fn outer(v: &DVector<C64>) -> DMatrix<C64> {
    v * v.adjoint()
}

struct Rep {
    x: DMatrix<C64>,
    s1: DVector<C64>,
    k0: DVector<C64>,
    /// Orthonormal basis of the probe span in H(b) coordinates; None means
    /// measure on the whole representation.
    probe_frame: Option<DMatrix<C64>>,
    truncation: usize,
}

/// Modified Gram-Schmidt returning an orthonormal frame for the column
/// span, dropping directions below a relative floor.
fn orthonormal_frame(cols: Vec<DVector<C64>>) -> Option<DMatrix<C64>> {
    let dim = cols.first()?.len();
    let scale = cols.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut kept: Vec<DVector<C64>> = Vec::new();
    for mut c in cols {
        for q in &kept {
            let proj = q.dotc(&c);
            c -= q * proj;
        }
        if c.norm() > 1e-10 * scale {
            let n = c.norm();
            kept.push(c / C64::new(n, 0.0));
        }
    }
    if kept.is_empty() {
        return None;
    }
    let mut frame = DMatrix::zeros(dim, kept.len());
    for (j, q) in kept.iter().enumerate() {
        frame.set_column(j, q);
    }
    Some(frame)
}

fn build_rep(ctx: &HbContext, b: &TaylorVector) -> Rep {
    let s_b = orbit_vector(b, 1);
    let k0v = kernel_at_zero(b);
    match ctx {
        HbContext::Exact(ms) => Rep {
            x: ms.xb_matrix(),
            s1: ms.coords(&s_b),
            k0: ms.coords(&k0v),
            probe_frame: None,
            truncation: ms.truncation(),
        },
        HbContext::Truncated { rep, .. } => {
            let n_probe = (rep.truncation() / 8).clamp(8, 24);
            let mut probes: Vec<DVector<C64>> =
                (1..=n_probe).map(|m| rep.hb_coords(&orbit_vector(b, m))).collect();
            probes.push(rep.hb_coords(&k0v));
            Rep {
                x: rep.xb_matrix(),
                s1: rep.hb_coords(&s_b),
                k0: rep.hb_coords(&k0v),
                probe_frame: orthonormal_frame(probes),
                truncation: rep.truncation(),
            }
        }
    }
}

impl Rep {
    fn restricted_norm(&self, m: &DMatrix<C64>) -> f64 {
        match &self.probe_frame {
            None => operator_norm(m),
            Some(frame) => operator_norm(&(m * frame)),
        }
    }
}

/// Residuals of the defect identities in the representation the context
/// provides. The kernel-based identities only make sense for extreme b and
/// are skipped otherwise.
pub fn verify_defect_identities(
    ctx: &HbContext,
    b: &TaylorVector,
    n_max: usize,
    extreme: bool,
    tol: f64,
) -> Vec<DefectReport> {
    let rep = build_rep(ctx, b);
    let d = rep.x.nrows();
    let id = DMatrix::<C64>::identity(d, d);
    let mut out = Vec::new();

    let diff = &id - &rep.x * rep.x.adjoint() - outer(&rep.s1);
    let residual = rep.restricted_norm(&diff);
    out.push(DefectReport {
        identity: "rank_one_defect_xx_star".into(),
        residual,
        truncation: rep.truncation,
        pass: residual <= tol,
    });

    if extreme {
        let diff = &id - rep.x.adjoint() * &rep.x - outer(&rep.k0);
        let residual = rep.restricted_norm(&diff);
        out.push(DefectReport {
            identity: "kernel_defect_x_star_x".into(),
            residual,
            truncation: rep.truncation,
            pass: residual <= tol,
        });

        // telescoped defects of the iterated shift
        let mut xs_pow_k0 = rep.k0.clone(); // (X*)^j k_0
        let mut rhs = DMatrix::<C64>::zeros(d, d);
        let mut x_pow = id.clone();
        for n in 1..=n_max {
            rhs += outer(&xs_pow_k0);
            x_pow = &x_pow * &rep.x;
            let diff = &id - x_pow.adjoint() * &x_pow - &rhs;
            let residual = rep.restricted_norm(&diff);
            out.push(DefectReport {
                identity: format!("iterated_defect_n{n}"),
                residual,
                truncation: rep.truncation,
                pass: residual <= tol,
            });
            xs_pow_k0 = rep.x.adjoint() * xs_pow_k0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{ModelSpace, RangeRep};
    use crate::symbol::{
        evaluate_boundary, moments_of_modulus_squared, taylor_coefficients, SymbolSpec,
    };

    #[test]
    fn exact_mode_residuals_at_machine_precision() {
        let zeros = [
            C64::new(0.45, 0.2),
            C64::new(-0.3, 0.35),
            C64::new(0.1, -0.5),
            C64::new(0.0, 0.0),
        ];
        let ms = ModelSpace::new(&zeros).unwrap();
        let b = ms.symbol().clone();
        let ctx = HbContext::Exact(ms);
        let reports = verify_defect_identities(&ctx, &b, 4, true, 1e-10);
        assert_eq!(reports.len(), 6);
        for r in &reports {
            assert!(r.pass, "{} residual {}", r.identity, r.residual);
            assert!(r.residual <= 1e-10);
        }
    }

    #[test]
    fn telescoping_base_case_matches_kernel_defect() {
        let ms = ModelSpace::new(&[C64::new(0.5, 0.0), C64::new(-0.2, 0.3)]).unwrap();
        let b = ms.symbol().clone();
        let ctx = HbContext::Exact(ms);
        let reports = verify_defect_identities(&ctx, &b, 1, true, 1e-10);
        let x_star_x = reports.iter().find(|r| r.identity == "kernel_defect_x_star_x").unwrap();
        let iterated = reports.iter().find(|r| r.identity == "iterated_defect_n1").unwrap();
        assert!((x_star_x.residual - iterated.residual).abs() < 1e-13);
    }

    #[test]
    fn nonextreme_gates_to_rank_one_identity_only() {
        let spec = SymbolSpec::polynomial(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);
        let grid = evaluate_boundary(&spec, 128).unwrap();
        let (b, _) = taylor_coefficients(&grid, 48).unwrap();
        let rep = RangeRep::build(&b, 48, 1, 1e-10);
        let ctx = HbContext::Truncated { rep, threshold: 1e-6 };
        let reports = verify_defect_identities(&ctx, &b, 4, false, 1e-3);
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].identity, "rank_one_defect_xx_star");
        assert!(reports[0].pass, "residual {}", reports[0].residual);
    }

    #[test]
    fn truncated_mode_on_blaschke_matches_exact_mode() {
        let zeros = [C64::new(0.4, 0.15), C64::new(-0.25, 0.2)];
        let ms = ModelSpace::new(&zeros).unwrap();
        let b = ms.symbol().truncated(96);
        let rep = RangeRep::build(&b, 96, 0, 1e-8);
        let ctx = HbContext::Truncated { rep, threshold: 1e-5 };
        let reports = verify_defect_identities(&ctx, &b, 3, true, 1e-8);
        for r in &reports {
            assert!(r.pass, "{} residual {}", r.identity, r.residual);
        }
    }

    #[test]
    fn moments_route_pairs_with_conjugate_defect() {
        // sanity for the quadrature-vs-moment path used by the conjugate
        // representation on the arc symbol corpus
        let spec = SymbolSpec::polynomial(vec![C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);
        let grid = evaluate_boundary(&spec, 256).unwrap();
        let (b, _) = taylor_coefficients(&grid, 16).unwrap();
        let moments = moments_of_modulus_squared(&grid, 48).unwrap();
        let rep = RangeRep::build_conjugate(&b, &moments, 32, 1e-12);
        assert!(rep.rank() > 0);
    }
}
