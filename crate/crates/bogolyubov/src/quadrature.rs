//! Deterministic adaptive quadrature on (0, inf) and (0, inf)^2, and the
//! modified Mellin transforms used by the asymptotic expansion engine.
//!
//! The semi-infinite axis is mapped to (0, 1) by t = u/(1-u) and integrated
//! with an adaptive Gauss-Kronrod 15(7) rule. Endpoint behavior declared via
//! [`EndpointHints`] seeds extra initial panels near the corresponding edge;
//! the adaptive refinement does the rest. Identical inputs and controls give
//! bit-identical results.

mod kronrod;
pub mod mellin;

pub use mellin::{MellinKind, MellinTransform};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;

/// Uniform return type of the numeric integrals.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
}

/// Tolerance pair plus a panel budget.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct QuadratureControl {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for QuadratureControl {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_panels: 3000,
        }
    }
}

impl QuadratureControl {
    pub fn with_tols(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }
}

/// Power-law endpoint behavior hints: f ~ t^left_exponent as t -> 0 and
/// f ~ t^{-right_exponent} as t -> inf. Only used to seed initial panels.
#[derive(Debug, Clone, Copy)]
pub struct EndpointHints {
    pub left_exponent: f64,
    pub right_exponent: f64,
}

impl Default for EndpointHints {
    fn default() -> Self {
        Self {
            left_exponent: 0.0,
            right_exponent: 6.0,
        }
    }
}

fn breakpoints(hints: &EndpointHints) -> Vec<f64> {
    let mut pts = vec![0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0];
    if hints.left_exponent < -0.1 {
        pts.extend_from_slice(&[1e-4, 1e-3, 1e-2, 0.05]);
    }
    if hints.right_exponent < 3.0 {
        pts.extend_from_slice(&[0.95, 0.99, 0.999, 0.9999]);
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn run_semi_infinite<F: Fn(f64) -> (f64, f64)>(
    f: &F,
    hints: &EndpointHints,
    ctl: &QuadratureControl,
) -> kronrod::AdaptiveOutcome {
    let transformed = |u: f64| {
        if u <= 0.0 || u >= 1.0 {
            return (0.0, 0.0);
        }
        let om = 1.0 - u;
        let t = u / om;
        let jac = 1.0 / (om * om);
        let (v, aux) = f(t);
        (v * jac, aux * jac)
    };
    kronrod::adaptive(
        &transformed,
        &breakpoints(hints),
        ctl.abs_tol,
        ctl.rel_tol,
        ctl.max_panels,
    )
}

/// Integral of `f` over (0, inf), default endpoint hints.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    ctl: &QuadratureControl,
) -> Result<QuadratureResult> {
    integrate_semi_infinite_hinted(f, &EndpointHints::default(), ctl)
}

/// Integral of `f` over (0, inf) with declared endpoint behavior.
pub fn integrate_semi_infinite_hinted<F: Fn(f64) -> f64>(
    f: F,
    hints: &EndpointHints,
    ctl: &QuadratureControl,
) -> Result<QuadratureResult> {
    let out = run_semi_infinite(&|t| (f(t), 0.0), hints, ctl);
    let result = QuadratureResult {
        value: out.value,
        error_estimate: out.error,
        evaluations: out.evaluations,
    };
    if !out.converged {
        return Err(Error::Accuracy {
            op: "integrate_semi_infinite",
            requested: ctl.abs_tol.max(ctl.rel_tol * out.value.abs()),
            achieved: out.error,
            value: out.value,
        });
    }
    if !out.value.is_finite() {
        return Err(Error::Numeric(
            "non-finite integrand encountered on (0, inf)".into(),
        ));
    }
    Ok(result)
}

/// Iterated integral of `f(t, s)` over the open quadrant (0, inf)^2.
///
/// The inner (t) integral runs at one-eighth of the outer tolerances; its
/// per-point error estimates are integrated alongside the outer quadrature
/// and added to the returned `error_estimate`, so the reported figure bounds
/// both stages.
pub fn integrate_quadrant<F: Fn(f64, f64) -> f64>(
    f: F,
    ctl: &QuadratureControl,
) -> Result<QuadratureResult> {
    integrate_quadrant_hinted(f, &EndpointHints::default(), &EndpointHints::default(), ctl)
}

/// Quadrant integral with separate endpoint hints for the t and s axes.
pub fn integrate_quadrant_hinted<F: Fn(f64, f64) -> f64>(
    f: F,
    t_hints: &EndpointHints,
    s_hints: &EndpointHints,
    ctl: &QuadratureControl,
) -> Result<QuadratureResult> {
    let inner_ctl = QuadratureControl {
        abs_tol: ctl.abs_tol / 8.0,
        rel_tol: ctl.rel_tol / 8.0,
        max_panels: ctl.max_panels,
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_evals = RefCell::new(0u64);

    let outer_fn = |s: f64| -> (f64, f64) {
        let inner = run_semi_infinite(&|t| (f(t, s), 0.0), t_hints, &inner_ctl);
        *inner_evals.borrow_mut() += inner.evaluations;
        if !inner.value.is_finite() {
            failure
                .borrow_mut()
                .get_or_insert(Error::Numeric(format!("non-finite inner integral at s = {s}")));
            return (0.0, 0.0);
        }
        // missed inner tolerance is soft: keep the value, carry the estimate
        (inner.value, inner.error)
    };

    let outer = run_semi_infinite(&outer_fn, s_hints, ctl);
    if let Some(err) = failure.into_inner() {
        return Err(err);
    }
    let error_estimate = outer.error + outer.aux.abs();
    let evaluations = outer.evaluations + *inner_evals.borrow();
    let value = outer.value;
    if !outer.converged {
        return Err(Error::Accuracy {
            op: "integrate_quadrant",
            requested: ctl.abs_tol.max(ctl.rel_tol * value.abs()),
            achieved: error_estimate,
            value,
        });
    }
    Ok(QuadratureResult {
        value,
        error_estimate,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{eval_e, eval_h, KernelKind, SeriesControl};

    #[test]
    fn exponential_integral() {
        let r = integrate_semi_infinite(|t| (-t).exp(), &QuadratureControl::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "got {}", r.value);
        assert!(r.evaluations > 0);
    }

    #[test]
    fn gaussian_moment() {
        let r = integrate_semi_infinite(|t| t * (-t * t).exp(), &QuadratureControl::default())
            .unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn kernel_against_laplace_identity() {
        // int h_b(t) e^{-t} dt = E_b(1)
        let ctl = SeriesControl::default();
        let r = integrate_semi_infinite(
            |t| eval_h(KernelKind::Bose, t, &ctl).unwrap() * (-t).exp(),
            &QuadratureControl::with_tols(1e-11, 1e-11),
        )
        .unwrap();
        let want = eval_e(KernelKind::Bose, 1.0).unwrap();
        assert!((r.value - want).abs() < 1e-9, "{} vs {}", r.value, want);
    }

    #[test]
    fn quadrant_product() {
        let r =
            integrate_quadrant(|t, s| (-t - s).exp(), &QuadratureControl::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn quadrant_kernel_product_matches_1d_product() {
        // int int h_f(t) h_b(s) e^{-(t+s)} = E_f(1) E_b(1) = E_b(2)
        let sctl = SeriesControl::default();
        let r = integrate_quadrant(
            |t, s| {
                eval_h(KernelKind::Fermi, t, &sctl).unwrap()
                    * eval_h(KernelKind::Bose, s, &sctl).unwrap()
                    * (-(t + s)).exp()
            },
            &QuadratureControl::with_tols(1e-10, 1e-9),
        )
        .unwrap();
        let want = eval_e(KernelKind::Bose, 2.0).unwrap();
        assert!((r.value - want).abs() < 1e-8, "{} vs {}", r.value, want);
    }

    #[test]
    fn quadrant_symmetry() {
        let f = |t: f64, s: f64| (t * s) * (-(t + s) - 0.3 * (t - s).powi(2)).exp();
        let ctl = QuadratureControl::default();
        let a = integrate_quadrant(f, &ctl).unwrap().value;
        let b = integrate_quadrant(|t, s| f(s, t), &ctl).unwrap().value;
        assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn deterministic_bitwise() {
        let ctl = QuadratureControl::default();
        let f = |t: f64| (t.sin().powi(2) + 0.1) * (-1.3 * t).exp();
        let a = integrate_semi_infinite(f, &ctl).unwrap().value;
        let b = integrate_semi_infinite(f, &ctl).unwrap().value;
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn reports_accuracy_failure_with_best_value() {
        // nasty oscillatory integrand with a miserly panel budget
        let ctl = QuadratureControl {
            abs_tol: 1e-14,
            rel_tol: 1e-14,
            max_panels: 8,
        };
        let res = integrate_semi_infinite(|t| (50.0 * t).sin().powi(2) * (-t).exp(), &ctl);
        match res {
            Err(Error::Accuracy { value, achieved, .. }) => {
                assert!(value.is_finite());
                assert!(achieved > 1e-14);
            }
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn hinted_endpoint_singularity() {
        // t^{-1/2} e^{-t}: integrable power-law at 0, Gamma(1/2)
        let hints = EndpointHints {
            left_exponent: -0.5,
            right_exponent: 6.0,
        };
        let r = integrate_semi_infinite_hinted(
            |t| t.powf(-0.5) * (-t).exp(),
            &hints,
            &QuadratureControl::with_tols(1e-10, 1e-10),
        )
        .unwrap();
        assert!((r.value - std::f64::consts::PI.sqrt()).abs() < 1e-8);
    }
}
