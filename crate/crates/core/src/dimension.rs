//! Hausdorff dimensions of escaping and hyperbolic sets, truncated-set
//! dimensions by root-finding on the pressure, and the cylinder-sum
//! identities.
//!
//! Dimensions are produced by closed formula; root-finding serves as the
//! verification oracle against transcription slips.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::spectra::{self, OperatorKind, TruncatedOperator};
use crate::{Error, Result};

/// Bisection bracket in `t`; the closed-form pressure is strictly decreasing
/// in `t`, so any sign change in here is the unique zero.
const T_BRACKET: (f64, f64) = (1e-3, 8.0);

/// Zero of the pressure: 1 for `lambda <= 1/2`, else
/// `-log 4 / log(lambda (1-lambda))`.
pub fn t1(lambda: f64) -> f64 {
    if lambda <= 0.5 {
        1.0
    } else {
        -math::LN_4 / math::ln(lambda * (1.0 - lambda))
    }
}

/// Root of `t -> pressure_closed(lambda, t)` by bisection, the independent
/// cross-check of [`t1`].
pub fn t1_root_find(lambda: f64) -> Result<f64> {
    bisect_decreasing(
        |t| spectra::pressure_closed(lambda, t),
        T_BRACKET.0,
        T_BRACKET.1,
        1e-12,
    )
}

/// Hausdorff dimension of the escaping set.
pub fn dim_escaping(lambda: f64) -> f64 {
    if lambda <= 0.5 {
        -math::LN_4 / math::ln(lambda * (1.0 - lambda))
    } else {
        1.0
    }
}

/// Hyperbolic dimension; equals the escaping-set dimension at the mirrored
/// parameter `1 - lambda`.
pub fn dim_hyperbolic(lambda: f64) -> f64 {
    dim_escaping(1.0 - lambda)
}

/// Dimension of the `K`-state hyperbolic set: the zero in `t` of
/// `log x_{t,K}`, by bisection to `1e-8`; nondecreasing in `K`.
pub fn dim_truncated(lambda: f64, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::Domain("dim_truncated needs K >= 2".into()));
    }
    bisect_decreasing(
        |t| math::ln(spectra::leading_root(OperatorKind::B, k, lambda, t).expect("valid params")),
        T_BRACKET.0,
        T_BRACKET.1,
        1e-8,
    )
}

fn bisect_decreasing(f: impl Fn(f64) -> f64, lo0: f64, hi0: f64, tol: f64) -> Result<f64> {
    let mut lo = lo0;
    let mut hi = hi0;
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo > 0.0 && f_hi < 0.0) {
        return Err(Error::BracketFailure { lo, hi, f_lo, f_hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The two routes to the cylinder sum `H^n_{t,K}`, in logs.
#[derive(Debug, Clone, Copy)]
pub struct CylinderSum {
    /// `log( w_t (A^t_K)^{n-1} 1^T )`.
    pub log_via_a: f64,
    /// `log( 1 (B^t_K)^{n-1} w_t^T )`.
    pub log_via_b: f64,
}

impl CylinderSum {
    pub fn via_a(&self) -> f64 {
        math::exp(self.log_via_a)
    }

    pub fn via_b(&self) -> f64 {
        math::exp(self.log_via_b)
    }

    pub fn relative_gap(&self) -> f64 {
        // |H_A - H_B| / H in the log domain
        math::abs(self.log_via_a - self.log_via_b)
    }
}

/// Sum of `|[e_0 ... e_{n-1}]|^t` over words with symbols `<= K`, computed
/// both ways with per-step rescaling (the sums over- or underflow the linear
/// scale long before `n = 40`).
pub fn cylinder_sum(lambda: f64, t: f64, n: usize, k: usize) -> Result<CylinderSum> {
    if n < 1 || k < 2 {
        return Err(Error::Domain("cylinder_sum needs n >= 1, K >= 2".into()));
    }
    let w_t: Vec<f64> = (1..=k)
        .map(|j| math::exp(t * ((j as f64 - 1.0) * math::ln(lambda) + math::ln_1p(-lambda))))
        .collect();

    // via A: w_t (A^t)^{n-1} 1^T, iterating the left action on w_t
    let a = TruncatedOperator::build(OperatorKind::A, k, lambda, t)?;
    let mut v = w_t.clone();
    let mut log_scale_a = 0.0;
    for _ in 1..n {
        v = a.apply_left(&v);
        let sup = v.iter().cloned().fold(0.0f64, f64::max);
        log_scale_a += math::ln(sup);
        for x in v.iter_mut() {
            *x /= sup;
        }
    }
    let log_via_a = log_scale_a + math::ln(v.iter().sum::<f64>());

    // via B: 1 (B^t)^{n-1} w_t^T, iterating the left action on 1
    let b = TruncatedOperator::build(OperatorKind::B, k, lambda, t)?;
    let mut v = vec![1.0; k];
    let mut log_scale_b = 0.0;
    for _ in 1..n {
        v = b.apply_left(&v);
        let sup = v.iter().cloned().fold(0.0f64, f64::max);
        log_scale_b += math::ln(sup);
        for x in v.iter_mut() {
            *x /= sup;
        }
    }
    let dot: f64 = v.iter().zip(&w_t).map(|(x, w)| x * w).sum();
    let log_via_b = log_scale_b + math::ln(dot);

    Ok(CylinderSum {
        log_via_a,
        log_via_b,
    })
}

/// How a dimension value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimensionMethod {
    ClosedForm,
    RootFind,
}

/// Dimension summary for one parameter.
#[derive(Debug, Clone, Copy)]
pub struct DimensionReport {
    pub lambda: f64,
    pub dim_escaping: f64,
    pub dim_hyperbolic: f64,
    pub t1: f64,
    pub method: DimensionMethod,
}

/// Closed-form dimension report at `lambda`.
pub fn dimension_report(lambda: f64) -> Result<DimensionReport> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain("lambda must lie in (0,1)".into()));
    }
    Ok(DimensionReport {
        lambda,
        dim_escaping: dim_escaping(lambda),
        dim_hyperbolic: dim_hyperbolic(lambda),
        t1: t1(lambda),
        method: DimensionMethod::ClosedForm,
    })
}
