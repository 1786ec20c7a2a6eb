//! Closed-form conformal and invariant state measures, densities,
//! eigenfunctions, Gibbs-failure diagnostics and the variational identity.
//!
//! Every measure here lives on the partition states `{W_k}` and carries an
//! explicit tail law, so every sum over `j >= k` is analytic; nothing is ever
//! truncated.

use alloc::vec::Vec;

use crate::map::CylinderWord;
use crate::math;
use crate::{Error, Result};

/// Tolerance used to route parameters onto the `lambda^t = 1/2` boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Explicit tail law of a state measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailLaw {
    /// `mass(k) = coef * ratio^k`.
    Geometric { coef: f64, ratio: f64 },
    /// `mass(k) = (a + b k) * ratio^k`.
    PolyGeometric { a: f64, b: f64, ratio: f64 },
    /// `mass(k) = a_plus * r_plus^k + a_minus * r_minus^k`, where the rates
    /// are the two roots of `r^2 - r + c = 0` and therefore sum to one; the
    /// tail formulas rely on that to stay well-conditioned when a root
    /// approaches 1.
    TwoTerm {
        a_plus: f64,
        r_plus: f64,
        a_minus: f64,
        r_minus: f64,
    },
}

/// A measure on the states `{W_k}` with closed-form tails.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMeasure {
    law: TailLaw,
    normalized: bool,
}

impl StateMeasure {
    pub fn new(law: TailLaw, normalized: bool) -> Self {
        StateMeasure { law, normalized }
    }

    pub fn law(&self) -> TailLaw {
        self.law
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Mass of the state `W_k`, `k >= 1`.
    pub fn mass(&self, k: u32) -> f64 {
        let ki = k as i32;
        match self.law {
            TailLaw::Geometric { coef, ratio } => coef * math::powi(ratio, ki),
            TailLaw::PolyGeometric { a, b, ratio } => (a + b * k as f64) * math::powi(ratio, ki),
            TailLaw::TwoTerm {
                a_plus,
                r_plus,
                a_minus,
                r_minus,
            } => a_plus * math::powi(r_plus, ki) + a_minus * math::powi(r_minus, ki),
        }
    }

    /// Closed-form tail `sum_{j >= k} mass(j)`.
    pub fn tail_sum(&self, k: u32) -> f64 {
        let ki = k as i32;
        match self.law {
            TailLaw::Geometric { coef, ratio } => coef * math::powi(ratio, ki) / (1.0 - ratio),
            TailLaw::PolyGeometric { a, b, ratio } => {
                let g = math::powi(ratio, ki);
                let one_minus = 1.0 - ratio;
                a * g / one_minus + b * g * (k as f64 / one_minus + ratio / (one_minus * one_minus))
            }
            TailLaw::TwoTerm {
                a_plus,
                r_plus,
                a_minus,
                r_minus,
            } => {
                // 1 - r_plus = r_minus and vice versa (the roots sum to one)
                a_plus * math::powi(r_plus, ki) / r_minus
                    + a_minus * math::powi(r_minus, ki) / r_plus
            }
        }
    }

    /// Total mass via the closed-form tail.
    pub fn total(&self) -> f64 {
        self.tail_sum(1)
    }

    /// Positivity of every mass: a prefix is checked directly, the rest by
    /// the sign of the dominant tail term.
    pub fn is_positive(&self) -> bool {
        for k in 1..=64 {
            let m = self.mass(k);
            if m.is_nan() || m <= 0.0 {
                return false;
            }
        }
        match self.law {
            TailLaw::Geometric { coef, ratio } => coef > 0.0 && ratio > 0.0 && ratio < 1.0,
            TailLaw::PolyGeometric { a, b, ratio } => {
                ratio > 0.0 && ratio < 1.0 && (b > 0.0 || (b == 0.0 && a > 0.0))
            }
            TailLaw::TwoTerm {
                a_plus,
                r_plus,
                a_minus,
                r_minus,
            } => {
                let dominant_ok = if r_plus >= r_minus {
                    a_plus > 0.0 || (a_plus == 0.0 && a_minus > 0.0)
                } else {
                    a_minus > 0.0 || (a_minus == 0.0 && a_plus > 0.0)
                };
                dominant_ok && r_plus < 1.0 && r_minus < 1.0
            }
        }
    }

    /// First `n` masses, mostly for serialization.
    pub fn prefix(&self, n: u32) -> Vec<f64> {
        (1..=n).map(|k| self.mass(k)).collect()
    }
}

/// Root data of the two-term recursion `x_{k+1} - x_k + c x_{k-1} = 0`.
#[derive(Debug, Clone, Copy)]
pub struct ConformalSolution {
    /// `c = e^{-p} (lambda (1-lambda))^t`.
    pub c: f64,
    pub r_plus: f64,
    pub r_minus: f64,
    pub a_plus: f64,
    pub a_minus: f64,
}

impl ConformalSolution {
    /// Solve the boundary equations for the two-term coefficients; requires
    /// `4c < 1` (distinct real roots).
    pub fn solve(u: f64, c: f64) -> Self {
        let disc = (1.0 - 4.0 * c).max(0.0);
        let sq = math::sqrt(disc);
        let r_plus = 0.5 * (1.0 + sq);
        let r_minus = c / r_plus; // product of the roots is c
        let gap = r_plus - r_minus;
        let a_plus = r_minus * (u - r_minus) / (u * gap);
        let a_minus = r_plus * (r_plus - u) / (u * gap);
        ConformalSolution {
            c,
            r_plus,
            r_minus,
            a_plus,
            a_minus,
        }
    }
}

/// The shift a [`crate::map::PotentialParams`] stands for: its explicit `p`,
/// or the conformal pressure at `(lambda, t)` when none was given.
pub fn potential_shift(tp: &crate::map::PotentialParams, lambda: f64) -> f64 {
    tp.p.unwrap_or_else(|| conformal_pressure(lambda, tp.t))
}

/// Conformal pressure: `log psi(t)` on `lambda^t <= 1/2`, otherwise
/// `log(4 lambda^t (1-lambda)^t)`.  Numerically an independent route from
/// [`crate::spectra::pressure_closed`]; the two agree to rounding.
pub fn conformal_pressure(lambda: f64, t: f64) -> f64 {
    let u = math::powf(lambda, t);
    if u <= 0.5 {
        // log psi(t), via the function value when it is representable
        let psi = math::powf(1.0 - lambda, t) / (1.0 - u);
        math::ln(psi)
    } else {
        math::ln(4.0 * u * math::powf(1.0 - lambda, t))
    }
}

/// The `(t,p)`-conformal state measure.
///
/// At `p = P_conf` the law is geometric (`lambda^t < 1/2`) or
/// polynomial-geometric (`lambda^t >= 1/2`); for `p > P_conf` it is the
/// two-term law.  Below the conformal pressure no measure exists.
pub fn conformal_measure(lambda: f64, t: f64, p: f64) -> Result<StateMeasure> {
    conformal_measure_with_tol(lambda, t, p, BOUNDARY_TOL)
}

/// [`conformal_measure`] with an explicit boundary tolerance for routing
/// onto `lambda^t = 1/2` and `p = P_conf`.
pub fn conformal_measure_with_tol(
    lambda: f64,
    t: f64,
    p: f64,
    boundary_tol: f64,
) -> Result<StateMeasure> {
    let u = math::powf(lambda, t);
    let p_conf = conformal_pressure(lambda, t);
    let eq_tol = boundary_tol * p_conf.abs().max(1.0);
    if p < p_conf - eq_tol {
        return Err(Error::NoConformalMeasure { p, p_conf });
    }
    let law = if (p - p_conf).abs() <= eq_tol {
        if u < 0.5 - boundary_tol {
            // mass(k) = (1-u) u^{k-1}
            TailLaw::Geometric {
                coef: (1.0 - u) / u,
                ratio: u,
            }
        } else {
            // mass(k) = [(k-1) + u^{-1}(1 - k/2)] (1/2)^k; degenerates to the
            // plain geometric (1/2)^k exactly on the boundary
            TailLaw::PolyGeometric {
                a: 1.0 / u - 1.0,
                b: 1.0 - 0.5 / u,
                ratio: 0.5,
            }
        }
    } else {
        let c = math::exp(-p) * math::powf(lambda * (1.0 - lambda), t);
        let sol = ConformalSolution::solve(u, c);
        TailLaw::TwoTerm {
            a_plus: sol.a_plus,
            r_plus: sol.r_plus,
            a_minus: sol.a_minus,
            r_minus: sol.r_minus,
        }
    };
    let measure = StateMeasure::new(law, true);
    if !measure.is_positive() {
        return Err(Error::NoConformalMeasure { p, p_conf });
    }
    Ok(measure)
}

/// Maximum relative defect of the two conformal functional equations over
/// `k <= k_max`, with all sums taken in closed form.
pub fn conformal_residual(measure: &StateMeasure, lambda: f64, t: f64, p: f64, k_max: u32) -> f64 {
    let w1_weight = math::exp(-p) * math::powf(1.0 - lambda, t);
    let deep_weight = math::exp(-p) * math::powf(lambda * (1.0 - lambda), t);
    let rel = |lhs: f64, rhs: f64| {
        let scale = math::abs(lhs).max(math::abs(rhs)).max(1e-300);
        math::abs(lhs - rhs) / scale
    };
    let mut worst = rel(measure.mass(1), w1_weight * measure.tail_sum(1));
    for k in 2..=k_max.max(2) {
        let lhs = measure.mass(k);
        let rhs = deep_weight * measure.tail_sum(k - 1);
        worst = worst.max(rel(lhs, rhs));
    }
    worst
}

/// Invariant probability absolutely continuous w.r.t. the conformal measure:
/// the geometric vector `v^t_i = (1-2u)/u (u/(1-u))^i`.
pub fn invariant_measure(lambda: f64, t: f64) -> Result<StateMeasure> {
    let u = math::powf(lambda, t);
    if u >= 0.5 - BOUNDARY_TOL {
        let reason = if (u - 0.5).abs() <= BOUNDARY_TOL {
            "null recurrent (lambda^t = 1/2): the stationary vector is not summable"
        } else {
            "transient (lambda^t > 1/2): no invariant probability absolutely continuous w.r.t. m_t"
        };
        return Err(Error::NoInvariantMeasure(reason.into()));
    }
    Ok(StateMeasure::new(
        TailLaw::Geometric {
            coef: (1.0 - 2.0 * u) / u,
            ratio: u / (1.0 - u),
        },
        true,
    ))
}

/// Invariant probability absolutely continuous w.r.t. Lebesgue; exists iff
/// `lambda < 1/2`.
pub fn acip(lambda: f64) -> Result<StateMeasure> {
    if (lambda - 0.5).abs() <= BOUNDARY_TOL {
        return Err(Error::NoInvariantMeasure(
            "lambda = 1/2: Lebesgue measure is conservative but null recurrent, no acip".into(),
        ));
    }
    if lambda > 0.5 {
        return Err(Error::NoInvariantMeasure(
            "lambda > 1/2: Lebesgue measure is dissipative".into(),
        ));
    }
    invariant_measure(lambda, 1.0)
}

/// Density `mu_t(W_n) / m_t(W_n) = (1-2u) / (1-u)^{n+1}`; strictly increasing
/// and unbounded in `n`.
pub fn density_ratio(n: u32, lambda: f64, t: f64) -> Result<f64> {
    let u = math::powf(lambda, t);
    if u >= 0.5 - BOUNDARY_TOL {
        return Err(Error::Unsupported(
            "density ratio needs lambda^t < 1/2".into(),
        ));
    }
    Ok((1.0 - 2.0 * u) * math::exp(-((n as f64 + 1.0) * math::ln_1p(-u))))
}

/// Log-mass of a cylinder under the conformal measure at `p = log psi(t)`:
/// `log m_t([w]) = -n p + S_n Phi_t + t log(lambda) (max(e_last - 1, 1) - 1)`.
///
/// The constant is pinned by consistency with the one-symbol masses and is
/// verified by the additivity tests.
pub fn log_cylinder_conformal_mass(word: &CylinderWord, lambda: f64, t: f64) -> Result<f64> {
    let u = math::powf(lambda, t);
    if u >= 0.5 - BOUNDARY_TOL {
        return Err(Error::Unsupported(
            "cylinder conformal mass is implemented for lambda^t < 1/2".into(),
        ));
    }
    if !word.is_admissible() || word.is_empty() {
        return Err(Error::InadmissibleWord);
    }
    let params = crate::map::MapParams::new(lambda)?;
    let tp = crate::map::PotentialParams::new(t);
    let s_n = crate::map::ergodic_sum_phi(word, &tp, &params)?;
    let p = conformal_pressure(lambda, t);
    let n = word.len() as f64;
    let image_start = (word.symbols[word.len() - 1].max(2) - 1) as f64;
    Ok(-n * p + s_n + t * math::ln(lambda) * (image_start - 1.0))
}

/// Linear-scale cylinder mass; see [`log_cylinder_conformal_mass`].
pub fn cylinder_conformal_mass(word: &CylinderWord, lambda: f64, t: f64) -> Result<f64> {
    Ok(math::exp(log_cylinder_conformal_mass(word, lambda, t)?))
}

/// Gibbs-comparison ratio `mu_t([w]) / exp(-n p + S_n Phi_t)`.
///
/// Equals `(1-2u)/(1-u)^{1+e_0} * u^{max(e_last-1,1)-1}`: it depends only on
/// the first and last symbols, grows without bound in `e_0` and decays to
/// zero in `e_last`, so no Gibbs distortion constant exists.
pub fn gibbs_ratio(word: &CylinderWord, lambda: f64, t: f64) -> Result<f64> {
    let u = math::powf(lambda, t);
    if u >= 0.5 - BOUNDARY_TOL {
        return Err(Error::Unsupported(
            "gibbs ratio needs lambda^t < 1/2".into(),
        ));
    }
    if !word.is_admissible() || word.is_empty() {
        return Err(Error::InadmissibleWord);
    }
    let e0 = word.symbols[0] as f64;
    let image_start = (word.symbols[word.len() - 1].max(2) - 1) as f64;
    let log_ratio = math::ln(1.0 - 2.0 * u) - (1.0 + e0) * math::ln_1p(-u)
        + (image_start - 1.0) * t * math::ln(lambda);
    Ok(math::exp(log_ratio))
}

/// Transfer-operator eigenfunction `h_j = (1-u)^{-(j-1)}` (normalised
/// `h_1 = 1`), with eigenvalue `psi(t)`; defined for `lambda^t <= 1/2`.
pub fn eigenfunction(lambda: f64, t: f64, j_max: u32) -> Result<Vec<f64>> {
    let u = math::powf(lambda, t);
    if u > 0.5 + BOUNDARY_TOL {
        return Err(Error::Unsupported(
            "transient regime: no positive summably-checked eigenfunction".into(),
        ));
    }
    Ok((1..=j_max)
        .map(|j| math::exp(-((j as f64 - 1.0) * math::ln_1p(-u))))
        .collect())
}

/// Maximum relative defect of the eigenfunction equation
/// `(L h)(i) = psi(t) h(i)` over `i <= i_max`, sums in closed form.
pub fn eigenfunction_residual(lambda: f64, t: f64, i_max: u32) -> Result<f64> {
    let u = math::powf(lambda, t);
    let h = eigenfunction(lambda, t, i_max)?;
    let psi = math::powf(1.0 - lambda, t) / (1.0 - u);
    let w1 = math::powf(1.0 - lambda, t);
    let deep = math::powf(lambda * (1.0 - lambda), t);
    let mu = 1.0 / (1.0 - u);
    let mut worst: f64 = 0.0;
    for i in 1..=i_max {
        // sum_{j=2}^{i+1} h_j = sum_{m=1}^{i} mu^m = mu (mu^i - 1) / (mu - 1)
        let geom = mu * (math::powi(mu, i as i32) - 1.0) / (mu - 1.0);
        let lhs = w1 + deep * geom;
        let rhs = psi * h[(i - 1) as usize];
        worst = worst.max(math::abs(lhs - rhs) / rhs);
    }
    Ok(worst)
}

/// `int rho_t dm_t = sum_i (u/(1-u))^{i-1}`, finite exactly when
/// `lambda^t < 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoIntegral {
    Finite(f64),
    Divergent,
}

pub fn rho_integral(lambda: f64, t: f64) -> Result<RhoIntegral> {
    let u = math::powf(lambda, t);
    if u > 0.5 + BOUNDARY_TOL {
        return Err(Error::Unsupported(
            "rho integral is defined for lambda^t <= 1/2".into(),
        ));
    }
    if (u - 0.5).abs() <= BOUNDARY_TOL {
        return Ok(RhoIntegral::Divergent);
    }
    Ok(RhoIntegral::Finite((1.0 - u) / (1.0 - 2.0 * u)))
}

/// The two halves of the variational identity and their sum.
#[derive(Debug, Clone, Copy)]
pub struct VariationalValue {
    /// Entropy of the stationary state chain (closed-form row entropy).
    pub entropy: f64,
    /// `int Phi_t d mu_t`.
    pub integral: f64,
    /// `entropy + integral`; equals `log psi(t)`.
    pub sum: f64,
}

/// Entropy plus potential integral of the equilibrium state; the sum
/// reproduces the pressure `log psi(t)` identically.
pub fn variational_value(lambda: f64, t: f64) -> Result<VariationalValue> {
    let u = math::powf(lambda, t);
    if u >= 0.5 - BOUNDARY_TOL {
        return Err(Error::NoInvariantMeasure(
            "no equilibrium state for lambda^t >= 1/2".into(),
        ));
    }
    let ln_u = t * math::ln(lambda);
    // every kernel row is geometric with success probability 1-u
    let entropy = -math::ln_1p(-u) - u / (1.0 - u) * ln_u;
    let v1 = (1.0 - 2.0 * u) / (1.0 - u);
    let integral = t * math::ln_1p(-lambda) + (1.0 - v1) * t * math::ln(lambda);
    let sum = entropy + integral;
    debug_assert!(
        (sum - (t * math::ln_1p(-lambda) - math::ln_1p(-u))).abs() < 1e-10,
        "variational identity must close"
    );
    Ok(VariationalValue { entropy, integral, sum })
}

/// One-step transition probability of the conformal state chain,
/// `P(i -> j) = (1-u) u^{j - max(i-1,1)}` for `j >= max(i-1,1)`.
pub fn conformal_transition(i: u32, j: u32, lambda: f64, t: f64) -> f64 {
    let u = math::powf(lambda, t);
    let start = i.max(2) - 1;
    if j < start {
        0.0
    } else {
        (1.0 - u) * math::powi(u, (j - start) as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::CylinderWord;
    use alloc::vec;

    #[test]
    fn potential_shift_defaults_to_conformal_pressure() {
        let tp = crate::map::PotentialParams::new(1.3);
        assert_eq!(potential_shift(&tp, 0.4), conformal_pressure(0.4, 1.3));
        let tp = crate::map::PotentialParams::with_shift(1.3, 0.25);
        assert_eq!(potential_shift(&tp, 0.4), 0.25);
    }

    #[test]
    fn conformal_pressure_examples() {
        assert!(conformal_pressure(0.3, 1.0).abs() < 1e-14);
        assert!((conformal_pressure(0.7, 1.0) - math::ln(0.84)).abs() < 1e-14);
        // agreement with the spectra route across a grid
        for &lam in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            for &t in &[-1.0, 0.0, 0.3, 1.0, 2.7, 6.0] {
                let a = conformal_pressure(lam, t);
                let b = crate::spectra::pressure_closed(lam, t);
                assert!(
                    (a - b).abs() < 1e-15 * a.abs().max(1.0),
                    "lam={lam} t={t}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn conformal_measure_lebesgue_case() {
        // lambda = 1/2, t = 1, p = 0: masses are the cell lengths 2^{-k}
        let m = conformal_measure(0.5, 1.0, 0.0).unwrap();
        for k in 1..20 {
            assert!((m.mass(k) - math::powi(0.5, k as i32)).abs() < 1e-15);
        }
        assert!((m.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conformal_measure_transient_boundary_values() {
        // lambda^t >= 1/2 at p = P_conf: m(W_1) = lambda^{-t}/4, m(W_2) = 1/4
        for &(lam, t) in &[(0.8, 1.0), (0.6, 1.2), (0.9, 3.0)] {
            let u = math::powf(lam, t);
            assert!(u > 0.5);
            let p = conformal_pressure(lam, t);
            let m = conformal_measure(lam, t, p).unwrap();
            assert!((m.mass(1) - 1.0 / (4.0 * u)).abs() < 1e-14);
            assert!((m.mass(2) - 0.25).abs() < 1e-14);
            assert!((m.total() - 1.0).abs() < 1e-12);
            assert!(m.is_positive());
        }
    }

    #[test]
    fn conformal_measure_rejects_small_p() {
        let err = conformal_measure(0.3, 1.0, -0.5).unwrap_err();
        match err {
            Error::NoConformalMeasure { p, p_conf } => {
                assert_eq!(p, -0.5);
                assert!(p_conf.abs() < 1e-14);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn conformal_residuals_vanish_on_every_branch() {
        // geometric branch
        let m = conformal_measure(0.3, 1.0, conformal_pressure(0.3, 1.0)).unwrap();
        assert!(conformal_residual(&m, 0.3, 1.0, conformal_pressure(0.3, 1.0), 100) < 1e-14);
        // poly-geometric branch
        let p = conformal_pressure(0.7, 1.0);
        let m = conformal_measure(0.7, 1.0, p).unwrap();
        assert!(conformal_residual(&m, 0.7, 1.0, p, 100) < 1e-14);
        // two-term branch
        let p = conformal_pressure(0.3, 1.0) + 0.1;
        let m = conformal_measure(0.3, 1.0, p).unwrap();
        assert!(conformal_residual(&m, 0.3, 1.0, p, 100) < 1e-12);
        assert!((m.total() - 1.0).abs() < 1e-12);
        // sensitivity: perturbing the decay rate must light up the residual
        // (scaling the whole vector would preserve the equations)
        if let TailLaw::Geometric { coef, ratio } = conformal_measure(0.3, 1.0, 0.0).unwrap().law()
        {
            let blended = StateMeasure::new(
                TailLaw::Geometric {
                    coef,
                    ratio: ratio * 1.01,
                },
                false,
            );
            assert!(conformal_residual(&blended, 0.3, 1.0, 0.0, 50) > 1e-3);
        } else {
            panic!("expected geometric law");
        }
    }

    #[test]
    fn invariant_measure_examples() {
        // u = 1/3 gives masses 2^{-i}
        let lam = 1.0 / 3.0;
        let m = invariant_measure(lam, 1.0).unwrap();
        for i in 1..=30 {
            assert!((m.mass(i) - math::powi(0.5, i as i32)).abs() < 1e-14);
        }
        assert!((m.total() - 1.0).abs() < 1e-12);
        assert!(invariant_measure(0.8, 1.0).is_err());
        assert!(invariant_measure(0.25, crate::spectra::t0(0.25)).is_err());
    }

    #[test]
    fn acip_examples() {
        let m = acip(1.0 / 3.0).unwrap();
        for i in 1..=10 {
            assert!((m.mass(i) - math::powi(0.5, i as i32)).abs() < 1e-14);
        }
        let m = acip(0.4).unwrap();
        assert!((m.mass(1) - 1.0 / 3.0).abs() < 1e-14);
        assert!(acip(0.5).is_err());
        assert!(acip(0.7).is_err());
    }

    #[test]
    fn density_ratio_examples() {
        let lam = 1.0 / 3.0;
        // u = 1/3: ratio(1) = (1/3)/(2/3)^2 = 3/4
        assert!((density_ratio(1, lam, 1.0).unwrap() - 0.75).abs() < 1e-12);
        // growth factor 1/(1-u) and cross-module identity
        let m_inv = invariant_measure(lam, 1.0).unwrap();
        let m_conf = conformal_measure(lam, 1.0, conformal_pressure(lam, 1.0)).unwrap();
        for n in 1..=50u32 {
            let direct = m_inv.mass(n) / m_conf.mass(n);
            let closed = density_ratio(n, lam, 1.0).unwrap();
            assert!((direct - closed).abs() < 1e-12 * closed);
            let growth = density_ratio(n + 1, lam, 1.0).unwrap() / closed;
            assert!((growth - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn cylinder_mass_matches_state_measure_on_single_symbols() {
        for &(lam, t) in &[(0.3, 1.0), (0.4, 1.5), (0.2, 0.8)] {
            let p = conformal_pressure(lam, t);
            let m = conformal_measure(lam, t, p).unwrap();
            for k in 1..=20u32 {
                let w = CylinderWord::new(vec![k]);
                let got = cylinder_conformal_mass(&w, lam, t).unwrap();
                assert!(
                    (got - m.mass(k)).abs() < 1e-13 * m.mass(k),
                    "lam={lam} t={t} k={k}: {got} vs {}",
                    m.mass(k)
                );
            }
        }
    }

    #[test]
    fn cylinder_mass_additivity() {
        // mass of [w] = sum over admissible j of mass of [w.j], with the tail
        // over j > cap in closed form: sum_{j>J} e^{Phi(j)} weights are
        // geometric, mirroring the functional equations.
        let lam = 0.35;
        let t = 1.2;
        let u = math::powf(lam, t);
        let words = [
            vec![1u32],
            vec![3],
            vec![2, 1],
            vec![4, 3, 2],
            vec![1, 5, 4],
        ];
        for symbols in words {
            let w = CylinderWord::new(symbols.clone());
            let target = cylinder_conformal_mass(&w, lam, t).unwrap();
            let last = *symbols.last().unwrap();
            let lo = last.max(2) - 1;
            let cap = lo + 200;
            let mut sum = 0.0;
            for j in lo..=cap {
                let mut ext = symbols.clone();
                ext.push(j);
                sum += cylinder_conformal_mass(&CylinderWord::new(ext), lam, t).unwrap();
            }
            // closed-form geometric tail over j > cap: each extension scales
            // by e^{-p} (lam(1-lam))^t u^{j - 2} relative to the parent image
            let mut ext = symbols.clone();
            ext.push(cap + 1);
            let first_tail = cylinder_conformal_mass(&CylinderWord::new(ext), lam, t).unwrap();
            sum += first_tail / (1.0 - u);
            assert!(
                ((sum - target) / target).abs() < 1e-12,
                "word {symbols:?}: {sum} vs {target}"
            );
        }
    }

    #[test]
    fn gibbs_ratio_structure() {
        let lam = 0.3;
        let t = 1.0;
        let u = lam;
        // interior independence
        let a = gibbs_ratio(&CylinderWord::new(vec![2, 3, 4, 3]), lam, t).unwrap();
        let b = gibbs_ratio(&CylinderWord::new(vec![2, 1, 2, 3]), lam, t).unwrap();
        assert!((a - b).abs() < 1e-13 * a);
        // unbounded in e_0 with the last symbol held fixed (walk down to 1)
        let r1 = gibbs_ratio(&CylinderWord::new(vec![1, 1]), lam, t).unwrap();
        let descending: Vec<u32> = (1..=20).rev().collect();
        let r20 = gibbs_ratio(&CylinderWord::new(descending), lam, t).unwrap();
        assert!(r20 > r1 * 100.0, "r20={r20} r1={r1}");
        // decays to zero in the last symbol with e_0 fixed
        let s1 = gibbs_ratio(&CylinderWord::new(vec![2, 2]), lam, t).unwrap();
        let s12 = gibbs_ratio(
            &CylinderWord::new(vec![2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12]),
            lam,
            t,
        )
        .unwrap();
        assert!(s12 < s1 * math::powi(u, 8));
        // no distortion constant: the spread across cylinders is unbounded
        assert!(r20 / s12 > 1e4);
    }

    #[test]
    fn eigenfunction_examples() {
        // u = 1/2: h_j = 2^{j-1}
        let lam = 0.25;
        let t = crate::spectra::t0(lam);
        let h = eigenfunction(lam, t, 10).unwrap();
        for (j, &v) in h.iter().enumerate() {
            assert!((v - math::powi(2.0, j as i32)).abs() < 1e-10 * v);
        }
        assert_eq!(h[0], 1.0);
        // residual at u = 1/3
        let lam = 1.0 / 3.0;
        assert!(eigenfunction_residual(lam, 1.0, 40).unwrap() < 1e-12);
        assert!(eigenfunction(0.8, 1.0, 5).is_err());
    }

    #[test]
    fn rho_integral_examples() {
        assert_eq!(rho_integral(0.25, 0.5).unwrap(), RhoIntegral::Divergent);
        match rho_integral(1.0 / 3.0, 1.0).unwrap() {
            RhoIntegral::Finite(v) => assert!((v - 2.0).abs() < 1e-14),
            other => panic!("expected finite, got {other:?}"),
        }
        // monotone divergence as u -> 1/2 from below
        let mut prev = 0.0;
        for &u in &[0.40, 0.45, 0.48, 0.49, 0.499] {
            match rho_integral(u, 1.0).unwrap() {
                RhoIntegral::Finite(v) => {
                    assert!(v > prev);
                    prev = v;
                }
                _ => panic!("finite expected"),
            }
        }
        assert!(rho_integral(0.9, 1.0).is_err());
    }

    #[test]
    fn variational_identity_closed_form() {
        for &(lam, t) in &[(1.0 / 3.0, 1.0), (0.3, 1.5), (0.45, 1.2), (0.2, 0.8)] {
            let u = math::powf(lam, t);
            assert!(u < 0.5);
            let v = variational_value(lam, t).unwrap();
            let target = math::ln(math::powf(1.0 - lam, t) / (1.0 - u));
            assert!((v.sum - target).abs() < 1e-12, "lam={lam} t={t}");
        }
        assert!(variational_value(0.8, 1.0).is_err());
        // continuity toward the transition, approached from within the
        // equilibrium region lambda^t < 1/2 (i.e. t just above t_0)
        let lam = 0.3f64;
        let t_star = crate::spectra::t0(lam);
        let v = variational_value(lam, t_star + 1e-9).unwrap();
        let limit = math::ln(4.0) + t_star * math::ln(lam * (1.0 - lam));
        assert!((v.sum - limit).abs() < 1e-6);
    }

    #[test]
    fn stationarity_of_invariant_vector() {
        // v is a fixed left vector of the conformal kernel: each column has
        // finitely many nonzero entries, so the check is exact term by term.
        for &(lam, t) in &[(1.0 / 3.0, 1.0), (0.3, 1.4)] {
            let m = invariant_measure(lam, t).unwrap();
            for j in 1..=60u32 {
                let mut acc = 0.0;
                for i in 1..=(j + 1) {
                    acc += m.mass(i) * conformal_transition(i, j, lam, t);
                }
                assert!(
                    (acc - m.mass(j)).abs() < 1e-12 * m.mass(j),
                    "lam={lam} t={t} j={j}"
                );
            }
        }
    }
}
