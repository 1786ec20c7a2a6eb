//! Exact representation and iteration of the interval map, its Markov coding,
//! cylinder combinatorics and the geometric potential.
//!
//! Points are stored as `(state, rel)` pairs rather than raw reals: the state
//! index is exact forever, and `rel` locates the point inside its cell
//! `W_state` on the unit scale.  Raw iteration of deep points would underflow
//! `f64` long before the state coordinate loses meaning.

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// Map parameter `lambda`, constrained to the open interval `(0,1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapParams {
    lambda: f64,
}

impl MapParams {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Domain(alloc::format!(
                "lambda must lie in (0,1), got {lambda}"
            )));
        }
        Ok(MapParams { lambda })
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `|W_n| = lambda^{n-1} (1 - lambda)`.
    pub fn cell_length(&self, state: u32) -> f64 {
        math::powi(self.lambda, state as i32 - 1) * (1.0 - self.lambda)
    }
}

/// Potential parameters: exponent `t` and optional shift `p`.
///
/// When `p` is absent, operations that need a shift default to the conformal
/// pressure at `(lambda, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub t: f64,
    pub p: Option<f64>,
}

impl PotentialParams {
    pub fn new(t: f64) -> Self {
        PotentialParams { t, p: None }
    }

    pub fn with_shift(t: f64, p: f64) -> Self {
        PotentialParams { t, p: Some(p) }
    }
}

/// A point of `(0,1]` in `(state, rel)` coordinates.
///
/// `state >= 1` is the index of the cell `W_state` containing the point and
/// `rel` in `(0,1]` its relative position, so the point equals
/// `lambda^{state-1} (lambda + rel (1 - lambda))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePoint {
    pub state: u32,
    pub rel: f64,
}

impl StatePoint {
    pub fn new(state: u32, rel: f64) -> Result<Self> {
        if state < 1 {
            return Err(Error::Domain("state must be >= 1".into()));
        }
        if !(rel > 0.0 && rel <= 1.0) {
            return Err(Error::Domain(alloc::format!(
                "rel must lie in (0,1], got {rel}"
            )));
        }
        Ok(StatePoint { state, rel })
    }

    /// Encode a raw point `x` of `(0,1]`.
    pub fn from_unit(x: f64, params: &MapParams) -> Result<Self> {
        let state = partition_index(x, params)?;
        let lam = params.lambda();
        let hi = math::powi(lam, state as i32 - 1);
        let lo = hi * lam;
        let rel = ((x - lo) / (hi - lo)).clamp(f64::MIN_POSITIVE, 1.0);
        Ok(StatePoint { state, rel })
    }

    /// Reconstruct the raw value `lambda^{state-1} (lambda + rel (1-lambda))`.
    ///
    /// Underflows to 0 for states deeper than `f64` can resolve; the
    /// `(state, rel)` pair itself never degrades.
    pub fn value(&self, params: &MapParams) -> f64 {
        let lam = params.lambda();
        math::powi(lam, self.state as i32 - 1) * (lam + self.rel * (1.0 - lam))
    }
}

/// Index `n` of the cell `W_n = (lambda^n, lambda^{n-1}]` containing `x`.
///
/// A logarithm supplies the initial guess; the half-open boundaries are then
/// enforced exactly by stepping at most a few times.
pub fn partition_index(x: f64, params: &MapParams) -> Result<u32> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(alloc::format!(
            "partition_index needs x in (0,1], got {x}"
        )));
    }
    let lam = params.lambda();
    let guess = math::floor(math::ln(x) / math::ln(lam)) + 1.0;
    let mut n = if guess < 1.0 { 1i64 } else { guess as i64 };
    // Correct the rounding of the logarithm against the exact powers.
    while n > 1 && x > math::powi(lam, n as i32 - 1) {
        n -= 1;
    }
    while x <= math::powi(lam, n as i32) {
        n += 1;
    }
    Ok(n as u32)
}

/// One exact step of the map in `(state, rel)` coordinates.
///
/// On `W_1` the image is the unit-scale point `rel` itself; on `W_n` with
/// `n >= 2` the image is `rel * lambda^{n-2}`, i.e. the re-encoded `rel`
/// pushed `n - 2` cells deeper.  No power of `lambda^n` is ever formed.
pub fn step(pt: StatePoint, params: &MapParams) -> Result<StatePoint> {
    let sub = StatePoint::from_unit(pt.rel, params)?;
    if pt.state == 1 {
        Ok(sub)
    } else {
        Ok(StatePoint {
            state: sub.state + (pt.state - 2),
            rel: sub.rel,
        })
    }
}

/// A finite word of partition symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderWord {
    pub symbols: Vec<u32>,
}

impl CylinderWord {
    pub fn new(symbols: Vec<u32>) -> Self {
        CylinderWord { symbols }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Admissible iff every symbol is >= 1 and `e[k+1] >= e[k] - 1`.
    pub fn is_admissible(&self) -> bool {
        if self.symbols.iter().any(|&e| e < 1) {
            return false;
        }
        self.symbols.windows(2).all(|w| w[1] + 1 >= w[0])
    }

    fn check_admissible(&self) -> Result<()> {
        if self.is_empty() {
            return Err(Error::Domain("empty cylinder word".into()));
        }
        if self.is_admissible() {
            Ok(())
        } else {
            Err(Error::InadmissibleWord)
        }
    }
}

/// States visited by `pt, F(pt), ..., F^{n-1}(pt)`.
pub fn itinerary(pt: StatePoint, n: usize, params: &MapParams) -> Result<CylinderWord> {
    if n < 1 {
        return Err(Error::Domain("itinerary needs n >= 1".into()));
    }
    let mut symbols = Vec::with_capacity(n);
    let mut cur = pt;
    symbols.push(cur.state);
    for _ in 1..n {
        cur = step(cur, params)?;
        symbols.push(cur.state);
    }
    Ok(CylinderWord::new(symbols))
}

/// `log |F'|` on the cell `W_state`: the slope is `1/(1-lambda)` on `W_1` and
/// `1/(lambda(1-lambda))` on every deeper cell.
pub fn log_abs_deriv(state: u32, params: &MapParams) -> f64 {
    let lam = params.lambda();
    if state == 1 {
        -math::ln(1.0 - lam)
    } else {
        -math::ln(lam * (1.0 - lam))
    }
}

/// Ergodic sum `S_n Phi_t = -t * sum_k log|F'|(e_k)`; constant on the
/// cylinder because the potential depends on the first symbol only.
pub fn ergodic_sum_phi(
    word: &CylinderWord,
    tp: &PotentialParams,
    params: &MapParams,
) -> Result<f64> {
    word.check_admissible()?;
    let sum: f64 = word.symbols.iter().map(|&e| log_abs_deriv(e, params)).sum();
    Ok(-tp.t * sum)
}

/// `log |[e_0 ... e_{n-1}]|`: inverse slopes of the first `n-1` cells plus the
/// length of the final cell.  Kept in the log domain; long words underflow the
/// linear scale long before they become uninteresting.
pub fn log_cylinder_length(word: &CylinderWord, params: &MapParams) -> Result<f64> {
    word.check_admissible()?;
    let lam = params.lambda();
    let ln_w1_slope = math::ln(1.0 - lam);
    let ln_deep_slope = math::ln(lam * (1.0 - lam));
    let n = word.len();
    let mut acc = 0.0;
    for &e in &word.symbols[..n - 1] {
        acc += if e == 1 { ln_w1_slope } else { ln_deep_slope };
    }
    let last = word.symbols[n - 1];
    acc += (last as f64 - 1.0) * math::ln(lam) + math::ln(1.0 - lam);
    Ok(acc)
}

/// Linear-scale cylinder length; see [`log_cylinder_length`].
pub fn cylinder_length(word: &CylinderWord, params: &MapParams) -> Result<f64> {
    Ok(math::exp(log_cylinder_length(word, params)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(lambda: f64) -> MapParams {
        MapParams::new(lambda).unwrap()
    }

    #[test]
    fn params_reject_bad_lambda() {
        assert!(MapParams::new(0.0).is_err());
        assert!(MapParams::new(1.0).is_err());
        assert!(MapParams::new(-0.2).is_err());
        assert!(MapParams::new(f64::NAN).is_err());
    }

    #[test]
    fn partition_index_examples() {
        assert_eq!(partition_index(0.75, &p(0.5)).unwrap(), 1);
        // boundary lambda^1 belongs to W_2 = (1/4, 1/2]
        assert_eq!(partition_index(0.5, &p(0.5)).unwrap(), 2);
        // boundary case 0.3^2 = 0.09 (oracle: direct interval scan below)
        assert_eq!(partition_index(0.09, &p(0.3)).unwrap(), 3);
        assert!(partition_index(0.0, &p(0.5)).is_err());
        assert!(partition_index(1.5, &p(0.5)).is_err());
    }

    #[test]
    fn partition_index_matches_interval_scan() {
        // Oracle: scan n = 1, 2, ... for lambda^n < x <= lambda^{n-1}.
        let scan = |x: f64, lam: f64| -> u32 {
            let mut n = 1u32;
            loop {
                let hi = math::powi(lam, n as i32 - 1);
                let lo = math::powi(lam, n as i32);
                if x > lo && x <= hi {
                    return n;
                }
                n += 1;
                assert!(n < 10_000);
            }
        };
        let mut rng = crate::stochastic::SplitMix64::new(7);
        for &lam in &[0.2, 0.3, 0.5, 0.7, 0.9] {
            let params = p(lam);
            for _ in 0..10_000 {
                let x = rng.next_open01();
                assert_eq!(
                    partition_index(x, &params).unwrap(),
                    scan(x, lam),
                    "x={x} lam={lam}"
                );
            }
            // exact powers land in the lower cell (half-open on the left)
            for n in 1..20i32 {
                let x = math::powi(lam, n);
                if x > 0.0 {
                    assert_eq!(partition_index(x, &params).unwrap() as i32, n + 1);
                }
            }
        }
    }

    #[test]
    fn step_examples() {
        let params = p(0.5);
        // F(3/4) = 1/2, the right endpoint of W_2
        let out = step(StatePoint::new(1, 0.5).unwrap(), &params).unwrap();
        assert_eq!(out.state, 2);
        assert!((out.rel - 1.0).abs() < 1e-14);
        // F(3/8) = 1/2
        let out = step(StatePoint::new(2, 0.5).unwrap(), &params).unwrap();
        assert_eq!(out.state, 2);
        assert!((out.rel - 1.0).abs() < 1e-14);
    }

    #[test]
    fn right_endpoints_map_to_right_endpoints() {
        for &lam in &[0.3, 0.5, 0.8] {
            let params = p(lam);
            for n in 2..40u32 {
                let out = step(StatePoint::new(n, 1.0).unwrap(), &params).unwrap();
                assert_eq!(out.state, n - 1);
                assert_eq!(out.rel, 1.0);
            }
        }
    }

    #[test]
    fn itinerary_examples() {
        let params = p(0.5);
        let w = itinerary(StatePoint::new(1, 1.0).unwrap(), 3, &params).unwrap();
        assert_eq!(w.symbols, alloc::vec![1, 1, 1]); // x = 1 is fixed
        let w = itinerary(StatePoint::new(1, 0.5).unwrap(), 2, &params).unwrap();
        assert_eq!(w.symbols, alloc::vec![1, 2]);
    }

    #[test]
    fn itinerary_of_right_endpoint_counts_down() {
        let params = p(0.4);
        let w = itinerary(StatePoint::new(6, 1.0).unwrap(), 10, &params).unwrap();
        assert_eq!(w.symbols, alloc::vec![6, 5, 4, 3, 2, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn itineraries_are_admissible() {
        let mut rng = crate::stochastic::SplitMix64::new(99);
        for &lam in &[0.3, 0.5, 0.7] {
            let params = p(lam);
            for _ in 0..200 {
                let x = rng.next_open01();
                let pt = StatePoint::from_unit(x, &params).unwrap();
                let w = itinerary(pt, 60, &params).unwrap();
                assert!(w.is_admissible());
            }
        }
    }

    #[test]
    fn log_abs_deriv_examples() {
        let params = p(0.5);
        assert!((log_abs_deriv(1, &params) - core::f64::consts::LN_2).abs() < 1e-15);
        assert!((log_abs_deriv(7, &params) - 2.0 * core::f64::consts::LN_2).abs() < 1e-15);
        // slope bounds hold for every state
        for &lam in &[0.2, 0.6, 0.9] {
            let params = p(lam);
            let lo = -math::ln(1.0 - lam);
            let hi = -math::ln(lam * (1.0 - lam));
            for s in 1..50 {
                let v = log_abs_deriv(s, &params);
                assert!(v >= lo - 1e-15 && v <= hi + 1e-15);
            }
        }
    }

    #[test]
    fn ergodic_sum_examples() {
        let params = p(0.5);
        let tp = PotentialParams::new(1.0);
        let w1 = CylinderWord::new(alloc::vec![1]);
        assert!((ergodic_sum_phi(&w1, &tp, &params).unwrap() - (0.5f64).ln()).abs() < 1e-15);
        let w21 = CylinderWord::new(alloc::vec![2, 1]);
        assert!((ergodic_sum_phi(&w21, &tp, &params).unwrap() + (8.0f64).ln()).abs() < 1e-14);
        let t0 = PotentialParams::new(0.0);
        assert_eq!(ergodic_sum_phi(&w21, &t0, &params).unwrap(), 0.0);
        let bad = CylinderWord::new(alloc::vec![5, 2]);
        assert_eq!(
            ergodic_sum_phi(&bad, &tp, &params),
            Err(Error::InadmissibleWord)
        );
    }

    #[test]
    fn cylinder_length_examples() {
        let params = p(0.5);
        let w = CylinderWord::new(alloc::vec![1]);
        assert!((cylinder_length(&w, &params).unwrap() - 0.5).abs() < 1e-15);
        let w = CylinderWord::new(alloc::vec![1, 1]);
        assert!((cylinder_length(&w, &params).unwrap() - 0.25).abs() < 1e-15);
        let bad = CylinderWord::new(alloc::vec![4, 1]);
        assert!(cylinder_length(&bad, &params).is_err());
    }

    #[test]
    fn cylinder_additivity_with_geometric_tail() {
        // |[w]| = sum over admissible j of |[w . j]|, the tail over j > cap
        // summed in closed form: sum_{j >= J} |[w.j]| = invprod(w) lambda^{J-1}
        // where invprod(w) = |[w]| / |W_last|.
        let cap = 8u32;
        for &lam in &[0.3, 0.5, 0.6] {
            let params = p(lam);
            let mut rng = crate::stochastic::SplitMix64::new(4242);
            for _ in 0..300 {
                // random admissible word, length <= 6, symbols <= cap
                let len = 1 + (rng.next_u64() % 6) as usize;
                let mut symbols = Vec::with_capacity(len);
                let mut prev = 1 + (rng.next_u64() % cap as u64) as u32;
                symbols.push(prev);
                for _ in 1..len {
                    let lo = prev.saturating_sub(1).max(1);
                    let e = lo + (rng.next_u64() % (cap - lo + 1) as u64) as u32;
                    symbols.push(e);
                    prev = e;
                }
                let w = CylinderWord::new(symbols.clone());
                let len_w = cylinder_length(&w, &params).unwrap();
                let last = *symbols.last().unwrap();
                // inverse-slope product over all of w's cells (the last cell
                // becomes interior once the word is extended)
                let inv_slope_last = if last == 1 {
                    1.0 - lam
                } else {
                    lam * (1.0 - lam)
                };
                let invprod = len_w / params.cell_length(last) * inv_slope_last;
                let lo = last.saturating_sub(1).max(1);
                let mut sum = 0.0;
                for j in lo..=cap {
                    let mut ext = symbols.clone();
                    ext.push(j);
                    sum += cylinder_length(&CylinderWord::new(ext), &params).unwrap();
                }
                // sum_{j > cap} |W_j| = lambda^cap
                sum += invprod * math::powi(lam, cap as i32);
                assert!(
                    ((sum - len_w) / len_w).abs() < 1e-12,
                    "lam={lam} w={symbols:?} sum={sum} len={len_w}"
                );
            }
            // level-1 partition: sum_j |W_j| telescopes to 1
            let mut total = 0.0;
            for j in 1..=cap {
                total += params.cell_length(j);
            }
            total += math::powi(lam, cap as i32);
            assert!((total - 1.0).abs() < 1e-14);
        }
    }
}
