//! Random-walk simulation of the state chain and the interval map, drift
//! computations, recurrence/transience classification, and partition
//! functions including the null-recurrent binomial identities.
//!
//! Randomness comes from a fixed portable generator (SplitMix64); walker `w`
//! of a run draws from a stream derived only from `(seed, w)`, so results are
//! bit-identical however the walkers are scheduled.  All aggregation is done
//! in exact integer arithmetic and merges commute.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::map::{self, MapParams, StatePoint};
use crate::math;
use crate::measures::{self, RhoIntegral, TailLaw, BOUNDARY_TOL};
use crate::rational::binomial;
use crate::spectra::{OperatorKind, TruncatedOperator};
use crate::{Error, Result};

/// States tracked individually in occupation histograms; deeper states land
/// in an overflow bin (bounded memory under transience).
pub const STATE_HISTOGRAM_CAP: usize = 512;
/// Return times tracked individually; longer returns land in an overflow bin.
pub const RETURN_HISTOGRAM_CAP: usize = 1024;

/// SplitMix64: the portable 64-bit generator used everywhere in this crate.
///
/// `state` advances by the golden-ratio increment and each output is the
/// finalizer mix of the new state; the sequence is pure `u64` arithmetic and
/// identical on every platform.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform on the open interval `(0,1)`: bin centres of a 2^53 grid, so
    /// logarithms are always finite.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        (((self.next_u64() >> 11) as f64) + 0.5) * (1.0 / 9007199254740992.0)
    }
}

/// Stream for walker `w`: seed material `seed XOR (w+1)*golden`, mixed by the
/// generator itself.
pub fn walker_rng(seed: u64, walker: u64) -> SplitMix64 {
    SplitMix64::new(seed ^ walker.wrapping_add(1).wrapping_mul(GOLDEN))
}

/// Lebesgue drift `(2 lambda - 1)/(1 - lambda)` of the state walk.
pub fn drift(lambda: f64) -> f64 {
    (2.0 * lambda - 1.0) / (1.0 - lambda)
}

/// Expected one-step increment of the `(t,p)`-conformal state chain out of
/// state `i`, from the closed-form tails of the conformal masses.
pub fn drift_general(i: u32, lambda: f64, t: f64, p: f64) -> Result<f64> {
    let measure = measures::conformal_measure(lambda, t, p)?;
    let s = i.max(2) - 1; // first reachable state
    let ii = i as f64;
    let sf = s as f64;
    match measure.law() {
        TailLaw::Geometric { ratio: u, .. } => {
            // the kernel is the geometric walk: constant drift
            Ok((2.0 * u - 1.0) / (1.0 - u))
        }
        TailLaw::TwoTerm {
            a_plus,
            r_plus,
            a_minus,
            r_minus,
        } => {
            // factor r_plus^s out of both sums so deep states never
            // underflow; 1 - r_plus = r_minus and vice versa
            let rel = math::powi(r_minus / r_plus, s as i32);
            let term = |a: f64, r: f64, comp: f64, g: f64| {
                let weight = a * g / comp;
                let moment = a * g * ((sf - ii) / comp + r / (comp * comp));
                (weight, moment)
            };
            let (w_p, m_p) = term(a_plus, r_plus, r_minus, 1.0);
            let (w_m, m_m) = term(a_minus, r_minus, r_plus, rel);
            Ok((m_p + m_m) / (w_p + w_m))
        }
        TailLaw::PolyGeometric { a, b, ratio } => {
            // the common factor ratio^s cancels between numerator and denominator
            let om = 1.0 - ratio;
            let s0 = 1.0 / om;
            let s1 = sf / om + ratio / (om * om);
            let s2 = sf * sf / om
                + (2.0 * sf) * ratio / (om * om)
                + ratio * (1.0 + ratio) / (om * om * om);
            let num = a * (s1 - ii * s0) + b * (s2 - ii * s1);
            let den = a * s0 + b * s1;
            Ok(num / den)
        }
    }
}

/// One-uniform inverse-CDF sampler for the conformal state kernel.
#[derive(Debug, Clone)]
pub struct KernelSampler {
    ln_u: f64,
}

impl KernelSampler {
    pub fn new(lambda: f64, t: f64) -> Result<Self> {
        let u = math::powf(lambda, t);
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::Domain(alloc::format!(
                "kernel needs lambda^t in (0,1), got {u}"
            )));
        }
        Ok(KernelSampler {
            ln_u: t * math::ln(lambda),
        })
    }

    /// Draw the next state from `i`: `max(i-1,1) + G` with `G` geometric of
    /// success probability `1 - lambda^t`.
    #[inline]
    pub fn sample(&self, i: u32, rng: &mut SplitMix64) -> u32 {
        let jump = math::floor(math::ln(rng.next_open01()) / self.ln_u);
        let jump = if jump > 2_147_483_647.0 {
            2_147_483_647u32
        } else {
            jump as u32
        };
        i.max(2) - 1 + jump
    }
}

/// Single draw from the kernel; see [`KernelSampler`].
pub fn kernel_sample(i: u32, lambda: f64, t: f64, rng: &mut SplitMix64) -> Result<u32> {
    Ok(KernelSampler::new(lambda, t)?.sample(i, rng))
}

/// Where a walker starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    /// Fixed starting state (interval runs draw the position uniformly
    /// inside the cell).
    Fixed(u32),
    /// Uniform-on-(0,1] starting point; the state is then geometric with the
    /// cell masses `lambda^{n-1}(1-lambda)`.
    UniformUnit,
}

/// Configuration of a walk ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkConfig {
    pub lambda: f64,
    pub t: f64,
    pub n_steps: u64,
    pub n_walkers: u64,
    pub seed: u64,
    /// State index beyond which a walker counts as escaped (with hysteresis
    /// at half the threshold).
    pub escape_threshold: u32,
    pub initial: InitialState,
}

impl WalkConfig {
    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::Domain("lambda must lie in (0,1)".into()));
        }
        if self.n_steps < 1 || self.n_walkers < 1 {
            return Err(Error::Domain("n_steps and n_walkers must be >= 1".into()));
        }
        if self.escape_threshold < 2 {
            return Err(Error::Domain("escape_threshold must be >= 2".into()));
        }
        Ok(())
    }
}

/// Ensemble statistics; all counters are exact integers so merging is
/// associative, commutative and reproducible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStats {
    pub n_walkers: u64,
    pub steps_per_walker: u64,
    /// Visits to state `s` at index `s-1`, over all walkers and steps.
    pub state_counts: Vec<u64>,
    pub state_overflow: u64,
    pub escaped_walkers: u64,
    /// Sum over walkers of the displacement `chi_n - chi_0`.
    pub disp_sum: i128,
    pub disp_sq_sum: i128,
    /// Histogram of return times to state 1.
    pub return_time_counts: Vec<u64>,
    pub return_time_overflow: u64,
    pub return_count: u64,
    pub return_time_sum: u128,
    pub max_state: u32,
}

impl WalkStats {
    fn empty(steps_per_walker: u64) -> Self {
        WalkStats {
            n_walkers: 0,
            steps_per_walker,
            state_counts: vec![0; STATE_HISTOGRAM_CAP],
            state_overflow: 0,
            escaped_walkers: 0,
            disp_sum: 0,
            disp_sq_sum: 0,
            return_time_counts: vec![0; RETURN_HISTOGRAM_CAP],
            return_time_overflow: 0,
            return_count: 0,
            return_time_sum: 0,
            max_state: 0,
        }
    }

    /// Order-independent combination of two ensembles.
    pub fn merge(&mut self, other: &WalkStats) {
        assert_eq!(self.steps_per_walker, other.steps_per_walker);
        self.n_walkers += other.n_walkers;
        for (a, b) in self.state_counts.iter_mut().zip(&other.state_counts) {
            *a += b;
        }
        self.state_overflow += other.state_overflow;
        self.escaped_walkers += other.escaped_walkers;
        self.disp_sum += other.disp_sum;
        self.disp_sq_sum += other.disp_sq_sum;
        for (a, b) in self
            .return_time_counts
            .iter_mut()
            .zip(&other.return_time_counts)
        {
            *a += b;
        }
        self.return_time_overflow += other.return_time_overflow;
        self.return_count += other.return_count;
        self.return_time_sum += other.return_time_sum;
        self.max_state = self.max_state.max(other.max_state);
    }

    pub fn total_state_samples(&self) -> u64 {
        self.n_walkers * self.steps_per_walker
    }

    /// Fraction of all recorded steps spent in `state`.
    pub fn occupation_frequency(&self, state: u32) -> f64 {
        if state == 0 || state as usize > STATE_HISTOGRAM_CAP {
            return 0.0;
        }
        self.state_counts[state as usize - 1] as f64 / self.total_state_samples() as f64
    }

    pub fn overflow_frequency(&self) -> f64 {
        self.state_overflow as f64 / self.total_state_samples() as f64
    }

    pub fn escape_fraction(&self) -> f64 {
        self.escaped_walkers as f64 / self.n_walkers as f64
    }

    /// Mean of `chi_n - chi_0` across walkers.
    pub fn displacement_mean(&self) -> f64 {
        self.disp_sum as f64 / self.n_walkers as f64
    }

    /// Population variance of `chi_n - chi_0` across walkers.
    pub fn displacement_variance(&self) -> f64 {
        let n = self.n_walkers as f64;
        let mean = self.disp_sum as f64 / n;
        self.disp_sq_sum as f64 / n - mean * mean
    }

    pub fn mean_return_time(&self) -> Option<f64> {
        if self.return_count == 0 {
            None
        } else {
            Some(self.return_time_sum as f64 / self.return_count as f64)
        }
    }
}

struct WalkerAccumulator<'a> {
    stats: &'a mut WalkStats,
    chi0: u32,
    last: u32,
    escaped: bool,
    last_visit_to_one: Option<u64>,
    threshold: u32,
}

impl<'a> WalkerAccumulator<'a> {
    fn new(stats: &'a mut WalkStats, chi0: u32, threshold: u32) -> Self {
        let last_visit = (chi0 == 1).then_some(0);
        stats.max_state = stats.max_state.max(chi0);
        WalkerAccumulator {
            stats,
            chi0,
            last: chi0,
            escaped: false,
            last_visit_to_one: last_visit,
            threshold,
        }
    }

    #[inline]
    fn record(&mut self, step: u64, state: u32) {
        let s = &mut *self.stats;
        if (state as usize) <= STATE_HISTOGRAM_CAP {
            s.state_counts[state as usize - 1] += 1;
        } else {
            s.state_overflow += 1;
        }
        s.max_state = s.max_state.max(state);
        if state > self.threshold {
            self.escaped = true;
        } else if self.escaped && state < self.threshold / 2 {
            self.escaped = false;
        }
        if state == 1 {
            if let Some(prev) = self.last_visit_to_one {
                let rt = step - prev;
                if (rt as usize) <= RETURN_HISTOGRAM_CAP {
                    s.return_time_counts[rt as usize - 1] += 1;
                } else {
                    s.return_time_overflow += 1;
                }
                s.return_count += 1;
                s.return_time_sum += rt as u128;
            }
            self.last_visit_to_one = Some(step);
        }
        self.last = state;
    }

    fn finish(self) {
        let d = self.last as i128 - self.chi0 as i128;
        self.stats.n_walkers += 1;
        self.stats.disp_sum += d;
        self.stats.disp_sq_sum += d * d;
        if self.escaped {
            self.stats.escaped_walkers += 1;
        }
    }
}

fn initial_state_chain(config: &WalkConfig, rng: &mut SplitMix64) -> u32 {
    match config.initial {
        InitialState::Fixed(s) => s.max(1),
        InitialState::UniformUnit => {
            // cell masses lambda^{n-1}(1-lambda): geometric, inverse CDF
            let g = math::floor(math::ln(rng.next_open01()) / math::ln(config.lambda));
            1 + if g > 1e9 { 1_000_000_000u32 } else { g as u32 }
        }
    }
}

/// Statistics of a single chain walker; deterministic in `(config.seed, w)`.
pub fn simulate_chain_walker(config: &WalkConfig, w: u64) -> Result<WalkStats> {
    config.validate()?;
    let sampler = KernelSampler::new(config.lambda, config.t)?;
    let mut rng = walker_rng(config.seed, w);
    let mut stats = WalkStats::empty(config.n_steps);
    let chi0 = initial_state_chain(config, &mut rng);
    let mut acc = WalkerAccumulator::new(&mut stats, chi0, config.escape_threshold);
    let mut state = chi0;
    for step in 1..=config.n_steps {
        state = sampler.sample(state, &mut rng);
        acc.record(step, state);
    }
    acc.finish();
    Ok(stats)
}

/// Statistics of a single interval-map walker driven by exact `(state, rel)`
/// iteration.
pub fn simulate_interval_walker(config: &WalkConfig, w: u64) -> Result<WalkStats> {
    config.validate()?;
    let params = MapParams::new(config.lambda)?;
    let mut rng = walker_rng(config.seed, w);
    let mut stats = WalkStats::empty(config.n_steps);
    let mut pt = match config.initial {
        InitialState::Fixed(s) => StatePoint::new(s.max(1), rng.next_open01())?,
        InitialState::UniformUnit => StatePoint::from_unit(rng.next_open01(), &params)?,
    };
    let chi0 = pt.state;
    let mut acc = WalkerAccumulator::new(&mut stats, chi0, config.escape_threshold);
    for step in 1..=config.n_steps {
        pt = map::step(pt, &params)?;
        acc.record(step, pt.state);
    }
    acc.finish();
    Ok(stats)
}

fn simulate_with(
    config: &WalkConfig,
    f: impl Fn(&WalkConfig, u64) -> Result<WalkStats>,
) -> Result<WalkStats> {
    config.validate()?;
    let mut total = WalkStats::empty(config.n_steps);
    for w in 0..config.n_walkers {
        total.merge(&f(config, w)?);
    }
    Ok(total)
}

/// Independent trajectories of the abstract state chain.
pub fn simulate_chain(config: &WalkConfig) -> Result<WalkStats> {
    simulate_with(config, simulate_chain_walker)
}

/// Independent trajectories of the interval map itself.
pub fn simulate_interval(config: &WalkConfig) -> Result<WalkStats> {
    simulate_with(config, simulate_interval_walker)
}

/// Recurrence class of `(lambda, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recurrence {
    PositiveRecurrent,
    NullRecurrent,
    Transient,
}

/// Classification with its numeric certificates.
#[derive(Debug, Clone)]
pub struct Classification {
    pub class: Recurrence,
    pub lambda_pow_t: f64,
    /// Finiteness certificate (defined on `lambda^t <= 1/2`).
    pub rho_integral: Option<RhoIntegral>,
    /// Drift of the conformal chain at a deep state; its sign separates the
    /// recurrent and transient regimes.
    pub drift_deep: f64,
}

/// Branch on `lambda^t` against `1/2` (tolerance `1e-12`) and attach the
/// certificates.
pub fn classify(lambda: f64, t: f64) -> Result<Classification> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain("lambda must lie in (0,1)".into()));
    }
    let u = math::powf(lambda, t);
    let class = if u < 0.5 - BOUNDARY_TOL {
        Recurrence::PositiveRecurrent
    } else if u <= 0.5 + BOUNDARY_TOL {
        Recurrence::NullRecurrent
    } else {
        Recurrence::Transient
    };
    let rho = measures::rho_integral(lambda, t).ok();
    let p_conf = measures::conformal_pressure(lambda, t);
    let drift_deep = drift_general(400, lambda, t, p_conf)?;
    Ok(Classification {
        class,
        lambda_pow_t: u,
        rho_integral: rho,
        drift_deep,
    })
}

fn normalized_weight_matrix(k: usize, lambda: f64, t: f64) -> Result<TruncatedOperator> {
    let op = TruncatedOperator::build(OperatorKind::B, k, lambda, t)?;
    let p = measures::conformal_pressure(lambda, t);
    Ok(op.rescaled(math::exp(-p)))
}

/// Pressure-normalised local partition function: the `(e0, e0)` entry of
/// `(e^{-P} B^t)^k`.
///
/// Truncating at `K = k + e0 + 1` is exact: a length-`k` loop at `e0` cannot
/// climb past state `e0 + k` and still walk back down one step at a time.
pub fn partition_z(k: u32, e0: u32, lambda: f64, t: f64) -> Result<f64> {
    if k < 1 || e0 < 1 {
        return Err(Error::Domain("partition_z needs k >= 1, e0 >= 1".into()));
    }
    let size = (k + e0 + 1) as usize;
    let op = normalized_weight_matrix(size, lambda, t)?;
    let mut w = vec![0.0; size];
    w[e0 as usize - 1] = 1.0;
    for _ in 0..k {
        w = op.apply_right(&w);
    }
    Ok(w[e0 as usize - 1])
}

/// The column-sum convention `1 . M^{k-1} e_{e0}`; under row-one constancy it
/// equals twice the `(1,1)` entry of `M^k` when `e0 = 1`.
pub fn partition_z_column_sum(k: u32, e0: u32, lambda: f64, t: f64) -> Result<f64> {
    if k < 1 || e0 < 1 {
        return Err(Error::Domain(
            "partition_z_column_sum needs k >= 1, e0 >= 1".into(),
        ));
    }
    let size = (k + e0 + 1) as usize;
    let op = normalized_weight_matrix(size, lambda, t)?;
    let mut w = vec![0.0; size];
    w[e0 as usize - 1] = 1.0;
    for _ in 0..k - 1 {
        w = op.apply_right(&w);
    }
    Ok(w.iter().sum())
}

fn rational_coeffs(u: &BigRational) -> Result<(BigRational, BigRational)> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if u <= &zero || u >= &one {
        return Err(Error::Domain("rational lambda^t must lie in (0,1)".into()));
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    if u <= &half {
        let c1 = &one - u;
        let cr = u * &c1;
        Ok((c1, cr))
    } else {
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        let c1 = &quarter / u;
        Ok((c1, quarter))
    }
}

fn exact_apply_right(c1: &BigRational, cr: &BigRational, w: &[BigRational]) -> Vec<BigRational> {
    let k = w.len();
    let mut suffix = vec![BigRational::zero(); k];
    let mut acc = BigRational::zero();
    for s in (0..k).rev() {
        acc += &w[s];
        suffix[s] = acc.clone();
    }
    let mut out = Vec::with_capacity(k);
    out.push(c1 * &suffix[0]);
    for i in 1..k {
        out.push(cr * &suffix[i - 1]);
    }
    out
}

/// Exact-rational partition function for rational `u = lambda^t`.
pub fn partition_z_exact(k: u32, e0: u32, u: &BigRational) -> Result<BigRational> {
    if k < 1 || e0 < 1 {
        return Err(Error::Domain(
            "partition_z_exact needs k >= 1, e0 >= 1".into(),
        ));
    }
    let (c1, cr) = rational_coeffs(u)?;
    let size = (k + e0 + 1) as usize;
    let mut w = vec![BigRational::zero(); size];
    w[e0 as usize - 1] = BigRational::one();
    for _ in 0..k {
        w = exact_apply_right(&c1, &cr, &w);
    }
    Ok(w[e0 as usize - 1].clone())
}

/// Exact first column of `D^k` (truncation at `K = k + 2` is exact; entries
/// below index `k+1` vanish).
pub fn null_column(k: u32) -> Vec<BigRational> {
    let u = BigRational::new(BigInt::from(1), BigInt::from(2));
    let (c1, cr) = rational_coeffs(&u).expect("1/2 is a valid parameter");
    let size = (k + 2) as usize;
    let mut w = vec![BigRational::zero(); size];
    w[0] = BigRational::one();
    for _ in 0..k {
        w = exact_apply_right(&c1, &cr, &w);
    }
    w
}

/// Binomial closed form of the same column:
/// `C(2k - i + 1, k - i + 1) / 4^k` for `1 <= i <= k + 1`, zero beyond.
pub fn null_column_closed_form(k: u32) -> Vec<BigRational> {
    let four_k = BigInt::from(4).pow(k);
    (1..=(k + 2))
        .map(|i| {
            if i > k + 1 {
                BigRational::zero()
            } else {
                let n = (2 * k + 1 - i) as u64;
                let r = (k + 1 - i) as u64;
                BigRational::new(binomial(n, r), four_k.clone())
            }
        })
        .collect()
}

/// `C(2k, k) / 4^k`, the exact top entry of `D^k`.
pub fn central_binomial_ratio(k: u32) -> BigRational {
    BigRational::new(binomial(2 * k as u64, k as u64), BigInt::from(4).pow(k))
}

/// Verdict on the normalised series `sum_n e^{-nP} Z_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeriesVerdict {
    /// Null point: terms fit `c/sqrt(n)` (the series diverges).
    DivergentSqrt { sqrt_scaled_term: f64 },
    /// Recurrent side: terms approach a positive constant.
    DivergentPositiveTerms { limit_term: f64 },
    /// Transient side: terms decay geometrically.
    Convergent { tail_ratio: f64 },
}

/// Partial sums of the normalised partition-function series at `e0 = 1`.
#[derive(Debug, Clone)]
pub struct RecurrenceSeries {
    pub verdict: SeriesVerdict,
    /// `(n, partial sum)` at powers of two and at `n_max`.
    pub checkpoints: Vec<(u64, f64)>,
    pub last_term: f64,
    pub n_max: u64,
}

/// Cap for the matrix-iteration route (each term costs `O(n)`); the null
/// point runs on an `O(1)`-per-term recursion instead and has no cap.
pub const SERIES_MATRIX_CAP: u64 = 5_000;

/// Partial sums and a divergence verdict for `sum_{n <= N} e^{-nP} Z_n`.
pub fn recurrence_series(lambda: f64, t: f64, n_max: u64) -> Result<RecurrenceSeries> {
    if n_max < 10 {
        return Err(Error::Domain("recurrence_series needs N >= 10".into()));
    }
    let u = math::powf(lambda, t);
    let mut checkpoints = Vec::new();
    if (u - 0.5).abs() <= BOUNDARY_TOL {
        // exact rate: Z_n = C(2n,n)/4^n, recursion Z_{n+1} = Z_n (2n+1)/(2n+2)
        let mut z = 0.5f64; // Z_1
        let mut last = z;
        let mut sum = 0.0f64;
        let mut next_mark = 1u64;
        for n in 1..=n_max {
            sum += z;
            last = z;
            if n == next_mark || n == n_max {
                checkpoints.push((n, sum));
                if n == next_mark {
                    next_mark *= 2;
                }
            }
            let nf = n as f64;
            z *= (2.0 * nf + 1.0) / (2.0 * nf + 2.0);
        }
        return Ok(RecurrenceSeries {
            verdict: SeriesVerdict::DivergentSqrt {
                sqrt_scaled_term: last * math::sqrt(n_max as f64),
            },
            checkpoints,
            last_term: last,
            n_max,
        });
    }
    if n_max > SERIES_MATRIX_CAP {
        return Err(Error::Unsupported(alloc::format!(
            "matrix-iteration terms are capped at N = {SERIES_MATRIX_CAP} away from the null point"
        )));
    }
    let size = (n_max + 2) as usize;
    let op = normalized_weight_matrix(size, lambda, t)?;
    let mut w = vec![0.0; size];
    w[0] = 1.0;
    let mut sum = 0.0;
    let mut prev_term = f64::NAN;
    let mut term = f64::NAN;
    let mut next_mark = 1u64;
    for n in 1..=n_max {
        w = op.apply_right(&w);
        prev_term = term;
        term = w[0];
        sum += term;
        if n == next_mark || n == n_max {
            checkpoints.push((n, sum));
            if n == next_mark {
                next_mark *= 2;
            }
        }
    }
    let verdict = if u < 0.5 {
        SeriesVerdict::DivergentPositiveTerms { limit_term: term }
    } else {
        SeriesVerdict::Convergent {
            tail_ratio: term / prev_term,
        }
    };
    Ok(RecurrenceSeries {
        verdict,
        checkpoints,
        last_term: term,
        n_max,
    })
}

/// Human-readable recurrence class.
impl core::fmt::Display for Recurrence {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let s: &str = match self {
            Recurrence::PositiveRecurrent => "positive_recurrent",
            Recurrence::NullRecurrent => "null_recurrent",
            Recurrence::Transient => "transient",
        };
        f.write_str(s)
    }
}

impl Recurrence {
    pub fn as_str(&self) -> &'static str {
        match self {
            Recurrence::PositiveRecurrent => "positive_recurrent",
            Recurrence::NullRecurrent => "null_recurrent",
            Recurrence::Transient => "transient",
        }
    }
}

/// Format an exact rational as `numerator/denominator`.
pub fn rational_string(r: &BigRational) -> String {
    use alloc::format;
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
