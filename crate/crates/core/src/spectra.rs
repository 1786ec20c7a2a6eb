//! Truncated transfer-operator matrices, their characteristic polynomials and
//! leading eigenvalues, and the closed-form pressure function with its
//! phase-transition diagnostics.
//!
//! All five matrix kinds share one banded-geometric structure: row `i` is zero
//! before column `max(i-1, 1)` and geometric (ratio `lambda^t` or constant)
//! afterwards, so matrix-vector products run in `O(K)` via prefix/suffix
//! recurrences.
//!
//! Two routes to the leading eigenvalue are kept deliberately separate.  Power
//! iteration on the left action is the spec'd iterative route and also yields
//! the eigenvector and a residual certificate.  It is, however, limited by
//! floating-point representability: near the transition the left eigenvector
//! spans on the order of `2^K` magnitudes, and for large `K` any `f64`
//! iteration converges to a pseudo-eigenvalue that can exceed the true
//! spectral radius.  The characteristic-minor recurrence avoids this: the
//! minors match a symmetric tridiagonal family, so a Sturm-type pivot count
//! gives the largest root by bisection, stably at any truncation size.  The
//! reported `value` comes from the minor route; the raw iterative estimate is
//! kept alongside as `power_value`.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::math;
use crate::rational::{bareiss_det, RatPoly};
use crate::{Error, Result};

/// Which truncated matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Markov-chain matrix: geometric rows.
    A,
    /// Transfer-operator matrix: constant rows (inverse slopes to the power t).
    B,
    /// `A` of size `K+1` with first row and column removed.
    AHat,
    /// `B` of size `K+1` with first row and column removed.
    BHat,
    /// The null-recurrent matrix: row one all 1/2, other rows 1/4 on the band.
    D,
}

/// `K x K` truncation in structured form: row `i` starts at column
/// `max(i-1, 1)` with coefficient `c_first` (row 1) or `c_rest`, progressing
/// geometrically with `ratio` along the row.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    kind: OperatorKind,
    k: usize,
    lambda: f64,
    t: f64,
    c_first: f64,
    c_rest: f64,
    ratio: f64,
}

impl TruncatedOperator {
    pub fn build(kind: OperatorKind, k: usize, lambda: f64, t: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::Domain("truncation size K must be >= 1".into()));
        }
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Domain("lambda must lie in (0,1)".into()));
        }
        let u = math::powf(lambda, t);
        let base = math::powf(1.0 - lambda, t);
        let (c_first, c_rest, ratio) = match kind {
            OperatorKind::A => (base, base, u),
            OperatorKind::B => (base, u * base, 1.0),
            OperatorKind::AHat => (base * u, base, u),
            OperatorKind::BHat => (u * base, u * base, 1.0),
            // B at lambda^t = 1/2 normalised by e^{-P}; independent of (lambda, t)
            OperatorKind::D => (0.5, 0.25, 1.0),
        };
        Ok(TruncatedOperator {
            kind,
            k,
            lambda,
            t,
            c_first,
            c_rest,
            ratio,
        })
    }

    /// Same banded structure with both row coefficients rescaled; used for
    /// pressure-normalised partition-function matrices.
    pub fn rescaled(&self, factor: f64) -> Self {
        TruncatedOperator {
            c_first: self.c_first * factor,
            c_rest: self.c_rest * factor,
            ..self.clone()
        }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Entry at 1-based `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i >= 1 && i <= self.k && j >= 1 && j <= self.k);
        let start = (i - 1).max(1);
        if j < start {
            return 0.0;
        }
        let coef = if i == 1 { self.c_first } else { self.c_rest };
        coef * math::powi(self.ratio, (j - start) as i32)
    }

    /// Left action `w^T M` in `O(K)`.
    pub fn apply_left(&self, w: &[f64]) -> Vec<f64> {
        let k = self.k;
        assert_eq!(w.len(), k);
        let mut out = vec![0.0; k];
        // rows >= 2 contribute c_rest * T_j, T_j = sum_{i=2}^{min(j+1,K)} w_i r^{j+1-i}
        let mut t_acc = if k >= 2 { w[1] } else { 0.0 };
        let mut first_pow = 1.0; // ratio^{j-1}
        for j0 in 0..k {
            if j0 > 0 {
                let incoming = if j0 + 1 < k { w[j0 + 1] } else { 0.0 };
                t_acc = self.ratio * t_acc + incoming;
                first_pow *= self.ratio;
            }
            out[j0] = self.c_rest * t_acc + self.c_first * w[0] * first_pow;
        }
        if k == 1 {
            out[0] = self.c_first * w[0];
        }
        out
    }

    /// Right action `M v` in `O(K)`.
    pub fn apply_right(&self, v: &[f64]) -> Vec<f64> {
        let k = self.k;
        assert_eq!(v.len(), k);
        // U_s = sum_{j >= s} ratio^{j-s} v_j, backward recurrence
        let mut u_suffix = vec![0.0; k];
        let mut acc = 0.0;
        for s0 in (0..k).rev() {
            acc = v[s0] + self.ratio * acc;
            u_suffix[s0] = acc;
        }
        let mut out = vec![0.0; k];
        out[0] = self.c_first * u_suffix[0];
        for i0 in 1..k {
            out[i0] = self.c_rest * u_suffix[i0 - 1];
        }
        out
    }

    /// Dense copy, for tests and tiny truncations.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (1..=self.k)
            .map(|i| (1..=self.k).map(|j| self.entry(i, j)).collect())
            .collect()
    }

    /// Factor mapping the scaled-matrix leading root to this operator's
    /// eigenvalue, together with the scaled-matrix parameter `u`.
    fn scaled_root_params(&self) -> (f64, f64) {
        let u = math::powf(self.lambda, self.t);
        let base = math::powf(1.0 - self.lambda, self.t);
        match self.kind {
            OperatorKind::A | OperatorKind::B => (base, u),
            // hats are u*base times the all-ones band, i.e. the u = 1 family
            OperatorKind::AHat | OperatorKind::BHat => (u * base, 1.0),
            OperatorKind::D => (0.5, 0.5),
        }
    }
}

/// Characteristic polynomial `alpha_{t,K}(s)` of the `(1-lambda)^{-t}`-scaled
/// truncation, built from the three-term recurrence
/// `alpha_K = -s (alpha_{K-1} + u alpha_{K-2})`, `alpha_0 = 1`,
/// `alpha_1 = 1 - s`, with `u = lambda^t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    coeffs: Vec<f64>,
    u: f64,
}

impl CharPoly {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation of the coefficient form.  Near the top root this
    /// loses accuracy to cancellation once K reaches a few dozen; use
    /// [`CharPoly::eval_recurrence`] there.
    pub fn eval(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    /// Evaluate through the minor recurrence with adaptive rescaling;
    /// returns the value times an unrecorded positive factor, so only the
    /// sign is meaningful.
    pub fn eval_recurrence(&self, s: f64) -> f64 {
        let k = self.degree();
        let mut prev = 1.0f64; // alpha_0
        let mut cur = 1.0 - s; // alpha_1
        for _ in 2..=k {
            let next = -s * (cur + self.u * prev);
            prev = cur;
            cur = next;
            let m = math::abs(prev).max(math::abs(cur));
            if m > 1e250 {
                prev /= m;
                cur /= m;
            }
        }
        if k == 0 {
            prev
        } else {
            cur
        }
    }

    /// Largest real root: bracketed from above (where the sign of
    /// `(-1)^K alpha` is positive) and bisected on the recurrence evaluation.
    pub fn largest_real_root(&self) -> Result<f64> {
        let k = self.degree();
        if k == 0 {
            return Err(Error::Domain("constant polynomial has no root".into()));
        }
        let sign = |s: f64| -> f64 {
            let v = self.eval_recurrence(s);
            if k.is_multiple_of(2) {
                v
            } else {
                -v
            }
        };
        // above the spectral radius the leading-coefficient sign rules
        let mut hi = 2.0 * self.u.max(1.0);
        let mut guard = 0;
        while sign(hi) <= 0.0 {
            hi *= 2.0;
            guard += 1;
            if guard > 64 {
                return Err(Error::BracketFailure {
                    lo: 0.0,
                    hi,
                    f_lo: sign(0.0),
                    f_hi: sign(hi),
                });
            }
        }
        // descend until the sign flips; steps are far smaller than the gap
        // between the top two real roots in the intended range
        let step = hi / 4096.0;
        let mut lo = hi - step;
        let mut found = false;
        while lo > 0.0 {
            if sign(lo) <= 0.0 {
                found = true;
                break;
            }
            lo -= step;
        }
        if !found {
            return Err(Error::BracketFailure {
                lo: 0.0,
                hi,
                f_lo: sign(0.0),
                f_hi: sign(hi),
            });
        }
        let mut hi = lo + step;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if sign(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi.max(1.0) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `alpha_{t,K}` with `u = lambda^t` in floating point.
pub fn char_poly(k: usize, lambda: f64, t: f64) -> CharPoly {
    let u = math::powf(lambda, t);
    char_poly_in_u(k, u)
}

/// Same recurrence, parameterised directly by `u = lambda^t`.
pub fn char_poly_in_u(k: usize, u: f64) -> CharPoly {
    let mut a_prev = vec![1.0]; // alpha_0
    let mut a_cur = vec![1.0, -1.0]; // alpha_1 = 1 - s
    if k == 0 {
        return CharPoly { coeffs: a_prev, u };
    }
    for _ in 2..=k {
        // alpha_next = -s * (a_cur + u * a_prev)
        let mut mixed = vec![0.0; a_cur.len()];
        for (i, c) in a_cur.iter().enumerate() {
            mixed[i] += c;
        }
        for (i, c) in a_prev.iter().enumerate() {
            mixed[i] += u * c;
        }
        let mut next = vec![0.0; mixed.len() + 1];
        for (i, c) in mixed.iter().enumerate() {
            next[i + 1] = -c;
        }
        a_prev = a_cur;
        a_cur = next;
    }
    CharPoly { coeffs: a_cur, u }
}

/// Exact-rational characteristic polynomial for rational `u = lambda^t`.
pub fn char_poly_exact(k: usize, u: &BigRational) -> RatPoly {
    let mut a_prev = RatPoly::constant(BigRational::one());
    let mut a_cur = RatPoly::from_coeffs(vec![BigRational::one(), -BigRational::one()]);
    if k == 0 {
        return a_prev;
    }
    let neg_s = RatPoly::monomial(-BigRational::one(), 1);
    let u_poly = RatPoly::constant(u.clone());
    for _ in 2..=k {
        let next = neg_s.mul(&a_cur.add(&u_poly.mul(&a_prev)));
        a_prev = a_cur;
        a_cur = next;
    }
    a_cur
}

fn scaled_dense_rational(kind: OperatorKind, k: usize, u: &BigRational) -> Vec<Vec<RatPoly>> {
    // entries of the (1-lambda)^{-t}-scaled matrices, minus s on the diagonal
    let mut m = vec![vec![RatPoly::zero(); k]; k];
    for i in 1..=k {
        let start = (i - 1).max(1);
        for j in start..=k {
            let val = match kind {
                OperatorKind::A => {
                    let mut p = BigRational::one();
                    for _ in 0..(j - start) {
                        p *= u;
                    }
                    p
                }
                OperatorKind::B => {
                    if i == 1 {
                        BigRational::one()
                    } else {
                        u.clone()
                    }
                }
                _ => unreachable!("rational determinants are built for kinds A and B"),
            };
            m[i - 1][j - 1] = RatPoly::constant(val);
        }
    }
    for (i, row) in m.iter_mut().enumerate() {
        let diag = row[i].sub(&RatPoly::monomial(BigRational::one(), 1));
        row[i] = diag;
    }
    m
}

/// Do `A^t_K` and `B^t_K` share their characteristic polynomial?
///
/// With rational `u = lambda^t` both determinants are computed independently
/// by fraction-free elimination over `QQ[s]` and compared exactly.
pub fn char_poly_equal_ab_exact(k: usize, u: &BigRational) -> bool {
    if u <= &BigRational::zero() {
        return false;
    }
    let det_a = bareiss_det(&scaled_dense_rational(OperatorKind::A, k, u));
    let det_b = bareiss_det(&scaled_dense_rational(OperatorKind::B, k, u));
    det_a == det_b
}

/// Floating-point fallback for irrational `lambda^t`: the two determinants
/// are compared at `K+1` sample points (degree-K polynomials agreeing there
/// agree identically), each evaluated by dense LU elimination.
pub fn char_poly_equal_ab(k: usize, lambda: f64, t: f64) -> bool {
    let a = TruncatedOperator::build(OperatorKind::A, k, lambda, t).expect("valid params");
    let b = TruncatedOperator::build(OperatorKind::B, k, lambda, t).expect("valid params");
    let base = math::powf(1.0 - lambda, t);
    let samples: Vec<f64> = (0..=k)
        .map(|i| 0.37 + 4.1 * i as f64 / (k as f64 + 1.0))
        .collect();
    for &s in &samples {
        let da = dense_det_shift(&a.to_dense(), s * base);
        let db = dense_det_shift(&b.to_dense(), s * base);
        let scale = da.abs().max(db.abs()).max(1e-300);
        if ((da - db) / scale).abs() > 1e-10 {
            return false;
        }
    }
    true
}

// index-based elimination: the pivot row is read while later rows are written
#[allow(clippy::needless_range_loop)]
fn dense_det_shift(m: &[Vec<f64>], s: f64) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= s;
    }
    let mut det = 1.0;
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r][col]))
            .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())
            .unwrap();
        if pivot == 0.0 {
            return 0.0;
        }
        if pivot_row != col {
            a.swap(pivot_row, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    det
}

const PIVMIN: f64 = 1e-290;

/// Number of eigenvalues of the associated symmetric tridiagonal below `s`.
///
/// The characteristic minors `alpha_j(s)` coincide with those of the
/// symmetric tridiagonal matrix with diagonal `(1, 0, ..., 0)` and constant
/// off-diagonal `sqrt(s u)`; counting negative `LDL^T` pivots is therefore a
/// Sturm count, and the count is monotone in `s` above `max(u, 1)`.
fn sturm_count_below(s: f64, u: f64, k: usize) -> usize {
    let mut q = 1.0 - s;
    let mut neg = usize::from(q < 0.0);
    if q.abs() < PIVMIN {
        q = -PIVMIN;
    }
    let su = s * u;
    for _ in 2..=k {
        q = -s - su / q;
        if q < 0.0 {
            neg += 1;
        }
        if q.abs() < PIVMIN {
            q = if q < 0.0 { -PIVMIN } else { PIVMIN };
        }
    }
    neg
}

/// Largest root of `alpha_{.,K}` for the scaled family with parameter `u`,
/// by pivot-count bisection; stable at any `K`.
pub fn leading_root_scaled(u: f64, k: usize) -> f64 {
    if k == 1 {
        return 1.0;
    }
    let mut hi = 4.0 * u.max(1.0) + 2.0;
    let mut guard = 0;
    while sturm_count_below(hi, u, k) < k {
        hi *= 2.0;
        guard += 1;
        assert!(guard < 80, "no upper bound for the leading root");
    }
    let mut lo = 0.0;
    for _ in 0..140 {
        let mid = 0.5 * (lo + hi);
        if sturm_count_below(mid, u, k) == k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Leading eigenvalue of the truncated operator via the minor recurrence,
/// reported in the operator's own scale (the `x_{t,K}` convention for kinds
/// `A`/`B`).
pub fn leading_root(kind: OperatorKind, k: usize, lambda: f64, t: f64) -> Result<f64> {
    let op = TruncatedOperator::build(kind, k, lambda, t)?;
    let (scale, u) = op.scaled_root_params();
    Ok(scale * leading_root_scaled(u, k))
}

/// Outcome of a leading-eigenpair computation.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    kind: OperatorKind,
    lambda: f64,
    t: f64,
    /// Leading eigenvalue from the characteristic-minor bisection (the
    /// reliable route at every truncation size).
    pub value: f64,
    /// Raw power-iteration estimate (Aitken-accelerated Rayleigh sequence).
    pub power_value: f64,
    /// Converged left vector, sup-normalised.  See
    /// [`SpectralResult::left_vector_unit_first`] for the `v_1 = 1` view.
    pub left_vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl SpectralResult {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Left eigenvector normalised so the first entry is one.
    ///
    /// The entries grow roughly like `(1/(1-lambda^t))^j`, so this view can
    /// overflow for truncations in the thousands near the transition; the
    /// sup-normalised storage never does.
    pub fn left_vector_unit_first(&self) -> Vec<f64> {
        let v1 = self.left_vector[0];
        self.left_vector.iter().map(|&v| v / v1).collect()
    }

    /// Eigenvalue in the `(1-lambda)^{-t}`-scaled convention `s_{t,K}`.
    pub fn scaled_value(&self) -> f64 {
        self.value / math::powf(1.0 - self.lambda, self.t)
    }
}

/// Power iteration on the left action with a Sturm-snapped value.
///
/// Converges when the sup-norm residual of the approximate eigenpair drops
/// below `tol`; errors out after `max_iter` sweeps carrying the last
/// residual.
pub fn leading_eigen(op: &TruncatedOperator, tol: f64, max_iter: usize) -> Result<SpectralResult> {
    let k = op.size();
    let mut w = vec![1.0; k];
    let mut rayleigh_hist = [f64::NAN; 3];
    let mut last_residual = f64::INFINITY;
    let mut power_value = f64::NAN;
    let mut converged = false;
    let mut iterations = 0;
    for it in 1..=max_iter {
        iterations = it;
        let new = op.apply_left(&w);
        let mut num = 0.0;
        let mut den = 0.0;
        for (a, b) in new.iter().zip(w.iter()) {
            num += a * b;
            den += b * b;
        }
        let rayleigh = num / den;
        let mut resid: f64 = 0.0;
        let mut sup: f64 = 0.0;
        for (a, b) in new.iter().zip(w.iter()) {
            resid = resid.max(math::abs(a - rayleigh * b));
            sup = sup.max(*a);
        }
        resid /= rayleigh;
        rayleigh_hist = [rayleigh_hist[1], rayleigh_hist[2], rayleigh];
        power_value = aitken(rayleigh_hist).unwrap_or(rayleigh);
        for (dst, src) in w.iter_mut().zip(new.iter()) {
            *dst = src / sup;
        }
        last_residual = resid;
        if resid <= tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations,
            residual: last_residual,
        });
    }
    let (scale, u) = op.scaled_root_params();
    let value = scale * leading_root_scaled(u, k);
    Ok(SpectralResult {
        kind: op.kind(),
        lambda: op.lambda(),
        t: op.t(),
        value,
        power_value,
        left_vector: w,
        iterations,
        residual: last_residual,
    })
}

/// Richardson extrapolation in `1/K^2` from a geometric K-schedule: near the
/// null-recurrent point the truncation gap closes like `c/K^2`, so
/// `(4 x_{2K} - x_K)/3` removes the leading term.
pub fn richardson_k2(x_k: f64, x_2k: f64) -> f64 {
    (4.0 * x_2k - x_k) / 3.0
}

fn aitken(h: [f64; 3]) -> Option<f64> {
    let [x0, x1, x2] = h;
    if !(x0.is_finite() && x1.is_finite() && x2.is_finite()) {
        return None;
    }
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let dd = d2 - d1;
    // reject only when the second difference is at rounding-noise level
    if dd == 0.0 || dd.abs() <= 1e-14 * x2.abs() {
        return None;
    }
    let acc = x2 - d2 * d2 / dd;
    if acc.is_finite() {
        Some(acc)
    } else {
        None
    }
}

/// Maximum relative defect of the left-eigenvector recurrence
/// `a_n = r (a_{n-1} - a_{n-2})` reconstructed from a kind-`B` result, over
/// `3 <= j <= K-1`, with `r = x / (lambda^t (1-lambda)^t)`.
pub fn eigvec_recurrence_check(result: &SpectralResult, lambda: f64, t: f64) -> f64 {
    let v = result.left_vector_unit_first();
    let k = v.len();
    if k < 4 {
        return 0.0;
    }
    let u = math::powf(lambda, t);
    let r = result.value / (u * math::powf(1.0 - lambda, t));
    let lam_inv_t = 1.0 / u;
    // v_j = a_j - lambda^{-t} a_{j-1}  =>  a_j = v_j + lambda^{-t} a_{j-1}
    let mut a = vec![0.0; k + 1];
    a[1] = 1.0;
    for j in 2..=k {
        a[j] = v[j - 1] + lam_inv_t * a[j - 1];
    }
    let mut worst: f64 = 0.0;
    for j in 3..=k - 1 {
        let predicted = r * (a[j - 1] - a[j - 2]);
        let defect = math::abs(a[j] - predicted) / math::abs(a[j]).max(1e-300);
        worst = worst.max(defect);
    }
    worst
}

/// `psi(t) = (1-lambda)^t / (1 - lambda^t)`; the exponential of the pressure
/// on the recurrent side.
pub fn psi(lambda: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Err(Error::Pole("psi has a pole at t = 0"));
    }
    let u = math::powf(lambda, t);
    Ok(math::powf(1.0 - lambda, t) / (1.0 - u))
}

/// First and second derivative of `psi` in `t`; strictly negative and
/// strictly positive respectively on `(0, infinity)`.
pub fn psi_derivatives(lambda: f64, t: f64) -> Result<(f64, f64)> {
    let value = psi(lambda, t)?;
    let u = math::powf(lambda, t);
    let ln_lam = math::ln(lambda);
    let ln_one_minus = math::ln(1.0 - lambda);
    let inner = ln_one_minus + u / (1.0 - u) * ln_lam;
    let d1 = value * inner;
    let d2 = value * (inner * inner + u / ((1.0 - u) * (1.0 - u)) * ln_lam * ln_lam);
    Ok((d1, d2))
}

/// Closed-form pressure: `log psi(t)` while `lambda^t <= 1/2`, and
/// `log(4 lambda^t (1-lambda)^t)` beyond the transition (this branch also
/// covers `t <= 0`).  The two branches agree at `lambda^t = 1/2`.
pub fn pressure_closed(lambda: f64, t: f64) -> f64 {
    let u = math::powf(lambda, t);
    if u <= 0.5 {
        t * math::ln_1p(-lambda) - math::ln_1p(-u)
    } else {
        math::LN_4 + t * math::ln(lambda * (1.0 - lambda))
    }
}

/// Phase-transition location `t_0 = -log 2 / log lambda`.
pub fn t0(lambda: f64) -> f64 {
    -math::LN_2 / math::ln(lambda)
}

/// One-sided derivative data of the pressure at its phase transition.
#[derive(Debug, Clone, Copy)]
pub struct PhaseTransitionReport {
    pub t0: f64,
    pub first_left: f64,
    pub first_right: f64,
    pub second_left: f64,
    pub second_right: f64,
}

/// One-sided first and second derivatives of the closed-form pressure at
/// `t_0`, by second-order one-sided differences with one Richardson level
/// (base step `1e-4`).
pub fn phase_transition_report(lambda: f64) -> PhaseTransitionReport {
    let t_star = t0(lambda);
    let f = |t: f64| pressure_closed(lambda, t);
    let h = 1e-4;

    let d1_side = |h: f64, sgn: f64| {
        (-3.0 * f(t_star) + 4.0 * f(t_star + sgn * h) - f(t_star + sgn * 2.0 * h)) / (2.0 * h) * sgn
    };
    let d2_side = |h: f64, sgn: f64| {
        (2.0 * f(t_star) - 5.0 * f(t_star + sgn * h) + 4.0 * f(t_star + sgn * 2.0 * h)
            - f(t_star + sgn * 3.0 * h))
            / (h * h)
    };
    let richardson = |g: &dyn Fn(f64) -> f64| (4.0 * g(h / 2.0) - g(h)) / 3.0;

    PhaseTransitionReport {
        t0: t_star,
        first_left: richardson(&|h| d1_side(h, -1.0)),
        first_right: richardson(&|h| d1_side(h, 1.0)),
        second_left: richardson(&|h| d2_side(h, -1.0)),
        second_right: richardson(&|h| d2_side(h, 1.0)),
    }
}

/// One sample of the pressure curve, with the slope envelope
/// `log 4 + t log(1-lambda) >= P >= log 4 + t log(lambda(1-lambda))`
/// attached for plotting and sanity checks (valid for `t >= 0`).
#[derive(Debug, Clone)]
pub struct PressurePoint {
    pub t: f64,
    pub p_closed: f64,
    /// `x_{t,K}` for each requested truncation size.
    pub x_by_k: Vec<f64>,
    pub envelope_upper: f64,
    pub envelope_lower: f64,
}

/// Sample the closed-form pressure and the truncated leading eigenvalues on a
/// `t` grid.
pub fn pressure_curve(
    lambda: f64,
    t_grid: &[f64],
    k_schedule: &[usize],
) -> Result<Vec<PressurePoint>> {
    t_grid
        .iter()
        .map(|&t| {
            let x_by_k = k_schedule
                .iter()
                .map(|&k| leading_root(OperatorKind::B, k, lambda, t))
                .collect::<Result<Vec<_>>>()?;
            Ok(PressurePoint {
                t,
                p_closed: pressure_closed(lambda, t),
                x_by_k,
                envelope_upper: math::LN_4 + t * math::ln_1p(-lambda),
                envelope_lower: math::LN_4 + t * math::ln(lambda * (1.0 - lambda)),
            })
        })
        .collect()
}
