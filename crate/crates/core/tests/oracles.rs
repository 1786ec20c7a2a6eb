//! Heavier cross-module oracle checks: exact-rational map iteration, dense
//! determinants against the recurrence polynomials, a chi-squared test of the
//! kernel sampler, and the brute-truncation entropy oracle.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use lambda_thermo_core::map::{self, MapParams, StatePoint};
use lambda_thermo_core::measures;
use lambda_thermo_core::rational::{bareiss_det, big_rational, rational_to_f64, RatPoly};
use lambda_thermo_core::spectra;
use lambda_thermo_core::stochastic::{KernelSampler, SplitMix64};

fn rat(n: i64, d: i64) -> BigRational {
    big_rational(n, d)
}

/// Exact one step of the map on rationals.
fn exact_step(x: &BigRational, lambda: &BigRational) -> BigRational {
    let one = BigRational::one();
    if x > lambda {
        // W_1
        (x - lambda) / (&one - lambda)
    } else {
        // find the cell exactly
        let mut hi = lambda.clone(); // lambda^1
        let mut lo = lambda * lambda;
        loop {
            if x > &lo && x <= &hi {
                break;
            }
            hi = lo.clone();
            lo *= lambda;
        }
        // x in (lambda^n, lambda^{n-1}]: F x = (x - lambda^n)/(lambda(1-lambda))
        (x - &lo) / (lambda * (&one - lambda))
    }
}

fn exact_state(x: &BigRational, lambda: &BigRational) -> u32 {
    let mut n = 1u32;
    let mut hi = BigRational::one();
    let mut lo = lambda.clone();
    loop {
        if x > &lo && x <= &hi {
            return n;
        }
        n += 1;
        hi = lo.clone();
        lo *= lambda;
        assert!(n < 10_000);
    }
}

#[test]
fn conjugacy_with_exact_rational_iteration() {
    // along a 50-step orbit of step(), reconstruct each point exactly from
    // its (state, rel) pair, apply the raw affine formula in exact rational
    // arithmetic, and re-encode: the single-step images must agree.  (Whole
    // orbits cannot be compared at fixed tolerance: the map is expanding, so
    // representation error doubles-and-more per step.)
    for &(num, den) in &[(2i64, 5i64), (3, 10), (9, 20)] {
        let lam_exact = rat(num, den);
        let lam = num as f64 / den as f64;
        let params = MapParams::new(lam).unwrap();
        let mut rng = SplitMix64::new(2112);
        for _ in 0..20 {
            let mut pt = StatePoint::from_unit(rng.next_open01(), &params).unwrap();
            for it in 0..50 {
                // exact reconstruction of the current point
                let rel_exact = BigRational::from_float(pt.rel).unwrap();
                let one = BigRational::one();
                let mut hi = BigRational::one();
                for _ in 1..pt.state {
                    hi *= &lam_exact;
                }
                let x = &hi * (&lam_exact + &rel_exact * (&one - &lam_exact));
                // one exact step, re-encoded
                let x_next = exact_step(&x, &lam_exact);
                let want_state = exact_state(&x_next, &lam_exact);
                let mut hi2 = BigRational::one();
                for _ in 1..want_state {
                    hi2 *= &lam_exact;
                }
                let lo2 = &hi2 * &lam_exact;
                let want_rel = rational_to_f64(&((&x_next - &lo2) / (&hi2 - &lo2)));
                // one float step
                pt = map::step(pt, &params).unwrap();
                assert_eq!(pt.state, want_state, "iterate {it}");
                assert!(
                    (pt.rel - want_rel).abs() < 1e-12,
                    "iterate {it}: rel {} vs exact {want_rel}",
                    pt.rel
                );
            }
        }
    }
}

#[test]
fn char_poly_recurrence_matches_bareiss_determinants() {
    // the recurrence polynomial equals both fraction-free determinants
    for &(n, d) in &[(1i64, 3i64), (2, 5), (1, 2), (3, 5)] {
        let u = rat(n, d);
        for k in 1..=8usize {
            assert!(spectra::char_poly_equal_ab_exact(k, &u), "K={k} u={n}/{d}");
            let rec = spectra::char_poly_exact(k, &u);
            // independent dense determinant of the scaled B-matrix
            let mut m = vec![vec![RatPoly::zero(); k]; k];
            for i in 1..=k {
                let start = (i - 1).max(1);
                for j in start..=k {
                    let c = if i == 1 {
                        BigRational::one()
                    } else {
                        u.clone()
                    };
                    m[i - 1][j - 1] = RatPoly::constant(c);
                }
            }
            for (i, row) in m.iter_mut().enumerate() {
                let d = row[i].sub(&RatPoly::monomial(BigRational::one(), 1));
                row[i] = d;
            }
            let det = bareiss_det(&m);
            assert_eq!(det, rec, "K={k} u={n}/{d}");
        }
    }
}

#[test]
fn kernel_sampler_chi_squared() {
    // 10^6 draws per state; 31 bins plus tail, significance 10^-3
    // (critical value chi2_{0.999, df=31} = 61.098)
    let lam = 0.45f64;
    let t = 1.3f64;
    let u = lam.powf(t);
    let sampler = KernelSampler::new(lam, t).unwrap();
    let mut rng = SplitMix64::new(31415);
    let n = 1_000_000usize;
    for &state in &[1u32, 2, 5, 20] {
        let start = state.max(2) - 1;
        let bins = 31usize;
        let mut counts = vec![0u64; bins + 1];
        for _ in 0..n {
            let j = sampler.sample(state, &mut rng);
            let off = (j - start) as usize;
            if off < bins {
                counts[off] += 1;
            } else {
                counts[bins] += 1;
            }
        }
        let mut chi2 = 0.0;
        for (off, &count) in counts.iter().enumerate().take(bins) {
            let p = (1.0 - u) * u.powi(off as i32);
            let expect = p * n as f64;
            let diff = count as f64 - expect;
            chi2 += diff * diff / expect;
        }
        let p_tail = u.powi(bins as i32);
        let expect = p_tail * n as f64;
        let diff = counts[bins] as f64 - expect;
        chi2 += diff * diff / expect;
        assert!(chi2 < 61.098, "state {state}: chi2 = {chi2}");
    }
}

#[test]
fn variational_entropy_brute_truncation() {
    // entropy of the stationary chain by brute truncation at K = 200
    for &(lam, t) in &[(1.0 / 3.0, 1.0), (0.3, 1.2), (0.42, 1.1)] {
        let v = measures::variational_value(lam, t).unwrap();
        let m = measures::invariant_measure(lam, t).unwrap();
        let k_max = 200u32;
        let mut h = 0.0;
        for i in 1..=k_max {
            let vi = m.mass(i);
            let mut row = 0.0;
            for j in (i.max(2) - 1)..=(i + 700) {
                let p = measures::conformal_transition(i, j, lam, t);
                if p > 0.0 {
                    row -= p * p.ln();
                }
            }
            h += vi * row;
        }
        assert!(
            (h - v.entropy).abs() < 1e-10,
            "lam={lam} t={t}: brute {h} vs closed {}",
            v.entropy
        );
    }
}

#[test]
fn cylinder_mass_shift_conformality() {
    // m([e_0 e_1 ... ]) = e^{Phi(e_0) - p} m([e_1 ...]) on admissible words
    let mut rng = SplitMix64::new(777);
    for &(lam, t) in &[(0.3, 1.0), (0.35, 1.4)] {
        let p = measures::conformal_pressure(lam, t);
        let params = MapParams::new(lam).unwrap();
        for _ in 0..100 {
            let len = 2 + (rng.next_u64() % 6) as usize;
            let mut symbols = Vec::with_capacity(len);
            let mut prev = 1 + (rng.next_u64() % 6) as u32;
            symbols.push(prev);
            for _ in 1..len {
                let lo = prev.max(2) - 1;
                let e = lo + (rng.next_u64() % 5) as u32;
                symbols.push(e);
                prev = e;
            }
            let whole = map::CylinderWord::new(symbols.clone());
            let shifted = map::CylinderWord::new(symbols[1..].to_vec());
            let lhs = measures::cylinder_conformal_mass(&whole, lam, t).unwrap();
            let phi = -t * map::log_abs_deriv(symbols[0], &params);
            let rhs =
                (phi - p).exp() * measures::cylinder_conformal_mass(&shifted, lam, t).unwrap();
            assert!(
                ((lhs - rhs) / rhs).abs() < 1e-12,
                "word {symbols:?}: {lhs} vs {rhs}"
            );
        }
    }
}

#[test]
fn gibbs_ratio_ignores_interior_symbols() {
    // equality across 100 random admissible interiors sharing (e_0, e_last, n)
    let lam = 0.32f64;
    let t = 1.1f64;
    let mut rng = SplitMix64::new(51);
    let e0 = 3u32;
    let e_last = 2u32;
    let n = 7usize;
    let mut reference: Option<f64> = None;
    let mut produced = 0;
    while produced < 100 {
        // random admissible interior between e0 and e_last
        let mut symbols = vec![e0];
        let mut ok = true;
        for pos in 1..n - 1 {
            let prev = symbols[pos - 1];
            let lo = prev.max(2) - 1;
            let e = lo + (rng.next_u64() % 4) as u32;
            symbols.push(e);
        }
        let prev = symbols[n - 2];
        if e_last + 1 < prev {
            ok = false; // cannot step down to e_last in one move
        }
        if !ok {
            continue;
        }
        symbols.push(e_last);
        let w = map::CylinderWord::new(symbols);
        if !w.is_admissible() {
            continue;
        }
        let r = measures::gibbs_ratio(&w, lam, t).unwrap();
        match reference {
            None => reference = Some(r),
            Some(r0) => assert!(((r - r0) / r0).abs() < 1e-12),
        }
        produced += 1;
    }
}

#[test]
fn exact_rational_identities_for_alpha() {
    // r^{-K} alpha(r) = (-1)^K u^K at r = 1/(1-u), verified for K <= 20 at
    // several rationals (exact arithmetic end to end)
    for &(n, d) in &[(1i64, 3i64), (2, 5), (3, 7), (1, 2)] {
        let u = rat(n, d);
        let r = BigRational::one() / (BigRational::one() - &u);
        for k in 1..=20usize {
            let p = spectra::char_poly_exact(k, &u);
            let mut r_pow = BigRational::one();
            let mut u_pow = BigRational::one();
            for _ in 0..k {
                r_pow *= &r;
                u_pow *= &u;
            }
            let lhs = p.eval(&r) / r_pow;
            let rhs = if k % 2 == 0 { u_pow } else { -u_pow };
            assert_eq!(lhs, rhs);
        }
    }
    let _ = BigInt::zero();
}
