//! `start:stop:step` grid specifications.
//!
//! Grids include `start` and exclude `stop`, up to a rounding guard of half a
//! step times `1e-9`; a bare number is a one-point grid.

use std::str::FromStr;

/// A one-dimensional parameter grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn single(value: f64) -> Self {
        GridSpec {
            start: value,
            stop: value,
            step: 0.0,
        }
    }

    pub fn is_single(&self) -> bool {
        self.step == 0.0
    }

    /// Materialise the grid values in order.
    pub fn values(&self) -> Vec<f64> {
        if self.is_single() {
            return vec![self.start];
        }
        let mut out = Vec::new();
        let guard = self.step * 1e-9;
        let mut k = 0u64;
        loop {
            let v = self.start + k as f64 * self.step;
            if v >= self.stop - guard {
                break;
            }
            out.push(v);
            k += 1;
            if k > 100_000_000 {
                break;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.values().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [single] => {
                let v: f64 = single
                    .parse()
                    .map_err(|e| format!("bad number {single:?}: {e}"))?;
                Ok(GridSpec::single(v))
            }
            [start, stop, step] => {
                let start: f64 = start
                    .parse()
                    .map_err(|e| format!("bad start {start:?}: {e}"))?;
                let stop: f64 = stop
                    .parse()
                    .map_err(|e| format!("bad stop {stop:?}: {e}"))?;
                let step: f64 = step
                    .parse()
                    .map_err(|e| format!("bad step {step:?}: {e}"))?;
                if step <= 0.0 {
                    return Err("grid step must be positive".into());
                }
                if stop < start {
                    return Err("grid stop must be >= start".into());
                }
                Ok(GridSpec { start, stop, step })
            }
            _ => Err(format!("expected `value` or `start:stop:step`, got {s:?}")),
        }
    }
}

/// Cartesian sweep in row-major order (outer grid first), capped.
pub fn cartesian(
    outer: &GridSpec,
    inner: &GridSpec,
    cap: usize,
) -> Result<Vec<(f64, f64)>, String> {
    let a = outer.values();
    let b = inner.values();
    let n = a.len().saturating_mul(b.len());
    if n > cap {
        return Err(format!("grid of {n} points exceeds the cap of {cap}"));
    }
    let mut out = Vec::with_capacity(n);
    for &x in &a {
        for &y in &b {
            out.push((x, y));
        }
    }
    Ok(out)
}
