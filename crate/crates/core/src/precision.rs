//! Horizon escalation: rerun a computation with doubled precision whenever
//! a valuation turns out to be indeterminate.

use crate::error::{Error, Result};

pub const DEFAULT_HORIZON: i64 = 64;
pub const HORIZON_CAP: i64 = 4096;

/// Runs `f(horizon)` for horizon = initial, 2*initial, ... up to `cap`.
pub fn run_with_precision<T>(initial: i64, cap: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut h = initial.max(1);
    loop {
        match f(h) {
            Err(Error::IndeterminateValuation { .. }) => {
                if h >= cap {
                    return Err(Error::PrecisionExhausted(h));
                }
                h = (h * 2).min(cap);
            }
            other => return other,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escalates_until_success() {
        let mut seen = Vec::new();
        let out = run_with_precision(8, 4096, |h| {
            seen.push(h);
            if h < 40 {
                Err(Error::IndeterminateValuation { horizon: h })
            } else {
                Ok(h)
            }
        });
        assert_eq!(out, Ok(64));
        assert_eq!(seen, vec![8, 16, 32, 64]);
    }

    #[test]
    fn gives_up_at_the_cap() {
        let out: Result<()> = run_with_precision(64, 256, |h| Err(Error::IndeterminateValuation { horizon: h }));
        assert_eq!(out, Err(Error::PrecisionExhausted(256)));
        let other: Result<()> = run_with_precision(64, 256, |_| Err(Error::SingularMatrix));
        assert_eq!(other, Err(Error::SingularMatrix));
    }
}
