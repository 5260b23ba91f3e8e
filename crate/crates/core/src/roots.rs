//! Bracketed bisection shared by the locus solver and the path searches.

use crate::error::{Error, Result};

/// Bisects `f` on the open bracket `(lo, hi)`.
///
/// Endpoints are never evaluated: the caller states which side is
/// negative, which lets the solver work on open intervals whose limits are
/// only approached. Stops once the bracket is narrower than `rel_tol`
/// times the larger endpoint magnitude, or no double lies strictly inside.
pub fn bisect<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    negative_at_lo: bool,
    rel_tol: f64,
    max_iter: usize,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    debug_assert!(lo < hi);
    for _ in 0..max_iter {
        let mid = lo + 0.5 * (hi - lo);
        if hi - lo <= rel_tol * lo.abs().max(hi.abs()) || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let value = f(mid)?;
        if value == 0.0 {
            return Ok(mid);
        }
        if (value < 0.0) == negative_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence { max_iter })
}

/// Scans `grid` for the first adjacent pair on which `f` changes sign and
/// returns that pair with `f` evaluated at its left end.
pub fn first_sign_change<F>(mut f: F, grid: &[f64]) -> Result<Option<(f64, f64, f64)>>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut iter = grid.iter().copied();
    let Some(mut prev) = iter.next() else {
        return Ok(None);
    };
    let mut prev_value = f(prev)?;
    for x in iter {
        let value = f(x)?;
        if prev_value == 0.0 || (prev_value < 0.0) != (value < 0.0) {
            return Ok(Some((prev, x, prev_value)));
        }
        prev = x;
        prev_value = value;
    }
    Ok(None)
}
