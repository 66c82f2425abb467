//! Exact posterior superiority probability for two Beta-Bernoulli arms.
//!
//! Thompson-style allocation needs P(P1 > P0 | data) where P_k has a
//! Beta(a_k + S_k, b_k + n_k - S_k) posterior. Evaluating this deterministically
//! (rather than by posterior sampling) keeps simulated paths reproducible and
//! free of Monte Carlo noise in the allocation probabilities themselves.
//!
//! When a posterior shape parameter is a positive integer, which is always the
//! case under the default Beta(1,1) prior, the probability has a finite-sum
//! closed form evaluated in log space. Non-integer shapes fall back to
//! adaptive Simpson quadrature against the exact Beta CDF.

use crate::error::Error;
use crate::Result;
use statrs::distribution::{Beta, Continuous, ContinuousCDF};
use statrs::function::beta::ln_beta;

const QUAD_TOL: f64 = 1e-10;

/// P(P1 > P0) for posteriors built from successes `s_k` out of `n_k` under a
/// `(a0, b0, a1, b1)` prior.
pub fn thompson_prob(
    s0: u32,
    n0: u32,
    s1: u32,
    n1: u32,
    prior: (f64, f64, f64, f64),
) -> Result<f64> {
    if s0 > n0 || s1 > n1 {
        return Err(Error::Configuration(format!(
            "success counts exceed arm sizes: {s0}/{n0}, {s1}/{n1}"
        )));
    }
    let (pa0, pb0, pa1, pb1) = prior;
    if pa0 <= 0.0 || pb0 <= 0.0 || pa1 <= 0.0 || pb1 <= 0.0 {
        return Err(Error::Configuration(format!(
            "prior parameters must be positive: {prior:?}"
        )));
    }
    let a0 = pa0 + f64::from(s0);
    let b0 = pb0 + f64::from(n0 - s0);
    let a1 = pa1 + f64::from(s1);
    let b1 = pb1 + f64::from(n1 - s1);
    Ok(superiority(a1, b1, a0, b0))
}

/// P(X > Y) for X ~ Beta(a1, b1), Y ~ Beta(a0, b0).
pub fn superiority(a1: f64, b1: f64, a0: f64, b0: f64) -> f64 {
    // Prefer whichever integral shape gives the shorter sum; the complement
    // identity P(X > Y) = 1 - P(Y > X) holds because ties have measure zero.
    match (as_small_integer(a1), as_small_integer(a0)) {
        (Some(k1), Some(k0)) if k0 < k1 => 1.0 - integer_sum(k0, b0, a1, b1),
        (Some(k1), _) => integer_sum(k1, b1, a0, b0),
        (None, Some(k0)) => 1.0 - integer_sum(k0, b0, a1, b1),
        (None, None) => quadrature(a1, b1, a0, b0),
    }
}

///// Closed form for integer first shape: P(X > Y) with X ~ Beta(k, b1) equals
/// sum_{j=0}^{k-1} B(a0 + j, b0 + b1) / ((b1 + j) B(1 + j, b1) B(a0, b0)).
///
/// Consecutive terms are related by a rational factor, so the sum runs as a
/// product recurrence with a single log-beta evaluation up front. Every term
/// lies in [0, 1], which keeps the linear-space product safe from overflow.
fn integer_sum(k: u32, b1: f64, a0: f64, b0: f64) -> f64 {
    let mut term = (ln_beta(a0, b0 + b1) - ln_beta(a0, b0)).exp();
    let mut total = term;
    for j in 0..k - 1 {
        let j = f64::from(j);
        term *=
            (a0 + j) / (a0 + j + b0 + b1) * (b1 + j) / (b1 + j + 1.0) * (1.0 + j + b1) / (1.0 + j);
        total += term;
    }
    total.clamp(0.0, 1.0)
}

fn as_small_integer(x: f64) -> Option<u32> {
    if x.fract() == 0.0 && (1.0..=1e7).contains(&x) {
        Some(x as u32)
    } else {
        None
    }
}

/// Adaptive Simpson integration of P(X > Y) = int pdf_X(x) CDF_Y(x) dx,
/// oriented so the density being integrated is bounded when possible.
fn quadrature(a1: f64, b1: f64, a0: f64, b0: f64) -> f64 {
    if a1 >= 1.0 && b1 >= 1.0 {
        let x = Beta::new(a1, b1).expect("valid shapes");
        let y = Beta::new(a0, b0).expect("valid shapes");
        integrate(&|t| x.pdf(t) * y.cdf(t))
    } else {
        let x = Beta::new(a1, b1).expect("valid shapes");
        let y = Beta::new(a0, b0).expect("valid shapes");
        integrate(&|t| y.pdf(t) * (1.0 - x.cdf(t)))
    }
    .clamp(0.0, 1.0)
}

fn integrate(f: &dyn Fn(f64) -> f64) -> f64 {
    let safe = |t: f64| {
        let v = f(t);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    adaptive_simpson(
        &safe,
        0.0,
        1.0,
        safe(0.0),
        safe(0.5),
        safe(1.0),
        QUAD_TOL,
        40,
    )
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    flo: f64,
    fmid: f64,
    fhi: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let mid = 0.5 * (lo + hi);
    let lmid = 0.5 * (lo + mid);
    let rmid = 0.5 * (mid + hi);
    let flmid = f(lmid);
    let frmid = f(rmid);
    let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    let left = (mid - lo) / 6.0 * (flo + 4.0 * flmid + fmid);
    let right = (hi - mid) / 6.0 * (fmid + 4.0 * frmid + fhi);
    let split = left + right;
    if depth == 0 || (split - whole).abs() <= 15.0 * tol {
        split + (split - whole) / 15.0
    } else {
        adaptive_simpson(f, lo, mid, flo, flmid, fmid, tol / 2.0, depth - 1)
            + adaptive_simpson(f, mid, hi, fmid, frmid, fhi, tol / 2.0, depth - 1)
    }
}
