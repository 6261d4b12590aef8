//! Point-biserial correlation and Student-t significance.
//!
//! The two-sided p-value of `t` with `df` degrees of freedom is
//! `I_x(df/2, 1/2)` with `x = df / (df + t²)`, where `I` is the regularized
//! incomplete beta function. `I_x(a, b)` is evaluated as
//!
//! ```text
//! I_x(a, b) = x^a (1-x)^b / (a B(a, b)) · 1 / (1 + d1 / (1 + d2 / (1 + ...)))
//! d(2m+1) = -(a+m)(a+b+m) x / ((a+2m)(a+2m+1))
//! d(2m)   =  m(b-m) x / ((a+2m-1)(a+2m))
//! ```
//!
//! using the modified Lentz algorithm (tiny = 1e-300, stop when the update
//! factor is within 1e-16 of one, at most 500 iterations), and through
//! `I_x(a, b) = 1 - I_{1-x}(b, a)` when `x > (a+1)/(a+b+2)`. `ln B(a, b)`
//! comes from `lgamma`.

use libm::{copysign, exp, fabs, lgamma, log, sqrt};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("TooFewSamples: need at least 3 transfers, got {0}")]
    TooFewSamples(usize),
    #[error("ZeroVariance: indicator or scores are constant")]
    ZeroVariance,
    #[error("indicator has {indicator} entries but there are {scores} scores")]
    LengthMismatch { indicator: usize, scores: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub r: f64,
    pub n: usize,
    pub t_stat: f64,
    pub p_value: f64,
    /// Number of transfers where the indicator is set.
    pub support: usize,
}

/// Pearson correlation of a binary indicator with real scores, its t
/// statistic `r·sqrt((n-2)/(1-r²))` and the two-sided p-value on `n-2`
/// degrees of freedom.
pub fn correlate(indicator: &[bool], scores: &[f64]) -> Result<CorrelationResult, StatsError> {
    let n = indicator.len();
    if n != scores.len() {
        return Err(StatsError::LengthMismatch {
            indicator: n,
            scores: scores.len(),
        });
    }
    if n < 3 {
        return Err(StatsError::TooFewSamples(n));
    }
    let support = indicator.iter().filter(|&&b| b).count();
    if support == 0 || support == n {
        return Err(StatsError::ZeroVariance);
    }
    let nf = n as f64;
    let mean_x = support as f64 / nf;
    let mean_y = scores.iter().sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&b, &y) in indicator.iter().zip(scores) {
        let dx = if b { 1.0 } else { 0.0 } - mean_x;
        let dy = y - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if syy == 0.0 {
        return Err(StatsError::ZeroVariance);
    }
    let r = (sxy / sqrt(sxx * syy)).clamp(-1.0, 1.0);
    let df = nf - 2.0;
    let (t_stat, p_value) = if fabs(r) >= 1.0 {
        (copysign(f64::INFINITY, r), 0.0)
    } else {
        let t = r * sqrt(df / (1.0 - r * r));
        (t, student_t_two_sided(t, df))
    };
    Ok(CorrelationResult {
        r,
        n,
        t_stat,
        p_value,
        support,
    })
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided(t: f64, df: f64) -> f64 {
    if t.is_nan() || df <= 0.0 {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(x, df / 2.0, 0.5).clamp(0.0, 1.0)
}

/// `I_x(a, b)` for `a, b > 0` and `0 <= x <= 1`; NaN outside that domain.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) || a <= 0.0 || b <= 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        return 1.0 - regularized_incomplete_beta(1.0 - x, b, a);
    }
    let ln_beta = lgamma(a) + lgamma(b) - lgamma(a + b);
    let front = exp(a * log(x) + b * log(1.0 - x) - ln_beta) / a;
    front * beta_continued_fraction(x, a, b)
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 500;

    let guard = |v: f64| if fabs(v) < TINY { TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / guard(1.0 - (a + b) * x / (a + 1.0));
    let mut f = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let even = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
        d = 1.0 / guard(1.0 + even * d);
        c = guard(1.0 + even / c);
        f *= d * c;
        let odd = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
        d = 1.0 / guard(1.0 + odd * d);
        c = guard(1.0 + odd / c);
        let delta = d * c;
        f *= delta;
        if fabs(delta - 1.0) < EPS {
            break;
        }
    }
    f
}
