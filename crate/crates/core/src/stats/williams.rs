use serde::Serialize;

use super::special::student_t_sf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WilliamsResult {
    pub t_stat: f64,
    pub df: u32,
    /// One-tailed `P(T > t)`: small values mean `r13` is significantly
    /// greater than `r23`.
    pub p_one_tailed: f64,
}

/// Williams test for the difference between two dependent correlations that
/// share a variable.
///
/// Variable 3 is the gold measurement and 1, 2 are the competing metrics, so
/// `r13` and `r23` are the correlations being compared and `r12` is the
/// correlation between the two metrics.
pub fn williams_test(r12: f64, r13: f64, r23: f64, n: usize) -> Result<WilliamsResult> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!(
            "Williams test needs n >= 4 (got {n})"
        )));
    }
    for (name, r) in [("r12", r12), ("r13", r13), ("r23", r23)] {
        if !(r.abs() < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "{name} = {r} is outside (-1, 1)"
            )));
        }
    }
    let nf = n as f64;
    let k = 1.0 - r12 * r12 - r13 * r13 - r23 * r23 + 2.0 * r12 * r13 * r23;
    let denom = 2.0 * k * (nf - 1.0) / (nf - 3.0) + ((r13 + r23).powi(2) / 4.0) * (1.0 - r12).powi(3);
    if !(denom > 0.0) {
        return Err(Error::UndefinedCorrelation(
            "inconsistent correlation matrix".into(),
        ));
    }
    let t_stat = (r13 - r23) * ((nf - 1.0) * (1.0 + r12)).sqrt() / denom.sqrt();
    let df = (n - 3) as u32;
    Ok(WilliamsResult {
        t_stat,
        df,
        p_one_tailed: student_t_sf(t_stat, df),
    })
}
