//! Welch's unequal-variance two-sided t-test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::student_t_sf;
use crate::stats;

/// Outcome of a Welch test at a fixed confidence level.
#[derive(Debug, Clone, Serialize)]
pub struct WelchTest {
    pub t: f64,
    /// Welch-Satterthwaite degrees of freedom.
    pub dof: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// True when the samples are statistically distinct at the requested
    /// confidence (p < 1 - confidence).
    pub distinct: bool,
}

/// Runs Welch's two-sided test on two samples.
///
/// Both samples need at least two finite points. Two constant samples with
/// equal means yield t = 0 (not distinct); two constant samples with
/// different means are degenerate and an error.
pub fn welch_t_test(a: &[f64], b: &[f64], confidence: f64) -> Result<WelchTest> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Config(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    for (name, sample) in [("first", a), ("second", b)] {
        if sample.len() < 2 {
            return Err(Error::DegenerateSample(format!(
                "{name} sample has {} points, need at least 2",
                sample.len()
            )));
        }
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::DegenerateSample(format!(
                "{name} sample contains non-finite values"
            )));
        }
    }

    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, mb) = (stats::mean(a), stats::mean(b));
    let (va, vb) = (stats::sample_variance(a), stats::sample_variance(b));
    let sa = va / na;
    let sb = vb / nb;
    let se2 = sa + sb;

    if se2 == 0.0 {
        if ma == mb {
            return Ok(WelchTest {
                t: 0.0,
                dof: na + nb - 2.0,
                p_value: 1.0,
                distinct: false,
            });
        }
        return Err(Error::DegenerateSample(
            "both samples are constant with different means".into(),
        ));
    }

    let t = (ma - mb) / se2.sqrt();
    let dof = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p_value = (2.0 * student_t_sf(t.abs(), dof)).min(1.0);
    Ok(WelchTest {
        t,
        dof,
        p_value,
        distinct: p_value < 1.0 - confidence,
    })
}
