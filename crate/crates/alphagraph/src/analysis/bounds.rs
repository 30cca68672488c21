//! Closed-form worst-case reachability after pruning an alpha1-reachable
//! graph at target alpha2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which worst-case regime a bound describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    /// Arbitrary selection order, any metric.
    UnsortedAny,
    /// Nearest-first selection, any metric.
    SortedGeneral,
    /// Nearest-first selection, Euclidean metric.
    SortedEuclidean,
}

fn validate_alphas(alpha1: f64, alpha2: f64) -> Result<()> {
    if !(alpha2 > 1.0) {
        return Err(Error::InvalidParams(format!(
            "alpha2 must exceed 1, got {alpha2}"
        )));
    }
    if !(alpha1 >= alpha2) {
        return Err(Error::InvalidParams(format!(
            "need alpha1 >= alpha2, got alpha1 = {alpha1}, alpha2 = {alpha2}"
        )));
    }
    Ok(())
}

/// Worst-case reachability of a graph obtained by repruning an
/// alpha1-reachable graph at alpha2 with no degree cap.
///
/// The unsorted value is `alpha1*alpha2 / (alpha1 + alpha2 + 1)`, the
/// reciprocal of the extremal collinear distance
/// `(alpha1 + alpha2 + 1) / (alpha1*alpha2)`; see
/// [`gen_unsorted_tight_config`](crate::analysis::gen_unsorted_tight_config)
/// for the configuration attaining it.
pub fn bound_after_tuning(alpha1: f64, alpha2: f64, kind: BoundKind) -> Result<f64> {
    validate_alphas(alpha1, alpha2)?;
    Ok(match kind {
        BoundKind::UnsortedAny => alpha1 * alpha2 / (alpha1 + alpha2 + 1.0),
        BoundKind::SortedGeneral => alpha1 * alpha2 / (alpha1 + alpha2),
        BoundKind::SortedEuclidean => {
            let s1 = (1.0 - 1.0 / (4.0 * alpha2 * alpha2)).sqrt();
            let s2 = (1.0 - 1.0 / (4.0 * alpha1 * alpha1)).sqrt();
            1.0 / (s1 / alpha1 + s2 / alpha2)
        }
    })
}

/// The Euclidean extremal distance `2 sin(asin(1/(2*alpha1)) +
/// asin(1/(2*alpha2)))`. Its reciprocal equals the
/// [`BoundKind::SortedEuclidean`] bound.
pub fn beta(alpha1: f64, alpha2: f64) -> f64 {
    let t1 = (1.0 / (2.0 * alpha1)).asin();
    let t2 = (1.0 / (2.0 * alpha2)).asin();
    2.0 * (t1 + t2).sin()
}
