//! Literal transcriptions of the indicator formulas.
//!
//! These are deliberately naive: the ATI sums every adjacent gap instead of
//! telescoping, and the update speed recomputes each tau term inside the
//! summation instead of reusing a closed form. They exist purely as
//! independent oracles for the production implementations and for the
//! selfcheck command; do not use them on large inputs.

use crate::metrics::update::{UpdateCohort, UpdateDivisor};
use crate::metrics::{hours_between, EventSeries, MetricsError};

/// ATI as the explicit mean of adjacent gaps:
/// sum_{j=2..M}(x_j - x_{j-1}) / (M - 1).
pub fn ati_hours_summed(series: &EventSeries) -> Result<f64, MetricsError> {
    let m = series.m();
    if m < 2 {
        return Err(MetricsError::InsufficientEvents { m });
    }
    let events = series.events();
    let mut sum = 0.0;
    for j in 1..m {
        sum += hours_between(events[j - 1], events[j]);
    }
    Ok(sum / (m - 1) as f64)
}

/// Update speed as the formula reads: for each j in 2..M, recompute
/// tau_j and tau_{j-1} from the raw member spans and add both to the
/// denominator.
pub fn update_speed_literal(
    cohort: &UpdateCohort,
    divisor: UpdateDivisor,
) -> Result<f64, MetricsError> {
    let members = cohort.members();
    let m = members.len();
    if m < 2 {
        return Err(MetricsError::InsufficientCohort { m });
    }
    crate::metrics::update::check_divisor(cohort, divisor)?;
    let mut denominator = 0.0;
    for j in 1..m {
        denominator += members[j].tau_hours(divisor);
        denominator += members[j - 1].tau_hours(divisor);
    }
    if denominator == 0.0 {
        return Err(MetricsError::ZeroDenominator);
    }
    Ok((m - 1) as f64 / denominator)
}
