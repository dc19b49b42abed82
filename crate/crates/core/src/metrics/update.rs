//! Update speed over a yearly cohort of revised preprints.
//!
//! Each member contributes tau = (T_last - T_initial) / N_v, its mean
//! inter-version span in hours. The cohort speed is
//! (M - 1) / sum_{j=2..M}(tau_j + tau_{j-1}) with members ordered by
//! T_initial: the printed formula verbatim, interior tau terms counted
//! twice. The sum collapses to 2*S - tau_first - tau_last, which is what
//! the production path computes; the literal transcription lives in
//! [`crate::metrics::reference`] as the test oracle.

use chrono::{DateTime, Datelike, Utc};

use crate::metrics::{hours_between, MetricsError};
use crate::model::{ArxivId, PreprintRecord};

/// Divisor of the per-member tau. The formula says N_v; the variant
/// N_v - 1 (number of update intervals) is exposed for sensitivity runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateDivisor {
    #[default]
    VersionCount,
    UpdateCount,
}

impl UpdateDivisor {
    pub fn as_str(self) -> &'static str {
        match self {
            UpdateDivisor::VersionCount => "nv",
            UpdateDivisor::UpdateCount => "nv-minus-1",
        }
    }
}

/// One revised preprint in a cohort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateMember {
    pub id: ArxivId,
    pub t_initial: DateTime<Utc>,
    pub t_last: DateTime<Utc>,
    /// Total version count N_v; at least 2 for members built from a corpus.
    pub n_v: u32,
}

impl UpdateMember {
    /// Mean span per version (or per update), in hours.
    pub fn tau_hours(&self, divisor: UpdateDivisor) -> f64 {
        let span = hours_between(self.t_initial, self.t_last);
        let d = match divisor {
            UpdateDivisor::VersionCount => self.n_v,
            UpdateDivisor::UpdateCount => self.n_v - 1,
        };
        span / d as f64
    }
}

/// A year's updated preprints, ordered by (T_initial, id).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpdateCohort {
    year: i32,
    members: Vec<UpdateMember>,
}

impl UpdateCohort {
    /// Validate and order members. Every member needs N_v >= 1 and
    /// T_last >= T_initial.
    pub fn new(year: i32, mut members: Vec<UpdateMember>) -> Result<UpdateCohort, MetricsError> {
        for m in &members {
            if m.n_v == 0 {
                return Err(MetricsError::ZeroVersions {
                    id: m.id.to_string(),
                });
            }
            if m.t_last < m.t_initial {
                return Err(MetricsError::NegativeSpan {
                    id: m.id.to_string(),
                });
            }
        }
        members.sort_by(|a, b| a.t_initial.cmp(&b.t_initial).then_with(|| a.id.cmp(&b.id)));
        Ok(UpdateCohort { year, members })
    }

    /// The cohort of a calendar year: every preprint submitted in `year`
    /// that has at least one update (N_v >= 2). Single-version preprints
    /// would contribute tau = 0 and distort the sum, so they are out.
    pub fn from_corpus(corpus: &[PreprintRecord], year: i32) -> Result<UpdateCohort, MetricsError> {
        let members = corpus
            .iter()
            .filter(|r| r.submitted_at().year() == year && r.version_count() >= 2)
            .map(|r| UpdateMember {
                id: r.arxiv_id.clone(),
                t_initial: r.submitted_at(),
                t_last: r.last_updated_at(),
                n_v: r.version_count(),
            })
            .collect();
        UpdateCohort::new(year, members)
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn members(&self) -> &[UpdateMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Reject members whose tau would divide by zero: under the nv-minus-1
/// divisor a single-version member has no update interval.
pub(crate) fn check_divisor(
    cohort: &UpdateCohort,
    divisor: UpdateDivisor,
) -> Result<(), MetricsError> {
    if divisor == UpdateDivisor::UpdateCount {
        if let Some(member) = cohort.members().iter().find(|m| m.n_v < 2) {
            return Err(MetricsError::NoUpdateInterval {
                id: member.id.to_string(),
            });
        }
    }
    Ok(())
}

/// Update speed of a cohort in updates per hour. Undefined for cohorts of
/// fewer than two members, when every tau is zero, and for single-version
/// members under the nv-minus-1 divisor.
pub fn update_speed(cohort: &UpdateCohort, divisor: UpdateDivisor) -> Result<f64, MetricsError> {
    let m = cohort.len();
    if m < 2 {
        return Err(MetricsError::InsufficientCohort { m });
    }
    check_divisor(cohort, divisor)?;
    let taus: Vec<f64> = cohort
        .members()
        .iter()
        .map(|member| member.tau_hours(divisor))
        .collect();
    let sum: f64 = taus.iter().sum();
    let denominator = 2.0 * sum - taus[0] - taus[m - 1];
    if denominator == 0.0 {
        return Err(MetricsError::ZeroDenominator);
    }
    Ok((m - 1) as f64 / denominator)
}
