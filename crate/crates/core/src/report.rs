//! Outcome of checking one identity.

use std::fmt::Display;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Longest residual text kept in a report.
const RESIDUAL_CHARS: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    /// The residual's normal form is zero.
    ExactZero,
    /// The residual vanished at every probe point to the given relative
    /// tolerance.
    NumericZero { tolerance: f64, points: usize },
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub status: Status,
    pub residual: String,
}

impl IdentityReport {
    /// Report on an exact residual.
    pub fn exact<E: Zero + Display>(name: impl Into<String>, residual: &E) -> IdentityReport {
        let status = if residual.is_zero() {
            Status::ExactZero
        } else {
            Status::Failed
        };
        IdentityReport {
            name: name.into(),
            status,
            residual: truncate(residual.to_string()),
        }
    }

    /// Report on an exact residual that is required to be nonzero.
    pub fn nonzero<E: Zero + Display>(name: impl Into<String>, residual: &E) -> IdentityReport {
        let status = if residual.is_zero() {
            Status::Failed
        } else {
            Status::ExactZero
        };
        IdentityReport {
            name: name.into(),
            status,
            residual: truncate(residual.to_string()),
        }
    }

    pub fn numeric(name: impl Into<String>, worst: f64, tolerance: f64, points: usize) -> IdentityReport {
        let status = if worst <= tolerance {
            Status::NumericZero { tolerance, points }
        } else {
            Status::Failed
        };
        IdentityReport {
            name: name.into(),
            status,
            residual: format!("{worst:e}"),
        }
    }

    pub fn failed(name: impl Into<String>, why: impl Into<String>) -> IdentityReport {
        IdentityReport {
            name: name.into(),
            status: Status::Failed,
            residual: why.into(),
        }
    }

    pub fn passed(&self) -> bool {
        !matches!(self.status, Status::Failed)
    }
}

fn truncate(mut s: String) -> String {
    if s.len() > RESIDUAL_CHARS {
        let mut cut = RESIDUAL_CHARS;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str(" ...");
    }
    s
}

pub fn all_passed(reports: &[IdentityReport]) -> bool {
    reports.iter().all(IdentityReport::passed)
}
