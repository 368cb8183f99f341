use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fields::CaseId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("grid needs x_min <= x_max, got [{x_min}, {x_max}]")]
    Reversed { x_min: f64, x_max: f64 },
    #[error("grid needs at least {needed} points, got {points}")]
    TooFewPoints { points: usize, needed: usize },
    #[error("grid endpoint {x2} lies outside the domain of case {case}")]
    OutsideDomain { case: CaseId, x2: f64 },
}

/// Uniform sampling of `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Self {
        Self { x_min, x_max, points }
    }

    /// Checks a sampling grid. A collapsed grid (`x_min == x_max`) is one
    /// point regardless of `points`.
    pub fn validate(&self, case: CaseId) -> Result<(), GridError> {
        if !(self.x_min <= self.x_max) {
            return Err(GridError::Reversed {
                x_min: self.x_min,
                x_max: self.x_max,
            });
        }
        if self.x_min < self.x_max && self.points < 2 {
            return Err(GridError::TooFewPoints {
                points: self.points,
                needed: 2,
            });
        }
        if self.points == 0 {
            return Err(GridError::TooFewPoints { points: 0, needed: 1 });
        }
        for x2 in [self.x_min, self.x_max] {
            if !case.in_domain(x2) {
                return Err(GridError::OutsideDomain { case, x2 });
            }
        }
        Ok(())
    }

    /// Like [`GridSpec::validate`] but also demands a strictly increasing
    /// grid with at least two points.
    pub fn validate_strict(&self, case: CaseId) -> Result<(), GridError> {
        self.validate(case)?;
        if self.x_min == self.x_max || self.points < 2 {
            return Err(GridError::TooFewPoints {
                points: if self.x_min == self.x_max { 1 } else { self.points },
                needed: 2,
            });
        }
        Ok(())
    }

    pub fn samples(&self) -> Vec<f64> {
        if self.x_min == self.x_max || self.points <= 1 {
            return vec![self.x_min];
        }
        let last = (self.points - 1) as f64;
        let width = self.x_max - self.x_min;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.x_max
                } else {
                    self.x_min + width * (i as f64 / last)
                }
            })
            .collect()
    }
}
