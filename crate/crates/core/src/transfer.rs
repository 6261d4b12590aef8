//! Transfer experiments.
//!
//! A record's score is the performance of the model fine-tuned from the
//! source domain minus the performance of the model trained on the target
//! domain alone: positive transfer ⇔ score > 0. Binary logs encode
//! positive/negative transfers as +1/−1.

use thiserror::Error;

use crate::axiom::Name;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TransferError {
    #[error("source equals target ({0})")]
    SourceEqualsTarget(Name),
    #[error("score {0} is not finite")]
    NonFiniteScore(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransferRecord {
    pub source: Name,
    pub target: Name,
    pub feature: Name,
    pub score: f64,
}

impl TransferRecord {
    pub fn new(
        source: Name,
        target: Name,
        feature: Name,
        score: f64,
    ) -> Result<Self, TransferError> {
        if source == target {
            return Err(TransferError::SourceEqualsTarget(source));
        }
        if !score.is_finite() {
            return Err(TransferError::NonFiniteScore(score));
        }
        Ok(TransferRecord {
            source,
            target,
            feature,
            score,
        })
    }

    pub fn is_positive(&self) -> bool {
        self.score > 0.0
    }
}
