//! Cognitive-load class labels.
//!
//! Recordings are annotated with four conditions (baseline plus the three
//! n-back levels), but the classifier target is the three-way task level:
//! baseline intervals are dropped during windowing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Three-way classification target: the n-back level of a task interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CognitiveClass {
    ZeroBack,
    OneBack,
    TwoBack,
}

pub const N_CLASSES: usize = 3;

impl CognitiveClass {
    pub const ALL: [CognitiveClass; N_CLASSES] = [
        CognitiveClass::ZeroBack,
        CognitiveClass::OneBack,
        CognitiveClass::TwoBack,
    ];

    pub fn index(self) -> usize {
        match self {
            CognitiveClass::ZeroBack => 0,
            CognitiveClass::OneBack => 1,
            CognitiveClass::TwoBack => 2,
        }
    }

    pub fn from_index(index: usize) -> Result<Self> {
        match index {
            0 => Ok(CognitiveClass::ZeroBack),
            1 => Ok(CognitiveClass::OneBack),
            2 => Ok(CognitiveClass::TwoBack),
            _ => Err(Error::InvalidClass {
                index,
                n_classes: N_CLASSES,
            }),
        }
    }

    /// n-back level as an integer (0, 1, 2).
    pub fn level(self) -> u8 {
        self.index() as u8
    }

    pub fn from_level(level: u8) -> Result<Self> {
        Self::from_index(level as usize).map_err(|_| Error::InvalidLevel { level })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CognitiveClass::ZeroBack => "0back",
            CognitiveClass::OneBack => "1back",
            CognitiveClass::TwoBack => "2back",
        }
    }
}

/// Condition annotation carried by a recording's label stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ConditionLabel {
    Baseline,
    Task(CognitiveClass),
}

impl ConditionLabel {
    /// The classifier target, or `None` for baseline intervals.
    pub fn task_class(self) -> Option<CognitiveClass> {
        match self {
            ConditionLabel::Baseline => None,
            ConditionLabel::Task(class) => Some(class),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionLabel::Baseline => "baseline",
            ConditionLabel::Task(class) => class.as_str(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "baseline" => Ok(ConditionLabel::Baseline),
            "0back" => Ok(ConditionLabel::Task(CognitiveClass::ZeroBack)),
            "1back" => Ok(ConditionLabel::Task(CognitiveClass::OneBack)),
            "2back" => Ok(ConditionLabel::Task(CognitiveClass::TwoBack)),
            other => Err(Error::MalformedData(format!(
                "unknown condition label '{other}' (expected baseline, 0back, 1back or 2back)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_index_round_trip() {
        for class in CognitiveClass::ALL {
            assert_eq!(CognitiveClass::from_index(class.index()).unwrap(), class);
        }
        assert!(CognitiveClass::from_index(3).is_err());
    }

    #[test]
    fn label_parsing() {
        assert_eq!(
            ConditionLabel::parse("baseline").unwrap(),
            ConditionLabel::Baseline
        );
        assert_eq!(
            ConditionLabel::parse("2back").unwrap(),
            ConditionLabel::Task(CognitiveClass::TwoBack)
        );
        assert!(ConditionLabel::parse("3back").is_err());
        for label in [
            ConditionLabel::Baseline,
            ConditionLabel::Task(CognitiveClass::OneBack),
        ] {
            assert_eq!(ConditionLabel::parse(label.as_str()).unwrap(), label);
        }
    }
}
