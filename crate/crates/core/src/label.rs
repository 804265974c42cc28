//! Binary labels shared by every task.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Which foundational distinction is being classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Task {
    /// Class vs. instance.
    #[serde(rename = "CI")]
    ClassInstance,
    /// Physical object vs. not a physical object.
    #[serde(rename = "PO")]
    PhysicalObject,
}

impl Task {
    /// Names of the positive and negative class, in that order.
    pub fn class_names(self) -> (&'static str, &'static str) {
        match self {
            Task::ClassInstance => ("C", "I"),
            Task::PhysicalObject => ("PO", "NPO"),
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Task::ClassInstance => "CI",
            Task::PhysicalObject => "PO",
        }
    }

    /// Parses a class name of this task into a label.
    ///
    /// Accepts the short names (`C`/`I`, `PO`/`NPO`) and the spelled out
    /// forms used by annotation exports (`class`, `instance`, ...), case
    /// insensitively.
    pub fn parse_label(self, s: &str) -> Option<Label> {
        let s = s.trim().to_ascii_lowercase();
        let s = s.as_str();
        match self {
            Task::ClassInstance => match s {
                "c" | "class" | "+1" | "1" => Some(Label::Positive),
                "i" | "instance" | "individual" | "-1" | "0" => Some(Label::Negative),
                _ => None,
            },
            Task::PhysicalObject => match s {
                "po" | "physical object" | "physical_object" | "physicalobject" | "yes" | "+1"
                | "1" => Some(Label::Positive),
                "npo" | "not physical object" | "not_physical_object" | "no" | "-1" | "0" => {
                    Some(Label::Negative)
                }
                _ => None,
            },
        }
    }

    pub fn label_name(self, label: Label) -> &'static str {
        let (pos, neg) = self.class_names();
        match label {
            Label::Positive => pos,
            Label::Negative => neg,
        }
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ci" | "class-instance" => Ok(Task::ClassInstance),
            "po" | "physical-object" => Ok(Task::PhysicalObject),
            other => Err(format!("unknown task `{other}` (expected ci or po)")),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// A binary label. `Positive` is Class for the CI task and PO for the PO task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "+1")]
    Positive,
    #[serde(rename = "-1")]
    Negative,
}

impl Label {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    pub fn is_positive(self) -> bool {
        self == Label::Positive
    }

    /// +1.0 or -1.0.
    pub fn sign(self) -> f64 {
        match self {
            Label::Positive => 1.0,
            Label::Negative => -1.0,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Label::Positive => Label::Negative,
            Label::Negative => Label::Positive,
        }
    }
}
