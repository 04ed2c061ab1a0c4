use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const LEVELS: [f64; 5] = [0.05, 0.275, 0.5, 0.725, 0.95];

/// Confidence level used to place interval cut points around the mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConfidencePoint(u8);

impl ConfidencePoint {
    pub const ALL: [ConfidencePoint; 5] = [
        ConfidencePoint(0),
        ConfidencePoint(1),
        ConfidencePoint(2),
        ConfidencePoint(3),
        ConfidencePoint(4),
    ];

    pub fn level(&self) -> f64 {
        LEVELS[self.0 as usize]
    }

    /// Position in increasing order, 0..5.
    pub fn index(&self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        (index < LEVELS.len()).then_some(ConfidencePoint(index as u8))
    }

    pub fn from_level(level: f64) -> Option<Self> {
        LEVELS
            .iter()
            .position(|l| (l - level).abs() < 1e-9)
            .map(|i| ConfidencePoint(i as u8))
    }

    pub fn next(&self) -> Option<Self> {
        Self::from_index(self.index() + 1)
    }
}

impl fmt::Display for ConfidencePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.level())
    }
}

impl Serialize for ConfidencePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.level())
    }
}

impl<'de> Deserialize<'de> for ConfidencePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let level = f64::deserialize(d)?;
        ConfidencePoint::from_level(level)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown confidence level {level}")))
    }
}
