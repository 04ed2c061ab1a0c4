use std::fmt;

use serde::{Deserialize, Serialize};

/// Which way a quantity moves as the confidence level grows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// The six interval descriptions built from a `(low, high)` cut-point pair.
///
/// All boundaries are strict: an observation equal to a cut point lies in
/// neither member of a complementary pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    BelowLow,
    AboveLow,
    Between,
    BelowLowOrAboveHigh,
    BelowHigh,
    AboveHigh,
}

impl IntervalKind {
    pub const ALL: [IntervalKind; 6] = [
        IntervalKind::BelowLow,
        IntervalKind::AboveLow,
        IntervalKind::Between,
        IntervalKind::BelowLowOrAboveHigh,
        IntervalKind::BelowHigh,
        IntervalKind::AboveHigh,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            IntervalKind::BelowLow => "below_low",
            IntervalKind::AboveLow => "above_low",
            IntervalKind::Between => "between",
            IntervalKind::BelowLowOrAboveHigh => "below_low_or_above_high",
            IntervalKind::BelowHigh => "below_high",
            IntervalKind::AboveHigh => "above_high",
        }
    }

    /// Direction of the covered probability mass as the interval widens.
    pub fn direction_under_widening(&self) -> Direction {
        match self {
            IntervalKind::BelowLow | IntervalKind::BelowLowOrAboveHigh | IntervalKind::AboveHigh => {
                Direction::Decreasing
            }
            IntervalKind::AboveLow | IntervalKind::Between | IntervalKind::BelowHigh => {
                Direction::Increasing
            }
        }
    }

    pub fn complement(&self) -> IntervalKind {
        match self {
            IntervalKind::BelowLow => IntervalKind::AboveLow,
            IntervalKind::AboveLow => IntervalKind::BelowLow,
            IntervalKind::Between => IntervalKind::BelowLowOrAboveHigh,
            IntervalKind::BelowLowOrAboveHigh => IntervalKind::Between,
            IntervalKind::BelowHigh => IntervalKind::AboveHigh,
            IntervalKind::AboveHigh => IntervalKind::BelowHigh,
        }
    }

    /// Index of the complementary pair this kind belongs to (0..3).
    pub fn pair_index(&self) -> usize {
        match self {
            IntervalKind::BelowLow | IntervalKind::AboveLow => 0,
            IntervalKind::Between | IntervalKind::BelowLowOrAboveHigh => 1,
            IntervalKind::BelowHigh | IntervalKind::AboveHigh => 2,
        }
    }

    pub fn contains(&self, x: f64, low: f64, high: f64) -> bool {
        match self {
            IntervalKind::BelowLow => x < low,
            IntervalKind::AboveLow => x > low,
            IntervalKind::Between => low < x && x < high,
            IntervalKind::BelowLowOrAboveHigh => x < low || x > high,
            IntervalKind::BelowHigh => x < high,
            IntervalKind::AboveHigh => x > high,
        }
    }

    pub fn render(&self, low: i64, high: i64) -> String {
        match self {
            IntervalKind::BelowLow => format!("below {low}"),
            IntervalKind::AboveLow => format!("above {low}"),
            IntervalKind::Between => format!("between {low} and {high}"),
            IntervalKind::BelowLowOrAboveHigh => format!("below {low} or above {high}"),
            IntervalKind::BelowHigh => format!("below {high}"),
            IntervalKind::AboveHigh => format!("above {high}"),
        }
    }
}

impl fmt::Display for IntervalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
