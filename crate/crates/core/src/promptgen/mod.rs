//! Prompt corpus builders.

pub mod rq1;
pub mod rq2;
