//! Problem files, reports and the result cache.

pub mod cache;
pub mod parse;
pub mod report;
