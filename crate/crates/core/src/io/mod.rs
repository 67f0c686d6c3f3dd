//! File formats, structured reports and the bundled corpus.

pub mod corpus;
pub mod format;
pub mod report;
