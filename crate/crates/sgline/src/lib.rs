//! Text formats, reports and the randomized equivalence suite behind the
//! `sgline` command line tool.

pub mod format;
pub mod report;
pub mod suite;
