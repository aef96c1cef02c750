//! Interchange formats, chart rendering, and the randomized verification
//! campaign behind the `specseq` command-line tool.

pub mod campaign;
pub mod chart;
pub mod io;
