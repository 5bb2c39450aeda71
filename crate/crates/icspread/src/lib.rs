//! File formats, Monte-Carlo estimation, benchmarks, greedy seed selection
//! and reporting around [`icspread_core`].

pub mod bench;
pub mod format;
pub mod generate;
pub mod greedy;
pub mod montecarlo;
pub mod report;
pub mod verify;

pub use icspread_core;
