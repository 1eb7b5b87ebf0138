//! JSON formats, reports, verification and the command-line front end for `matspace-core`.

pub mod cli;
pub mod format;
pub mod parallel;
pub mod report;
pub mod verify;

pub use parallel::Parallel;
pub use report::Exit;
