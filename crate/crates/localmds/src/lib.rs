//! File formats, experiment sweeps and the command-line front end for
//! [`localmds_core`].

pub mod cli;
pub mod format;
pub mod runner;
pub mod sweep;
