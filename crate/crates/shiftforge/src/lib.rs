//! File formats, threaded enumeration and the command line around
//! [`shiftforge_core`].

pub mod cli;
pub mod format;
pub mod parallel;
