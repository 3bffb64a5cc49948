//! Batch front end for `linfty-core`: JSON documents in, deterministic
//! reports out.

pub mod commands;
pub mod doc;
pub mod error;
pub mod fmt;
pub mod report;

pub use commands::{execute, run_job, COMMANDS};
pub use error::InputError;
pub use report::{Check, Report, Request, Verdict};
