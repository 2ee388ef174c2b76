//! Command-line front end for `condset`: scenario files in, exact JSON or
//! text reports out.

pub mod app;
pub mod error;
pub mod json;
pub mod scenario;
