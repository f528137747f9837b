//! IO companion of `discrim-core`: the JSON document formats, the report
//! schemas the CLI emits, and SVG rendering of planar arrangements.

pub mod cli;
pub mod formats;
pub mod render;
pub mod report;
