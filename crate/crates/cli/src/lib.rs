//! Command-line front end for `wdn-core`: configuration, report tables,
//! SVG rendering and the subcommands that tie the pipeline together.

pub mod commands;
pub mod config;
pub mod render;
pub mod tables;
