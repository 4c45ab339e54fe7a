//! Command-line front end: argument parsing, command dispatch, the
//! verification suite and SVG deconing pictures.

pub mod args;
pub mod commands;
pub mod svg;
pub mod verify;
