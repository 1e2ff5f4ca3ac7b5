//! Library side of the `qgame` command: file formats, reports and rendering.

pub mod commands;
pub mod error;
pub mod files;
pub mod render;
