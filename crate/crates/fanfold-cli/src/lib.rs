//! Support modules for the `fanfold` binary: the fan document format, SVG
//! rendering, and the line-oriented text encoding of reports.

pub mod document;
pub mod svg;
pub mod text;
