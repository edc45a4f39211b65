//! Library surface of the command-line tool: the document model and the SVG
//! renderer, shared with the integration tests.

pub mod document;
pub mod render;
