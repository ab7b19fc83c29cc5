//! Turtle reading and writing.

mod parser;
mod serializer;

pub use parser::{parse_turtle, TurtleError, TurtleErrorKind};
pub use serializer::serialize_turtle;
