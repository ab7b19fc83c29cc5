//! RDF terms, an indexed in-memory graph, Turtle I/O and collection helpers.

mod graph;
mod iso;
mod list;
mod term;
pub mod turtle;
pub mod vocab;

pub use graph::{Dataset, DuplicateGraph, Graph, PrefixMap};
pub use iso::{find_bijection, is_isomorphic};
pub use list::{read_list, write_list, ListError};
pub use term::{Literal, Term, Triple};
pub use turtle::{parse_turtle, serialize_turtle, TurtleError, TurtleErrorKind};
