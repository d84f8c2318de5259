//! Order-type expressions, their elements, and the lexicographic comparator.

pub mod decompose;
pub mod element;
pub mod expr;
pub mod sample;

pub use decompose::{pow_decompose, translate};
pub use element::{canonicalize, compare, default, from_json, parse_json, to_json, validate, Element};
pub use expr::{OrderType, Product, Replacement, Tail};
pub use sample::{sample, Sampler};
