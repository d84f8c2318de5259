//! Exact constructions of representable linear orders: lexicographic powers
//! of the unit interval, duplications, point replacements and countable
//! products, with their representations by functions under the pointwise
//! order.

pub mod error;
pub mod extend;
pub mod hilbert;
pub mod ordertype;
pub mod ordinal;
pub mod peano;
pub mod product;
pub mod rank;
pub mod rational;

pub use error::{Error, Result};
pub use extend::{linear_extension, strict_order_from_family, verify_initial_segments, Family, Relation, Violation};
pub use hilbert::{ambiguity_certificate, chi_eval, h_less, hpoint_from_element, HPoint, SetTruncation, TruncationKind};
pub use ordertype::{Element, OrderType, Sampler, Tail};
pub use ordinal::Ordinal;
pub use peano::{fiber_points, hilbert_eval, CantorPoint, FiberDatum, ReplaceRep};
pub use product::{tail_bound, LevelDatum, ProductRep};
pub use rank::{rank_bound, rank_decompose, s_member_check, Base, Derivation, Membership, Pattern};
pub use rational::Rational;
