//! The Hilbert curve, its fibers, and spliced representations on `[0,1]`.

pub mod cantor;
pub mod curve;
pub mod fiber;
pub mod rep;

pub use cantor::{cantor_to_hcube, hcube_preimage, CantorPoint};
pub use curve::{hilbert_eval, Param};
pub use fiber::{fiber_point, fiber_points, local_coordinate, FiberPoint};
pub use rep::{rep_eval, rep_witness, FiberDatum, ReplaceRep};
