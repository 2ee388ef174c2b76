//! Exact conditional operators on polyhedron-valued random sets over finite
//! probability spaces: conditional cores and convex hulls, set-valued
//! conditional expectations, polars and dual cones, and set-valued
//! conditional Average Value-at-Risk.

pub mod corpus;
pub mod dd;
pub mod error;
pub mod exec;
pub mod geom;
pub mod linalg;
pub mod oracle;
pub mod prob;
pub mod randset;
pub mod rational;
pub mod risk;
pub mod suite;

pub use dd::InsertionOrder;
pub use error::{Error, Result};
pub use geom::{Halfspace, Polyhedron};
pub use prob::{FiniteSpace, MeasureFamily, Partition, RandomScalar, RandomVector};
pub use randset::RandomPolyhedron;
pub use rational::{ExtRat, Rat, Vector};
pub use risk::BidAsk;
