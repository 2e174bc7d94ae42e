//! Finite-space Choquet capacities, limits of finite diagrams of finite
//! spaces, and the two marginal-matching constructions that realize the
//! surjectivity and openness of the characteristic map
//! `M(lim O) -> lim M(O)`.
//!
//! Everything is computed in exact rational arithmetic. Upper-continuity of
//! capacities is automatic on finite spaces and is never checked at runtime.
//!
//! Layout:
//! - [`space`], [`capacity`], [`choquet`], [`neighborhood`]: finite spaces,
//!   capacities, Choquet integration and weak-* neighborhoods.
//! - [`diagram`], [`limit`], [`square`]: diagrams over finite posets, their
//!   limits (threads), cylinders and the characteristic map.
//! - [`construct`]: envelope bounds, the clamp extension and the inner join
//!   on bicommutative squares.
//! - [`certify`]: samplers, exhaustive enumerators and property certifiers.
//! - [`io`]: the JSON file formats.

pub mod capacity;
pub mod certify;
pub mod choquet;
pub mod construct;
pub mod diagram;
mod error;
pub mod io;
pub mod limit;
pub mod neighborhood;
mod par;
pub mod rational;
pub mod space;
pub mod square;

pub use capacity::Capacity;
pub use choquet::RealFunction;
pub use diagram::Diagram;
pub use error::{Error, Result};
pub use limit::{LimitSpace, MarginalFamily};
pub use rational::Rational;
pub use space::{FiniteSpace, PointMap, Subset};
