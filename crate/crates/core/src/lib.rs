//! Concept lattices, join-/meet-rises and distributivity checks.
//!
//! The crate is organised bottom-up: [`context`] holds formal contexts,
//! [`lattice`] enumerates concepts and builds the lattice, [`rises`] computes
//! the rise statistics, [`distributivity`] decides the various distributivity
//! properties and [`poset`] handles finite orders and their completions.

pub mod bits;
pub mod catalog;
pub mod context;
pub mod distributivity;
pub mod error;
pub mod lattice;
pub mod poset;
pub mod random;
pub mod rises;

pub use bits::BitSet;
pub use context::{ArrowRelations, FormalContext, Format, Side};

pub use error::{Error, Result};
pub use lattice::{Concept, ConceptLattice, LatticeElementStats, LatticeOptions};

pub use distributivity::{DistributivityVerdict, Method, Pattern, SublatticeWitness};
pub use poset::{DmCompletion, Poset};
pub use rises::RiseReport;
