//! canopy-core: executable category theory at desk scale.
//!
//! The crate decides colim sieves and universal colim sieves over two ambient
//! worlds (finite categories presented by tables, and finite sets), verifies
//! Grothendieck topology axioms and the sheaf condition, and checks the
//! homotopical side (simplicial replacements, homotopy colimits, Cech
//! complexes, cylinder homotopies) through an integer-homology oracle on
//! truncated simplicial sets.
//!
//! Everything is exact, deterministic and exhaustively checked at the scales
//! the constructions are instantiated at; wherever a definition quantifies
//! over all objects of an infinite category, the operation takes an explicit
//! probe bound and its report says so.

pub mod catalog;
pub mod document;
pub mod error;
pub mod fincat;
pub mod ifcat;
pub mod finset;
pub mod gensieve;
pub mod homology;
pub mod sieves;
pub mod simplicial;
pub mod topology;

pub use error::{Error, Result};
pub use fincat::{FinCategory, FinFunctor, NatTrans};
pub use finset::{FinSetObject, SetFunction};
pub use sieves::{ExplicitSieve, GeneratedSieve};
pub use simplicial::{SSet, SSetDiagram, SimplicialMap};
pub use topology::{Presheaf, TopologyAssignment};
