//! Crate-wide error type.
//!
//! Validation failures carry the identifiers of the offending cells so that a
//! bad table can be repaired by hand; resource guards are separate variants so
//! callers can distinguish "false" from "too big to decide".

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no composite recorded for {g} . {f}")]
    MissingComposite { g: String, f: String },

    #[error("associativity fails on ({h}, {g}, {f})")]
    NonAssociative { h: String, g: String, f: String },

    #[error("identity law fails at {morphism}")]
    IdentityLawViolation { morphism: String },

    #[error("unknown object {object}")]
    UnknownObject { object: String },

    #[error("unknown morphism {morphism}")]
    UnknownMorphism { morphism: String },

    #[error("malformed input: {reason}")]
    Malformed { reason: String },

    #[error("enumeration needs {needed} candidates, guard allows {bound}")]
    AmbientTooLarge { needed: usize, bound: usize },

    #[error("codomains differ: {left} vs {right}")]
    CodomainMismatch { left: String, right: String },

    #[error("maps are not a parallel pair")]
    NotParallel,

    #[error("sieve apex mismatch: expected {expected}, found {found}")]
    ApexMismatch { expected: String, found: String },

    #[error("source/target mismatch composing morphisms of diagrams")]
    Mismatch,

    #[error("functor does not preserve {law} at {at}")]
    NotAFunctor { law: String, at: String },

    #[error("naturality fails at {at}")]
    NotNatural { at: String },

    #[error("shape has a cycle of non-identity morphisms through {object}")]
    UnboundedChains { object: String },

    #[error("{part} is not a simplicial subset: {simplex}")]
    NotSubobject { part: usize, simplex: String },

    #[error("boundary composite is nonzero in degree {degree}")]
    BoundaryCompositionNonzero { degree: usize },

    #[error("degree range {requested} exceeds valid range {valid}")]
    RangeExceedsValidity { requested: usize, valid: usize },
}
