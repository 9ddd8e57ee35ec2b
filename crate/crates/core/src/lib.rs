//! Finite truncated simplicial sets, thick simplices and the thickening
//! coend, machine-checkable expansion certificates for horn-attachment
//! filtrations, mapping-space enumeration with lifting checks, and exact
//! integral homology via Smith normal form.
//!
//! Everything here is desk scale by design: complexes carry an explicit
//! truncation dimension, all enumerations are canonical, and results are
//! reproducible byte for byte.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod error;
pub mod monotone;
pub mod sset;
pub mod morphism;
pub mod colimit;
pub mod iso;
pub mod thick;
pub mod nerve;
pub mod expansion;
pub mod mapping;
pub mod homology;
pub mod rezk;

pub use error::{Error, Result};
pub use monotone::MonotoneMap;
pub use morphism::SSetMorphism;
pub use sset::{standard_complex, CellRef, FinSSet, NormalSimplex, StandardKind, SubcomplexMask};
