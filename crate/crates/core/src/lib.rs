//! Concrete quantum logics of two-box non-signalling ("box world") systems.
//!
//! The sample space of a scenario is the product of all outcome tuples of
//! both boxes. The logic is the family of subsets generated by the atoms
//! `[aα, bβ]` under complement and disjoint union. On top of it the crate
//! provides compatibility and Boolean-sublogic search, the correspondence
//! between non-signalling probability tables and states on the logic,
//! exact vertex enumeration of the non-signalling polytope, and finite
//! observables.

pub mod bits;
pub mod compat;
pub mod error;
pub mod formats;
pub mod logic;
pub mod observables;
pub mod rational;
pub mod scenario;
pub mod states;
pub mod verify;

pub use bits::BitSet;
pub use error::{Error, ErrorClass, Result};
pub use logic::{BoxLogic, EvenSetLogic, Logic};
pub use rational::Rational;
pub use scenario::{AtomId, BoxWorldSpec, GammaIndex, Limits, LocalizedSpec, Side};
