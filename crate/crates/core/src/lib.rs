//! Exact computations with monotone piecewise-linear reparametrizations of
//! intervals and with the presheaves ("G-spaces") over them.
//!
//! All arithmetic is over arbitrary-precision rationals. The crate covers
//! maps and their strict tensor, finitely presented spaces, the coend
//! tensor in segment normal form, its associator and closed forms, the two
//! internal homs through generator transposes, the objectwise braiding, and
//! a seeded law-check harness.

pub mod braiding;
pub mod error;
pub mod gmaps;
pub mod lawcheck;
pub mod pspaces;
pub mod random;
pub mod rational;
pub mod tensorcalc;

pub use error::{Error, Result};
pub use gmaps::PLMap;
pub use pspaces::{Cell, CellId, Element, Label, PSpace};
pub use rational::{Length, Rational};
pub use tensorcalc::{RawTriple, Slot, TensorClass};
