//! Exact computations on algebraic surfaces.
//!
//! The crate is organized by subject:
//!
//! * [`lattice`]: integer quadratic forms, definiteness, signature and
//!   constrained vector enumeration.
//! * [`cubic27`]: the 27 lines on a cubic surface and the E6 root system.
//! * [`automorphism`]: automorphism group orders of small graphs.
//! * [`scroll`]: divisors on rational normal scrolls.
//! * [`config`]: curve configurations, numerical cycles, ADE types,
//!   singularity numerics and Zariski decomposition.
//! * [`fibration`]: fractional divisors and plurigenera of elliptic
//!   fibrations.
//! * [`classify`]: surface invariants, Noether's formula and related tables.
//!
//! No floating point is used anywhere; integers are exact and rationals are
//! `BigRational`.

pub mod automorphism;
pub mod classify;
pub mod config;
pub mod cubic27;
pub mod error;
pub mod exact;
pub mod fibration;
pub mod lattice;
pub mod scroll;

pub use error::{Error, Result};
pub use exact::Rational;
pub use lattice::{Bounds, DivisorClass, Lattice, Parity, QDivisorClass, Signature};
pub use classify::SurfaceInvariants;
pub use config::{AdeType, Curve, CurveConfig};
pub use cubic27::CubicLattice;
pub use fibration::{Fiber, FibrationSpec, Plurigenus};
pub use scroll::{ScrollDivisor, ScrollSpec};
