//! Wishart distributions on Lorentz cones and the two invariant hypothesis
//! tests built on them: the subcone test (T1) with its exact Beta null law,
//! and the equality-of-parameters test (T2) through the pair of generalized
//! eigenvalues.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `lorentz-wishart-cli` crate.
//!
//! Module map:
//!
//! - [`cone`]: the Minkowski form, membership, the Jordan inverse, the
//!   block-cone isomorphism and the subcone split.
//! - [`group`]: the automorphism group `R++ x SO+(Psi)` and its subgroup
//!   preserving a subcone, with constructive boosts and orbit matching.
//! - [`wishart`]: log-density, normalizing constants and an exact sampler.
//! - [`hypothesis`]: maximal invariants, likelihood ratios and both tests.
//! - [`verify`]: seeded Monte Carlo and quadrature checks of every
//!   distributional claim, plus the empirical null for (T2).
//! - [`special`]: log-gamma, incomplete beta/gamma and friends.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod cone;
pub mod error;
pub mod group;
pub mod hypothesis;
pub mod linalg;
pub mod quadrature;
pub(crate) mod math;
pub mod special;
pub mod verify;
pub mod wishart;

pub use cone::{AmbientSpace, ConePoint, P2Element, SubconeSplit};
pub use error::{Error, Result};
pub use group::GroupElement;
pub use hypothesis::{EigenPair, EqualityTestResult, SubconeTestResult};
pub use wishart::WishartModel;
