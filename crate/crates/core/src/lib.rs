//! # sqbias
//!
//! Exact size-, zero- and square-bias transformations of probability laws,
//! together with the machinery to check the moment-type bounds they satisfy:
//!
//! - [`dist`]: finite discrete laws, piecewise-quadratic densities and
//!   mixtures, with exact moments and distribution functions.
//! - [`transforms`]: size bias, zero bias, square bias, double size bias,
//!   the `U * X_sq` construction and the zero-bias decomposition of sums.
//! - [`charfn`]: closed-form characteristic functions and their first two
//!   derivatives.
//! - [`metrics`]: the L1 (Wasserstein-1) distance computed exactly as the
//!   integral of the absolute CDF difference, and the smoothing inequality.
//! - [`bounds`]: once- and twice-integrated bounds on `|f(t) - exp(-t^2/2)|`.
//! - [`extremal`]: two- and three-point analysis of `L1(X, X_sq) <= E|X|^3`.
//! - [`verify`]: seeded randomized suites driving all of the above.
//!
//! ```
//! use sqbias::{transforms, metrics, Distribution};
//!
//! let x = Distribution::rademacher(1.0).unwrap();
//! let xz = transforms::zero_bias(&x).unwrap();
//! assert_eq!(xz, Distribution::uniform(-1.0, 1.0).unwrap());
//! assert!((metrics::l1_distance(&x, &xz) - 0.5).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod charfn;
pub mod dist;
pub mod error;
pub mod extremal;
mod flat;
pub mod metrics;
mod poly;
pub mod quad;
pub mod random;
pub mod transforms;
pub mod verify;

pub use dist::{mixture, DiscreteDist, Distribution, MixtureDist, MomentSet, PiecewiseDensity};
pub use error::{Error, Result};
