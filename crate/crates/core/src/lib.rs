//! Exact rational-point counting on the singular cubic surface
//!
//! ```text
//! x1*x2^2 + x2*x0^2 + x3^3 = 0
//! ```
//!
//! which carries a single E6 singularity and a single line `x2 = x3 = 0`.
//!
//! The crate provides
//!
//! * a naive exact counter over projective representatives ([`surface`]),
//! * the universal-torsor parametrisation and the exponent-shuffling bijection
//!   between its two coprimality schemes ([`torsor`]),
//! * a fast torsor-coordinate enumerator with a direct and a residue-stepping
//!   strategy for the inner variable ([`enumerate`]),
//! * the real height-region functions and both evaluations of the archimedean
//!   density ([`region`]),
//! * number-theoretic kernels: cubic exponential sums, the sawtooth counting
//!   identity, the density `theta`, the main-term function `Delta`, local Euler
//!   factors and real zeta values ([`arith`]),
//! * assembly of the conjectural leading constant ([`peyre`]),
//! * reusable property checks used by the command-line `verify` run ([`verify`]).
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default); every parallel entry point has a sequential twin selected by
//! [`Execution`].

pub mod arith;
pub mod enumerate;
mod par;
pub mod peyre;
pub mod quad;
pub mod region;
pub mod surface;
pub mod torsor;
pub mod verify;

pub use enumerate::{count_e_torsor, count_total, EnumConfig, Strategy};
pub use par::{parallel_enabled, with_threads, Execution};
pub use region::RegionParams;
pub use surface::{count_naive, CountReport, Method, SurfacePoint};
pub use torsor::{ExponentVector, Scheme, TorsorPoint, Xi};

/// Exact rationals used for densities and local factors.
pub type Rational = num_rational::Ratio<i128>;

/// Largest height bound accepted by the counters.
///
/// Keeps every intermediate product of the torsor and surface equations inside
/// `i128`.
pub const MAX_BOUND: u64 = 1_000_000_000;
