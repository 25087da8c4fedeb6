//! Dimension spectra of dilation sets and the power-weight boundedness
//! region of spherical maximal operators.
//!
//! A dilation set `ℰ ⊂ (0, ∞)` is described symbolically by a
//! [`setgen::DilationSetSpec`] and sampled in logarithmic coordinates
//! `u = log₂ t`, where the multiplicative metric `|log₂(s/t)|` is just the
//! Euclidean distance. From exact covering counts ([`entropy`]) the crate
//! estimates the Minkowski-type dimension `β`, the Assouad spectrum, the
//! Legendre–Assouad function `ν♯` and the quasi-Assouad dimension `γ`
//! ([`dimension`]). These feed the region of `(1/p, α/p)` for which the
//! maximal operator `M_ℰ` is bounded on `L^p(|x|^α)` ([`typeset`]).
//!
//! [`sphere_lab`] evaluates spherical averages by quadrature and builds the
//! Knapp-type test functions whose maximal averages witness the lower
//! boundary of that region.
//!
//! ## Examples
//!
//! Each major capability has a runnable example:
//!
//! ```bash
//! cargo run --example set_specs
//! cargo run --example cover_counts
//! cargo run --example dimension_profile
//! cargo run --example type_set_region
//! cargo run --example union_regions
//! cargo run --example knapp_geometry
//! cargo run --example lower_bound_slope
//! cargo run --example ball_test
//! cargo run --example scaling_invariance
//! ```
//!
//! The `sphermax` binary wraps the same pipeline behind the `dims`,
//! `typeset`, `knapp`, `balltest`, `verify` and `plot` subcommands.

pub mod cli;
pub mod dimension;
pub mod entropy;
mod error;
pub mod regression;
pub mod setgen;
pub mod sphere_lab;
pub mod svg;
pub mod typeset;

pub use error::{Error, Result};

/// Version string embedded in every emitted report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
