//! Spherical averages, power-weighted norms and the Knapp-type
//! extremizers that witness the lower boundary of the type set.
//!
//! Functions live on `ℝ^d`, `d ∈ {2, 3}`, as exact indicator predicates.
//! Two averaging schemes are available: a full-sphere product rule
//! ([`QuadratureRule`]) and a band rule that integrates only the directions
//! able to reach the support ([`BandRule`]).

pub mod experiments;
pub mod functions;
pub mod knapp;
pub mod norms;
pub mod quadrature;

pub use experiments::{
    ball_test_experiment, build_instance, knapp_ratio, lower_bound_experiment, pointwise_lower_bounds,
    scaling_invariance_test, BallReport, ExperimentOptions, KRule, KnappInstance, PointwiseReport, RadiiChoice,
    ScalingReport, SlopeReport, Target,
};
pub use functions::{
    banded_average, maximal_function, maximal_over, spherical_average, Averaging, Ball, BandHint, Constant,
    Cylinder, FnFunction, GridFunction, Indicator, Shell, SpatialFunction,
};
pub use knapp::{
    check_disjoint, geometry_inclusion_test, knapp_large_k, knapp_small_k, separated_net, Branch,
    DisjointnessReport, InclusionReport, KnappCase, KnappConfig, LargeK, Piece, PieceShape, SmallK, LARGE_K_EPS,
    SMALL_K_EPS,
};
pub use norms::{radial_integral, weighted_norm};
pub use quadrature::{Band, BandRule, Point, QuadratureRule};
