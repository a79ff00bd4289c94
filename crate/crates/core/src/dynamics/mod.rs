//! Flows, twists, Poisson brackets and mapping-class orbits.

pub mod flow;
pub mod orbit;
pub mod poisson;
pub mod rational;

pub use flow::{dehn_twist, dehn_twist_inverse, flow, local_parametrization, undegenerate_twist, FlowSpec, UndegenerateOutcome};
pub use orbit::{
    orbit_explore, BreadthFirst, FingerprintIndex, OrbitConfig, OrbitExploration, OrbitRecord, OrbitStrategy,
    OrbitVerdict, RandomWalk, StrategyRegistry,
};
pub use poisson::{poisson_fd, poisson_zero_locus_check, ZeroLocusOptions, ZeroLocusReport};
pub use rational::{rational_angle, RationalAngleReport};
