//! Remaining-lifetime prediction for robotic manipulators whose positional
//! accuracy degrades at a rate set by the severity of the tasks they run.
//!
//! Task severities follow a continuous-time Markov chain ([`ctmc`]); accuracy
//! follows a Brownian motion whose drift scales with the current severity
//! ([`degradation`]). Inspections update a Gaussian posterior over the drift
//! coefficients ([`bayes`]), from which [`rld`] predicts the remaining
//! lifetime either in closed form or by simulation.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bayes;
pub mod ctmc;
pub mod degradation;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod rld;
pub mod rng;
pub mod simulator;
pub mod stats;

pub use bayes::{
    estimate_gamma, sample_parameters, update_posterior, ChainUpdate, Increment, Inspection, InspectionLog,
    ParameterDraw, PosteriorState,
};
pub use ctmc::{
    estimate_generator, simulate_path, stationary_distribution_of, validate_generator, JumpChain, Segment, SeverityPath, StationaryDistribution,
    TaskSeverityModel, TransitionStats,
};
pub use degradation::{first_passage, simulate_degradation, DegradationModel, DegradationPath, InverseGaussian};
pub use error::{Error, Result};
pub use pipeline::{PredictionContext, RldReport};
pub use rld::{
    effective_rate, rld_approach1, rld_approach2, rul_median, whatif, RldClosedForm, RldEmpirical,
    RemainingLifetime, WhatIfScenario,
};
pub use simulator::{simulate_fleet, simulate_task_planner, update_schedule, FleetProfile, RobotRun};
