//! Inputs shared by the benchmarks: a two-state chain and a sharp posterior.

use rld_core::pipeline::PredictionContext;
use rld_core::{PosteriorState, TaskSeverityModel, TransitionStats};

pub fn two_state_model() -> TaskSeverityModel {
    TaskSeverityModel::new(
        vec!["light".into(), "heavy".into()],
        vec![vec![-1.0, 1.0], vec![2.0, -2.0]],
        vec![1.0, 5.0],
    )
    .expect("valid model")
}

pub fn sharp_posterior(model: &TaskSeverityModel) -> PosteriorState {
    let stats = TransitionStats::from_model(model, 100.0).expect("ergodic model");
    PosteriorState::new([0.1, 0.05], [[1e-4, 0.0], [0.0, 1e-4]], 0.2, stats).expect("valid posterior")
}

pub fn context() -> PredictionContext {
    PredictionContext {
        accuracy: 1.0,
        threshold: 7.0,
        state: "light".into(),
        time: 0.0,
        cycles: 0,
        cycles_per_epoch: 10,
        hours_per_epoch: Some(2.0),
    }
}
