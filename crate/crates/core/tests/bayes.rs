use proptest::prelude::*;
use rld_core::bayes::Increment;
use rld_core::simulator::{NormalSpec, TaskMode};
use rld_core::{
    estimate_gamma, sample_parameters, simulate_fleet, update_posterior, FleetProfile, PosteriorState,
    TaskSeverityModel, TransitionStats,
};

fn two_state() -> TaskSeverityModel {
    TaskSeverityModel::with_indexed_states(vec![vec![-1.0, 1.0], vec![2.0, -2.0]], vec![1.0, 5.0]).unwrap()
}

fn profile(n_robots: usize, gamma: f64, inspections: u64) -> FleetProfile {
    FleetProfile {
        n_robots,
        alpha: NormalSpec { mean: 0.1, sd: 0.01 },
        beta: NormalSpec { mean: 0.05, sd: 0.005 },
        gamma,
        threshold: 1e9,
        initial: 0.0,
        measurement_noise: 0.0,
        cycles_per_epoch: 5,
        dt: 0.05,
        task_mode: TaskMode::Ctmc,
        max_tasks: 5 * inspections,
        max_task_duration: 1e6,
    }
}

#[test]
fn credible_intervals_are_calibrated_with_known_gamma() {
    let model = two_state();
    let runs = simulate_fleet(&profile(400, 0.2, 40), &model, 11).unwrap();
    let prior = PosteriorState::diffuse(0.2, TransitionStats::empty(2)).unwrap();
    let mut covered = [0usize; 2];
    for run in &runs {
        let post = update_posterior(&prior, &run.log, model.severity()).unwrap();
        for (i, truth) in [run.alpha, run.beta].into_iter().enumerate() {
            let (lo, hi) = post.credible_interval(i, 0.95);
            covered[i] += usize::from(lo <= truth && truth <= hi);
        }
    }
    for c in covered {
        // 400 Bernoulli(0.95) trials: ±0.03 is about 2.75σ
        let rate = c as f64 / runs.len() as f64;
        assert!((rate - 0.95).abs() < 0.03, "coverage {rate}");
    }
}

#[test]
fn gamma_estimate_is_consistent() {
    let model = two_state();
    let runs = simulate_fleet(&profile(50, 0.3, 60), &model, 5).unwrap();
    let logs: Vec<_> = runs.iter().map(|r| r.log.clone()).collect();
    let g = estimate_gamma(&logs, model.severity()).unwrap();
    // 50 × (60 − 2) residual degrees of freedom: relative SE ≈ 1/sqrt(2·2900)
    assert!((g - 0.3).abs() / 0.3 < 0.04, "gamma {g}");
}

#[test]
fn posterior_concentrates_on_the_truth() {
    let model = two_state();
    let mut p = profile(5, 0.005, 200);
    p.cycles_per_epoch = 10;
    p.max_tasks = 2000;
    let runs = simulate_fleet(&p, &model, 3).unwrap();
    let prior = PosteriorState::diffuse(0.005, TransitionStats::empty(2)).unwrap();
    for run in &runs {
        let post = update_posterior(&prior, &run.log, model.severity()).unwrap();
        assert!((post.mean_alpha() - run.alpha).abs() / run.alpha < 0.05);
        assert!((post.mean_beta() - run.beta).abs() / run.beta < 0.05);
        assert_eq!(post.last_epoch, Some(200));
    }
}

#[test]
fn parameter_draws_follow_the_posterior() {
    let model = two_state();
    let post = PosteriorState::new(
        [0.1, 0.05],
        [[4e-4, -1e-4], [-1e-4, 1e-4]],
        0.2,
        TransitionStats::from_model(&model, 2_000.0).unwrap(),
    )
    .unwrap();
    let draws = sample_parameters(&post, 20_000, 9).unwrap();
    let n = draws.len() as f64;
    let ma = draws.iter().map(|d| d.alpha).sum::<f64>() / n;
    let mb = draws.iter().map(|d| d.beta).sum::<f64>() / n;
    let cab = draws.iter().map(|d| (d.alpha - ma) * (d.beta - mb)).sum::<f64>() / n;
    assert!((ma - 0.1).abs() < 4.0 * (4e-4f64 / n).sqrt());
    assert!((mb - 0.05).abs() < 4.0 * (1e-4f64 / n).sqrt());
    assert!((cab + 1e-4).abs() < 1.5e-5, "cov {cab}");
    // exit rates concentrate near the model's (1, 2) with 2000 h of pseudo-data
    let r0 = draws.iter().map(|d| d.chain.exit_rates()[0]).sum::<f64>() / n;
    let r1 = draws.iter().map(|d| d.chain.exit_rates()[1]).sum::<f64>() / n;
    assert!((r0 - 1.0).abs() < 0.02 && (r1 - 2.0).abs() < 0.04, "{r0} {r1}");
}

fn arb_increments() -> impl Strategy<Value = Vec<Increment>> {
    prop::collection::vec(
        (-5.0f64..5.0, 0.0f64..10.0, 0.01f64..5.0)
            .prop_map(|(d, e, t)| Increment { delta_accuracy: d, exposure: e, duration: t }),
        1..30,
    )
}

proptest! {
    #[test]
    fn updates_never_increase_marginal_variance(incs in arb_increments(), gamma in 0.05f64..2.0, v in 1e-4f64..1e2) {
        let prior = PosteriorState::new([0.0, 0.0], [[v, 0.0], [0.0, v]], gamma, TransitionStats::empty(1)).unwrap();
        let post = prior.update_with_increments(&incs).unwrap();
        prop_assert!(post.cov[0][0] <= v * (1.0 + 1e-9));
        prop_assert!(post.cov[1][1] <= v * (1.0 + 1e-9));
        let det = post.cov[0][0] * post.cov[1][1] - post.cov[0][1] * post.cov[1][0];
        prop_assert!(det >= -1e-12 * v * v);
    }

    #[test]
    fn splitting_the_data_does_not_change_the_posterior(
        incs in arb_increments(),
        cut in 0usize..30,
        gamma in 0.05f64..2.0,
    ) {
        let prior = PosteriorState::new([0.1, 0.1], [[1.0, 0.0], [0.0, 1.0]], gamma, TransitionStats::empty(1)).unwrap();
        let cut = cut.min(incs.len());
        let batch = prior.update_with_increments(&incs).unwrap();
        let seq = prior
            .update_with_increments(&incs[..cut])
            .and_then(|p| p.update_with_increments(&incs[cut..]))
            .unwrap();
        for i in 0..2 {
            let scale = batch.cov[i][i].sqrt().max(1e-12);
            prop_assert!((batch.mean[i] - seq.mean[i]).abs() < 1e-6 * scale.max(batch.mean[i].abs()));
            prop_assert!((batch.cov[i][i] - seq.cov[i][i]).abs() < 1e-6 * batch.cov[i][i].max(1e-300));
        }
    }
}
