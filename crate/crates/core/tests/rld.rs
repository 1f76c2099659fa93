use proptest::prelude::*;
use rld_core::rld::{closed_form, lemma1_check, standard_scenarios, Approach2Config, Lemma1Config};
use rld_core::simulator::{NormalSpec, TaskMode};
use rld_core::{
    rld_approach1, rld_approach2, simulate_fleet, whatif, FleetProfile, InverseGaussian, PosteriorState,
    RemainingLifetime, TaskSeverityModel, TransitionStats, WhatIfScenario,
};

fn point_posterior(alpha: f64, beta: f64, gamma: f64, model: &TaskSeverityModel) -> PosteriorState {
    PosteriorState::new([alpha, beta], [[0.0; 2]; 2], gamma, TransitionStats::from_model(model, 1e6).unwrap()).unwrap()
}

fn single_state() -> TaskSeverityModel {
    TaskSeverityModel::with_indexed_states(vec![vec![0.0]], vec![3.0]).unwrap()
}

fn two_state() -> TaskSeverityModel {
    TaskSeverityModel::with_indexed_states(vec![vec![-1.0, 1.0], vec![2.0, -2.0]], vec![1.0, 5.0]).unwrap()
}

fn config(paths: usize, horizon: f64, seed: u64, jobs: Option<usize>) -> Approach2Config {
    Approach2Config { accuracy: 1.0, threshold: 7.0, current_state: 0, paths, horizon, seed, dt: None, jobs }
}

#[test]
fn single_state_simulation_matches_closed_form() {
    let model = single_state();
    let post = point_posterior(0.1, 0.05, 0.2, &model);
    let ig = rld_approach1(1.0, 7.0, 0.35, 0.2).unwrap().distribution;
    let rld = rld_approach2(&post, &model, &config(10_000, 50.0 * ig.mean(), 17, None)).unwrap();
    assert_eq!(rld.censored_count, 0);
    // 1.63 / sqrt(n) is the 1% critical value
    assert!(rld.ks_distance(&ig) < 1.63 / 10_000f64.sqrt(), "KS {}", rld.ks_distance(&ig));
}

#[test]
fn closed_form_lower_bounds_the_simulated_mean() {
    let model = two_state();
    let post = PosteriorState::new([0.1, 0.05], [[1e-4, 0.0], [0.0, 1e-4]], 0.2, TransitionStats::from_model(&model, 1e4).unwrap())
        .unwrap();
    let report = lemma1_check(
        &post,
        &model,
        &Lemma1Config {
            accuracy: 1.0,
            threshold: 7.0,
            current_state: 0,
            paths: 5000,
            horizon_multiplier: 50.0,
            seed: 4,
            dt: None,
            jobs: None,
        },
    )
    .unwrap();
    assert!(report.pass, "{report:?}");
    assert!(report.failure_fraction >= 0.999);
}

#[test]
fn parallelism_does_not_change_results() {
    let model = two_state();
    let post = PosteriorState::new([0.1, 0.05], [[1e-4, 0.0], [0.0, 1e-4]], 0.2, TransitionStats::from_model(&model, 50.0).unwrap())
        .unwrap();
    let one = rld_approach2(&post, &model, &config(500, 100.0, 99, Some(1))).unwrap();
    let four = rld_approach2(&post, &model, &config(500, 100.0, 99, Some(4))).unwrap();
    let default = rld_approach2(&post, &model, &config(500, 100.0, 99, None)).unwrap();
    assert_eq!(one, four);
    assert_eq!(one, default);
    assert_ne!(one, rld_approach2(&post, &model, &config(500, 100.0, 100, Some(1))).unwrap());
}

// Grid-only monitoring overshoots the mean passage time by about
// 0.5826·γ·sqrt(dt)/rate (0.235 h at dt = 0.5); the bridge check removes most of it.
#[test]
fn coarse_grid_passage_times_are_nearly_unbiased() {
    let model = single_state();
    let post = point_posterior(0.1, 0.05, 0.2, &model);
    let ig = rld_approach1(1.0, 7.0, 0.35, 0.2).unwrap().distribution;
    let mut cfg = config(40_000, 50.0 * ig.mean(), 1, None);
    cfg.dt = Some(0.5);
    let rld = rld_approach2(&post, &model, &cfg).unwrap();
    let mean = rld.failure_times.iter().sum::<f64>() / rld.failure_times.len() as f64;
    assert!((mean - ig.mean()).abs() < 0.1, "bias {}", mean - ig.mean());
}

#[test]
fn simulated_median_tracks_closed_form_median() {
    let model = single_state();
    let post = point_posterior(0.1, 0.05, 0.2, &model);
    let closed = rld_approach1(1.0, 7.0, 0.35, 0.2).unwrap();
    let sim = rld_approach2(&post, &model, &config(4000, 200.0, 5, None)).unwrap();
    let rel = (sim.median_hours().unwrap() - closed.median_hours().unwrap()).abs() / closed.median_hours().unwrap();
    assert!(rel < 0.01, "relative median gap {rel}");
}

#[test]
fn heavier_task_mix_shortens_realized_lifetimes() {
    let heavy = TaskSeverityModel::with_indexed_states(vec![vec![-2.0, 2.0], vec![1.0, -1.0]], vec![1.0, 5.0]).unwrap();
    let light = two_state();
    let profile = FleetProfile {
        n_robots: 25,
        alpha: NormalSpec { mean: 0.1, sd: 0.01 },
        beta: NormalSpec { mean: 0.05, sd: 0.005 },
        gamma: 0.2,
        threshold: 6.0,
        initial: 0.0,
        measurement_noise: 0.0,
        cycles_per_epoch: 5,
        dt: 0.05,
        task_mode: TaskMode::Ctmc,
        max_tasks: 1_000_000,
        max_task_duration: 1e6,
    };
    let median = |m: &TaskSeverityModel| {
        let mut lf: Vec<f64> = simulate_fleet(&profile, m, 8).unwrap().iter().map(|r| r.failure_time.unwrap()).collect();
        lf.sort_by(f64::total_cmp);
        lf[lf.len() / 2]
    };
    assert!(median(&heavy) < median(&light));
}

proptest! {
    #[test]
    fn whatif_is_monotone_in_the_heavy_share(
        alpha in 1e-3f64..1.0,
        beta in 1e-3f64..1.0,
        gamma in 0.01f64..2.0,
        barrier in 0.1f64..50.0,
    ) {
        let model = two_state();
        let post = point_posterior(alpha, beta, gamma, &model);
        let rows = whatif(&post, 0.0, barrier, &standard_scenarios(), model.severity(), None).unwrap();
        prop_assert!(rows.windows(2).all(|w| w[0].median_hours > w[1].median_hours));
        prop_assert!(rows.windows(2).all(|w| w[0].ig.mean() > w[1].ig.mean()));
    }

    #[test]
    fn closed_form_parameters_are_consistent(a in 0.0f64..9.9, rate in 1e-3f64..10.0, gamma in 1e-3f64..5.0) {
        let r = rld_approach1(a, 10.0, rate, gamma).unwrap();
        let direct = InverseGaussian::new((10.0 - a) / rate, (10.0 - a).powi(2) / (gamma * gamma)).unwrap();
        prop_assert!((r.distribution.mean() - direct.mean()).abs() <= 1e-12 * direct.mean());
        prop_assert!((r.distribution.shape() - direct.shape()).abs() <= 1e-12 * direct.shape());
    }

    #[test]
    fn scenarios_must_be_distributions(p in prop::collection::vec(-1.0f64..2.0, 2)) {
        let sum: f64 = p.iter().sum();
        let valid = p.iter().all(|&x| x >= 0.0) && (sum - 1.0).abs() <= 1e-10;
        prop_assert_eq!(WhatIfScenario::new(p).is_ok(), valid);
    }
}

#[test]
fn closed_form_follows_the_posterior_chain() {
    let model = two_state();
    // 30 light->heavy jumps over 60 light hours, 29 back over 40 heavy hours
    let stats = TransitionStats { counts: vec![vec![0.0, 30.0], vec![29.0, 0.0]], dwell: vec![60.0, 40.0] };
    let post = PosteriorState::new([0.1, 0.05], [[0.0; 2]; 2], 0.2, stats).unwrap();
    // two states: the jump probabilities are 1, so pi_light = q_heavy / (q_light + q_heavy)
    let q_light = (30.0 + 1e-3) / (60.0 + 1e-3);
    let q_heavy = (29.0 + 1e-3) / (40.0 + 1e-3);
    let pi_light = q_heavy / (q_light + q_heavy);
    let mix = post.mean_task_mix().unwrap();
    assert!((mix.probabilities()[0] - pi_light).abs() < 1e-14);

    let rate = 0.1 * (pi_light + 5.0 * (1.0 - pi_light)) + 0.05;
    let expected = rld_approach1(1.0, 7.0, rate, 0.2).unwrap().distribution;
    let got = closed_form(&post, &model, 1.0, 7.0).unwrap().distribution;
    assert!((got.mean() - expected.mean()).abs() < 1e-12 * expected.mean());
    assert!((got.shape() - expected.shape()).abs() < 1e-12 * expected.shape());
}

#[test]
fn closed_form_bound_holds_when_history_departs_from_the_model() {
    // the robot's history is heavy-rich (pi_heavy 2/3) while the model says 1/3
    let model = two_state();
    let history = TaskSeverityModel::with_indexed_states(vec![vec![-2.0, 2.0], vec![1.0, -1.0]], vec![1.0, 5.0]).unwrap();
    let post = PosteriorState::new(
        [0.1, 0.05],
        [[1e-4, 0.0], [0.0, 1e-4]],
        0.2,
        TransitionStats::from_model(&history, 1e4).unwrap(),
    )
    .unwrap();
    let report = lemma1_check(
        &post,
        &model,
        &Lemma1Config {
            accuracy: 1.0,
            threshold: 7.0,
            current_state: 0,
            paths: 5000,
            horizon_multiplier: 50.0,
            seed: 9,
            dt: None,
            jobs: None,
        },
    )
    .unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn mismatched_chain_statistics_are_rejected() {
    let post = point_posterior(0.1, 0.05, 0.2, &single_state());
    assert!(closed_form(&post, &two_state(), 1.0, 7.0).is_err());
}
