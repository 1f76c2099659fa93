//! Task-severity continuous-time Markov chain.
//!
//! The chain `ψ(t)` switches between task-severity states with exponential
//! holding times. Each state carries a scalar severity (payload, say) that
//! scales the degradation drift. Time is measured in hours throughout.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

const ROW_SUM_TOL: f64 = 1e-10;
const PROBABILITY_SUM_TOL: f64 = 1e-10;

fn time_tol(t: f64) -> f64 {
    1e-9 * t.abs().max(1.0)
}

/// State space, generator and severity map of the task-severity chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct TaskSeverityModel {
    states: Vec<String>,
    generator: Vec<Vec<f64>>,
    severity: Vec<f64>,
}

/// On-disk JSON layout of a [`TaskSeverityModel`].
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    states: Vec<String>,
    generator: Vec<Vec<f64>>,
    severity: BTreeMap<String, f64>,
}

impl TryFrom<ModelFile> for TaskSeverityModel {
    type Error = Error;

    fn try_from(file: ModelFile) -> Result<Self> {
        if file.severity.len() != file.states.len() {
            return Err(Error::DimensionMismatch(format!(
                "severity map has {} entries for {} states",
                file.severity.len(),
                file.states.len()
            )));
        }
        let severity = file
            .states
            .iter()
            .map(|s| file.severity.get(s).copied().ok_or_else(|| Error::UnknownState(s.clone())))
            .collect::<Result<Vec<_>>>()?;
        TaskSeverityModel::new(file.states, file.generator, severity)
    }
}

impl From<TaskSeverityModel> for ModelFile {
    fn from(model: TaskSeverityModel) -> Self {
        let severity = model.states.iter().cloned().zip(model.severity.iter().copied()).collect();
        ModelFile { states: model.states, generator: model.generator, severity }
    }
}

impl TaskSeverityModel {
    pub fn new(states: Vec<String>, generator: Vec<Vec<f64>>, severity: Vec<f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::DimensionMismatch("empty state space".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for s in &states {
            if !seen.insert(s.as_str()) {
                return Err(Error::InvalidGenerator(format!("duplicate state `{s}`")));
            }
        }
        if severity.len() != states.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} severity values for {} states",
                severity.len(),
                states.len()
            )));
        }
        if let Some(i) = severity.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("severity of `{}` is not finite", states[i])));
        }
        let report = validate_generator(&generator, states.len())?;
        if !report.passed() {
            return Err(Error::InvalidGenerator(report.to_string()));
        }
        Ok(Self { states, generator, severity })
    }

    /// Convenience constructor naming states `0, 1, ...`.
    pub fn with_indexed_states(generator: Vec<Vec<f64>>, severity: Vec<f64>) -> Result<Self> {
        let states = (0..generator.len()).map(|i| i.to_string()).collect();
        Self::new(states, generator, severity)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn generator(&self) -> &[Vec<f64>] {
        &self.generator
    }

    pub fn severity(&self) -> &[f64] {
        &self.severity
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn jump_chain(&self) -> JumpChain {
        JumpChain::from_generator(&self.generator)
    }

    pub fn is_ergodic(&self) -> bool {
        first_unreachable(&self.generator).is_none()
    }

    pub fn stationary_distribution(&self) -> Result<StationaryDistribution> {
        stationary_distribution_of(&self.generator)
    }
}

/// Solves `πQ = 0`, `Σπ = 1` by swapping the last balance equation for
/// the normalization constraint. `generator` is assumed well formed.
pub fn stationary_distribution_of(generator: &[Vec<f64>]) -> Result<StationaryDistribution> {
    if let Some(state) = first_unreachable(generator) {
        return Err(Error::NotErgodic(state));
    }
    let n = generator.len();
    let mut a = DMatrix::from_fn(n, n, |r, c| generator[c][r]);
    for c in 0..n {
        a[(n - 1, c)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let x = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::Singular("stationary balance equations".into()))?;
    let mut pi: Vec<f64> = x.iter().map(|&p| if p < 0.0 && p > -1e-12 { 0.0 } else { p }).collect();
    let total: f64 = pi.iter().sum();
    pi.iter_mut().for_each(|p| *p /= total);
    StationaryDistribution::new(pi)
}

/// One violated generator rule.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorViolation {
    NonFinite { row: usize, col: usize },
    RowSum { row: usize, sum: f64 },
    NegativeOffDiagonal { row: usize, col: usize, value: f64 },
    PositiveDiagonal { row: usize, value: f64 },
}

impl fmt::Display for GeneratorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFinite { row, col } => write!(f, "entry ({row},{col}) is not finite"),
            Self::RowSum { row, sum } => write!(f, "row {row} sums to {sum}"),
            Self::NegativeOffDiagonal { row, col, value } => {
                write!(f, "negative off-diagonal {value} at ({row},{col})")
            }
            Self::PositiveDiagonal { row, value } => write!(f, "positive diagonal {value} at ({row},{row})"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GeneratorReport {
    pub violations: Vec<GeneratorViolation>,
}

impl GeneratorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for GeneratorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        write!(f, "fail: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the rate-matrix rules without touching the matrix.
pub fn validate_generator(generator: &[Vec<f64>], n_states: usize) -> Result<GeneratorReport> {
    if generator.len() != n_states {
        return Err(Error::DimensionMismatch(format!(
            "generator has {} rows for {n_states} states",
            generator.len()
        )));
    }
    if let Some((i, row)) = generator.iter().enumerate().find(|(_, r)| r.len() != n_states) {
        return Err(Error::DimensionMismatch(format!("generator row {i} has {} columns", row.len())));
    }
    let mut report = GeneratorReport::default();
    for (i, row) in generator.iter().enumerate() {
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            report.violations.push(GeneratorViolation::NonFinite { row: i, col: j });
            continue;
        }
        let sum: f64 = row.iter().sum();
        if sum.abs() > ROW_SUM_TOL {
            report.violations.push(GeneratorViolation::RowSum { row: i, sum });
        }
        for (j, &v) in row.iter().enumerate() {
            if i == j && v > 0.0 {
                report.violations.push(GeneratorViolation::PositiveDiagonal { row: i, value: v });
            } else if i != j && v < 0.0 {
                report.violations.push(GeneratorViolation::NegativeOffDiagonal { row: i, col: j, value: v });
            }
        }
    }
    Ok(report)
}

/// Returns a state that cannot reach, or be reached from, state 0 along
/// strictly positive rates; `None` when the rate graph is strongly connected.
fn first_unreachable(generator: &[Vec<f64>]) -> Option<usize> {
    let n = generator.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                let rate = if forward { generator[i][j] } else { generator[j][i] };
                if i != j && rate > 0.0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    };
    let fwd = reach(true);
    let back = reach(false);
    (0..n).find(|&i| !fwd[i] || !back[i])
}

/// Long-run state proportions; also used for hypothesized future task mixes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct StationaryDistribution(Vec<f64>);

impl StationaryDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        validate_probabilities(&probabilities)?;
        Ok(Self(probabilities))
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    /// `Σ π_i ψ_i`.
    pub fn mean_severity(&self, severity: &[f64]) -> f64 {
        self.0.iter().zip(severity).map(|(p, s)| p * s).sum()
    }
}

impl TryFrom<Vec<f64>> for StationaryDistribution {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<StationaryDistribution> for Vec<f64> {
    fn from(d: StationaryDistribution) -> Self {
        d.0
    }
}

pub(crate) fn validate_probabilities(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidProportions("empty vector".into()));
    }
    if let Some(v) = p.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidProportions(format!("entry {v} is negative or not finite")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
        return Err(Error::InvalidProportions(format!("entries sum to {sum}")));
    }
    Ok(())
}

/// Exit rates plus jump probabilities of the embedded chain.
///
/// This is the form the simulators consume; it is also what the posterior
/// sampler produces for each Monte-Carlo draw.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpChain {
    exit_rates: Vec<f64>,
    jump_probs: Vec<Vec<f64>>,
}

impl JumpChain {
    pub fn new(exit_rates: Vec<f64>, jump_probs: Vec<Vec<f64>>) -> Result<Self> {
        let n = exit_rates.len();
        if jump_probs.len() != n || jump_probs.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("jump matrix does not match exit rates".into()));
        }
        for (i, (&rate, row)) in exit_rates.iter().zip(&jump_probs).enumerate() {
            if !rate.is_finite() || rate < 0.0 {
                return Err(Error::InvalidParameter(format!("exit rate {rate} of state {i}")));
            }
            if rate > 0.0 {
                validate_probabilities(row)?;
                if row[i] != 0.0 {
                    return Err(Error::InvalidParameter(format!("self-jump probability at state {i}")));
                }
            }
        }
        Ok(Self { exit_rates, jump_probs })
    }

    pub fn from_generator(generator: &[Vec<f64>]) -> Self {
        let n = generator.len();
        let mut exit_rates = Vec::with_capacity(n);
        let mut jump_probs = Vec::with_capacity(n);
        for (i, row) in generator.iter().enumerate() {
            let rate: f64 = row.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v).sum();
            let probs = if rate > 0.0 {
                row.iter().enumerate().map(|(j, &v)| if j == i { 0.0 } else { v / rate }).collect()
            } else {
                vec![0.0; n]
            };
            exit_rates.push(rate);
            jump_probs.push(probs);
        }
        Self { exit_rates, jump_probs }
    }

    pub fn n_states(&self) -> usize {
        self.exit_rates.len()
    }

    pub fn exit_rates(&self) -> &[f64] {
        &self.exit_rates
    }

    pub fn jump_probs(&self) -> &[Vec<f64>] {
        &self.jump_probs
    }

    /// Exponential holding time; infinite for a state without exits.
    pub fn holding_time<R: Rng + ?Sized>(&self, state: usize, rng: &mut R) -> f64 {
        let rate = self.exit_rates[state];
        if rate > 0.0 {
            let e: f64 = rng.sample(Exp1);
            e / rate
        } else {
            f64::INFINITY
        }
    }

    pub fn next_state<R: Rng + ?Sized>(&self, state: usize, rng: &mut R) -> usize {
        let row = &self.jump_probs[state];
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut last = state;
        for (j, &p) in row.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last = j;
                if u < acc {
                    return j;
                }
            }
        }
        last
    }
}

/// One holding interval of the severity process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub state: usize,
    pub start: f64,
    pub end: f64,
}

impl Segment {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }
}

/// Piecewise-constant realization of the severity process.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SeverityPath {
    segments: Vec<Segment>,
}

impl SeverityPath {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for (k, s) in segments.iter().enumerate() {
            if !(s.start.is_finite() && s.end.is_finite()) || s.end <= s.start {
                return Err(Error::InvalidPath(format!(
                    "segment {k} has end {} not after start {}",
                    s.end, s.start
                )));
            }
            if k > 0 {
                let prev = segments[k - 1].end;
                if (s.start - prev).abs() > time_tol(prev) {
                    return Err(Error::InvalidPath(format!(
                        "segment {k} starts at {} but the previous one ends at {prev}",
                        s.start
                    )));
                }
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn start(&self) -> f64 {
        self.segments.first().map_or(0.0, |s| s.start)
    }

    pub fn end(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.end)
    }

    pub fn span(&self) -> f64 {
        self.end() - self.start()
    }

    /// State in force at `t`; at a jump time the new state is returned.
    pub fn state_at(&self, t: f64) -> Option<usize> {
        if self.segments.is_empty() || t < self.start() - time_tol(t) || t > self.end() + time_tol(t) {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.end <= t);
        Some(self.segments[idx.min(self.segments.len() - 1)].state)
    }

    /// `∫_{t0}^{t1} ψ(ν) dν`, summed exactly over the overlapping segments.
    pub fn integrated_severity(&self, severity: &[f64], t0: f64, t1: f64) -> Result<f64> {
        if t1 < t0 {
            return Err(Error::InvalidParameter(format!("interval end {t1} precedes start {t0}")));
        }
        let (start, end) = (self.start(), self.end());
        if self.segments.is_empty() || t0 < start - time_tol(start) || t1 > end + time_tol(end) {
            return Err(Error::OutsideCoverage { t0, t1, start, end });
        }
        if t1 == t0 {
            return Ok(0.0);
        }
        let first = self.segments.partition_point(|s| s.end <= t0);
        let mut total = 0.0;
        for s in &self.segments[first..] {
            if s.start >= t1 {
                break;
            }
            let overlap = s.end.min(t1) - s.start.max(t0);
            if overlap > 0.0 {
                total += severity[s.state] * overlap;
            }
        }
        Ok(total)
    }

    pub fn time_average_severity(&self, severity: &[f64]) -> Result<f64> {
        let span = self.span();
        if span <= 0.0 {
            return Err(Error::InvalidPath("zero-length path".into()));
        }
        Ok(self.integrated_severity(severity, self.start(), self.end())? / span)
    }

    /// Time spent in each state.
    pub fn dwell_times(&self, n_states: usize) -> Vec<f64> {
        let mut dwell = vec![0.0; n_states];
        for s in &self.segments {
            dwell[s.state] += s.duration();
        }
        dwell
    }

    /// The path clipped to `(-inf, t_end]`.
    pub fn truncated(&self, t_end: f64) -> SeverityPath {
        let segments = self
            .segments
            .iter()
            .filter(|s| s.start < t_end)
            .map(|s| Segment { end: s.end.min(t_end), ..*s })
            .collect();
        SeverityPath { segments }
    }

    /// Appends segments that continue this path.
    pub fn extend(&mut self, more: &[Segment]) -> Result<()> {
        let mut all = std::mem::take(&mut self.segments);
        all.extend_from_slice(more);
        match SeverityPath::new(all.clone()) {
            Ok(p) => {
                *self = p;
                Ok(())
            }
            Err(e) => {
                all.truncate(all.len() - more.len());
                self.segments = all;
                Err(e)
            }
        }
    }

    pub(crate) fn push_unchecked(&mut self, segment: Segment) {
        self.segments.push(segment);
    }

    pub(crate) fn check_states(&self, n_states: usize) -> Result<()> {
        match self.segments.iter().find(|s| s.state >= n_states) {
            Some(s) => Err(Error::UnknownState(s.state.to_string())),
            None => Ok(()),
        }
    }
}

/// Exact simulation from `initial_state` over `[0, horizon]`.
pub fn simulate_path(
    model: &TaskSeverityModel,
    initial_state: usize,
    horizon: f64,
    seed: u64,
) -> Result<SeverityPath> {
    if initial_state >= model.n_states() {
        return Err(Error::UnknownState(initial_state.to_string()));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter(format!("horizon {horizon} must be positive")));
    }
    let mut rng = crate::rng::seeded(seed);
    Ok(simulate_chain(&model.jump_chain(), initial_state, horizon, &mut rng))
}

pub fn simulate_chain<R: Rng + ?Sized>(
    chain: &JumpChain,
    initial_state: usize,
    horizon: f64,
    rng: &mut R,
) -> SeverityPath {
    let mut path = SeverityPath::default();
    let mut cursor = ChainCursor::start(chain, initial_state, 0.0, rng);
    loop {
        let seg = cursor.current();
        if seg.end >= horizon {
            path.push_unchecked(Segment { end: horizon, ..seg });
            return path;
        }
        path.push_unchecked(seg);
        cursor.advance(rng);
    }
}

/// Lazily generated chain realization, advanced on demand.
#[derive(Debug, Clone)]
pub struct ChainCursor<'a> {
    chain: &'a JumpChain,
    state: usize,
    time: f64,
    segment_start: f64,
    segment_end: f64,
}

impl<'a> ChainCursor<'a> {
    pub fn start<R: Rng + ?Sized>(chain: &'a JumpChain, state: usize, time: f64, rng: &mut R) -> Self {
        let segment_end = time + chain.holding_time(state, rng);
        Self { chain, state, time, segment_start: time, segment_end }
    }

    pub fn state(&self) -> usize {
        self.state
    }

    /// The holding interval currently in force.
    pub fn current(&self) -> Segment {
        Segment { state: self.state, start: self.segment_start, end: self.segment_end }
    }

    /// Jumps to the next holding interval.
    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.state = self.chain.next_state(self.state, rng);
        self.segment_start = self.segment_end;
        self.time = self.segment_end;
        self.segment_end = self.segment_start + self.chain.holding_time(self.state, rng);
    }

    /// Integrated severity from the cursor's time up to `until`, consuming
    /// any jumps in between.
    pub fn exposure_until<R: Rng + ?Sized>(&mut self, until: f64, severity: &[f64], rng: &mut R) -> f64 {
        let mut total = 0.0;
        while self.segment_end < until {
            total += severity[self.state] * (self.segment_end - self.time);
            self.advance(rng);
        }
        total += severity[self.state] * (until - self.time);
        self.time = until;
        total
    }
}

/// Transition counts `N_ij` and dwell times `T_i`: the sufficient statistics
/// of a fully observed chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionStats {
    pub counts: Vec<Vec<f64>>,
    pub dwell: Vec<f64>,
}

impl TransitionStats {
    pub fn empty(n_states: usize) -> Self {
        Self { counts: vec![vec![0.0; n_states]; n_states], dwell: vec![0.0; n_states] }
    }

    /// Pseudo-observations worth `hours` of stationary operation under `model`.
    pub fn from_model(model: &TaskSeverityModel, hours: f64) -> Result<Self> {
        let pi = model.stationary_distribution()?;
        let n = model.n_states();
        let mut stats = Self::empty(n);
        for i in 0..n {
            stats.dwell[i] = pi.probabilities()[i] * hours;
            for j in 0..n {
                if i != j {
                    stats.counts[i][j] = model.generator()[i][j] * stats.dwell[i];
                }
            }
        }
        Ok(stats)
    }

    pub fn n_states(&self) -> usize {
        self.dwell.len()
    }

    pub fn exits(&self, state: usize) -> f64 {
        self.counts[state].iter().enumerate().filter(|&(j, _)| j != state).map(|(_, v)| v).sum()
    }

    /// Accumulates what `path` shows on the window `(t0, t1]`: dwell overlap
    /// and the state changes at jump times inside the window.
    pub fn observe(&mut self, path: &SeverityPath, t0: f64, t1: f64) -> Result<()> {
        let n = self.n_states();
        path.check_states(n)?;
        let segs = path.segments();
        for (k, s) in segs.iter().enumerate() {
            let overlap = s.end.min(t1) - s.start.max(t0);
            if overlap > 0.0 {
                self.dwell[s.state] += overlap;
            }
            if k > 0 && s.start > t0 && s.start <= t1 {
                let from = segs[k - 1].state;
                if from != s.state {
                    self.counts[from][s.state] += 1.0;
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_states();
        if self.counts.len() != n || self.counts.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("transition counts do not match dwell times".into()));
        }
        let bad = |v: &f64| !v.is_finite() || *v < 0.0;
        if self.dwell.iter().any(bad) || self.counts.iter().flatten().any(bad) {
            return Err(Error::InvalidParameter("negative or non-finite chain statistics".into()));
        }
        Ok(())
    }
}

/// Maximum-likelihood generator together with its sufficient statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorEstimate {
    pub generator: Vec<Vec<f64>>,
    pub stats: TransitionStats,
    /// States never visited; their rows are left at zero.
    pub unidentifiable: Vec<usize>,
}

/// `q_ij = N_ij / T_i` from fully observed histories.
pub fn estimate_generator(histories: &[SeverityPath], n_states: usize) -> Result<GeneratorEstimate> {
    if histories.is_empty() {
        return Err(Error::EmptyHistory);
    }
    let mut stats = TransitionStats::empty(n_states);
    for h in histories {
        stats.observe(h, f64::NEG_INFINITY, f64::INFINITY)?;
    }
    let mut generator = vec![vec![0.0; n_states]; n_states];
    let mut unidentifiable = Vec::new();
    for (i, row) in generator.iter_mut().enumerate() {
        if stats.dwell[i] <= 0.0 {
            unidentifiable.push(i);
            continue;
        }
        let mut out = 0.0;
        for (j, q) in row.iter_mut().enumerate() {
            if i != j {
                *q = stats.counts[i][j] / stats.dwell[i];
                out += *q;
            }
        }
        row[i] = -out;
    }
    Ok(GeneratorEstimate { generator, stats, unidentifiable })
}

/// `π̂_i = T_i / Σ_j T_j`.
pub fn empirical_proportions(histories: &[SeverityPath], n_states: usize) -> Result<StationaryDistribution> {
    let mut dwell = vec![0.0; n_states];
    for h in histories {
        h.check_states(n_states)?;
        for (acc, d) in dwell.iter_mut().zip(h.dwell_times(n_states)) {
            *acc += d;
        }
    }
    let total: f64 = dwell.iter().sum();
    if total <= 0.0 {
        return Err(Error::EmptyHistory);
    }
    StationaryDistribution::new(dwell.into_iter().map(|d| d / total).collect())
}
