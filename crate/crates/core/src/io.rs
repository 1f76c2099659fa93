//! File formats: JSON documents and the CSV tables.
//!
//! CSV readers report the offending line number in every error.

use crate::bayes::{Inspection, InspectionLog};
use crate::ctmc::{Segment, SeverityPath, TaskSeverityModel};
use crate::degradation::DegradationPath;
use crate::error::{Error, Result};
use crate::rld::WhatIfRow;
use crate::simulator::{FleetProfile, RobotRun};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Parse(format!("{}: line {}, column {}: {e}", path.display(), e.line(), e.column()))
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?).map_err(|e| io_error(path, e))
}

pub fn read_model(path: &Path) -> Result<TaskSeverityModel> {
    read_json(path)
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

fn parse_error(source: &str, line: u64, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{source}: line {line}: {msg}"))
}

fn read_table<R: Read>(reader: R, source: &str, header: &[&str]) -> Result<Vec<(u64, csv::StringRecord)>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let found = rdr.headers().map_err(|e| parse_error(source, 1, e))?.clone();
    if found.iter().collect::<Vec<_>>() != header {
        return Err(parse_error(source, 1, format!("expected header `{}`", header.join(","))));
    }
    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(source, line, e)
        })?;
        rows.push((line_of(&record), record));
    }
    Ok(rows)
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, name: &str, source: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let raw = record.get(i).unwrap_or("");
    raw.parse().map_err(|e| parse_error(source, line_of(record), format!("{name} `{raw}`: {e}")))
}

const PATH_HEADER: [&str; 3] = ["state", "start_time", "end_time"];

/// Task history as `state,start_time,end_time` with state names.
pub fn write_path_csv<W: Write>(writer: W, path: &SeverityPath, model: &TaskSeverityModel) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(PATH_HEADER)?;
    for s in path.segments() {
        let name = model
            .states()
            .get(s.state)
            .ok_or_else(|| Error::UnknownState(s.state.to_string()))?;
        w.write_record([name.as_str(), &s.start.to_string(), &s.end.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_path_csv<R: Read>(reader: R, model: &TaskSeverityModel, source: &str) -> Result<SeverityPath> {
    let mut segments = Vec::new();
    for (line, rec) in read_table(reader, source, &PATH_HEADER)? {
        let name = rec.get(0).unwrap_or("");
        let state = model
            .state_index(name)
            .map_err(|_| parse_error(source, line, format!("unknown state `{name}`")))?;
        let start: f64 = field(&rec, 1, "start_time", source)?;
        let end: f64 = field(&rec, 2, "end_time", source)?;
        if let Some(prev) = segments.last().map(|s: &Segment| s.end) {
            if (start - prev).abs() > 1e-9 * prev.abs().max(1.0) {
                return Err(parse_error(source, line, format!("segment starts at {start}, previous ended at {prev}")));
            }
        }
        if !(end > start) {
            return Err(parse_error(source, line, format!("segment end {end} is not after start {start}")));
        }
        segments.push(Segment { state, start, end });
    }
    SeverityPath::new(segments)
}

const INSPECTION_HEADER: [&str; 4] = ["epoch", "cycles", "time", "accuracy"];

pub fn write_inspections_csv<W: Write>(writer: W, epochs: &[Inspection]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(INSPECTION_HEADER)?;
    for e in epochs {
        w.write_record([e.epoch.to_string(), e.cycles.to_string(), e.time.to_string(), e.accuracy.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_inspections_csv<R: Read>(reader: R, source: &str) -> Result<Vec<Inspection>> {
    read_table(reader, source, &INSPECTION_HEADER)?
        .into_iter()
        .map(|(_, rec)| {
            Ok(Inspection {
                epoch: field(&rec, 0, "epoch", source)?,
                cycles: field(&rec, 1, "cycles", source)?,
                time: field(&rec, 2, "time", source)?,
                accuracy: field(&rec, 3, "accuracy", source)?,
            })
        })
        .collect()
}

pub fn write_degradation_csv<W: Write>(writer: W, path: &DegradationPath) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["time", "accuracy"])?;
    for s in path.samples() {
        w.write_record([s.time.to_string(), s.accuracy.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Scenario table; π entries are joined with `;` inside the first column.
pub fn write_whatif_csv<W: Write>(writer: W, rows: &[WhatIfRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["pi", "median_cycles", "median_hours", "ig_mean", "ig_shape"])?;
    for r in rows {
        let pi = r.pi.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        let cycles = r.median_cycles.map(|c| c.to_string()).unwrap_or_default();
        w.write_record([
            pi,
            cycles,
            r.median_hours.to_string(),
            r.ig.mean().to_string(),
            r.ig.shape().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Simulation ground truth stored next to each robot's observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotTruth {
    pub robot: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `null` for robots that reached the task cap without failing.
    pub failure_time: Option<f64>,
    pub tasks_completed: u64,
    pub true_accuracy: Vec<f64>,
}

/// Observations of one robot read back from a fleet directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotRecord {
    pub truth: RobotTruth,
    pub log: InspectionLog,
}

pub const FLEET_PROFILE_FILE: &str = "fleet.json";
pub const FLEET_MODEL_FILE: &str = "model.json";

pub fn robot_dir(root: &Path, index: usize) -> PathBuf {
    root.join(format!("robot_{index:03}"))
}

/// Writes `fleet.json`, `model.json` and one `robot_NNN/` directory per run.
pub fn write_fleet(root: &Path, profile: &FleetProfile, model: &TaskSeverityModel, runs: &[RobotRun]) -> Result<()> {
    fs::create_dir_all(root).map_err(|e| io_error(root, e))?;
    write_json(&root.join(FLEET_PROFILE_FILE), profile)?;
    write_json(&root.join(FLEET_MODEL_FILE), model)?;
    for run in runs {
        let dir = robot_dir(root, run.index);
        fs::create_dir_all(&dir).map_err(|e| io_error(&dir, e))?;
        let tasks = dir.join("tasks.csv");
        write_path_csv(fs::File::create(&tasks).map_err(|e| io_error(&tasks, e))?, &run.log.task_history, model)?;
        let insp = dir.join("inspections.csv");
        write_inspections_csv(fs::File::create(&insp).map_err(|e| io_error(&insp, e))?, &run.log.epochs)?;
        let truth = RobotTruth {
            robot: run.index,
            alpha: run.alpha,
            beta: run.beta,
            failure_time: run.failure_time,
            tasks_completed: run.tasks_completed,
            true_accuracy: run.true_accuracy.clone(),
        };
        write_json(&dir.join("truth.json"), &truth)?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Fleet {
    pub profile: FleetProfile,
    pub model: TaskSeverityModel,
    pub robots: Vec<RobotRecord>,
}

pub fn read_fleet(root: &Path) -> Result<Fleet> {
    let profile: FleetProfile = read_json(&root.join(FLEET_PROFILE_FILE))?;
    let model = read_model(&root.join(FLEET_MODEL_FILE))?;
    let mut dirs: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| io_error(root, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.file_name().is_some_and(|n| n.to_string_lossy().starts_with("robot_")))
        .collect();
    dirs.sort();
    let robots = dirs
        .iter()
        .map(|dir| read_robot(dir, &model, profile.cycles_per_epoch))
        .collect::<Result<Vec<_>>>()?;
    Ok(Fleet { profile, model, robots })
}

fn read_robot(dir: &Path, model: &TaskSeverityModel, cycles_per_epoch: u64) -> Result<RobotRecord> {
    let tasks = dir.join("tasks.csv");
    let insp = dir.join("inspections.csv");
    let history = read_path_csv(
        fs::File::open(&tasks).map_err(|e| io_error(&tasks, e))?,
        model,
        &tasks.display().to_string(),
    )?;
    let epochs =
        read_inspections_csv(fs::File::open(&insp).map_err(|e| io_error(&insp, e))?, &insp.display().to_string())?;
    let truth: RobotTruth = read_json(&dir.join("truth.json"))?;
    let log = InspectionLog::new(epochs, history, cycles_per_epoch)?;
    Ok(RobotRecord { truth, log })
}
