//! In-memory robot table backed by append-only JSON-lines event logs.
//!
//! Each robot has its own `<id>.jsonl`; on startup every file is replayed
//! and the posterior recomputed from the stored inspections.

use crate::error::ApiError;
use crate::robot::{Event, Robot};
use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use tokio::sync::RwLock;

pub type RobotSlot = Arc<RwLock<Robot>>;

#[derive(Debug, Default)]
pub struct Store {
    robots: std::sync::RwLock<BTreeMap<String, RobotSlot>>,
    dir: Option<PathBuf>,
    next_id: AtomicU64,
}

impl Store {
    /// A store that keeps nothing on disk.
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens (creating if needed) `dir` and replays every event log in it.
    pub fn open(dir: &Path) -> Result<Self, ApiError> {
        fs::create_dir_all(dir)?;
        let mut files: Vec<PathBuf> = fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "jsonl"))
            .collect();
        files.sort();
        let mut robots = BTreeMap::new();
        for file in files {
            let robot = replay(&file)?;
            robots.insert(robot.id.clone(), Arc::new(RwLock::new(robot)));
        }
        Ok(Self {
            next_id: AtomicU64::new(robots.len() as u64 + 1),
            robots: std::sync::RwLock::new(robots),
            dir: Some(dir.to_path_buf()),
        })
    }

    pub fn ids(&self) -> Vec<String> {
        self.robots.read().expect("robot table lock").keys().cloned().collect()
    }

    pub fn get(&self, id: &str) -> Result<RobotSlot, ApiError> {
        self.robots
            .read()
            .expect("robot table lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(format!("no robot `{id}`")))
    }

    /// A fresh `robot-NNNN` id.
    pub fn generate_id(&self) -> String {
        let table = self.robots.read().expect("robot table lock");
        loop {
            let n = self.next_id.fetch_add(1, Ordering::Relaxed);
            let id = format!("robot-{n:04}");
            if !table.contains_key(&id) {
                return id;
            }
        }
    }

    pub fn insert(&self, robot: Robot, event: &Event) -> Result<(), ApiError> {
        let mut table = self.robots.write().expect("robot table lock");
        if table.contains_key(&robot.id) {
            return Err(ApiError::Conflict(format!("robot `{}` already exists", robot.id)));
        }
        self.persist(&robot.id, event)?;
        table.insert(robot.id.clone(), Arc::new(RwLock::new(robot)));
        Ok(())
    }

    /// Appends `event` to the robot's log file, if the store is on disk.
    pub fn persist(&self, id: &str, event: &Event) -> Result<(), ApiError> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let mut line = serde_json::to_string(event).map_err(|e| ApiError::Internal(e.to_string()))?;
        line.push('\n');
        let path = dir.join(format!("{id}.jsonl"));
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        f.write_all(line.as_bytes())?;
        f.sync_data()?;
        Ok(())
    }
}

fn replay(path: &Path) -> Result<Robot, ApiError> {
    let text = fs::read_to_string(path)?;
    let mut robot: Option<Robot> = None;
    for (n, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let at = |msg: String| ApiError::Internal(format!("{}: line {}: {msg}", path.display(), n + 1));
        let event: Event = serde_json::from_str(line).map_err(|e| at(e.to_string()))?;
        robot = Some(match (robot, event) {
            (None, Event::Registered(reg)) => {
                let id = reg.id.clone().ok_or_else(|| at("registration without an id".into()))?;
                Robot::register(id, &reg).map_err(|e| at(e.to_string()))?
            }
            (Some(r), Event::Inspections(batch)) => r.appended(&batch).map_err(|e| at(e.to_string()))?,
            (None, _) => return Err(at("log does not start with a registration".into())),
            (Some(_), Event::Registered(_)) => return Err(at("duplicate registration".into())),
        });
    }
    robot.ok_or_else(|| ApiError::Internal(format!("{}: empty event log", path.display())))
}
