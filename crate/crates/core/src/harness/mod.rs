//! Batch execution of scan tasks with resumable checkpoints.

mod checkpoint;
mod taskfile;

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::kernel::{Kernel, PrecisionPolicy};
use crate::sequences::{GeneratorState, StateReader, StateWriter};
use crate::verify::{ResultRecord, ScanSpec, Scanner};

pub use checkpoint::CheckpointFile;
pub use taskfile::{parse_tasks, parse_tasks_str, DEFAULT_CHECKPOINT_INTERVAL};

/// Environment variable naming the default checkpoint directory.
pub const CHECKPOINT_DIR_ENV: &str = "ARITHSEQ_CHECKPOINT_DIR";

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("task '{task}': {reason}")]
    Validation { task: String, reason: String },
    #[error("i/o: {0}")]
    Io(String),
    #[error("status of task {task} cannot go from {from:?} to {to:?}")]
    Status { task: usize, from: TaskStatus, to: TaskStatus },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskSpec {
    pub id: String,
    pub spec: ScanSpec,
    pub policy: PrecisionPolicy,
    /// Steps between checkpoints.
    pub checkpoint_interval: u64,
    pub expected_exceptions: Option<Vec<u64>>,
    pub expected_threshold: Option<u64>,
}

impl TaskSpec {
    fn fingerprint(&self, policy: &PrecisionPolicy) -> String {
        format!(
            "{}|{}|{}|{}|{}|{}/{}/{}|{}",
            self.id,
            self.spec.sequence,
            self.spec.property,
            self.spec.range.0,
            self.spec.range.1,
            policy.initial_bits,
            policy.max_bits,
            policy.escalation_factor,
            self.checkpoint_interval
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TaskStatus {
    Pending,
    Running,
    Done,
    IndeterminateFound,
    Failed,
    Interrupted,
}

impl TaskStatus {
    fn rank(self) -> u8 {
        match self {
            TaskStatus::Pending => 0,
            TaskStatus::Running => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub engine_version: String,
    pub created_unix_ms: u64,
    pub tasks: Vec<String>,
    pub statuses: Vec<TaskStatus>,
}

impl RunManifest {
    pub fn new(tasks: &[TaskSpec]) -> Self {
        let created_unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_millis() as u64);
        RunManifest {
            engine_version: ENGINE_VERSION.to_string(),
            created_unix_ms,
            tasks: tasks.iter().map(|t| t.id.clone()).collect(),
            statuses: vec![TaskStatus::Pending; tasks.len()],
        }
    }

    /// Moves task `i` forward; Pending, Running and the terminal states may
    /// only be entered in that order.
    pub fn set_status(&mut self, i: usize, to: TaskStatus) -> Result<(), HarnessError> {
        let from = self.statuses[i];
        if to.rank() != from.rank() + 1 {
            return Err(HarnessError::Status { task: i, from, to });
        }
        self.statuses[i] = to;
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub workers: usize,
    pub checkpoint_dir: Option<PathBuf>,
    /// Overrides every task's maximum ball precision.
    pub max_bits: Option<u32>,
    /// Stop each task after writing this many checkpoints, leaving it
    /// resumable. Used to exercise resumption.
    pub interrupt_after: Option<u64>,
}

impl RunOptions {
    pub fn new(workers: usize) -> Self {
        RunOptions {
            workers,
            checkpoint_dir: default_checkpoint_dir(),
            ..RunOptions::default()
        }
    }
}

pub fn default_checkpoint_dir() -> Option<PathBuf> {
    std::env::var_os(CHECKPOINT_DIR_ENV).map(PathBuf::from)
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    /// Results of finished tasks, in task-file order.
    pub records: Vec<ResultRecord>,
    pub failures: Vec<(String, String)>,
}

impl RunOutcome {
    /// 0: expectations met, 1: unexpected exceptions, 2: indeterminates,
    /// 3: configuration or task error.
    pub fn exit_code(&self) -> i32 {
        if !self.failures.is_empty() {
            3
        } else if self.records.iter().any(|r| !r.indeterminates.is_empty()) {
            2
        } else if self.records.iter().any(|r| r.matches_expected == Some(false)) {
            1
        } else {
            0
        }
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<(), HarnessError> {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.to_json_line());
            out.push('\n');
        }
        std::fs::write(path, out).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
    }
}

enum TaskEnd {
    Finished(ResultRecord),
    Interrupted,
}

fn encode_checkpoint(fingerprint: &str, scanner: &Scanner) -> Vec<u8> {
    let mut w = StateWriter::new();
    w.str(fingerprint).bytes(&scanner.checkpoint());
    w.finish().0
}

fn resume_from(payload: Vec<u8>, fingerprint: &str, task: &TaskSpec, kernel: Kernel) -> Option<Scanner> {
    let state = GeneratorState(payload);
    let mut r = StateReader::new(&state).ok()?;
    if r.str().ok()? != fingerprint {
        return None;
    }
    let bytes = r.bytes().ok()?;
    r.finish().ok()?;
    Scanner::resume(task.spec.clone(), kernel, bytes).ok()
}

fn run_task(task: &TaskSpec, opts: &RunOptions) -> Result<TaskEnd, String> {
    let start = Instant::now();
    let mut policy = task.policy;
    if let Some(b) = opts.max_bits {
        policy = PrecisionPolicy::new(policy.initial_bits.min(b), b, policy.escalation_factor).map_err(|e| e.to_string())?;
    }
    let kernel = Kernel::new(policy);
    let fingerprint = task.fingerprint(&policy);
    let file = opts.checkpoint_dir.as_ref().map(|d| CheckpointFile::new(d, &task.id));

    let resumed = file
        .as_ref()
        .and_then(|f| f.candidates().into_iter().find_map(|p| resume_from(p, &fingerprint, task, kernel)));
    let mut scanner = match resumed {
        Some(s) => s,
        None => Scanner::new(task.spec.clone(), kernel).map_err(|e| e.to_string())?,
    };

    let mut written = 0;
    loop {
        scanner.advance(task.checkpoint_interval).map_err(|e| e.to_string())?;
        if scanner.is_done() {
            break;
        }
        if let Some(f) = &file {
            f.write(&encode_checkpoint(&fingerprint, &scanner)).map_err(|e| e.to_string())?;
            written += 1;
            if opts.interrupt_after.is_some_and(|k| written >= k) {
                return Ok(TaskEnd::Interrupted);
            }
        }
    }
    if let Some(f) = &file {
        f.remove();
    }
    let ms = start.elapsed().as_millis() as u64;
    let record = ResultRecord::new(&task.id, &scanner.result(), ms)
        .expect(task.expected_exceptions.clone(), task.expected_threshold);
    Ok(TaskEnd::Finished(record))
}

/// Runs `tasks` on up to `opts.workers` threads. A failing task does not
/// stop the others.
pub fn run(tasks: &[TaskSpec], opts: &RunOptions) -> Result<RunOutcome, HarnessError> {
    if let Some(d) = &opts.checkpoint_dir {
        std::fs::create_dir_all(d).map_err(|e| HarnessError::Io(format!("{}: {e}", d.display())))?;
    }
    let manifest = Mutex::new(RunManifest::new(tasks));
    let slots: Vec<Mutex<Option<Result<TaskEnd, String>>>> = tasks.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = opts.workers.clamp(1, tasks.len().max(1));
    let status_error = Mutex::new(None);

    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= tasks.len() {
                    break;
                }
                let set = |st| {
                    if let Err(e) = manifest.lock().unwrap().set_status(i, st) {
                        *status_error.lock().unwrap() = Some(e);
                    }
                };
                set(TaskStatus::Running);
                let end = run_task(&tasks[i], opts);
                set(match &end {
                    Ok(TaskEnd::Finished(r)) if !r.indeterminates.is_empty() => TaskStatus::IndeterminateFound,
                    Ok(TaskEnd::Finished(_)) => TaskStatus::Done,
                    Ok(TaskEnd::Interrupted) => TaskStatus::Interrupted,
                    Err(_) => TaskStatus::Failed,
                });
                *slots[i].lock().unwrap() = Some(end);
            });
        }
    });
    if let Some(e) = status_error.into_inner().unwrap() {
        return Err(e);
    }

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (task, slot) in tasks.iter().zip(slots) {
        match slot.into_inner().unwrap().expect("every task ran") {
            Ok(TaskEnd::Finished(r)) => records.push(r),
            Ok(TaskEnd::Interrupted) => failures.push((task.id.clone(), "interrupted".to_string())),
            Err(e) => failures.push((task.id.clone(), e)),
        }
    }
    Ok(RunOutcome {
        manifest: manifest.into_inner().unwrap(),
        records,
        failures,
    })
}
