use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use arithseq::harness::{self, RunOptions};
use arithseq::kernel::{Kernel, PrecisionPolicy};
use arithseq::sequences::{self, SequenceId};
use arithseq::verify::{self, Property, ResultRecord, ScanSpec, Scanner};

#[derive(Parser)]
#[command(name = "arithseq", version, about = "Generate arithmetical sequences and verify root monotonicity laws")]
struct Cli {
    /// Tasks run in parallel.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Directory for resumable checkpoints (default: $ARITHSEQ_CHECKPOINT_DIR).
    #[arg(long, global = true)]
    checkpoint_dir: Option<PathBuf>,
    /// Maximum ball precision in bits.
    #[arg(long, global = true)]
    max_bits: Option<u32>,
    /// Write result records to this file as JSON lines.
    #[arg(long, global = true)]
    jsonl: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task in a task file.
    Run { taskfile: PathBuf },
    /// Print the first terms of a sequence.
    Seq {
        sequence: SequenceId,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Scan one property over an index range.
    Check {
        property: Property,
        #[arg(long)]
        sequence: SequenceId,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Check the CLF-Euler congruences modulo p^3.
    Congruence {
        #[arg(long)]
        prime: u64,
    },
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(3)
}

fn emit(records: &[ResultRecord], jsonl: &Option<PathBuf>) -> Result<(), String> {
    match jsonl {
        Some(path) => {
            let text: String = records.iter().map(|r| r.to_json_line() + "\n").collect();
            std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
        }
        None => {
            for r in records {
                println!("{}", r.to_json_line());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match cli.command {
        Command::Run { taskfile } => {
            let tasks = match harness::parse_tasks(&taskfile) {
                Ok(t) => t,
                Err(e) => return fail(e),
            };
            let opts = RunOptions {
                workers: cli.workers,
                checkpoint_dir: cli.checkpoint_dir.or_else(harness::default_checkpoint_dir),
                max_bits: cli.max_bits,
                interrupt_after: None,
            };
            let out = match harness::run(&tasks, &opts) {
                Ok(o) => o,
                Err(e) => return fail(e),
            };
            for (id, e) in &out.failures {
                eprintln!("task {id} failed: {e}");
            }
            for r in &out.records {
                let verdict = match r.matches_expected {
                    Some(true) => "ok",
                    Some(false) => "MISMATCH",
                    None => "-",
                };
                eprintln!(
                    "{:<28} {:>4} exceptions, stable from {:?} [{}]",
                    r.task_id,
                    r.exceptions.len(),
                    r.threshold.minimal_stable_start,
                    verdict
                );
            }
            if let Err(e) = emit(&out.records, &cli.jsonl) {
                return fail(e);
            }
            ExitCode::from(out.exit_code() as u8)
        }
        Command::Seq { sequence, count } => {
            let mut stream = match sequences::open(&sequence) {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            for _ in 0..count {
                match stream.next_term() {
                    Ok(t) => println!("{} {}", t.index, t.value),
                    Err(e) => return fail(e),
                }
            }
            ExitCode::SUCCESS
        }
        Command::Check {
            property,
            sequence,
            from,
            to,
        } => {
            let mut policy = PrecisionPolicy::default();
            if let Some(b) = cli.max_bits {
                policy = match PrecisionPolicy::new(policy.initial_bits.min(b), b, policy.escalation_factor) {
                    Ok(p) => p,
                    Err(e) => return fail(e),
                };
            }
            let start = Instant::now();
            let set = match ScanSpec::new(sequence, property, (from, to))
                .and_then(|s| Scanner::new(s, Kernel::new(policy)))
                .and_then(|s| s.run_to_end())
            {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let record = ResultRecord::new("check", &set, start.elapsed().as_millis() as u64);
            if let Err(e) = emit(std::slice::from_ref(&record), &cli.jsonl) {
                return fail(e);
            }
            ExitCode::from(if set.indeterminates.is_empty() { 0 } else { 2 })
        }
        Command::Congruence { prime } => match verify::clf_euler_congruence(prime) {
            Ok(reports) => {
                for r in &reports {
                    println!("{}", serde_json::to_string(r).expect("report serializes"));
                }
                ExitCode::from(if reports.iter().all(|r| r.verdict) { 0 } else { 1 })
            }
            Err(e) => fail(e),
        },
    }
}
