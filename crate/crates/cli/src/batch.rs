//! Manifest runs.
//!
//! A manifest is a JSON array of jobs, or `{"jobs": [...]}`. Each job is the
//! argument list of one command, e.g. `["norm", "--space", "lp:2", "--vec", "3,4"]`.
//! Jobs run in parallel (at most `SYMSEQ_THREADS` at a time); the summary keeps
//! manifest order.

use std::path::Path;

use clap::Parser;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{render, write_atomic};
use crate::run::{execute, Record, EXIT_INPUT, SCHEMA};

#[derive(Deserialize)]
#[serde(untagged)]
enum Manifest {
    Jobs { jobs: Vec<Vec<String>> },
    List(Vec<Vec<String>>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub schema: u32,
    pub exit: u8,
    pub entries: Vec<BatchEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub index: usize,
    pub args: Vec<String>,
    pub exit: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record: Option<Record>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn read_manifest(path: &Path) -> Result<Vec<Vec<String>>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| CliError::Input {
        path: path.to_path_buf(),
        msg: format!("manifest must be a list of argument lists: {e}"),
    })?;
    Ok(match m {
        Manifest::Jobs { jobs } => jobs,
        Manifest::List(jobs) => jobs,
    })
}

/// Parallelism cap from `SYMSEQ_THREADS`; unset or invalid means rayon's default.
pub fn thread_cap() -> Option<usize> {
    std::env::var("SYMSEQ_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
}

pub fn run_batch(jobs: &[Vec<String>]) -> BatchSummary {
    let run_all = || -> Vec<BatchEntry> {
        jobs.par_iter()
            .enumerate()
            .map(|(index, args)| run_entry(index, args))
            .collect()
    };
    let entries = match thread_cap().map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build())
    {
        Some(Ok(pool)) => pool.install(run_all),
        _ => run_all(),
    };
    BatchSummary {
        schema: SCHEMA,
        exit: entries.iter().map(|e| e.exit).max().unwrap_or(0),
        entries,
    }
}

fn run_entry(index: usize, args: &[String]) -> BatchEntry {
    let fail = |msg: String| BatchEntry {
        index,
        args: args.to_vec(),
        exit: EXIT_INPUT,
        record: None,
        error: Some(msg),
    };
    let cfg = match RunConfig::try_parse_from(
        std::iter::once("symseq").chain(args.iter().map(String::as_str)),
    ) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string().trim_end().to_string()),
    };
    let record = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    if let Some(path) = &cfg.out {
        let format = cfg
            .format
            .unwrap_or_else(|| crate::default_format(&cfg.command));
        if let Err(e) = render(&record, format).and_then(|s| write_atomic(path, &s)) {
            return fail(e.to_string());
        }
    }
    BatchEntry {
        index,
        args: args.to_vec(),
        exit: record.exit,
        record: Some(record),
        error: None,
    }
}

/// Batch summaries are JSON only.
pub fn check_format(format: Option<Format>) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage(
            "batch summaries are written as JSON".into(),
        )),
        _ => Ok(()),
    }
}
