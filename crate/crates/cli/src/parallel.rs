//! Thread-parallel oracle driver.
//!
//! The enumeration forest is partitioned by root vertex: worker `w` of `W`
//! takes the roots congruent to `w` mod `W`, searches them independently,
//! and the parts are merged by the total order on candidates. Value and
//! witness are therefore identical for every worker count; only effort
//! counters depend on the partition.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use starkit_core::oracle::{
    default_roots, exact_roots, finish, merge_parts, ExactResult, OracleOptions, SearchPart,
};
use starkit_core::{Error, Graph, Measure};

use crate::{CliError, CliResult};

/// Worker count: `STARKIT_THREADS` when set, otherwise all available.
pub fn worker_count() -> CliResult<usize> {
    match std::env::var("STARKIT_THREADS") {
        Ok(raw) => {
            let n: usize = raw
                .parse()
                .map_err(|_| CliError::domain(format!("bad STARKIT_THREADS value {raw:?}")))?;
            if n == 0 {
                return Err(CliError::domain("STARKIT_THREADS must be at least 1"));
            }
            Ok(n)
        }
        Err(_) => Ok(std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)),
    }
}

/// Outcome of a driven oracle run.
pub enum Driven {
    Done(ExactResult, Duration),
    TimedOut(Duration),
}

/// Run one oracle invocation across `workers` threads with an optional
/// wall-clock timeout.
pub fn run_exact(
    g: &Graph,
    measure: Measure,
    h: u32,
    opts: &OracleOptions,
    workers: usize,
    timeout: Option<Duration>,
) -> CliResult<Driven> {
    let start = Instant::now();
    let roots = default_roots(g, opts);
    let workers = workers.max(1).min(roots.len().max(1));
    let chunks: Vec<Vec<u32>> = (0..workers)
        .map(|w| {
            roots
                .iter()
                .copied()
                .skip(w)
                .step_by(workers)
                .collect::<Vec<u32>>()
        })
        .collect();

    let cancel = AtomicBool::new(false);
    let done = AtomicBool::new(false);
    let merged: Result<SearchPart, Error> = std::thread::scope(|scope| {
        if let Some(limit) = timeout {
            let (done, cancel) = (&done, &cancel);
            scope.spawn(move || {
                while !done.load(Ordering::Relaxed) {
                    if start.elapsed() >= limit {
                        cancel.store(true, Ordering::Relaxed);
                        break;
                    }
                    std::thread::sleep(Duration::from_millis(10));
                }
            });
        }
        let handles: Vec<_> = chunks
            .iter()
            .map(|chunk| scope.spawn(|| exact_roots(g, measure, h, opts, chunk, Some(&cancel))))
            .collect();
        let mut parts: Vec<SearchPart> = Vec::with_capacity(handles.len());
        let mut first_err: Option<Error> = None;
        for handle in handles {
            match handle.join().expect("worker panicked") {
                Ok(part) => parts.push(part),
                Err(e) => first_err = first_err.or(Some(e)),
            }
        }
        done.store(true, Ordering::Relaxed);
        match first_err {
            Some(e) => Err(e),
            None => Ok(parts.into_iter().fold(SearchPart::empty(), merge_parts)),
        }
    });

    let merged = merged.map_err(CliError::Core)?;
    if !merged.complete {
        return Ok(Driven::TimedOut(start.elapsed()));
    }
    let result = finish(g, measure, h, opts, merged).map_err(CliError::Core)?;
    Ok(Driven::Done(result, start.elapsed()))
}
