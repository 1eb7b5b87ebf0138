//! Census worker pool: units are claimed from a shared counter and results are
//! put back in unit order, so the merge never depends on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use matspace_core::census::{CensusEngine, Runner, Serial, Tally, Unit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Parallel {
    pub workers: usize,
}

impl Parallel {
    pub fn new(workers: usize) -> Parallel {
        Parallel { workers: workers.max(1) }
    }

    /// One worker per available core.
    pub fn available() -> Parallel {
        Parallel::new(thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

impl Runner for Parallel {
    fn run(&self, engine: &CensusEngine, units: &[Unit]) -> Vec<Tally> {
        let workers = self.workers.min(units.len());
        if workers <= 1 {
            return Serial.run(engine, units);
        }
        let next = AtomicUsize::new(0);
        let mut indexed: Vec<(usize, Tally)> = thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|_| {
                    s.spawn(|| {
                        let mut done = Vec::new();
                        loop {
                            let i = next.fetch_add(1, Ordering::Relaxed);
                            let Some(unit) = units.get(i) else { break };
                            done.push((i, engine.run(unit)));
                        }
                        done
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("census worker panicked")).collect()
        });
        indexed.sort_by_key(|(i, _)| *i);
        indexed.into_iter().map(|(_, t)| t).collect()
    }
}
