//! Stride-sharded parallel folds over an index space.
//!
//! Worker `w` of `W` handles indices `w, w + W, w + 2W, ...` with a private
//! accumulator; accumulators are merged in worker order once all finish.
//! Callers derive per-index randomness from the index itself, so the merged
//! result does not depend on `W`.

use std::thread;

pub fn sharded_fold<A, F, M>(jobs: u64, workers: usize, init: impl Fn() -> A + Sync, work: F, merge: M) -> A
where
    A: Send,
    F: Fn(&mut A, u64) + Sync,
    M: Fn(&mut A, A),
{
    let workers = crate::rng::effective_workers(workers, jobs);
    if workers == 1 {
        let mut acc = init();
        for i in 0..jobs {
            work(&mut acc, i);
        }
        return acc;
    }
    let parts: Vec<A> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let init = &init;
                let work = &work;
                scope.spawn(move || {
                    let mut acc = init();
                    let mut i = w as u64;
                    while i < jobs {
                        work(&mut acc, i);
                        i += workers as u64;
                    }
                    acc
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut parts = parts.into_iter();
    let mut total = parts.next().expect("at least one worker");
    for p in parts {
        merge(&mut total, p);
    }
    total
}
