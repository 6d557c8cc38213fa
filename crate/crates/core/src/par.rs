//! Ordered fan-out over independent tasks: a rayon work-stealing pool when the
//! `parallel` feature is on, a plain loop otherwise.

#[cfg(feature = "parallel")]
use std::collections::BTreeMap;
#[cfg(feature = "parallel")]
use std::sync::atomic::{AtomicBool, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// `None` uses rayon's default width.
    #[cfg(feature = "parallel")]
    Rayon(Option<usize>),
}

impl Default for Parallelism {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Parallelism::Rayon(None);
        #[cfg(not(feature = "parallel"))]
        Parallelism::Sequential
    }
}

impl Parallelism {
    /// `Some(1)` and builds without the `parallel` feature run sequentially.
    pub fn with_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Parallelism::Sequential,
            #[cfg(feature = "parallel")]
            t => Parallelism::Rayon(t),
            #[cfg(not(feature = "parallel"))]
            _ => Parallelism::Sequential,
        }
    }
}

/// Runs `f` on every item and hands the results to `sink` in item order.
///
/// Stops scheduling new items after `sink` returns an error, which is returned.
pub fn for_each_ordered<T, R, E, F, S>(items: &[T], mode: Parallelism, f: F, mut sink: S) -> Result<(), E>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
    S: FnMut(usize, R) -> Result<(), E>,
{
    match mode {
        Parallelism::Sequential => {
            for (i, x) in items.iter().enumerate() {
                sink(i, f(x))?;
            }
            Ok(())
        }
        #[cfg(feature = "parallel")]
        Parallelism::Rayon(threads) => rayon_ordered(items, threads, f, sink),
    }
}

#[cfg(feature = "parallel")]
fn rayon_ordered<T, R, E, F, S>(items: &[T], threads: Option<usize>, f: F, mut sink: S) -> Result<(), E>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
    S: FnMut(usize, R) -> Result<(), E>,
{
    use rayon::prelude::*;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().expect("thread pool");
    let cancelled = AtomicBool::new(false);
    let (tx, rx) = std::sync::mpsc::channel::<(usize, R)>();
    std::thread::scope(|scope| {
        let (f, cancelled) = (&f, &cancelled);
        scope.spawn(move || {
            pool.install(|| {
                items.par_iter().enumerate().for_each_with(tx, |tx, (i, x)| {
                    if !cancelled.load(Ordering::Relaxed) {
                        let _ = tx.send((i, f(x)));
                    }
                })
            })
        });
        let mut pending = BTreeMap::new();
        let mut next = 0;
        for (i, r) in rx {
            pending.insert(i, r);
            while let Some(r) = pending.remove(&next) {
                if let Err(e) = sink(next, r) {
                    cancelled.store(true, Ordering::Relaxed);
                    return Err(e);
                }
                next += 1;
            }
        }
        Ok(())
    })
}

/// `items.map(f)` in item order.
pub fn map_ordered<T, R, F>(items: &[T], mode: Parallelism, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let mut out = Vec::with_capacity(items.len());
    let _ = for_each_ordered::<_, _, (), _, _>(items, mode, f, |_, r| {
        out.push(r);
        Ok(())
    });
    out
}
