//! Index-ordered batch evaluation.
//!
//! Every batch is a pure map over `0..len`; results are always returned in
//! index order so output never depends on scheduling. With the `parallel`
//! feature the map runs on the rayon pool, otherwise sequentially.

/// How a batch is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..len).map(f)` collected in index order.
pub fn map_indexed<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return (0..len).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Sum of `f(i)` over `0..len`, accumulated in fixed-size chunks whose partial
/// sums are added in index order, so the result is bit-identical for both
/// execution modes.
pub fn sum_chunked<F>(exec: Execution, len: usize, chunk: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = len.div_ceil(chunk);
    map_indexed(exec, chunks, |c| {
        let end = ((c + 1) * chunk).min(len);
        (c * chunk..end).map(&f).sum::<f64>()
    })
    .into_iter()
    .sum()
}

/// Like [`sum_chunked`] for vector-valued integrands of fixed width.
pub fn sum_chunked_vec<F>(exec: Execution, len: usize, chunk: usize, width: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = len.div_ceil(chunk);
    let partials = map_indexed(exec, chunks, |c| {
        let mut acc = vec![0.0; width];
        let end = ((c + 1) * chunk).min(len);
        for i in c * chunk..end {
            f(i, &mut acc);
        }
        acc
    });
    let mut total = vec![0.0; width];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}
