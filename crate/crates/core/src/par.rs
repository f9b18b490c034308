//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) and [`ExecMode::Parallel`], work is
//! spread over the current rayon pool. Output order always follows input
//! order, so results are deterministic regardless of scheduling.

#[cfg(feature = "parallel")]
use crate::deadline;

/// How independent per-item work is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

/// Order-preserving map. The caller's deadline is re-installed on workers.
pub fn map<T, R, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel if items.len() > 1 => {
            use rayon::prelude::*;
            let dl = deadline::current();
            items
                .into_par_iter()
                .map(|t| deadline::scope(dl, || f(t)))
                .collect()
        }
        _ => items.into_iter().map(f).collect(),
    }
}

/// Number of worker threads a parallel map would use.
pub fn width(mode: ExecMode) -> usize {
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => rayon::current_num_threads(),
        _ => 1,
    }
}

/// Runs `f` with parallel maps capped at `jobs` threads. Without the
/// `parallel` feature, or with `None`, `f` runs as is. Deadlines are
/// thread-local: install them inside `f`.
pub fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match jobs {
        #[cfg(feature = "parallel")]
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        },
        _ => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_in_both_modes() {
        let xs: Vec<u64> = (0..100).collect();
        let a = map(ExecMode::Parallel, xs.clone(), |x| x * x);
        let b = map(ExecMode::Sequential, xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[7], 49);
    }

    #[test]
    fn job_cap_limits_width() {
        let w = with_jobs(Some(1), || width(ExecMode::Parallel));
        assert_eq!(w, 1);
        assert_eq!(with_jobs(None, || 5), 5);
    }
}
