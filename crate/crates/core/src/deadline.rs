//! Cooperative deadlines.
//!
//! Long loops (Buchberger pair loop, saturation, the modular round loop) call
//! [`check`]. The deadline is thread-local; [`crate::par`] re-installs it on
//! worker threads so parallel per-prime work honours the same budget.

use std::cell::Cell;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

thread_local! {
    static DEADLINE: Cell<Option<Instant>> = const { Cell::new(None) };
}

/// The deadline installed on this thread, if any.
pub fn current() -> Option<Instant> {
    DEADLINE.with(|d| d.get())
}

/// Runs `f` with `deadline` installed, restoring the previous one afterwards.
/// A nested scope can only tighten the deadline.
pub fn scope<R>(deadline: Option<Instant>, f: impl FnOnce() -> R) -> R {
    let prev = current();
    let effective = match (prev, deadline) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    DEADLINE.with(|d| d.set(effective));
    struct Restore(Option<Instant>);
    impl Drop for Restore {
        fn drop(&mut self) {
            DEADLINE.with(|d| d.set(self.0));
        }
    }
    let _restore = Restore(prev);
    f()
}

/// Runs `f` with a deadline `timeout` from now.
pub fn with_timeout<R>(timeout: Option<Duration>, f: impl FnOnce() -> R) -> R {
    scope(timeout.map(|t| Instant::now() + t), f)
}

/// Returns `Err(Timeout)` once the installed deadline has passed.
#[inline]
pub fn check() -> Result<()> {
    match current() {
        Some(d) if Instant::now() >= d => Err(Error::Timeout),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expired_deadline_trips() {
        let r = scope(Some(Instant::now()), check);
        assert_eq!(r, Err(Error::Timeout));
        assert!(check().is_ok());
    }

    #[test]
    fn nested_scope_keeps_tighter() {
        let soon = Instant::now() + Duration::from_secs(1);
        let later = soon + Duration::from_secs(100);
        scope(Some(soon), || {
            scope(Some(later), || assert_eq!(current(), Some(soon)));
            assert_eq!(current(), Some(soon));
        });
        assert_eq!(current(), None);
    }
}
