//! Data-parallel helpers. With the `parallel` feature (on by default) these
//! fan out over rayon's pool; without it they run sequentially.

use std::cell::Cell;

/// How batch work such as randomized identity suites is scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    #[default]
    Parallel,
}

impl Mode {
    /// Whether `Parallel` actually runs in parallel in this build.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

thread_local! {
    static FORCED_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

/// Runs `f` with every nested [`map`] on this thread forced sequential.
pub fn sequential<R>(f: impl FnOnce() -> R) -> R {
    let prev = FORCED_SEQUENTIAL.with(|c| c.replace(true));
    let out = f();
    FORCED_SEQUENTIAL.with(|c| c.set(prev));
    out
}

/// Order-preserving map. Parallel when the feature is enabled, unless called
/// under [`sequential`] or from inside a sequential [`map_with`].
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if FORCED_SEQUENTIAL.with(Cell::get) {
        items.iter().map(f).collect()
    } else {
        map_with(Mode::Parallel, items, f)
    }
}

#[cfg(feature = "parallel")]
pub fn map_with<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        Mode::Parallel => items.par_iter().map(f).collect(),
        Mode::Sequential => sequential(|| items.iter().map(f).collect()),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_with<T, R, F>(_mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Like [`map`], short-circuiting on the first error in input order.
pub fn try_map<T, R, E, F>(items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..100).collect();
        let a = map_with(Mode::Sequential, &xs, |x| x * x);
        let b = map_with(Mode::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let r: Result<Vec<u64>, u64> = try_map(&xs, |&x| if x == 7 { Err(x) } else { Ok(x) });
        assert_eq!(r, Err(7));
    }

    #[test]
    fn sequential_scope_is_restored() {
        let outer = std::thread::current().id();
        let ids = sequential(|| map(&[1, 2, 3], |_| std::thread::current().id()));
        assert!(ids.iter().all(|id| *id == outer));
        assert!(!FORCED_SEQUENTIAL.with(Cell::get));
    }
}
