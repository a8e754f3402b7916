//! Data-parallel helpers.
//!
//! All hot loops in this crate are maps over independent items (period
//! integrals, cycles, parameter sweeps). They go through these helpers so
//! that a single runtime switch selects rayon or a plain sequential loop,
//! and so that building without the `parallel` feature still works.
//!
//! Results are collected in input order in both modes, so reductions built
//! on top (determinants, reports) are bit-for-bit reproducible regardless
//! of thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over `0..len`, collecting results in index order.
pub fn map_indexed<U, F>(parallel: bool, len: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    (0..len).map(f).collect()
}

/// Map `f` over a slice, collecting results in input order.
pub fn map_slice<T, U, F>(parallel: bool, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return items.par_iter().map(f).collect();
        }
    }
    let _ = parallel;
    items.iter().map(f).collect()
}

/// True when the crate was built with rayon support.
pub fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let seq = map_indexed(false, 64, |i| i * i);
        let par = map_indexed(true, 64, |i| i * i);
        assert_eq!(seq, par);
    }
}
