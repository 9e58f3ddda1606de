//! Execution strategy for the data-parallel sweeps.
//!
//! Every parallel site in the crate is an order-preserving map over an indexed
//! slice followed by a sequential merge, so `Seq` and `Par` produce identical
//! results; `Par` only changes wall-clock time. With the `parallel` feature
//! disabled, `Par` silently degrades to the sequential path.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    /// Single-threaded.
    Seq,
    /// Rayon work-stealing pool (or sequential when the feature is off).
    Par,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Par
        } else {
            Exec::Seq
        }
    }
}

impl Exec {
    /// Order-preserving map: output slot `i` is `f(&items[i])`.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Send + Sync,
    {
        match self {
            Exec::Seq => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Par => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            Exec::Par => items.iter().map(f).collect(),
        }
    }

    /// Fold of `map` results with a sequential, order-respecting reducer.
    pub fn map_reduce<T, U, A, F, R>(self, items: &[T], f: F, init: A, mut reduce: R) -> A
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Send + Sync,
        R: FnMut(A, U) -> A,
    {
        self.map(items, f).into_iter().fold(init, &mut reduce)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_and_seq_agree_and_preserve_order() {
        let items: Vec<u64> = (0..1000).collect();
        let f = |x: &u64| x * x + 1;
        assert_eq!(Exec::Seq.map(&items, f), Exec::Par.map(&items, f));
        let mapped = Exec::Par.map(&items, f);
        assert_eq!(mapped[17], 17 * 17 + 1);
    }
}
