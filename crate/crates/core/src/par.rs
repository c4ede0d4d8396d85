//! Feature-gated data-parallel helpers.
//!
//! Every helper has a `_seq` twin and both produce output in input order,
//! so a parallel run and a sequential run of the same computation are
//! byte-for-byte identical. The `parallel` feature only changes how many
//! cores do the work.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(&f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(&f).collect()
    }
}

/// Sequential twin of [`map_collect`], available under every feature set.
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(&f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let items: Vec<u64> = (0..500).collect();
        let f = |x: &u64| x.wrapping_mul(6364136223846793005).rotate_left(17);
        assert_eq!(map_collect(&items, f), map_collect_seq(&items, f));
    }
}
