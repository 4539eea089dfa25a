//! Row-parallel execution over grid arrays.
//!
//! With the `parallel` feature disabled, [`Parallelism::Parallel`] silently runs
//! serially.

use std::ops::{Index, IndexMut, Range};

use crate::error::Result;
use crate::grid::{Array2, GHOST};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Parallelism {
    Serial,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// One storage row of an [`Array2`], indexed by the signed `i` index.
pub struct RowMut<'a, T> {
    data: &'a mut [T],
}

impl<T> Index<isize> for RowMut<'_, T> {
    type Output = T;
    #[inline]
    fn index(&self, i: isize) -> &T {
        &self.data[(i + GHOST as isize) as usize]
    }
}

impl<T> IndexMut<isize> for RowMut<'_, T> {
    #[inline]
    fn index_mut(&mut self, i: isize) -> &mut T {
        &mut self.data[(i + GHOST as isize) as usize]
    }
}

/// Calls `f(j, row)` for every row `j` in `rows`, stopping at the first error.
pub fn try_for_each_row<T, F>(par: Parallelism, arr: &mut Array2<T>, rows: Range<isize>, f: F) -> Result<()>
where
    T: Send,
    F: Fn(isize, &mut RowMut<'_, T>) -> Result<()> + Sync + Send,
{
    let stride = arr.stride();
    let g = GHOST as isize;
    let selected = arr
        .as_mut_slice()
        .chunks_mut(stride)
        .enumerate()
        .map(|(k, data)| (k as isize - g, RowMut { data }))
        .filter(|(j, _)| rows.contains(j));
    #[cfg(feature = "parallel")]
    if par.is_parallel() {
        use rayon::prelude::*;
        let rows: Vec<_> = selected.collect();
        return rows.into_par_iter().try_for_each(|(j, mut row)| f(j, &mut row));
    }
    let _ = par;
    for (j, mut row) in selected {
        f(j, &mut row)?;
    }
    Ok(())
}

/// `f(a[k], b[k], c[k])` for every `k`; the slices must have equal length.
pub fn zip3_apply<T, F>(par: Parallelism, a: &mut [T], b: &[T], c: &[T], f: F)
where
    T: Send + Sync,
    F: Fn(&mut T, &T, &T) + Sync + Send,
{
    assert!(a.len() == b.len() && a.len() == c.len());
    #[cfg(feature = "parallel")]
    if par.is_parallel() {
        use rayon::prelude::*;
        const CHUNK: usize = 4096;
        a.par_chunks_mut(CHUNK)
            .zip(b.par_chunks(CHUNK))
            .zip(c.par_chunks(CHUNK))
            .for_each(|((a, b), c)| a.iter_mut().zip(b).zip(c).for_each(|((a, b), c)| f(a, b, c)));
        return;
    }
    let _ = par;
    a.iter_mut().zip(b).zip(c).for_each(|((a, b), c)| f(a, b, c));
}
