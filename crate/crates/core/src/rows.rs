//! Row-wise grid filling. Each row is produced by the same closure
//! regardless of scheduling, so parallel and sequential output match bit
//! for bit.

#[cfg(feature = "parallel")]
pub(crate) fn fill_rows<F>(width: usize, height: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    use rayon::prelude::*;
    let mut data = vec![0.0; width * height];
    // small grids are not worth the fork/join overhead
    if width * height < 4096 {
        data.chunks_mut(width).enumerate().for_each(|(y, row)| f(y, row));
    } else {
        data.par_chunks_mut(width).enumerate().for_each(|(y, row)| f(y, row));
    }
    data
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fill_rows<F>(width: usize, height: usize, f: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]),
{
    let mut data = vec![0.0; width * height];
    data.chunks_mut(width).enumerate().for_each(|(y, row)| f(y, row));
    data
}
