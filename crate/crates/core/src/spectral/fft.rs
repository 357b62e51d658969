//! Multi-dimensional complex FFT over row-major buffers.
//!
//! Plans are cached per thread, so concurrent callers never share mutable
//! scratch space.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        match dir {
            Direction::Forward => p.plan_fft_forward(n),
            Direction::Inverse => p.plan_fft_inverse(n),
        }
    })
}

/// Unnormalized in-place transform of `buf` with the given axis lengths.
pub(crate) fn transform(buf: &mut [Complex64], shape: &[usize], dir: Direction) {
    debug_assert_eq!(buf.len(), shape.iter().product::<usize>());
    let dim = shape.len();
    for axis in 0..dim {
        let n = shape[axis];
        let fft = plan(n, dir);
        let inner: usize = shape[axis + 1..].iter().product();
        if inner == 1 {
            fft.process(buf);
            continue;
        }
        let outer: usize = shape[..axis].iter().product();
        let mut line = vec![Complex64::new(0.0, 0.0); n];
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        for o in 0..outer {
            let base = o * n * inner;
            for i in 0..inner {
                for (j, z) in line.iter_mut().enumerate() {
                    *z = buf[base + j * inner + i];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, z) in line.iter().enumerate() {
                    buf[base + j * inner + i] = *z;
                }
            }
        }
    }
}
