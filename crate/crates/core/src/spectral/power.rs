//! Alias-free pointwise nonlinearities.
//!
//! A polynomial of degree `q` in the field values (and their conjugates) is
//! evaluated on a grid zero-padded by the factor `(q + 1) / 2` per axis and
//! truncated back, which removes every aliased contribution to the retained
//! modes. The unpaired Nyquist coefficient is split evenly between `+-N/2`
//! on the way up and folded back on the way down, so real fields stay real.

use rustfft::num_complex::Complex64;

use super::field::{check_same, PhysicalField};
use super::fft::{self, Direction};
use super::grid::wavenumber;
use crate::error::{Error, Result};

/// Padded length of one axis for a degree-`degree` product.
pub fn padded_points(points: usize, degree: u32) -> usize {
    (points * (degree as usize + 1)).div_ceil(2)
}

/// Each coarse spectral slot maps to one or more fine slots with a weight.
fn slot_map(coarse: &[usize], fine: &[usize]) -> Vec<Vec<(usize, f64)>> {
    let dim = coarse.len();
    let len: usize = coarse.iter().product();
    let mut out = Vec::with_capacity(len);
    let mut idx = vec![0usize; dim];
    for _ in 0..len {
        let mut targets: Vec<(usize, f64)> = vec![(0, 1.0)];
        for a in 0..dim {
            let n = coarse[a];
            let m = fine[a] as i64;
            let k = wavenumber(idx[a], n);
            let choices: Vec<(i64, f64)> = if 2 * idx[a] == n {
                vec![(k, 0.5), (-k, 0.5)]
            } else {
                vec![(k, 1.0)]
            };
            targets = targets
                .into_iter()
                .flat_map(|(flat, w)| {
                    choices
                        .iter()
                        .map(move |&(kk, ww)| (flat * m as usize + kk.rem_euclid(m) as usize, w * ww))
                })
                .collect();
        }
        out.push(targets);
        for a in (0..dim).rev() {
            idx[a] += 1;
            if idx[a] < coarse[a] {
                break;
            }
            idx[a] = 0;
        }
    }
    out
}

/// Evaluate `op` pointwise on the fields as if on the continuum, keeping only
/// the modes representable on the input grid. `degree` bounds the total
/// polynomial degree of `op`.
pub fn dealiased_map(
    fields: &[&PhysicalField],
    degree: u32,
    op: impl Fn(&[Complex64]) -> Complex64,
) -> Result<PhysicalField> {
    let first = fields
        .first()
        .ok_or_else(|| Error::invalid("dealiased_map needs at least one field"))?;
    let grid = first.grid().clone();
    for f in &fields[1..] {
        check_same(&grid, f.grid())?;
    }
    let coarse = grid.points().to_vec();
    let fine: Vec<usize> = coarse.iter().map(|&n| padded_points(n, degree.max(1))).collect();
    let fine_len: usize = fine.iter().product();
    let map = slot_map(&coarse, &fine);
    let coarse_norm = 1.0 / grid.len() as f64;

    let mut padded: Vec<Vec<Complex64>> = Vec::with_capacity(fields.len());
    for f in fields {
        let mut c = f.values().to_vec();
        fft::transform(&mut c, &coarse, Direction::Forward);
        let mut buf = vec![Complex64::new(0.0, 0.0); fine_len];
        for (z, targets) in c.iter().zip(&map) {
            for &(t, w) in targets {
                buf[t] += z * (w * coarse_norm);
            }
        }
        fft::transform(&mut buf, &fine, Direction::Inverse);
        padded.push(buf);
    }

    let mut args = vec![Complex64::new(0.0, 0.0); fields.len()];
    let mut out: Vec<Complex64> = (0..fine_len)
        .map(|j| {
            for (a, buf) in args.iter_mut().zip(&padded) {
                *a = buf[j];
            }
            op(&args)
        })
        .collect();

    fft::transform(&mut out, &fine, Direction::Forward);
    let fine_norm = 1.0 / fine_len as f64;
    let mut coeffs: Vec<Complex64> = map
        .iter()
        .map(|targets| {
            targets
                .iter()
                .map(|&(t, _)| out[t])
                .sum::<Complex64>()
                * fine_norm
        })
        .collect();
    fft::transform(&mut coeffs, &coarse, Direction::Inverse);
    Ok(PhysicalField::from_parts_unchecked(grid, coeffs))
}

fn check_odd(p: u32) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::invalid(format!("p must be odd >= 3, got {p}")));
    }
    Ok(())
}

/// `|f|^{p-1} f`, alias-free; `p` odd so this is a polynomial in `f, conj f`.
pub fn pointwise_power(f: &PhysicalField, p: u32) -> Result<PhysicalField> {
    check_odd(p)?;
    let half = (p - 1) as i32 / 2;
    dealiased_map(&[f], p, |z| z[0] * z[0].norm_sqr().powi(half))
}

/// Pure power `f^p`, alias-free.
pub fn pure_power(f: &PhysicalField, p: u32) -> Result<PhysicalField> {
    if p == 0 {
        return Err(Error::invalid("power must be positive"));
    }
    dealiased_map(&[f], p, |z| z[0].powi(p as i32))
}

/// Product `f g`, alias-free.
pub fn dealiased_product(f: &PhysicalField, g: &PhysicalField) -> Result<PhysicalField> {
    dealiased_map(&[f, g], 2, |z| z[0] * z[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{make_grid, Grid, SpectralField};
    use std::f64::consts::PI;

    #[test]
    fn padding_factor() {
        assert_eq!(padded_points(16, 3), 32);
        assert_eq!(padded_points(16, 5), 48);
        assert_eq!(padded_points(16, 2), 24);
    }

    #[test]
    fn power_of_zero_and_constant() {
        let g = make_grid(1, 3.0, 16).unwrap();
        let z = pointwise_power(&PhysicalField::zeros(g.clone()), 3).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let two = PhysicalField::constant(g, Complex64::new(2.0, 0.0));
        let eight = pointwise_power(&two, 3).unwrap();
        for v in eight.values() {
            assert!((v - Complex64::new(8.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn unimodular_mode_is_fixed() {
        let g = make_grid(1, 2.0 * PI, 32).unwrap();
        let f = PhysicalField::from_fn(g, |x| Complex64::from_polar(1.0, 5.0 * x[0]));
        for p in [3, 5, 7] {
            let q = pointwise_power(&f, p).unwrap();
            assert!(q.sup_distance(&f).unwrap() < 1e-12);
        }
    }

    #[test]
    fn rejects_even_power() {
        let g = make_grid(1, 1.0, 8).unwrap();
        assert!(pointwise_power(&PhysicalField::zeros(g), 4).is_err());
    }

    #[test]
    fn real_field_with_nyquist_stays_real() {
        let g = make_grid(1, 2.0 * PI, 8).unwrap();
        let f = SpectralField::from_wavenumber_fn(g, |k| match k[0] {
            -4 => Complex64::new(3.0, 0.0),
            1 | -1 => Complex64::new(2.0, 0.0),
            _ => Complex64::new(0.0, 0.0),
        })
        .inverse();
        let q = pointwise_power(&f, 3).unwrap();
        assert!(q.values().iter().all(|z| z.im.abs() < 1e-13));
    }

    #[test]
    fn product_removes_aliasing_2d() {
        // cos(3x) cos(3y) squared on an 8x8 grid: naive products alias 6 -> -2.
        let g = Grid::with_axes(&[2.0 * PI, 2.0 * PI], &[8, 8]).unwrap();
        let f = PhysicalField::from_real_fn(g, |x| (3.0 * x[0]).cos() * (3.0 * x[1]).cos());
        let sq = dealiased_product(&f, &f).unwrap().forward();
        // exact square = (1 + cos 6x)(1 + cos 6y) / 4; only the mean survives truncation.
        let mean = sq.at(&[0, 0]).re / (4.0 * PI * PI);
        assert!((mean - 0.25).abs() < 1e-13);
        assert!(sq.at(&[2, 0]).norm() < 1e-12);
    }
}
