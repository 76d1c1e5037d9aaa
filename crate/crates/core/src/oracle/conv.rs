//! Fixed-point iteration `f_n = f_{n-1} - (Delta f_{n-1} - delta_0) * f` for
//! the simple walk, starting from `f = (2/pi) log|z|` with `f(0) = -1`.
//!
//! Each error `e_{n-1} = Delta f_{n-1} - delta_0` is kept on the grid and
//! convolved by FFT with the seed evaluated on the doubled window, so the
//! only truncation is that of `e` at the grid edge.

use std::f64::consts::PI;
use std::sync::Arc;

use rug::Float;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::direct::is_simple_lattice_walk;
use super::OracleError;
use crate::exact_values::PotentialValue;
use crate::walk::WalkSpec;

pub const MIN_RADIUS: usize = 50;

/// Values on `[-R, R]^2` in lattice coordinates.
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub radius: usize,
    values: Vec<f64>,
    /// `sum |Delta f_k - delta_0|` over the inner half-grid, seed first.
    pub residuals: Vec<f64>,
}

impl GridFunction {
    fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn get(&self, x: i64, y: i64) -> Option<f64> {
        let r = self.radius as i64;
        if x.abs() > r || y.abs() > r {
            return None;
        }
        Some(self.values[(x + r) as usize * self.side() + (y + r) as usize])
    }

    /// `f(z) - f(0)`, which removes the additive constant.
    pub fn potential(&self, x: i64, y: i64) -> Option<f64> {
        Some(self.get(x, y)? - self.get(0, 0)?)
    }
}

fn seed(x: i64, y: i64) -> f64 {
    if (x, y) == (0, 0) {
        -1.0
    } else {
        (2.0 / PI) * ((x * x + y * y) as f64).ln() / 2.0
    }
}

/// Smallest `2^a 3^b 5^c` not below `n`.
fn smooth_size(n: usize) -> usize {
    (n..).find(|&m| {
        let mut m = m;
        for p in [2, 3, 5] {
            while m % p == 0 {
                m /= p;
            }
        }
        m == 1
    })
    .expect("unbounded search")
}

fn fft2(buf: &mut [Complex64], l: usize, fft: &Arc<dyn Fft<f64>>) {
    for row in buf.chunks_mut(l) {
        fft.process(row);
    }
    let mut col = vec![Complex64::default(); l];
    for j in 0..l {
        for i in 0..l {
            col[i] = buf[i * l + j];
        }
        fft.process(&mut col);
        for i in 0..l {
            buf[i * l + j] = col[i];
        }
    }
}

/// `Delta f - delta_0` where all four neighbours lie on the grid, else 0.
fn defect(values: &[f64], radius: usize) -> Vec<f64> {
    let n = 2 * radius + 1;
    let mut e = vec![0.0; n * n];
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let k = i * n + j;
            let avg = 0.25 * (values[k - n] + values[k + n] + values[k - 1] + values[k + 1]);
            e[k] = avg - values[k] - if i == radius && j == radius { 1.0 } else { 0.0 };
        }
    }
    e
}

fn inner_norm(e: &[f64], radius: usize) -> f64 {
    let n = 2 * radius + 1;
    let h = radius / 2;
    let mut s = 0.0;
    for i in radius - h..=radius + h {
        for j in radius - h..=radius + h {
            s += e[i * n + j].abs();
        }
    }
    s
}

/// Runs the iteration on `[-R, R]^2`.
pub fn potential_convolution_iterate(walk: &WalkSpec, radius: usize, iterations: usize) -> Result<GridFunction, OracleError> {
    if !is_simple_lattice_walk(walk) {
        return Err(OracleError::Unsupported(format!("{}: the iteration is set up for the simple walk", walk.name)));
    }
    if radius < MIN_RADIUS {
        return Err(OracleError::Invalid(format!("grid radius {radius} is below {MIN_RADIUS}")));
    }
    let n = 2 * radius + 1;
    let r = radius as i64;
    let l = smooth_size(6 * radius + 1);
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(l);
    let inv = planner.plan_fft_inverse(l);

    let mut kernel = vec![Complex64::default(); l * l];
    for u in -2 * r..=2 * r {
        for v in -2 * r..=2 * r {
            kernel[(u + 2 * r) as usize * l + (v + 2 * r) as usize] = Complex64::new(seed(u, v), 0.0);
        }
    }
    fft2(&mut kernel, l, &fwd);

    let mut values: Vec<f64> = (-r..=r).flat_map(|x| (-r..=r).map(move |y| seed(x, y))).collect();
    let mut e = defect(&values, radius);
    let mut residuals = vec![inner_norm(&e, radius)];
    let scale = 1.0 / (l * l) as f64;
    let mut buf = vec![Complex64::default(); l * l];
    for _ in 0..iterations {
        buf.iter_mut().for_each(|c| *c = Complex64::default());
        for i in 0..n {
            for j in 0..n {
                buf[i * l + j] = Complex64::new(e[i * n + j], 0.0);
            }
        }
        fft2(&mut buf, l, &fwd);
        for (b, k) in buf.iter_mut().zip(&kernel) {
            *b *= k;
        }
        fft2(&mut buf, l, &inv);
        // Grid point i pairs with index i + 2R of the linear convolution.
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] -= buf[(i + 2 * radius) * l + j + 2 * radius].re * scale;
            }
        }
        e = defect(&values, radius);
        let norm = inner_norm(&e, radius);
        let last = *residuals.last().expect("seed norm");
        residuals.push(norm);
        if norm > last {
            return Err(OracleError::Diverged(norm));
        }
    }
    Ok(GridFunction { radius, values, residuals })
}

/// `a(z)` from the converged grid, with the change against a grid of half
/// the radius as the error estimate.
pub fn potential_convolution(
    walk: &WalkSpec,
    z: (i64, i64),
    radius: usize,
    iterations: usize,
) -> Result<PotentialValue, OracleError> {
    let half = (radius / 2).max(MIN_RADIUS);
    if (z.0.abs().max(z.1.abs()) as usize) > half / 2 {
        return Err(OracleError::Invalid(format!("{z:?} lies outside the inner grid of radius {}", half / 2)));
    }
    let fine = potential_convolution_iterate(walk, radius, iterations)?;
    let coarse = potential_convolution_iterate(walk, half, iterations)?;
    let v = fine.potential(z.0, z.1).expect("inside grid");
    let w = coarse.potential(z.0, z.1).expect("inside grid");
    let floor = fine.residuals.last().copied().unwrap_or(0.0);
    Ok(PotentialValue::numeric(Float::with_val(64, v), (v - w).abs() + floor))
}
