//! Periodic fields on the uniform grid `x_j = 2πj/n` and circle
//! diffeomorphisms stored as periodic displacements `f(x) - x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

pub const TWO_PI: f64 = 2.0 * PI;
pub const MIN_GRID: usize = 16;

pub(crate) fn forward(values: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

pub(crate) fn backward(mut spec: Vec<Complex64>) -> Vec<f64> {
    let n = spec.len();
    FftPlanner::new().plan_fft_inverse(n).process(&mut spec);
    spec.iter().map(|z| z.re / n as f64).collect()
}

/// Signed wavenumber of FFT bin `j`; the Nyquist bin maps to `+n/2`.
pub(crate) fn wavenumber(j: usize, n: usize) -> f64 {
    if j <= n / 2 {
        j as f64
    } else {
        j as f64 - n as f64
    }
}

/// Multiplies a spectrum by `(ik)^order`, dropping the Nyquist mode for odd
/// orders so that the result stays real.
pub(crate) fn differentiate_spectrum(spec: &mut [Complex64], order: u32) {
    let n = spec.len();
    for (j, z) in spec.iter_mut().enumerate() {
        if j == n / 2 && order % 2 == 1 {
            *z = Complex64::new(0.0, 0.0);
            continue;
        }
        *z *= Complex64::new(0.0, wavenumber(j, n)).powu(order);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    values: Vec<f64>,
}

impl GridField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        if n < MIN_GRID || !n.is_power_of_two() {
            return Err(Error::Grid(format!("size {n} must be a power of two >= {MIN_GRID}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Grid("non-finite sample".into()));
        }
        Ok(Self { values })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..n).map(|j| f(grid_point(j, n))).collect())
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn x(&self, j: usize) -> f64 {
        grid_point(j, self.n())
    }

    /// Spectral derivative of the given order.
    pub fn derivative(&self, order: u32) -> GridField {
        let mut spec = forward(&self.values);
        differentiate_spectrum(&mut spec, order);
        GridField { values: backward(spec) }
    }

    /// `(1/2π) ∫ f dx` by the periodic trapezoid rule.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.n() as f64
    }

    /// `∫₀^{2π} f dx`.
    pub fn integral(&self) -> f64 {
        TWO_PI * self.mean()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridField {
        GridField { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &GridField, f: impl Fn(f64, f64) -> f64) -> GridField {
        assert_eq!(self.n(), other.n(), "grid sizes differ");
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        GridField { values }
    }

    pub fn sup_distance(&self, other: &GridField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn interpolant(&self) -> TrigInterpolant {
        TrigInterpolant::new(&self.values)
    }
}

pub fn grid_point(j: usize, n: usize) -> f64 {
    TWO_PI * j as f64 / n as f64
}

/// Band-limited trigonometric interpolant of grid samples.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    n: usize,
    coeffs: Vec<Complex64>,
}

impl TrigInterpolant {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let spec = forward(values);
        let mut coeffs: Vec<Complex64> = spec[..=n / 2].iter().map(|z| z / n as f64).collect();
        for c in coeffs.iter_mut().take(n / 2).skip(1) {
            *c *= 2.0;
        }
        Self { n, coeffs }
    }

    /// Value and first derivative at `x`.
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let step = Complex64::from_polar(1.0, x);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut value = self.coeffs[0].re;
        let mut slope = 0.0;
        let nyq = self.n / 2;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            phase *= step;
            if k == nyq {
                let kx = nyq as f64 * x;
                value += c.re * kx.cos();
                break;
            }
            let term = c * phase;
            value += term.re;
            slope -= k as f64 * term.im;
        }
        (value, slope)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_derivative(x).0
    }
}

/// Lift of an orientation-preserving circle map, `f(x + 2π) = f(x) + 2π`,
/// stored through its periodic displacement `f(x) - x`.
#[derive(Debug, Clone)]
pub struct CircleMap {
    displacement: GridField,
    interp: TrigInterpolant,
}

impl CircleMap {
    pub fn from_displacement(displacement: GridField) -> Self {
        let interp = displacement.interpolant();
        Self { displacement, interp }
    }

    /// Samples a lifted map `f` on `n` grid points.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(Self::from_displacement(GridField::from_fn(n, |x| f(x) - x)?))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::rotation(n, 0.0)
    }

    pub fn rotation(n: usize, theta: f64) -> Result<Self> {
        Ok(Self::from_displacement(GridField::constant(n, theta)?))
    }

    pub fn n(&self) -> usize {
        self.displacement.n()
    }

    pub fn displacement(&self) -> &GridField {
        &self.displacement
    }

    /// Lifted values `f(x_j)` on the grid.
    pub fn samples(&self) -> Vec<f64> {
        let n = self.n();
        self.displacement.values().iter().enumerate().map(|(j, d)| grid_point(j, n) + d).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        x + self.interp.eval(x)
    }

    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let (d, dd) = self.interp.eval_with_derivative(x);
        (x + d, 1.0 + dd)
    }

    /// `f'` on the grid.
    pub fn slope(&self) -> GridField {
        self.displacement.derivative(1).map(|d| 1.0 + d)
    }

    /// `(f', f'', f''')` on the grid.
    pub fn derivatives(&self) -> (GridField, GridField, GridField) {
        let mut spec = forward(self.displacement.values());
        let base = spec.clone();
        differentiate_spectrum(&mut spec, 1);
        let d1 = backward(spec);
        let mut s2 = base.clone();
        differentiate_spectrum(&mut s2, 2);
        let mut s3 = base;
        differentiate_spectrum(&mut s3, 3);
        (
            GridField { values: d1.into_iter().map(|d| 1.0 + d).collect() },
            GridField { values: backward(s2) },
            GridField { values: backward(s3) },
        )
    }

    pub fn check_monotone(&self) -> Result<()> {
        let min = self.slope().min();
        if min > 0.0 {
            Ok(())
        } else {
            Err(Error::NonMonotone(min))
        }
    }

    /// Solves `f(x) = y` by safeguarded Newton iteration.
    pub fn inverse_at(&self, y: f64) -> Result<f64> {
        let (dmin, dmax) = (self.displacement.min(), self.displacement.max());
        let margin = 0.5 * (dmax - dmin) + 1e-3;
        let mut lo = y - dmax - margin;
        let mut hi = y - dmin + margin;
        let mut x = y - self.interp.eval(y - 0.5 * (dmin + dmax));
        for _ in 0..100 {
            if !(x > lo && x < hi) {
                x = 0.5 * (lo + hi);
            }
            let (fx, slope) = self.eval_with_derivative(x);
            let r = fx - y;
            if r > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            if r.abs() <= 1e-14 * (1.0 + y.abs()) || hi - lo <= 1e-15 * (1.0 + x.abs()) {
                return Ok(x);
            }
            x = if slope > 0.0 { x - r / slope } else { 0.5 * (lo + hi) };
        }
        Err(Error::NoConvergence { what: "circle map inversion", best: x, gap: hi - lo })
    }

    pub fn inverse(&self) -> Result<CircleMap> {
        self.check_monotone()?;
        let n = self.n();
        let mut disp = Vec::with_capacity(n);
        for j in 0..n {
            let y = grid_point(j, n);
            disp.push(self.inverse_at(y)? - y);
        }
        Ok(Self::from_displacement(GridField::new(disp)?))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &CircleMap) -> CircleMap {
        assert_eq!(self.n(), inner.n(), "grid sizes differ");
        let n = self.n();
        let disp: Vec<f64> = inner
            .samples()
            .iter()
            .enumerate()
            .map(|(j, &g)| self.eval(g) - grid_point(j, n))
            .collect();
        Self::from_displacement(GridField { values: disp })
    }
}
