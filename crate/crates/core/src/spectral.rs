//! Trigonometric calculus on the unit circle.
//!
//! Everything downstream works with real functions sampled on the uniform
//! grid `x_j = j/n`. Semantics are those of the band-limited trigonometric
//! interpolant through the samples: derivatives and antiderivatives act on
//! Fourier coefficients, the quadrature is the plain sample mean (which is
//! spectrally exact on this grid), and off-grid evaluation sums the
//! interpolant directly.
//!
//! Two function types cover the phase spaces that appear later:
//! [`GridFunction`] for 1-periodic functions and [`WindingFunction`] for
//! functions of the form `2πk·x + periodic(x)`. The extended antiderivative
//! of a mean-`kπ` function is an [`AffineFunction`], `kπ·x + periodic(x)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::tolerances::{INT_TOL, MEAN_TOL};

pub const TWO_PI: f64 = 2.0 * PI;

/// Uniform periodic grid with nodes `x_j = j/n`, `n` even and at least 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicGrid {
    n: usize,
}

impl PeriodicGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::InvalidGrid {
                n,
                reason: "need at least 8 nodes",
            });
        }
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid {
                n,
                reason: "node count must be even",
            });
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Node `x_j = j/n`.
    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.n as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }

    /// Signed wavenumber for FFT bin `i`: `i` for `i <= n/2`, `i - n` above.
    #[inline]
    pub fn signed_wavenumber(&self, i: usize) -> i64 {
        if i <= self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }
}

/// Real samples on a [`PeriodicGrid`], understood as a band-limited function.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn from_values(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "sample count must match the grid");
        Self { grid, values }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().map(f).collect();
        Self { grid, values }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: PeriodicGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    #[inline]
    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn value(&self, j: usize) -> f64 {
        self.values[j]
    }

    /// Sample mean; equals the integral over one period for the interpolant.
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        GridFunction {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &GridFunction, f: impl Fn(f64, f64) -> f64) -> GridFunction {
        assert_eq!(self.grid, other.grid, "grids must match");
        GridFunction {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> GridFunction {
        self.map(|v| v * s)
    }

    pub fn add_constant(&self, c: f64) -> GridFunction {
        self.map(|v| v + c)
    }

    /// Samples reversed as `x_j -> x_{n-j mod n}`, i.e. the reflection
    /// `f(x) -> f(-x)` performed exactly on the grid.
    pub fn reflected(&self) -> GridFunction {
        let n = self.len();
        let values = (0..n).map(|j| self.values[(n - j) % n]).collect();
        GridFunction {
            grid: self.grid,
            values,
        }
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> f64 {
        assert_eq!(self.grid, other.grid, "grids must match");
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Samples of the band-limited interpolant on a grid `factor` times finer.
    pub fn upsampled(&self, factor: usize) -> GridFunction {
        Spectrum::forward(self).upsampled(factor)
    }
}

impl std::ops::Add for &GridFunction {
    type Output = GridFunction;
    fn add(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl std::ops::Sub for &GridFunction {
    type Output = GridFunction;
    fn sub(self, rhs: &GridFunction) -> GridFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Integral over one period (the sample mean; exact for the interpolant).
pub fn quadrature(f: &GridFunction) -> f64 {
    f.mean()
}

/// Complex quadrature of `exp(i·f)` style integrands assembled by callers.
pub fn quadrature_complex(values: impl Iterator<Item = Complex64>, n: usize) -> Complex64 {
    values.sum::<Complex64>() / n as f64
}

/// Fourier coefficients of a [`GridFunction`], normalized so `coeff(0)` is the
/// mean: `f(x) = Σ_k c_k exp(2πi k x)`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: PeriodicGrid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn forward(f: &GridFunction) -> Spectrum {
        let n = f.len();
        let mut buf: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        for c in &mut buf {
            *c *= scale;
        }
        Spectrum {
            grid: f.grid,
            coeffs: buf,
        }
    }

    pub fn inverse(&self) -> GridFunction {
        let n = self.grid.len();
        let mut buf: Vec<Complex64> = self.coeffs.iter().map(|&c| c * n as f64).collect();
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        GridFunction {
            grid: self.grid,
            values: buf.iter().map(|c| c.re * scale).collect(),
        }
    }

    #[inline]
    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient for signed wavenumber `k`, `|k| <= n/2`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.grid.len() as i64;
        debug_assert!(k.abs() <= n / 2);
        let i = k.rem_euclid(n) as usize;
        self.coeffs[i]
    }

    /// Termwise derivative: multiply mode `k` by `2πik`. The Nyquist mode is
    /// zeroed, the consistent convention for real data.
    pub fn differentiated(&self) -> Spectrum {
        let n = self.grid.len();
        let mut coeffs = self.coeffs.clone();
        for (i, c) in coeffs.iter_mut().enumerate() {
            let k = self.grid.signed_wavenumber(i);
            if i == n / 2 {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c *= Complex64::new(0.0, TWO_PI * k as f64);
            }
        }
        Spectrum {
            grid: self.grid,
            coeffs,
        }
    }

    /// Termwise antiderivative of a mean-zero function. The constant mode of
    /// the result is zero, so the output has exact mean zero; the Nyquist
    /// mode is dropped (its true antiderivative samples to zero on the grid).
    pub fn antidifferentiated(&self, tol: f64) -> Result<Spectrum> {
        let n = self.grid.len();
        let mean = self.coeffs[0].re;
        if mean.abs() > tol {
            return Err(Error::NonZeroMean { mean, tol });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = Complex64::new(0.0, 0.0);
        for (i, c) in coeffs.iter_mut().enumerate().skip(1) {
            let k = self.grid.signed_wavenumber(i);
            if i == n / 2 {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c /= Complex64::new(0.0, TWO_PI * k as f64);
            }
        }
        Ok(Spectrum {
            grid: self.grid,
            coeffs,
        })
    }

    /// Band-limited resampling onto a grid `factor` times finer. The Nyquist
    /// coefficient is split between `±n/2`, so the result samples exactly the
    /// interpolant that [`Spectrum::eval_at`] evaluates.
    pub fn upsampled(&self, factor: usize) -> GridFunction {
        assert!(factor >= 1, "upsampling factor must be at least 1");
        if factor == 1 {
            return self.inverse();
        }
        let n = self.grid.len();
        let m = n * factor;
        let fine_grid = PeriodicGrid::new(m).expect("multiples of a valid grid stay valid");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..n {
            let k = self.grid.signed_wavenumber(i);
            let c = self.coeffs[i];
            if i == n / 2 {
                let half = 0.5 * c;
                coeffs[k.rem_euclid(m as i64) as usize] += half;
                coeffs[(-k).rem_euclid(m as i64) as usize] += half;
            } else {
                coeffs[k.rem_euclid(m as i64) as usize] = c;
            }
        }
        Spectrum {
            grid: fine_grid,
            coeffs,
        }
        .inverse()
    }

    /// Band-limited interpolant evaluated at an arbitrary point.
    pub fn eval_at(&self, x: f64) -> f64 {
        let n = self.grid.len();
        let mut acc = self.coeffs[0].re;
        for k in 1..n / 2 {
            let c = self.coeffs[k];
            let (s, cs) = (TWO_PI * k as f64 * x).sin_cos();
            acc += 2.0 * (c.re * cs - c.im * s);
        }
        acc += self.coeffs[n / 2].re * (PI * n as f64 * x).cos();
        acc
    }

    /// Fraction of spectral energy carried by wavenumbers `|k| >= n/3`,
    /// relative to the total non-constant energy. Zero for the zero function.
    pub fn tail_fraction(&self) -> f64 {
        let n = self.grid.len();
        let cut = (n as f64 / 3.0).ceil() as i64;
        let mut tail = 0.0;
        let mut total = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.grid.signed_wavenumber(i);
            if k == 0 {
                continue;
            }
            let e = c.norm_sqr();
            total += e;
            if k.abs() >= cut {
                tail += e;
            }
        }
        if total < 1e-290 {
            0.0
        } else {
            tail / total
        }
    }
}

/// Spectral derivative of the interpolant.
pub fn derivative(f: &GridFunction) -> GridFunction {
    Spectrum::forward(f).differentiated().inverse()
}

/// Mean-zero antiderivative; errors with `NonZeroMean` if `|mean(f)|` exceeds
/// the default gate.
pub fn antiderivative(f: &GridFunction) -> Result<GridFunction> {
    antiderivative_with_tol(f, MEAN_TOL)
}

pub fn antiderivative_with_tol(f: &GridFunction, tol: f64) -> Result<GridFunction> {
    Ok(Spectrum::forward(f).antidifferentiated(tol)?.inverse())
}

/// Energy fraction in the top third of wavenumbers; the resolution monitor.
pub fn tail_fraction(f: &GridFunction) -> f64 {
    Spectrum::forward(f).tail_fraction()
}

/// `kπ·x + periodic(x)`: the antiderivative of a function with mean `kπ`.
/// Doubling it gives a [`WindingFunction`] with winding number `k`.
#[derive(Debug, Clone)]
pub struct AffineFunction {
    half_turns: i64,
    periodic: GridFunction,
}

impl AffineFunction {
    pub fn new(half_turns: i64, periodic: GridFunction) -> Self {
        Self {
            half_turns,
            periodic,
        }
    }

    #[inline]
    pub fn half_turns(&self) -> i64 {
        self.half_turns
    }

    #[inline]
    pub fn periodic(&self) -> &GridFunction {
        &self.periodic
    }

    /// Slope of the affine part, `kπ`.
    pub fn slope(&self) -> f64 {
        self.half_turns as f64 * PI
    }

    pub fn eval_node(&self, j: usize) -> f64 {
        self.slope() * self.periodic.grid().node(j) + self.periodic.value(j)
    }

    /// `2·(kπx + p(x)) = 2πkx + 2p(x)`, a winding-`k` function.
    pub fn doubled(&self) -> WindingFunction {
        WindingFunction::new(self.half_turns, self.periodic.scaled(2.0))
    }

    /// Derivative `kπ + p'(x)`, a periodic function with mean `kπ`.
    pub fn derivative(&self) -> GridFunction {
        derivative(&self.periodic).add_constant(self.slope())
    }
}

/// Antiderivative extended to functions whose mean is an integer multiple of
/// `π`: `∂x⁻¹ v = kπ·x + ∂x⁻¹(v − kπ)`. Errors with `NonIntegerMean` when the
/// mean is not within tolerance of `kπ`.
pub fn antiderivative_affine(v: &GridFunction) -> Result<AffineFunction> {
    let mean = v.mean();
    let mean_over_pi = mean / PI;
    let k = mean_over_pi.round();
    if (mean_over_pi - k).abs() > INT_TOL {
        return Err(Error::NonIntegerMean {
            mean_over_pi,
            tol: INT_TOL,
        });
    }
    let centered = v.add_constant(-mean);
    // `centered` has exact mean 0 up to rounding; the antiderivative zeroes
    // the constant mode regardless.
    let periodic = antiderivative_with_tol(&centered, 1e-3)?;
    Ok(AffineFunction::new(k as i64, periodic))
}

/// `u(x) = 2πk·x + periodic(x)`: a function on the circle with topological
/// charge (winding number) `k`. The additive constant is meaningful only
/// modulo `2π` for every consumer in this crate; maps that normalize phases
/// return representatives with `mean(periodic) ∈ [0, 2π)`.
#[derive(Debug, Clone)]
pub struct WindingFunction {
    winding: i64,
    periodic: GridFunction,
}

impl WindingFunction {
    pub fn new(winding: i64, periodic: GridFunction) -> Self {
        Self { winding, periodic }
    }

    pub fn from_periodic(periodic: GridFunction) -> Self {
        Self {
            winding: 0,
            periodic,
        }
    }

    #[inline]
    pub fn winding(&self) -> i64 {
        self.winding
    }

    #[inline]
    pub fn periodic(&self) -> &GridFunction {
        &self.periodic
    }

    #[inline]
    pub fn grid(&self) -> PeriodicGrid {
        self.periodic.grid()
    }

    /// Value at node `j` of the chosen representative.
    pub fn value(&self, j: usize) -> f64 {
        TWO_PI * self.winding as f64 * self.grid().node(j) + self.periodic.value(j)
    }

    /// All node values `u(x_j)` of the chosen representative.
    pub fn sampled(&self) -> Vec<f64> {
        (0..self.grid().len()).map(|j| self.value(j)).collect()
    }

    /// Pointwise image under `f`; well-defined on the circle whenever `f` is
    /// `2π`-periodic (sin, cos, exp(i·)), which is how callers use it.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> GridFunction {
        let grid = self.grid();
        GridFunction::from_values(grid, (0..grid.len()).map(|j| f(self.value(j))).collect())
    }

    /// Mean of the function over one period: `πk + mean(periodic)`.
    pub fn mean(&self) -> f64 {
        PI * self.winding as f64 + self.periodic.mean()
    }

    /// Spectral derivative `2πk + periodic'(x)`, a periodic function.
    pub fn derivative(&self) -> GridFunction {
        derivative(&self.periodic).add_constant(TWO_PI * self.winding as f64)
    }

    pub fn add_constant(&self, c: f64) -> WindingFunction {
        WindingFunction {
            winding: self.winding,
            periodic: self.periodic.add_constant(c),
        }
    }

    /// Reflection `u(x) -> u(-x)`: winding flips sign, samples reverse.
    pub fn reflected(&self) -> WindingFunction {
        WindingFunction {
            winding: -self.winding,
            periodic: self.periodic.reflected(),
        }
    }

    /// Canonical representative modulo additive `2π` constants:
    /// `mean(periodic)` is shifted into `[0, 2π)` by an exact multiple of `2π`.
    pub fn canonicalized(&self) -> WindingFunction {
        let m = self.periodic.mean();
        let shift = TWO_PI * (m / TWO_PI).floor();
        if shift == 0.0 {
            self.clone()
        } else {
            self.add_constant(-shift)
        }
    }

    /// `sup u − inf u` over one period of the representative, sampled on the
    /// grid (the affine part makes the endpoint `x = 1` matter).
    pub fn oscillation(&self) -> f64 {
        let n = self.grid().len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for j in 0..n {
            let v = self.value(j);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let end = TWO_PI * self.winding as f64 + self.periodic.value(0);
        lo = lo.min(end);
        hi = hi.max(end);
        hi - lo
    }

    pub fn max_abs_diff(&self, other: &WindingFunction) -> f64 {
        assert_eq!(
            self.winding, other.winding,
            "cannot compare functions of different winding"
        );
        self.periodic.max_abs_diff(&other.periodic)
    }
}
