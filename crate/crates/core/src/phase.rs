//! Phase-space structure for the sine and sinh flows.
//!
//! The sine side of the story is organized around the moment
//! `K(u) = ∫ exp(i·u) dx`, which is rotated by constant shifts:
//! `K(u + c) = exp(ic)·K(u)`. Its zero set is the singular locus `Sing`; the
//! two half-spaces where `K` is real positive / negative are the branches
//! `P+` / `P-` of a fold, swapped by the involution `T(u) = ŭ + π` (with
//! `ŭ(x) = u(-x)`). The normalization maps `psi_*` take a slope-type variable
//! `v` to the branch representatives `u = 2·∂x⁻¹v + c` with the constant `c`
//! chosen so the relevant constraint integral vanishes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    antiderivative, antiderivative_affine, quadrature, GridFunction, PeriodicGrid, WindingFunction,
    TWO_PI,
};
use crate::tolerances::{CLASSIFY_EPS, MEAN_TOL, RAMIFICATION_EPS};
use std::f64::consts::PI;

/// Which side of the fold a state sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseTag {
    /// `∫cos(u) > 0` (moment on the positive real axis after normalization).
    PPlus,
    /// `∫cos(u) < 0`.
    PMinus,
    /// Ramification locus: `K(u) = 0`.
    Sing,
}

impl std::fmt::Display for PhaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PhaseTag::PPlus => "P+",
            PhaseTag::PMinus => "P-",
            PhaseTag::Sing => "Sing",
        };
        f.write_str(s)
    }
}

/// Classification result with the quantities that justify it.
#[derive(Debug, Clone)]
pub struct PhaseClass {
    pub tag: PhaseTag,
    pub moment: Complex64,
    /// `|∫sin(u)|`, the distance to the constraint manifold.
    pub sin_integral: f64,
    /// Signed confidence: for `Sing` it is `eps − |K|`; for the branches it is
    /// `|Re K| − eps`. Values near zero mean the call sits near the fold ring
    /// that the tolerance cannot resolve.
    pub margin: f64,
    pub eps: f64,
}

/// `K(u) = ∫ exp(i·u) dx` by grid quadrature. Well-defined for winding
/// functions because `exp(i·u)` is periodic.
pub fn moment_k(u: &WindingFunction) -> Complex64 {
    let n = u.grid().len();
    let sum: Complex64 = (0..n).map(|j| Complex64::from_polar(1.0, u.value(j))).sum();
    sum / n as f64
}

/// `∫sin(u) dx`.
pub fn sin_integral(u: &WindingFunction) -> f64 {
    quadrature(&u.map_values(f64::sin))
}

/// `∫cos(u) dx`.
pub fn cos_integral(u: &WindingFunction) -> f64 {
    quadrature(&u.map_values(f64::cos))
}

/// Classify a state on the sine constraint manifold. Errors with `NotOnMsin`
/// if `|∫sin(u)| > eps`.
pub fn classify(u: &WindingFunction, eps: f64) -> Result<PhaseClass> {
    let moment = moment_k(u);
    let sin_int = moment.im;
    if sin_int.abs() > eps {
        return Err(Error::NotOnMsin {
            sin_integral: sin_int,
            tol: eps,
        });
    }
    let (tag, margin) = if moment.norm() <= eps {
        (PhaseTag::Sing, eps - moment.norm())
    } else if moment.re > 0.0 {
        (PhaseTag::PPlus, moment.re.abs() - eps)
    } else {
        (PhaseTag::PMinus, moment.re.abs() - eps)
    };
    Ok(PhaseClass {
        tag,
        moment,
        sin_integral: sin_int.abs(),
        margin,
        eps,
    })
}

/// The constant `c ∈ [0, 2π)` with `K(u + c)` real and positive, i.e.
/// `c = −arg K(u)` reduced mod `2π`. Errors on the ramification locus.
pub fn normalizing_constant(u: &WindingFunction, eps: f64) -> Result<f64> {
    let m = moment_k(u);
    reduce_arg(m, eps, None)
}

fn reduce_arg(m: Complex64, eps: f64, t: Option<f64>) -> Result<f64> {
    if m.norm() <= eps {
        return Err(Error::OnRamificationLocus {
            moment_abs: m.norm(),
            eps,
            t,
            mu_estimate: None,
        });
    }
    let mut c = -m.arg();
    if c < 0.0 {
        c += TWO_PI;
    }
    if c >= TWO_PI {
        c -= TWO_PI;
    }
    Ok(c)
}

/// Normalizing constant for the sinh side: the unique `c` with
/// `∫sinh(2∂x⁻¹v + c) = 0`, in closed form
/// `c = −atanh(∫sinh(w)/∫cosh(w))` for `w = 2∂x⁻¹v`.
pub fn c_sh(v: &GridFunction) -> Result<f64> {
    let w = antiderivative(v)?.scaled(2.0);
    let a = quadrature(&w.map(f64::sinh));
    let b = quadrature(&w.map(f64::cosh));
    // |∫sinh| < ∫cosh pointwise-strictly, so the ratio is inside (-1, 1).
    Ok(-(a / b).atanh())
}

/// `psi_sh(v) = 2∂x⁻¹v + c_sh(v)`: the sinh-manifold representative of a
/// mean-zero slope `v`. Satisfies `∫sinh(psi_sh(v)) = 0`.
pub fn psi_sh(v: &GridFunction) -> Result<WindingFunction> {
    let c = c_sh(v)?;
    let w = antiderivative(v)?.scaled(2.0).add_constant(c);
    Ok(WindingFunction::from_periodic(w))
}

/// Inverse of `psi_sh`: `v = u_x / 2`. Errors with `NotOnMsinh` when the
/// input does not satisfy the sinh constraint.
pub fn psi_sh_inv(u: &WindingFunction, tol: f64) -> Result<GridFunction> {
    let sinh_int = quadrature(&u.map_values(f64::sinh));
    if sinh_int.abs() > tol {
        return Err(Error::NotOnMsinh {
            sinh_integral: sinh_int,
            tol,
        });
    }
    Ok(u.derivative().scaled(0.5))
}

/// Normalizing constant for the sine side: `c_sg(v) = −arg ∫exp(2i·∂x⁻¹v)`,
/// reported in `[0, 2π)`. `v` must have mean `kπ`; errors with
/// `OnRamificationLocus` when the moment vanishes at tolerance `eps`.
pub fn c_sg(v: &GridFunction, eps: f64) -> Result<f64> {
    let w = antiderivative_affine(v)?.doubled();
    normalizing_constant(&w, eps)
}

/// `psi_sg_plus(v) = 2∂x⁻¹v + c_sg(v)`, landing on the `P+` branch.
pub fn psi_sg_plus(v: &GridFunction, eps: f64) -> Result<WindingFunction> {
    let w = antiderivative_affine(v)?.doubled();
    let c = normalizing_constant(&w, eps)?;
    Ok(w.add_constant(c).canonicalized())
}

/// `psi_sg_minus(v) = (2∂x⁻¹v)(−x) + c_sg(v) + π`, landing on the `P-`
/// branch. The reflection flips the winding sign.
pub fn psi_sg_minus(v: &GridFunction, eps: f64) -> Result<WindingFunction> {
    let w = antiderivative_affine(v)?.doubled();
    let c = normalizing_constant(&w, eps)?;
    Ok(w.reflected()
        .add_constant(c)
        .add_constant(PI)
        .canonicalized())
}

/// Inverse of `psi_sg_plus`: `v = u_x / 2`. Errors with `WrongBranch` unless
/// `classify(u) = P+`.
pub fn psi_sg_plus_inv(u: &WindingFunction, eps: f64) -> Result<GridFunction> {
    let class = classify(u, eps)?;
    if class.tag != PhaseTag::PPlus {
        return Err(Error::WrongBranch {
            expected: PhaseTag::PPlus,
            found: class.tag,
        });
    }
    Ok(u.derivative().scaled(0.5))
}

/// Inverse of `psi_sg_minus`: `v = (ŭ)_x / 2`. Errors with `WrongBranch`
/// unless `classify(u) = P-`.
pub fn psi_sg_minus_inv(u: &WindingFunction, eps: f64) -> Result<GridFunction> {
    let class = classify(u, eps)?;
    if class.tag != PhaseTag::PMinus {
        return Err(Error::WrongBranch {
            expected: PhaseTag::PMinus,
            found: class.tag,
        });
    }
    Ok(u.reflected().derivative().scaled(0.5))
}

/// The fold involution `T(u) = u(−x) + π`, returned as the canonical
/// representative. Swaps `P+` and `P-`, fixes `Sing`, and conjugates the
/// sine flow.
pub fn involution_t(u: &WindingFunction) -> WindingFunction {
    u.reflected().add_constant(PI).canonicalized()
}

/// Obstruction integral `K1(u) = ∫ cos(u) · ∂x⁻¹ sin(u) dx`. Requires the
/// state to be on the sine constraint manifold within `tol`.
pub fn obstruction_k1(u: &WindingFunction, tol: f64) -> Result<f64> {
    let s = u.map_values(f64::sin);
    let mean = quadrature(&s);
    if mean.abs() > tol {
        return Err(Error::NotOnMsin {
            sin_integral: mean,
            tol,
        });
    }
    let centered = s.add_constant(-mean);
    let g = antiderivative(&centered)?;
    let c = u.map_values(f64::cos);
    Ok(quadrature(&c.zip_with(&g, |a, b| a * b)))
}

/// Parameters of the piecewise-linear singular family: `k >= 1` tent turns
/// up to `2kπ` on `[0, r)`, then back down by `2π` on `[r, 1)`.
#[derive(Debug, Clone, Copy)]
pub struct SingFamilyParams {
    pub k: u32,
    pub r: f64,
}

impl SingFamilyParams {
    pub fn new(k: u32, r: f64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidConfig("family index k must be >= 1".into()));
        }
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "breakpoint r = {r} must lie strictly inside (0, 1)"
            )));
        }
        Ok(Self { k, r })
    }

    /// Closed-form obstruction value `K1(w) = (k(1−r)² − r²) / (4kπ)`.
    ///
    /// Derivation: on the up-leg `∂x⁻¹sin(w) = −(r/2kπ)cos(w) + const`, on
    /// the down-leg `((1−r)/2π)cos(w) + const`, and `∫cos(w) = 0` over each
    /// leg separately, so `K1 = −(r/2kπ)(r/2) + ((1−r)/2π)((1−r)/2)`.
    /// Sanity anchor: the symmetric tent `k = 1, r = 1/2` has `cos(w)` even
    /// and `∂x⁻¹sin(w)` odd about `x = 1/2`, so its obstruction vanishes,
    /// which only this form reproduces.
    pub fn obstruction_closed_form(&self) -> f64 {
        let k = self.k as f64;
        let s = 1.0 - self.r;
        (k * s * s - self.r * self.r) / (4.0 * k * PI)
    }
}

/// The unique `r ∈ (0, 1)` where the family obstruction changes sign:
/// `k(1−r)² = r²`, i.e. `r = √k / (1 + √k)`.
pub fn obstruction_root(k: u32) -> f64 {
    let s = (k as f64).sqrt();
    s / (1.0 + s)
}

/// Member of the singular family, sampled directly on the grid (the function
/// is piecewise linear, so not band-limited; quadrature errors decay at
/// second order under refinement). Its topological charge is `k − 1` and its
/// moment vanishes identically.
pub fn sing_family_w(params: SingFamilyParams, grid: PeriodicGrid) -> WindingFunction {
    let k = params.k as f64;
    let r = params.r;
    let winding = params.k as i64 - 1;
    let periodic = GridFunction::from_fn(grid, |x| {
        let w = if x < r {
            TWO_PI * k * x / r
        } else {
            TWO_PI * k - TWO_PI * (x - r) / (1.0 - r)
        };
        w - TWO_PI * winding as f64 * x
    });
    WindingFunction::new(winding, periodic)
}

/// Shift `u` by the smallest constant that puts it on the sine constraint
/// manifold: `c ≡ −arg K(u) (mod π)` with `|c| <= π/2`. For `|K| ~ 0` any
/// shift works and the zero shift is returned.
pub fn shift_to_manifold(u: &WindingFunction) -> WindingFunction {
    let m = moment_k(u);
    if m.norm() < 1e-15 {
        return u.clone();
    }
    let c0 = -m.arg();
    let c = c0 - PI * (c0 / PI).round();
    u.add_constant(c)
}

/// Newton projection onto the singular locus `K(u) = 0`, adjusting the two
/// lowest-mode coefficients. Converges from starts where the moment is
/// already small-ish (a few 1e-1).
pub fn project_to_sing(u0: &WindingFunction, max_iter: usize, tol: f64) -> Result<WindingFunction> {
    let grid = u0.grid();
    let cos_mode = GridFunction::from_fn(grid, |x| (TWO_PI * x).cos());
    let sin_mode = GridFunction::from_fn(grid, |x| (TWO_PI * x).sin());
    let mut u = u0.clone();
    for _ in 0..max_iter {
        let m = moment_k(&u);
        if m.norm() <= tol {
            return Ok(u);
        }
        // dK(h) = i ∫ exp(iu) h, assembled for h = cos and sin modes.
        let n = grid.len();
        let mut d_cos = Complex64::new(0.0, 0.0);
        let mut d_sin = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let e = Complex64::from_polar(1.0, u.value(j)) * Complex64::new(0.0, 1.0);
            d_cos += e * cos_mode.value(j);
            d_sin += e * sin_mode.value(j);
        }
        d_cos /= n as f64;
        d_sin /= n as f64;
        let det = d_cos.re * d_sin.im - d_sin.re * d_cos.im;
        if det.abs() < 1e-14 {
            return Err(Error::ProjectionFailure {
                target: "Sing",
                residual: m.norm(),
            });
        }
        // Solve [Re dK; Im dK] [a, b]^T = -[Re K; Im K].
        let a = (-m.re * d_sin.im + m.im * d_sin.re) / det;
        let b = (-m.im * d_cos.re + m.re * d_cos.im) / det;
        let delta = cos_mode
            .scaled(a)
            .zip_with(&sin_mode.scaled(b), |p, q| p + q);
        u = WindingFunction::new(u.winding(), u.periodic().zip_with(&delta, |p, q| p + q));
    }
    let residual = moment_k(&u).norm();
    if residual <= tol {
        Ok(u)
    } else {
        Err(Error::ProjectionFailure {
            target: "Sing",
            residual,
        })
    }
}

/// Convenience wrappers using the default tolerances.
pub mod defaults {
    use super::*;

    pub fn classify(u: &WindingFunction) -> Result<PhaseClass> {
        super::classify(u, CLASSIFY_EPS)
    }

    pub fn c_sg(v: &GridFunction) -> Result<f64> {
        super::c_sg(v, RAMIFICATION_EPS)
    }

    pub fn psi_sg_plus(v: &GridFunction) -> Result<WindingFunction> {
        super::psi_sg_plus(v, RAMIFICATION_EPS)
    }

    pub fn psi_sg_minus(v: &GridFunction) -> Result<WindingFunction> {
        super::psi_sg_minus(v, RAMIFICATION_EPS)
    }

    pub fn psi_sh_inv(u: &WindingFunction) -> Result<GridFunction> {
        super::psi_sh_inv(u, MEAN_TOL)
    }

    pub fn obstruction_k1(u: &WindingFunction) -> Result<f64> {
        super::obstruction_k1(u, CLASSIFY_EPS)
    }
}
