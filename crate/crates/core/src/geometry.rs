//! Pseudospherical surface reconstruction from angle fields in characteristic
//! coordinates.
//!
//! A field `u(x,t)` with values in `(0, π)` defines the fundamental forms
//! `g = dx² + 2cos(u) dxdt + dt²` and `A = 2sin(u) dxdt` of a Chebyshev net
//! (unit-speed coordinate lines meeting at angle `u`) on a surface of
//! Gaussian curvature −1. The forms satisfy Gauss–Codazzi exactly when
//! `u_xt = sin(u)`, so integrating the Gauss–Weingarten frame system succeeds
//! precisely on solution patches; the compatibility residual quantifies the
//! failure on everything else.

use crate::error::{Error, Result};
use crate::spectral::{derivative, GridFunction, PeriodicGrid};
use crate::tolerances::{COMPAT_THRESHOLD, DELTA_RANGE};

type Vec3 = [f64; 3];

#[inline]
fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
fn norm(a: &Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
fn scale(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
fn add_scaled(a: &Vec3, s: f64, b: &Vec3) -> Vec3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

#[inline]
fn sub(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Angle of the exact traveling kink `4·atan(exp(x + t + shift))`, a
/// solution of the characteristic equation for every shift; the standard
/// source of patches with range strictly inside `(0, π)`.
pub fn kink_angle(x: f64, t: f64, shift: f64) -> f64 {
    4.0 * (x + t + shift).exp().atan()
}

/// A sampled angle field on a rectangular characteristic-coordinate grid,
/// range-validated for metric nondegeneracy.
#[derive(Debug, Clone)]
pub struct SolutionPatch {
    x0: f64,
    x_step: f64,
    nx: usize,
    /// Whether the x-direction closes into a circle of period 1 (then
    /// x-derivatives are spectral; otherwise one-sided stencils at borders).
    x_periodic: bool,
    t0: f64,
    t_step: f64,
    nt: usize,
    /// Row-major by time level: `values[it * nx + ix]`.
    values: Vec<f64>,
    /// Range margin: all values lie in `(delta, π − delta)`.
    delta: f64,
    pub provenance: String,
}

impl SolutionPatch {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        x0: f64,
        x_step: f64,
        nx: usize,
        x_periodic: bool,
        t0: f64,
        t_step: f64,
        nt: usize,
        values: Vec<f64>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        if nx < 5 || nt < 5 {
            return Err(Error::InvalidConfig(format!(
                "patch must be at least 5x5 for fourth-order stencils, got {nx}x{nt}"
            )));
        }
        if !(x_step > 0.0 && t_step > 0.0) {
            return Err(Error::InvalidConfig("patch steps must be positive".into()));
        }
        if x_periodic {
            // Periodic sampling must tile the unit circle.
            if (x_step * nx as f64 - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "periodic patch needs x_step * nx = 1, got {}",
                    x_step * nx as f64
                )));
            }
            PeriodicGrid::new(nx)?;
        }
        if values.len() != nx * nt {
            return Err(Error::InvalidConfig(format!(
                "expected {} values, got {}",
                nx * nt,
                values.len()
            )));
        }
        let patch = Self {
            x0,
            x_step,
            nx,
            x_periodic,
            t0,
            t_step,
            nt,
            values,
            delta: DELTA_RANGE,
            provenance: provenance.into(),
        };
        patch.validate_range()?;
        Ok(patch)
    }

    /// Sample a closed-form angle field.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fn(
        x0: f64,
        x_step: f64,
        nx: usize,
        x_periodic: bool,
        t0: f64,
        t_step: f64,
        nt: usize,
        f: impl Fn(f64, f64) -> f64,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * nt);
        for it in 0..nt {
            let t = t0 + it as f64 * t_step;
            for ix in 0..nx {
                values.push(f(x0 + ix as f64 * x_step, t));
            }
        }
        Self::new(
            x0, x_step, nx, x_periodic, t0, t_step, nt, values, provenance,
        )
    }

    fn validate_range(&self) -> Result<()> {
        let mut min_sin = f64::INFINITY;
        let mut in_range = true;
        for &u in &self.values {
            min_sin = min_sin.min(u.sin());
            if !(u > self.delta && u < std::f64::consts::PI - self.delta) {
                in_range = false;
            }
        }
        if !in_range {
            return Err(Error::DegenerateMetric {
                min_abs_sin: min_sin,
                delta: self.delta,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[inline]
    pub fn nt(&self) -> usize {
        self.nt
    }

    #[inline]
    pub fn x_step(&self) -> f64 {
        self.x_step
    }

    #[inline]
    pub fn t_step(&self) -> f64 {
        self.t_step
    }

    #[inline]
    pub fn x_periodic(&self) -> bool {
        self.x_periodic
    }

    #[inline]
    pub fn value(&self, ix: usize, it: usize) -> f64 {
        self.values[it * self.nx + ix]
    }

    /// Coordinate of column `ix`.
    pub fn x_coord(&self, ix: usize) -> f64 {
        self.x0 + ix as f64 * self.x_step
    }

    /// Coordinate of row `it`.
    pub fn t_coord(&self, it: usize) -> f64 {
        self.t0 + it as f64 * self.t_step
    }

    fn row(&self, it: usize) -> &[f64] {
        &self.values[it * self.nx..(it + 1) * self.nx]
    }

    fn column(&self, ix: usize) -> Vec<f64> {
        (0..self.nt).map(|it| self.value(ix, it)).collect()
    }

    /// `∂x u` on the full grid: spectral for periodic rows, fourth-order
    /// finite differences (one-sided at the borders) otherwise.
    pub fn dx_field(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.nx * self.nt];
        for it in 0..self.nt {
            let row = self.row(it);
            let d = if self.x_periodic {
                let g = PeriodicGrid::new(self.nx).expect("validated in constructor");
                derivative(&GridFunction::from_values(g, row.to_vec()))
                    .values()
                    .to_vec()
            } else {
                fd4_derivative(row, self.x_step)
            };
            out[it * self.nx..(it + 1) * self.nx].copy_from_slice(&d);
        }
        out
    }

    /// `∂t u` on the full grid by fourth-order finite differences.
    pub fn dt_field(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.nx * self.nt];
        for ix in 0..self.nx {
            let col = self.column(ix);
            let d = fd4_derivative(&col, self.t_step);
            for it in 0..self.nt {
                out[it * self.nx + ix] = d[it];
            }
        }
        out
    }
}

/// Fourth-order first derivative of an open (non-periodic) sample line.
fn fd4_derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "validated at patch construction");
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5])
        / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
        + 3.0 * f[n - 5])
        / (12.0 * h);
    d
}

/// Cubic (fourth-order) interpolation at the midpoint between samples `i`
/// and `i+1` of an open line, shifting the stencil at the borders.
fn cubic_midpoint(f: &[f64], i: usize) -> f64 {
    let n = f.len();
    debug_assert!(i + 1 < n);
    if i == 0 {
        (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0
    } else if i + 2 >= n {
        (f[n - 4] - 5.0 * f[n - 3] + 15.0 * f[n - 2] + 5.0 * f[n - 1]) / 16.0
    } else {
        (-f[i - 1] + 9.0 * f[i] + 9.0 * f[i + 1] - f[i + 2]) / 16.0
    }
}

/// Cubic midpoint interpolation with periodic wrap.
fn cubic_midpoint_periodic(f: &[f64], i: usize) -> f64 {
    let n = f.len();
    let at = |j: isize| f[j.rem_euclid(n as isize) as usize];
    let i = i as isize;
    (-at(i - 1) + 9.0 * at(i) + 9.0 * at(i + 1) - at(i + 2)) / 16.0
}

/// Moving frame of the immersion: position, the two unit coordinate tangents
/// `e1 = r_x`, `e2 = r_t`, and the unit normal.
#[derive(Debug, Clone, Copy)]
pub struct FrameState {
    pub r: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    pub n: Vec3,
}

impl FrameState {
    /// Canonical initial frame: origin, `e1` along the first axis, `e2` at
    /// angle `u00` in the horizontal plane, normal vertical. Any other choice
    /// yields the same surface up to rigid motion.
    pub fn chebyshev_default(u00: f64) -> Self {
        Self {
            r: [0.0, 0.0, 0.0],
            e1: [1.0, 0.0, 0.0],
            e2: [u00.cos(), u00.sin(), 0.0],
            n: [0.0, 0.0, 1.0],
        }
    }

    /// Largest deviation of the three vectors from unit length.
    pub fn unit_defect(&self) -> f64 {
        (norm(&self.e1) - 1.0)
            .abs()
            .max((norm(&self.e2) - 1.0).abs())
            .max((norm(&self.n) - 1.0).abs())
    }

    /// `|e1·e2 − cos(u)|`: how well the frame tracks the net angle.
    pub fn angle_defect(&self, u: f64) -> f64 {
        (dot(&self.e1, &self.e2) - u.cos()).abs()
    }

    /// Rescale the tangents to unit length and rebuild the normal from them.
    /// Step error is O(h⁵), so this only removes slow drift.
    fn renormalized(mut self) -> Self {
        self.e1 = scale(&self.e1, 1.0 / norm(&self.e1));
        self.e2 = scale(&self.e2, 1.0 / norm(&self.e2));
        let n = cross(&self.e1, &self.e2);
        self.n = scale(&n, 1.0 / norm(&n));
        self
    }
}

/// Direction of a frame step in the characteristic coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepDirection {
    X,
    T,
}

/// Angle and its directional derivative at the start, midpoint, and end of
/// one step, sampled to the same fourth order as the integrator.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientSamples {
    pub start: (f64, f64),
    pub mid: (f64, f64),
    pub end: (f64, f64),
}

/// Derivative of the frame in one coordinate direction.
///
/// With the forms `g = dx² + 2cos(u)dxdt + dt²`, `A = 2sin(u)dxdt` the
/// Gauss–Weingarten system reads, along x (along t swap `e1 ↔ e2` and use
/// `u_t`):
/// `e1' = u_x cot(u) e1 − (u_x/sin u) e2`, `e2' = sin(u) N`,
/// `N' = cot(u) e1 − (1/sin u) e2`, `r' = e1`.
fn frame_rhs(f: &FrameState, u: f64, du: f64, dir: StepDirection) -> Result<FrameState> {
    let s = u.sin();
    if s.abs() <= DELTA_RANGE.sin() * 0.5 {
        return Err(Error::DegenerateMetric {
            min_abs_sin: s,
            delta: DELTA_RANGE,
        });
    }
    let cot = u.cos() / s;
    let (de1, de2, dn, dr) = match dir {
        StepDirection::X => (
            add_scaled(&scale(&f.e1, du * cot), -du / s, &f.e2),
            scale(&f.n, s),
            add_scaled(&scale(&f.e1, cot), -1.0 / s, &f.e2),
            f.e1,
        ),
        StepDirection::T => (
            scale(&f.n, s),
            add_scaled(&scale(&f.e2, du * cot), -du / s, &f.e1),
            add_scaled(&scale(&f.e2, cot), -1.0 / s, &f.e1),
            f.e2,
        ),
    };
    Ok(FrameState {
        r: dr,
        e1: de1,
        e2: de2,
        n: dn,
    })
}

fn frame_axpy(f: &FrameState, s: f64, k: &FrameState) -> FrameState {
    FrameState {
        r: add_scaled(&f.r, s, &k.r),
        e1: add_scaled(&f.e1, s, &k.e1),
        e2: add_scaled(&f.e2, s, &k.e2),
        n: add_scaled(&f.n, s, &k.n),
    }
}

/// Advance the frame by one fourth-order step of size `h` in the given
/// direction, then renormalize the tangent lengths.
pub fn gauss_weingarten_step(
    frame: &FrameState,
    coeffs: &CoefficientSamples,
    dir: StepDirection,
    h: f64,
) -> Result<FrameState> {
    let k1 = frame_rhs(frame, coeffs.start.0, coeffs.start.1, dir)?;
    let k2 = frame_rhs(
        &frame_axpy(frame, 0.5 * h, &k1),
        coeffs.mid.0,
        coeffs.mid.1,
        dir,
    )?;
    let k3 = frame_rhs(
        &frame_axpy(frame, 0.5 * h, &k2),
        coeffs.mid.0,
        coeffs.mid.1,
        dir,
    )?;
    let k4 = frame_rhs(&frame_axpy(frame, h, &k3), coeffs.end.0, coeffs.end.1, dir)?;
    let mut out = *frame;
    for (w, k) in [
        (h / 6.0, &k1),
        (h / 3.0, &k2),
        (h / 3.0, &k3),
        (h / 6.0, &k4),
    ] {
        out = frame_axpy(&out, w, k);
    }
    Ok(out.renormalized())
}

/// Pointwise fundamental-form coefficients of a patch: `g12 = cos u`,
/// `a12 = sin u` (the unit diagonal entries are implicit), with
/// `det g = sin²u` as the nondegeneracy certificate.
#[derive(Debug, Clone)]
pub struct FundamentalForms {
    pub nx: usize,
    pub nt: usize,
    pub g12: Vec<f64>,
    pub a12: Vec<f64>,
}

impl FundamentalForms {
    pub fn det_g(&self, idx: usize) -> f64 {
        1.0 - self.g12[idx] * self.g12[idx]
    }
}

pub fn fundamental_forms(patch: &SolutionPatch) -> FundamentalForms {
    let g12 = patch.values.iter().map(|u| u.cos()).collect();
    let a12 = patch.values.iter().map(|u| u.sin()).collect();
    FundamentalForms {
        nx: patch.nx,
        nt: patch.nt,
        g12,
        a12,
    }
}

/// Reconstructed immersion: vertex grid with normals, plus the residual
/// certificates.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub nx: usize,
    pub nt: usize,
    pub x_periodic: bool,
    /// Row-major by time level, like the source patch.
    pub positions: Vec<Vec3>,
    pub normals: Vec<Vec3>,
}

impl SurfaceMesh {
    #[inline]
    pub fn index(&self, ix: usize, it: usize) -> usize {
        it * self.nx + ix
    }

    #[inline]
    pub fn position(&self, ix: usize, it: usize) -> Vec3 {
        self.positions[self.index(ix, it)]
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    /// Quads as corner indices `(i00, i10, i11, i01)`, in deterministic
    /// row-major order, including the seam quads of periodic meshes.
    pub fn quads(&self) -> Vec<[usize; 4]> {
        let cols = if self.x_periodic {
            self.nx
        } else {
            self.nx - 1
        };
        let mut out = Vec::with_capacity(cols * (self.nt - 1));
        for it in 0..self.nt - 1 {
            for ix in 0..cols {
                let ix1 = (ix + 1) % self.nx;
                out.push([
                    self.index(ix, it),
                    self.index(ix1, it),
                    self.index(ix1, it + 1),
                    self.index(ix, it + 1),
                ]);
            }
        }
        out
    }
}

/// Result of a reconstruction with its compatibility certificates.
#[derive(Debug, Clone)]
pub struct ReconstructedSurface {
    pub mesh: SurfaceMesh,
    /// Max over interior vertices of `|Dx r − e1|` and `|Dt r − e2|`
    /// (second-order differences of positions against the integrated frame):
    /// the cross-consistency of the two integration directions.
    pub compatibility_residual: f64,
    /// Max over interior vertices of `|DxDt u − sin u|`: how far the input
    /// field is from solving the characteristic equation at this resolution.
    pub pde_residual: f64,
    pub max_unit_defect: f64,
    pub max_angle_defect: f64,
}

/// Integrate the frame system across the patch: along the first time row in
/// x, then along t for every x. Fails with `CompatibilityFailure` when the
/// two directions disagree beyond `compat_threshold` (the Gauss–Codazzi
/// certificate that the input is not a solution at this resolution).
pub fn reconstruct_surface(
    patch: &SolutionPatch,
    initial_frame: &FrameState,
    compat_threshold: f64,
) -> Result<ReconstructedSurface> {
    let (nx, nt) = (patch.nx, patch.nt);
    let dx_field = patch.dx_field();
    let dt_field = patch.dt_field();

    let mid = |f: &[f64], i: usize| {
        if patch.x_periodic {
            cubic_midpoint_periodic(f, i)
        } else {
            cubic_midpoint(f, i)
        }
    };

    // First row: march in x from the anchor frame.
    let mut frames: Vec<FrameState> = Vec::with_capacity(nx * nt);
    frames.push(*initial_frame);
    let row0 = patch.row(0);
    let row0_dx = &dx_field[0..nx];
    for ix in 0..nx - 1 {
        let coeffs = CoefficientSamples {
            start: (row0[ix], row0_dx[ix]),
            mid: (mid(row0, ix), mid(row0_dx, ix)),
            end: (row0[ix + 1], row0_dx[ix + 1]),
        };
        let next = gauss_weingarten_step(&frames[ix], &coeffs, StepDirection::X, patch.x_step)?;
        frames.push(next);
    }

    // Columns: march in t above every first-row vertex.
    frames.resize(nx * nt, *initial_frame);
    for ix in 0..nx {
        let col_u = patch.column(ix);
        let col_dt: Vec<f64> = (0..nt).map(|it| dt_field[it * nx + ix]).collect();
        for it in 0..nt - 1 {
            let coeffs = CoefficientSamples {
                start: (col_u[it], col_dt[it]),
                mid: (cubic_midpoint(&col_u, it), cubic_midpoint(&col_dt, it)),
                end: (col_u[it + 1], col_dt[it + 1]),
            };
            let next = gauss_weingarten_step(
                &frames[it * nx + ix],
                &coeffs,
                StepDirection::T,
                patch.t_step,
            )?;
            frames[(it + 1) * nx + ix] = next;
        }
    }

    let mesh = SurfaceMesh {
        nx,
        nt,
        x_periodic: patch.x_periodic,
        positions: frames.iter().map(|f| f.r).collect(),
        normals: frames.iter().map(|f| f.n).collect(),
    };

    // Frame quality certificates.
    let mut max_unit_defect: f64 = 0.0;
    let mut max_angle_defect: f64 = 0.0;
    for it in 0..nt {
        for ix in 0..nx {
            let f = &frames[it * nx + ix];
            max_unit_defect = max_unit_defect.max(f.unit_defect());
            max_angle_defect = max_angle_defect.max(f.angle_defect(patch.value(ix, it)));
        }
    }

    // Cross-direction compatibility: positions came from t-integration
    // (x-integration for the first row), the tangents claim both derivatives.
    let mut compat: f64 = 0.0;
    let x_range: Vec<usize> = if patch.x_periodic {
        (0..nx).collect()
    } else {
        (1..nx - 1).collect()
    };
    for it in 1..nt - 1 {
        for &ix in &x_range {
            let f = &frames[it * nx + ix];
            let ix_m = if patch.x_periodic {
                (ix + nx - 1) % nx
            } else {
                ix - 1
            };
            let ix_p = if patch.x_periodic {
                (ix + 1) % nx
            } else {
                ix + 1
            };
            let dx_r = scale(
                &sub(&mesh.position(ix_p, it), &mesh.position(ix_m, it)),
                1.0 / (2.0 * patch.x_step),
            );
            let dt_r = scale(
                &sub(&mesh.position(ix, it + 1), &mesh.position(ix, it - 1)),
                1.0 / (2.0 * patch.t_step),
            );
            compat = compat.max(norm(&sub(&dx_r, &f.e1)));
            compat = compat.max(norm(&sub(&dt_r, &f.e2)));
        }
    }

    // Direct equation residual of the input field (second-order cross
    // difference), reported alongside.
    let mut pde: f64 = 0.0;
    for it in 1..nt - 1 {
        for &ix in &x_range {
            let ix_m = if patch.x_periodic {
                (ix + nx - 1) % nx
            } else {
                ix - 1
            };
            let ix_p = if patch.x_periodic {
                (ix + 1) % nx
            } else {
                ix + 1
            };
            let mixed =
                (patch.value(ix_p, it + 1) - patch.value(ix_p, it - 1) - patch.value(ix_m, it + 1)
                    + patch.value(ix_m, it - 1))
                    / (4.0 * patch.x_step * patch.t_step);
            pde = pde.max((mixed - patch.value(ix, it).sin()).abs());
        }
    }

    if compat > compat_threshold {
        return Err(Error::CompatibilityFailure {
            residual: compat,
            threshold: compat_threshold,
        });
    }

    Ok(ReconstructedSurface {
        mesh,
        compatibility_residual: compat,
        pde_residual: pde,
        max_unit_defect,
        max_angle_defect,
    })
}

/// Reconstruction with the canonical anchor frame and default threshold.
pub fn reconstruct_surface_default(patch: &SolutionPatch) -> Result<ReconstructedSurface> {
    let frame = FrameState::chebyshev_default(patch.value(0, 0));
    reconstruct_surface(patch, &frame, COMPAT_THRESHOLD)
}

/// Discrete curvature statistics over the interior vertices.
#[derive(Debug, Clone, Copy)]
pub struct CurvatureSummary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub samples: usize,
}

/// Gaussian curvature estimated from mesh positions alone: second-order
/// difference tangents and second derivatives assemble the two fundamental
/// forms, and `K = det II / det I`. Independent of the integrated frames,
/// so it cross-checks the reconstruction.
pub fn discrete_gaussian_curvature(
    mesh: &SurfaceMesh,
    hx: f64,
    ht: f64,
) -> Result<CurvatureSummary> {
    let (nx, nt) = (mesh.nx, mesh.nt);
    if nx < 3 || nt < 3 {
        return Err(Error::InvalidConfig(
            "curvature needs at least a 3x3 mesh".into(),
        ));
    }
    let x_range: Vec<usize> = if mesh.x_periodic {
        (0..nx).collect()
    } else {
        (1..nx - 1).collect()
    };
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut count = 0usize;
    for it in 1..nt - 1 {
        for &ix in &x_range {
            let ix_m = if mesh.x_periodic {
                (ix + nx - 1) % nx
            } else {
                ix - 1
            };
            let ix_p = if mesh.x_periodic {
                (ix + 1) % nx
            } else {
                ix + 1
            };
            let p = mesh.position(ix, it);
            let px_p = mesh.position(ix_p, it);
            let px_m = mesh.position(ix_m, it);
            let pt_p = mesh.position(ix, it + 1);
            let pt_m = mesh.position(ix, it - 1);

            let ru = scale(&sub(&px_p, &px_m), 1.0 / (2.0 * hx));
            let rv = scale(&sub(&pt_p, &pt_m), 1.0 / (2.0 * ht));
            let ruu = scale(
                &add_scaled(&add_scaled(&px_p, -2.0, &p), 1.0, &px_m),
                1.0 / (hx * hx),
            );
            let rvv = scale(
                &add_scaled(&add_scaled(&pt_p, -2.0, &p), 1.0, &pt_m),
                1.0 / (ht * ht),
            );
            let ruv = scale(
                &sub(
                    &sub(&mesh.position(ix_p, it + 1), &mesh.position(ix_p, it - 1)),
                    &sub(&mesh.position(ix_m, it + 1), &mesh.position(ix_m, it - 1)),
                ),
                1.0 / (4.0 * hx * ht),
            );

            let normal = cross(&ru, &rv);
            let nn = norm(&normal);
            if nn < 1e-12 {
                return Err(Error::DegenerateMetric {
                    min_abs_sin: nn,
                    delta: DELTA_RANGE,
                });
            }
            let n_unit = scale(&normal, 1.0 / nn);

            let (e, f, g) = (dot(&ru, &ru), dot(&ru, &rv), dot(&rv, &rv));
            let (l, m, n2) = (dot(&n_unit, &ruu), dot(&n_unit, &ruv), dot(&n_unit, &rvv));
            let det_g = e * g - f * f;
            let k = (l * n2 - m * m) / det_g;
            sum += k;
            min = min.min(k);
            max = max.max(k);
            count += 1;
        }
    }
    Ok(CurvatureSummary {
        mean: sum / count as f64,
        min,
        max,
        samples: count,
    })
}

/// Wavefront OBJ text for a mesh: `v`/`vn` records at 9 significant digits,
/// quads split into two triangles, `f` records with 1-based `v//vn` indices.
pub fn obj_string(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    out.push_str("# chebyshev-net reconstruction\n");
    for p in &mesh.positions {
        out.push_str(&format!("v {:.8e} {:.8e} {:.8e}\n", p[0], p[1], p[2]));
    }
    for n in &mesh.normals {
        out.push_str(&format!("vn {:.8e} {:.8e} {:.8e}\n", n[0], n[1], n[2]));
    }
    for q in mesh.quads() {
        let [a, b, c, d] = [q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1];
        out.push_str(&format!("f {a}//{a} {b}//{b} {c}//{c}\n"));
        out.push_str(&format!("f {a}//{a} {c}//{c} {d}//{d}\n"));
    }
    out
}

/// Write the OBJ file for a mesh.
pub fn export_obj(mesh: &SurfaceMesh, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, obj_string(mesh))?;
    Ok(())
}
