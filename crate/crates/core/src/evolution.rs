//! Time integration of the transformed flows, the direct characteristic-form
//! evolution with its mean drift, and the non-existence probe on the
//! ramification locus.
//!
//! Both transformed equations are integrated with fixed-step classical
//! Runge-Kutta; the vector fields are smoothing, so no stiffness handling is
//! needed and the fourth-order rate is measurable in tests. The mean of the
//! slope variable is a Casimir and is re-projected to its initial value after
//! every step, which removes the one neutral drift direction from long
//! conservation runs.

use crate::error::{Error, Result};
use crate::hamiltonian::{h_sg, h_sh, vectorfield_sg, vectorfield_sh};
use crate::phase::{moment_k, shift_to_manifold};
use crate::spectral::{
    antiderivative_with_tol, quadrature, tail_fraction, GridFunction, WindingFunction,
};
use crate::tolerances::{CLASSIFY_EPS, RAMIFICATION_EPS, TAIL_THRESHOLD};
use std::f64::consts::PI;

/// Which flow to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    SinhGordon,
    SineGordon,
}

impl std::fmt::Display for Equation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Equation::SinhGordon => f.write_str("sinh-gordon"),
            Equation::SineGordon => f.write_str("sine-gordon"),
        }
    }
}

/// Integration parameters. `t_end` is rounded to the nearest whole number of
/// steps; the effective horizon is `n_steps * dt`.
#[derive(Debug, Clone)]
pub struct EvolveConfig {
    pub dt: f64,
    pub t_end: f64,
    pub equation: Equation,
    /// States are stored every `record_stride` steps (diagnostics every step).
    pub record_stride: usize,
    /// Abort threshold on `|∫cos(u)|` for the sine flows.
    pub ramification_eps: f64,
    /// Abort threshold on the spectral tail energy fraction.
    pub tail_threshold: f64,
}

impl EvolveConfig {
    pub fn new(equation: Equation, dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self {
            dt,
            t_end,
            equation,
            record_stride: 1,
            ramification_eps: RAMIFICATION_EPS,
            tail_threshold: TAIL_THRESHOLD,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_record_stride(mut self, stride: usize) -> Self {
        self.record_stride = stride;
        self
    }

    pub fn with_ramification_eps(mut self, eps: f64) -> Self {
        self.ramification_eps = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "dt = {} must be > 0",
                self.dt
            )));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "t_end = {} must be at least dt = {}",
                self.t_end, self.dt
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::InvalidConfig("record_stride must be >= 1".into()));
        }
        if !(self.ramification_eps > 0.0 && self.tail_threshold > 0.0) {
            return Err(Error::InvalidConfig(
                "ramification_eps and tail_threshold must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn n_steps(&self) -> usize {
        ((self.t_end / self.dt).round() as usize).max(1)
    }
}

/// Per-step conserved-quantity record.
#[derive(Debug, Clone, Copy)]
pub struct StepDiagnostics {
    pub t: f64,
    /// `H_sg` / `H_sh` for the v-forms; `¼∫cos(u)` for the direct u-form.
    pub hamiltonian: f64,
    /// `∫sin(u)` (sine) or `∫sinh(u)` (sinh): distance to the manifold.
    pub constraint_integral: f64,
    /// Mean of the evolved variable.
    pub mean: f64,
    pub tail_fraction: f64,
    /// Mean drift rate; recorded on direct u-form trajectories only.
    pub mu: Option<f64>,
}

/// Sampled flow: states at the recording stride, diagnostics at every step.
#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    /// Times of the recorded states, strictly increasing, starting at 0.
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub diagnostics: Vec<StepDiagnostics>,
}

impl<S> Trajectory<S> {
    pub fn initial_state(&self) -> &S {
        &self.states[0]
    }

    pub fn last_state(&self) -> &S {
        self.states.last().expect("trajectory is never empty")
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().expect("trajectory is never empty")
    }

    pub fn max_hamiltonian_drift(&self) -> f64 {
        let h0 = self.diagnostics[0].hamiltonian;
        self.diagnostics
            .iter()
            .map(|d| (d.hamiltonian - h0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_constraint_abs(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| d.constraint_integral.abs())
            .fold(0.0, f64::max)
    }

    pub fn max_mean_deviation(&self) -> f64 {
        let m0 = self.diagnostics[0].mean;
        self.diagnostics
            .iter()
            .map(|d| (d.mean - m0).abs())
            .fold(0.0, f64::max)
    }
}

fn rk4_step<F>(state: &GridFunction, dt: f64, mut rhs: F) -> Result<GridFunction>
where
    F: FnMut(&GridFunction) -> Result<GridFunction>,
{
    let k1 = rhs(state)?;
    let k2 = rhs(&state.zip_with(&k1, |v, k| v + 0.5 * dt * k))?;
    let k3 = rhs(&state.zip_with(&k2, |v, k| v + 0.5 * dt * k))?;
    let k4 = rhs(&state.zip_with(&k3, |v, k| v + dt * k))?;
    let mut out = state.values().to_vec();
    for (j, o) in out.iter_mut().enumerate() {
        *o += dt / 6.0 * (k1.value(j) + 2.0 * k2.value(j) + 2.0 * k3.value(j) + k4.value(j));
    }
    Ok(GridFunction::from_values(state.grid(), out))
}

/// Attach the abort time to ramification errors raised inside a step.
fn stamp_time(err: Error, t: f64) -> Error {
    match err {
        Error::OnRamificationLocus {
            moment_abs,
            eps,
            mu_estimate,
            ..
        } => Error::OnRamificationLocus {
            moment_abs,
            eps,
            t: Some(t),
            mu_estimate,
        },
        other => other,
    }
}

/// Integrate the transformed flow `v_t = ½sinh(psi_sh(v))` or
/// `v_t = ½sin(psi_sg_plus(v))` from `v0`.
///
/// The mean of `v` is re-projected to its initial value (snapped to the
/// nearest multiple of π) after every step. Aborts with
/// `OnRamificationLocus` when the sine moment collapses and with
/// `ResolutionLoss` when spectral energy piles up in the top third of the
/// wavenumber range.
pub fn evolve_v(v0: &GridFunction, cfg: &EvolveConfig) -> Result<Trajectory<GridFunction>> {
    cfg.validate()?;
    let eps = cfg.ramification_eps;

    // Snap the conserved mean once; the flow re-projects onto it each step.
    let target_mean = match cfg.equation {
        Equation::SinhGordon => {
            let m = quadrature(v0);
            if m.abs() > crate::tolerances::MEAN_TOL {
                return Err(Error::NonZeroMean {
                    mean: m,
                    tol: crate::tolerances::MEAN_TOL,
                });
            }
            0.0
        }
        Equation::SineGordon => {
            let m = quadrature(v0);
            let k = (m / PI).round();
            if (m - k * PI).abs() > crate::tolerances::INT_TOL {
                return Err(Error::NonIntegerMean {
                    mean_over_pi: m / PI,
                    tol: crate::tolerances::INT_TOL,
                });
            }
            k * PI
        }
    };

    let rhs = |v: &GridFunction| -> Result<GridFunction> {
        match cfg.equation {
            Equation::SinhGordon => vectorfield_sh(v),
            Equation::SineGordon => vectorfield_sg(v, eps),
        }
    };

    let diagnose = |v: &GridFunction, t: f64| -> Result<StepDiagnostics> {
        let (hamiltonian, constraint_integral) = match cfg.equation {
            Equation::SinhGordon => {
                let u = crate::phase::psi_sh(v)?;
                (h_sh(v)?, quadrature(&u.map_values(f64::sinh)))
            }
            Equation::SineGordon => {
                let u = crate::phase::psi_sg_plus(v, eps)?;
                (h_sg(v, eps)?, quadrature(&u.map_values(f64::sin)))
            }
        };
        Ok(StepDiagnostics {
            t,
            hamiltonian,
            constraint_integral,
            mean: quadrature(v),
            tail_fraction: tail_fraction(v),
            mu: None,
        })
    };

    let check_tail = |v: &GridFunction, t: f64| -> Result<()> {
        let tf = tail_fraction(v);
        if tf > cfg.tail_threshold {
            return Err(Error::ResolutionLoss {
                tail_fraction: tf,
                threshold: cfg.tail_threshold,
                t,
            });
        }
        Ok(())
    };

    let n_steps = cfg.n_steps();
    let mut v = v0.clone();
    let mut times = vec![0.0];
    let mut states = vec![v.clone()];
    let mut diagnostics = vec![diagnose(&v, 0.0).map_err(|e| stamp_time(e, 0.0))?];
    check_tail(&v, 0.0)?;

    for step in 1..=n_steps {
        let t_prev = (step - 1) as f64 * cfg.dt;
        let t = step as f64 * cfg.dt;
        v = rk4_step(&v, cfg.dt, rhs).map_err(|e| stamp_time(e, t_prev))?;
        let mean = quadrature(&v);
        v = v.add_constant(target_mean - mean);

        check_tail(&v, t)?;
        diagnostics.push(diagnose(&v, t).map_err(|e| stamp_time(e, t))?);
        if step % cfg.record_stride == 0 || step == n_steps {
            times.push(t);
            states.push(v.clone());
        }
    }

    Ok(Trajectory {
        times,
        states,
        diagnostics,
    })
}

/// Mean drift rate of the characteristic-form equation, solved from the
/// constraint that `∫sin(u)` stays zero:
/// `μ = ∂t[u] = −K1(u) / ∫cos(u)`.
///
/// Errors with `OnRamificationLocus` when `|∫cos(u)| ≤ eps`; the error
/// carries the diverging estimate so callers can report the blow-up.
pub fn mean_drift_mu(u: &WindingFunction, eps: f64) -> Result<f64> {
    let s = u.map_values(f64::sin);
    let mean_s = quadrature(&s);
    let g = antiderivative_with_tol(&s.add_constant(-mean_s), f64::INFINITY)?;
    let c = u.map_values(f64::cos);
    let k1 = quadrature(&c.zip_with(&g, |a, b| a * b));
    let cos_int = quadrature(&c);
    let estimate = if cos_int != 0.0 {
        Some(-k1 / cos_int)
    } else {
        None
    };
    if cos_int.abs() <= eps {
        return Err(Error::OnRamificationLocus {
            moment_abs: moment_k(u).norm(),
            eps,
            t: None,
            mu_estimate: estimate,
        });
    }
    Ok(-k1 / cos_int)
}

/// Integrate the characteristic form directly:
/// `u_t = ∂x⁻¹sin(u) + μ(u)` with `μ` from [`mean_drift_mu`]. The winding
/// number is constant by representation; the mean of `u` drifts by `μ`.
///
/// `|∫cos(u)|` is conserved by this flow, so a state inside the ramification
/// margin aborts immediately at `t = 0` (the computational face of the
/// non-existence mechanism), carrying the diverging `μ` estimate.
pub fn evolve_u_direct(
    u0: &WindingFunction,
    cfg: &EvolveConfig,
) -> Result<Trajectory<WindingFunction>> {
    cfg.validate()?;
    if cfg.equation != Equation::SineGordon {
        return Err(Error::InvalidConfig(
            "direct characteristic-form evolution is defined for the sine equation".into(),
        ));
    }
    let eps = cfg.ramification_eps;

    let sin0 = quadrature(&u0.map_values(f64::sin));
    if sin0.abs() > CLASSIFY_EPS {
        return Err(Error::NotOnMsin {
            sin_integral: sin0,
            tol: CLASSIFY_EPS,
        });
    }

    let winding = u0.winding();
    // RHS in terms of the periodic part p of u = 2πk x + p.
    let rhs = |p: &GridFunction| -> Result<GridFunction> {
        let u = WindingFunction::new(winding, p.clone());
        let mu = mean_drift_mu(&u, eps)?;
        let s = u.map_values(f64::sin);
        let mean_s = quadrature(&s);
        let g = antiderivative_with_tol(&s.add_constant(-mean_s), f64::INFINITY)?;
        Ok(g.add_constant(mu))
    };

    let diagnose = |u: &WindingFunction, t: f64| -> Result<StepDiagnostics> {
        let mu = mean_drift_mu(u, eps).map_err(|e| stamp_time(e, t))?;
        Ok(StepDiagnostics {
            t,
            hamiltonian: 0.25 * quadrature(&u.map_values(f64::cos)),
            constraint_integral: quadrature(&u.map_values(f64::sin)),
            mean: u.mean(),
            tail_fraction: tail_fraction(u.periodic()),
            mu: Some(mu),
        })
    };

    let n_steps = cfg.n_steps();
    let mut p = u0.periodic().clone();
    let mut times = vec![0.0];
    let mut states = vec![u0.clone()];
    let mut diagnostics = vec![diagnose(u0, 0.0)?];

    for step in 1..=n_steps {
        let t_prev = (step - 1) as f64 * cfg.dt;
        let t = step as f64 * cfg.dt;
        p = rk4_step(&p, cfg.dt, rhs).map_err(|e| stamp_time(e, t_prev))?;

        let tf = tail_fraction(&p);
        if tf > cfg.tail_threshold {
            return Err(Error::ResolutionLoss {
                tail_fraction: tf,
                threshold: cfg.tail_threshold,
                t,
            });
        }
        let u = WindingFunction::new(winding, p.clone());
        diagnostics.push(diagnose(&u, t)?);
        if step % cfg.record_stride == 0 || step == n_steps {
            times.push(t);
            states.push(u);
        }
    }

    Ok(Trajectory {
        times,
        states,
        diagnostics,
    })
}

/// Configuration of the non-existence probe around a ramification-locus
/// state.
#[derive(Debug, Clone)]
pub struct SingProbeConfig {
    /// Perturbation sizes, probed in order (typically decreasing).
    pub deltas: Vec<f64>,
    /// Obstruction verdict threshold on `|K1(u0)|`.
    pub k1_tol: f64,
    /// Classification tolerance for the Sing precondition.
    pub classify_eps: f64,
    /// Perturbation direction; `cos(2πx)` when absent.
    pub direction: Option<GridFunction>,
}

impl Default for SingProbeConfig {
    fn default() -> Self {
        Self {
            deltas: vec![1e-1, 1e-2, 1e-3, 1e-4],
            k1_tol: 1e-8,
            classify_eps: CLASSIFY_EPS,
            direction: None,
        }
    }
}

/// One perturbed sample of the blow-up profile.
#[derive(Debug, Clone, Copy)]
pub struct SingProbeSample {
    pub delta: f64,
    pub cos_integral: f64,
    pub mu: f64,
}

/// Probe result: the obstruction value at the locus and the divergence of
/// the drift rate along a transversal family.
#[derive(Debug, Clone)]
pub struct SingProbeReport {
    pub k1: f64,
    pub obstructed: bool,
    pub samples: Vec<SingProbeSample>,
}

/// Evaluate the necessary-condition probe at `u0` on the ramification locus:
/// report `K1(u0)` (nonzero means no classical solution can start there) and
/// the `μ` blow-up profile along `u0 + δ·w` pushed back onto the constraint
/// manifold.
pub fn sing_probe(u0: &WindingFunction, cfg: &SingProbeConfig) -> Result<SingProbeReport> {
    let class = crate::phase::classify(u0, cfg.classify_eps)?;
    if class.tag != crate::phase::PhaseTag::Sing {
        return Err(Error::WrongBranch {
            expected: crate::phase::PhaseTag::Sing,
            found: class.tag,
        });
    }

    let k1 = crate::phase::obstruction_k1(u0, cfg.classify_eps)?;
    let grid = u0.grid();
    let default_dir = GridFunction::from_fn(grid, |x| (crate::spectral::TWO_PI * x).cos());
    let dir = cfg.direction.as_ref().unwrap_or(&default_dir);

    let mut samples = Vec::with_capacity(cfg.deltas.len());
    for &delta in &cfg.deltas {
        let perturbed = WindingFunction::new(
            u0.winding(),
            u0.periodic().zip_with(dir, |p, w| p + delta * w),
        );
        let on_manifold = shift_to_manifold(&perturbed);
        let cos_integral = quadrature(&on_manifold.map_values(f64::cos));
        // The estimate is reported even inside the abort margin; that is the
        // blow-up being measured.
        let mu = match mean_drift_mu(&on_manifold, 0.0) {
            Ok(mu) => mu,
            Err(Error::OnRamificationLocus {
                mu_estimate: Some(mu),
                ..
            }) => mu,
            Err(e) => return Err(e),
        };
        samples.push(SingProbeSample {
            delta,
            cos_integral,
            mu,
        });
    }

    Ok(SingProbeReport {
        k1,
        obstructed: k1.abs() > cfg.k1_tol,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{psi_sg_plus, SingFamilyParams};
    use crate::sampling::{random_band_limited, SplitMix64};
    use crate::spectral::{PeriodicGrid, TWO_PI};

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    fn cos_mode(g: PeriodicGrid, a: f64, m: f64) -> GridFunction {
        GridFunction::from_fn(g, move |x| a * (TWO_PI * m * x).cos())
    }

    #[test]
    fn equilibria_stay_put() {
        let g = grid(64);
        for eq in [Equation::SineGordon, Equation::SinhGordon] {
            let cfg = EvolveConfig::new(eq, 1e-2, 0.2).unwrap();
            let traj = evolve_v(&GridFunction::zeros(g), &cfg).unwrap();
            assert!(traj.last_state().max_abs() <= 1e-15, "{eq}");
            assert!(traj.max_hamiltonian_drift() <= 1e-15, "{eq}");
        }

        let cfg = EvolveConfig::new(Equation::SineGordon, 1e-2, 0.2).unwrap();
        let u0 = WindingFunction::from_periodic(GridFunction::zeros(g));
        let traj = evolve_u_direct(&u0, &cfg).unwrap();
        assert!(traj.last_state().periodic().max_abs() <= 1e-15);
    }

    #[test]
    fn config_validation_rejects_nonsense() {
        assert!(matches!(
            EvolveConfig::new(Equation::SineGordon, 0.0, 1.0),
            Err(Error::InvalidConfig(_))
        ));
        assert!(matches!(
            EvolveConfig::new(Equation::SineGordon, 0.5, 0.1),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn sine_flow_near_equilibrium_matches_the_linearized_rotation() {
        // Linearization: v_t = ∂x⁻¹v, under which mode m travels with
        // angular frequency 1/(2πm); error budget O(a²).
        let g = grid(128);
        let a = 0.01;
        let v0 = cos_mode(g, a, 1.0);
        let cfg = EvolveConfig::new(Equation::SineGordon, 5e-3, 5.0)
            .unwrap()
            .with_record_stride(100);
        let traj = evolve_v(&v0, &cfg).unwrap();
        let t = traj.last_time();
        let expect = GridFunction::from_fn(g, |x| a * (TWO_PI * x - t / TWO_PI).cos());
        let err = traj.last_state().max_abs_diff(&expect);
        assert!(err <= 1e-3 * a.max(1e-6), "linearization error {err}");
    }

    #[test]
    fn conserved_quantities_stay_flat_on_short_runs() {
        let g = grid(128);
        let v0 = cos_mode(g, 0.1, 1.0);
        for eq in [Equation::SineGordon, Equation::SinhGordon] {
            let cfg = EvolveConfig::new(eq, 1e-3, 1.0)
                .unwrap()
                .with_record_stride(100);
            let traj = evolve_v(&v0, &cfg).unwrap();
            assert!(traj.max_hamiltonian_drift() <= 1e-10, "{eq}");
            assert!(traj.max_constraint_abs() <= 1e-12, "{eq}");
            assert!(traj.max_mean_deviation() <= 1e-15, "{eq}");
        }
    }

    #[test]
    fn integrator_converges_at_fourth_order() {
        let g = grid(64);
        let v0 = cos_mode(g, 0.5, 1.0);
        let run = |dt: f64| {
            let cfg = EvolveConfig::new(Equation::SineGordon, dt, 1.0)
                .unwrap()
                .with_record_stride(usize::MAX);
            evolve_v(&v0, &cfg).unwrap().last_state().clone()
        };
        let reference = run(0.0125);
        let e_coarse = run(0.2).max_abs_diff(&reference);
        let e_fine = run(0.1).max_abs_diff(&reference);
        let ratio = e_coarse / e_fine;
        assert!(
            (8.0..40.0).contains(&ratio),
            "expected ~16x shrink, got {ratio} ({e_coarse} -> {e_fine})"
        );
    }

    #[test]
    fn mean_drift_matches_the_normalizing_constant_derivative() {
        // Along the v-flow, the mean of u = psi_sg_plus(v) is kπ + c_sg(v),
        // so μ of the lifted state must equal dc/dt; finite differences on a
        // fine trajectory are the oracle.
        let g = grid(128);
        let mut rng = SplitMix64::new(53);
        let v0 = random_band_limited(g, 4, 0.35, &mut rng);
        let dt = 5e-5;
        let cfg = EvolveConfig::new(Equation::SineGordon, dt, 40.0 * dt).unwrap();
        let traj = evolve_v(&v0, &cfg).unwrap();

        let c_at = |i: usize| crate::phase::defaults::c_sg(&traj.states[i]).unwrap();
        let j = 20;
        let (c_prev, c_next) = (c_at(j - 1), c_at(j + 1));
        // The constants stay far from the 2π wrap for this data.
        let fd = (c_next - c_prev) / (2.0 * dt);
        let u = psi_sg_plus(&traj.states[j], 1e-6).unwrap();
        let mu = mean_drift_mu(&u, 1e-6).unwrap();
        assert!(
            (mu - fd).abs() <= 1e-5,
            "mu = {mu}, finite-difference dc/dt = {fd}"
        );
    }

    #[test]
    fn direct_and_transformed_evolutions_agree() {
        let g = grid(128);
        let v0 = cos_mode(g, 0.1, 1.0);
        let u0 = psi_sg_plus(&v0, 1e-6).unwrap();
        let cfg = EvolveConfig::new(Equation::SineGordon, 1e-3, 1.0)
            .unwrap()
            .with_record_stride(usize::MAX);

        let v_traj = evolve_v(&v0, &cfg).unwrap();
        let u_traj = evolve_u_direct(&u0, &cfg).unwrap();

        let via_v = psi_sg_plus(v_traj.last_state(), 1e-6).unwrap();
        let direct = u_traj.last_state();
        assert_eq!(via_v.winding(), direct.winding());
        // Both carry the same mean by construction (no wrap at these sizes).
        let err = via_v.max_abs_diff(direct);
        assert!(err <= 1e-6, "u-form vs v-form mismatch {err}");
        assert!(u_traj.max_constraint_abs() <= 1e-8);
    }

    #[test]
    fn ramification_margin_aborts_immediately_with_diverging_mu() {
        // States with |∫cos| inside the margin cannot be evolved at all:
        // the margin quantity is conserved, so the abort fires at t = 0.
        let g = grid(128);
        let u0 = WindingFunction::new(1, cos_mode(g, 1e-4, 2.0));
        let u0 = shift_to_manifold(&u0);
        let cfg = EvolveConfig::new(Equation::SineGordon, 1e-3, 1.0)
            .unwrap()
            .with_ramification_eps(7.5e-5);
        match evolve_u_direct(&u0, &cfg) {
            Err(Error::OnRamificationLocus {
                t: Some(t),
                mu_estimate: Some(mu),
                ..
            }) => {
                assert_eq!(t, 0.0);
                assert!(mu.abs() > 1e3, "mu estimate {mu}");
            }
            other => panic!("expected immediate ramification abort, got {other:?}"),
        }
    }

    #[test]
    fn moment_margin_is_conserved_along_the_direct_flow() {
        let g = grid(128);
        let mut rng = SplitMix64::new(59);
        let v0 = random_band_limited(g, 4, 0.3, &mut rng);
        let u0 = psi_sg_plus(&v0, 1e-6).unwrap();
        let cfg = EvolveConfig::new(Equation::SineGordon, 1e-3, 1.0).unwrap();
        let traj = evolve_u_direct(&u0, &cfg).unwrap();
        let h0 = traj.diagnostics[0].hamiltonian;
        for d in &traj.diagnostics {
            assert!((d.hamiltonian - h0).abs() <= 1e-9, "drift at t={}", d.t);
        }
    }

    #[test]
    fn probe_reports_obstruction_and_blow_up() {
        let g = grid(256);
        // Pure winding state: K1 = -1/(4π) ≠ 0, obstructed.
        let u0 = WindingFunction::new(1, GridFunction::zeros(g));
        let report = sing_probe(&u0, &SingProbeConfig::default()).unwrap();
        assert!(report.obstructed);
        assert!((report.k1 + 1.0 / (4.0 * PI)).abs() <= 1e-12);
        // μ ~ K1/∫cos diverges like 1/δ along the probe family.
        let mus: Vec<f64> = report.samples.iter().map(|s| s.mu.abs()).collect();
        assert!(mus.windows(2).all(|w| w[1] > 4.0 * w[0]), "{mus:?}");

        // The symmetric tent has K1 = 0: not obstructed by this condition.
        let tent = crate::phase::sing_family_w(SingFamilyParams::new(1, 0.5).unwrap(), grid(4096));
        let report = sing_probe(&tent, &SingProbeConfig::default()).unwrap();
        assert!(!report.obstructed, "tent K1 = {}", report.k1);
    }

    #[test]
    fn probe_rejects_branch_states() {
        let g = grid(128);
        let u = WindingFunction::from_periodic(GridFunction::zeros(g));
        match sing_probe(&u, &SingProbeConfig::default()) {
            Err(Error::WrongBranch { expected, .. }) => {
                assert_eq!(expected, crate::phase::PhaseTag::Sing)
            }
            other => panic!("expected WrongBranch, got {other:?}"),
        }
    }
}
