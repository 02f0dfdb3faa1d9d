//! Hill discriminants and the Miura chain connecting the characteristic-form
//! spectrum to the slope-side spectrum.
//!
//! The discriminant `Δ(λ)` of `−y″ + q y = λ y` is the trace of its period
//! map. Two identities route everything through that single computation:
//! `Δ_sg(u, λ) = Δ(u_xx + u_x², λ²)` and
//! `e^{∫v} Δ_m(v, λ) = Δ(v_x + v², λ)`. Invariance of the sampled `Δ` along
//! a flow is the operational isospectrality check.

use crate::error::{Error, Result};
use crate::spectral::{derivative, quadrature, GridFunction, WindingFunction};
use crate::tolerances::HILL_SUBSTEPS;

/// A Hill potential prepared for monodromy integration: the trigonometric
/// interpolant of `q` is resampled at the integrator's step midpoints once,
/// then reused across the λ sweep.
#[derive(Debug, Clone)]
pub struct HillPotential {
    /// Samples at spacing `h/2` (step nodes and midpoints), `2·n_steps` long.
    fine: Vec<f64>,
    n_steps: usize,
    h: f64,
}

impl HillPotential {
    pub fn new(q: &GridFunction, substeps: usize) -> Result<Self> {
        if substeps == 0 {
            return Err(Error::InvalidConfig(
                "monodromy integration needs at least one substep per grid interval".into(),
            ));
        }
        let n_steps = q.len() * substeps;
        let fine = q.upsampled(2 * substeps);
        Ok(Self {
            fine: fine.values().to_vec(),
            n_steps,
            h: 1.0 / n_steps as f64,
        })
    }

    pub fn with_default_substeps(q: &GridFunction) -> Result<Self> {
        Self::new(q, HILL_SUBSTEPS)
    }

    /// Fundamental matrix of `y″ = (q − λ) y` over one period, from the
    /// identity frame, by fixed-step fourth-order integration.
    pub fn monodromy(&self, lambda: f64) -> Result<[[f64; 2]; 2]> {
        // y' = [[0, 1], [q − λ, 0]] y; columns evolve independently.
        #[inline]
        fn apply(a: f64, y: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
            [[y[1][0], y[1][1]], [a * y[0][0], a * y[0][1]]]
        }
        #[inline]
        fn saxpy(y: &[[f64; 2]; 2], s: f64, k: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
            [
                [y[0][0] + s * k[0][0], y[0][1] + s * k[0][1]],
                [y[1][0] + s * k[1][0], y[1][1] + s * k[1][1]],
            ]
        }

        let m = self.fine.len();
        let mut y = [[1.0, 0.0], [0.0, 1.0]];
        for i in 0..self.n_steps {
            let a0 = self.fine[2 * i] - lambda;
            let am = self.fine[2 * i + 1] - lambda;
            let a1 = self.fine[(2 * i + 2) % m] - lambda;
            let k1 = apply(a0, &y);
            let k2 = apply(am, &saxpy(&y, 0.5 * self.h, &k1));
            let k3 = apply(am, &saxpy(&y, 0.5 * self.h, &k2));
            let k4 = apply(a1, &saxpy(&y, self.h, &k3));
            for r in 0..2 {
                for c in 0..2 {
                    y[r][c] +=
                        self.h / 6.0 * (k1[r][c] + 2.0 * k2[r][c] + 2.0 * k3[r][c] + k4[r][c]);
                }
            }
        }
        if y.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::OdeStepFailure {
                lambda,
                detail: "monodromy integration produced non-finite entries".into(),
            });
        }
        Ok(y)
    }

    /// `Δ(λ)`: trace of the period map.
    pub fn discriminant(&self, lambda: f64) -> Result<f64> {
        let y = self.monodromy(lambda)?;
        Ok(y[0][0] + y[1][1])
    }
}

/// `Δ(λ)` for the Hill operator `−d²/dx² + q` at a single λ, with the
/// default substep count. Sweeps should build a [`HillPotential`] once.
pub fn hill_discriminant(q: &GridFunction, lambda: f64) -> Result<f64> {
    HillPotential::with_default_substeps(q)?.discriminant(lambda)
}

/// Miura map `v ↦ v_x + v²`.
pub fn miura(v: &GridFunction) -> GridFunction {
    derivative(v).zip_with(&v.map(|t| t * t), |a, b| a + b)
}

/// Potential of the characteristic-form chain: `u ↦ u_xx + u_x²`, i.e. the
/// Miura image of the slope `u_x` (periodic even when `u` winds).
pub fn sg_to_kdv(u: &WindingFunction) -> GridFunction {
    miura(&u.derivative())
}

/// Characteristic-form discriminant, defined through the chain identity:
/// `Δ_sg(u, λ) = Δ(u_xx + u_x², λ²)`.
pub fn delta_sg(u: &WindingFunction, lambda: f64) -> Result<f64> {
    hill_discriminant(&sg_to_kdv(u), lambda * lambda)
}

/// Slope-side discriminant, defined through
/// `e^{∫v} Δ_m(v, λ) = Δ(v_x + v², λ)`.
pub fn delta_m(v: &GridFunction, lambda: f64) -> Result<f64> {
    Ok((-quadrature(v)).exp() * hill_discriminant(&miura(v), lambda)?)
}

/// Sampled discriminant curve with a provenance label for reports.
#[derive(Debug, Clone)]
pub struct DiscriminantCurve {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
    pub potential_id: String,
}

/// Sweep `Δ(λ)` over `lambdas` (in input order) for one potential.
pub fn discriminant_curve(
    q: &GridFunction,
    lambdas: &[f64],
    substeps: usize,
    potential_id: impl Into<String>,
) -> Result<DiscriminantCurve> {
    let pot = HillPotential::new(q, substeps)?;
    let values = lambdas
        .iter()
        .map(|&l| pot.discriminant(l))
        .collect::<Result<Vec<f64>>>()?;
    Ok(DiscriminantCurve {
        lambdas: lambdas.to_vec(),
        values,
        potential_id: potential_id.into(),
    })
}

/// Largest deviation of the sampled discriminant from its initial-state
/// values, over a sequence of states and a λ set: the operational
/// isospectrality measure of a flow.
pub fn isospectrality_drift(
    states: &[WindingFunction],
    lambdas: &[f64],
    substeps: usize,
) -> Result<f64> {
    let Some((first, rest)) = states.split_first() else {
        return Ok(0.0);
    };
    let base = discriminant_curve(&sg_to_kdv(first), lambdas, substeps, "initial")?;
    let mut drift: f64 = 0.0;
    for u in rest {
        let pot = HillPotential::new(&sg_to_kdv(u), substeps)?;
        for (i, &l) in lambdas.iter().enumerate() {
            drift = drift.max((pot.discriminant(l)? - base.values[i]).abs());
        }
    }
    Ok(drift)
}
