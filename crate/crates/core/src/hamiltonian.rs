//! Hamiltonians, gradients, and the Gardner bracket on the slope phase space.
//!
//! Both equations are Hamiltonian for the Gardner structure
//! `{F,G}(v) = ∫ ∇F · ∂x∇G dx`: the sinh energy is
//! `H_sh(v) = −¼∫cosh(psi_sh(v))` and the sine energy is
//! `H_sg(v) = ¼∫cos(psi_sg_plus(v))`. The normalizing constants make the
//! derivative of the `c`-term drop out of both first variations, so the
//! gradients are plain antiderivatives of the constraint integrands.

use crate::error::Result;
use crate::phase::{psi_sg_plus, psi_sh};
use crate::spectral::{antiderivative_with_tol, derivative, quadrature, GridFunction};
use crate::tolerances::RAMIFICATION_EPS;

/// A real-valued functional with an analytic gradient, as the Gardner
/// bracket consumes it.
pub trait Functional {
    fn value(&self, v: &GridFunction) -> Result<f64>;
    fn gradient(&self, v: &GridFunction) -> Result<GridFunction>;
}

/// Rounding slack allowed in the mean of the gradient integrands. The
/// normalizing constants kill those means analytically; what is left on the
/// grid is accumulated floating-point noise, far below any model tolerance.
const GRADIENT_MEAN_SLACK: f64 = 1e-10;

/// `H_sh(v) = −¼ ∫ cosh(2∂x⁻¹v + c_sh(v)) dx` on mean-zero `v`.
pub fn h_sh(v: &GridFunction) -> Result<f64> {
    let u = psi_sh(v)?;
    Ok(-0.25 * quadrature(&u.map_values(f64::cosh)))
}

/// `∇H_sh(v) = ½ ∂x⁻¹ sinh(psi_sh(v))`, mean-zero by construction.
pub fn grad_h_sh(v: &GridFunction) -> Result<GridFunction> {
    let u = psi_sh(v)?;
    let integrand = u.map_values(f64::sinh);
    Ok(antiderivative_with_tol(&integrand, GRADIENT_MEAN_SLACK)?.scaled(0.5))
}

/// Right-hand side of the sinh flow: `v_t = ½ sinh(psi_sh(v))`.
pub fn vectorfield_sh(v: &GridFunction) -> Result<GridFunction> {
    let u = psi_sh(v)?;
    Ok(u.map_values(f64::sinh).scaled(0.5))
}

/// `H_sg(v) = ¼ ∫ cos(2∂x⁻¹v + c_sg(v)) dx` on mean-`kπ` `v` away from the
/// ramification locus. Equals `|∫exp(2i∂x⁻¹v)|/4`, so it takes values in
/// `(0, ¼]`.
pub fn h_sg(v: &GridFunction, eps: f64) -> Result<f64> {
    let u = psi_sg_plus(v, eps)?;
    Ok(0.25 * quadrature(&u.map_values(f64::cos)))
}

/// `∇H_sg(v) = ½ ∂x⁻¹ sin(psi_sg_plus(v))`, mean-zero by construction.
pub fn grad_h_sg(v: &GridFunction, eps: f64) -> Result<GridFunction> {
    let u = psi_sg_plus(v, eps)?;
    let integrand = u.map_values(f64::sin);
    Ok(antiderivative_with_tol(&integrand, GRADIENT_MEAN_SLACK)?.scaled(0.5))
}

/// Right-hand side of the sine flow: `v_t = ½ sin(psi_sg_plus(v))`.
pub fn vectorfield_sg(v: &GridFunction, eps: f64) -> Result<GridFunction> {
    let u = psi_sg_plus(v, eps)?;
    Ok(u.map_values(f64::sin).scaled(0.5))
}

/// The sinh energy as a [`Functional`].
#[derive(Debug, Clone, Copy, Default)]
pub struct SinhGordonHamiltonian;

impl Functional for SinhGordonHamiltonian {
    fn value(&self, v: &GridFunction) -> Result<f64> {
        h_sh(v)
    }

    fn gradient(&self, v: &GridFunction) -> Result<GridFunction> {
        grad_h_sh(v)
    }
}

/// The sine energy as a [`Functional`], carrying its ramification guard.
#[derive(Debug, Clone, Copy)]
pub struct SineGordonHamiltonian {
    pub ramification_eps: f64,
}

impl Default for SineGordonHamiltonian {
    fn default() -> Self {
        Self {
            ramification_eps: RAMIFICATION_EPS,
        }
    }
}

impl Functional for SineGordonHamiltonian {
    fn value(&self, v: &GridFunction) -> Result<f64> {
        h_sg(v, self.ramification_eps)
    }

    fn gradient(&self, v: &GridFunction) -> Result<GridFunction> {
        grad_h_sg(v, self.ramification_eps)
    }
}

/// The mean `v ↦ ∫v dx`, the basic Casimir of the bracket.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanFunctional;

impl Functional for MeanFunctional {
    fn value(&self, v: &GridFunction) -> Result<f64> {
        Ok(quadrature(v))
    }

    fn gradient(&self, v: &GridFunction) -> Result<GridFunction> {
        Ok(GridFunction::constant(v.grid(), 1.0))
    }
}

/// Gardner bracket `{F,G}(v) = ∫ ∇F · ∂x∇G dx`.
pub fn gardner_bracket(f: &dyn Functional, g: &dyn Functional, v: &GridFunction) -> Result<f64> {
    let grad_f = f.gradient(v)?;
    let grad_g = g.gradient(v)?;
    Ok(quadrature(
        &grad_f.zip_with(&derivative(&grad_g), |a, b| a * b),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::{random_band_limited, SplitMix64};
    use crate::spectral::{PeriodicGrid, TWO_PI};

    /// J0(1): moment modulus of u(x) = sin(2πx).
    const BESSEL_J0_ONE: f64 = 0.765_197_686_557_966_6;

    fn grid(n: usize) -> PeriodicGrid {
        PeriodicGrid::new(n).unwrap()
    }

    /// Central finite difference of a functional along a direction; the
    /// gradient oracle. Lives in test code only.
    fn fd_directional(f: &dyn Functional, v: &GridFunction, h: &GridFunction, t: f64) -> f64 {
        let plus = f.value(&v.zip_with(h, |a, b| a + t * b)).unwrap();
        let minus = f.value(&v.zip_with(h, |a, b| a - t * b)).unwrap();
        (plus - minus) / (2.0 * t)
    }

    #[derive(Clone, Copy)]
    struct QuadraticEnergy;

    impl Functional for QuadraticEnergy {
        fn value(&self, v: &GridFunction) -> Result<f64> {
            Ok(0.5 * quadrature(&v.map(|t| t * t)))
        }
        fn gradient(&self, v: &GridFunction) -> Result<GridFunction> {
            Ok(v.clone())
        }
    }

    #[derive(Clone, Copy)]
    struct CubicEnergy;

    impl Functional for CubicEnergy {
        fn value(&self, v: &GridFunction) -> Result<f64> {
            Ok(quadrature(&v.map(|t| t * t * t)) / 3.0)
        }
        fn gradient(&self, v: &GridFunction) -> Result<GridFunction> {
            Ok(v.map(|t| t * t))
        }
    }

    #[test]
    fn energies_at_the_trivial_state() {
        let g = grid(128);
        let zero = GridFunction::zeros(g);
        assert!((h_sh(&zero).unwrap() + 0.25).abs() <= 1e-15);
        assert!((h_sg(&zero, 1e-6).unwrap() - 0.25).abs() <= 1e-15);
        assert!(grad_h_sh(&zero).unwrap().max_abs() <= 1e-15);
        assert!(grad_h_sg(&zero, 1e-6).unwrap().max_abs() <= 1e-15);
    }

    #[test]
    fn sine_energy_matches_bessel_value() {
        // 2∂x⁻¹v = sin(2πx) has c_sg = 0 and ∫cos(sin(2πx)) = J0(1).
        let g = grid(128);
        let v = derivative(&GridFunction::from_fn(g, |x| (TWO_PI * x).sin())).scaled(0.5);
        let h = h_sg(&v, 1e-6).unwrap();
        assert!(
            (h - BESSEL_J0_ONE / 4.0).abs() <= 1e-12,
            "H = {h}, expected {}",
            BESSEL_J0_ONE / 4.0
        );
    }

    #[test]
    fn sine_energy_is_a_quarter_of_the_moment_modulus() {
        let g = grid(128);
        let mut rng = SplitMix64::new(7);
        for _ in 0..5 {
            let v = random_band_limited(g, 6, 0.8, &mut rng);
            let h = h_sg(&v, 1e-6).unwrap();
            let u = psi_sg_plus(&v, 1e-6).unwrap();
            let m = crate::phase::moment_k(&u).norm();
            assert!((h - m / 4.0).abs() <= 1e-13);
            assert!(h > 0.0 && h <= 0.25 + 1e-15);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let g = grid(128);
        let mut rng = SplitMix64::new(13);
        let t = 1e-5;
        for trial in 0..8 {
            let v = random_band_limited(g, 6, 0.5, &mut rng);
            let h = random_band_limited(g, 6, 1.0, &mut rng);

            for (name, f) in [
                ("sinh", &SinhGordonHamiltonian as &dyn Functional),
                ("sine", &SineGordonHamiltonian::default() as &dyn Functional),
            ] {
                let analytic = quadrature(&f.gradient(&v).unwrap().zip_with(&h, |a, b| a * b));
                let fd = fd_directional(f, &v, &h, t);
                let rel = (analytic - fd).abs() / analytic.abs().max(1e-12);
                assert!(
                    rel <= 1e-6,
                    "{name} trial {trial}: analytic {analytic} vs fd {fd} (rel {rel})"
                );
            }
        }
    }

    #[test]
    fn gradients_are_mean_zero() {
        let g = grid(128);
        let mut rng = SplitMix64::new(19);
        let v = random_band_limited(g, 6, 0.7, &mut rng);
        assert!(quadrature(&grad_h_sh(&v).unwrap()).abs() <= 1e-14);
        assert!(quadrature(&grad_h_sg(&v, 1e-6).unwrap()).abs() <= 1e-14);
    }

    #[test]
    fn vector_fields_are_curls_of_the_gradients() {
        let g = grid(128);
        let mut rng = SplitMix64::new(23);
        let v = random_band_limited(g, 6, 0.6, &mut rng);

        let lhs = derivative(&grad_h_sh(&v).unwrap());
        let rhs = vectorfield_sh(&v).unwrap();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-9);

        let lhs = derivative(&grad_h_sg(&v, 1e-6).unwrap());
        let rhs = vectorfield_sg(&v, 1e-6).unwrap();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-9);

        // Mean-zero fields: the constraint integrals are exactly the means.
        assert!(quadrature(&vectorfield_sg(&v, 1e-6).unwrap()).abs() <= 1e-10);
        assert!(quadrature(&vectorfield_sh(&v).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn bracket_is_antisymmetric_and_kills_diagonals() {
        let g = grid(128);
        let mut rng = SplitMix64::new(29);
        // Band-limited v keeps every product below the Nyquist mode, so the
        // discrete bracket identities hold to rounding.
        let v = random_band_limited(g, 6, 0.9, &mut rng);
        let (q, c) = (QuadraticEnergy, CubicEnergy);

        let qq = gardner_bracket(&q, &q, &v).unwrap();
        assert!(qq.abs() <= 1e-13, "{{F,F}} = {qq}");

        let qc = gardner_bracket(&q, &c, &v).unwrap();
        let cq = gardner_bracket(&c, &q, &v).unwrap();
        assert!(qc.abs() <= 1e-12, "{{quadratic, cubic}} = {qc}");
        assert!((qc + cq).abs() <= 1e-12, "antisymmetry defect {}", qc + cq);
    }

    #[test]
    fn mean_is_a_casimir() {
        let g = grid(128);
        let mut rng = SplitMix64::new(31);
        let v = random_band_limited(g, 6, 0.8, &mut rng);
        let mean = MeanFunctional;
        for f in [
            &SineGordonHamiltonian::default() as &dyn Functional,
            &SinhGordonHamiltonian as &dyn Functional,
            &QuadraticEnergy as &dyn Functional,
        ] {
            let a = gardner_bracket(f, &mean, &v).unwrap();
            let b = gardner_bracket(&mean, f, &v).unwrap();
            assert!(a.abs() <= 1e-12 && b.abs() <= 1e-12, "{a} {b}");
        }
    }
}
