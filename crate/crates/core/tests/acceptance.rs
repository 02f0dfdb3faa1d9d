//! Acceptance gate for the workspace: eleven end-to-end checks, one line of
//! output each (`criterion N (label): PASS/FAIL (metrics)`). Run with
//! `cargo test -p gordon-core --test acceptance -- --nocapture`.
//!
//! Every expected value below is either a closed form computed independently
//! of the library path under test, or a pinned target with its tolerance
//! next to it. Criterion 7 pins a closed-form family law and a root location
//! that quadrature refutes; the check reports the measured gap and stays red
//! rather than silently adopting the measured values (see the library's
//! piecewise-linear family for the law the quadrature does support).

use std::f64::consts::PI;

use gordon_core::evolution::{evolve_u_direct, evolve_v, Equation, EvolveConfig, Trajectory};
use gordon_core::floquet::{isospectrality_drift, HillPotential};
use gordon_core::hamiltonian::{grad_h_sg, grad_h_sh, h_sg, h_sh, vectorfield_sg, vectorfield_sh};
use gordon_core::phase::{
    involution_t, moment_k, obstruction_k1, project_to_sing, psi_sg_minus, psi_sg_plus, psi_sh,
    sing_family_w, SingFamilyParams,
};
use gordon_core::sampling::{random_band_limited, SplitMix64};
use gordon_core::spectral::{derivative, quadrature};
use gordon_core::tolerances::{CLASSIFY_EPS, HILL_SUBSTEPS, INT_TOL, RAMIFICATION_EPS};
use gordon_core::{Error, GridFunction, PeriodicGrid, WindingFunction};

const TWO_PI: f64 = 2.0 * PI;

// criterion 1: constraint normalization
const C1_SAMPLES: usize = 50;
const C1_TOL: f64 = 1e-9;
// criterion 2: gradient identity
const C2_PAIRS: usize = 20;
const C2_REL_TOL: f64 = 1e-6;
const C2_FIELD_TOL: f64 = 1e-9;
// criterion 3: conservation
const C3_DT: f64 = 1e-3;
const C3_T_END: f64 = 10.0;
const C3_H_TOL: f64 = 1e-8;
const C3_CONSTRAINT_TOL: f64 = 1e-10;
const C3_MEAN_TOL: f64 = 1e-15;
// criterion 4: isospectrality
const C4_T_END: f64 = 5.0;
const C4_DRIFT_TOL: f64 = 1e-6;
// Halving dt at 4th order predicts a drift ratio of 16. The integrator's
// phase error is an x-translation the discriminant cannot see, so the
// visible channel usually scales one order better (about 30); 12 cleanly
// separates it from 3rd-order behavior (8).
const C4_MIN_REFINEMENT_RATIO: f64 = 12.0;
// criterion 5: linearization
const C5_AMPLITUDE: f64 = 0.01;
const C5_TOL: f64 = 1e-3;
// criterion 6: fold structure
const C6_INVOLUTION_TOL: f64 = 1e-13;
const C6_BRANCH_TOL: f64 = 1e-10;
const C6_CONJUGACY_TOL: f64 = 1e-7;
// criterion 7: obstruction closed forms
const C7_UNIFORM_TOL: f64 = 1e-9;
const C7_FAMILY_TOL: f64 = 1e-8;
const C7_ROOT_TOL: f64 = 1e-4;
// Constraint gate for sampled piecewise-linear family states: when a corner
// falls between grid nodes the discrete sine integral carries an O(h^2)
// residual (up to ~1.4e-6 at n = 4096, ~9e-8 at n = 16384), so the gate must
// sit above that floor. Matches the tolerance the library's family tests use.
const C7_GATE_TOL: f64 = 1e-6;
// criterion 8: non-existence face
const C8_EPS: f64 = 7.5e-5;
const C8_DISTANCE: f64 = 1e-3;
const C8_MU_FLOOR: f64 = 1e3;
// criterion 9: Hill discriminant exactness
const C9_DELTA_TOL: f64 = 1e-9;
const C9_DET_TOL: f64 = 1e-10;
// criterion 10: geometry
const C10_CURVATURE_REL: f64 = 0.05;
const C10_MIN_RATIO: f64 = 3.0;
const C10_MAX_RATIO: f64 = 5.5;
// criterion 11: oscillation bound
const C11_OSC_FLOOR: f64 = PI - 0.02;
const C11_RANDOM_SAMPLES: usize = 100;

fn report(n: usize, label: &str, pass: bool, metrics: &str) {
    println!(
        "criterion {n:2} ({label}): {} ({metrics})",
        if pass { "PASS" } else { "FAIL" }
    );
}

fn grid(n: usize) -> PeriodicGrid {
    PeriodicGrid::new(n).expect("even n >= 8")
}

fn sin_integral_of(u: &WindingFunction) -> f64 {
    quadrature(&u.map_values(f64::sin))
}

fn sinh_integral_of(u: &WindingFunction) -> f64 {
    quadrature(&u.map_values(f64::sinh))
}

#[test]
fn criterion_01_constraint_normalization() {
    let g = grid(128);
    let mut rng = SplitMix64::new(101);
    let mut worst: f64 = 0.0;
    for _ in 0..C1_SAMPLES {
        let amp = 0.1 + 0.9 * rng.next_f64();
        let v = random_band_limited(g, 20, amp, &mut rng);
        worst = worst.max(sinh_integral_of(&psi_sh(&v).unwrap()).abs());
        worst = worst.max(sin_integral_of(&psi_sg_plus(&v, CLASSIFY_EPS).unwrap()).abs());
        worst = worst.max(sin_integral_of(&psi_sg_minus(&v, CLASSIFY_EPS).unwrap()).abs());
    }
    let pass = worst <= C1_TOL;
    report(
        1,
        "constraint normalization",
        pass,
        &format!("{C1_SAMPLES} samples, max |constraint| {worst:.2e} vs {C1_TOL:.0e}"),
    );
    assert!(pass, "max constraint integral {worst:.3e} > {C1_TOL:.0e}");
}

#[test]
fn criterion_02_gradient_identity() {
    let g = grid(128);
    let mut rng = SplitMix64::new(202);
    let fd_step = 1e-5;
    let mut worst_rel: f64 = 0.0;
    for _ in 0..C2_PAIRS {
        let v = random_band_limited(g, 12, 0.5, &mut rng);
        let h = random_band_limited(g, 12, 1.0, &mut rng);
        for which in 0..2 {
            let energy = |w: &GridFunction| -> f64 {
                if which == 0 {
                    h_sh(w).unwrap()
                } else {
                    h_sg(w, CLASSIFY_EPS).unwrap()
                }
            };
            let gradient = if which == 0 {
                grad_h_sh(&v).unwrap()
            } else {
                grad_h_sg(&v, CLASSIFY_EPS).unwrap()
            };
            let plus = energy(&v.zip_with(&h, |a, b| a + fd_step * b));
            let minus = energy(&v.zip_with(&h, |a, b| a - fd_step * b));
            let fd = (plus - minus) / (2.0 * fd_step);
            let analytic = quadrature(&gradient.zip_with(&h, |a, b| a * b));
            worst_rel = worst_rel.max((fd - analytic).abs() / analytic.abs());
        }
    }

    // d/dx of the gradient must reproduce the flow fields exactly.
    let mut worst_field: f64 = 0.0;
    for _ in 0..5 {
        let v = random_band_limited(g, 12, 0.5, &mut rng);
        worst_field = worst_field
            .max(derivative(&grad_h_sh(&v).unwrap()).max_abs_diff(&vectorfield_sh(&v).unwrap()));
        worst_field = worst_field.max(
            derivative(&grad_h_sg(&v, CLASSIFY_EPS).unwrap())
                .max_abs_diff(&vectorfield_sg(&v, CLASSIFY_EPS).unwrap()),
        );
    }
    let pass = worst_rel <= C2_REL_TOL && worst_field <= C2_FIELD_TOL;
    report(
        2,
        "gradient identity",
        pass,
        &format!(
            "{C2_PAIRS} pairs, max rel FD error {worst_rel:.2e} vs {C2_REL_TOL:.0e}; \
             max |d/dx grad - field| {worst_field:.2e} vs {C2_FIELD_TOL:.0e}"
        ),
    );
    assert!(pass, "rel {worst_rel:.3e}, field {worst_field:.3e}");
}

fn conservation_run(equation: Equation) -> Trajectory<GridFunction> {
    let g = grid(128);
    let v0 = GridFunction::from_fn(g, |x| 0.1 * (TWO_PI * x).cos());
    let cfg = EvolveConfig::new(equation, C3_DT, C3_T_END)
        .unwrap()
        .with_record_stride(1000);
    evolve_v(&v0, &cfg).unwrap()
}

#[test]
fn criterion_03_conservation() {
    let sine = conservation_run(Equation::SineGordon);
    let sinh = conservation_run(Equation::SinhGordon);
    let dh = sine
        .max_hamiltonian_drift()
        .max(sinh.max_hamiltonian_drift());
    let constraint = sine.max_constraint_abs().max(sinh.max_constraint_abs());
    let mean = sine.max_mean_deviation().max(sinh.max_mean_deviation());
    let pass = dh <= C3_H_TOL && constraint <= C3_CONSTRAINT_TOL && mean <= C3_MEAN_TOL;
    report(
        3,
        "conservation",
        pass,
        &format!(
            "t in [0, {C3_T_END}], dt {C3_DT}: max |dH| {dh:.2e} vs {C3_H_TOL:.0e}, \
             max |constraint| {constraint:.2e} vs {C3_CONSTRAINT_TOL:.0e}, \
             max |mean| drift {mean:.2e}"
        ),
    );
    assert!(
        pass,
        "dH {dh:.3e}, constraint {constraint:.3e}, mean {mean:.3e}"
    );
}

fn sine_states_as_u(dt: f64, stride: usize) -> Vec<WindingFunction> {
    let g = grid(128);
    let v0 = GridFunction::from_fn(g, |x| 0.1 * (TWO_PI * x).cos());
    let cfg = EvolveConfig::new(Equation::SineGordon, dt, C4_T_END)
        .unwrap()
        .with_record_stride(stride);
    let traj = evolve_v(&v0, &cfg).unwrap();
    traj.states
        .iter()
        .map(|v| psi_sg_plus(v, CLASSIFY_EPS).unwrap())
        .collect()
}

#[test]
fn criterion_04_isospectrality() {
    let lambdas: Vec<f64> = (0..10).map(|i| -5.0 + 5.0 * i as f64).collect();
    let drift =
        isospectrality_drift(&sine_states_as_u(1e-3, 500), &lambdas, HILL_SUBSTEPS).unwrap();

    // Refinement pair coarse enough that time-integration error dominates
    // the flow's resolution-independent drift floor (about 4.5e-11 at this
    // amplitude): halving dt must shrink the drift by at least 2^4.
    let coarse = isospectrality_drift(&sine_states_as_u(1.0, 1), &lambdas, HILL_SUBSTEPS).unwrap();
    let fine = isospectrality_drift(&sine_states_as_u(0.5, 2), &lambdas, HILL_SUBSTEPS).unwrap();
    let ratio = coarse / fine;
    let pass = drift <= C4_DRIFT_TOL && ratio >= C4_MIN_REFINEMENT_RATIO;
    report(
        4,
        "isospectrality",
        pass,
        &format!(
            "10 lambda in [-5, 40], t in [0, {C4_T_END}]: drift {drift:.2e} vs {C4_DRIFT_TOL:.0e}; \
             dt 1.0 -> 0.5 drift ratio {ratio:.1} (4th order predicts 16 or better)"
        ),
    );
    assert!(pass, "drift {drift:.3e}, refinement ratio {ratio:.2}");
}

#[test]
fn criterion_05_linearization() {
    let g = grid(128);
    let mut worst: f64 = 0.0;
    for mode in [1usize, 2] {
        let m = mode as f64;
        let v0 = GridFunction::from_fn(g, |x| C5_AMPLITUDE * (TWO_PI * m * x).cos());
        let cfg = EvolveConfig::new(Equation::SineGordon, 1e-3, 5.0)
            .unwrap()
            .with_record_stride(250);
        let traj = evolve_v(&v0, &cfg).unwrap();
        for (t, v) in traj.times.iter().zip(&traj.states) {
            let predicted = GridFunction::from_fn(g, |x| {
                C5_AMPLITUDE * (TWO_PI * m * x - t / (TWO_PI * m)).cos()
            });
            worst = worst.max(v.max_abs_diff(&predicted));
        }
    }
    let pass = worst <= C5_TOL;
    report(
        5,
        "linearization",
        pass,
        &format!(
            "amplitude {C5_AMPLITUDE}, modes 1..2, t in [0, 5]: \
             max deviation from rotating mode {worst:.2e} vs {C5_TOL:.0e}"
        ),
    );
    assert!(pass, "linear-flow deviation {worst:.3e}");
}

#[test]
fn criterion_06_fold_structure() {
    let g = grid(128);
    let mut rng = SplitMix64::new(606);
    let mut worst_tt: f64 = 0.0;
    let mut worst_branch: f64 = 0.0;
    for _ in 0..5 {
        let v = random_band_limited(g, 10, 0.6, &mut rng);
        let u = psi_sg_plus(&v, CLASSIFY_EPS).unwrap();
        worst_tt = worst_tt.max(involution_t(&involution_t(&u)).max_abs_diff(&u));
        worst_branch = worst_branch
            .max(involution_t(&u).max_abs_diff(&psi_sg_minus(&v, CLASSIFY_EPS).unwrap()));
    }

    // Conjugacy of the characteristic-form flow with the fold involution,
    // applied raw (reflect + pi) so both sides live on the same sheet of
    // constants.
    let raw_t = |u: &WindingFunction| u.reflected().add_constant(PI);
    let v0 = GridFunction::from_fn(g, |x| {
        0.15 * (TWO_PI * x).cos() + 0.08 * (2.0 * TWO_PI * x).sin()
    });
    let u0 = psi_sg_plus(&v0, CLASSIFY_EPS).unwrap();
    let cfg = EvolveConfig::new(Equation::SineGordon, 1e-3, 1.0)
        .unwrap()
        .with_record_stride(1000);
    let flow_then_t = raw_t(evolve_u_direct(&u0, &cfg).unwrap().last_state());
    let t_then_flow = evolve_u_direct(&raw_t(&u0), &cfg).unwrap();
    let conjugacy = flow_then_t.max_abs_diff(t_then_flow.last_state());

    let pass = worst_tt <= C6_INVOLUTION_TOL
        && worst_branch <= C6_BRANCH_TOL
        && conjugacy <= C6_CONJUGACY_TOL;
    report(
        6,
        "fold structure",
        pass,
        &format!(
            "|T(T(u)) - u| {worst_tt:.2e} vs {C6_INVOLUTION_TOL:.0e}; \
             |T(psi+) - psi-| {worst_branch:.2e} vs {C6_BRANCH_TOL:.0e}; \
             flow conjugacy at t = 1: {conjugacy:.2e} vs {C6_CONJUGACY_TOL:.0e}"
        ),
    );
    assert!(
        pass,
        "TT {worst_tt:.3e}, branch {worst_branch:.3e}, conjugacy {conjugacy:.3e}"
    );
}

#[test]
fn criterion_07_obstruction_closed_forms() {
    // Uniform winding: K1(2 pi x) = -1/(4 pi).
    let uniform = WindingFunction::new(1, GridFunction::zeros(grid(2048)));
    let dev_uniform = (obstruction_k1(&uniform, INT_TOL).unwrap() + 1.0 / (4.0 * PI)).abs();

    // Pinned family law and root for the piecewise-linear singular family.
    let pinned_family = |k: f64, r: f64| (k * (1.0 - r) - r * r) / (4.0 * k * PI);
    let pinned_root = (5.0_f64.sqrt() - 1.0) / 2.0;

    let g_family = grid(16384);
    let mut max_family_dev: f64 = 0.0;
    let mut argmax = (0u32, 0.0f64);
    for k in 1u32..=3 {
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            let w = sing_family_w(SingFamilyParams::new(k, r).unwrap(), g_family);
            let measured = obstruction_k1(&w, C7_GATE_TOL).unwrap();
            let dev = (measured - pinned_family(k as f64, r)).abs();
            if dev > max_family_dev {
                max_family_dev = dev;
                argmax = (k, r);
            }
        }
    }

    // Independent root location: bisect the quadrature of the obstruction
    // integral for k = 1. The bracket comfortably straddles the sign change
    // while keeping slopes gentle enough for accurate quadrature.
    let g_root = grid(16384);
    let k1_of = |r: f64| {
        let w = sing_family_w(SingFamilyParams::new(1, r).unwrap(), g_root);
        obstruction_k1(&w, C7_GATE_TOL).unwrap()
    };
    let (mut lo, mut hi) = (0.1, 0.9);
    assert!(k1_of(lo) > 0.0 && k1_of(hi) < 0.0, "root not bracketed");
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if k1_of(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let measured_root = 0.5 * (lo + hi);
    let root_dev = (measured_root - pinned_root).abs();

    let pass =
        dev_uniform <= C7_UNIFORM_TOL && max_family_dev <= C7_FAMILY_TOL && root_dev <= C7_ROOT_TOL;
    report(
        7,
        "obstruction closed forms",
        pass,
        &format!(
            "uniform dev {dev_uniform:.2e} vs {C7_UNIFORM_TOL:.0e}; \
             family dev {max_family_dev:.2e} vs {C7_FAMILY_TOL:.0e} \
             (worst at k={}, r={}); k=1 root measured {measured_root:.6} \
             vs pinned {pinned_root:.6} (tol {C7_ROOT_TOL:.0e})",
            argmax.0, argmax.1
        ),
    );
    assert!(
        pass,
        "uniform {dev_uniform:.3e}; family dev {max_family_dev:.3e} at k={} r={}; \
         root {measured_root:.6} vs {pinned_root:.6}",
        argmax.0, argmax.1
    );
}

#[test]
fn criterion_08_nonexistence_face() {
    let g = grid(128);
    let n = g.len();
    let zero = GridFunction::zeros(g);

    // Perturbations of the uniform winding staying on the constraint
    // manifold exactly (odd symmetry or pure even cosine harmonics).
    let mut rng = SplitMix64::new(808);
    let mut high_modes = vec![0.0; n];
    for m in 2..=6u32 {
        let b = rng.next_signed();
        for (j, val) in high_modes.iter_mut().enumerate() {
            *val += b * (TWO_PI * m as f64 * j as f64 / n as f64).sin();
        }
    }
    let high = GridFunction::from_values(g, high_modes);
    let high = high.scaled(8e-4 / high.max_abs());

    let samples: Vec<(WindingFunction, &str)> = vec![
        (WindingFunction::new(1, zero.clone()), "uniform winding"),
        (
            WindingFunction::new(
                1,
                GridFunction::from_fn(g, |x| 1e-3 * (2.0 * TWO_PI * x).cos()),
            ),
            "even cosine harmonic",
        ),
        (WindingFunction::new(1, high), "odd harmonics 2..6"),
        (
            WindingFunction::new(1, GridFunction::from_fn(g, |x| 1.2e-4 * (TWO_PI * x).sin())),
            "weak first harmonic",
        ),
    ];

    let cfg = EvolveConfig::new(Equation::SineGordon, 1e-3, 1.0)
        .unwrap()
        .with_ramification_eps(C8_EPS);
    let mut min_mu = f64::INFINITY;
    let mut all_aborted = true;
    for (u0, label) in &samples {
        let distance = u0.periodic().max_abs();
        assert!(
            distance <= C8_DISTANCE,
            "{label}: start {distance:.2e} from the uniform winding"
        );
        assert!(
            sin_integral_of(u0).abs() <= INT_TOL,
            "{label}: start off the constraint manifold"
        );
        match evolve_u_direct(u0, &cfg) {
            Err(Error::OnRamificationLocus { mu_estimate, .. }) => {
                // A vanishing denominator has no finite estimate: the drift
                // is already beyond any floor.
                let mu = mu_estimate.map_or(f64::INFINITY, f64::abs);
                min_mu = min_mu.min(mu);
            }
            other => {
                all_aborted = false;
                println!("  sample '{label}' did not abort: {other:?}");
            }
        }
    }

    let pass = all_aborted && min_mu > C8_MU_FLOOR;
    report(
        8,
        "non-existence face",
        pass,
        &format!(
            "{} starts within {C8_DISTANCE:.0e} of the uniform winding, eps {C8_EPS:.1e}: \
             all abort on the ramification locus, min |mu| {min_mu:.3e} > {C8_MU_FLOOR:.0e}",
            samples.len()
        ),
    );
    assert!(pass, "aborted: {all_aborted}, min |mu| {min_mu:.3e}");
}

#[test]
fn criterion_09_hill_discriminant_exactness() {
    let g = grid(128);
    let mut worst_delta: f64 = 0.0;
    let mut worst_det: f64 = 0.0;
    for c in [-2.0, 0.0, 3.7] {
        let pot = HillPotential::with_default_substeps(&GridFunction::constant(g, c)).unwrap();
        for i in 0..=25 {
            let lambda = c - 10.0 + 2.0 * i as f64;
            let exact = if lambda >= c {
                2.0 * (lambda - c).sqrt().cos()
            } else {
                2.0 * (c - lambda).sqrt().cosh()
            };
            worst_delta = worst_delta.max((pot.discriminant(lambda).unwrap() - exact).abs());
            let m = pot.monodromy(lambda).unwrap();
            worst_det = worst_det.max((m[0][0] * m[1][1] - m[0][1] * m[1][0] - 1.0).abs());
        }
    }
    let pass = worst_delta <= C9_DELTA_TOL && worst_det <= C9_DET_TOL;
    report(
        9,
        "Hill discriminant exactness",
        pass,
        &format!(
            "constant potentials, lambda in [c-10, c+40]: \
             max |Delta - closed form| {worst_delta:.2e} vs {C9_DELTA_TOL:.0e}; \
             max |det M - 1| {worst_det:.2e} vs {C9_DET_TOL:.0e}"
        ),
    );
    assert!(pass, "delta {worst_delta:.3e}, det {worst_det:.3e}");
}

#[test]
fn criterion_10_geometry() {
    use gordon_core::geometry::{
        discrete_gaussian_curvature, kink_angle, reconstruct_surface_default, SolutionPatch,
    };
    let kink_patch = |n: usize| {
        let h = 1.0 / (n - 1) as f64;
        SolutionPatch::from_fn(
            0.0,
            h,
            n,
            false,
            0.0,
            h,
            n,
            |x, t| kink_angle(x, t, -2.5),
            "kink",
        )
        .unwrap()
    };

    let residual = |n: usize| {
        reconstruct_surface_default(&kink_patch(n))
            .unwrap()
            .compatibility_residual
    };
    let (r17, r33, r65) = (residual(17), residual(33), residual(65));
    let (ratio_a, ratio_b) = (r17 / r33, r33 / r65);

    let p = kink_patch(33);
    let surf = reconstruct_surface_default(&p).unwrap();
    let k = discrete_gaussian_curvature(&surf.mesh, p.x_step(), p.t_step()).unwrap();
    let curvature_dev = (k.min + 1.0).abs().max((k.max + 1.0).abs());

    let h = 1.0 / 32.0;
    let non_solution = SolutionPatch::from_fn(
        0.0,
        h,
        33,
        false,
        0.0,
        h,
        33,
        |x, t| 1.2 + 0.5 * (2.0 * x).sin() * (2.0 * t).cos(),
        "non-solution control",
    )
    .unwrap();
    let control_failed = matches!(
        reconstruct_surface_default(&non_solution),
        Err(Error::CompatibilityFailure { .. })
    );

    let second_order = (C10_MIN_RATIO..=C10_MAX_RATIO).contains(&ratio_a)
        && (C10_MIN_RATIO..=C10_MAX_RATIO).contains(&ratio_b);
    let pass = curvature_dev <= C10_CURVATURE_REL && second_order && control_failed;
    report(
        10,
        "geometry",
        pass,
        &format!(
            "kink patch: max |K + 1| {curvature_dev:.2e} vs {C10_CURVATURE_REL}; \
             residual halving ratios {ratio_a:.2}, {ratio_b:.2} (2nd order is about 4); \
             non-solution rejected: {control_failed}"
        ),
    );
    assert!(
        pass,
        "curvature {curvature_dev:.3e}, ratios {ratio_a:.2}/{ratio_b:.2}, control {control_failed}"
    );
}

#[test]
fn criterion_11_oscillation_bound() {
    let g_family = grid(1024);
    let mut min_osc = f64::INFINITY;
    let mut count = 0usize;
    for k in 1u32..=3 {
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            let w = sing_family_w(SingFamilyParams::new(k, r).unwrap(), g_family);
            min_osc = min_osc.min(w.oscillation());
            count += 1;
        }
    }

    let g_random = grid(256);
    let mut rng = SplitMix64::new(1111);
    for trial in 0..C11_RANDOM_SAMPLES {
        let base = random_band_limited(g_random, 5, 2.6, &mut rng);
        let start = WindingFunction::from_periodic(base);
        let projected = project_to_sing(&start, 60, 1e-10)
            .unwrap_or_else(|e| panic!("projection failed on trial {trial}: {e}"));
        assert!(
            moment_k(&projected).norm() <= RAMIFICATION_EPS,
            "trial {trial} not on the locus"
        );
        min_osc = min_osc.min(projected.oscillation());
        count += 1;
    }

    let pass = min_osc >= C11_OSC_FLOOR;
    report(
        11,
        "oscillation bound",
        pass,
        &format!(
            "{count} locus samples ({} family + {C11_RANDOM_SAMPLES} projected): \
             min oscillation {min_osc:.6} vs floor {C11_OSC_FLOOR:.6}",
            count - C11_RANDOM_SAMPLES
        ),
    );
    assert!(pass, "min oscillation {min_osc:.6}");
}
