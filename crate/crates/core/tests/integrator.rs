use std::sync::Arc;

use num_complex::Complex64;
use slowlight_core::analytic::{fwhm, AnalyticSoliton};
use slowlight_core::integrator::*;
use slowlight_core::{make_medium_params, ControlSchedule, Error, MediumParams, SolitonConfig};

const ZETA_MAX: f64 = 2.0;
const TAU_MAX: f64 = 40.0;

fn unit_medium(gamma: f64) -> MediumParams {
    make_medium_params(8.0, gamma, 0.0, 1.0).unwrap()
}

fn injected(gamma: f64) -> AnalyticSoliton {
    let m = unit_medium(gamma);
    let cfg = SolitonConfig::new(-3.0 * fwhm(&m), m, ControlSchedule::constant(1.0).unwrap());
    AnalyticSoliton::new(cfg, TAU_MAX).unwrap()
}

fn soliton_plan(s: &AnalyticSoliton, n_zeta: usize, n_tau: usize, dressed: bool) -> SimulationPlan {
    let init = if dressed { InitialAtoms::Dressed(Box::new(s.clone())) } else { InitialAtoms::Ground };
    let grid = GridSpec { n_zeta, n_tau, zeta_max: ZETA_MAX, tau_max: TAU_MAX };
    SimulationPlan::new(s.config().medium, grid, Boundary::Soliton(s.clone()), init).unwrap()
}

fn small_grid() -> GridSpec {
    GridSpec { n_zeta: 64, n_tau: 128, zeta_max: 1.0, tau_max: 10.0 }
}

#[test]
fn zero_fields_and_ground_atoms_stay_put() {
    let boundary = Boundary::Constant { omega_a: Complex64::new(0.0, 0.0), omega_b: Complex64::new(0.0, 0.0) };
    let plan = SimulationPlan::new(unit_medium(0.3), small_grid(), boundary, InitialAtoms::Ground).unwrap();
    let (f, a) = simulate(&plan).unwrap();
    assert!(f.omega_a.iter().chain(f.omega_b.iter()).all(|z| *z == Complex64::new(0.0, 0.0)));
    let (nz, nt) = a.dim();
    for i in 0..nz {
        for j in 0..nt {
            assert_eq!(a.state(i, j), AtomState::ground());
        }
    }
    let r = transformed_residuals(&f, &a, &plan.medium, PSI3_FLOOR).unwrap();
    assert_eq!(r.max_probe, 0.0);
    assert_eq!(r.max_control, 0.0);
    assert_eq!(r.max_population, 0.0);
    assert_eq!(r.masked_fraction, 1.0);
}

#[test]
fn control_field_leaves_dark_state_stationary() {
    let omega0 = 1.7;
    let m = unit_medium(0.5);
    let plan = SimulationPlan::new(m, small_grid(), Boundary::control_only(omega0), InitialAtoms::Ground).unwrap();
    let (f, a) = simulate(&plan).unwrap();
    assert!(f.omega_a.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    assert!(f.omega_b.iter().all(|z| *z == Complex64::new(omega0, 0.0)));
    assert!(a.psi3.iter().all(|z| *z == Complex64::new(0.0, 0.0)));
    assert!(a.psi1.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    assert!(norm_decay_residual(&a, m.gamma(), f.dtau()).max <= 1e-10);
}

#[test]
fn boundary_column_is_exact() {
    let s = injected(0.0);
    let plan = soliton_plan(&s, 32, 256, false);
    let (f, _) = simulate(&plan).unwrap();
    for (j, &tau) in f.taus.iter().enumerate() {
        let (oa, ob) = plan.boundary.eval(tau).unwrap();
        assert_eq!(f.omega_a[[0, j]], oa);
        assert_eq!(f.omega_b[[0, j]], ob);
    }
}

#[test]
fn lossless_soliton_matches_closed_form_at_second_order() {
    let s = injected(0.0);
    let errors: Vec<f64> = [128, 256, 512]
        .iter()
        .map(|&nz| {
            let (f, _) = simulate(&soliton_plan(&s, nz, 1024, true)).unwrap();
            let e = compare_to_analytic(&f, &s, WindowPolicy::default()).unwrap();
            assert_eq!(e.global_linf, e.in_window_linf.max(e.out_window_linf));
            e.global_linf
        })
        .collect();
    assert!(errors[2] < 1e-3, "{errors:?}");
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((3.2..=5.0).contains(&ratio), "{errors:?}");
    }
}

#[test]
fn ground_state_injection_is_limited_by_the_initial_tail() {
    let s = injected(0.0);
    let (f, _) = simulate(&soliton_plan(&s, 512, 1024, false)).unwrap();
    let e = compare_to_analytic(&f, &s, WindowPolicy::default()).unwrap();
    // The pulse tail at ζ = 0, τ = 0 is 2ε₀ sech(3·acosh 2·2)/√2.
    let tail = 2.0 * (12.0f64 * 2.0f64.acosh() / 2.0).cosh().recip() / 2.0f64.sqrt();
    let peak = 2.0 / 2.0f64.sqrt();
    assert!(e.global_linf < 1e-3);
    assert!(e.global_linf > 0.5 * tail / peak);
}

#[test]
fn norm_is_conserved_without_relaxation() {
    let s = injected(0.0);
    let (f, a) = simulate(&soliton_plan(&s, 256, 1024, true)).unwrap();
    let r = norm_decay_residual(&a, 0.0, f.dtau());
    assert!(r.max <= 1e-8, "{r:?}");
}

#[test]
fn norm_decay_law_converges_in_tau() {
    let s = injected(0.2);
    let residuals: Vec<f64> = [256, 512, 1024]
        .iter()
        .map(|&nt| {
            let (f, a) = simulate(&soliton_plan(&s, 128, nt, true)).unwrap();
            norm_decay_residual(&a, 0.2, f.dtau()).max
        })
        .collect();
    for w in residuals.windows(2) {
        assert!(w[0] / w[1] >= 3.5, "{residuals:?}");
    }
}

#[test]
fn transformed_residuals_shrink_at_second_order() {
    let s = injected(0.0);
    let m = s.config().medium;
    let runs: Vec<TransformedResiduals> = [(128, 256), (256, 512), (512, 1024)]
        .iter()
        .map(|&(nz, nt)| {
            let (f, a) = simulate(&soliton_plan(&s, nz, nt, true)).unwrap();
            transformed_residuals(&f, &a, &m, PSI3_FLOOR).unwrap()
        })
        .collect();
    let last = runs.last().unwrap();
    assert!(last.max_probe <= 1e-2 && last.max_population <= 1e-2);
    assert_eq!(last.masked_fraction, 0.0);
    for w in runs.windows(2) {
        assert!(w[0].max_probe / w[1].max_probe >= 3.5);
        assert!(w[0].max_control / w[1].max_control >= 3.5);
        assert!(w[0].max_population / w[1].max_population >= 3.5);
    }
}

#[test]
fn population_residual_agrees_with_direct_differencing() {
    let s = injected(0.4);
    let m = s.config().medium;
    let (f, a) = simulate(&soliton_plan(&s, 128, 512, true)).unwrap();
    let r = transformed_residuals(&f, &a, &m, PSI3_FLOOR).unwrap();

    let (nz, nt) = a.dim();
    let (dz, dt) = (f.dzeta(), f.dtau());
    let pop = |i: usize, j: usize| a.psi3[[i, j]].norm_sqr();
    let flux = |i: usize, j: usize| f.omega_a[[i, j]].norm_sqr() + f.omega_b[[i, j]].norm_sqr();
    let mut raw = vec![0.0; nz * nt];
    let mut scale = 0.0f64;
    for i in 1..nz - 1 {
        for j in 1..nt - 1 {
            let t = (pop(i, j + 1) - pop(i, j - 1)) / (2.0 * dt);
            let d = (flux(i + 1, j) - flux(i - 1, j)) / (2.0 * dz) / (2.0 * m.nu0());
            let g = m.gamma() * pop(i, j);
            raw[i * nt + j] = (t + g + d).abs();
            scale = scale.max(t.abs() + g + d.abs());
        }
    }
    for i in 1..nz - 1 {
        for j in 1..nt - 1 {
            let expected = raw[i * nt + j] / scale;
            assert!((r.population[[i, j]] - expected).abs() <= 1e-12);
        }
    }
    assert!(r.max_population < 5e-2);
}

#[test]
fn probe_phase_is_a_gauge_freedom() {
    let s = injected(0.0);
    let theta = 0.9;
    let rot = Complex64::from_polar(1.0, theta);
    let base = soliton_plan(&s, 128, 256, true);

    let sb = s.clone();
    let boundary = Boundary::Custom(Arc::new(move |tau| {
        let f = sb.fields(tau, 0.0).unwrap();
        (rot * f.omega_a, Complex64::new(f.omega_b, 0.0))
    }));
    let sa = s.clone();
    let atoms = InitialAtoms::Custom(Arc::new(move |zeta| {
        let st = soliton_atom_state(&sa, 0.0, zeta).unwrap();
        AtomState { psi1: st.psi1, psi2: rot * st.psi2, psi3: rot * st.psi3 }
    }));
    let rotated = SimulationPlan::new(base.medium, base.grid, boundary, atoms).unwrap();

    let (f0, a0) = simulate(&base).unwrap();
    let (f1, a1) = simulate(&rotated).unwrap();
    let close = |x: Complex64, y: Complex64| (x - y).norm() <= 1e-10 * (1.0 + y.norm());
    for ((i, j), &v) in f1.omega_a.indexed_iter() {
        assert!(close(v, rot * f0.omega_a[[i, j]]));
        assert!(close(f1.omega_b[[i, j]], f0.omega_b[[i, j]]));
        assert!(close(a1.psi1[[i, j]], a0.psi1[[i, j]]));
        assert!(close(a1.psi2[[i, j]], rot * a0.psi2[[i, j]]));
        assert!(close(a1.psi3[[i, j]], rot * a0.psi3[[i, j]]));
    }
}

#[test]
fn identical_plans_give_identical_grids() {
    let s = injected(0.3);
    let plan = soliton_plan(&s, 64, 256, false);
    let (f0, a0) = simulate(&plan).unwrap();
    let (f1, a1) = simulate(&plan).unwrap();
    assert_eq!(f0, f1);
    assert_eq!(a0.psi1, a1.psi1);
    assert_eq!(a0.psi2, a1.psi2);
    assert_eq!(a0.psi3, a1.psi3);
}

#[test]
fn non_finite_boundary_is_a_numeric_error() {
    let boundary = Boundary::Custom(Arc::new(|tau| {
        let a = if tau > 5.0 { f64::NAN } else { 0.1 };
        (Complex64::new(a, 0.0), Complex64::new(1.0, 0.0))
    }));
    let plan = SimulationPlan::new(unit_medium(0.0), small_grid(), boundary, InitialAtoms::Ground).unwrap();
    assert!(matches!(simulate(&plan), Err(Error::Numeric { .. })));
}

#[test]
fn inverted_medium_runs_away() {
    let m = make_medium_params(800.0, 0.0, 0.0, 1.0).unwrap();
    let excited = InitialAtoms::Custom(Arc::new(|_| AtomState {
        psi1: Complex64::new(0.0, 0.0),
        psi2: Complex64::new(0.0, 0.0),
        psi3: Complex64::new(1.0, 0.0),
    }));
    let boundary = Boundary::Constant { omega_a: Complex64::new(0.01, 0.0), omega_b: Complex64::new(0.0, 0.0) };
    let plan = SimulationPlan::new(m, small_grid(), boundary, excited).unwrap();
    match simulate(&plan) {
        Err(Error::Diverged { magnitude, limit, .. }) => assert!(magnitude > limit),
        other => panic!("expected divergence, got {other:?}"),
    }
}

#[test]
fn plan_rejects_tiny_grids() {
    let grid = GridSpec { n_zeta: 4, ..small_grid() };
    let r = SimulationPlan::new(unit_medium(0.0), grid, Boundary::control_only(1.0), InitialAtoms::Ground);
    assert!(matches!(r, Err(Error::InvalidParameter { .. })));
}
