use phasespace::affine::{
    admissibility_constant, cwt, cwt_on_sample_grid, fixtures, isometry_ratio, log_scales, AffinePoint, ReferenceGrid,
};
use phasespace::fock::{coherent_state, displacement_fock, lower_block, resolution_defect_quadrature};
use phasespace::operator::max_abs_diff;
use phasespace::{Complex, ContinuousPoint, FockSpace, Morlet, Wavelet};
use proptest::prelude::*;

/// Worst unitarity defect on the trusted block over the trusted disk is
/// ~9e-9 at N = 40, reached on the rim (see `examples/cal_unitarity.rs`).
const UNITARITY_TOL: f64 = 1e-7;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn displacement_is_unitary_on_trusted_block(r in 0.0f64..=1.0, theta in 0.0f64..std::f64::consts::TAU) {
        let space = FockSpace::new(40).unwrap();
        let radius = r * space.trusted_radius::<f64>();
        let d = displacement_fock(&ContinuousPoint::new(radius * theta.cos(), radius * theta.sin()), &space, 0.0);
        let k = space.trusted_block();
        let id = phasespace::Operator::<f64>::identity(k, k);
        prop_assert!(max_abs_diff(&lower_block(&(d.adjoint() * &d), k), &id) < UNITARITY_TOL);
    }

    #[test]
    fn wavelet_coefficients_are_covariant(b0 in -2.0f64..2.0, shift in -40i32..40) {
        // translating the signal by whole samples translates the coefficients
        let phi = fixtures::chirp::<f64>(512, 0.05).unwrap();
        let psi = Morlet::<f64>::default();
        let shifted_phi = phasespace::SampledSignal::from_fn(512, 0.05, |x| {
            phi.time(x - shift as f64 * 0.05)
        }).unwrap();
        let b = b0 + shift as f64 * 0.05;
        let original = cwt(&phi, &psi, &[0.7], &[b0]).unwrap().at(0, 0);
        let moved = cwt(&shifted_phi, &psi, &[0.7], &[b]).unwrap().at(0, 0);
        prop_assert!((original - moved).norm() < 1e-6);
    }
}

#[test]
fn quadrature_improves_with_radius() {
    let space = FockSpace::new(40).unwrap();
    let small = resolution_defect_quadrature::<f64>(&space, 2.0, 100, 10).unwrap();
    let large = resolution_defect_quadrature::<f64>(&space, 6.0, 100, 10).unwrap();
    assert!(large < small);
}

#[test]
fn coherent_states_in_single_precision() {
    let space = FockSpace::new(30).unwrap();
    let v = coherent_state(&ContinuousPoint::<f32>::new(1.0, -0.5), &space);
    let n: f32 = v.iter().map(|c| c.norm_sqr()).sum();
    assert!((n - 1.0).abs() < 1e-5);
}

#[test]
fn isometry_improves_under_scale_refinement() {
    let g = ReferenceGrid::<f64>::default();
    let phi = fixtures::chirp::<f64>(g.samples, g.dt).unwrap();
    let psi = Morlet::<f64>::default();
    let errors: Vec<f64> = [9, 17, 33, 97]
        .iter()
        .map(|&n| (isometry_ratio(&phi, &psi, &log_scales(0.125, 8.0, n).unwrap()).unwrap() - 1.0).abs())
        .collect();
    assert!(errors.windows(2).all(|w| w[1] <= w[0]), "{errors:?}");
}

#[test]
fn sampled_wavelet_matches_closed_form_wavelet() {
    let g = ReferenceGrid::<f64>::default();
    let phi = fixtures::chirp::<f64>(512, g.dt).unwrap();
    let psi = Morlet::<f64>::default();
    let sampled = psi.sample(1024, g.dt).unwrap();
    assert!((admissibility_constant(&sampled) - phasespace::affine::duflo_moore_norm_squared(&psi)).abs() < 1e-8);
    let scales = [0.5, 1.0, 2.0];
    let a = cwt_on_sample_grid(&phi, &psi, &scales).unwrap();
    let b = cwt_on_sample_grid(&phi, &sampled, &scales).unwrap();
    let diff = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(diff < 1e-8, "{diff}");
}

#[test]
fn affine_action_preserves_norm() {
    let psi = Morlet::<f64>::default();
    for (b, a) in [(0.0, 1.0), (1.5, 0.5), (-3.0, 2.5)] {
        let s = AffinePoint::new(b, a).unwrap().apply_sampled(&psi, 4096, 0.02).unwrap();
        assert!((s.energy() - 1.0).abs() < 1e-9);
    }
    let z: Complex<f64> = psi.spectrum(6.0);
    assert!(z.im == 0.0 && z.re > 0.0);
}
