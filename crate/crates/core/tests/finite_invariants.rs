use phasespace::operator::{hs_norm, max_abs_diff, trace};
use phasespace::semigroup::{von_neumann_entropy, MeasureSemigroup};
use phasespace::{GroupMeasure, Instances, PhasePoint, StarMode, WeylSystem64};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![3usize, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn displacement_composition(d in dims(), a in 0usize..49, b in 0usize..49) {
        let w = WeylSystem64::new(d).unwrap();
        let g = w.group();
        let (z, v) = (g.point(a % (d * d)), g.point(b % (d * d)));
        let lhs = w.displacement(g.add(z, v));
        let rhs = (w.displacement(z) * w.displacement(v)) * g.multiplier(z, v).unwrap();
        prop_assert!(max_abs_diff(lhs, &rhs) < 1e-12);
    }

    #[test]
    fn quantization_roundtrip(d in dims(), seed in any::<u64>()) {
        let w = WeylSystem64::new(d).unwrap();
        let a = Instances::new(seed).operator::<f64>(d, d);
        let f = w.dequantize(&a).unwrap();
        prop_assert!((f.norm() - hs_norm(&a)).abs() < 1e-10);
        prop_assert!(max_abs_diff(&w.quantize(&f).unwrap(), &a) < 1e-12);
    }

    #[test]
    fn star_modes_agree_and_associate(d in dims(), seed in any::<u64>()) {
        let w = WeylSystem64::new(d).unwrap();
        let mut inst = Instances::new(seed);
        let (f1, f2, f3) = (inst.phase_function(d), inst.phase_function(d), inst.phase_function(d));
        let base = w.star_product(&f1, &f2, StarMode::ViaOperators).unwrap();
        for m in StarMode::ALL {
            prop_assert!(w.star_product(&f1, &f2, m).unwrap().max_abs_diff(&base) < 1e-10);
        }
        let m = StarMode::TwistedConvolution;
        let left = w.star_product(&w.star_product(&f1, &f2, m).unwrap(), &f3, m).unwrap();
        let right = w.star_product(&f1, &w.star_product(&f2, &f3, m).unwrap(), m).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-10);
    }

    #[test]
    fn states_are_of_quantum_positive_type(d in dims(), seed in any::<u64>()) {
        let w = WeylSystem64::new(d).unwrap();
        let rho = Instances::new(seed).density::<f64>(d);
        let chi = w.characteristic_function(&rho).unwrap();
        prop_assert!((chi.origin().re - 1.0).abs() < 1e-12);
        prop_assert!(w.group().quantum_positive_type_full(&chi).unwrap().psd);
    }

    #[test]
    fn twirling_is_unital_trace_preserving_and_entropy_increasing(
        d in prop::sample::select(vec![3usize, 5]),
        seed in any::<u64>(),
        t in 0.0f64..3.0,
        dt in 0.0f64..1.0,
    ) {
        let w = WeylSystem64::new(d).unwrap();
        let mut inst = Instances::new(seed);
        let semi = MeasureSemigroup::compound_poisson(w.group().clone(), inst.probability(d), 1.0).unwrap();
        let rho = inst.density::<f64>(d);
        let early = semi.channel_at(&w, t).unwrap().twirl_apply(&rho).unwrap();
        let late = semi.channel_at(&w, t + dt).unwrap().twirl_apply(&rho).unwrap();
        prop_assert!((trace(early.matrix()).re - 1.0).abs() < 1e-12);
        prop_assert!(von_neumann_entropy(&late) >= von_neumann_entropy(&early) - 1e-10);
    }

    #[test]
    fn measure_semigroup_law(seed in any::<u64>(), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let w = WeylSystem64::new(3).unwrap();
        let g = w.group().clone();
        let semi = MeasureSemigroup::compound_poisson(g.clone(), Instances::new(seed).probability(3), 0.7).unwrap();
        let composed = semi.measure_at(s).unwrap().convolve(&semi.measure_at(t).unwrap(), &g).unwrap();
        prop_assert!(composed.max_abs_diff(&semi.measure_at(s + t).unwrap()) < 1e-10);
    }
}

#[test]
fn point_mass_semigroup_at_zero_is_identity() {
    let w = WeylSystem64::new(5).unwrap();
    let g = w.group().clone();
    let jump = GroupMeasure::point_mass(&g, PhasePoint::new(1, 2));
    let semi = MeasureSemigroup::compound_poisson(g.clone(), jump, 2.0).unwrap();
    let m0 = semi.measure_at(0.0).unwrap();
    assert!(m0.max_abs_diff(&GroupMeasure::point_mass(&g, PhasePoint::ORIGIN)) < 1e-15);
}

#[test]
fn single_precision_instantiation() {
    let w = phasespace::WeylSystem32::new(5).unwrap();
    let rho = Instances::new(3).density::<f32>(5);
    let chi = w.characteristic_function(&rho).unwrap();
    let back = w.operator_from_characteristic(&chi).unwrap();
    assert!(max_abs_diff(&back, rho.matrix()) < 1e-5);
    assert!(w.group().quantum_positive_type_full(&chi).unwrap().psd);
}
