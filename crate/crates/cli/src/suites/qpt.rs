use phasespace::operator::max_abs_diff;
use phasespace::{Instances, PhaseFunction, WeylSystem64};

use super::{max, min, Outcome};
use crate::config::RunConfig;
use crate::report::{Report, Rule};

/// Quantum positive type battery: characteristic functions of random states
/// pass the Gram and integral tests, constructed non-positive candidates
/// fail both, the state ↔ characteristic ↔ Wigner round trip is exact, and
/// classical × quantum characteristic products stay of quantum positive type.
pub fn qpt_check(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let w = WeylSystem64::new(cfg.d)?;
    let g = w.group();
    let d = cfg.d;
    let states = cfg.param_usize("states", 50)?;
    let candidates = cfg.param_usize("candidates", 50)?;
    let pairs = cfg.param_usize("pairs", 100)?;
    let trials = cfg.param_usize("qptf_trials", 200)?;
    let negative_mass = cfg.param_f64("negative_mass", 0.3)?;
    let mut inst = Instances::new(cfg.seed);
    let mut report = Report::new("qpt-check", cfg);

    let rhos: Vec<_> = (0..states).map(|_| inst.density::<f64>(d)).collect();
    let chis = rhos
        .iter()
        .map(|r| w.characteristic_function(r))
        .collect::<Result<Vec<_>, _>>()?;
    let inputs = format!("states={states}");

    report.check(cfg, "q3_min_eigenvalue_states", &inputs, 1e-10, Rule::AtLeastNegTol, || {
        let mut mins = Vec::new();
        for chi in &chis {
            mins.push(g.quantum_positive_type_full(chi)?.min_eigenvalue);
        }
        Ok(min(mins))
    })?;

    let qptf_tol = cfg.tolerance("qptf_integral_states", 1e-10);
    report.check(cfg, "qptf_integral_states", &format!("{inputs},trials={trials}"), 1e-10, Rule::AtLeastNegTol, || {
        let mut mins = Vec::new();
        for (i, chi) in chis.iter().enumerate() {
            mins.push(w.qptf_integral_check(chi, trials, cfg.seed.wrapping_add(i as u64))?);
        }
        Ok(min(mins))
    })?;

    let q3_tol = cfg.tolerance("q3_min_eigenvalue_states", 1e-10);
    report.check(
        cfg,
        "nonpositive_candidates_accepted",
        &format!("candidates={candidates},negative_mass={negative_mass},trials={trials}"),
        0.0,
        Rule::AbsAtMost,
        || {
            let mut accepted = 0usize;
            for i in 0..candidates {
                let a = inst.nonpositive_unit_trace::<f64>(d, negative_mass);
                let u = w.characteristic_of(&a)?;
                let q3 = g.quantum_positive_type_full(&u)?.min_eigenvalue;
                let integral = w.qptf_integral_check(&u, trials, cfg.seed.wrapping_add(1_000 + i as u64))?;
                if q3 >= -q3_tol || integral >= -qptf_tol {
                    accepted += 1;
                }
            }
            Ok(accepted as f64)
        },
    )?;

    report.check(cfg, "q4_roundtrip", &inputs, 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for (rho, chi) in rhos.iter().zip(&chis) {
            let wig = w.wigner_from_characteristic(chi);
            diffs.push(wig.max_abs_diff(&w.wigner_function(rho)?));
            let chi_back = w.characteristic_from_wigner(&wig);
            diffs.push(chi_back.max_abs_diff(chi));
            diffs.push(max_abs_diff(&w.operator_from_characteristic(&chi_back)?, rho.matrix()));
        }
        Ok(max(diffs))
    })?;

    let products: Vec<PhaseFunction<f64>> = (0..pairs)
        .map(|_| {
            let p = g.classical_characteristic(&inst.probability(d))?;
            let u = w.characteristic_function(&inst.density(d))?;
            p.pointwise_mul(&u)
        })
        .collect::<Result<_, _>>()?;
    let pair_inputs = format!("pairs={pairs}");

    report.check(cfg, "product_q3_min_eigenvalue", &pair_inputs, 1e-10, Rule::AtLeastNegTol, || {
        let mut mins = Vec::new();
        for u in &products {
            mins.push(g.quantum_positive_type_full(u)?.min_eigenvalue);
        }
        Ok(min(mins))
    })?;

    report.check(cfg, "product_normalization", &pair_inputs, 1e-10, Rule::AbsAtMost, || {
        Ok(max(products.iter().map(|u| (u.origin() - 1.0).norm())))
    })?;

    Ok(Outcome::report_only(report))
}
