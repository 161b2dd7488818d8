use phasespace::operator::{hermitian_asymmetry, max_abs_diff, min_eigenvalue, trace};
use phasespace::products::{lie, TwirledAlgebra};
use phasespace::{Complex, DensityOperator, Instances, WeylSystem64};

use super::{max, min, Outcome};
use crate::config::RunConfig;
use crate::report::{Report, Rule};

/// Products of states: `tr(ρσ) = 1` exactly for equal pure states, the Lie
/// product is traceless, and the twirled product is state-preserving,
/// associative and induces probability measures.
pub fn twirl_product(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let w = WeylSystem64::new(cfg.d)?;
    let d = cfg.d;
    let triples = cfg.param_usize("triples", 200)?;
    let families = cfg.param_usize("families", 20)?;
    let mut inst = Instances::new(cfg.seed);
    let mut report = Report::new("twirl-product", cfg);
    let fam = format!("families={families}");

    report.check(cfg, "trace_product_equal_pure", &fam, 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for _ in 0..families {
            let rho = inst.pure_density::<f64>(d);
            diffs.push((trace(&(rho.matrix() * rho.matrix())).re - 1.0).abs());
        }
        Ok(max(diffs))
    })?;

    // converse direction: distinct or mixed pairs stay strictly below one
    report.check(cfg, "trace_product_one_when_distinct", &fam, 0.0, Rule::AbsAtMost, || {
        let mut hits = 0usize;
        for k in 0..families {
            let psi = inst.state_vector::<f64>(d);
            let rho = DensityOperator::pure(&psi)?;
            let sigma = match k % 3 {
                0 => inst.pure_density::<f64>(d),
                1 => inst.density::<f64>(d),
                // a nearby but different pure state
                _ => {
                    let near = (&psi + inst.state_vector::<f64>(d) * Complex::new(0.05, 0.0)).normalize();
                    DensityOperator::pure(&near)?
                }
            };
            let distinct = max_abs_diff(rho.matrix(), sigma.matrix()) > 1e-6;
            let t = trace(&(rho.matrix() * sigma.matrix())).re;
            if distinct && t >= 1.0 - 1e-10 {
                hits += 1;
            }
        }
        Ok(hits as f64)
    })?;

    report.check(cfg, "lie_product_trace", &fam, 1e-10, Rule::AbsAtMost, || {
        let mut traces = Vec::new();
        for _ in 0..families {
            let (a, b) = (inst.density::<f64>(d), inst.density::<f64>(d));
            traces.push(trace(&lie(a.matrix(), b.matrix())?).norm());
        }
        Ok(max(traces))
    })?;

    let fiducial = inst.density::<f64>(d);
    let alg = TwirledAlgebra::new(&w, fiducial)?;
    let states: Vec<_> = (0..triples)
        .map(|_| (inst.density::<f64>(d), inst.density::<f64>(d), inst.density::<f64>(d)))
        .collect();
    let tri = format!("triples={triples}");

    let mut min_eigs = Vec::new();
    let mut trace_defects = Vec::new();
    let mut assoc = Vec::new();
    let mut measure_min = Vec::new();
    let mut measure_sum = Vec::new();
    for (a, b, c) in &states {
        let (a, b, c) = (a.matrix(), b.matrix(), c.matrix());
        let ab = alg.twirled_product(a, b)?;
        let bc = alg.twirled_product(b, c)?;
        for p in [&ab, &bc] {
            min_eigs.push(min_eigenvalue(p));
            trace_defects.push((trace(p) - 1.0).norm().max(hermitian_asymmetry(p)));
        }
        let left = alg.twirled_product(&ab, c)?;
        let right = alg.twirled_product(a, &bc)?;
        assoc.push(max_abs_diff(&left, &right));
        let mu = alg.induced_measure(a)?;
        measure_min.push(min(mu.values().iter().map(|v| v.re)));
        measure_sum.push(
            (mu.values().iter().fold(Complex::new(0.0, 0.0), |s, v| s + v) - 1.0).norm()
                + mu.max_imag(),
        );
    }
    report.check(cfg, "twirled_min_eigenvalue", &tri, 1e-10, Rule::AtLeastNegTol, || Ok(min(min_eigs)))?;
    report.check(cfg, "twirled_trace_defect", &tri, 1e-10, Rule::AbsAtMost, || Ok(max(trace_defects)))?;
    report.check(cfg, "twirled_associativity", &tri, 1e-10, Rule::AbsAtMost, || Ok(max(assoc)))?;
    report.check(cfg, "induced_measure_min", &tri, 1e-10, Rule::AtLeastNegTol, || Ok(min(measure_min)))?;
    report.check(cfg, "induced_measure_normalization", &tri, 1e-10, Rule::AbsAtMost, || Ok(max(measure_sum)))?;

    Ok(Outcome::report_only(report))
}
