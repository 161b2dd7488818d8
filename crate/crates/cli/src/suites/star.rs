use phasespace::operator::hs_inner;
use phasespace::{Instances, StarMode, WeylSystem64};

use super::{max, Outcome};
use crate::config::RunConfig;
use crate::report::{Report, Rule};

/// Star products in all three formulations, their agreement and
/// associativity, the H*-algebra identity, and the isometry/adjointness of
/// dequantization. Dumps `f₁ ⋆ f₂` of the first triple as `<stem>.star.json`.
pub fn star_demo(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let w = WeylSystem64::new(cfg.d)?;
    let d = cfg.d;
    let trials = cfg.param_usize("trials", 10)?;
    let operators = cfg.param_usize("operators", 50)?;
    let mut inst = Instances::new(cfg.seed);
    let mut report = Report::new("star-demo", cfg);

    let triples: Vec<_> = (0..trials)
        .map(|_| (inst.phase_function(d), inst.phase_function(d), inst.phase_function(d)))
        .collect();
    let inputs = format!("triples={trials}");

    report.check(cfg, "star_mode_agreement", &inputs, 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for (f1, f2, _) in &triples {
            let products = StarMode::ALL
                .iter()
                .map(|&m| w.star_product(f1, f2, m))
                .collect::<Result<Vec<_>, _>>()?;
            for a in &products {
                for b in &products {
                    diffs.push(a.max_abs_diff(b));
                }
            }
        }
        Ok(max(diffs))
    })?;

    report.check(cfg, "star_associativity", &inputs, 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for (f1, f2, f3) in &triples {
            for m in StarMode::ALL {
                let left = w.star_product(&w.star_product(f1, f2, m)?, f3, m)?;
                let right = w.star_product(f1, &w.star_product(f2, f3, m)?, m)?;
                diffs.push(left.max_abs_diff(&right));
            }
        }
        Ok(max(diffs))
    })?;

    report.check(cfg, "hstar_identity", &inputs, 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for (f1, f2, f3) in &triples {
            let m = StarMode::TwistedConvolution;
            let lhs = w.star_product(f1, f2, m)?.inner(f3);
            let rhs = f2.inner(&w.star_product(&f1.involution(), f3, m)?);
            diffs.push((lhs - rhs).norm());
        }
        Ok(max(diffs))
    })?;

    let pairs: Vec<_> = (0..operators)
        .map(|_| (inst.operator(d, d), inst.operator(d, d), inst.phase_function(d)))
        .collect();
    let op_inputs = format!("operators={operators}");

    report.check(cfg, "dequantization_isometry", &op_inputs, 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for (a, b, _) in &pairs {
            let lhs = w.dequantize(a)?.inner(&w.dequantize(b)?);
            diffs.push((lhs - hs_inner(a, b)).norm());
        }
        Ok(max(diffs))
    })?;

    report.check(cfg, "dequantization_adjoint", &op_inputs, 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for (a, _, f) in &pairs {
            let lhs = w.dequantize(a)?.inner(f);
            let rhs = hs_inner(a, &w.quantize(f)?);
            diffs.push((lhs - rhs).norm());
        }
        Ok(max(diffs))
    })?;

    let mut extras = Vec::new();
    if let Some((f1, f2, _)) = triples.first() {
        let product = w.star_product(f1, f2, StarMode::TwistedConvolution)?;
        let doc = phasespace::io::PhaseFunctionDoc::from_function(&product);
        let mut bytes = serde_json::to_vec_pretty(&doc)?;
        bytes.push(b'\n');
        extras.push(("star.json", bytes));
    }
    Ok(Outcome {
        report,
        primary: None,
        extras,
    })
}
