use phasespace::io::{write_trajectory_csv, SemigroupSpec, TrajectoryRow};
use phasespace::semigroup::{von_neumann_entropy, ClassicalQuantumSemigroup, MeasureSemigroup};
use phasespace::{Instances, WeylSystem64};

use super::{max, min, Outcome};
use crate::config::RunConfig;
use crate::report::{Report, Rule};

/// Evolves a seeded random state under the twirling semigroup of a
/// compound-Poisson measure semigroup and writes the trajectory CSV
/// (`t, entropy, purity, intertwining_defect`).
///
/// The semigroup comes from the `spec` parameter (a JSON file path) or
/// defaults to uniform jumps at `rate` (default 1) on `Z_d × Z_d`.
pub fn semigroup_run(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let spec = match cfg.param_str("spec")? {
        Some(path) => phasespace::io::read_semigroup_spec(path)?,
        None => SemigroupSpec::uniform(cfg.d, cfg.param_f64("rate", 1.0)?),
    };
    let w = WeylSystem64::new(spec.d)?;
    let g = w.group().clone();
    let jump = spec.jump(&g)?;
    let base = MeasureSemigroup::compound_poisson(g, jump, spec.rate)?;
    let cq = ClassicalQuantumSemigroup::new(base.clone(), &cfg.t_grid)?;

    let mut inst = Instances::new(cfg.seed);
    let rho0 = inst.density::<f64>(spec.d);
    let u0 = w.characteristic_function(&rho0)?;

    let mut rows = Vec::with_capacity(cfg.t_grid.len());
    let mut choi_min = Vec::new();
    let mut tp_defects = Vec::new();
    for &t in &cfg.t_grid {
        let channel = base.channel_at(&w, t)?;
        let rho_t = channel.twirl_apply(&rho0)?;
        let choi = channel.choi_check();
        choi_min.push(choi.min_eigenvalue);
        tp_defects.push(choi.trace_preserving_defect);
        rows.push(TrajectoryRow {
            t,
            entropy: von_neumann_entropy(&rho_t),
            purity: rho_t.purity(),
            intertwining_defect: cq.intertwining_defect(&w, t, &u0)?,
        });
    }

    let mut report = Report::new("semigroup-run", cfg);
    let inputs = format!("d={},rate={},times={:?}", spec.d, spec.rate, cfg.t_grid);
    report.check(cfg, "intertwining", &inputs, 1e-10, Rule::AbsAtMost, || {
        Ok(max(rows.iter().map(|r| r.intertwining_defect)))
    })?;
    // entropy must not decrease along increasing times
    report.check(cfg, "entropy_nondecreasing", &inputs, 1e-10, Rule::AtLeastNegTol, || {
        let mut order: Vec<_> = rows.iter().collect();
        order.sort_by(|a, b| a.t.total_cmp(&b.t));
        Ok(min(order.windows(2).map(|p| p[1].entropy - p[0].entropy)).min(0.0))
    })?;
    report.check(cfg, "choi_min_eigenvalue", &inputs, 1e-10, Rule::AtLeastNegTol, || Ok(min(choi_min)))?;
    report.check(cfg, "trace_preservation", &inputs, 1e-10, Rule::AbsAtMost, || Ok(max(tp_defects)))?;

    let mut csv = Vec::new();
    write_trajectory_csv(&mut csv, &rows)?;
    Ok(Outcome {
        report,
        primary: Some(csv),
        extras: Vec::new(),
    })
}
