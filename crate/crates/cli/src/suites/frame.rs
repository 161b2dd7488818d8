use phasespace::operator::{inner, max_abs_diff, vector_norm};
use phasespace::{Complex, Instances, WeylSystem64};

use super::{max, Outcome};
use crate::config::RunConfig;
use crate::report::{Report, Rule};

const TRIALS: usize = 20;

/// Orthogonality relations, resolution of the identity, reproducing kernel,
/// intertwining and irreducibility of the Weyl system at `cfg.d`.
pub fn frame_check(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let w = WeylSystem64::new(cfg.d)?;
    let g = w.group();
    let d = cfg.d;
    let mut inst = Instances::new(cfg.seed);
    let mut report = Report::new("frame-check", cfg);

    report.check(cfg, "multiplier_cocycle", "exhaustive", 1e-12, Rule::AbsAtMost, || {
        let pts: Vec<_> = g.points().collect();
        let mut worst: f64 = 0.0;
        for &x in &pts {
            for &y in &pts {
                let mxy = g.multiplier(x, y)?;
                for &z in &pts {
                    let lhs = mxy * g.multiplier(g.add(x, y), z)?;
                    let rhs = g.multiplier(x, g.add(y, z))? * g.multiplier(y, z)?;
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        Ok(worst)
    })?;

    report.check(cfg, "orthogonality", &format!("tuples={TRIALS}"), 1e-10, Rule::AbsAtMost, || {
        let mut defects = Vec::new();
        for _ in 0..TRIALS {
            let (p1, p2, f1, f2) = (
                inst.gaussian_vector(d),
                inst.gaussian_vector(d),
                inst.gaussian_vector(d),
                inst.gaussian_vector(d),
            );
            let c1 = w.coefficient(&p1, &f1)?;
            let c2 = w.coefficient(&p2, &f2)?;
            let lhs = c1.inner(&c2);
            let rhs = inner(&f1, &f2) * inner(&p2, &p1) * d as f64;
            let scale = vector_norm(&p1) * vector_norm(&p2) * vector_norm(&f1) * vector_norm(&f2);
            defects.push((lhs - rhs).norm() / scale);
        }
        Ok(max(defects))
    })?;

    report.check(cfg, "resolution_of_identity", &format!("vectors={TRIALS}"), 1e-12, Rule::AbsAtMost, || {
        let mut defects = Vec::new();
        for _ in 0..TRIALS {
            defects.push(w.resolution_of_identity_defect(&inst.state_vector(d))?);
        }
        Ok(max(defects))
    })?;

    report.check(cfg, "reproducing_kernel_projector", "vectors=5", 1e-10, Rule::AbsAtMost, || {
        let mut defects = Vec::new();
        for _ in 0..5 {
            let p = w.reproducing_kernel_projector(&inst.state_vector(d))?;
            let idem = max_abs_diff(&(&p * &p), &p);
            let herm = max_abs_diff(&p.adjoint(), &p);
            let rank = (p.trace() - Complex::new(d as f64, 0.0)).norm();
            defects.extend([idem, herm, rank]);
        }
        Ok(max(defects))
    })?;

    report.check(cfg, "left_regular_intertwining", "pairs=5", 1e-10, Rule::AbsAtMost, || {
        let mut defects = Vec::new();
        for _ in 0..5 {
            let psi = inst.state_vector(d);
            let phi = inst.gaussian_vector(d);
            let z = g.point(inst.index(d * d));
            let lhs = w.wavelet_transform(&psi, &w.apply(z, &phi))?;
            let rhs = w.left_regular(z, &w.wavelet_transform(&psi, &phi)?)?;
            defects.push(lhs.max_abs_diff(&rhs));
        }
        Ok(max(defects))
    })?;

    report.check(cfg, "commutant_dimension_excess", "svd", 0.0, Rule::AbsAtMost, || {
        Ok(w.commutant_dimension() as f64 - 1.0)
    })?;

    Ok(Outcome::report_only(report))
}
