use phasespace::fock::{
    characteristic_fock, coherent_overlap_exact, coherent_state, continuous_multiplier, displacement_fock,
    fock_quantum_positive_type, lower_block, resolution_defect_quadrature,
};
use phasespace::io::write_grid_csv;
use phasespace::operator::{inner, max_abs_diff, vector_norm};
use phasespace::{Complex, ContinuousPoint, DensityOperator, FockSpace, Instances};

use super::{max, Outcome};
use crate::config::RunConfig;
use crate::report::{Report, Rule};

type Point = ContinuousPoint<f64>;

fn disk_point(inst: &mut Instances, radius: f64) -> Point {
    let r = radius * inst.uniform().sqrt();
    let th = std::f64::consts::TAU * inst.uniform();
    ContinuousPoint::from_alpha(Complex::new(r * th.cos(), r * th.sin()))
}

/// Truncated Fock backend: coherent states, displacements, the vacuum
/// characteristic function, the quadrature resolution of the identity and
/// the continuum Gram test. Writes the vacuum characteristic function on a
/// `(q, p)` grid as `<stem>.grid.csv`.
pub fn fock_demo(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let space = FockSpace::new(cfg.param_usize("fock_n", 60)?)?;
    let quad_space = FockSpace::new(cfg.param_usize("quadrature_n", 40)?)?;
    let radius = cfg.param_f64("radius", 6.0)?;
    let grid = cfg.param_usize("grid", 200)?;
    let levels = cfg.param_usize("levels", 10)?;
    let extent = cfg.param_f64("grid_extent", 3.0)?;
    let step = cfg.param_f64("grid_step", 0.5)?;
    let mut inst = Instances::new(cfg.seed);
    let mut report = Report::new("fock-demo", cfg);
    let n_in = format!("N={}", space.dim());
    let vacuum = DensityOperator::pure(&space.vacuum::<f64>())?;

    report.check(cfg, "coherent_overlap", &format!("{n_in},pairs=20,|z|<=2"), 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for _ in 0..20 {
            let (z1, z2) = (disk_point(&mut inst, 2.0), disk_point(&mut inst, 2.0));
            let ov = inner(&coherent_state(&z1, &space), &coherent_state(&z2, &space));
            diffs.push((ov - coherent_overlap_exact(&z1, &z2)).norm());
        }
        Ok(max(diffs))
    })?;

    report.check(cfg, "coherent_norm_tail", &format!("{n_in},|z|=2"), 1e-10, Rule::AbsAtMost, || {
        let z: Point = ContinuousPoint::from_alpha(Complex::new(2.0, 0.0));
        Ok(1.0 - vector_norm(&coherent_state(&z, &space)).powi(2))
    })?;

    report.check(cfg, "displaced_vacuum", &format!("{n_in},points=5"), 1e-10, Rule::AbsAtMost, || {
        let mut diffs = Vec::new();
        for _ in 0..5 {
            let z = disk_point(&mut inst, 2.0);
            let v = displacement_fock(&z, &space, 0.0) * space.vacuum::<f64>();
            diffs.push((v - coherent_state(&z, &space)).norm());
        }
        Ok(max(diffs))
    })?;

    report.check(cfg, "multiplier_law_trusted_block", &format!("{n_in},pairs=5,|z|<=1"), 1e-6, Rule::AbsAtMost, || {
        let k = space.trusted_block();
        let mut diffs = Vec::new();
        for _ in 0..5 {
            let (z, w) = (disk_point(&mut inst, 1.0), disk_point(&mut inst, 1.0));
            let lhs = displacement_fock(&z.add(&w), &space, 0.0);
            let rhs = displacement_fock(&z, &space, 0.0) * displacement_fock(&w, &space, 0.0) * continuous_multiplier(&z, &w);
            diffs.push(max_abs_diff(&lower_block(&lhs, k), &lower_block(&rhs, k)));
        }
        Ok(max(diffs))
    })?;

    report.check(cfg, "vacuum_characteristic", &format!("{n_in},points=20,|z|<=2"), 1e-8, Rule::AbsAtMost, || {
        let pts: Vec<Point> = (0..20).map(|_| disk_point(&mut inst, 2.0)).collect();
        let chi = characteristic_fock(&vacuum, &space, &pts)?;
        Ok(max(pts.iter().zip(&chi).map(|(z, c)| (c - (-(z.q * z.q + z.p * z.p) / 4.0).exp()).norm())))
    })?;

    report.check(
        cfg,
        "quadrature_resolution",
        &format!("N={},R={radius},grid={grid},levels={levels}", quad_space.dim()),
        1e-3,
        Rule::AbsAtMost,
        || Ok(resolution_defect_quadrature(&quad_space, radius, grid, levels)?),
    )?;

    report.check(cfg, "continuum_q3_vacuum", &format!("{n_in},points=20,|z|<=1"), 1e-8, Rule::AtLeastNegTol, || {
        let pts: Vec<Point> = (0..20).map(|_| disk_point(&mut inst, 1.0)).collect();
        Ok(fock_quantum_positive_type(&vacuum, &space, &pts, 1e-8)?.min_eigenvalue)
    })?;

    let ticks = (2.0 * extent / step).round() as i64;
    let axis: Vec<f64> = (0..=ticks).map(|i| -extent + i as f64 * step).collect();
    let pts: Vec<Point> = axis
        .iter()
        .flat_map(|&q| axis.iter().map(move |&p| ContinuousPoint::new(q, p)))
        .collect();
    let chi = characteristic_fock(&vacuum, &space, &pts)?;
    let rows: Vec<_> = pts.iter().zip(chi).map(|(z, c)| (z.q, z.p, c)).collect();
    let mut csv = Vec::new();
    write_grid_csv(&mut csv, &rows)?;

    Ok(Outcome {
        report,
        primary: None,
        extras: vec![("grid.csv", csv)],
    })
}
