//! Calibration of the displacement unitarity tolerance: worst defect of
//! `D†D` on the trusted block, sampled on circles of growing `|z|`.

use phasespace::fock::{displacement_fock, lower_block};
use phasespace::operator::max_abs_diff;
use phasespace::{ContinuousPoint, FockSpace};
fn main() {
    for n in [40usize, 60] {
        let space = FockSpace::new(n).unwrap();
        let k = space.trusted_block();
        let id = phasespace::Operator::<f64>::identity(k, k);
        let rim = space.trusted_radius::<f64>();
        for r in [0.5, 1.0, 1.2, 1.4, 1.5, rim, 1.8, 1.9] {
            let mut worst: f64 = 0.0;
            for t in 0..256 {
                let th = t as f64 * std::f64::consts::PI / 128.0;
                let d = displacement_fock(&ContinuousPoint::new(r * th.cos(), r * th.sin()), &space, 0.0);
                worst = worst.max(max_abs_diff(&lower_block(&(d.adjoint() * &d), k), &id));
            }
            println!("N={n} |z|={r:.1} (disk {:.2}) defect {worst:.2e}", (n as f64).sqrt() / 4.0);
        }
    }
}
