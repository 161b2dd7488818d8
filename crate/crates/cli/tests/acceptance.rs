//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use phasespace::affine::{admissibility_report, isometry_ratio, orthogonality_relation_defect, GaussianWindow, ReferenceGrid};
use phasespace::fock::{characteristic_fock, coherent_overlap_exact, coherent_state, resolution_defect_quadrature};
use phasespace::operator::{hs_inner, inner, max_abs_diff, min_eigenvalue, trace, vector_norm};
use phasespace::products::{lie, TwirledAlgebra};
use phasespace::semigroup::{von_neumann_entropy, ClassicalQuantumSemigroup, MeasureSemigroup};
use phasespace::{
    Complex, ContinuousPoint, DensityOperator, FockSpace, GroupMeasure, Instances, Morlet, StarMode, WeylSystem64,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn min(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(f64::INFINITY, f64::min)
}

fn weyl(d: usize) -> WeylSystem64 {
    WeylSystem64::new(d).expect("odd d")
}

fn c1_duflo_moore_orthogonality() -> Outcome {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for d in [3, 5, 7] {
        let w = weyl(d);
        let mut inst = Instances::new(100 + d as u64);
        for _ in 0..20 {
            let (p1, p2, f1, f2) = (
                inst.gaussian_vector(d),
                inst.gaussian_vector(d),
                inst.gaussian_vector(d),
                inst.gaussian_vector(d),
            );
            let lhs = w.coefficient(&p1, &f1).unwrap().inner(&w.coefficient(&p2, &f2).unwrap());
            let rhs = inner(&f1, &f2) * inner(&p2, &p1) * d as f64;
            let scale = vector_norm(&p1) * vector_norm(&p2) * vector_norm(&f1) * vector_norm(&f2);
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    let elapsed = started.elapsed();
    outcome(
        worst < 1e-10 && elapsed < Duration::from_secs(1),
        format!("max relative defect {worst:.2e} (< 1e-10), runtime {:.3}s (< 1s)", elapsed.as_secs_f64()),
    )
}

fn c2_resolution_of_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut tested = 0;
    for d in [3, 5, 7] {
        let w = weyl(d);
        let mut inst = Instances::new(200 + d as u64);
        let mut vectors: Vec<_> = (0..20).map(|_| inst.state_vector(d)).collect();
        for k in 0..d {
            let mut e = phasespace::StateVector::<f64>::zeros(d);
            e[k] = Complex::new(1.0, 0.0);
            vectors.push(e);
        }
        for psi in &vectors {
            worst = worst.max(w.resolution_of_identity_defect(psi).unwrap());
            tested += 1;
        }
    }
    outcome(worst < 1e-12, format!("max defect {worst:.2e} over {tested} unit vectors, d <= 7 (< 1e-12)"))
}

fn c3_dequantization() -> Outcome {
    let (mut iso, mut adj): (f64, f64) = (0.0, 0.0);
    for d in [3, 5, 7] {
        let w = weyl(d);
        let mut inst = Instances::new(300 + d as u64);
        for _ in 0..50 {
            let (a, b, f) = (inst.operator(d, d), inst.operator(d, d), inst.phase_function(d));
            let da = w.dequantize(&a).unwrap();
            iso = iso.max((da.inner(&w.dequantize(&b).unwrap()) - hs_inner(&a, &b)).norm());
            adj = adj.max((da.inner(&f) - hs_inner(&a, &w.quantize(&f).unwrap())).norm());
        }
    }
    outcome(
        iso < 1e-10 && adj < 1e-10,
        format!("isometry defect {iso:.2e}, adjointness defect {adj:.2e}, 50 operators per d in {{3,5,7}} (< 1e-10)"),
    )
}

fn c4_star_products() -> Outcome {
    let (mut agree, mut assoc, mut hstar): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for d in [3, 5, 7] {
        let w = weyl(d);
        let mut inst = Instances::new(400 + d as u64);
        for _ in 0..10 {
            let (f1, f2, f3) = (inst.phase_function(d), inst.phase_function(d), inst.phase_function(d));
            let prods: Vec<_> = StarMode::ALL.iter().map(|&m| w.star_product(&f1, &f2, m).unwrap()).collect();
            for p in &prods[1..] {
                agree = agree.max(p.max_abs_diff(&prods[0]));
            }
            for m in StarMode::ALL {
                let left = w.star_product(&w.star_product(&f1, &f2, m).unwrap(), &f3, m).unwrap();
                let right = w.star_product(&f1, &w.star_product(&f2, &f3, m).unwrap(), m).unwrap();
                assoc = assoc.max(left.max_abs_diff(&right));
                let lhs = prods[0].inner(&f3);
                let rhs = f2.inner(&w.star_product(&f1.involution(), &f3, m).unwrap());
                hstar = hstar.max((lhs - rhs).norm());
            }
        }
    }
    outcome(
        agree < 1e-10 && assoc < 1e-10 && hstar < 1e-10,
        format!("formula agreement {agree:.2e}, associativity {assoc:.2e}, H* identity {hstar:.2e} (< 1e-10)"),
    )
}

fn c5_positive_type_battery() -> Outcome {
    let (mut q3_states, mut qptf_states) = (f64::INFINITY, f64::INFINITY);
    let mut accepted_candidates = 0;
    let mut roundtrip: f64 = 0.0;
    for d in [3, 5] {
        let w = weyl(d);
        let g = w.group();
        let mut inst = Instances::new(500 + d as u64);
        for i in 0..50u64 {
            let rho = inst.density::<f64>(d);
            let chi = w.characteristic_function(&rho).unwrap();
            q3_states = q3_states.min(g.quantum_positive_type_full(&chi).unwrap().min_eigenvalue);
            qptf_states = qptf_states.min(w.qptf_integral_check(&chi, 200, i).unwrap());
            let wig = w.wigner_from_characteristic(&chi);
            let chi_back = w.characteristic_from_wigner(&wig);
            roundtrip = roundtrip
                .max(wig.max_abs_diff(&w.wigner_function(&rho).unwrap()))
                .max(chi_back.max_abs_diff(&chi))
                .max(max_abs_diff(&w.operator_from_characteristic(&chi_back).unwrap(), rho.matrix()));
        }
        for i in 0..50u64 {
            let a = inst.nonpositive_unit_trace::<f64>(d, 0.3);
            let u = w.characteristic_of(&a).unwrap();
            let q3 = g.quantum_positive_type_full(&u).unwrap().min_eigenvalue;
            let integral = w.qptf_integral_check(&u, 200, 1000 + i).unwrap();
            if q3 >= -1e-10 || integral >= -1e-10 {
                accepted_candidates += 1;
            }
        }
    }
    outcome(
        q3_states >= -1e-10 && qptf_states >= -1e-10 && accepted_candidates == 0 && roundtrip < 1e-10,
        format!(
            "states: Q3 min eig {q3_states:.2e}, QPTF min {qptf_states:.2e} (>= -1e-10); \
             non-positive candidates passing either test: {accepted_candidates}/100; round trip {roundtrip:.2e} (< 1e-10)"
        ),
    )
}

fn c6_classical_times_quantum() -> Outcome {
    let (mut min_eig, mut norm) = (f64::INFINITY, 0.0f64);
    for d in [3, 5] {
        let w = weyl(d);
        let g = w.group();
        let mut inst = Instances::new(600 + d as u64);
        for _ in 0..50 {
            let p = g.classical_characteristic(&inst.probability(d)).unwrap();
            let u = w.characteristic_function(&inst.density(d)).unwrap();
            let prod = p.pointwise_mul(&u).unwrap();
            min_eig = min_eig.min(g.quantum_positive_type_full(&prod).unwrap().min_eigenvalue);
            norm = norm.max((prod.origin() - 1.0).norm());
        }
    }
    outcome(
        min_eig >= -1e-10 && norm < 1e-10,
        format!("100 pairs: product Q3 min eig {min_eig:.2e} (>= -1e-10), |value at origin - 1| {norm:.2e} (< 1e-10)"),
    )
}

fn c7_intertwining() -> Outcome {
    let times = [0.1, 0.5, 1.0, 3.0];
    let (mut defect, mut entropy_drop, mut choi, mut tp) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for d in [3, 5] {
        let w = weyl(d);
        let g = w.group().clone();
        let mut inst = Instances::new(700 + d as u64);
        let jumps = [GroupMeasure::uniform(&g), inst.probability(d), inst.probability(d)];
        for (j, jump) in jumps.into_iter().enumerate() {
            let rate = [1.0, 0.5, 2.0][j];
            let base = MeasureSemigroup::compound_poisson(g.clone(), jump, rate).unwrap();
            let cq = ClassicalQuantumSemigroup::new(base.clone(), &times).unwrap();
            for _ in 0..3 {
                let rho = inst.density::<f64>(d);
                let u = w.characteristic_function(&rho).unwrap();
                let mut previous = von_neumann_entropy(&rho);
                for &t in &times {
                    defect = defect.max(cq.intertwining_defect(&w, t, &u).unwrap());
                    let channel = base.channel_at(&w, t).unwrap();
                    let s = von_neumann_entropy(&channel.twirl_apply(&rho).unwrap());
                    entropy_drop = entropy_drop.max(previous - s);
                    previous = s;
                    let report = channel.choi_check();
                    choi = choi.min(report.min_eigenvalue);
                    tp = tp.max(report.trace_preserving_defect);
                }
            }
        }
    }
    outcome(
        defect < 1e-10 && entropy_drop <= 1e-10 && choi >= -1e-10 && tp < 1e-10,
        format!(
            "intertwining {defect:.2e} (< 1e-10), largest entropy decrease {entropy_drop:.2e} (<= 1e-10), \
             Choi min eig {choi:.2e} (>= -1e-10), trace preservation {tp:.2e} (< 1e-10)"
        ),
    )
}

fn c8_state_products() -> Outcome {
    let d = 5;
    let w = weyl(d);
    let mut inst = Instances::new(800);
    let mut equal_pure: f64 = 0.0;
    let mut distinct_at_one = 0;
    let mut lie_trace: f64 = 0.0;
    for k in 0..30 {
        let psi = inst.state_vector::<f64>(d);
        let rho = DensityOperator::pure(&psi).unwrap();
        equal_pure = equal_pure.max((trace(&(rho.matrix() * rho.matrix())).re - 1.0).abs());
        let sigma = match k % 3 {
            0 => inst.pure_density::<f64>(d),
            1 => inst.density::<f64>(d),
            _ => DensityOperator::pure(&(&psi + inst.state_vector::<f64>(d) * Complex::new(0.05, 0.0))).unwrap(),
        };
        if trace(&(rho.matrix() * sigma.matrix())).re >= 1.0 - 1e-10 {
            distinct_at_one += 1;
        }
        let mixed = inst.density::<f64>(d);
        if trace(&(mixed.matrix() * mixed.matrix())).re >= 1.0 - 1e-10 {
            distinct_at_one += 1;
        }
        lie_trace = lie_trace.max(trace(&lie(rho.matrix(), sigma.matrix()).unwrap()).norm());
    }
    let alg = TwirledAlgebra::new(&w, inst.density(d)).unwrap();
    let (mut min_eig, mut tr_defect, mut assoc, mut mu_min, mut mu_sum) =
        (f64::INFINITY, 0.0f64, 0.0f64, f64::INFINITY, 0.0f64);
    for _ in 0..200 {
        let (a, b, c) = (inst.density::<f64>(d), inst.density::<f64>(d), inst.density::<f64>(d));
        let ab = alg.twirled_product(a.matrix(), b.matrix()).unwrap();
        let bc = alg.twirled_product(b.matrix(), c.matrix()).unwrap();
        min_eig = min_eig.min(min_eigenvalue(&ab));
        tr_defect = tr_defect.max((trace(&ab) - 1.0).norm());
        let left = alg.twirled_product(&ab, c.matrix()).unwrap();
        let right = alg.twirled_product(a.matrix(), &bc).unwrap();
        assoc = assoc.max(max_abs_diff(&left, &right));
        let mu = alg.induced_measure(a.matrix()).unwrap();
        mu_min = mu_min.min(min(mu.values().iter().map(|v| v.re)));
        let total: Complex<f64> = mu.values().iter().sum();
        mu_sum = mu_sum.max((total - 1.0).norm());
    }
    let pass = equal_pure < 1e-10
        && distinct_at_one == 0
        && lie_trace < 1e-10
        && min_eig >= -1e-10
        && tr_defect < 1e-10
        && assoc < 1e-10
        && mu_min >= -1e-10
        && mu_sum < 1e-10;
    outcome(
        pass,
        format!(
            "tr(rho^2)-1 for pure {equal_pure:.2e}; non-identical or mixed pairs reaching 1: {distinct_at_one}; \
             Lie trace {lie_trace:.2e}; twirled: min eig {min_eig:.2e}, trace {tr_defect:.2e}, \
             associativity {assoc:.2e}; induced measure min {mu_min:.2e}, sum defect {mu_sum:.2e}"
        ),
    )
}

fn c9_fock() -> Outcome {
    let started = Instant::now();
    let space = FockSpace::new(60).unwrap();
    let mut inst = Instances::new(900);
    let mut point = |radius: f64| {
        let r = radius * inst.uniform().sqrt();
        let th = std::f64::consts::TAU * inst.uniform();
        ContinuousPoint::from_alpha(Complex::new(r * th.cos(), r * th.sin()))
    };
    let mut overlap: f64 = 0.0;
    for _ in 0..30 {
        let (z1, z2) = (point(2.0), point(2.0));
        let ov = inner(&coherent_state(&z1, &space), &coherent_state(&z2, &space));
        overlap = overlap.max((ov - coherent_overlap_exact(&z1, &z2)).norm());
    }
    let pts: Vec<ContinuousPoint<f64>> = (0..30).map(|_| point(2.0)).collect();
    let vacuum = DensityOperator::pure(&space.vacuum::<f64>()).unwrap();
    let chi = characteristic_fock(&vacuum, &space, &pts).unwrap();
    let gauss = max(pts.iter().zip(&chi).map(|(z, c)| (c - (-(z.q * z.q + z.p * z.p) / 4.0).exp()).norm()));
    let quad = resolution_defect_quadrature(&FockSpace::new(40).unwrap(), 6.0, 200, 10).unwrap();
    let elapsed = started.elapsed();
    outcome(
        overlap < 1e-10 && gauss < 1e-8 && quad < 1e-3 && elapsed < Duration::from_secs(30),
        format!(
            "coherent overlap {overlap:.2e} (< 1e-10), vacuum characteristic {gauss:.2e} (< 1e-8), \
             quadrature defect {quad:.2e} (< 1e-3), runtime {:.2}s (< 30s)",
            elapsed.as_secs_f64()
        ),
    )
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn c10_affine() -> Outcome {
    let grid = ReferenceGrid::<f64>::default();
    let scales = grid.scale_grid().unwrap();
    let phi = phasespace::io::read_signal::<f64>(fixture("chirp.csv"), None).unwrap();
    let morlet = Morlet::new(6.0);
    let ratio = isometry_ratio(&phi, &morlet, &scales).unwrap();
    let gaussian = admissibility_report(&GaussianWindow.sample_on(&phi));
    let morlet_adm = admissibility_report(&morlet.sample_on(&phi));
    let phi2 = phasespace::affine::fixtures::chirp_with(grid.samples, grid.dt, 7.0, -0.5, 1.5).unwrap();
    let ortho = orthogonality_relation_defect(&morlet, &Morlet::new(5.0), &phi, &phi2, &scales).unwrap();
    outcome(
        (0.97..=1.03).contains(&ratio) && !gaussian.admissible && morlet_adm.admissible && ortho <= 0.03,
        format!(
            "isometry ratio {ratio:.6} (within 1 +/- 0.03); Gaussian flagged divergent: {} (growth {:.2e}); \
             Morlet admissible: {}; orthogonality relative defect {ortho:.2e} (<= 0.03)",
            !gaussian.admissible, gaussian.relative_growth, morlet_adm.admissible
        ),
    )
}

trait SampleOn {
    fn sample_on(&self, like: &phasespace::SampledSignal<f64>) -> phasespace::SampledSignal<f64>;
}

impl<W: phasespace::Wavelet<f64>> SampleOn for W {
    fn sample_on(&self, like: &phasespace::SampledSignal<f64>) -> phasespace::SampledSignal<f64> {
        self.sample(like.len(), like.dt()).unwrap()
    }
}

const VERBS: [&str; 7] = [
    "frame-check",
    "star-demo",
    "qpt-check",
    "semigroup-run",
    "twirl-product",
    "cwt",
    "fock-demo",
];

fn run_default_suite(dir: &Path) -> bool {
    let mut all_ok = true;
    for verb in VERBS {
        let status = Command::new(env!("CARGO_BIN_EXE_phasespace"))
            .arg(verb)
            .arg("--out")
            .arg(dir.join(format!("{verb}.out")))
            .output()
            .expect("binary runs");
        all_ok &= status.status.success();
    }
    all_ok
}

fn c11_cli_determinism() -> Outcome {
    let started = Instant::now();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ok_a = run_default_suite(a.path());
    let ok_b = run_default_suite(b.path());
    let elapsed = started.elapsed();
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    let differing: Vec<_> = names
        .iter()
        .filter(|n| std::fs::read(a.path().join(n)).ok() != std::fs::read(b.path().join(n)).ok())
        .map(|n| n.to_string_lossy().into_owned())
        .collect();
    outcome(
        ok_a && ok_b && differing.is_empty() && names.len() >= VERBS.len() && elapsed < Duration::from_secs(120),
        format!(
            "{} files from two default runs of all {} verbs, {} differing; all checks passed: {}; \
             two full runs took {:.2}s together (< 120s)",
            names.len(),
            VERBS.len(),
            differing.len(),
            ok_a && ok_b,
            elapsed.as_secs_f64()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Duflo-Moore orthogonality, d in {3,5,7}", c1_duflo_moore_orthogonality),
        ("resolution of the identity", c2_resolution_of_identity),
        ("dequantization isometry and adjointness", c3_dequantization),
        ("star-product formulas, associativity, H* identity", c4_star_products),
        ("quantum positive type battery and Wigner round trip", c5_positive_type_battery),
        ("classical x quantum characteristic products", c6_classical_times_quantum),
        ("twirling semigroup intertwining, entropy, Choi", c7_intertwining),
        ("products of states and the twirled product", c8_state_products),
        ("Fock backend", c9_fock),
        ("affine wavelet transform", c10_affine),
        ("CLI determinism and suite runtime", c11_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
