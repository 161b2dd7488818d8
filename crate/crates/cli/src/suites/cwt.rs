use phasespace::affine::{
    admissibility_report, cwt_on_sample_grid, fixtures, isometry_ratio, log_scales, GaussianWindow, MexicanHat,
    ReferenceGrid, DIVERGENCE_THRESHOLD,
};
use phasespace::io::write_coefficients_csv;
use phasespace::{CoefficientTable, Morlet, SampledSignal, Wavelet};

use super::Outcome;
use crate::config::RunConfig;
use crate::report::{Report, Rule};

/// Loads a signal (parameter `signal`, or the built-in chirp on the
/// reference grid), checks admissibility of the wavelet (`morlet`,
/// `gaussian`, `mexican_hat`) on the signal's grid, and when admissible
/// computes the transform and its isometry ratio.
///
/// The coefficient CSV (`b,a,re,im`, every `b_stride`-th translation) goes
/// to `--out`. An inadmissible wavelet is reported as a failing check with
/// an empty coefficient table rather than as an error.
pub fn cwt(cfg: &RunConfig) -> anyhow::Result<Outcome> {
    let reference = ReferenceGrid::<f64>::default();
    let signal = match cfg.param_str("signal")? {
        Some(path) => {
            let dt = cfg.params.get("dt").and_then(|v| v.as_f64());
            phasespace::io::read_signal::<f64>(&path, dt)?
        }
        None => fixtures::chirp(reference.samples, reference.dt)?,
    };
    let name = cfg.param_str("wavelet")?.unwrap_or_else(|| "morlet".into());
    let wavelet: Box<dyn Wavelet<f64>> = match name.as_str() {
        "morlet" => Box::new(Morlet::new(cfg.param_f64("omega0", 6.0)?)),
        "gaussian" => Box::new(GaussianWindow),
        "mexican_hat" => Box::new(MexicanHat),
        other => anyhow::bail!("unknown wavelet `{other}` (expected morlet, gaussian or mexican_hat)"),
    };
    let scales = log_scales(
        cfg.param_f64("a_min", reference.a_min)?,
        cfg.param_f64("a_max", reference.a_max)?,
        cfg.param_usize("scales", reference.scales)?,
    )?;
    let stride = cfg.param_usize("b_stride", 8)?.max(1);

    let inputs = format!(
        "wavelet={name},len={},dt={},scales={}..{}x{}",
        signal.len(),
        signal.dt(),
        scales[0],
        scales[scales.len() - 1],
        scales.len()
    );
    let mut report = Report::new("cwt", cfg);
    let sampled = wavelet.sample(signal.len(), signal.dt())?;
    let adm = admissibility_report(&sampled);
    report.check(cfg, "admissibility_growth", &inputs, DIVERGENCE_THRESHOLD, Rule::AbsAtMost, || {
        Ok(adm.relative_growth)
    })?;

    let table = if adm.admissible {
        if signal.energy() > 0.0 {
            report.check(cfg, "isometry_ratio_defect", &inputs, 0.03, Rule::AbsAtMost, || {
                Ok(isometry_ratio(&signal, wavelet.as_ref(), &scales)? - 1.0)
            })?;
        }
        Some(cwt_on_sample_grid(&signal, wavelet.as_ref(), &scales)?)
    } else {
        None
    };

    let mut csv = Vec::new();
    match table {
        Some(t) => write_coefficients_csv(&mut csv, &strided(&t, &signal, stride))?,
        None => csv.extend_from_slice(b"b,a,re,im\n"),
    }
    Ok(Outcome {
        report,
        primary: Some(csv),
        extras: Vec::new(),
    })
}

fn strided(t: &CoefficientTable<f64>, signal: &SampledSignal<f64>, stride: usize) -> CoefficientTable<f64> {
    let picks: Vec<usize> = (0..signal.len()).step_by(stride).collect();
    CoefficientTable::from_parts(
        picks.iter().map(|&k| t.translations[k]).collect(),
        t.scales.clone(),
        (0..t.scales.len())
            .flat_map(|s| picks.iter().map(move |&k| t.at(s, k)))
            .collect(),
    )
    .expect("consistent shape")
}
