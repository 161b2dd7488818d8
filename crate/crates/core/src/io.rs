//! File formats.
//!
//! - phase functions: JSON `{"d": 5, "values": [[re, im], ...]}`, q-major;
//! - density operators: JSON `{"d": 3, "matrix": [[[re, im], ...], ...]}`, row-major;
//! - semigroup specs: JSON `{"d": 5, "rate": 1.0, "jump_measure": "uniform"}`
//!   or with `jump_measure` an array of `d²` q-major masses;
//! - signals: CSV rows `re,im` (optional header), or raw little-endian `f32`
//!   with a JSON sidecar `{"dt": 0.05, "complex": true}` next to it;
//! - wavelet coefficients: CSV `b,a,re,im`;
//! - semigroup trajectories: CSV `t,entropy,purity,intertwining_defect`;
//! - phase-space grids: CSV `q,p,re,im`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::affine::{CoefficientTable, SampledSignal};
use crate::error::{Error, Result};
use crate::group::{GroupMeasure, PhaseGroup};
use crate::operator::DensityOperator;
use crate::phase::PhaseFunction;
use crate::scalar::Real;

fn pair<T: Real>(z: &Complex<T>) -> [f64; 2] {
    [z.re.as_f64(), z.im.as_f64()]
}

fn unpair<T: Real>(p: &[f64; 2]) -> Complex<T> {
    Complex::new(T::lit(p[0]), T::lit(p[1]))
}

fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn read_json<V: for<'de> Deserialize<'de>>(path: &Path) -> Result<V> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseFunctionDoc {
    pub d: usize,
    pub values: Vec<[f64; 2]>,
}

impl PhaseFunctionDoc {
    pub fn from_function<T: Real>(f: &PhaseFunction<T>) -> Self {
        PhaseFunctionDoc {
            d: f.dim(),
            values: f.values().iter().map(pair).collect(),
        }
    }

    pub fn to_function<T: Real>(&self) -> Result<PhaseFunction<T>> {
        PhaseFunction::from_values(self.d, self.values.iter().map(unpair).collect())
    }
}

pub fn write_phase_function<T: Real>(path: impl AsRef<Path>, f: &PhaseFunction<T>) -> Result<()> {
    write_json(path.as_ref(), &PhaseFunctionDoc::from_function(f))
}

pub fn read_phase_function<T: Real>(path: impl AsRef<Path>) -> Result<PhaseFunction<T>> {
    read_json::<PhaseFunctionDoc>(path.as_ref())?.to_function()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityOperatorDoc {
    pub d: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl DensityOperatorDoc {
    pub fn from_density<T: Real>(rho: &DensityOperator<T>) -> Self {
        let m = rho.matrix();
        DensityOperatorDoc {
            d: rho.dim(),
            matrix: (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| pair(&m[(i, j)])).collect()).collect(),
        }
    }

    pub fn to_density<T: Real>(&self) -> Result<DensityOperator<T>> {
        if self.matrix.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: self.matrix.len(),
            });
        }
        if let Some(row) = self.matrix.iter().find(|r| r.len() != self.d) {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: row.len(),
            });
        }
        DensityOperator::new(DMatrix::from_fn(self.d, self.d, |i, j| unpair(&self.matrix[i][j])))
    }
}

pub fn write_density<T: Real>(path: impl AsRef<Path>, rho: &DensityOperator<T>) -> Result<()> {
    write_json(path.as_ref(), &DensityOperatorDoc::from_density(rho))
}

pub fn read_density<T: Real>(path: impl AsRef<Path>) -> Result<DensityOperator<T>> {
    read_json::<DensityOperatorDoc>(path.as_ref())?.to_density()
}

/// Jump distribution of a compound-Poisson semigroup.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JumpMeasureSpec {
    /// `"uniform"`.
    Named(String),
    /// `d²` masses, q-major.
    Masses(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupSpec {
    pub d: usize,
    pub rate: f64,
    pub jump_measure: JumpMeasureSpec,
}

impl SemigroupSpec {
    pub fn uniform(d: usize, rate: f64) -> Self {
        SemigroupSpec {
            d,
            rate,
            jump_measure: JumpMeasureSpec::Named("uniform".into()),
        }
    }

    pub fn jump<T: Real>(&self, group: &PhaseGroup<T>) -> Result<GroupMeasure<T>> {
        match &self.jump_measure {
            JumpMeasureSpec::Named(name) if name == "uniform" => Ok(GroupMeasure::uniform(group)),
            JumpMeasureSpec::Named(name) => Err(Error::InvalidArgument(format!("unknown jump measure `{name}`"))),
            JumpMeasureSpec::Masses(m) => GroupMeasure::probability(group.dim(), m.iter().map(|&x| T::lit(x)).collect()),
        }
    }
}

pub fn read_semigroup_spec(path: impl AsRef<Path>) -> Result<SemigroupSpec> {
    read_json(path.as_ref())
}

/// Sidecar metadata for raw `f32` signal streams.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignalSidecar {
    pub dt: f64,
    #[serde(default)]
    pub complex: bool,
    /// Position of the first sample; the grid is centered when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn build_signal<T: Real>(samples: Vec<Complex<T>>, dt: f64, start: Option<f64>) -> Result<SampledSignal<T>> {
    match start {
        Some(s) => SampledSignal::new(samples, T::lit(dt), T::lit(s)),
        None => SampledSignal::centered(samples, T::lit(dt)),
    }
}

/// CSV with one `re,im` (or just `re`) row per sample; a non-numeric first
/// row is taken as a header.
pub fn read_signal_csv<T: Real>(path: impl AsRef<Path>, dt: f64, start: Option<f64>) -> Result<SampledSignal<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path.as_ref())?;
    let mut samples = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().filter(|f| !f.is_empty()).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 1 || v.len() == 2 => {
                samples.push(Complex::new(T::lit(v[0]), T::lit(v.get(1).copied().unwrap_or(0.0))));
            }
            Ok(v) if v.is_empty() => {}
            Err(_) if i == 0 => {}
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "signal row {} is not `re,im`: {:?}",
                    i + 1,
                    rec
                )))
            }
        }
    }
    build_signal(samples, dt, start)
}

pub fn write_signal_csv<T: Real>(path: impl AsRef<Path>, signal: &SampledSignal<T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref())?;
    w.write_record(["re", "im"])?;
    for s in signal.samples() {
        w.serialize((s.re.as_f64(), s.im.as_f64()))?;
    }
    w.flush()?;
    Ok(())
}

/// Raw little-endian `f32` stream (interleaved `re, im` when complex).
pub fn read_signal_raw<T: Real>(path: impl AsRef<Path>, sidecar: &SignalSidecar) -> Result<SampledSignal<T>> {
    let mut bytes = Vec::new();
    File::open(path.as_ref())?.read_to_end(&mut bytes)?;
    let width = if sidecar.complex { 8 } else { 4 };
    if bytes.len() % width != 0 {
        return Err(Error::InvalidArgument(format!(
            "raw stream length {} is not a multiple of {width}",
            bytes.len()
        )));
    }
    let floats: Vec<f32> = bytes
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    let samples = if sidecar.complex {
        floats
            .chunks_exact(2)
            .map(|p| Complex::new(T::lit(p[0] as f64), T::lit(p[1] as f64)))
            .collect()
    } else {
        floats.iter().map(|&x| Complex::new(T::lit(x as f64), T::zero())).collect()
    };
    build_signal(samples, sidecar.dt, sidecar.start)
}

pub fn write_signal_raw<T: Real>(path: impl AsRef<Path>, signal: &SampledSignal<T>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    for s in signal.samples() {
        w.write_all(&(s.re.as_f64() as f32).to_le_bytes())?;
        w.write_all(&(s.im.as_f64() as f32).to_le_bytes())?;
    }
    w.flush()?;
    write_json(
        &sidecar_path(path.as_ref()),
        &SignalSidecar {
            dt: signal.dt().as_f64(),
            complex: true,
            start: Some(signal.start().as_f64()),
        },
    )
}

/// Loads a signal by extension: `.csv` uses `dt` (or the sidecar when
/// `dt` is `None`), anything else is a raw `f32` stream with a sidecar.
pub fn read_signal<T: Real>(path: impl AsRef<Path>, dt: Option<f64>) -> Result<SampledSignal<T>> {
    let path = path.as_ref();
    let sidecar = || read_json::<SignalSidecar>(&sidecar_path(path));
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        match dt {
            Some(dt) => read_signal_csv(path, dt, None),
            None => {
                let meta = sidecar()?;
                read_signal_csv(path, meta.dt, meta.start)
            }
        }
    } else {
        let mut meta = sidecar()?;
        if let Some(dt) = dt {
            meta.dt = dt;
        }
        read_signal_raw(path, &meta)
    }
}

pub fn write_coefficients_csv<T: Real>(w: impl Write, table: &CoefficientTable<T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["b", "a", "re", "im"])?;
    for (b, a, c) in table.rows() {
        w.serialize((b.as_f64(), a.as_f64(), c.re.as_f64(), c.im.as_f64()))?;
    }
    w.flush()?;
    Ok(())
}

/// One row of a semigroup trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub entropy: f64,
    pub purity: f64,
    pub intertwining_defect: f64,
}

pub fn write_trajectory_csv(w: impl Write, rows: &[TrajectoryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv(r: impl Read) -> Result<Vec<TrajectoryRow>> {
    let mut reader = csv::Reader::from_reader(r);
    Ok(reader.deserialize().collect::<std::result::Result<_, _>>()?)
}

/// Rows `q, p, re, im`.
pub fn write_grid_csv<T: Real>(w: impl Write, rows: &[(T, T, Complex<T>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["q", "p", "re", "im"])?;
    for (q, p, c) in rows {
        w.serialize((q.as_f64(), p.as_f64(), c.re.as_f64(), c.im.as_f64()))?;
    }
    w.flush()?;
    Ok(())
}
