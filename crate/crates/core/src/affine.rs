//! The connected affine group `{(b, a) : a > 0}` on `L²(R)` and the
//! continuous wavelet transform.
//!
//! Conventions:
//! - `(U(b,a)ψ)(x) = a^{-1/2} ψ((x − b)/a)`, composition
//!   `(b,a)(b',a') = (b + a b', a a')`;
//! - left Haar measure `db da / a²`, modular function `Δ(b,a) = 1/a`;
//! - `ψ̂(ω) = ∫ ψ(x) e^{−iωx} dx`, inversion carries `1/(2π)`;
//! - the Duflo–Moore operator multiplies the spectrum by `√(2π/|ω|)`, so
//!   `‖Cψ‖² = ∫ |ψ̂(ω)|²/|ω| dω` is the admissibility constant itself.
//!
//! `U` is irreducible on the positive-frequency subspace only, so the
//! orthogonality relations are exact for analytic signals (`φ̂ = 0` on
//! `ω < 0`) and wavelets whose negative-frequency content is negligible.

use nalgebra::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cis, czero, Real};

/// Relative growth of the admissibility quadrature under 2× and 4×
/// frequency refinement above which the constant is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e-3;

/// A group element `(b, a)`, `a > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffinePoint<T> {
    pub b: T,
    pub a: T,
}

impl<T: Real> AffinePoint<T> {
    pub fn new(b: T, a: T) -> Result<Self> {
        if !(a > T::zero()) || !b.is_finite() || !a.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "affine point needs finite b and a > 0, got ({}, {})",
                b.as_f64(),
                a.as_f64()
            )));
        }
        Ok(AffinePoint { b, a })
    }

    pub fn identity() -> Self {
        AffinePoint { b: T::zero(), a: T::one() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        AffinePoint {
            b: self.b + self.a * other.b,
            a: self.a * other.a,
        }
    }

    pub fn inverse(&self) -> Self {
        AffinePoint {
            b: -self.b / self.a,
            a: T::one() / self.a,
        }
    }

    /// Left Haar density `1/a²` with respect to `db da`.
    pub fn left_haar_density(&self) -> T {
        T::one() / (self.a * self.a)
    }

    /// Right Haar density `1/a`.
    pub fn right_haar_density(&self) -> T {
        T::one() / self.a
    }

    /// `Δ(b, a) = 1/a`.
    pub fn modular_function(&self) -> T {
        T::one() / self.a
    }

    /// `(U(b,a)ψ)(x)`.
    pub fn apply_at<W: Wavelet<T> + ?Sized>(&self, psi: &W, x: T) -> Complex<T> {
        psi.time((x - self.b) / self.a) / self.a.sqrt()
    }

    /// Spectrum of `U(b,a)ψ`: `a^{1/2} e^{−iωb} ψ̂(aω)`.
    pub fn apply_spectrum<W: Wavelet<T> + ?Sized>(&self, psi: &W, omega: T) -> Complex<T> {
        psi.spectrum(self.a * omega) * cis(-omega * self.b) * self.a.sqrt()
    }

    /// `U(b,a)ψ` sampled on a centered grid.
    pub fn apply_sampled<W: Wavelet<T> + ?Sized>(&self, psi: &W, len: usize, dt: T) -> Result<SampledSignal<T>> {
        SampledSignal::from_fn(len, dt, |x| self.apply_at(psi, x))
    }
}

/// A mother wavelet (or any analyzing vector) known both in time and in
/// frequency.
pub trait Wavelet<T: Real> {
    fn time(&self, x: T) -> Complex<T>;
    /// `ψ̂(ω) = ∫ ψ(x) e^{−iωx} dx`.
    fn spectrum(&self, omega: T) -> Complex<T>;

    fn sample(&self, len: usize, dt: T) -> Result<SampledSignal<T>> {
        SampledSignal::from_fn(len, dt, |x| self.time(x))
    }
}

/// Morlet wavelet `π^{-1/4}(e^{iω₀x} − e^{−ω₀²/2}) e^{−x²/2}` (zero mean).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Morlet<T> {
    pub omega0: T,
}

impl<T: Real> Morlet<T> {
    pub fn new(omega0: T) -> Self {
        Morlet { omega0 }
    }

    fn norm_const() -> T {
        T::pi().powf(T::lit(-0.25))
    }
}

impl<T: Real> Default for Morlet<T> {
    fn default() -> Self {
        Morlet { omega0: T::lit(6.0) }
    }
}

impl<T: Real> Wavelet<T> for Morlet<T> {
    fn time(&self, x: T) -> Complex<T> {
        let half = T::lit(0.5);
        let env = (-x * x * half).exp();
        let corr = (-self.omega0 * self.omega0 * half).exp();
        (cis(self.omega0 * x) - Complex::new(corr, T::zero())) * env * Self::norm_const()
    }

    fn spectrum(&self, omega: T) -> Complex<T> {
        let half = T::lit(0.5);
        let shifted = omega - self.omega0;
        let v = (-shifted * shifted * half).exp() - (-(self.omega0 * self.omega0 + omega * omega) * half).exp();
        Complex::new(v * T::two_pi().sqrt() * Self::norm_const(), T::zero())
    }
}

/// Normalized Gaussian `π^{-1/4} e^{−x²/2}`: nonzero mean, not admissible.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct GaussianWindow;

impl<T: Real> Wavelet<T> for GaussianWindow {
    fn time(&self, x: T) -> Complex<T> {
        Complex::new(T::pi().powf(T::lit(-0.25)) * (-x * x / T::lit(2.0)).exp(), T::zero())
    }

    fn spectrum(&self, omega: T) -> Complex<T> {
        let v = T::pi().powf(T::lit(-0.25)) * T::two_pi().sqrt() * (-omega * omega / T::lit(2.0)).exp();
        Complex::new(v, T::zero())
    }
}

/// Mexican hat `2/(√3 π^{1/4}) (1 − x²) e^{−x²/2}`: real, admissible, not
/// analytic.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MexicanHat;

impl MexicanHat {
    fn norm_const<T: Real>() -> T {
        T::lit(2.0) / (T::lit(3.0).sqrt() * T::pi().powf(T::lit(0.25)))
    }
}

impl<T: Real> Wavelet<T> for MexicanHat {
    fn time(&self, x: T) -> Complex<T> {
        let v = Self::norm_const::<T>() * (T::one() - x * x) * (-x * x / T::lit(2.0)).exp();
        Complex::new(v, T::zero())
    }

    fn spectrum(&self, omega: T) -> Complex<T> {
        let w2 = omega * omega;
        let v = Self::norm_const::<T>() * T::two_pi().sqrt() * w2 * (-w2 / T::lit(2.0)).exp();
        Complex::new(v, T::zero())
    }
}

/// Complex samples `φ(x_k)` at `x_k = start + k·dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledSignal<T> {
    samples: Vec<Complex<T>>,
    dt: T,
    start: T,
}

impl<T: Real> SampledSignal<T> {
    pub fn new(samples: Vec<Complex<T>>, dt: T, start: T) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidArgument("empty signal".into()));
        }
        if !(dt > T::zero()) || !dt.is_finite() || !start.is_finite() {
            return Err(Error::InvalidArgument(format!("bad sampling step {}", dt.as_f64())));
        }
        if samples.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return Err(Error::Inadmissible("signal has non-finite samples (infinite energy)".into()));
        }
        Ok(SampledSignal { samples, dt, start })
    }

    /// Grid centered on the origin: `start = −(len/2)·dt`.
    pub fn centered(samples: Vec<Complex<T>>, dt: T) -> Result<Self> {
        let start = -T::from_usize_lossy(samples.len() / 2) * dt;
        Self::new(samples, dt, start)
    }

    pub fn from_fn(len: usize, dt: T, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let start = -T::from_usize_lossy(len / 2) * dt;
        let samples = (0..len).map(|k| f(start + T::from_usize_lossy(k) * dt)).collect();
        Self::new(samples, dt, start)
    }

    pub fn zeros(len: usize, dt: T) -> Result<Self> {
        Self::centered(vec![czero(); len], dt)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn start(&self) -> T {
        self.start
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn position(&self, k: usize) -> T {
        self.start + T::from_usize_lossy(k) * self.dt
    }

    pub fn positions(&self) -> Vec<T> {
        (0..self.len()).map(|k| self.position(k)).collect()
    }

    /// `‖φ‖² ≈ dt Σ |φ_k|²`.
    pub fn energy(&self) -> T {
        self.samples.iter().map(|s| s.norm_sqr()).fold(T::zero(), |a, b| a + b) * self.dt
    }

    pub fn norm(&self) -> T {
        self.energy().sqrt()
    }

    /// `⟨self, other⟩ ≈ dt Σ conj(self_k)·other_k` (same grid).
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check_same_grid(other)?;
        let s = self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(czero(), |acc: Complex<T>, (a, b)| acc + a.conj() * b);
        Ok(s * self.dt)
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        SampledSignal {
            samples: self.samples.iter().map(|s| s * c).collect(),
            ..self.clone()
        }
    }

    /// Appends zeros so the length becomes `factor·len`.
    pub fn zero_padded(&self, factor: usize) -> Self {
        let mut samples = self.samples.clone();
        samples.resize(self.len() * factor.max(1), czero());
        SampledSignal { samples, ..self.clone() }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        let tol = T::lit(1e-9) * self.dt;
        if (self.dt - other.dt).abs() > tol || (self.start - other.start).abs() > tol {
            return Err(Error::InvalidArgument("signals live on different sampling grids".into()));
        }
        Ok(())
    }

    /// Angular frequency of DFT bin `k` (FFT order, negative half above `len/2`).
    pub fn bin_frequency(&self, k: usize) -> T {
        let m = self.len();
        let signed = if k < m.div_ceil(2) { k as f64 } else { k as f64 - m as f64 };
        T::lit(signed) * self.frequency_step()
    }

    /// `Δω = 2π / (len·dt)`.
    pub fn frequency_step(&self) -> T {
        T::two_pi() / (T::from_usize_lossy(self.len()) * self.dt)
    }

    /// Discrete approximation of `φ̂(ω_k)` on every bin (FFT order).
    pub fn spectrum_bins(&self) -> Vec<Complex<T>> {
        let mut buf = self.samples.clone();
        FftPlanner::<T>::new().plan_fft_forward(buf.len()).process(&mut buf);
        for (k, v) in buf.iter_mut().enumerate() {
            *v = *v * cis(-self.bin_frequency(k) * self.start) * self.dt;
        }
        buf
    }

    /// Inverse of [`spectrum_bins`](Self::spectrum_bins) on this grid.
    pub fn from_spectrum_bins(&self, bins: &[Complex<T>]) -> Result<Self> {
        if bins.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: bins.len(),
            });
        }
        let mut buf: Vec<Complex<T>> = bins
            .iter()
            .enumerate()
            .map(|(k, v)| v * cis(self.bin_frequency(k) * self.start))
            .collect();
        FftPlanner::<T>::new().plan_fft_inverse(buf.len()).process(&mut buf);
        let scale = T::one() / (T::from_usize_lossy(self.len()) * self.dt);
        Self::new(buf.into_iter().map(|v| v * scale).collect(), self.dt, self.start)
    }
}

/// A sampled signal used as an analyzing vector: time values by linear
/// interpolation (zero outside the grid), spectrum by direct DTFT.
impl<T: Real> Wavelet<T> for SampledSignal<T> {
    fn time(&self, x: T) -> Complex<T> {
        let u = (x - self.start) / self.dt;
        if u < T::zero() {
            return czero();
        }
        let k = u.floor().to_usize().unwrap_or(usize::MAX);
        if k >= self.len() {
            return czero();
        }
        let frac = u - T::from_usize_lossy(k);
        let next = self.samples.get(k + 1).copied().unwrap_or_else(czero);
        self.samples[k] * (T::one() - frac) + next * frac
    }

    fn spectrum(&self, omega: T) -> Complex<T> {
        let step = cis(-omega * self.dt);
        let mut phase = cis(-omega * self.start);
        let mut acc = czero();
        for s in &self.samples {
            acc += s * phase;
            phase *= step;
        }
        acc * self.dt
    }
}

/// `Σ_{ω_k ≠ 0} |ψ̂(ω_k)|² / |ω_k| · Δω`: the DFT quadrature of
/// `∫ |ψ̂(ω)|²/|ω| dω = ‖Cψ‖²`.
pub fn admissibility_constant<T: Real>(psi: &SampledSignal<T>) -> T {
    let bins = psi.spectrum_bins();
    let dw = psi.frequency_step();
    bins.iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| v.norm_sqr() / psi.bin_frequency(k).abs())
        .fold(T::zero(), |a, b| a + b)
        * dw
}

/// Outcome of the refinement-based admissibility test.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport<T> {
    /// Quadrature on the native grid, then after 2× and 4× zero padding.
    pub constants: [T; 3],
    /// Largest relative increase between consecutive refinements.
    pub relative_growth: T,
    pub admissible: bool,
}

/// Refines the frequency grid by zero padding and watches the constant:
/// with `ψ̂(0) ≠ 0` the bins next to `ω = 0` add `~|ψ̂(0)|²·ln 2` at every
/// halving of `Δω`.
pub fn admissibility_report<T: Real>(psi: &SampledSignal<T>) -> AdmissibilityReport<T> {
    let constants = [
        admissibility_constant(psi),
        admissibility_constant(&psi.zero_padded(2)),
        admissibility_constant(&psi.zero_padded(4)),
    ];
    let growth = |lo: T, hi: T| {
        if lo > T::zero() {
            (hi - lo) / lo
        } else if hi > T::zero() {
            T::max_value().unwrap_or_else(T::one)
        } else {
            T::zero()
        }
    };
    let relative_growth = growth(constants[0], constants[1]).max(growth(constants[1], constants[2]));
    AdmissibilityReport {
        constants,
        relative_growth,
        admissible: relative_growth <= T::lit(DIVERGENCE_THRESHOLD),
    }
}

/// `Cψ`: spectrum multiplied by `√(2π/|ω|)`; the zero-frequency bin is
/// dropped (it carries no weight for an admissible vector).
pub fn duflo_moore_apply<T: Real>(psi: &SampledSignal<T>) -> Result<SampledSignal<T>> {
    let report = admissibility_report(psi);
    if !report.admissible {
        return Err(Error::Inadmissible(format!(
            "admissibility quadrature grows by {:.3e} under refinement",
            report.relative_growth.as_f64()
        )));
    }
    let mut bins = psi.spectrum_bins();
    bins[0] = czero();
    for (k, v) in bins.iter_mut().enumerate().skip(1) {
        *v *= (T::two_pi() / psi.bin_frequency(k).abs()).sqrt();
    }
    psi.from_spectrum_bins(&bins)
}

/// `⟨Cψ₁, Cψ₂⟩ = ∫ conj(ψ̂₁(ω)) ψ̂₂(ω) / |ω| dω` by trapezoidal quadrature
/// in `u = ln|ω|` over `|ω| ∈ [1e-8, 400]`.
pub fn duflo_moore_inner<T: Real, A: Wavelet<T> + ?Sized, B: Wavelet<T> + ?Sized>(psi1: &A, psi2: &B) -> Complex<T> {
    const NODES: usize = 20_000;
    let (lo, hi) = (T::lit(1e-8).ln(), T::lit(400.0).ln());
    let du = (hi - lo) / T::from_usize_lossy(NODES - 1);
    let mut acc = czero();
    for i in 0..NODES {
        let w = (lo + du * T::from_usize_lossy(i)).exp();
        let edge = if i == 0 || i == NODES - 1 { T::lit(0.5) } else { T::one() };
        let pos = psi1.spectrum(w).conj() * psi2.spectrum(w);
        let neg = psi1.spectrum(-w).conj() * psi2.spectrum(-w);
        acc += (pos + neg) * edge;
    }
    acc * du
}

/// `‖Cψ‖²` for an analytically known wavelet.
pub fn duflo_moore_norm_squared<T: Real, W: Wavelet<T> + ?Sized>(psi: &W) -> T {
    duflo_moore_inner(psi, psi).re
}

/// `n` log-spaced scales from `a_min` to `a_max` inclusive.
pub fn log_scales<T: Real>(a_min: T, a_max: T, n: usize) -> Result<Vec<T>> {
    if !(a_min > T::zero()) || !(a_max > a_min) || n < 2 {
        return Err(Error::InvalidArgument("need 0 < a_min < a_max and at least two scales".into()));
    }
    let (lo, hi) = (a_min.ln(), a_max.ln());
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    Ok((0..n).map(|i| (lo + step * T::from_usize_lossy(i)).exp()).collect())
}

/// Trapezoidal weights for `da/a²` on a log-spaced scale grid
/// (`da/a² = d(ln a)/a`).
pub fn log_scale_weights<T: Real>(scales: &[T]) -> Vec<T> {
    let n = scales.len();
    if n < 2 {
        return vec![T::zero(); n];
    }
    let step = (scales[n - 1].ln() - scales[0].ln()) / T::from_usize_lossy(n - 1);
    scales
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let edge = if i == 0 || i == n - 1 { T::lit(0.5) } else { T::one() };
            edge * step / a
        })
        .collect()
}

/// Wavelet coefficients `c(b, a) = ⟨U(b,a)ψ, φ⟩`, scale-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable<T> {
    pub translations: Vec<T>,
    pub scales: Vec<T>,
    values: Vec<Complex<T>>,
}

impl<T: Real> CoefficientTable<T> {
    /// Table from scale-major `values` (`scales.len() × translations.len()`).
    pub fn from_parts(translations: Vec<T>, scales: Vec<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != translations.len() * scales.len() {
            return Err(Error::DimensionMismatch {
                expected: translations.len() * scales.len(),
                found: values.len(),
            });
        }
        Ok(CoefficientTable {
            translations,
            scales,
            values,
        })
    }

    pub fn at(&self, scale_index: usize, translation_index: usize) -> Complex<T> {
        self.values[scale_index * self.translations.len() + translation_index]
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Rows `(b, a, c)` in scale-major order.
    pub fn rows(&self) -> impl Iterator<Item = (T, T, Complex<T>)> + '_ {
        let nb = self.translations.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.translations[i % nb], self.scales[i / nb], v))
    }

    /// `(scale_index, translation_index)` of the largest `|c|`.
    pub fn argmax(&self) -> (usize, usize) {
        let nb = self.translations.len();
        let mut best = (0, czero::<T>().norm_sqr());
        for (i, v) in self.values.iter().enumerate() {
            if v.norm_sqr() > best.1 {
                best = (i, v.norm_sqr());
            }
        }
        (best.0 / nb, best.0 % nb)
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().map(|v| v.norm_sqr().sqrt()).fold(T::zero(), |a, b| a.max(b))
    }
}

fn check_scales<T: Real>(scales: &[T]) -> Result<()> {
    if scales.is_empty() || scales.iter().any(|&a| !(a > T::zero()) || !a.is_finite()) {
        return Err(Error::InvalidArgument("scales must be finite and positive".into()));
    }
    Ok(())
}

/// `c(b, a) = (1/2π) ∫ a^{1/2} e^{iωb} conj(ψ̂(aω)) φ̂(ω) dω` at arbitrary
/// translations, by direct summation over the DFT bins of `φ`.
pub fn cwt<T: Real, W: Wavelet<T> + ?Sized>(
    phi: &SampledSignal<T>,
    psi: &W,
    scales: &[T],
    translations: &[T],
) -> Result<CoefficientTable<T>> {
    check_scales(scales)?;
    let bins = phi.spectrum_bins();
    let omegas: Vec<T> = (0..phi.len()).map(|k| phi.bin_frequency(k)).collect();
    let norm = phi.frequency_step() / T::two_pi();
    let mut values = Vec::with_capacity(scales.len() * translations.len());
    for &a in scales {
        let weighted: Vec<Complex<T>> = omegas
            .iter()
            .zip(&bins)
            .map(|(&w, &f)| psi.spectrum(a * w).conj() * f * a.sqrt())
            .collect();
        for &b in translations {
            let c = omegas
                .iter()
                .zip(&weighted)
                .fold(czero(), |acc: Complex<T>, (&w, &v)| acc + v * cis(w * b));
            values.push(c * norm);
        }
    }
    Ok(CoefficientTable {
        translations: translations.to_vec(),
        scales: scales.to_vec(),
        values,
    })
}

/// [`cwt`] with the translations fixed to the sample positions of `φ`,
/// computed with one inverse FFT per scale.
///
/// The grid is periodic: keep `φ` and the dilated wavelet well inside it.
pub fn cwt_on_sample_grid<T: Real, W: Wavelet<T> + ?Sized>(
    phi: &SampledSignal<T>,
    psi: &W,
    scales: &[T],
) -> Result<CoefficientTable<T>> {
    check_scales(scales)?;
    let m = phi.len();
    let bins = phi.spectrum_bins();
    let inverse = FftPlanner::<T>::new().plan_fft_inverse(m);
    let norm = phi.frequency_step() / T::two_pi();
    let mut values = Vec::with_capacity(scales.len() * m);
    for &a in scales {
        let mut row: Vec<Complex<T>> = bins
            .iter()
            .enumerate()
            .map(|(k, &f)| {
                let w = phi.bin_frequency(k);
                psi.spectrum(a * w).conj() * f * cis(w * phi.start()) * a.sqrt()
            })
            .collect();
        inverse.process(&mut row);
        values.extend(row.into_iter().map(|v| v * norm));
    }
    Ok(CoefficientTable {
        translations: phi.positions(),
        scales: scales.to_vec(),
        values,
    })
}

/// `∫∫ conj(c₁) c₂ db da/a²` over two sample-grid tables sharing a
/// log-spaced scale grid.
fn coefficient_pairing<T: Real>(c1: &CoefficientTable<T>, c2: &CoefficientTable<T>, dt: T) -> Complex<T> {
    let nb = c1.translations.len();
    let weights = log_scale_weights(&c1.scales);
    let mut acc = czero();
    for (s, w) in weights.iter().enumerate() {
        let row = (0..nb).fold(czero(), |acc: Complex<T>, j| acc + c1.at(s, j).conj() * c2.at(s, j));
        acc += row * *w;
    }
    acc * dt
}

/// `Σ |c(b,a)|² Δb·Δa/a² / (‖Cψ‖²·‖φ‖²)` on the sample grid × `scales`
/// (log-spaced). Exactly 1 in the continuum for analytic `φ`.
pub fn isometry_ratio<T: Real, W: Wavelet<T> + ?Sized>(phi: &SampledSignal<T>, psi: &W, scales: &[T]) -> Result<T> {
    let c_norm = duflo_moore_norm_squared(psi);
    if !(c_norm > T::zero()) || !c_norm.is_finite() {
        return Err(Error::Inadmissible("‖Cψ‖² is not a positive finite number".into()));
    }
    let energy = phi.energy();
    if energy == T::zero() {
        return Err(Error::InvalidArgument("isometry ratio of the zero signal".into()));
    }
    let table = cwt_on_sample_grid(phi, psi, scales)?;
    Ok(coefficient_pairing(&table, &table, phi.dt()).re / (c_norm * energy))
}

/// `|∫∫ conj(c_{ψ₁φ₁}) c_{ψ₂φ₂} db da/a² − ⟨φ₁,φ₂⟩⟨Cψ₂,Cψ₁⟩|` divided by
/// `‖Cψ₁‖‖Cψ₂‖‖φ₁‖‖φ₂‖`.
pub fn orthogonality_relation_defect<T: Real, A: Wavelet<T> + ?Sized, B: Wavelet<T> + ?Sized>(
    psi1: &A,
    psi2: &B,
    phi1: &SampledSignal<T>,
    phi2: &SampledSignal<T>,
    scales: &[T],
) -> Result<T> {
    let n1 = duflo_moore_norm_squared(psi1);
    let n2 = duflo_moore_norm_squared(psi2);
    if !(n1 > T::zero() && n2 > T::zero()) || !(n1 * n2).is_finite() {
        return Err(Error::Inadmissible("analyzing vector outside the domain of C".into()));
    }
    let t1 = cwt_on_sample_grid(phi1, psi1, scales)?;
    let t2 = cwt_on_sample_grid(phi2, psi2, scales)?;
    let lhs = coefficient_pairing(&t1, &t2, phi1.dt());
    let rhs = phi1.inner(phi2)? * duflo_moore_inner(psi2, psi1);
    let scale = (n1 * n2).sqrt() * phi1.norm() * phi2.norm();
    if scale == T::zero() {
        return Ok((lhs - rhs).norm_sqr().sqrt());
    }
    Ok((lhs - rhs).norm_sqr().sqrt() / scale)
}

/// Rectangle grid in `(b, ln a)` for Haar integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarGrid<T> {
    pub b_range: (T, T),
    pub log_a_range: (T, T),
    pub nodes: usize,
}

impl<T: Real> HaarGrid<T> {
    /// Trapezoidal `∫ f(b,a) db da/a²`, integrating in `u = ln a`.
    pub fn left_integral(&self, f: impl Fn(AffinePoint<T>) -> T) -> T {
        self.integral(|g| f(g) * g.left_haar_density() * g.a)
    }

    /// Trapezoidal `∫ f(b,a) db da/a`.
    pub fn right_integral(&self, f: impl Fn(AffinePoint<T>) -> T) -> T {
        self.integral(|g| f(g) * g.right_haar_density() * g.a)
    }

    // ∫ h(b, e^u) db du
    fn integral(&self, h: impl Fn(AffinePoint<T>) -> T) -> T {
        let n = self.nodes.max(2);
        let last = T::from_usize_lossy(n - 1);
        let db = (self.b_range.1 - self.b_range.0) / last;
        let du = (self.log_a_range.1 - self.log_a_range.0) / last;
        let edge = |i: usize| if i == 0 || i == n - 1 { T::lit(0.5) } else { T::one() };
        let mut acc = T::zero();
        for i in 0..n {
            let b = self.b_range.0 + db * T::from_usize_lossy(i);
            for j in 0..n {
                let a = (self.log_a_range.0 + du * T::from_usize_lossy(j)).exp();
                acc += h(AffinePoint { b, a }) * edge(i) * edge(j);
            }
        }
        acc * db * du
    }
}

/// `|∫ f(g₀g) dλ(g) − ∫ f(g) dλ(g)| / |∫ f dλ|` for the left Haar measure.
pub fn left_invariance_defect<T: Real>(grid: &HaarGrid<T>, f: impl Fn(AffinePoint<T>) -> T, g0: &AffinePoint<T>) -> T {
    let base = grid.left_integral(&f);
    let shifted = grid.left_integral(|g| f(g0.compose(&g)));
    (shifted - base).abs() / base.abs()
}

/// `∫ f(g g₀) dλ(g) / ∫ f dλ`; equals `Δ(g₀)⁻¹ = a₀` for the left Haar
/// measure of the (non-unimodular) affine group.
pub fn right_translate_ratio<T: Real>(grid: &HaarGrid<T>, f: impl Fn(AffinePoint<T>) -> T, g0: &AffinePoint<T>) -> T {
    let base = grid.left_integral(&f);
    grid.left_integral(|g| f(g.compose(g0))) / base
}

/// Reference discretization for wavelet checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceGrid<T> {
    pub samples: usize,
    pub dt: T,
    pub a_min: T,
    pub a_max: T,
    pub scales: usize,
}

impl<T: Real> Default for ReferenceGrid<T> {
    fn default() -> Self {
        ReferenceGrid {
            samples: 2048,
            dt: T::lit(0.05),
            a_min: T::lit(0.125),
            a_max: T::lit(8.0),
            scales: 97,
        }
    }
}

impl<T: Real> ReferenceGrid<T> {
    pub fn scale_grid(&self) -> Result<Vec<T>> {
        log_scales(self.a_min, self.a_max, self.scales)
    }
}

/// Analytic test signals.
pub mod fixtures {
    use super::*;

    /// Gaussian-windowed linear chirp `e^{−x²/(2s²)} e^{i(ω_c x + κx²/2)}`
    /// with `s = 2`, `ω_c = 8`, `κ = 1`, unit energy. Its spectrum sits
    /// in `ω ∈ [2, 14]`; negative frequencies carry `< 1e-12` of the energy.
    pub fn chirp<T: Real>(len: usize, dt: T) -> Result<SampledSignal<T>> {
        chirp_with(len, dt, T::lit(8.0), T::one(), T::lit(2.0))
    }

    pub fn chirp_with<T: Real>(len: usize, dt: T, center: T, rate: T, width: T) -> Result<SampledSignal<T>> {
        let raw = SampledSignal::from_fn(len, dt, |x| {
            let env = (-x * x / (T::lit(2.0) * width * width)).exp();
            cis(center * x + rate * x * x / T::lit(2.0)) * env
        })?;
        let n = raw.norm();
        Ok(raw.scaled(Complex::new(T::one() / n, T::zero())))
    }

    /// Unit-energy Gaussian wave packet `e^{−x²/(2s²)} e^{iω_c x}` centered
    /// at frequency `ω_c`.
    pub fn wave_packet<T: Real>(len: usize, dt: T, center: T, width: T) -> Result<SampledSignal<T>> {
        chirp_with(len, dt, center, T::zero(), width)
    }

    /// The default Morlet wavelet, `ω₀ = 6`.
    pub fn morlet<T: Real>() -> Morlet<T> {
        Morlet::default()
    }
}
