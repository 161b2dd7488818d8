//! Convolution semigroups of probability measures on `Z_d × Z_d`, the
//! classical-quantum multiplication semigroups they induce on
//! characteristic functions, and the twirling (random displacement)
//! channel semigroups on states.
//!
//! Every weakly continuous convolution semigroup on a finite group is
//! compound Poisson, `p_t = e^{t·rate·(ν − δ₀)}` in the convolution algebra,
//! so that is the only family implemented.

use std::collections::BTreeMap;

use nalgebra::{Complex, ComplexField, DMatrix};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupMeasure, PhaseGroup, PhasePoint};
use crate::operator::{hermitian_eigenvalues, hs_norm, DensityOperator, Operator};
use crate::phase::PhaseFunction;
use crate::scalar::{creal, czero, Real};
use crate::weyl::WeylSystem;

/// Minimum number of Poisson terms kept in the series for `p_t`.
pub const MIN_POISSON_TERMS: usize = 30;

fn check_time<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(Error::NegativeTime(t.as_f64()));
    }
    Ok(())
}

/// Compound Poisson convolution semigroup with jump law `ν` and rate `λ`:
/// `p_t = Σ_k e^{−λt} (λt)^k / k! · ν^{∗k}`.
#[derive(Clone, Debug)]
pub struct MeasureSemigroup<T: Real> {
    group: PhaseGroup<T>,
    jump: GroupMeasure<T>,
    rate: T,
}

impl<T: Real> MeasureSemigroup<T> {
    pub fn compound_poisson(group: PhaseGroup<T>, jump: GroupMeasure<T>, rate: T) -> Result<Self> {
        group.check_same(jump.dim())?;
        if !jump.is_probability(T::check_tol()) {
            return Err(Error::NotProbability("jump measure".into()));
        }
        if !(rate > T::zero()) || !rate.is_finite() {
            return Err(Error::InvalidArgument(format!("rate must be positive, got {rate:?}")));
        }
        Ok(MeasureSemigroup { group, jump, rate })
    }

    pub fn group(&self) -> &PhaseGroup<T> {
        &self.group
    }

    pub fn jump_measure(&self) -> &GroupMeasure<T> {
        &self.jump
    }

    pub fn rate(&self) -> T {
        self.rate
    }

    /// Number of series terms used at time `t`: `max(30, ⌈10·λt⌉) + 1`.
    pub fn series_terms(&self, t: T) -> usize {
        let lt = (self.rate * t).as_f64();
        MIN_POISSON_TERMS.max((10.0 * lt).ceil() as usize) + 1
    }

    fn poisson_weights(&self, t: T) -> Vec<T> {
        let lt = self.rate * t;
        let n = self.series_terms(t);
        if lt == T::zero() {
            let mut w = vec![T::zero(); n];
            w[0] = T::one();
            return w;
        }
        let ln_lt = lt.ln();
        let mut ln_fact = T::zero();
        (0..n)
            .map(|k| {
                if k > 0 {
                    ln_fact += T::from_usize_lossy(k).ln();
                }
                (-lt + T::from_usize_lossy(k) * ln_lt - ln_fact).exp()
            })
            .collect()
    }

    /// Probability mass discarded by truncating the Poisson series at time `t`.
    pub fn truncation_tail(&self, t: T) -> T {
        let kept = self.poisson_weights(t).into_iter().fold(T::zero(), |a, b| a + b);
        (T::one() - kept).max(T::zero())
    }

    /// `p_t`, by the truncated Poisson series of convolution powers.
    pub fn measure_at(&self, t: T) -> Result<GroupMeasure<T>> {
        check_time(t)?;
        let weights = self.poisson_weights(t);
        let mut power = GroupMeasure::point_mass(&self.group, PhasePoint::ORIGIN);
        let mut acc = GroupMeasure::zero(self.group.dim());
        for (k, &w) in weights.iter().enumerate() {
            if k > 0 {
                power = power.convolve(&self.jump, &self.group)?;
            }
            acc.scale_add(&power, w);
        }
        Ok(acc)
    }

    /// `P_t(z) = Σ_w ω^{σ(z, w)} p_t(w)`.
    pub fn classical_char(&self, t: T) -> Result<PhaseFunction<T>> {
        let m = self.measure_at(t)?;
        self.group.classical_characteristic(&m)
    }

    /// Closed form `P_t = exp(λt(ν̃ − 1))`, computed independently of the
    /// series.
    pub fn classical_char_closed_form(&self, t: T) -> Result<PhaseFunction<T>> {
        check_time(t)?;
        let nu = self.group.classical_characteristic(&self.jump)?;
        let lt = self.rate * t;
        let values = nu
            .values()
            .iter()
            .map(|&v| ComplexField::exp((v - creal(T::one())) * lt))
            .collect();
        PhaseFunction::from_values(self.group.dim(), values)
    }

    /// `p_t` recovered from the closed-form characteristic function,
    /// `p_t = d⁻¹ F_s P_t`.
    pub fn measure_at_closed_form(&self, t: T) -> Result<GroupMeasure<T>> {
        let chi = self.classical_char_closed_form(t)?;
        let f = self.group.symplectic_fourier(&chi);
        let inv_d = T::one() / T::from_usize_lossy(self.group.dim());
        GroupMeasure::from_masses(
            self.group.dim(),
            f.values().iter().map(|v| v.re * inv_d).collect(),
        )
    }

    /// Twirling channel driven by `p_t`.
    pub fn channel_at<'w>(&self, weyl: &'w WeylSystem<T>, t: T) -> Result<TwirlingChannel<'w, T>> {
        TwirlingChannel::new(weyl, self.measure_at(t)?)
    }
}

/// Multiplication semigroup `u ↦ P_t · u` on characteristic functions, with
/// `P_t` precomputed for a fixed set of times.
///
/// Built once, then read-only: concurrent lookups are safe.
#[derive(Clone, Debug)]
pub struct ClassicalQuantumSemigroup<T: Real> {
    base: MeasureSemigroup<T>,
    cache: BTreeMap<u64, PhaseFunction<T>>,
}

fn time_key<T: Real>(t: T) -> u64 {
    t.as_f64().to_bits()
}

impl<T: Real> ClassicalQuantumSemigroup<T> {
    pub fn new(base: MeasureSemigroup<T>, times: &[T]) -> Result<Self> {
        let mut cache = BTreeMap::new();
        for &t in times {
            cache.insert(time_key(t), base.classical_char(t)?);
        }
        Ok(ClassicalQuantumSemigroup { base, cache })
    }

    pub fn base(&self) -> &MeasureSemigroup<T> {
        &self.base
    }

    /// `P_t`, from the cache when `t` was requested at construction.
    pub fn characteristic(&self, t: T) -> Result<PhaseFunction<T>> {
        check_time(t)?;
        match self.cache.get(&time_key(t)) {
            Some(p) => Ok(p.clone()),
            None => self.base.classical_char(t),
        }
    }

    /// `(S_t u)(z) = P_t(z) · u(z)`.
    pub fn cq_apply(&self, t: T, u: &PhaseFunction<T>) -> Result<PhaseFunction<T>> {
        self.base.group.check_same(u.dim())?;
        self.characteristic(t)?.pointwise_mul(u)
    }

    /// `‖Q(S_t u) − 𝔗_t(Q u)‖_HS`.
    pub fn intertwining_defect(&self, weyl: &WeylSystem<T>, t: T, u: &PhaseFunction<T>) -> Result<T> {
        let lhs = weyl.quantize(&self.cq_apply(t, u)?)?;
        let channel = self.base.channel_at(weyl, t)?;
        let rhs = channel.apply(&weyl.quantize(u)?)?;
        Ok(hs_norm(&(lhs - rhs)))
    }
}

/// Random-displacement channel `A ↦ Σ_z p(z) U(z) A U(z)†`.
#[derive(Clone, Debug)]
pub struct TwirlingChannel<'w, T: Real> {
    weyl: &'w WeylSystem<T>,
    weights: GroupMeasure<T>,
}

/// Complete-positivity and trace-preservation diagnostics of a channel.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChoiReport<T: Real> {
    pub min_eigenvalue: T,
    pub trace_preserving_defect: T,
}

impl<'w, T: Real> TwirlingChannel<'w, T> {
    pub fn new(weyl: &'w WeylSystem<T>, weights: GroupMeasure<T>) -> Result<Self> {
        weyl.group().check_same(weights.dim())?;
        if !weights.is_probability(T::check_tol()) {
            return Err(Error::NotProbability("twirling weights".into()));
        }
        Ok(TwirlingChannel { weyl, weights })
    }

    pub fn identity(weyl: &'w WeylSystem<T>) -> Self {
        TwirlingChannel {
            weights: GroupMeasure::point_mass(weyl.group(), PhasePoint::ORIGIN),
            weyl,
        }
    }

    pub fn weights(&self) -> &GroupMeasure<T> {
        &self.weights
    }

    /// The channel as a linear map on all operators.
    pub fn apply(&self, a: &Operator<T>) -> Result<Operator<T>> {
        self.weyl.group().check_same(a.nrows())?;
        self.weyl.group().check_same(a.ncols())?;
        let d = self.weyl.dim();
        let mut acc = Operator::<T>::zeros(d, d);
        for (i, &w) in self.weights.masses().iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            let u = self.weyl.displacement_at(i);
            acc += (u * a * u.adjoint()).scale(w);
        }
        Ok(acc)
    }

    /// `𝔗(ρ)`; the result is validated as a state.
    pub fn twirl_apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        let out = self.apply(rho.matrix())?;
        // Hermitize away roundoff before validation.
        DensityOperator::new((&out + out.adjoint()).scale(T::lit(0.5)))
    }

    /// `J = Σ_{ij} |i⟩⟨j| ⊗ 𝔗(|i⟩⟨j|)`, indexed `(i·d + k, j·d + l)`.
    pub fn choi_matrix(&self) -> DMatrix<Complex<T>> {
        let d = self.weyl.dim();
        let mut j = DMatrix::from_element(d * d, d * d, czero());
        for a in 0..d {
            for b in 0..d {
                let mut e = Operator::<T>::zeros(d, d);
                e[(a, b)] = creal(T::one());
                let img = self.apply(&e).expect("dimension checked");
                for k in 0..d {
                    for l in 0..d {
                        j[(a * d + k, b * d + l)] = img[(k, l)];
                    }
                }
            }
        }
        j
    }

    /// Minimum Choi eigenvalue and `max |tr_out J − I|`.
    pub fn choi_check(&self) -> ChoiReport<T> {
        let d = self.weyl.dim();
        let j = self.choi_matrix();
        let min_eigenvalue = hermitian_eigenvalues(&j)
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        let mut worst = T::zero();
        for a in 0..d {
            for b in 0..d {
                let partial: Complex<T> = (0..d).fold(czero(), |acc, k| acc + j[(a * d + k, b * d + k)]);
                let target = if a == b { creal(T::one()) } else { czero() };
                worst = worst.max((partial - target).norm_sqr().sqrt());
            }
        }
        ChoiReport {
            min_eigenvalue,
            trace_preserving_defect: worst,
        }
    }
}

/// Entropy floor: eigenvalues below this are treated as zero before the log.
pub const ENTROPY_EIGENVALUE_CLIP: f64 = 1e-15;

/// `S(ρ) = −Σ λ log λ` (natural log, `0 log 0 = 0`).
pub fn von_neumann_entropy<T: Real>(rho: &DensityOperator<T>) -> T {
    let clip = T::lit(ENTROPY_EIGENVALUE_CLIP);
    rho.eigenvalues()
        .into_iter()
        .filter(|&l| l > clip)
        .fold(T::zero(), |acc, l| acc - l * l.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::max_abs_diff;
    use crate::random::Instances;

    fn setup(d: usize, rate: f64, jump: Option<GroupMeasure<f64>>) -> (WeylSystem<f64>, MeasureSemigroup<f64>) {
        let w = WeylSystem::new(d).unwrap();
        let jump = jump.unwrap_or_else(|| GroupMeasure::uniform(w.group()));
        let sg = MeasureSemigroup::compound_poisson(w.group().clone(), jump, rate).unwrap();
        (w, sg)
    }

    #[test]
    fn measure_at_zero_is_delta() {
        let (w, sg) = setup(5, 1.3, None);
        let m = sg.measure_at(0.0).unwrap();
        assert_eq!(m, GroupMeasure::point_mass(w.group(), PhasePoint::ORIGIN));
        assert!(matches!(sg.measure_at(-1.0), Err(Error::NegativeTime(_))));
    }

    #[test]
    fn measure_semigroup_law() {
        let mut inst = Instances::new(3);
        let jump = inst.probability::<f64>(5);
        let (_, sg) = setup(5, 0.8, Some(jump));
        for _ in 0..5 {
            let t = inst.uniform_in(0.0, 2.0);
            let s = inst.uniform_in(0.0, 2.0);
            let a = sg.measure_at(t).unwrap();
            let b = sg.measure_at(s).unwrap();
            let ab = a.convolve(&b, sg.group()).unwrap();
            assert!(ab.max_abs_diff(&sg.measure_at(t + s).unwrap()) < 1e-10);
            assert!(a.is_probability(1e-12));
        }
    }

    #[test]
    fn uniform_jumps_equilibrate() {
        let (w, sg) = setup(5, 1.0, None);
        let m = sg.measure_at(50.0).unwrap();
        assert!(m.max_abs_diff(&GroupMeasure::uniform(w.group())) < 1e-8);
        assert!(sg.truncation_tail(50.0) < 1e-12);
    }

    #[test]
    fn closed_form_characteristic() {
        let mut inst = Instances::new(10);
        let jump = inst.probability::<f64>(5);
        let (_, sg) = setup(5, 1.7, Some(jump));
        for t in [0.0, 0.3, 1.0, 2.5] {
            let series = sg.classical_char(t).unwrap();
            let closed = sg.classical_char_closed_form(t).unwrap();
            assert!(series.max_abs_diff(&closed) < 1e-10);
            assert!(series.is_normalized(1e-12));
            assert!(series.max_abs() <= 1.0 + 1e-12);
            let m = sg.measure_at(t).unwrap();
            assert!(m.max_abs_diff(&sg.measure_at_closed_form(t).unwrap()) < 1e-10);
        }
        let p0 = sg.classical_char(0.0).unwrap();
        assert!(p0.max_abs_diff(&PhaseFunction::constant(5, creal(1.0))) < 1e-14);
        let pt = sg.classical_char(0.4).unwrap();
        let ps = sg.classical_char(0.9).unwrap();
        let pts = sg.classical_char(1.3).unwrap();
        assert!(pt.pointwise_mul(&ps).unwrap().max_abs_diff(&pts) < 1e-10);
    }

    #[test]
    fn cq_apply_examples() {
        let (w, sg) = setup(5, 1.0, None);
        let cq = ClassicalQuantumSemigroup::new(sg, &[0.0, 0.7]).unwrap();
        let mut inst = Instances::new(2);
        let chi = w.characteristic_function(&inst.density::<f64>(5)).unwrap();
        assert!(cq.cq_apply(0.0, &chi).unwrap().max_abs_diff(&chi) < 1e-14);
        let out = cq.cq_apply(0.7, &chi).unwrap();
        let v = w.group().quantum_positive_type_full(&out).unwrap();
        assert!(v.min_eigenvalue >= -1e-10);
        assert!(out.is_normalized(1e-12));
        let delta = PhaseFunction::delta(5, PhasePoint::ORIGIN, creal(1.0));
        assert!(cq.cq_apply(0.7, &delta).unwrap().max_abs_diff(&delta) < 1e-12);
        assert!(cq.cq_apply(-0.1, &delta).is_err());
    }

    #[test]
    fn twirl_examples() {
        let (w, _) = setup(5, 1.0, None);
        let mut inst = Instances::new(6);
        let rho = inst.density::<f64>(5);
        let id = TwirlingChannel::identity(&w);
        assert!(max_abs_diff(id.twirl_apply(&rho).unwrap().matrix(), rho.matrix()) < 1e-14);
        let uni = TwirlingChannel::new(&w, GroupMeasure::uniform(w.group())).unwrap();
        let out = uni.twirl_apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), DensityOperator::maximally_mixed(5).matrix()) < 1e-12);
    }

    #[test]
    fn channel_semigroup_law() {
        let mut inst = Instances::new(13);
        let jump = inst.probability::<f64>(3);
        let (w, sg) = setup(3, 1.1, Some(jump));
        let rho = inst.density::<f64>(3);
        let a = sg.channel_at(&w, 0.4).unwrap();
        let b = sg.channel_at(&w, 0.6).unwrap();
        let ab = sg.channel_at(&w, 1.0).unwrap();
        let lhs = a.twirl_apply(&b.twirl_apply(&rho).unwrap()).unwrap();
        let rhs = ab.twirl_apply(&rho).unwrap();
        assert!(max_abs_diff(lhs.matrix(), rhs.matrix()) < 1e-10);
    }

    #[test]
    fn intertwining_examples() {
        let mut inst = Instances::new(19);
        let jump = inst.probability::<f64>(5);
        let (w, sg) = setup(5, 0.9, Some(jump));
        let cq = ClassicalQuantumSemigroup::new(sg, &[0.1, 1.0, 3.0]).unwrap();
        let chi = w.characteristic_function(&inst.density::<f64>(5)).unwrap();
        for t in [0.1, 1.0, 3.0] {
            assert!(cq.intertwining_defect(&w, t, &chi).unwrap() < 1e-10);
        }
        assert_eq!(cq.intertwining_defect(&w, 0.0, &chi).unwrap(), 0.0);
        let delta = PhaseFunction::delta(5, PhasePoint::ORIGIN, creal(1.0));
        assert!(cq.intertwining_defect(&w, 1.0, &delta).unwrap() < 1e-12);
    }

    #[test]
    fn entropy_examples() {
        let mut inst = Instances::new(1);
        let pure = inst.pure_density::<f64>(5);
        assert!(von_neumann_entropy(&pure).abs() < 1e-10);
        let mixed = DensityOperator::<f64>::maximally_mixed(5);
        assert!((von_neumann_entropy(&mixed) - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn entropy_non_decreasing_along_twirl() {
        let mut inst = Instances::new(29);
        let jump = inst.probability::<f64>(5);
        let (w, sg) = setup(5, 1.0, Some(jump));
        let rho = inst.density_of_rank::<f64>(5, 2);
        let mut prev = von_neumann_entropy(&rho);
        for k in 1..=10 {
            let ch = sg.channel_at(&w, 0.2 * k as f64).unwrap();
            let s = von_neumann_entropy(&ch.twirl_apply(&rho).unwrap());
            assert!(s >= prev - 1e-10);
            assert!(s <= 5f64.ln() + 1e-12);
            prev = s;
        }
    }

    #[test]
    fn choi_examples() {
        let (w, sg) = setup(3, 1.0, None);
        let id = TwirlingChannel::identity(&w);
        let j = id.choi_matrix();
        let mut omega = nalgebra::DVector::<Complex<f64>>::zeros(9);
        for i in 0..3 {
            omega[i * 3 + i] = creal(1.0);
        }
        assert!(max_abs_diff(&j, &(&omega * omega.adjoint())) < 1e-14);
        let r = id.choi_check();
        assert!(r.min_eigenvalue >= -1e-12 && r.trace_preserving_defect < 1e-14);

        let uni = TwirlingChannel::new(&w, GroupMeasure::uniform(w.group())).unwrap();
        let j = uni.choi_matrix();
        assert!(max_abs_diff(&j, &DMatrix::identity(9, 9).unscale(3.0)) < 1e-12);

        let r = sg.channel_at(&w, 0.8).unwrap().choi_check();
        assert!(r.min_eigenvalue >= -1e-10 && r.trace_preserving_defect < 1e-10);
    }

    #[test]
    fn rejects_bad_construction() {
        let w = WeylSystem::<f64>::new(3).unwrap();
        let bad = GroupMeasure::from_masses(3, vec![0.2; 9]).unwrap();
        assert!(MeasureSemigroup::compound_poisson(w.group().clone(), bad.clone(), 1.0).is_err());
        assert!(TwirlingChannel::new(&w, bad).is_err());
        let u = GroupMeasure::uniform(w.group());
        assert!(MeasureSemigroup::compound_poisson(w.group().clone(), u, 0.0).is_err());
    }
}
