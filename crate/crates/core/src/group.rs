//! The finite phase space `Z_d × Z_d` (odd `d`), its symplectic form,
//! the symmetric multiplier and the measure/convolution layer.

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cis, Real};

/// A point `(q, p)` of the phase space, both coordinates reduced mod `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: usize,
    pub p: usize,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0, p: 0 };

    pub fn new(q: usize, p: usize) -> Self {
        PhasePoint { q, p }
    }
}

/// The group `G = Z_d × Z_d` with counting Haar measure.
///
/// Holds the table of `d`-th roots of unity so that the multiplier and every
/// Fourier kernel are lookups rather than trigonometric evaluations.
#[derive(Clone, Debug)]
pub struct PhaseGroup<T: Real> {
    d: usize,
    half_inv: usize,
    roots: Vec<Complex<T>>,
}

impl<T: Real> PhaseGroup<T> {
    pub fn new(d: usize) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidDimension(d));
        }
        let two_pi_over_d = T::two_pi() / T::from_usize_lossy(d);
        let roots = (0..d)
            .map(|k| cis(two_pi_over_d * T::from_usize_lossy(k)))
            .collect();
        Ok(PhaseGroup {
            d,
            half_inv: d.div_ceil(2),
            roots,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of group elements, `d²`.
    #[inline]
    pub fn order(&self) -> usize {
        self.d * self.d
    }

    /// `2⁻¹ mod d`.
    #[inline]
    pub fn half_inv(&self) -> usize {
        self.half_inv
    }

    /// `ω = e^{2πi/d}`.
    #[inline]
    pub fn omega(&self) -> Complex<T> {
        self.roots[1 % self.d]
    }

    /// `ω^k` for any integer exponent.
    #[inline]
    pub fn root(&self, k: i64) -> Complex<T> {
        self.roots[k.rem_euclid(self.d as i64) as usize]
    }

    /// Counting measure: every element has weight one.
    #[inline]
    pub fn haar_weight(&self) -> T {
        T::one()
    }

    /// The group is abelian, hence unimodular.
    #[inline]
    pub fn modular_function(&self, _z: PhasePoint) -> T {
        T::one()
    }

    pub fn points(&self) -> impl Iterator<Item = PhasePoint> + '_ {
        (0..self.order()).map(move |i| self.point(i))
    }

    /// Row-major (q-major) index of a point.
    #[inline]
    pub fn index(&self, z: PhasePoint) -> usize {
        z.q * self.d + z.p
    }

    #[inline]
    pub fn point(&self, index: usize) -> PhasePoint {
        PhasePoint::new(index / self.d, index % self.d)
    }

    pub fn check_point(&self, z: PhasePoint) -> Result<PhasePoint> {
        if z.q >= self.d || z.p >= self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: z.q.max(z.p) + 1,
            });
        }
        Ok(z)
    }

    #[inline]
    pub fn add(&self, z: PhasePoint, w: PhasePoint) -> PhasePoint {
        PhasePoint::new((z.q + w.q) % self.d, (z.p + w.p) % self.d)
    }

    #[inline]
    pub fn neg(&self, z: PhasePoint) -> PhasePoint {
        PhasePoint::new((self.d - z.q) % self.d, (self.d - z.p) % self.d)
    }

    #[inline]
    pub fn sub(&self, z: PhasePoint, w: PhasePoint) -> PhasePoint {
        self.add(z, self.neg(w))
    }

    /// `σ(z, w) = z.q·w.p − z.p·w.q mod d`, without range checks.
    #[inline]
    pub(crate) fn sigma(&self, z: PhasePoint, w: PhasePoint) -> usize {
        let d = self.d;
        let a = (z.q * w.p) % d;
        let b = (z.p * w.q) % d;
        (a + d - b) % d
    }

    /// The symplectic form `σ(z, w) = z.q·w.p − z.p·w.q` reduced mod `d`.
    pub fn symplectic_index(&self, z: PhasePoint, w: PhasePoint) -> Result<usize> {
        self.check_point(z)?;
        self.check_point(w)?;
        Ok(self.sigma(z, w))
    }

    #[inline]
    pub(crate) fn mult(&self, z: PhasePoint, w: PhasePoint) -> Complex<T> {
        self.roots[(self.half_inv * self.sigma(z, w)) % self.d]
    }

    /// The symmetric 2-cocycle `m(z, w) = ω^{2⁻¹·σ(z, w)}`.
    pub fn multiplier(&self, z: PhasePoint, w: PhasePoint) -> Result<Complex<T>> {
        self.check_point(z)?;
        self.check_point(w)?;
        Ok(self.mult(z, w))
    }

    /// Symplectic character `ω^{σ(z, w)}`.
    #[inline]
    pub(crate) fn character(&self, z: PhasePoint, w: PhasePoint) -> Complex<T> {
        self.roots[self.sigma(z, w)]
    }

    pub(crate) fn check_same(&self, other_dim: usize) -> Result<()> {
        if self.d != other_dim {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other_dim,
            });
        }
        Ok(())
    }
}

/// A real measure on `Z_d × Z_d`, stored as a dense q-major table of masses.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMeasure<T: Real> {
    d: usize,
    mass: Vec<T>,
}

impl<T: Real> GroupMeasure<T> {
    pub fn from_masses(d: usize, mass: Vec<T>) -> Result<Self> {
        if mass.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: mass.len(),
            });
        }
        Ok(GroupMeasure { d, mass })
    }

    /// Validated probability measure: nonnegative masses summing to one.
    pub fn probability(d: usize, mass: Vec<T>) -> Result<Self> {
        let m = Self::from_masses(d, mass)?;
        let tol = T::check_tol();
        if let Some(bad) = m.mass.iter().find(|&&x| x < -tol || !x.is_finite()) {
            return Err(Error::NotProbability(format!("negative mass {bad:?}")));
        }
        let total = m.total();
        if (total - T::one()).abs() > tol {
            return Err(Error::NotProbability(format!("total mass {total:?}")));
        }
        Ok(m)
    }

    pub fn zero(d: usize) -> Self {
        GroupMeasure {
            d,
            mass: vec![T::zero(); d * d],
        }
    }

    /// Unit point mass `δ_z`.
    pub fn point_mass(group: &PhaseGroup<T>, z: PhasePoint) -> Self {
        let mut m = Self::zero(group.dim());
        m.mass[group.index(z)] = T::one();
        m
    }

    /// Normalized uniform measure.
    pub fn uniform(group: &PhaseGroup<T>) -> Self {
        let n = group.order();
        GroupMeasure {
            d: group.dim(),
            mass: vec![T::one() / T::from_usize_lossy(n); n],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn masses(&self) -> &[T] {
        &self.mass
    }

    pub fn total(&self) -> T {
        self.mass.iter().fold(T::zero(), |acc, &x| acc + x)
    }

    pub fn is_probability(&self, tol: T) -> bool {
        self.mass.iter().all(|&x| x >= -tol) && (self.total() - T::one()).abs() <= tol
    }

    /// `(μ ∗ ν)(z) = Σ_w μ(w)·ν(z − w)`.
    pub fn convolve(&self, other: &GroupMeasure<T>, group: &PhaseGroup<T>) -> Result<Self> {
        group.check_same(self.d)?;
        group.check_same(other.d)?;
        let n = group.order();
        let mut out = vec![T::zero(); n];
        for (wi, &mw) in self.mass.iter().enumerate() {
            if mw == T::zero() {
                continue;
            }
            let w = group.point(wi);
            for (vi, &nv) in other.mass.iter().enumerate() {
                let z = group.add(w, group.point(vi));
                out[group.index(z)] += mw * nv;
            }
        }
        Ok(GroupMeasure { d: self.d, mass: out })
    }

    pub fn max_abs_diff(&self, other: &GroupMeasure<T>) -> T {
        self.mass
            .iter()
            .zip(&other.mass)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()))
    }

    pub(crate) fn scale_add(&mut self, other: &GroupMeasure<T>, weight: T) {
        for (a, &b) in self.mass.iter_mut().zip(&other.mass) {
            *a += weight * b;
        }
    }
}
