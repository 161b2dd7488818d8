//! Deterministic random instances.
//!
//! Generator contract: `rand_chacha::ChaCha8Rng::seed_from_u64(seed)`;
//! Gaussian draws use `rand_distr::StandardNormal` as `f64` and are then
//! converted to the working scalar; uniform draws use `Rng::random::<f64>()`
//! on `[0, 1)`. Complex Gaussians draw the real part first, then the
//! imaginary part. Every constructor below consumes the stream in a fixed
//! order, so the same seed gives the same instances on every platform.

use nalgebra::{Complex, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::group::GroupMeasure;
use crate::operator::{trace, DensityOperator, Operator, StateVector};
use crate::phase::PhaseFunction;
use crate::scalar::Real;

pub struct Instances {
    rng: ChaCha8Rng,
}

impl Instances {
    pub fn new(seed: u64) -> Self {
        Instances {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn complex<T: Real>(&mut self) -> Complex<T> {
        let re = self.normal();
        let im = self.normal();
        Complex::new(T::lit(re), T::lit(im))
    }

    /// Unnormalized complex Gaussian vector.
    pub fn gaussian_vector<T: Real>(&mut self, d: usize) -> StateVector<T> {
        let v: Vec<Complex<T>> = (0..d).map(|_| self.complex()).collect();
        DVector::from_vec(v)
    }

    /// Haar-random unit vector.
    pub fn state_vector<T: Real>(&mut self, d: usize) -> StateVector<T> {
        let v = self.gaussian_vector::<T>(d);
        let n = v.iter().fold(T::zero(), |a, x| a + x.norm_sqr()).sqrt();
        v.unscale(n)
    }

    /// Complex Ginibre matrix.
    pub fn operator<T: Real>(&mut self, rows: usize, cols: usize) -> Operator<T> {
        let entries: Vec<Complex<T>> = (0..rows * cols).map(|_| self.complex()).collect();
        Operator::from_vec(rows, cols, entries)
    }

    /// `G G† / tr(G G†)` with `G` a `d × rank` Ginibre matrix.
    pub fn density_of_rank<T: Real>(&mut self, d: usize, rank: usize) -> DensityOperator<T> {
        let g = self.operator::<T>(d, rank.max(1));
        let m = &g * g.adjoint();
        let tr = trace(&m).re;
        DensityOperator::new(m.unscale(tr)).expect("Wishart matrix is a state")
    }

    pub fn density<T: Real>(&mut self, d: usize) -> DensityOperator<T> {
        self.density_of_rank(d, d)
    }

    pub fn pure_density<T: Real>(&mut self, d: usize) -> DensityOperator<T> {
        let v = self.state_vector::<T>(d);
        DensityOperator::pure(&v).expect("unit vector")
    }

    /// Haar-ish unitary from the QR decomposition of a Ginibre matrix, with
    /// the phases of `R`'s diagonal absorbed.
    pub fn unitary<T: Real>(&mut self, d: usize) -> Operator<T> {
        let qr = self.operator::<T>(d, d).qr();
        let (mut q, r) = qr.unpack();
        for j in 0..d {
            let rjj = r[(j, j)];
            let m = rjj.norm_sqr().sqrt();
            if m > T::zero() {
                let phase = rjj / m;
                for i in 0..d {
                    q[(i, j)] *= phase;
                }
            }
        }
        q
    }

    /// Hermitian unit-trace operator with exactly one negative eigenvalue
    /// `-negative_mass` and a random positive remainder summing to
    /// `1 + negative_mass`.
    pub fn nonpositive_unit_trace<T: Real>(&mut self, d: usize, negative_mass: f64) -> Operator<T> {
        let weights: Vec<f64> = (0..d - 1).map(|_| 0.5 + self.uniform()).collect();
        let total: f64 = weights.iter().sum();
        let mut spectrum = vec![-negative_mass];
        spectrum.extend(weights.iter().map(|w| w / total * (1.0 + negative_mass)));
        let v = self.unitary::<T>(d);
        let diag = Operator::<T>::from_diagonal(&DVector::from_iterator(
            d,
            spectrum.iter().map(|&l| Complex::new(T::lit(l), T::zero())),
        ));
        let m = &v * diag * v.adjoint();
        (&m + m.adjoint()).scale(T::lit(0.5))
    }

    pub fn phase_function<T: Real>(&mut self, d: usize) -> PhaseFunction<T> {
        let values = (0..d * d).map(|_| self.complex()).collect();
        PhaseFunction::from_values(d, values).expect("length d²")
    }

    /// Probability measure with i.i.d. exponential weights (flat Dirichlet).
    pub fn probability<T: Real>(&mut self, d: usize) -> GroupMeasure<T> {
        let w: Vec<f64> = (0..d * d).map(|_| -(1.0 - self.uniform()).ln()).collect();
        let total: f64 = w.iter().sum();
        GroupMeasure::from_masses(d, w.into_iter().map(|x| T::lit(x / total)).collect())
            .expect("length d²")
    }
}
