//! Truncated Fock-basis realization of the continuous Weyl system on
//! `L²(R)` (one mode, `ħ = 1`).
//!
//! A phase-space point `(q, p)` corresponds to the complex amplitude
//! `α = (q + ip)/√2`, and `D(α) = exp(α a† − ᾱ a) = exp(i(p q̂ − q p̂))`.
//! Matrix elements come from the closed Laguerre form, so every entry is
//! the exact entry of the untruncated operator. Truncation only bites in
//! products and sums over the basis: assertions are meant for the trusted
//! block (lowest `N/2` levels) and the trusted disk `|α| ≤ √N / 4`.

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{hermitian_asymmetry, hermitian_op_norm, min_eigenvalue, DensityOperator, Operator, StateVector};
use crate::phase::PositivityVerdict;
use crate::scalar::{cis, czero, Real};

/// Number basis `|0⟩ .. |N−1⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    n: usize,
}

impl FockSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("Fock truncation must be >= 2, got {n}")));
        }
        Ok(FockSpace { n })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Levels inside which truncation effects are negligible.
    pub fn trusted_block(&self) -> usize {
        self.n / 2
    }

    /// Radius `√N / 4` of the trusted disk, measured as `|z| = √(q² + p²)`.
    pub fn trusted_radius<T: Real>(&self) -> T {
        T::from_usize_lossy(self.n).sqrt() / T::lit(4.0)
    }

    pub fn vacuum<T: Real>(&self) -> StateVector<T> {
        let mut v = StateVector::zeros(self.n);
        v[0] = Complex::new(T::one(), T::zero());
        v
    }

    /// Truncated annihilation operator `a|n⟩ = √n |n−1⟩`.
    pub fn annihilation<T: Real>(&self) -> Operator<T> {
        let mut a = Operator::zeros(self.n, self.n);
        for k in 1..self.n {
            a[(k - 1, k)] = Complex::new(T::from_usize_lossy(k).sqrt(), T::zero());
        }
        a
    }
}

/// A point of the continuous phase space `R²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContinuousPoint<T> {
    pub q: T,
    pub p: T,
}

impl<T: Real> ContinuousPoint<T> {
    pub fn new(q: T, p: T) -> Self {
        ContinuousPoint { q, p }
    }

    /// Point with complex amplitude `α = (q + ip)/√2`.
    pub fn from_alpha(alpha: Complex<T>) -> Self {
        let s = T::lit(2.0).sqrt();
        ContinuousPoint {
            q: alpha.re * s,
            p: alpha.im * s,
        }
    }

    pub fn alpha(&self) -> Complex<T> {
        let s = T::lit(2.0).sqrt();
        Complex::new(self.q / s, self.p / s)
    }

    pub fn add(&self, other: &Self) -> Self {
        ContinuousPoint::new(self.q + other.q, self.p + other.p)
    }

    pub fn neg(&self) -> Self {
        ContinuousPoint::new(-self.q, -self.p)
    }

    /// Real symplectic form `ω(z, z') = q·p' − p·q'`.
    pub fn symplectic(&self, other: &Self) -> T {
        self.q * other.p - self.p * other.q
    }
}

/// Multiplier `e^{i ω(z, w)/2}` of the continuous Weyl system.
pub fn continuous_multiplier<T: Real>(z: &ContinuousPoint<T>, w: &ContinuousPoint<T>) -> Complex<T> {
    cis(z.symplectic(w) / T::lit(2.0))
}

/// Composition in the Heisenberg–Weyl group:
/// `(τ, z)·(τ', z') = (τ + τ' + ω(z, z')/2, z + z')`.
pub fn heisenberg_compose<T: Real>(
    a: (T, ContinuousPoint<T>),
    b: (T, ContinuousPoint<T>),
) -> (T, ContinuousPoint<T>) {
    (a.0 + b.0 + a.1.symplectic(&b.1) / T::lit(2.0), a.1.add(&b.1))
}

/// Coherent state `e^{−|α|²/2} Σ_n αⁿ/√(n!) |n⟩`, truncated.
pub fn coherent_state<T: Real>(z: &ContinuousPoint<T>, space: &FockSpace) -> StateVector<T> {
    let alpha = z.alpha();
    let mut v = StateVector::zeros(space.dim());
    let mut c = Complex::new((-alpha.norm_sqr() / T::lit(2.0)).exp(), T::zero());
    v[0] = c;
    for k in 1..space.dim() {
        c = c * alpha / T::from_usize_lossy(k).sqrt();
        v[k] = c;
    }
    v
}

/// Closed form `⟨α|β⟩ = exp(−(|α|² + |β|²)/2 + ᾱβ)`.
pub fn coherent_overlap_exact<T: Real>(z1: &ContinuousPoint<T>, z2: &ContinuousPoint<T>) -> Complex<T> {
    let (a, b) = (z1.alpha(), z2.alpha());
    let half = T::lit(0.5);
    let e = a.conj() * b - Complex::new((a.norm_sqr() + b.norm_sqr()) * half, T::zero());
    nalgebra::ComplexField::exp(e)
}

/// `L_j^{(k)}(x)` for `j = 0..len`.
fn laguerre_column<T: Real>(k: usize, x: T, len: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let kf = T::from_usize_lossy(k);
    out.push(T::one());
    if len > 1 {
        out.push(T::one() + kf - x);
    }
    for j in 1..len.saturating_sub(1) {
        let jf = T::from_usize_lossy(j);
        let next = ((T::lit(2.0) * jf + T::one() + kf - x) * out[j] - (jf + kf) * out[j - 1]) / (jf + T::one());
        out.push(next);
    }
    out
}

/// `e^{−iτ} D(α)` in the number basis, via
/// `⟨m|D|n⟩ = √(n!/m!) α^{m−n} e^{−|α|²/2} L_n^{(m−n)}(|α|²)` for `m ≥ n`
/// and the mirrored formula with `−ᾱ` above the diagonal.
pub fn displacement_fock<T: Real>(z: &ContinuousPoint<T>, space: &FockSpace, central_phase: T) -> Operator<T> {
    let n = space.dim();
    let alpha = z.alpha();
    let x = alpha.norm_sqr();
    let gauss = (-x / T::lit(2.0)).exp();
    let minus_conj = -alpha.conj();
    let mut d = Operator::<T>::zeros(n, n);
    for k in 0..n {
        let lag = laguerre_column(k, x, n - k);
        let (below, above) = (powi(alpha, k), powi(minus_conj, k));
        // ln((j+k)!/j!), updated in j
        let mut ln_ratio: T = (1..=k).map(|t| T::from_usize_lossy(t).ln()).fold(T::zero(), |a, b| a + b);
        for (j, &l) in lag.iter().enumerate() {
            if j > 0 {
                ln_ratio += T::from_usize_lossy(j + k).ln() - T::from_usize_lossy(j).ln();
            }
            let scale = (-ln_ratio / T::lit(2.0)).exp() * gauss * l;
            d[(j + k, j)] = below * scale;
            if k > 0 {
                d[(j, j + k)] = above * scale;
            }
        }
    }
    if central_phase != T::zero() {
        d *= cis(-central_phase);
    }
    d
}

fn powi<T: Real>(z: Complex<T>, k: usize) -> Complex<T> {
    (0..k).fold(Complex::new(T::one(), T::zero()), |acc, _| acc * z)
}

/// `exp(α a† − ᾱ a)` of the truncated ladder operators, by Padé
/// exponentiation. Agrees with [`displacement_fock`] on the trusted block.
pub fn displacement_fock_expm<T: Real>(z: &ContinuousPoint<T>, space: &FockSpace) -> Operator<T> {
    let a = space.annihilation::<T>();
    let alpha = z.alpha();
    let gen = a.adjoint() * alpha - &a * alpha.conj();
    gen.exp()
}

/// Upper-left `k × k` block.
pub fn lower_block<T: Real>(m: &Operator<T>, k: usize) -> Operator<T> {
    m.view((0, 0), (k, k)).into_owned()
}

/// Polar trapezoidal quadrature of `(1/π) ∫_{|α| ≤ R} |α⟩⟨α| d²α`,
/// restricted to the lowest `levels` Fock levels, and its operator-norm
/// distance to the identity there.
///
/// `grid` is the number of radial intervals and of angular nodes.
pub fn resolution_defect_quadrature<T: Real>(space: &FockSpace, radius: T, grid: usize, levels: usize) -> Result<T> {
    if !(radius > T::zero()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if grid < 16 {
        return Err(Error::InvalidArgument(format!("grid must be >= 16, got {grid}")));
    }
    if levels == 0 || levels > space.dim() {
        return Err(Error::InvalidArgument(format!(
            "levels must be in 1..={}, got {levels}",
            space.dim()
        )));
    }
    let sub = FockSpace { n: levels };
    let dr = radius / T::from_usize_lossy(grid);
    let dtheta = T::two_pi() / T::from_usize_lossy(grid);
    let mut acc = Operator::<T>::zeros(levels, levels);
    for i in 0..=grid {
        let r = dr * T::from_usize_lossy(i);
        let edge = if i == 0 || i == grid { T::lit(0.5) } else { T::one() };
        let w = edge * dr * r * dtheta / T::pi();
        if w == T::zero() {
            continue;
        }
        for j in 0..grid {
            let alpha = cis(dtheta * T::from_usize_lossy(j)) * r;
            let v = coherent_state(&ContinuousPoint::from_alpha(alpha), &sub);
            acc += (&v * v.adjoint()).scale(w);
        }
    }
    let diff = acc - Operator::<T>::identity(levels, levels);
    Ok(hermitian_op_norm(&diff))
}

/// `ρ̃(z) = tr(D(z)† ρ)` sampled at `points`.
pub fn characteristic_fock<T: Real>(
    rho: &DensityOperator<T>,
    space: &FockSpace,
    points: &[ContinuousPoint<T>],
) -> Result<Vec<Complex<T>>> {
    if rho.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho.dim(),
        });
    }
    Ok(points
        .iter()
        .map(|z| {
            let d = displacement_fock(&z.neg(), space, T::zero());
            trace_product(&d, rho.matrix())
        })
        .collect())
}

fn trace_product<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Complex<T> {
    let n = a.nrows();
    let mut acc = czero();
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Continuum quantum positive-definiteness test on scattered points:
/// `M[j,k] = ρ̃(z_k − z_j) · e^{i ω(z_j, z_k)/2}`.
pub fn fock_quantum_positive_type<T: Real>(
    rho: &DensityOperator<T>,
    space: &FockSpace,
    points: &[ContinuousPoint<T>],
    tol: T,
) -> Result<PositivityVerdict<T>> {
    let n = points.len();
    let mut diffs = Vec::with_capacity(n * n);
    for zj in points {
        for zk in points {
            diffs.push(zk.add(&zj.neg()));
        }
    }
    let chi = characteristic_fock(rho, space, &diffs)?;
    let m = DMatrix::from_fn(n, n, |j, k| chi[j * n + k] * continuous_multiplier(&points[j], &points[k]));
    let asymmetry = hermitian_asymmetry(&m);
    if asymmetry > T::lit(T::GRAM_ASYMMETRY_LIMIT) {
        return Err(Error::NotPositiveTypeCandidate {
            asymmetry: asymmetry.as_f64(),
            limit: T::GRAM_ASYMMETRY_LIMIT,
        });
    }
    let min_eigenvalue = min_eigenvalue(&m);
    Ok(PositivityVerdict {
        min_eigenvalue,
        psd: min_eigenvalue >= -tol,
        asymmetry,
    })
}
