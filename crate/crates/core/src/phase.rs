//! Phase-space functions, the dequantization/quantization pair, the star
//! product, symplectic Fourier analysis, Wigner and characteristic
//! functions, and the classical/quantum positive-type tests.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupMeasure, PhaseGroup, PhasePoint};
use crate::operator::{hermitian_asymmetry, hermitian_eigenvalues, hs_inner, DensityOperator, Operator};
use crate::random::Instances;
use crate::scalar::{creal, czero, Real};
use crate::weyl::WeylSystem;

/// A complex function on `Z_d × Z_d`, stored q-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction<T: Real> {
    d: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> PhaseFunction<T> {
    pub fn from_values(d: usize, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: values.len(),
            });
        }
        Ok(PhaseFunction { d, values })
    }

    pub fn zeros(d: usize) -> Self {
        PhaseFunction {
            d,
            values: vec![czero(); d * d],
        }
    }

    pub fn constant(d: usize, value: Complex<T>) -> Self {
        PhaseFunction {
            d,
            values: vec![value; d * d],
        }
    }

    /// `value · δ_z`.
    pub fn delta(d: usize, z: PhasePoint, value: Complex<T>) -> Self {
        let mut f = Self::zeros(d);
        f.values[z.q * d + z.p] = value;
        f
    }

    pub fn from_measure(m: &GroupMeasure<T>) -> Self {
        PhaseFunction {
            d: m.dim(),
            values: m.masses().iter().map(|&x| creal(x)).collect(),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    #[inline]
    pub fn at(&self, group: &PhaseGroup<T>, z: PhasePoint) -> Complex<T> {
        self.values[group.index(z)]
    }

    #[inline]
    pub fn origin(&self) -> Complex<T> {
        self.values[0]
    }

    /// Value one at the origin, within `tol`.
    pub fn is_normalized(&self, tol: T) -> bool {
        (self.origin() - creal(T::one())).norm_sqr().sqrt() <= tol
    }

    pub fn scale_mut(&mut self, s: T) {
        for v in &mut self.values {
            *v *= s;
        }
    }

    pub fn scaled(&self, s: Complex<T>) -> Self {
        PhaseFunction {
            d: self.d,
            values: self.values.iter().map(|&v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        PhaseFunction {
            d: self.d,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// Pointwise product.
    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: other.d,
            });
        }
        Ok(PhaseFunction {
            d: self.d,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// `ℓ²(G)` inner product with counting measure, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.values
            .iter()
            .zip(&other.values)
            .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_squared(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.norm_squared().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm_sqr().sqrt()))
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, a| acc.max(a.norm_sqr().sqrt()))
    }

    pub fn max_imag(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, a| acc.max(a.im.abs()))
    }

    pub fn to_dvector(&self) -> DVector<Complex<T>> {
        DVector::from_column_slice(&self.values)
    }

    /// The twisted-convolution involution `f*(z) = conj(f(−z))`.
    pub fn involution(&self) -> Self {
        let d = self.d;
        let values = (0..d * d)
            .map(|i| {
                let (q, p) = (i / d, i % d);
                let j = ((d - q) % d) * d + (d - p) % d;
                self.values[j].conj()
            })
            .collect();
        PhaseFunction { d, values }
    }
}

/// Free-function form of [`PhaseFunction::involution`].
pub fn involution_twisted<T: Real>(f: &PhaseFunction<T>) -> PhaseFunction<T> {
    f.involution()
}

/// Which of the equivalent star-product formulas to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarMode {
    /// `D((Q f₁)(Q f₂))`.
    ViaOperators,
    /// `d_U⁻¹ Σ_h f₁(h) f₂(g − h) conj(m(h, g − h))`.
    TwistedConvolution,
    /// The twisted convolution of `P f₁` and `P f₂`, `P = D∘Q`.
    ProjectedFormulas,
}

impl StarMode {
    pub const ALL: [StarMode; 3] = [
        StarMode::ViaOperators,
        StarMode::TwistedConvolution,
        StarMode::ProjectedFormulas,
    ];
}

impl fmt::Display for StarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StarMode::ViaOperators => "via_operators",
            StarMode::TwistedConvolution => "twisted_convolution",
            StarMode::ProjectedFormulas => "projected_formulas",
        };
        f.write_str(s)
    }
}

impl FromStr for StarMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "via_operators" => Ok(StarMode::ViaOperators),
            "twisted_convolution" => Ok(StarMode::TwistedConvolution),
            "projected_formulas" => Ok(StarMode::ProjectedFormulas),
            other => Err(Error::UnknownMode(other.to_string())),
        }
    }
}

/// Outcome of a Gram-matrix positivity test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PositivityVerdict<T: Real> {
    pub min_eigenvalue: T,
    pub psd: bool,
    /// `max |M − M†|` of the Gram matrix before Hermitization.
    pub asymmetry: T,
}

/// Gram matrices whose asymmetry exceeds this are rejected, not symmetrized
/// (double precision; see [`Real::GRAM_ASYMMETRY_LIMIT`]).
pub const GRAM_ASYMMETRY_LIMIT: f64 = <f64 as Real>::GRAM_ASYMMETRY_LIMIT;

impl<T: Real> PhaseGroup<T> {
    /// `(F_s f)(z) = d⁻¹ Σ_w f(w) ω^{σ(z, w)}`; self-adjoint, unitary and
    /// involutive on `ℓ²(G)`.
    pub fn symplectic_fourier(&self, f: &PhaseFunction<T>) -> PhaseFunction<T> {
        let inv_d = T::one() / T::from_usize_lossy(self.dim());
        let values = self
            .points()
            .map(|z| {
                self.points()
                    .zip(f.values())
                    .fold(czero(), |acc, (w, &fw)| acc + fw * self.character(z, w))
                    * inv_d
            })
            .collect();
        PhaseFunction {
            d: self.dim(),
            values,
        }
    }

    /// Classical characteristic function `μ̃(z) = Σ_w ω^{σ(z, w)} μ(w)`
    /// (equal to `d · F_s μ`).
    pub fn classical_characteristic(&self, mu: &GroupMeasure<T>) -> Result<PhaseFunction<T>> {
        self.check_same(mu.dim())?;
        let f = PhaseFunction::from_measure(mu);
        let mut out = self.symplectic_fourier(&f);
        out.scale_mut(T::from_usize_lossy(self.dim()));
        Ok(out)
    }

    fn gram_points(&self, points: &[PhasePoint]) -> Result<()> {
        let mut seen = HashSet::with_capacity(points.len());
        for &z in points {
            self.check_point(z)?;
            if !seen.insert(z) {
                return Err(Error::InvalidArgument(format!("duplicate point {z:?}")));
            }
        }
        Ok(())
    }

    fn gram_verdict(&self, m: DMatrix<Complex<T>>) -> Result<PositivityVerdict<T>> {
        let asymmetry = hermitian_asymmetry(&m);
        if asymmetry > T::lit(T::GRAM_ASYMMETRY_LIMIT) {
            return Err(Error::NotPositiveTypeCandidate {
                asymmetry: asymmetry.as_f64(),
                limit: T::GRAM_ASYMMETRY_LIMIT,
            });
        }
        let min_eigenvalue = hermitian_eigenvalues(&m)
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        Ok(PositivityVerdict {
            min_eigenvalue,
            psd: min_eigenvalue >= -T::check_tol(),
            asymmetry,
        })
    }

    /// Quantum positive-definiteness on a finite point set: the Gram matrix
    /// `M[j,k] = u(z_k − z_j) · ω^{2⁻¹ σ(z_j, z_k)}` must be PSD.
    pub fn quantum_positive_type_q3(
        &self,
        u: &PhaseFunction<T>,
        points: &[PhasePoint],
    ) -> Result<PositivityVerdict<T>> {
        self.check_same(u.dim())?;
        self.gram_points(points)?;
        let n = points.len();
        let m = DMatrix::from_fn(n, n, |j, k| {
            let (zj, zk) = (points[j], points[k]);
            u.at(self, self.sub(zk, zj)) * self.mult(zj, zk)
        });
        self.gram_verdict(m)
    }

    /// Classical positive-definiteness: `M[j,k] = p(z_k − z_j)` must be PSD.
    pub fn classical_positive_type_p3(
        &self,
        p: &PhaseFunction<T>,
        points: &[PhasePoint],
    ) -> Result<PositivityVerdict<T>> {
        self.check_same(p.dim())?;
        self.gram_points(points)?;
        let n = points.len();
        let m = DMatrix::from_fn(n, n, |j, k| p.at(self, self.sub(points[k], points[j])));
        self.gram_verdict(m)
    }

    /// Q3 on every point of the group.
    pub fn quantum_positive_type_full(&self, u: &PhaseFunction<T>) -> Result<PositivityVerdict<T>> {
        let pts: Vec<_> = self.points().collect();
        self.quantum_positive_type_q3(u, &pts)
    }

    pub fn classical_positive_type_full(&self, p: &PhaseFunction<T>) -> Result<PositivityVerdict<T>> {
        let pts: Vec<_> = self.points().collect();
        self.classical_positive_type_p3(p, &pts)
    }
}

impl<T: Real> WeylSystem<T> {
    fn check_function(&self, f: &PhaseFunction<T>) -> Result<()> {
        self.group().check_same(f.dim())
    }

    fn check_operator(&self, a: &Operator<T>) -> Result<()> {
        self.group().check_same(a.nrows())?;
        self.group().check_same(a.ncols())
    }

    /// `(D A)(z) = d_U⁻¹ tr(U(z)† A)`.
    pub fn dequantize(&self, a: &Operator<T>) -> Result<PhaseFunction<T>> {
        self.check_operator(a)?;
        let inv = T::one() / self.duflo_constant();
        let values = self
            .displacements()
            .iter()
            .map(|u| hs_inner(u, a) * inv)
            .collect();
        PhaseFunction::from_values(self.dim(), values)
    }

    /// `Q f = d_U⁻¹ Σ_z f(z) U(z)`, the adjoint of [`Self::dequantize`].
    pub fn quantize(&self, f: &PhaseFunction<T>) -> Result<Operator<T>> {
        self.check_function(f)?;
        let d = self.dim();
        let mut acc = Operator::<T>::zeros(d, d);
        for (u, &fz) in self.displacements().iter().zip(f.values()) {
            if fz != czero() {
                acc += u * fz;
            }
        }
        Ok(acc.unscale(self.duflo_constant()))
    }

    /// Matrix of `P = D∘Q` on `ℓ²(G)` (the identity at finite `d`).
    pub fn range_projector(&self) -> Result<DMatrix<Complex<T>>> {
        let n = self.group().order();
        let mut p = DMatrix::from_element(n, n, czero());
        for j in 0..n {
            let e = PhaseFunction::delta(self.dim(), self.group().point(j), creal(T::one()));
            let col = self.dequantize(&self.quantize(&e)?)?;
            for (i, v) in col.values().iter().enumerate() {
                p[(i, j)] = *v;
            }
        }
        Ok(p)
    }

    fn project(&self, f: &PhaseFunction<T>) -> Result<PhaseFunction<T>> {
        self.dequantize(&self.quantize(f)?)
    }

    /// The `m`-twisted convolution
    /// `d_U⁻¹ Σ_h f₁(h) f₂(g − h) conj(m(h, g − h))`.
    pub fn twisted_convolution(&self, f1: &PhaseFunction<T>, f2: &PhaseFunction<T>) -> Result<PhaseFunction<T>> {
        self.check_function(f1)?;
        self.check_function(f2)?;
        let grp = self.group();
        let inv = T::one() / self.duflo_constant();
        let values = grp
            .points()
            .map(|g| {
                grp.points()
                    .zip(f1.values())
                    .fold(czero(), |acc, (h, &a)| {
                        let rest = grp.sub(g, h);
                        acc + a * f2.at(grp, rest) * grp.mult(h, rest).conj()
                    })
                    * inv
            })
            .collect();
        PhaseFunction::from_values(self.dim(), values)
    }

    /// The three projected twisted-convolution formulas: with `P = D∘Q`,
    /// `f₁ ⊛ P f₂`, `P f₁ ⊛ f₂`, `P f₁ ⊛ P f₂`.
    pub fn star_product_projected_lines(
        &self,
        f1: &PhaseFunction<T>,
        f2: &PhaseFunction<T>,
    ) -> Result<[PhaseFunction<T>; 3]> {
        let p1 = self.project(f1)?;
        let p2 = self.project(f2)?;
        Ok([
            self.twisted_convolution(f1, &p2)?,
            self.twisted_convolution(&p1, f2)?,
            self.twisted_convolution(&p1, &p2)?,
        ])
    }

    /// `f₁ ⋆ f₂ = D((Q f₁)(Q f₂))`, evaluated by the requested formula.
    pub fn star_product(
        &self,
        f1: &PhaseFunction<T>,
        f2: &PhaseFunction<T>,
        mode: StarMode,
    ) -> Result<PhaseFunction<T>> {
        match mode {
            StarMode::ViaOperators => {
                let a = self.quantize(f1)?;
                let b = self.quantize(f2)?;
                self.dequantize(&(a * b))
            }
            StarMode::TwistedConvolution => self.twisted_convolution(f1, f2),
            StarMode::ProjectedFormulas => {
                let [_, _, both] = self.star_product_projected_lines(f1, f2)?;
                Ok(both)
            }
        }
    }

    /// `ρ̃(z) = tr(U(z)† A)` for an arbitrary operator (`= d_U · D A`).
    pub fn characteristic_of(&self, a: &Operator<T>) -> Result<PhaseFunction<T>> {
        let mut f = self.dequantize(a)?;
        f.scale_mut(self.duflo_constant());
        Ok(f)
    }

    /// Quantum characteristic function of a state.
    pub fn characteristic_function(&self, rho: &DensityOperator<T>) -> Result<PhaseFunction<T>> {
        self.characteristic_of(rho.matrix())
    }

    /// Inverse of [`Self::characteristic_of`]: `A = d⁻¹ Σ_z ρ̃(z) U(z)`.
    pub fn operator_from_characteristic(&self, chi: &PhaseFunction<T>) -> Result<Operator<T>> {
        Ok(self.quantize(chi)?.unscale(self.duflo_constant()))
    }

    /// `W(z) = d⁻² Σ_w ρ̃(w) ω^{σ(z, w)}`, normalized so `Σ_z W(z) = tr ρ = 1`.
    pub fn wigner_function(&self, rho: &DensityOperator<T>) -> Result<PhaseFunction<T>> {
        let chi = self.characteristic_function(rho)?;
        Ok(self.wigner_from_characteristic(&chi))
    }

    pub fn wigner_from_characteristic(&self, chi: &PhaseFunction<T>) -> PhaseFunction<T> {
        let mut w = self.group().symplectic_fourier(chi);
        w.scale_mut(T::one() / T::from_usize_lossy(self.dim()));
        w
    }

    /// `ρ̃ = d · F_s W`.
    pub fn characteristic_from_wigner(&self, wigner: &PhaseFunction<T>) -> PhaseFunction<T> {
        let mut chi = self.group().symplectic_fourier(wigner);
        chi.scale_mut(T::from_usize_lossy(self.dim()));
        chi
    }

    /// Randomized form of the QPTF condition: the minimum over `trials` test
    /// functions `a` (unit `ℓ²` norm) of `Re Σ_z u(z) (a* ⋆ a)(z)`.
    ///
    /// Even trials draw a Gaussian `a`; odd trials draw `a = D(|x⟩⟨y|)` with
    /// Gaussian `x, y`, so that rank-one directions are probed as well.
    pub fn qptf_integral_check(&self, u: &PhaseFunction<T>, trials: usize, seed: u64) -> Result<T> {
        self.check_function(u)?;
        if trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        let d = self.dim();
        let mut inst = Instances::new(seed);
        let mut worst: Option<T> = None;
        for k in 0..trials {
            let mut a = if k % 2 == 0 {
                inst.phase_function::<T>(d)
            } else {
                let x = inst.gaussian_vector::<T>(d);
                let y = inst.gaussian_vector::<T>(d);
                self.dequantize(&(x * y.adjoint()))?
            };
            let n = a.norm();
            a.scale_mut(T::one() / n);
            let aa = self.twisted_convolution(&a.involution(), &a)?;
            let value = u
                .values()
                .iter()
                .zip(aa.values())
                .fold(czero(), |acc, (x, y)| acc + x * y)
                .re;
            worst = Some(match worst {
                Some(w) if w <= value => w,
                _ => value,
            });
        }
        Ok(worst.expect("trials >= 1"))
    }
}
