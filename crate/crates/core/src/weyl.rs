//! The finite Weyl system `U: Z_d × Z_d → U(C^d)` and the frame machinery
//! built on it: coefficient functions, the wavelet transform, the resolution
//! of the identity and the reproducing-kernel projector.
//!
//! Conventions. Position basis `e_0 .. e_{d-1}`; `U(q, p)` shifts `x ↦ x + q`
//! and multiplies by `ω^{p·x}` with the symmetric phase `ω^{-2⁻¹·q·p}`:
//!
//! ```text
//! (U(q,p) f)(x) = ω^{-2⁻¹ q p} · ω^{p x} · f(x − q)
//! U(z + w)      = m(z, w) · U(z) · U(w),     m(z, w) = ω^{2⁻¹ σ(z, w)}
//! ```
//!
//! Haar measure is the counting measure, so the Duflo–Moore operator is
//! `C = √d · I`. (With the probability-normalized Haar measure one would get
//! `C = d^{-1/2} · I` instead; the two differ by the factor `d² = |G|`.)

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::group::{PhaseGroup, PhasePoint};
use crate::operator::{hermitian_op_norm, inner, vector_norm, Operator, StateVector};
use crate::phase::PhaseFunction;
use crate::scalar::{czero, Real};

#[derive(Clone, Debug)]
pub struct WeylSystem<T: Real> {
    group: PhaseGroup<T>,
    duflo: T,
    displacements: Vec<Operator<T>>,
}

impl<T: Real> WeylSystem<T> {
    pub fn new(d: usize) -> Result<Self> {
        Ok(Self::from_group(PhaseGroup::new(d)?))
    }

    pub fn from_group(group: PhaseGroup<T>) -> Self {
        let d = group.dim();
        let displacements = group
            .points()
            .map(|z| build_displacement(&group, z))
            .collect();
        WeylSystem {
            duflo: T::from_usize_lossy(d).sqrt(),
            group,
            displacements,
        }
    }

    #[inline]
    pub fn group(&self) -> &PhaseGroup<T> {
        &self.group
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    /// `d_U = √d`.
    #[inline]
    pub fn duflo_constant(&self) -> T {
        self.duflo
    }

    /// `U(z)`.
    #[inline]
    pub fn displacement(&self, z: PhasePoint) -> &Operator<T> {
        &self.displacements[self.group.index(z)]
    }

    pub(crate) fn displacement_at(&self, index: usize) -> &Operator<T> {
        &self.displacements[index]
    }

    pub fn displacements(&self) -> &[Operator<T>] {
        &self.displacements
    }

    /// `U(z) ψ`, using the monomial structure of `U(z)`.
    pub fn apply(&self, z: PhasePoint, psi: &StateVector<T>) -> StateVector<T> {
        let d = self.dim();
        let h = self.group.half_inv() as i64;
        let (q, p) = (z.q as i64, z.p as i64);
        StateVector::from_fn(d, |x, _| {
            let src = (x + d - z.q) % d;
            self.group.root(-h * q * p + p * x as i64) * psi[src]
        })
    }

    /// `U(z) X U(z)†`.
    pub fn conjugate(&self, z: PhasePoint, x: &Operator<T>) -> Operator<T> {
        let u = self.displacement(z);
        u * x * u.adjoint()
    }

    fn check_vector(&self, v: &StateVector<T>) -> Result<()> {
        self.group.check_same(v.len())
    }

    /// `c_{ψφ}(z) = ⟨U(z)ψ, φ⟩`.
    pub fn coefficient(&self, psi: &StateVector<T>, phi: &StateVector<T>) -> Result<PhaseFunction<T>> {
        self.check_vector(psi)?;
        self.check_vector(phi)?;
        let values = self
            .group
            .points()
            .map(|z| inner(&self.apply(z, psi), phi))
            .collect();
        PhaseFunction::from_values(self.dim(), values)
    }

    /// `‖Cψ‖ = √d·‖ψ‖`.
    pub fn duflo_norm(&self, psi: &StateVector<T>) -> T {
        self.duflo * vector_norm(psi)
    }

    fn analyzing_norm(&self, psi: &StateVector<T>) -> Result<T> {
        self.check_vector(psi)?;
        let n = self.duflo_norm(psi);
        if n <= T::zero() {
            return Err(Error::ZeroAnalyzingVector);
        }
        Ok(n)
    }

    /// Wavelet transform with analyzing vector `ψ`: `φ ↦ ‖Cψ‖⁻¹ c_{ψφ}`,
    /// an isometry `C^d → ℓ²(G)`.
    pub fn wavelet_transform(&self, psi: &StateVector<T>, phi: &StateVector<T>) -> Result<PhaseFunction<T>> {
        let n = self.analyzing_norm(psi)?;
        let mut c = self.coefficient(psi, phi)?;
        c.scale_mut(T::one() / n);
        Ok(c)
    }

    /// Left regular m-representation on `ℓ²(G)`:
    /// `(L_g f)(h) = conj(m(g, h − g)) · f(h − g)`.
    ///
    /// The wavelet transform intertwines `U` with it:
    /// `W_ψ(U(g)φ) = L_g(W_ψ φ)`.
    pub fn left_regular(&self, g: PhasePoint, f: &PhaseFunction<T>) -> Result<PhaseFunction<T>> {
        self.group.check_same(f.dim())?;
        let grp = &self.group;
        let values = grp
            .points()
            .map(|h| {
                let shifted = grp.sub(h, g);
                grp.mult(g, shifted).conj() * f.at(grp, shifted)
            })
            .collect();
        PhaseFunction::from_values(self.dim(), values)
    }

    /// Matrix of `W_ψ` (rows indexed by group points, columns by basis vectors).
    pub fn analysis_matrix(&self, psi: &StateVector<T>) -> Result<DMatrix<Complex<T>>> {
        let n = self.analyzing_norm(psi)?;
        let d = self.dim();
        let mut m = DMatrix::from_element(d * d, d, czero());
        for (i, z) in self.group.points().enumerate() {
            let up = self.apply(z, psi);
            for j in 0..d {
                m[(i, j)] = up[j].conj() / n;
            }
        }
        Ok(m)
    }

    /// Frame operator `‖Cψ‖⁻² Σ_z U(z)|ψ⟩⟨ψ|U(z)†`.
    pub fn frame_operator(&self, psi: &StateVector<T>) -> Result<Operator<T>> {
        let n = self.analyzing_norm(psi)?;
        let d = self.dim();
        let mut acc = Operator::<T>::zeros(d, d);
        for z in self.group.points() {
            let v = self.apply(z, psi);
            acc += &v * v.adjoint();
        }
        Ok(acc.unscale(n * n))
    }

    /// Operator norm of `frame_operator(ψ) − I`.
    pub fn resolution_of_identity_defect(&self, psi: &StateVector<T>) -> Result<T> {
        let d = self.dim();
        let diff = self.frame_operator(psi)? - Operator::<T>::identity(d, d);
        Ok(hermitian_op_norm(&diff))
    }

    /// `P = W_ψ W_ψ†` on `ℓ²(G)`, the projector onto the reproducing-kernel
    /// subspace `ran(W_ψ)`. Its matrix is the reproducing kernel `K(g, h)`.
    pub fn reproducing_kernel_projector(&self, psi: &StateVector<T>) -> Result<DMatrix<Complex<T>>> {
        let w = self.analysis_matrix(psi)?;
        Ok(&w * w.adjoint())
    }

    /// Dimension of the commutant `{X : X U(z) = U(z) X ∀z}`; equals one for
    /// an irreducible system.
    pub fn commutant_dimension(&self) -> usize {
        let d = self.dim();
        let n = d * d;
        // vec(X U − U X) = (Uᵀ ⊗ I − I ⊗ U) vec(X), column-major vec.
        let mut sys = DMatrix::from_element(n * n, n, czero::<T>());
        for (k, u) in self.displacements.iter().enumerate() {
            for a in 0..d {
                for b in 0..d {
                    let row = k * n + a + b * d;
                    // (X U)[a,b] = Σ_c X[a,c] U[c,b]
                    for c in 0..d {
                        sys[(row, a + c * d)] += u[(c, b)];
                        sys[(row, c + b * d)] -= u[(a, c)];
                    }
                }
            }
        }
        let sv = sys.singular_values();
        let scale = sv.iter().fold(T::zero(), |acc, &s| acc.max(s));
        let tol = scale * T::lit(1e-9);
        n - sv.iter().filter(|&&s| s > tol).count()
    }
}

fn build_displacement<T: Real>(group: &PhaseGroup<T>, z: PhasePoint) -> Operator<T> {
    let d = group.dim();
    let h = group.half_inv() as i64;
    let (q, p) = (z.q as i64, z.p as i64);
    let mut m = Operator::<T>::zeros(d, d);
    for x in 0..d {
        let col = (x + d - z.q) % d;
        m[(x, col)] = group.root(-h * q * p + p * x as i64);
    }
    m
}
