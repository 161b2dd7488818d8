//! Products of states: composition, Jordan and Lie products (none of which
//! preserve states in general) and the state-preserving twirled product
//! built from the Weyl system and a fiducial state.

use nalgebra::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{is_density, trace, DensityOperator, Operator};
use crate::phase::PhaseFunction;
use crate::scalar::{czero, Real};
use crate::weyl::WeylSystem;

fn check_pair<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<()> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows().max(b.ncols()),
        });
    }
    Ok(())
}

/// `A ∘ B = (AB + BA)/2`.
pub fn jordan<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    check_pair(a, b)?;
    Ok((a * b + b * a).scale(T::lit(0.5)))
}

/// `(AB − BA)/(2i)`.
pub fn lie<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
    check_pair(a, b)?;
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    Ok((a * b - b * a).map(|x| x / two_i))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StateProductDiagnostics<T: Real> {
    /// `tr(ρσ) = ⟨ρ, σ⟩_HS`.
    pub tr_comp: T,
    pub tr_jordan: T,
    pub comp_is_state: bool,
    pub jordan_is_state: bool,
    pub lie_is_state: bool,
}

/// Which of `ρσ`, `ρ∘σ`, `ρ⋆σ` (Lie) are again states.
pub fn state_product_diagnostics<T: Real>(
    rho: &DensityOperator<T>,
    sigma: &DensityOperator<T>,
) -> Result<StateProductDiagnostics<T>> {
    let (a, b) = (rho.matrix(), sigma.matrix());
    check_pair(a, b)?;
    let comp = a * b;
    let jor = jordan(a, b)?;
    let li = lie(a, b)?;
    let tol = T::check_tol();
    Ok(StateProductDiagnostics {
        tr_comp: trace(&comp).re,
        tr_jordan: trace(&jor).re,
        comp_is_state: is_density(&comp, tol),
        jordan_is_state: is_density(&jor, tol),
        lie_is_state: is_density(&li, tol),
    })
}

/// The twirled product `A ⊙ B = d_U⁻² Σ_z tr(A·U(z)τU(z)†) · U(z)BU(z)†`
/// for a fixed fiducial state `τ`.
#[derive(Clone, Debug)]
pub struct TwirledAlgebra<'w, T: Real> {
    weyl: &'w WeylSystem<T>,
    fiducial: DensityOperator<T>,
    /// `U(z) τ U(z)†` for every `z`.
    orbit: Vec<Operator<T>>,
    inv_duflo_sq: T,
}

impl<'w, T: Real> TwirledAlgebra<'w, T> {
    pub fn new(weyl: &'w WeylSystem<T>, fiducial: DensityOperator<T>) -> Result<Self> {
        weyl.group().check_same(fiducial.dim())?;
        let orbit = weyl
            .group()
            .points()
            .map(|z| weyl.conjugate(z, fiducial.matrix()))
            .collect();
        let du = weyl.duflo_constant();
        Ok(TwirledAlgebra {
            weyl,
            fiducial,
            orbit,
            inv_duflo_sq: T::one() / (du * du),
        })
    }

    pub fn fiducial(&self) -> &DensityOperator<T> {
        &self.fiducial
    }

    fn check(&self, a: &Operator<T>) -> Result<()> {
        self.weyl.group().check_same(a.nrows())?;
        self.weyl.group().check_same(a.ncols())
    }

    /// `m_A(z) = d_U⁻² tr(A · U(z)τU(z)†)`; a probability table when `A` is
    /// a state.
    pub fn induced_measure(&self, a: &Operator<T>) -> Result<PhaseFunction<T>> {
        self.check(a)?;
        let values = self
            .orbit
            .iter()
            .map(|t| trace_of_product(a, t) * self.inv_duflo_sq)
            .collect();
        PhaseFunction::from_values(self.weyl.dim(), values)
    }

    pub fn twirled_product(&self, a: &Operator<T>, b: &Operator<T>) -> Result<Operator<T>> {
        self.check(a)?;
        self.check(b)?;
        let weights = self.induced_measure(a)?;
        let d = self.weyl.dim();
        let mut acc = Operator::<T>::zeros(d, d);
        for (i, &w) in weights.values().iter().enumerate() {
            let u = self.weyl.displacement_at(i);
            acc += (u * b * u.adjoint()) * w;
        }
        Ok(acc)
    }

    /// Twirled product of two states, validated as a state.
    pub fn product_of_states(
        &self,
        rho: &DensityOperator<T>,
        sigma: &DensityOperator<T>,
    ) -> Result<DensityOperator<T>> {
        let out = self.twirled_product(rho.matrix(), sigma.matrix())?;
        DensityOperator::new((&out + out.adjoint()).scale(T::lit(0.5)))
    }
}

/// `tr(AB)` without forming the product.
fn trace_of_product<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Complex<T> {
    let n = a.nrows();
    let mut acc = czero();
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}
