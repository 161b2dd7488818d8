//! Dense complex matrices with Hilbert–Schmidt structure, and the validated
//! density-operator refinement.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{czero, Real};

/// A general `d × d` operator (Hilbert–Schmidt and trace class coincide at
/// finite dimension).
pub type Operator<T> = DMatrix<Complex<T>>;

/// A vector of the carrier space `C^d`.
pub type StateVector<T> = DVector<Complex<T>>;

/// `⟨u, v⟩`, conjugate-linear in the first slot.
pub fn inner<T: Real>(u: &StateVector<T>, v: &StateVector<T>) -> Complex<T> {
    u.iter()
        .zip(v.iter())
        .fold(czero(), |acc, (a, b)| acc + a.conj() * b)
}

pub fn vector_norm<T: Real>(u: &StateVector<T>) -> T {
    u.iter()
        .fold(T::zero(), |acc, a| acc + a.norm_sqr())
        .sqrt()
}

/// `⟨A, B⟩_HS = tr(A†B)`.
pub fn hs_inner<T: Real>(a: &Operator<T>, b: &Operator<T>) -> Complex<T> {
    a.iter()
        .zip(b.iter())
        .fold(czero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn hs_norm<T: Real>(a: &Operator<T>) -> T {
    a.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt()
}

pub fn trace<T: Real>(a: &Operator<T>) -> Complex<T> {
    (0..a.nrows().min(a.ncols())).fold(czero(), |acc, i| acc + a[(i, i)])
}

/// Largest entrywise modulus of `A − B`.
pub fn max_abs_diff<T: Real>(a: &Operator<T>, b: &Operator<T>) -> T {
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc.max((x - y).norm_sqr().sqrt()))
}

/// `max |A − A†|` entrywise.
pub fn hermitian_asymmetry<T: Real>(a: &Operator<T>) -> T {
    let n = a.nrows();
    let mut worst = T::zero();
    for i in 0..n {
        for j in i..n {
            let diff = a[(i, j)] - a[(j, i)].conj();
            worst = worst.max(diff.norm_sqr().sqrt());
        }
    }
    worst
}

/// Eigenvalues (ascending) of the Hermitian part `(A + A†)/2`.
pub fn hermitian_eigenvalues<T: Real>(a: &Operator<T>) -> Vec<T> {
    let herm = (a + a.adjoint()).scale(T::lit(0.5));
    let mut ev: Vec<T> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalue"));
    ev
}

pub fn min_eigenvalue<T: Real>(a: &Operator<T>) -> T {
    hermitian_eigenvalues(a)
        .first()
        .copied()
        .unwrap_or_else(T::zero)
}

/// Operator norm of a Hermitian matrix (largest eigenvalue modulus).
pub fn hermitian_op_norm<T: Real>(a: &Operator<T>) -> T {
    hermitian_eigenvalues(a)
        .into_iter()
        .fold(T::zero(), |acc, x| acc.max(x.abs()))
}

/// `|ψ⟩⟨φ|`.
pub fn outer<T: Real>(psi: &StateVector<T>, phi: &StateVector<T>) -> Operator<T> {
    psi * phi.adjoint()
}

/// A density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator<T: Real> {
    matrix: Operator<T>,
}

impl<T: Real> DensityOperator<T> {
    /// Validates the density invariants at the scalar's default tolerance.
    pub fn new(matrix: Operator<T>) -> Result<Self> {
        Self::with_tolerance(matrix, T::check_tol())
    }

    pub fn with_tolerance(matrix: Operator<T>, tol: T) -> Result<Self> {
        check_density(&matrix, tol)?;
        Ok(DensityOperator { matrix })
    }

    /// `|ψ⟩⟨ψ| / ‖ψ‖²`.
    pub fn pure(psi: &StateVector<T>) -> Result<Self> {
        let n2 = inner(psi, psi).re;
        if n2 <= T::zero() {
            return Err(Error::NotDensity("zero vector".into()));
        }
        Ok(DensityOperator {
            matrix: outer(psi, psi).unscale(n2),
        })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityOperator {
            matrix: Operator::<T>::identity(d, d).unscale(T::from_usize_lossy(d)),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    #[inline]
    pub fn matrix(&self) -> &Operator<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Operator<T> {
        self.matrix
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> T {
        hs_inner(&self.matrix, &self.matrix).re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }
}

impl<T: Real> AsRef<Operator<T>> for DensityOperator<T> {
    fn as_ref(&self) -> &Operator<T> {
        &self.matrix
    }
}

/// Checks Hermiticity, positivity and unit trace.
pub fn check_density<T: Real>(m: &Operator<T>, tol: T) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotDensity(format!("{}x{} is not square", m.nrows(), m.ncols())));
    }
    if m.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::NotDensity("non-finite entry".into()));
    }
    let asym = hermitian_asymmetry(m);
    if asym > tol {
        return Err(Error::NotDensity(format!("not Hermitian (asymmetry {asym:?})")));
    }
    let tr = trace(m);
    if (tr.re - T::one()).abs() > tol || tr.im.abs() > tol {
        return Err(Error::NotDensity(format!("trace {tr:?} != 1")));
    }
    let min = min_eigenvalue(m);
    if min < -tol {
        return Err(Error::NotDensity(format!("negative eigenvalue {min:?}")));
    }
    Ok(())
}

pub fn is_density<T: Real>(m: &Operator<T>, tol: T) -> bool {
    check_density(m, tol).is_ok()
}
