//! Finite-dimensional state-space core: vectors on a labelled orthonormal
//! basis, the Hermitian inner product, rays and the Fubini-Study pullback
//! primitive.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex square matrix acting on a [`StateVector`] space.
pub type OperatorMatrix = DMatrix<Complex64>;

/// Default budget on `|norm - 1|` for states built on truncated bases.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Label of the orthonormal basis a state is expanded in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisTag {
    /// Oscillator states `|0>, ..., |N-1>`.
    Fock(usize),
    /// Spin-j states ordered `m = j, j-1, ..., -j`. Stores `2j`.
    Spin(u32),
    /// SU(1,1) discrete-series states `|n,k>`, `n < N`.
    DiscreteSeries { k: f64, n: usize },
}

impl BasisTag {
    pub fn dim(&self) -> usize {
        match *self {
            BasisTag::Fock(n) => n,
            BasisTag::Spin(two_j) => two_j as usize + 1,
            BasisTag::DiscreteSeries { n, .. } => n,
        }
    }
}

/// A finite complex amplitude sequence over a labelled basis.
///
/// `tol` is the normalization budget declared when the state was built;
/// operations that need a unit vector check `|norm - 1| <= tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: DVector<Complex64>,
    basis: BasisTag,
    tol: f64,
}

impl StateVector {
    pub fn new(amps: Vec<Complex64>, basis: BasisTag) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "{} amplitudes for basis of dimension {}",
                amps.len(),
                basis.dim()
            )));
        }
        Ok(Self {
            amps: DVector::from_vec(amps),
            basis,
            tol: DEFAULT_TOL,
        })
    }

    pub(crate) fn from_dvector(amps: DVector<Complex64>, basis: BasisTag) -> Self {
        debug_assert_eq!(amps.len(), basis.dim());
        Self {
            amps,
            basis,
            tol: DEFAULT_TOL,
        }
    }

    /// Unit vector `e_index`.
    pub fn basis_vector(basis: BasisTag, index: usize) -> Result<Self> {
        let dim = basis.dim();
        if index >= dim {
            return Err(Error::BasisMismatch(format!(
                "index {index} outside basis of dimension {dim}"
            )));
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self::from_dvector(amps, basis))
    }

    pub fn zeros(basis: BasisTag) -> Self {
        Self::from_dvector(DVector::zeros(basis.dim()), basis)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn amps(&self) -> &DVector<Complex64> {
        &self.amps
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// `|norm - 1|` within the declared tolerance (plus rounding slack).
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= self.normalization_budget()
    }

    fn normalization_budget(&self) -> f64 {
        self.tol + 8.0 * self.dim() as f64 * f64::EPSILON
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let deviation = (self.norm() - 1.0).abs();
        if deviation <= self.normalization_budget() {
            Ok(())
        } else {
            Err(Error::Normalization {
                deviation,
                tol: self.tol,
            })
        }
    }

    /// Rescale to unit norm. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Normalization {
                deviation: 1.0,
                tol: self.tol,
            });
        }
        Ok(Self {
            amps: self.amps.unscale(n),
            ..self.clone()
        })
    }

    /// Apply an operator of matching dimension.
    pub fn apply(&self, op: &OperatorMatrix) -> Result<Self> {
        if op.nrows() != self.dim() || op.ncols() != self.dim() {
            return Err(Error::BasisMismatch(format!(
                "{}x{} operator applied to dimension {}",
                op.nrows(),
                op.ncols(),
                self.dim()
            )));
        }
        Ok(Self {
            amps: op * &self.amps,
            ..self.clone()
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            amps: self.amps.map(|z| z * factor),
            ..self.clone()
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_basis(self, other)?;
        Ok(Self {
            amps: &self.amps + &other.amps,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_same_basis(self, other)?;
        Ok(Self {
            amps: &self.amps - &other.amps,
            ..self.clone()
        })
    }

    /// Multiply by `e^{i theta}` so the first amplitude with modulus above
    /// `1e-14` is real and positive.
    pub fn fix_phase(&self) -> Self {
        match self.amps.iter().find(|z| z.norm() > 1e-14) {
            Some(z) => {
                let phase = z.conj() / z.norm();
                self.scale(phase)
            }
            None => self.clone(),
        }
    }
}

fn check_same_basis(u: &StateVector, v: &StateVector) -> Result<()> {
    if u.basis != v.basis {
        return Err(Error::BasisMismatch(format!("{:?} vs {:?}", u.basis, v.basis)));
    }
    Ok(())
}

/// `<u|v> = sum conj(u_n) v_n`, conjugate-linear in the first slot.
pub fn inner(u: &StateVector, v: &StateVector) -> Result<Complex64> {
    check_same_basis(u, v)?;
    Ok(u.amps.dotc(&v.amps))
}

/// Fubini-Study geodesic distance between the rays of two unit vectors,
/// `2 arccos |<psi|phi>|`, in `[0, pi]`.
pub fn fs_distance(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    psi.require_normalized()?;
    phi.require_normalized()?;
    let overlap = inner(psi, phi)?;
    // sin(delta/2) = ||P_psi phi|| for unit vectors; atan2 stays accurate
    // near delta = 0 where arccos does not.
    let perp = (&phi.amps - psi.amps.map(|z| z * overlap)).norm();
    Ok(2.0 * perp.atan2(overlap.norm()))
}

/// `(1 - |psi><psi|) b`.
pub fn project_orthogonal(psi: &StateVector, b: &StateVector) -> Result<StateVector> {
    psi.require_normalized()?;
    let overlap = inner(psi, b)?;
    Ok(StateVector {
        amps: &b.amps - psi.amps.map(|z| z * overlap),
        basis: b.basis,
        tol: b.tol,
    })
}

/// `<a|b> - <a|psi><psi|b>`: the Fubini-Study Hermitian form evaluated on two
/// pushforward tangents at `psi`.
pub fn pullback_hermitian(psi: &StateVector, a: &StateVector, b: &StateVector) -> Result<Complex64> {
    psi.require_normalized()?;
    check_same_basis(psi, a)?;
    check_same_basis(psi, b)?;
    Ok(inner(a, b)? - inner(a, psi)? * inner(psi, b)?)
}

/// Pullback value split into metric and symplectic parts, with the closed-form
/// reference it is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PullbackReport {
    pub value: Complex64,
    pub metric_part: f64,
    pub symplectic_part: f64,
    pub reference: Complex64,
    pub abs_deviation: f64,
}

impl PullbackReport {
    pub fn new(value: Complex64, reference: Complex64) -> Self {
        Self {
            value,
            metric_part: value.re,
            symplectic_part: value.im,
            reference,
            abs_deviation: (value - reference).norm(),
        }
    }
}
