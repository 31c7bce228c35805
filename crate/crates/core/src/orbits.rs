//! Operator matrices and coherent/squeezed state constructors for the
//! Weyl-Heisenberg, SU(2) and SU(1,1) families.
//!
//! Conventions:
//!
//! - Fock states are indexed `|0>, ..., |N-1>`; `a|n> = sqrt(n)|n-1>`.
//! - Spin states are ordered `m = j, ..., -j`, so the lowest weight is the
//!   last basis vector. [`SpinTriple::l_plus`] and [`SpinTriple::l_minus`]
//!   carry the `1/sqrt(2)` normalization (`[L+, L-] = Lz`); the squeezed
//!   operator [`su2_squeezed_lowering`] is `e^v Lx - i e^{-v} Ly` without it.
//!   Kernels and rays do not see the difference in scale.
//! - Every fiducial or kernel state has its first nonzero amplitude real and
//!   positive.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{ln_factorial, ln_rising_over_factorial};
use crate::statespace::{BasisTag, OperatorMatrix, StateVector, DEFAULT_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const IM: Complex64 = Complex64::new(0.0, 1.0);

/// Largest smallest-singular-value accepted as a numerical kernel.
pub const KERNEL_TOL: f64 = 1e-8;
/// Smallest second singular value for the kernel to count as one-dimensional.
pub const KERNEL_GAP: f64 = 1e-6;

/// Truncated annihilation and creation matrices.
#[derive(Debug, Clone)]
pub struct LadderPair {
    pub a: OperatorMatrix,
    pub adag: OperatorMatrix,
}

impl LadderPair {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Position and momentum quadratures `q = (a + a+)/sqrt2`,
    /// `p = (a - a+)/(i sqrt2)`.
    pub fn quadratures(&self) -> (OperatorMatrix, OperatorMatrix) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let q = (&self.a + &self.adag).map(|z| z * s);
        let p = (&self.a - &self.adag).map(|z| z * s / IM);
        (q, p)
    }
}

pub fn ladder_matrices(n: usize) -> Result<LadderPair> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { got: n, min: 2 });
    }
    let mut a = DMatrix::zeros(n, n);
    for k in 1..n {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    Ok(LadderPair { a, adag })
}

/// Spin-j angular momentum matrices.
#[derive(Debug, Clone)]
pub struct SpinTriple {
    two_j: u32,
    pub lx: OperatorMatrix,
    pub ly: OperatorMatrix,
    pub lz: OperatorMatrix,
}

impl SpinTriple {
    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    pub fn basis(&self) -> BasisTag {
        BasisTag::Spin(self.two_j)
    }

    /// `L+ = (Lx + i Ly)/sqrt2`.
    pub fn l_plus(&self) -> OperatorMatrix {
        (&self.lx + self.ly.map(|z| z * IM)).map(|z| z * std::f64::consts::FRAC_1_SQRT_2)
    }

    /// `L- = (Lx - i Ly)/sqrt2`.
    pub fn l_minus(&self) -> OperatorMatrix {
        (&self.lx - self.ly.map(|z| z * IM)).map(|z| z * std::f64::consts::FRAC_1_SQRT_2)
    }
}

/// Standard spin-j representation in the `m = j, ..., -j` basis.
pub fn spin_matrices(j: f64) -> Result<SpinTriple> {
    let twice = 2.0 * j;
    let two_j = twice.round();
    if !(two_j >= 1.0 && (twice - two_j).abs() < 1e-12) || two_j > 4096.0 {
        return Err(Error::InvalidSpin(j));
    }
    let two_j = two_j as u32;
    let dim = two_j as usize + 1;
    let m = |i: usize| j - i as f64;
    let mut jp = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 1..dim {
        let mi = m(i);
        jp[(i - 1, i)] = Complex64::new((j * (j + 1.0) - mi * (mi + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let lx = (&jp + &jm).map(|z| z * 0.5);
    let ly = (&jp - &jm).map(|z| z / (2.0 * IM));
    let lz = DMatrix::from_fn(dim, dim, |r, c| if r == c { Complex64::new(m(r), 0.0) } else { ZERO });
    Ok(SpinTriple { two_j, lx, ly, lz })
}

/// Squeezing parameter `v`, with `lambda = e^v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam(pub f64);

impl SqueezeParam {
    pub fn lambda(&self) -> f64 {
        self.0.exp()
    }
}

/// Amplitude series whose tail [`truncation_dim`] bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationFamily {
    /// Weyl-Heisenberg coherent amplitudes `e^{-|a|^2/2} a^n / sqrt(n!)`.
    Fock,
    /// SU(1,1) coherent amplitudes with discrete-series label `k`.
    DiscreteSeries { k: f64 },
    /// Weyl-Heisenberg squeezed vacuum with parameter `v` (alpha is ignored).
    SqueezedVacuum { v: f64 },
}

/// `ln |c_n|^2` for the family's amplitude series.
fn ln_weight(alpha: Complex64, family: TruncationFamily, n: usize) -> f64 {
    let x = alpha.norm_sqr();
    let ln_pow = |n: usize| {
        if n == 0 {
            0.0
        } else if x == 0.0 {
            f64::NEG_INFINITY
        } else {
            n as f64 * x.ln()
        }
    };
    match family {
        TruncationFamily::Fock => -x + ln_pow(n) - ln_factorial(n),
        TruncationFamily::DiscreteSeries { k } => {
            2.0 * k * (1.0 - x).ln() + ln_rising_over_factorial(2.0 * k, n) + ln_pow(n)
        }
        TruncationFamily::SqueezedVacuum { v } => {
            if n % 2 == 1 {
                return f64::NEG_INFINITY;
            }
            if v == 0.0 {
                return if n == 0 { 0.0 } else { f64::NEG_INFINITY };
            }
            // |c_2m|^2 = sech v tanh^{2m} v (2m)! / (4^m (m!)^2)
            let m = n / 2;
            let t = v.tanh().abs();
            -v.cosh().ln() + n as f64 * t.ln() + ln_factorial(n) - 2.0 * ln_factorial(m) - m as f64 * 4f64.ln()
        }
    }
}

/// Analytic bound on `sum_{n >= dim} |c_n|^2`.
///
/// Uses `|c_N|^2 / (1 - r)` where `r` bounds every later term ratio; this is
/// valid once the (non-increasing) ratio `r_N` has dropped below 1.
pub fn tail_mass_bound(alpha: Complex64, family: TruncationFamily, dim: usize) -> f64 {
    let x = alpha.norm_sqr();
    let (first, ratio) = match family {
        TruncationFamily::Fock => (dim, x / (dim as f64 + 1.0)),
        TruncationFamily::DiscreteSeries { k } => (dim, (dim as f64 + 2.0 * k) / (dim as f64 + 1.0) * x),
        TruncationFamily::SqueezedVacuum { v } => (dim + dim % 2, v.tanh().powi(2)),
    };
    let w = ln_weight(alpha, family, first);
    if w == f64::NEG_INFINITY {
        return 0.0;
    }
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    w.exp() / (1.0 - ratio)
}

/// Smallest `N` with `tail_mass_bound(alpha, family, N) < eps`.
pub fn truncation_dim(alpha: Complex64, family: TruncationFamily, eps: f64) -> usize {
    assert!(eps > 0.0, "tail budget must be positive");
    (1..)
        .find(|&n| tail_mass_bound(alpha, family, n) < eps)
        .expect("tail bound eventually falls below any positive budget")
}

fn check_tail(alpha: Complex64, family: TruncationFamily, dim: usize, budget: f64) -> Result<()> {
    let tail = tail_mass_bound(alpha, family, dim);
    if tail > budget {
        return Err(Error::Truncation { tail, budget, dim });
    }
    Ok(())
}

/// Weyl-Heisenberg coherent state from its number-state series.
pub fn wh_coherent(alpha: Complex64, n: usize) -> Result<StateVector> {
    check_tail(alpha, TruncationFamily::Fock, n, DEFAULT_TOL)?;
    let x = alpha.norm_sqr();
    let amps: Vec<Complex64> = (0..n)
        .map(|k| {
            if k == 0 {
                return Complex64::new((-x / 2.0).exp(), 0.0);
            }
            if x == 0.0 {
                return ZERO;
            }
            let modulus = (-x / 2.0 + k as f64 * x.sqrt().ln() - 0.5 * ln_factorial(k)).exp();
            Complex64::from_polar(modulus, k as f64 * alpha.arg())
        })
        .collect();
    StateVector::new(amps, BasisTag::Fock(n))
}

/// `D(alpha) = exp(alpha a+ - conj(alpha) a)` on the truncated Fock space.
pub fn wh_displacement(alpha: Complex64, n: usize) -> Result<OperatorMatrix> {
    let ladder = ladder_matrices(n)?;
    check_tail(alpha, TruncationFamily::Fock, n, DEFAULT_TOL)?;
    Ok(wh_generator(&ladder, alpha).exp())
}

/// `alpha a+ - conj(alpha) a`.
pub fn wh_generator(ladder: &LadderPair, alpha: Complex64) -> OperatorMatrix {
    ladder.adag.map(|z| z * alpha) - ladder.a.map(|z| z * alpha.conj())
}

/// `cosh(v) a + sinh(v) a+`.
pub fn squeezed_annihilator(v: f64, n: usize) -> Result<OperatorMatrix> {
    let ladder = ladder_matrices(n)?;
    Ok(ladder.a.map(|z| z * v.cosh()) + ladder.adag.map(|z| z * v.sinh()))
}

/// Right singular vector of the smallest singular value, checked to be a
/// one-dimensional numerical kernel.
pub fn numerical_kernel(op: &OperatorMatrix) -> Result<DVector<Complex64>> {
    let svd = op.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let smallest = svd.singular_values[order[0]];
    let next = order.get(1).map_or(f64::INFINITY, |&i| svd.singular_values[i]);
    if smallest > KERNEL_TOL || next < KERNEL_GAP {
        return Err(Error::Kernel { smallest, next });
    }
    Ok(v_t.row(order[0]).adjoint())
}

fn kernel_state(op: &OperatorMatrix, basis: BasisTag) -> Result<StateVector> {
    let v = numerical_kernel(op)?;
    StateVector::from_dvector(v, basis).normalized().map(|s| s.fix_phase())
}

/// Largest `|v|` accepted by the squeezed constructors.
pub const MAX_SQUEEZE: f64 = 2.0;

/// Squeezed vacuum: kernel of `cosh(v) a + sinh(v) a+` on `N` Fock levels.
pub fn wh_squeezed_vacuum(v: f64, n: usize) -> Result<StateVector> {
    if v.abs() > MAX_SQUEEZE {
        return Err(Error::Domain(format!("|v| = {} exceeds {MAX_SQUEEZE}", v.abs())));
    }
    kernel_state(&squeezed_annihilator(v, n)?, BasisTag::Fock(n))
}

/// Displaced squeezed vacuum `D(alpha)|0;lambda>`.
pub fn wh_squeezed(alpha: Complex64, v: f64, n: usize) -> Result<StateVector> {
    let vacuum = wh_squeezed_vacuum(v, n)?;
    vacuum.apply(&wh_displacement(alpha, n)?)
}

/// `e^v Lx - i e^{-v} Ly`.
pub fn su2_squeezed_lowering(spin: &SpinTriple, v: f64) -> OperatorMatrix {
    spin.lx.map(|z| z * v.exp()) - spin.ly.map(|z| z * IM * (-v).exp())
}

/// `e^v Lx + i e^{-v} Ly`.
pub fn su2_squeezed_raising(spin: &SpinTriple, v: f64) -> OperatorMatrix {
    spin.lx.map(|z| z * v.exp()) + spin.ly.map(|z| z * IM * (-v).exp())
}

/// `conj(alpha) L- - alpha L+`.
pub fn su2_generator(spin: &SpinTriple, alpha: Complex64) -> OperatorMatrix {
    spin.l_minus().map(|z| z * alpha.conj()) - spin.l_plus().map(|z| z * alpha)
}

pub fn su2_displacement(spin: &SpinTriple, alpha: Complex64) -> OperatorMatrix {
    su2_generator(spin, alpha).exp()
}

pub fn su2_squeezed_vacuum(spin: &SpinTriple, v: f64) -> Result<StateVector> {
    if v.abs() > MAX_SQUEEZE {
        return Err(Error::Domain(format!("|v| = {} exceeds {MAX_SQUEEZE}", v.abs())));
    }
    kernel_state(&su2_squeezed_lowering(spin, v), spin.basis())
}

/// `D(alpha)|0;lambda>` for spin `j`. With `v = 0` this is the spin coherent
/// state built on the lowest weight.
pub fn su2_state(alpha: Complex64, v: f64, j: f64) -> Result<StateVector> {
    let spin = spin_matrices(j)?;
    su2_squeezed_vacuum(&spin, v)?.apply(&su2_displacement(&spin, alpha))
}

/// SU(1,1) coherent state on the unit disc,
/// `(1-|a|^2)^k sum sqrt(Gamma(n+2k)/(n! Gamma(2k))) a^n |n,k>`.
pub fn su11_coherent(alpha: Complex64, k: f64, n: usize) -> Result<StateVector> {
    if k <= 0.5 {
        return Err(Error::Domain(format!("discrete-series label k = {k} must exceed 1/2")));
    }
    if alpha.norm() >= 1.0 {
        return Err(Error::Domain(format!("|alpha| = {} must be < 1", alpha.norm())));
    }
    if n == 0 {
        return Err(Error::DimensionTooSmall { got: 0, min: 1 });
    }
    let family = TruncationFamily::DiscreteSeries { k };
    check_tail(alpha, family, n, DEFAULT_TOL)?;
    let amps = (0..n)
        .map(|m| {
            let w = ln_weight(alpha, family, m);
            if w == f64::NEG_INFINITY {
                ZERO
            } else {
                Complex64::from_polar((0.5 * w).exp(), m as f64 * alpha.arg())
            }
        })
        .collect();
    StateVector::new(amps, BasisTag::DiscreteSeries { k, n })
}

/// Directional derivative of the matrix exponential,
/// `d/ds exp(x + s e)|_{s=0}`, read off the block exponential
/// `exp([[x, e], [0, x]])`.
pub fn exp_directional_derivative(x: &OperatorMatrix, e: &OperatorMatrix) -> OperatorMatrix {
    let n = x.nrows();
    let mut block = DMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(x);
    block.view_mut((n, n), (n, n)).copy_from(x);
    block.view_mut((0, n), (n, n)).copy_from(e);
    block.exp().view((0, n), (n, n)).into_owned()
}
