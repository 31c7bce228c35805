//! Robertson-Schrodinger uncertainty relations and the minimum-uncertainty
//! condition `(lambda A + i B / lambda) psi = (lambda a + i b / lambda) psi`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::orbits::ladder_matrices;
use crate::statespace::{BasisTag, OperatorMatrix, StateVector};

/// Largest `|A - A^dagger|` entry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed negative slack in the inequality checks.
pub const SLACK_TOL: f64 = 1e-10;

/// Means `a`, `b`, variances `alpha = <A~^2>`, `beta = <B~^2>` of the centred
/// operators, `c_plus = <{A~, B~}>` and `c_minus = i <[A~, B~]>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub a: f64,
    pub b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub hbar: f64,
    /// `<A~ psi | B~ psi>`; `c_plus = 2 Re`, `c_minus = -2 Im`.
    pub cross: Complex64,
}

impl MomentReport {
    pub fn delta_a(&self) -> f64 {
        self.alpha.sqrt()
    }

    pub fn delta_b(&self) -> f64 {
        self.beta.sqrt()
    }
}

/// `q = (a + a+)/sqrt2` and `p = (a - a+)/(i sqrt2)` on `n` Fock levels.
pub fn quadratures(n: usize) -> Result<(OperatorMatrix, OperatorMatrix)> {
    Ok(ladder_matrices(n)?.quadratures())
}

fn check_hermitian(op: &OperatorMatrix) -> Result<()> {
    let dev = (op - op.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > HERMITIAN_TOL {
        return Err(Error::NonHermitian(dev));
    }
    Ok(())
}

fn check_shape(op: &OperatorMatrix, psi: &StateVector) -> Result<()> {
    if op.nrows() != psi.dim() || op.ncols() != psi.dim() {
        return Err(Error::BasisMismatch(format!(
            "{}x{} operator on dimension {}",
            op.nrows(),
            op.ncols(),
            psi.dim()
        )));
    }
    Ok(())
}

/// Centred vector `(A - <A>) psi` and the mean.
fn centred(op: &OperatorMatrix, psi: &StateVector) -> (nalgebra::DVector<Complex64>, f64) {
    let v = op * psi.amps();
    let mean = psi.amps().dotc(&v).re;
    (v - psi.amps().map(|z| z * mean), mean)
}

pub fn moments(a: &OperatorMatrix, b: &OperatorMatrix, psi: &StateVector) -> Result<MomentReport> {
    moments_with_hbar(a, b, psi, 1.0)
}

pub fn moments_with_hbar(a: &OperatorMatrix, b: &OperatorMatrix, psi: &StateVector, hbar: f64) -> Result<MomentReport> {
    check_shape(a, psi)?;
    check_shape(b, psi)?;
    check_hermitian(a)?;
    check_hermitian(b)?;
    psi.require_normalized()?;
    let (ta, mean_a) = centred(a, psi);
    let (tb, mean_b) = centred(b, psi);
    let cross = ta.dotc(&tb);
    Ok(MomentReport {
        a: mean_a,
        b: mean_b,
        alpha: ta.norm_squared(),
        beta: tb.norm_squared(),
        c_plus: 2.0 * cross.re,
        c_minus: -2.0 * cross.im,
        hbar,
        cross,
    })
}

/// The three inequalities `dA dB >= |C-|/2`, `>= |C+|/2`,
/// `>= sqrt(C+^2 + C-^2)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsReport {
    pub heisenberg_ok: bool,
    pub anticomm_ok: bool,
    pub rs_ok: bool,
    pub slack_rs: f64,
    pub moments: MomentReport,
}

pub fn rs_report(a: &OperatorMatrix, b: &OperatorMatrix, psi: &StateVector) -> Result<RsReport> {
    let m = moments(a, b, psi)?;
    let product = m.delta_a() * m.delta_b();
    // sqrt(C+^2 + C-^2)/2 = |<A~psi|B~psi>|.
    let slack_rs = product - m.cross.norm();
    Ok(RsReport {
        heisenberg_ok: product - m.c_minus.abs() / 2.0 >= -SLACK_TOL,
        anticomm_ok: product - m.c_plus.abs() / 2.0 >= -SLACK_TOL,
        rs_ok: slack_rs >= -SLACK_TOL,
        slack_rs,
        moments: m,
    })
}

/// `||(lambda A + i B/lambda - (lambda a + i b/lambda)) psi||`, leaving out
/// the top Fock row where truncated quadratures break `[q, p] = i`.
pub fn min_uncertainty_residual(a: &OperatorMatrix, b: &OperatorMatrix, lambda: f64, psi: &StateVector) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda = {lambda} must be positive")));
    }
    let m = moments(a, b, psi)?;
    let i = Complex64::new(0.0, 1.0);
    let op = a.map(|z| z * lambda) + b.map(|z| z * i / lambda);
    let eigen = Complex64::new(lambda * m.a, m.b / lambda);
    let r = &op * psi.amps() - psi.amps().map(|z| z * eigen);
    let rows = match psi.basis() {
        BasisTag::Fock(n) | BasisTag::DiscreteSeries { n, .. } => n - 1,
        BasisTag::Spin(_) => psi.dim(),
    };
    Ok(r.rows(0, rows).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::orbits::{spin_matrices, su2_state, wh_coherent, wh_squeezed};
    use proptest::prelude::*;

    #[test]
    fn vacuum_moments() {
        let (q, p) = quadratures(32).unwrap();
        let vac = StateVector::basis_vector(BasisTag::Fock(32), 0).unwrap();
        let m = moments(&q, &p, &vac).unwrap();
        assert!((m.alpha - 0.5).abs() < 1e-14 && (m.beta - 0.5).abs() < 1e-14);
        assert!((m.c_minus + 1.0).abs() < 1e-14);
        assert!(m.c_plus.abs() < 1e-14);
        let same = moments(&q, &q, &vac).unwrap();
        assert_eq!(same.c_minus, 0.0);
    }

    #[test]
    fn eigenvector_has_zero_variance() {
        let spin = spin_matrices(1.0).unwrap();
        let top = StateVector::basis_vector(spin.basis(), 0).unwrap();
        let m = moments(&spin.lz, &spin.lx, &top).unwrap();
        assert!(m.alpha.abs() < 1e-15);
        assert!((m.a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian_and_unnormalized() {
        let l = ladder_matrices(4).unwrap();
        let vac = StateVector::basis_vector(BasisTag::Fock(4), 0).unwrap();
        assert!(matches!(moments(&l.a, &l.a, &vac), Err(Error::NonHermitian(_))));
        let (q, p) = quadratures(4).unwrap();
        let big = vac.scale(c64(2.0, 0.0));
        assert!(matches!(moments(&q, &p, &big), Err(Error::Normalization { .. })));
    }

    #[test]
    fn coherent_and_squeezed_saturate() {
        let n = 64;
        let (q, p) = quadratures(n).unwrap();
        let coh = wh_coherent(c64(1.0, 0.0), n).unwrap();
        let r = rs_report(&q, &p, &coh).unwrap();
        assert!(r.slack_rs.abs() < 1e-9 && r.rs_ok && r.heisenberg_ok && r.anticomm_ok);
        assert!(min_uncertainty_residual(&q, &p, 1.0, &coh).unwrap() < 1e-9);

        let v = 0.5;
        let sq = wh_squeezed(c64(0.0, 0.0), v, n).unwrap();
        let r = rs_report(&q, &p, &sq).unwrap();
        assert!(r.slack_rs.abs() < 1e-9);
        assert!((r.moments.delta_a() * r.moments.delta_b() - 0.5).abs() < 1e-9);
        assert!(min_uncertainty_residual(&q, &p, v.exp(), &sq).unwrap() < 1e-9);
        assert!(min_uncertainty_residual(&q, &p, 1.0, &sq).unwrap() > 0.01);
        assert!(min_uncertainty_residual(&q, &p, (-v).exp(), &sq).unwrap() > 0.01);
    }

    #[test]
    fn displaced_squeezed_state_is_minimum_uncertainty() {
        let n = 120;
        let (q, p) = quadratures(n).unwrap();
        let v = -0.5;
        let psi = wh_squeezed(c64(0.7, -0.4), v, n).unwrap();
        assert!(min_uncertainty_residual(&q, &p, v.exp(), &psi).unwrap() < 1e-9);
        let m = moments(&q, &p, &psi).unwrap();
        assert!((m.a - 0.7 * 2f64.sqrt()).abs() < 1e-9);
        assert!((m.b + 0.4 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn squeezing_ratio() {
        let n = 160;
        let (q, p) = quadratures(n).unwrap();
        let base = moments(&q, &p, &wh_squeezed(c64(0.0, 0.0), 0.0, n).unwrap()).unwrap();
        let base_ratio = base.delta_a() / base.delta_b();
        for &v in &[-1.0, -0.5, 0.5, 1.0] {
            let m = moments(&q, &p, &wh_squeezed(c64(0.0, 0.0), v, n).unwrap()).unwrap();
            let ratio = m.delta_a() / m.delta_b();
            assert!((ratio - (-2.0 * v).exp() * base_ratio).abs() < 1e-8, "v={v}");
        }
    }

    #[test]
    fn spin_coherent_saturates_lx_ly() {
        for &j in &[0.5, 1.0, 2.0] {
            let spin = spin_matrices(j).unwrap();
            let psi = su2_state(c64(0.0, 0.0), 0.0, j).unwrap();
            let m = moments(&spin.lx, &spin.ly, &psi).unwrap();
            let lz = psi.amps().dotc(&(&spin.lz * psi.amps())).re;
            assert!((m.delta_a() * m.delta_b() - lz.abs() / 2.0).abs() < 1e-10);
            assert!(m.c_plus.abs() < 1e-12);
        }
    }

    fn random_state(n: usize) -> impl Strategy<Value = StateVector> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_filter_map("nonzero", move |v| {
            let amps = v.into_iter().map(|(r, i)| c64(r, i)).collect();
            StateVector::new(amps, BasisTag::Fock(n)).ok()?.normalized().ok()
        })
    }

    proptest! {
        #[test]
        fn inequalities_hold_for_random_states(psi in random_state(16)) {
            let (q, p) = quadratures(16).unwrap();
            let r = rs_report(&q, &p, &psi).unwrap();
            prop_assert!(r.heisenberg_ok && r.anticomm_ok && r.rs_ok);
            let m = r.moments;
            prop_assert!(m.alpha >= 0.0 && m.beta >= 0.0);
            prop_assert!(m.alpha * m.beta >= (m.c_plus.powi(2) + m.c_minus.powi(2)) / 4.0 - 1e-10);
        }

        #[test]
        fn rs_implies_heisenberg(psi in random_state(8)) {
            let spin = spin_matrices(3.5).unwrap();
            let psi = StateVector::new(psi.amps().iter().copied().collect(), spin.basis()).unwrap();
            let r = rs_report(&spin.lx, &spin.lz, &psi).unwrap();
            prop_assert!(!r.rs_ok || r.heisenberg_ok);
        }
    }
}
