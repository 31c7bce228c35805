//! Pullback of the Fubini-Study Hermitian form along the coherent-state
//! embeddings `alpha -> [psi(alpha)]`.
//!
//! For a base point `alpha` and two complex directions `u`, `w` the value is
//! `<t_u|(1 - |psi><psi|)|t_w>` where `t_u = d/ds psi(alpha + s u)`. The first
//! slot is conjugated, so for the plain Weyl-Heisenberg family the value is
//! `conj(u) w`: real part the metric, imaginary part the symplectic form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::orbits::{
    exp_directional_derivative, ladder_matrices, spin_matrices, su11_coherent, su2_displacement, su2_generator,
    su2_squeezed_vacuum, truncation_dim, wh_coherent, wh_displacement, wh_generator, wh_squeezed_vacuum, SpinTriple,
    TruncationFamily,
};
use crate::statespace::{pullback_hermitian, PullbackReport, StateVector, DEFAULT_TOL};

/// Which group's coherent states the family is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Group {
    /// Weyl-Heisenberg, optionally squeezed.
    Wh,
    /// SU(2), optionally squeezed; `rep` is the spin `j`.
    Su2,
    /// SU(1,1) on the unit disc; `rep` is the discrete-series label `k`.
    Su11,
}

/// How many basis levels to keep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    Fixed(usize),
    /// Chosen per base point so the analytic tail bound is below `eps`.
    Auto {
        eps: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFamily {
    pub group: Group,
    pub squeeze: f64,
    pub rep: f64,
    pub trunc: Truncation,
}

impl StateFamily {
    pub fn wh(squeeze: f64) -> Self {
        Self {
            group: Group::Wh,
            squeeze,
            rep: 0.0,
            trunc: Truncation::Auto { eps: DEFAULT_TOL },
        }
    }

    pub fn su2(j: f64, squeeze: f64) -> Self {
        Self {
            group: Group::Su2,
            squeeze,
            rep: j,
            trunc: Truncation::Auto { eps: DEFAULT_TOL },
        }
    }

    pub fn su11(k: f64) -> Self {
        Self {
            group: Group::Su11,
            squeeze: 0.0,
            rep: k,
            trunc: Truncation::Auto { eps: DEFAULT_TOL },
        }
    }

    pub fn with_truncation(mut self, trunc: Truncation) -> Self {
        self.trunc = trunc;
        self
    }

    /// Basis dimension used at `base`, large enough for nearby
    /// finite-difference evaluations too.
    pub fn dim_at(&self, base: Complex64) -> Result<usize> {
        let reach = base.norm() + 1e-2;
        match (self.group, self.trunc) {
            (Group::Su2, _) => Ok(spin_matrices(self.rep)?.dim()),
            (_, Truncation::Fixed(n)) => Ok(n),
            (Group::Wh, Truncation::Auto { eps }) => {
                let shifted = Complex64::new(reach * self.squeeze.abs().exp(), 0.0);
                let coherent = truncation_dim(shifted, TruncationFamily::Fock, eps);
                if self.squeeze == 0.0 {
                    return Ok(coherent.max(2));
                }
                // The kernel residual scales with the amplitude, not its square.
                let vacuum = truncation_dim(
                    Complex64::new(0.0, 0.0),
                    TruncationFamily::SqueezedVacuum { v: self.squeeze },
                    eps * eps,
                );
                Ok(coherent + vacuum)
            }
            (Group::Su11, Truncation::Auto { eps }) => {
                if reach >= 1.0 {
                    return Err(Error::Domain(format!("|alpha| = {} must be < 1", base.norm())));
                }
                let family = TruncationFamily::DiscreteSeries { k: self.rep };
                Ok(truncation_dim(
                    Complex64::new(reach, 0.0),
                    family,
                    eps.min(DEFAULT_TOL) / 100.0,
                ))
            }
        }
    }

    /// `psi(alpha)` in the family's basis.
    pub fn state(&self, alpha: Complex64) -> Result<StateVector> {
        let n = self.dim_at(alpha)?;
        self.builder(n)?.state(alpha)
    }

    fn builder(&self, n: usize) -> Result<Builder> {
        Ok(match self.group {
            Group::Wh if self.squeeze == 0.0 => Builder::WhCoherent { n },
            Group::Wh => Builder::WhSqueezed {
                vacuum: wh_squeezed_vacuum(self.squeeze, n)?,
                n,
            },
            Group::Su2 => {
                let spin = spin_matrices(self.rep)?;
                let vacuum = su2_squeezed_vacuum(&spin, self.squeeze)?;
                Builder::Su2 { spin, vacuum }
            }
            Group::Su11 => Builder::Su11 { k: self.rep, n },
        })
    }
}

/// Constructor with the `alpha`-independent parts precomputed.
enum Builder {
    WhCoherent { n: usize },
    WhSqueezed { vacuum: StateVector, n: usize },
    Su2 { spin: SpinTriple, vacuum: StateVector },
    Su11 { k: f64, n: usize },
}

impl Builder {
    fn state(&self, alpha: Complex64) -> Result<StateVector> {
        match self {
            Builder::WhCoherent { n } => wh_coherent(alpha, *n),
            Builder::WhSqueezed { vacuum, n } => vacuum.apply(&wh_displacement(alpha, *n)?),
            Builder::Su2 { spin, vacuum } => vacuum.apply(&su2_displacement(spin, alpha)),
            Builder::Su11 { k, n } => su11_coherent(alpha, *k, *n),
        }
    }

    fn tangent(&self, base: Complex64, dir: Complex64) -> Result<StateVector> {
        match self {
            Builder::WhCoherent { n } => {
                let psi = wh_coherent(base, *n)?;
                series_tangent(&psi, base, dir, 0.5)
            }
            Builder::WhSqueezed { vacuum, n } => {
                // D(a + s d) = D(s d) D(a) exp(-s (d conj(a) - conj(d) a) / 2)
                let psi = vacuum.apply(&wh_displacement(base, *n)?)?;
                let gen = wh_generator(&ladder_matrices(*n)?, dir);
                let phase = (dir * base.conj() - dir.conj() * base) * 0.5;
                Ok(psi.apply(&gen)?.sub(&psi.scale(phase))?)
            }
            Builder::Su2 { spin, vacuum } => {
                let x = su2_generator(spin, base);
                let e = su2_generator(spin, dir);
                vacuum.apply(&exp_directional_derivative(&x, &e))
            }
            Builder::Su11 { k, n } => {
                if base.norm() >= 1.0 {
                    return Err(Error::Domain(format!("|alpha| = {} must be < 1", base.norm())));
                }
                let psi = su11_coherent(base, *k, *n)?;
                let k = *k;
                series_tangent(&psi, base, dir, k / (1.0 - base.norm_sqr()))
            }
        }
    }
}

/// Derivative of `N(|a|^2) a^m` amplitudes along `dir`, given the state and
/// `-(d/d|a|^2) ln N`.
fn series_tangent(psi: &StateVector, base: Complex64, dir: Complex64, norm_rate: f64) -> Result<StateVector> {
    let radial = -norm_rate * (dir.conj() * base + base.conj() * dir).re;
    let mut amps = Vec::with_capacity(psi.dim());
    for m in 0..psi.dim() {
        let c = psi.amp(m);
        let own = c * radial;
        let shifted = if m == 0 {
            Complex64::new(0.0, 0.0)
        } else if base.norm() > 0.0 {
            c * m as f64 * dir / base
        } else if m == 1 {
            // c_1 / alpha at alpha = 0 is the coefficient of alpha itself.
            dir * psi.amp(0) * coefficient_ratio(psi)
        } else {
            Complex64::new(0.0, 0.0)
        };
        amps.push(own + shifted);
    }
    StateVector::new(amps, psi.basis())
}

/// `c_1 / (alpha c_0)` for the series amplitudes, which at `alpha = 0` cannot
/// be read off the state itself.
fn coefficient_ratio(psi: &StateVector) -> f64 {
    match psi.basis() {
        crate::statespace::BasisTag::DiscreteSeries { k, .. } => (2.0 * k).sqrt(),
        _ => 1.0,
    }
}

/// A base point and a direction `d alpha / ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentSpec {
    pub base: Complex64,
    pub direction: Complex64,
}

impl TangentSpec {
    pub fn new(base: Complex64, direction: Complex64) -> Self {
        Self { base, direction }
    }
}

/// Exact derivative `d/ds psi(base + s direction)` at `s = 0`, un-projected.
pub fn analytic_tangent(fam: &StateFamily, t: TangentSpec) -> Result<StateVector> {
    let n = fam.dim_at(t.base)?;
    fam.builder(n)?.tangent(t.base, t.direction)
}

pub const MIN_STEP: f64 = 1e-6;
pub const MAX_STEP: f64 = 1e-3;

/// Central difference `(psi(base + h d) - psi(base - h d)) / 2h`.
pub fn numeric_tangent(fam: &StateFamily, t: TangentSpec, h: f64) -> Result<StateVector> {
    if !(MIN_STEP..=MAX_STEP).contains(&h) {
        return Err(Error::Step(h));
    }
    let n = fam.dim_at(t.base)?;
    let builder = fam.builder(n)?;
    central_difference(&builder, t, h)
}

fn central_difference(builder: &Builder, t: TangentSpec, h: f64) -> Result<StateVector> {
    let forward = builder.state(t.base + t.direction * h)?;
    let backward = builder.state(t.base - t.direction * h)?;
    Ok(forward.sub(&backward)?.scale(Complex64::new(0.5 / h, 0.0)))
}

/// Which tangent the pullback is formed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentMethod {
    Analytic,
    Numeric { h: f64 },
}

/// Raw pullback value at any base point in the family's domain.
pub fn pullback_value(
    fam: &StateFamily,
    base: Complex64,
    u: Complex64,
    w: Complex64,
    method: TangentMethod,
) -> Result<Complex64> {
    let n = fam.dim_at(base)?;
    let builder = fam.builder(n)?;
    let psi = builder.state(base)?;
    let tangent = |d| match method {
        TangentMethod::Analytic => builder.tangent(base, d),
        TangentMethod::Numeric { h } => {
            if !(MIN_STEP..=MAX_STEP).contains(&h) {
                return Err(Error::Step(h));
            }
            central_difference(&builder, TangentSpec::new(base, d), h)
        }
    };
    pullback_hermitian(&psi, &tangent(u)?, &tangent(w)?)
}

/// Pullback value with its closed-form reference, using analytic tangents.
pub fn pullback_form(fam: &StateFamily, base: Complex64, u: Complex64, w: Complex64) -> Result<PullbackReport> {
    pullback_form_with(fam, base, u, w, TangentMethod::Analytic)
}

pub fn pullback_form_with(
    fam: &StateFamily,
    base: Complex64,
    u: Complex64,
    w: Complex64,
    method: TangentMethod,
) -> Result<PullbackReport> {
    let reference = closed_form(fam, base, u, w)?;
    Ok(PullbackReport::new(pullback_value(fam, base, u, w, method)?, reference))
}

/// `-<0;lambda|Lz|0;lambda>` for the SU(2) family.
pub fn su2_prefactor(j: f64, v: f64) -> Result<f64> {
    let spin = spin_matrices(j)?;
    let vac = su2_squeezed_vacuum(&spin, v)?;
    Ok(-vac.amps().dotc(&(&spin.lz * vac.amps())).re)
}

/// `u1 w1 e^{2v} + u2 w2 e^{-2v} + i (u1 w2 - u2 w1)`; equals `conj(u) w` at `v = 0`.
pub fn squeezed_bracket(v: f64, u: Complex64, w: Complex64) -> Complex64 {
    Complex64::new(
        u.re * w.re * (2.0 * v).exp() + u.im * w.im * (-2.0 * v).exp(),
        u.re * w.im - u.im * w.re,
    )
}

/// [`squeezed_bracket`] with the exponents swapped and the imaginary part
/// reversed, `u1 w1 e^{-2v} + u2 w2 e^{2v} + i (u2 w1 - u1 w2)`.
pub fn su2_swapped_bracket(v: f64, u: Complex64, w: Complex64) -> Complex64 {
    Complex64::new(
        u.re * w.re * (-2.0 * v).exp() + u.im * w.im * (2.0 * v).exp(),
        u.im * w.re - u.re * w.im,
    )
}

/// Closed-form pullback. Squeezed families and SU(2) are only known at the origin.
pub fn closed_form(fam: &StateFamily, base: Complex64, u: Complex64, w: Complex64) -> Result<Complex64> {
    match fam.group {
        Group::Wh if fam.squeeze == 0.0 => Ok(u.conj() * w),
        Group::Wh => {
            require_origin(base)?;
            Ok(squeezed_bracket(fam.squeeze, u, w))
        }
        Group::Su2 => {
            require_origin(base)?;
            Ok(squeezed_bracket(fam.squeeze, u, w) * su2_prefactor(fam.rep, fam.squeeze)?)
        }
        Group::Su11 => {
            if base.norm() >= 1.0 {
                return Err(Error::Domain(format!("|alpha| = {} must be < 1", base.norm())));
            }
            let d = 1.0 - base.norm_sqr();
            Ok(u.conj() * w * (2.0 * fam.rep / (d * d)))
        }
    }
}

fn require_origin(base: Complex64) -> Result<()> {
    if base.norm() != 0.0 {
        return Err(Error::UnsupportedBasePoint(base));
    }
    Ok(())
}

/// Kahler reference `c(alpha) conj(u) w`: the compatible structure with the
/// family's symplectic form.
fn kahler_reference(fam: &StateFamily, base: Complex64, u: Complex64, w: Complex64) -> Result<Complex64> {
    let scale = match fam.group {
        Group::Wh => {
            if fam.squeeze != 0.0 {
                require_origin(base)?;
            }
            1.0
        }
        Group::Su2 => {
            require_origin(base)?;
            su2_prefactor(fam.rep, fam.squeeze)?
        }
        Group::Su11 => (closed_form(fam, base, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))?).re,
    };
    Ok(u.conj() * w * scale)
}

/// Base points and tangent pairs to sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    pub bases: Vec<Complex64>,
    pub pairs: Vec<(Complex64, Complex64)>,
}

impl SampleGrid {
    /// Tangent pairs `(1,1), (1,i), (i,i)`.
    pub fn standard_pairs() -> Vec<(Complex64, Complex64)> {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        vec![(one, one), (one, i), (i, i)]
    }

    pub fn origin() -> Self {
        Self {
            bases: vec![Complex64::new(0.0, 0.0)],
            pairs: Self::standard_pairs(),
        }
    }

    /// `n x n` points on `[-r/sqrt2, r/sqrt2]^2`, which lies in `|alpha| <= r`.
    pub fn square(r: f64, n: usize) -> Self {
        let half = r / 2f64.sqrt();
        let axis: Vec<f64> = (0..n)
            .map(|i| {
                if n == 1 {
                    0.0
                } else {
                    -half + 2.0 * half * i as f64 / (n - 1) as f64
                }
            })
            .collect();
        let bases = axis
            .iter()
            .flat_map(|&y| axis.iter().map(move |&x| Complex64::new(x, y)))
            .collect();
        Self {
            bases,
            pairs: Self::standard_pairs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KahlerVerdict {
    pub is_kahler: bool,
    pub is_symplectic: bool,
    pub max_dev: f64,
}

/// Compare the pullback with the compatible Kahler reference on a grid.
/// Base points without a closed form are skipped.
pub fn kahler_verdict(fam: &StateFamily, grid: &SampleGrid, tol: f64) -> Result<KahlerVerdict> {
    let mut max_dev: f64 = 0.0;
    let mut max_im_dev: f64 = 0.0;
    for &base in &grid.bases {
        for &(u, w) in &grid.pairs {
            let reference = match kahler_reference(fam, base, u, w) {
                Ok(r) => r,
                Err(Error::UnsupportedBasePoint(_)) => continue,
                Err(e) => return Err(e),
            };
            let value = pullback_value(fam, base, u, w, TangentMethod::Analytic)?;
            max_dev = max_dev.max((value - reference).norm());
            max_im_dev = max_im_dev.max((value.im - reference.im).abs());
        }
    }
    Ok(KahlerVerdict {
        is_kahler: max_dev < tol,
        is_symplectic: max_im_dev < tol,
        max_dev,
    })
}

/// Real-coordinate components at `base`: `g_ij = Re h(e_i, e_j)` and
/// `omega12 = Im h(e_1, e_2)` for `e_1 = 1`, `e_2 = i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricComponents {
    pub g11: f64,
    pub g12: f64,
    pub g22: f64,
    pub omega12: f64,
}

pub fn metric_components(fam: &StateFamily, base: Complex64, method: TangentMethod) -> Result<MetricComponents> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let h11 = pullback_value(fam, base, one, one, method)?;
    let h12 = pullback_value(fam, base, one, i, method)?;
    let h22 = pullback_value(fam, base, i, i, method)?;
    Ok(MetricComponents {
        g11: h11.re,
        g12: h12.re,
        g22: h22.re,
        omega12: h12.im,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::statespace::project_orthogonal;
    use proptest::prelude::*;

    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);

    #[test]
    fn wh_tangent_at_origin() {
        let fam = StateFamily::wh(0.0).with_truncation(Truncation::Fixed(12));
        let t = analytic_tangent(&fam, TangentSpec::new(c64(0.0, 0.0), ONE)).unwrap();
        // d/ds e^{-s^2/2} (|0> + s|1> + ...) at s = 0.
        assert!((t.amp(1) - ONE).norm() < 1e-15);
        assert!(t.amp(0).norm() < 1e-15);
        assert!(t.amps().iter().skip(2).all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn su2_tangent_at_origin_is_raising_direction() {
        let fam = StateFamily::su2(0.5, 0.0);
        let t = analytic_tangent(&fam, TangentSpec::new(c64(0.0, 0.0), ONE)).unwrap();
        let spin = spin_matrices(0.5).unwrap();
        let low = StateVector::basis_vector(spin.basis(), 1).unwrap();
        let expect = low.apply(&spin.l_plus()).unwrap().scale(c64(-1.0, 0.0));
        assert!((t.amps() - expect.amps()).norm() < 1e-14);
    }

    #[test]
    fn zero_direction_gives_zero_tangent() {
        for fam in [
            StateFamily::wh(0.0),
            StateFamily::wh(0.5),
            StateFamily::su2(1.0, 0.3),
            StateFamily::su11(1.0),
        ] {
            let t = TangentSpec::new(c64(0.2, 0.1), c64(0.0, 0.0));
            assert!(analytic_tangent(&fam, t).unwrap().norm() < 1e-15);
            assert!(numeric_tangent(&fam, t, 1e-4).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn numeric_tangent_examples() {
        let cases = [
            (StateFamily::wh(0.0), c64(0.3, 0.4), ONE),
            (StateFamily::su11(1.0), c64(0.2, 0.0), I),
        ];
        for (fam, base, dir) in cases {
            let t = TangentSpec::new(base, dir);
            let psi = fam.state(base).unwrap();
            let num = numeric_tangent(&fam, t, 1e-4).unwrap();
            let ana = analytic_tangent(&fam, t).unwrap();
            let diff = project_orthogonal(&psi, &num.sub(&ana).unwrap()).unwrap();
            assert!(diff.norm() < 1e-7, "{:?}: {}", fam.group, diff.norm());
        }
    }

    #[test]
    fn step_guard() {
        let t = TangentSpec::new(c64(0.0, 0.0), ONE);
        assert!(matches!(
            numeric_tangent(&StateFamily::wh(0.0), t, 1e-9),
            Err(Error::Step(_))
        ));
        assert!(matches!(
            numeric_tangent(&StateFamily::wh(0.0), t, 0.1),
            Err(Error::Step(_))
        ));
    }

    #[test]
    fn su11_tangent_rejects_boundary() {
        let fam = StateFamily::su11(1.0).with_truncation(Truncation::Fixed(50));
        assert!(matches!(
            analytic_tangent(&fam, TangentSpec::new(c64(1.0, 0.0), ONE)),
            Err(Error::Domain(_)) | Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn pullback_examples() {
        let wh = StateFamily::wh(0.0);
        for &base in &[c64(0.0, 0.0), c64(1.2, -0.7), c64(-1.0, 1.7)] {
            let r = pullback_form(&wh, base, ONE, I).unwrap();
            assert!((r.value - I).norm() < 1e-10, "{base}: {}", r.value);
        }
        let r = pullback_form(&StateFamily::su11(1.0), c64(0.0, 0.0), ONE, ONE).unwrap();
        assert!((r.value - c64(2.0, 0.0)).norm() < 1e-10);

        // u conjugated: (alpha_dot, alpha') = (i, 1) gives the
        // WH-squeezed example value -i.
        let sq = StateFamily::wh(0.5);
        let r = pullback_form(&sq, c64(0.0, 0.0), I, ONE).unwrap();
        assert!((r.value - c64(0.0, -1.0)).norm() < 1e-10);
        assert!(r.metric_part.abs() < 1e-10);
        let r = pullback_form(&sq, c64(0.0, 0.0), ONE, I).unwrap();
        assert!((r.value - I).norm() < 1e-10);
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            closed_form(&StateFamily::wh(0.0), c64(0.7, 0.2), ONE, ONE).unwrap(),
            ONE
        );
        let su2 = closed_form(&StateFamily::su2(0.5, 0.0), c64(0.0, 0.0), ONE, ONE).unwrap();
        assert!((su2 - c64(0.5, 0.0)).norm() < 1e-15);
        let su11 = closed_form(&StateFamily::su11(2.0), c64(0.5, 0.0), ONE, ONE).unwrap();
        assert!((su11.re - 4.0 / 0.5625).abs() < 1e-12);
        assert!(matches!(
            closed_form(&StateFamily::wh(0.5), c64(0.1, 0.0), ONE, ONE),
            Err(Error::UnsupportedBasePoint(_))
        ));
    }

    #[test]
    fn su2_prefactor_is_lowest_weight_spin() {
        for &j in &[0.5, 1.0, 2.0] {
            assert!((su2_prefactor(j, 0.0).unwrap() - j).abs() < 1e-14);
        }
        // For j = 1 the squeezed vacuum is (sinh v, 0, -cosh v)/sqrt(cosh 2v) up to phase.
        let v = 0.5;
        assert!((su2_prefactor(1.0, v).unwrap() - 1.0 / (2.0 * v).cosh()).abs() < 1e-12);
    }

    #[test]
    fn su2_squeezed_matches_bracket() {
        for &(j, v) in &[(1.0, 0.5), (2.0, 0.5), (1.0, -1.0), (2.0, 1.0)] {
            let fam = StateFamily::su2(j, v);
            for (u, w) in SampleGrid::standard_pairs() {
                let r = pullback_form(&fam, c64(0.0, 0.0), u, w).unwrap();
                assert!(r.abs_deviation < 1e-10, "j={j} v={v} u={u} w={w}: {}", r.abs_deviation);
            }
            let p = su2_prefactor(j, v).unwrap();
            let value = pullback_value(&fam, c64(0.0, 0.0), ONE, ONE, TangentMethod::Analytic).unwrap();
            let swapped = su2_swapped_bracket(v, ONE, ONE) * p;
            assert!((value - swapped).norm() > 0.1);
        }
    }

    #[test]
    fn verdict_examples() {
        let tol = 1e-8;
        let v = kahler_verdict(&StateFamily::wh(0.0), &SampleGrid::square(2.0, 3), tol).unwrap();
        assert!(v.is_kahler && v.is_symplectic && v.max_dev < tol);
        let v = kahler_verdict(&StateFamily::wh(0.7), &SampleGrid::square(1.0, 3), tol).unwrap();
        assert!(!v.is_kahler && v.is_symplectic);
        let v = kahler_verdict(&StateFamily::su2(1.0, 0.0), &SampleGrid::origin(), tol).unwrap();
        assert!(v.is_kahler && v.is_symplectic);
        let v = kahler_verdict(&StateFamily::su11(0.75), &SampleGrid::square(0.8, 3), 1e-8).unwrap();
        assert!(v.is_kahler, "{}", v.max_dev);
    }

    #[test]
    fn su2_off_origin_matches_numeric_tangent() {
        let fam = StateFamily::su2(1.5, 0.0);
        let base = c64(0.4, -0.3);
        for (u, w) in SampleGrid::standard_pairs() {
            let a = pullback_value(&fam, base, u, w, TangentMethod::Analytic).unwrap();
            let n = pullback_value(&fam, base, u, w, TangentMethod::Numeric { h: 1e-4 }).unwrap();
            assert!((a - n).norm() < 1e-7);
        }
    }

    #[test]
    fn wh_squeezed_off_origin_matches_numeric_tangent() {
        let fam = StateFamily::wh(0.5);
        let base = c64(0.6, 0.2);
        for (u, w) in SampleGrid::standard_pairs() {
            let a = pullback_value(&fam, base, u, w, TangentMethod::Analytic).unwrap();
            let n = pullback_value(&fam, base, u, w, TangentMethod::Numeric { h: 1e-4 }).unwrap();
            assert!((a - n).norm() < 1e-7);
            // Off the origin the value is translation invariant.
            let origin = pullback_value(&fam, c64(0.0, 0.0), u, w, TangentMethod::Analytic).unwrap();
            assert!((a - origin).norm() < 1e-8);
        }
    }

    #[test]
    fn metric_anisotropy_and_symplectic_invariance() {
        let plain = pullback_value(&StateFamily::wh(0.0), c64(0.0, 0.0), ONE, ONE, TangentMethod::Analytic).unwrap();
        let plain_im = pullback_value(&StateFamily::wh(0.0), c64(0.0, 0.0), ONE, I, TangentMethod::Analytic).unwrap();
        for &v in &[-1.0, -0.5, 0.0, 0.5, 1.0] {
            let fam = StateFamily::wh(v);
            let re = pullback_value(&fam, c64(0.0, 0.0), ONE, ONE, TangentMethod::Analytic).unwrap();
            assert!((re.re - (2.0 * v).exp() * plain.re).abs() < 1e-8);
            let im = pullback_value(&fam, c64(0.0, 0.0), ONE, I, TangentMethod::Analytic).unwrap();
            assert!((im.im - plain_im.im).abs() < 1e-8);
        }
    }

    #[test]
    fn metric_components_for_plain_family() {
        let m = metric_components(&StateFamily::wh(0.0), c64(0.5, 0.5), TangentMethod::Analytic).unwrap();
        assert!((m.g11 - 1.0).abs() < 1e-10 && (m.g22 - 1.0).abs() < 1e-10);
        assert!(m.g12.abs() < 1e-10 && (m.omega12 - 1.0).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn su11_matches_disc_metric(
            r in 0.0f64..0.8, theta in 0.0f64..std::f64::consts::TAU,
            ur in -1.0f64..1.0, ui in -1.0f64..1.0, wr in -1.0f64..1.0, wi in -1.0f64..1.0,
        ) {
            let fam = StateFamily::su11(1.0);
            let r = pullback_form(&fam, Complex64::from_polar(r, theta), c64(ur, ui), c64(wr, wi)).unwrap();
            prop_assert!(r.abs_deviation <= 1e-6 * r.reference.norm().max(1e-3));
        }

        #[test]
        fn wh_pullback_is_hermitian_in_directions(
            br in -1.5f64..1.5, bi in -1.5f64..1.5,
            ur in -1.0f64..1.0, ui in -1.0f64..1.0, wr in -1.0f64..1.0, wi in -1.0f64..1.0,
        ) {
            let fam = StateFamily::wh(0.0);
            let base = c64(br, bi);
            let (u, w) = (c64(ur, ui), c64(wr, wi));
            let uw = pullback_value(&fam, base, u, w, TangentMethod::Analytic).unwrap();
            let wu = pullback_value(&fam, base, w, u, TangentMethod::Analytic).unwrap();
            prop_assert!((uw - wu.conj()).norm() < 1e-12);
        }
    }
}
