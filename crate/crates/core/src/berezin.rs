//! Berezin quantization of the upper half plane `H`, carried out on the unit
//! disc through the Cayley map `z = (w - i)/(w + i)`.
//!
//! The weighted space on the disc has inner product
//! `(phi, psi) = (1/h - 1) int conj(phi) psi (1 - |z|^2)^{1/h} dmu` with
//! `dmu = dx dy / (pi (1 - |z|^2)^2)`, orthonormal basis
//! `psi_l(z) = sqrt((1/h)_l / l!) z^l`, and `f_l = psi_l o cayley` on `H`.
//! The kernel is `K(p, q) = sum f_l(p) conj(f_l(q))` and the coherent state
//! `tau_p = K(., p)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::orbits::{tail_mass_bound, truncation_dim, TruncationFamily};
use crate::special::ln_rising_over_factorial;
use crate::statespace::OperatorMatrix;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `(w - i)/(w + i)`.
pub fn cayley(w: Complex64) -> Result<Complex64> {
    if !(w.im > 0.0) {
        return Err(Error::Domain(format!("{w} is not in the upper half plane")));
    }
    Ok((w - I) / (w + I))
}

/// `i (1 + z)/(1 - z)`.
pub fn cayley_inv(z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("{z} is not in the unit disc")));
    }
    Ok(I * (1.0 + z) / (1.0 - z))
}

/// `ln((1/h)_l / l!)`.
fn ln_coeff(l: usize, h: f64) -> f64 {
    ln_rising_over_factorial(1.0 / h, l)
}

pub fn basis_psi(l: usize, z: Complex64, h: f64) -> Complex64 {
    if l == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if z == ZERO {
        return ZERO;
    }
    Complex64::from_polar(
        (0.5 * ln_coeff(l, h) + l as f64 * z.norm().ln()).exp(),
        l as f64 * z.arg(),
    )
}

pub fn basis_f(l: usize, w: Complex64, h: f64) -> Result<Complex64> {
    Ok(basis_psi(l, cayley(w)?, h))
}

/// Radial rule in `x = r^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RadialRule {
    /// Gauss-Jacobi for the weight `(1 - x)^{1/h - 2}`.
    GaussJacobi,
    /// Gauss-Legendre with the weight folded into the integrand.
    GaussLegendre,
}

/// Nodes and weights on `[0, 1]` for `int_0^1 g(x) (1 - x)^alpha dx`,
/// by Golub-Welsch.
pub fn gauss_jacobi_unit(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && alpha > -1.0);
    // Jacobi weight (1 - y)^alpha (1 + y)^0 on [-1, 1].
    let (a, b) = (alpha, 0.0);
    let mut jm = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jm[(k, k)] = if k == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let sm = 2.0 * m + a + b;
            let off = (4.0 * m * (m + a) * (m + b) * (m + a + b) / (sm * sm * (sm + 1.0) * (sm - 1.0))).sqrt();
            jm[(k, k + 1)] = off;
            jm[(k + 1, k)] = off;
        }
    }
    let eig = jm.symmetric_eigen();
    let mass = 1.0 / (alpha + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            (
                (1.0 + eig.eigenvalues[i]) / 2.0,
                mass * eig.eigenvectors[(0, i)].powi(2),
            )
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Tensor rule on the disc for `int g (1 - |z|^2)^{1/h} dmu`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscQuadrature {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub rule: RadialRule,
    points: Vec<Complex64>,
    weights: Vec<f64>,
}

impl DiscQuadrature {
    pub fn new(h: f64, radial_nodes: usize, angular_nodes: usize, rule: RadialRule) -> Self {
        let beta = 1.0 / h - 2.0;
        let (xs, ws) = match rule {
            RadialRule::GaussJacobi => gauss_jacobi_unit(radial_nodes, beta),
            RadialRule::GaussLegendre => {
                let (xs, ws) = gauss_jacobi_unit(radial_nodes, 0.0);
                let ws = xs.iter().zip(&ws).map(|(x, w)| w * (1.0 - x).powf(beta)).collect();
                (xs, ws)
            }
        };
        // dx dy / pi = dx_r dtheta / (2 pi) with x_r = r^2.
        let angular_weight = 1.0 / angular_nodes as f64;
        let mut points = Vec::with_capacity(radial_nodes * angular_nodes);
        let mut weights = Vec::with_capacity(radial_nodes * angular_nodes);
        for (x, w) in xs.iter().zip(&ws) {
            for j in 0..angular_nodes {
                let theta = std::f64::consts::TAU * j as f64 / angular_nodes as f64;
                points.push(Complex64::from_polar(x.sqrt(), theta));
                weights.push(w * angular_weight);
            }
        }
        Self {
            radial_nodes,
            angular_nodes,
            rule,
            points,
            weights,
        }
    }

    /// `int g (1 - |z|^2)^{1/h} dmu`.
    pub fn integrate(&self, g: &dyn Fn(Complex64) -> Complex64) -> Complex64 {
        self.points.iter().zip(&self.weights).map(|(&z, &w)| g(z) * w).sum()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

pub const DEFAULT_RADIAL_NODES: usize = 64;
pub const DEFAULT_ANGULAR_NODES: usize = 256;
pub const DEFAULT_QUAD_TOL: f64 = 1e-8;
pub const DEFAULT_KERNEL_TOL: f64 = 1e-12;

/// Weighted disc space at Planck parameter `h` with `cutoff` basis levels.
#[derive(Debug, Clone, PartialEq)]
pub struct BerezinSpace {
    h: f64,
    cutoff: usize,
    pub quad_tol: f64,
    pub kernel_tol: f64,
    base: DiscQuadrature,
    refined: DiscQuadrature,
}

impl BerezinSpace {
    pub fn new(h: f64, cutoff: usize) -> Result<Self> {
        Self::with_quadrature(
            h,
            cutoff,
            DEFAULT_RADIAL_NODES,
            DEFAULT_ANGULAR_NODES,
            RadialRule::GaussJacobi,
        )
    }

    pub fn with_quadrature(h: f64, cutoff: usize, radial: usize, angular: usize, rule: RadialRule) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::Domain(format!("h = {h} must lie in (0, 1)")));
        }
        if cutoff == 0 || radial == 0 || angular == 0 {
            return Err(Error::DimensionTooSmall { got: 0, min: 1 });
        }
        Ok(Self {
            h,
            cutoff,
            quad_tol: DEFAULT_QUAD_TOL,
            kernel_tol: DEFAULT_KERNEL_TOL,
            base: DiscQuadrature::new(h, radial, angular, rule),
            refined: DiscQuadrature::new(h, 2 * radial, 2 * angular, rule),
        })
    }

    /// Smallest cutoff whose [`kernel_tail`](Self::kernel_tail) at
    /// `|z| <= radius` is below `eps`.
    pub fn cutoff_for(h: f64, radius: f64, eps: f64) -> usize {
        let relative = eps * (1.0 - radius * radius).powf(1.0 / h);
        truncation_dim(
            Complex64::new(radius, 0.0),
            TruncationFamily::DiscreteSeries { k: 0.5 / h },
            relative,
        )
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn quadrature(&self) -> &DiscQuadrature {
        &self.base
    }

    /// `int g (1 - |z|^2)^{1/h} dmu`, gated by one refinement doubling.
    pub fn weighted_integral(&self, g: &dyn Fn(Complex64) -> Complex64) -> Result<Complex64> {
        let coarse = self.base.integrate(g);
        let fine = self.refined.integrate(g);
        let change = (fine - coarse).norm();
        if change > self.quad_tol {
            return Err(Error::Quadrature {
                change,
                tol: self.quad_tol,
            });
        }
        Ok(fine)
    }

    fn prefactor(&self) -> f64 {
        1.0 / self.h - 1.0
    }

    /// `(phi, psi)` on the disc.
    pub fn disc_inner(
        &self,
        phi: &dyn Fn(Complex64) -> Complex64,
        psi: &dyn Fn(Complex64) -> Complex64,
    ) -> Result<Complex64> {
        Ok(self.weighted_integral(&|z| phi(z).conj() * psi(z))? * self.prefactor())
    }

    /// `(f, g)` on the half plane, pulled back to the disc.
    pub fn half_plane_inner(
        &self,
        f: &dyn Fn(Complex64) -> Complex64,
        g: &dyn Fn(Complex64) -> Complex64,
    ) -> Result<Complex64> {
        let to_h = |z: Complex64| I * (1.0 + z) / (1.0 - z);
        self.disc_inner(&|z| f(to_h(z)), &|z| g(to_h(z)))
    }

    fn basis_values(&self, quad: &DiscQuadrature) -> DMatrix<Complex64> {
        let pts = quad.points();
        DMatrix::from_fn(pts.len(), self.cutoff, |i, l| {
            basis_psi(l, pts[i], self.h) * quad.weights()[i].sqrt()
        })
    }

    /// Gram matrix `(psi_l, psi_m)`, gated by refinement.
    pub fn gram(&self) -> Result<DMatrix<Complex64>> {
        let gram = |quad: &DiscQuadrature| {
            let b = self.basis_values(quad);
            (b.adjoint() * b).map(|z| z * self.prefactor())
        };
        let coarse = gram(&self.base);
        let fine = gram(&self.refined);
        let change = (&fine - &coarse).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if change > self.quad_tol {
            return Err(Error::Quadrature {
                change,
                tol: self.quad_tol,
            });
        }
        Ok(fine)
    }

    /// `(f_0(w), ..., f_{L-1}(w))`.
    pub fn f_values(&self, w: Complex64) -> Result<DVector<Complex64>> {
        let z = cayley(w)?;
        Ok(DVector::from_fn(self.cutoff, |l, _| basis_psi(l, z, self.h)))
    }

    /// Bound on the omitted part of `sum_l f_l(p) conj(f_l(q))`.
    pub fn kernel_tail(&self, p: Complex64, q: Complex64) -> Result<f64> {
        let x = (cayley(p)? * cayley(q)?.conj()).norm();
        let family = TruncationFamily::DiscreteSeries { k: 0.5 / self.h };
        // sum c_l x^l = (1 - x)^{-1/h} times the normalised series tail.
        let tail = tail_mass_bound(Complex64::new(x.sqrt(), 0.0), family, self.cutoff);
        Ok(tail * (1.0 - x).powf(-1.0 / self.h))
    }

    fn check_tail(&self, p: Complex64, q: Complex64) -> Result<()> {
        let tail = self.kernel_tail(p, q)?;
        if tail > self.kernel_tol {
            return Err(Error::Truncation {
                tail,
                budget: self.kernel_tol,
                dim: self.cutoff,
            });
        }
        Ok(())
    }

    /// Truncated `K(p, q) = sum f_l(p) conj(f_l(q))`.
    pub fn kernel(&self, p: Complex64, q: Complex64) -> Result<Complex64> {
        self.check_tail(p, q)?;
        Ok(self.f_values(q)?.dotc(&self.f_values(p)?))
    }

    /// Closed form `(1 - z_p conj(z_q))^{-1/h}` of the full series.
    pub fn kernel_exact(&self, p: Complex64, q: Complex64) -> Result<Complex64> {
        let x = cayley(p)? * cayley(q)?.conj();
        Ok((1.0 - x).powf(-1.0 / self.h))
    }

    /// Coefficients of `tau_p` in the `f_l` basis: `conj(f_l(p))`.
    pub fn coherent_coefficients(&self, p: Complex64) -> Result<DVector<Complex64>> {
        Ok(self.f_values(p)?.map(|z| z.conj()))
    }

    /// `tau_p(w) = K(w, p)`.
    pub fn coherent_state(&self, p: Complex64) -> Result<impl Fn(Complex64) -> Complex64 + '_> {
        let c = self.coherent_coefficients(p)?;
        let h = self.h;
        Ok(move |w: Complex64| {
            let z = (w - I) / (w + I);
            c.iter().enumerate().map(|(l, cl)| cl * basis_psi(l, z, h)).sum()
        })
    }

    /// `sum f_l(p) f_l`, the kernel sum read without the conjugation.
    pub fn coherent_state_literal(&self, p: Complex64) -> Result<impl Fn(Complex64) -> Complex64 + '_> {
        let c = self.f_values(p)?;
        let h = self.h;
        Ok(move |w: Complex64| {
            let z = (w - I) / (w + I);
            c.iter().enumerate().map(|(l, cl)| cl * basis_psi(l, z, h)).sum()
        })
    }

    /// `(tau_p, f_l)` computed by quadrature.
    pub fn reproducing_value(&self, p: Complex64, l: usize) -> Result<Complex64> {
        let tau = self.coherent_state(p)?;
        let h = self.h;
        self.half_plane_inner(&tau, &|w| basis_psi(l, (w - I) / (w + I), h))
    }
}

/// Operator given by its matrix in the `f_l` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BerezinOperator {
    pub matrix: OperatorMatrix,
}

impl BerezinOperator {
    pub fn identity(cutoff: usize) -> Self {
        Self::diagonal(&vec![Complex64::new(1.0, 0.0); cutoff])
    }

    pub fn diagonal(d: &[Complex64]) -> Self {
        Self {
            matrix: DMatrix::from_diagonal(&DVector::from_column_slice(d)),
        }
    }

    /// `|f_l><f_l|`.
    pub fn projector(cutoff: usize, l: usize) -> Self {
        let mut d = vec![ZERO; cutoff];
        d[l] = Complex64::new(1.0, 0.0);
        Self::diagonal(&d)
    }

    /// Multiplication by `z`: `z psi_l = sqrt(c_l / c_{l+1}) psi_{l+1}`,
    /// cut at the top level.
    pub fn mult_z(space: &BerezinSpace) -> Self {
        let n = space.cutoff();
        let mut m = DMatrix::zeros(n, n);
        for l in 0..n.saturating_sub(1) {
            let ratio = ((l as f64 + 1.0) / (l as f64 + 1.0 / space.h())).sqrt();
            m[(l + 1, l)] = Complex64::new(ratio, 0.0);
        }
        Self { matrix: m }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: &self.matrix * &other.matrix,
        }
    }
}

/// Both symbol normalisations at `(p, conj q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Symbol {
    /// `(tau_p, P tau_q)`.
    pub unnormalized: Complex64,
    /// `(tau_p, P tau_q) / (tau_p, tau_q)`.
    pub normalized: Complex64,
}

pub fn symbol(op: &BerezinOperator, p: Complex64, q: Complex64, space: &BerezinSpace) -> Result<Symbol> {
    space.check_tail(p, p)?;
    space.check_tail(q, q)?;
    let cp = space.coherent_coefficients(p)?;
    let cq = space.coherent_coefficients(q)?;
    let unnormalized = cp.dotc(&(&op.matrix * &cq));
    let k = cp.dotc(&cq);
    Ok(Symbol {
        unnormalized,
        normalized: unnormalized / k,
    })
}

/// Normalised symbol of `P1 P2` on the diagonal.
pub fn star(p1: &BerezinOperator, p2: &BerezinOperator, p: Complex64, space: &BerezinSpace) -> Result<Complex64> {
    Ok(symbol(&p1.compose(p2), p, p, space)?.normalized)
}

/// Factor `c` in `star12 - star21 ~ i h c {A1, A2}`.
pub const CONVENTION_FACTOR: Complex64 = Complex64::new(0.0, -1.0);

/// Wirtinger derivatives `(d/dz, d/dzbar)` by central differences.
pub fn wirtinger(f: &dyn Fn(Complex64) -> Complex64, z: Complex64, step: f64) -> (Complex64, Complex64) {
    let dx = (f(z + step) - f(z - step)) / (2.0 * step);
    let dy = (f(z + I * step) - f(z - I * step)) / (2.0 * step);
    ((dx - I * dy) / 2.0, (dx + I * dy) / 2.0)
}

/// `(1 - |z|^2)^2 (dA1/dzbar dA2/dz - dA2/dzbar dA1/dz)`.
pub fn poisson_disc(
    a1: &dyn Fn(Complex64) -> Complex64,
    a2: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    step: f64,
) -> Complex64 {
    let (a1z, a1zb) = wirtinger(a1, z, step);
    let (a2z, a2zb) = wirtinger(a2, z, step);
    (a1zb * a2z - a2zb * a1z) * (1.0 - z.norm_sqr()).powi(2)
}

/// `4 (Im w)^2 (dP1/dwbar dP2/dw - dP2/dwbar dP1/dw)`.
pub fn poisson_half_plane(
    p1: &dyn Fn(Complex64) -> Complex64,
    p2: &dyn Fn(Complex64) -> Complex64,
    w: Complex64,
    step: f64,
) -> Complex64 {
    let (p1w, p1wb) = wirtinger(p1, w, step);
    let (p2w, p2wb) = wirtinger(p2, w, step);
    (p1wb * p2w - p2wb * p1w) * (4.0 * w.im * w.im)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrespondenceRow {
    pub h: f64,
    pub cutoff: usize,
    /// `|star12 - A1 A2|`.
    pub product_dev: f64,
    /// `|(star12 - star21) - i h c {A1, A2}|`.
    pub bracket_dev: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrespondenceReport {
    pub rows: Vec<CorrespondenceRow>,
    /// Least-squares slopes of `log dev` against `log h`.
    pub product_order: f64,
    pub bracket_order: f64,
    pub product_monotone: bool,
    pub bracket_monotone: bool,
}

/// How the operator pair is built at each `h`.
pub type OperatorPairRule<'a> = &'a dyn Fn(&BerezinSpace) -> (BerezinOperator, BerezinOperator);

/// Compare the star product with the pointwise product and the Poisson
/// bracket over a sequence of `h` at the point `p`. Cutoffs are chosen per
/// `h` from the kernel tail.
pub fn correspondence_report(rule: OperatorPairRule, p: Complex64, hs: &[f64]) -> Result<CorrespondenceReport> {
    let z = cayley(p)?;
    let step = 1e-4;
    let mut rows = Vec::with_capacity(hs.len());
    for &h in hs {
        let radius = (z.norm() + 2.0 * step).min(0.999);
        let cutoff = BerezinSpace::cutoff_for(h, radius, 1e-16);
        let space = BerezinSpace::with_quadrature(h, cutoff, 1, 1, RadialRule::GaussJacobi)?;
        let (p1, p2) = rule(&space);
        let sym = |op: &BerezinOperator, zz: Complex64| -> Complex64 {
            let w = I * (1.0 + zz) / (1.0 - zz);
            symbol(op, w, w, &space)
                .map(|s| s.normalized)
                .unwrap_or(Complex64::new(f64::NAN, 0.0))
        };
        let a1 = sym(&p1, z);
        let a2 = sym(&p2, z);
        let s12 = star(&p1, &p2, p, &space)?;
        let s21 = star(&p2, &p1, p, &space)?;
        let bracket = poisson_disc(&|zz| sym(&p1, zz), &|zz| sym(&p2, zz), z, step);
        rows.push(CorrespondenceRow {
            h,
            cutoff,
            product_dev: (s12 - a1 * a2).norm(),
            bracket_dev: ((s12 - s21) - I * h * CONVENTION_FACTOR * bracket).norm(),
        });
    }
    let fit = |f: &dyn Fn(&CorrespondenceRow) -> f64| -> f64 {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), f(r).ln())).collect();
        let n = pts.len() as f64;
        let (mx, my) = (
            pts.iter().map(|p| p.0).sum::<f64>() / n,
            pts.iter().map(|p| p.1).sum::<f64>() / n,
        );
        let num: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let den: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        num / den
    };
    let monotone = |f: &dyn Fn(&CorrespondenceRow) -> f64| {
        let mut sorted: Vec<&CorrespondenceRow> = rows.iter().collect();
        sorted.sort_by(|a, b| b.h.total_cmp(&a.h));
        sorted.windows(2).all(|w| f(w[1]) < f(w[0]))
    };
    Ok(CorrespondenceReport {
        product_order: fit(&|r| r.product_dev),
        bracket_order: fit(&|r| r.bracket_dev),
        product_monotone: monotone(&|r| r.product_dev),
        bracket_monotone: monotone(&|r| r.bracket_dev),
        rows,
    })
}

/// The pair `(M_z^dagger, M_z)` whose symbols are `(conj z, z)`.
pub fn conjugate_pair(space: &BerezinSpace) -> (BerezinOperator, BerezinOperator) {
    let mz = BerezinOperator::mult_z(space);
    (mz.adjoint(), mz)
}

/// `int g(cayley(w)) (1 - |cayley(w)|^2)^{1/h} du dv / (4 pi v^2)` over the
/// half plane, with `u = tan(pi (x - 1/2))`, `v = tan(pi y / 2)` and
/// Gauss-Legendre in `x, y`.
pub fn half_plane_weighted_integral(g: &dyn Fn(Complex64) -> Complex64, h: f64, nodes: usize) -> Complex64 {
    let (xs, ws) = gauss_jacobi_unit(nodes, 0.0);
    let pi = std::f64::consts::PI;
    let mut total = ZERO;
    for (x, wx) in xs.iter().zip(&ws) {
        let u = (pi * (x - 0.5)).tan();
        let du = pi / (pi * (x - 0.5)).cos().powi(2);
        for (y, wy) in xs.iter().zip(&ws) {
            let v = (pi * y / 2.0).tan();
            let dv = pi / 2.0 / (pi * y / 2.0).cos().powi(2);
            let w = Complex64::new(u, v);
            let z = (w - I) / (w + I);
            let density = (1.0 - z.norm_sqr()).powf(1.0 / h) / (4.0 * pi * v * v);
            total += g(z) * density * du * dv * wx * wy;
        }
    }
    total
}
