//! Coadjoint orbits of SUT(2,R), the group of real unimodular upper
//! triangular 2x2 matrices.
//!
//! Algebra basis `E1 = [[0,1],[0,0]]`, `E2 = [[1,0],[0,-1]]`; a dual element
//! `[[u,0],[v,-u]]` pairs with `V = [[v1,v2],[0,-v1]]` by the trace,
//! `<X, V> = 2 u v1 + v v2`. Orbit points are dual elements `[[s,0],[t,-s]]`.
//! The symplectic form is normalised to `omega = (1/t) ds ^ dt`.

use std::collections::BTreeMap;

use nalgebra::Matrix2;

use crate::error::{Error, Result};

/// `[[g1, g2], [0, 1/g1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SutElement {
    g1: f64,
    g2: f64,
}

impl SutElement {
    pub fn new(g1: f64, g2: f64) -> Result<Self> {
        if g1 == 0.0 || !g1.is_finite() || !g2.is_finite() {
            return Err(Error::Domain(format!("g1 = {g1} must be finite and nonzero")));
        }
        Ok(Self { g1, g2 })
    }

    pub fn identity() -> Self {
        Self { g1: 1.0, g2: 0.0 }
    }

    pub fn g1(&self) -> f64 {
        self.g1
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    /// In the positive-diagonal component.
    pub fn is_positive(&self) -> bool {
        self.g1 > 0.0
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.g1, self.g2, 0.0, 1.0 / self.g1)
    }

    pub fn inverse(&self) -> Self {
        Self {
            g1: 1.0 / self.g1,
            g2: -self.g2,
        }
    }
}

/// `[[u, 0], [v, -u]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SutDual {
    pub u: f64,
    pub v: f64,
}

impl SutDual {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.u, 0.0, self.v, -self.u)
    }

    /// Trace pairing with an algebra element.
    pub fn pair(&self, x: &AlgebraElement) -> f64 {
        (self.matrix() * x.matrix()).trace()
    }
}

/// `[[v1, v2], [0, -v1]] = v2 E1 + v1 E2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgebraElement {
    pub v1: f64,
    pub v2: f64,
}

impl AlgebraElement {
    pub const E1: Self = Self { v1: 0.0, v2: 1.0 };
    pub const E2: Self = Self { v1: 1.0, v2: 0.0 };

    pub fn matrix(&self) -> Matrix2<f64> {
        Matrix2::new(self.v1, self.v2, 0.0, -self.v1)
    }

    /// `[X, Y] = 2 (x1 y2 - x2 y1) E1`.
    pub fn bracket(&self, other: &Self) -> Self {
        Self {
            v1: 0.0,
            v2: 2.0 * (self.v1 * other.v2 - self.v2 * other.v1),
        }
    }
}

/// Point `[[s, 0], [t, -s]]` of an orbit with `v0 != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub s: f64,
    pub t: f64,
}

impl OrbitPoint {
    pub fn new(s: f64, t: f64) -> Self {
        Self { s, t }
    }

    pub fn as_dual(&self) -> SutDual {
        SutDual { u: self.s, v: self.t }
    }

    fn nondegenerate(&self) -> Result<()> {
        if self.t == 0.0 {
            return Err(Error::DegenerateOrbit);
        }
        Ok(())
    }
}

/// Tangent vector `ds d/ds + dt d/dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitTangent {
    pub ds: f64,
    pub dt: f64,
}

impl OrbitTangent {
    pub const DS: Self = Self { ds: 1.0, dt: 0.0 };
    pub const DT: Self = Self { ds: 0.0, dt: 1.0 };

    pub fn new(ds: f64, dt: f64) -> Self {
        Self { ds, dt }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            ds: c * self.ds,
            dt: c * self.dt,
        }
    }
}

/// `Ad*_g (u, v) = (u + (g2/g1) v, v / g1^2)`.
pub fn coadjoint_action(g: &SutElement, x: &SutDual) -> SutDual {
    SutDual {
        u: x.u + g.g2 / g.g1 * x.v,
        v: x.v / (g.g1 * g.g1),
    }
}

/// Pushforward of a tangent under `Ad*_g`.
pub fn coadjoint_pushforward(g: &SutElement, xi: &OrbitTangent) -> OrbitTangent {
    OrbitTangent {
        ds: xi.ds + g.g2 / g.g1 * xi.dt,
        dt: xi.dt / (g.g1 * g.g1),
    }
}

pub fn fixes(g: &SutElement, x: &SutDual) -> bool {
    coadjoint_action(g, x) == *x
}

/// Solves `Ad*_g X = X`: `v/g1^2 = v` forces `g1 = +-1`, then
/// `(g2/g1) v = 0` forces `g2 = 0`.
pub fn stabilizer_check(x: &SutDual) -> Result<Vec<SutElement>> {
    if x.v == 0.0 {
        return Err(Error::DegenerateOrbit);
    }
    let solutions: Vec<SutElement> = [1.0, -1.0].iter().map(|&g1| SutElement { g1, g2: 0.0 }).collect();
    debug_assert!(solutions.iter().all(|g| fixes(g, x)));
    Ok(solutions)
}

/// Algebra element representing a tangent: `v2 = ds/(2t)`, `v1 = dt/(2t)`.
pub fn tangent_to_algebra(p: &OrbitPoint, xi: &OrbitTangent) -> Result<AlgebraElement> {
    p.nondegenerate()?;
    Ok(AlgebraElement {
        v1: xi.dt / (2.0 * p.t),
        v2: xi.ds / (2.0 * p.t),
    })
}

/// Inverse of [`tangent_to_algebra`]: `(2 t v2) d/ds + (2 t v1) d/dt`.
pub fn ad_star(p: &OrbitPoint, x: &AlgebraElement) -> OrbitTangent {
    OrbitTangent {
        ds: 2.0 * p.t * x.v2,
        dt: 2.0 * p.t * x.v1,
    }
}

/// `d/de Ad*_{exp(e X)} P` at `e = 0`: `(t v2, -2 t v1)`.
pub fn coadjoint_derivative(p: &OrbitPoint, x: &AlgebraElement) -> OrbitTangent {
    OrbitTangent {
        ds: p.t * x.v2,
        dt: -2.0 * p.t * x.v1,
    }
}

/// `<P, [V1, V2]>` with `V_i = tangent_to_algebra(P, xi_i)`; equals
/// `-(1/2t) ds ^ dt`.
pub fn kks_raw_pairing(p: &OrbitPoint, xi1: &OrbitTangent, xi2: &OrbitTangent) -> Result<f64> {
    let v1 = tangent_to_algebra(p, xi1)?;
    let v2 = tangent_to_algebra(p, xi2)?;
    let comm = v1.matrix() * v2.matrix() - v2.matrix() * v1.matrix();
    Ok((p.as_dual().matrix() * comm).trace())
}

/// Normalisation turning [`kks_raw_pairing`] into `(1/t) ds ^ dt`.
pub const KKS_NORMALIZATION: f64 = -2.0;

pub fn kks_form(p: &OrbitPoint, xi1: &OrbitTangent, xi2: &OrbitTangent) -> Result<f64> {
    Ok(KKS_NORMALIZATION * kks_raw_pairing(p, xi1, xi2)?)
}

/// The same pairing with tangents identified through the true derivative
/// of the coadjoint action, which needs no normalisation.
pub fn kks_from_derivative(p: &OrbitPoint, xi1: &OrbitTangent, xi2: &OrbitTangent) -> Result<f64> {
    p.nondegenerate()?;
    // Invert (t v2, -2 t v1) = (ds, dt).
    let alg = |xi: &OrbitTangent| AlgebraElement {
        v1: -xi.dt / (2.0 * p.t),
        v2: xi.ds / p.t,
    };
    Ok(p.as_dual().pair(&alg(xi1).bracket(&alg(xi2))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentFields {
    pub j1: f64,
    pub j2: f64,
    pub x_j1: OrbitTangent,
    pub x_j2: OrbitTangent,
    /// `max |omega(X_Ji, e) - dJ_i(e)|` over the coordinate vectors.
    pub residual: f64,
}

/// `J1 = Tr(P E1) = t`, `J2 = Tr(P E2) = 2s`, `X_J1 = t d/ds`,
/// `X_J2 = -2t d/dt`, checked against [`kks_form`].
pub fn moment_and_fields(p: &OrbitPoint) -> Result<MomentFields> {
    p.nondegenerate()?;
    let dual = p.as_dual();
    let j1 = dual.pair(&AlgebraElement::E1);
    let j2 = dual.pair(&AlgebraElement::E2);
    let x_j1 = OrbitTangent::new(p.t, 0.0);
    let x_j2 = OrbitTangent::new(0.0, -2.0 * p.t);
    let dj1 = [0.0, 1.0];
    let dj2 = [2.0, 0.0];
    let mut residual: f64 = 0.0;
    for (k, e) in [OrbitTangent::DS, OrbitTangent::DT].iter().enumerate() {
        residual = residual.max((kks_form(p, &x_j1, e)? - dj1[k]).abs());
        residual = residual.max((kks_form(p, &x_j2, e)? - dj2[k]).abs());
    }
    Ok(MomentFields {
        j1,
        j2,
        x_j1,
        x_j2,
        residual,
    })
}

/// A real function on the orbit with its gradient `(d/ds, d/dt)`.
pub trait OrbitFunction {
    fn eval(&self, p: OrbitPoint) -> f64;
    fn grad(&self, p: OrbitPoint) -> (f64, f64);
}

/// Central-difference gradient with step `1e-5`.
pub fn fd_grad(f: &dyn OrbitFunction, p: OrbitPoint) -> (f64, f64) {
    let h = 1e-5;
    let ds = (f.eval(OrbitPoint::new(p.s + h, p.t)) - f.eval(OrbitPoint::new(p.s - h, p.t))) / (2.0 * h);
    let dt = (f.eval(OrbitPoint::new(p.s, p.t + h)) - f.eval(OrbitPoint::new(p.s, p.t - h))) / (2.0 * h);
    (ds, dt)
}

/// Hamiltonian vector field of `f`, from `omega(X_f, .) = df` solved as a
/// 2x2 linear system built from [`kks_form`].
pub fn hamiltonian_field(f: &dyn OrbitFunction, p: OrbitPoint) -> Result<OrbitTangent> {
    let w = form_matrix(&p)?;
    let (fs, ft) = f.grad(p);
    // omega(X, e_j) = sum_i X_i w_ij = df_j, i.e. w^T X = df.
    let x = w.transpose().try_inverse().ok_or(Error::DegenerateOrbit)? * nalgebra::Vector2::new(fs, ft);
    Ok(OrbitTangent::new(x[0], x[1]))
}

fn form_matrix(p: &OrbitPoint) -> Result<Matrix2<f64>> {
    let e = [OrbitTangent::DS, OrbitTangent::DT];
    let mut w = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            w[(i, j)] = kks_form(p, &e[i], &e[j])?;
        }
    }
    Ok(w)
}

/// `{f, g} = omega(X_f, X_g)`.
pub fn poisson(f: &dyn OrbitFunction, g: &dyn OrbitFunction, p: OrbitPoint) -> Result<f64> {
    kks_form(&p, &hamiltonian_field(f, p)?, &hamiltonian_field(g, p)?)
}

/// Real polynomial in `s` and `t`, keyed by exponent pairs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly(BTreeMap<(u32, u32), f64>);

impl Poly {
    pub fn monomial(coef: f64, ps: u32, pt: u32) -> Self {
        let mut m = BTreeMap::new();
        if coef != 0.0 {
            m.insert((ps, pt), coef);
        }
        Self(m)
    }

    pub fn constant(c: f64) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn s() -> Self {
        Self::monomial(1.0, 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(1.0, 0, 1)
    }

    /// `J1 = t`.
    pub fn j1() -> Self {
        Self::t()
    }

    /// `J2 = 2s`.
    pub fn j2() -> Self {
        Self::monomial(2.0, 1, 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.0.clone();
        for (&k, &c) in &other.0 {
            *m.entry(k).or_insert(0.0) += c;
        }
        m.retain(|_, c| *c != 0.0);
        Self(m)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(
            self.0
                .iter()
                .map(|(&k, &v)| (k, v * c))
                .filter(|(_, v)| *v != 0.0)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (&(a, b), &c) in &self.0 {
            for (&(d, e), &f) in &other.0 {
                out = out.add(&Self::monomial(c * f, a + d, b + e));
            }
        }
        out
    }

    pub fn d_s(&self) -> Self {
        Self(
            self.0
                .iter()
                .filter(|((ps, _), _)| *ps > 0)
                .map(|(&(ps, pt), &c)| ((ps - 1, pt), c * ps as f64))
                .collect(),
        )
    }

    pub fn d_t(&self) -> Self {
        Self(
            self.0
                .iter()
                .filter(|((_, pt), _)| *pt > 0)
                .map(|(&(ps, pt), &c)| ((ps, pt - 1), c * pt as f64))
                .collect(),
        )
    }

    /// Exact bracket `t (f_s g_t - f_t g_s)`.
    pub fn poisson(&self, other: &Self) -> Self {
        let inner = self
            .d_s()
            .mul(&other.d_t())
            .add(&self.d_t().mul(&other.d_s()).scale(-1.0));
        Self::t().mul(&inner)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl OrbitFunction for Poly {
    fn eval(&self, p: OrbitPoint) -> f64 {
        self.0
            .iter()
            .map(|(&(ps, pt), &c)| c * p.s.powi(ps as i32) * p.t.powi(pt as i32))
            .sum()
    }

    fn grad(&self, p: OrbitPoint) -> (f64, f64) {
        (self.d_s().eval(p), self.d_t().eval(p))
    }
}

/// Orbit through `(u0, v0)` with its charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Charts {
    pub u0: f64,
    pub v0: f64,
}

impl Charts {
    pub fn new(u0: f64, v0: f64) -> Result<Self> {
        if v0 == 0.0 {
            return Err(Error::DegenerateOrbit);
        }
        Ok(Self { u0, v0 })
    }

    fn check_point(&self, p: &OrbitPoint) -> Result<()> {
        if !(p.t / self.v0 > 0.0) {
            return Err(Error::Domain(format!(
                "t = {} and v0 = {} differ in sign",
                p.t, self.v0
            )));
        }
        Ok(())
    }

    fn check_a(a: f64) -> Result<()> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!("a = {a} must be positive")));
        }
        Ok(())
    }

    /// `Phi(s, t) = (a, b) = (sqrt(v0/t), (u0 - s)/sqrt(v0 t))`, for `v0 > 0`.
    pub fn phi(&self, p: &OrbitPoint) -> Result<(f64, f64)> {
        self.check_point(p)?;
        let vt = (self.v0 * p.t).abs().sqrt();
        Ok(((self.v0 / p.t).sqrt(), (self.u0 - p.s) / vt))
    }

    /// `Phi^{-1}(a, b) = (u0 - b v0 / a, v0 / a^2)`.
    pub fn phi_inv(&self, a: f64, b: f64) -> Result<OrbitPoint> {
        Self::check_a(a)?;
        Ok(OrbitPoint::new(self.u0 - b * self.v0 / a, self.v0 / (a * a)))
    }

    /// `Psi(s, t) = (lambda, mu) = ((u0 - s)/v0, t/v0)`.
    pub fn psi(&self, p: &OrbitPoint) -> Result<(f64, f64)> {
        self.check_point(p)?;
        Ok(((self.u0 - p.s) / self.v0, p.t / self.v0))
    }

    /// `chi = Psi o Phi^{-1}`: `(a, b) -> (b/a, 1/a^2)`.
    pub fn chi(&self, a: f64, b: f64) -> Result<(f64, f64)> {
        Self::check_a(a)?;
        Ok((b / a, 1.0 / (a * a)))
    }

    /// `F1(b, a~) = (a, b)` with `a = 1/a~`.
    pub fn f1(&self, b: f64, a_tilde: f64) -> Result<(f64, f64)> {
        Self::check_a(a_tilde)?;
        Ok((1.0 / a_tilde, b))
    }
}

/// Coefficient `c` in `F^*(d lambda ^ d mu / mu^2) = c dx ^ dy` from a
/// central-difference Jacobian of `F: (x, y) -> (lambda, mu)`.
pub fn half_plane_pullback_coefficient(
    f: impl Fn(f64, f64) -> Result<(f64, f64)>,
    x: f64,
    y: f64,
    h: f64,
) -> Result<f64> {
    let (xp, xm) = (f(x + h, y)?, f(x - h, y)?);
    let (yp, ym) = (f(x, y + h)?, f(x, y - h)?);
    let dl_dx = (xp.0 - xm.0) / (2.0 * h);
    let dm_dx = (xp.1 - xm.1) / (2.0 * h);
    let dl_dy = (yp.0 - ym.0) / (2.0 * h);
    let dm_dy = (yp.1 - ym.1) / (2.0 * h);
    let mu = f(x, y)?.1;
    Ok((dl_dx * dm_dy - dl_dy * dm_dx) / (mu * mu))
}

/// Candidate symplectic forms on the orbit, each as its `ds ^ dt`
/// coefficient at a point, with the Hamiltonian-field residual it leaves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormCandidate {
    pub coefficient: f64,
    /// `max_i |omega(X_Ji, .) - dJ_i|` with the stated fields.
    pub field_residual: f64,
    /// `|coefficient - 1/t|`.
    pub deviation_from_canonical: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KksConsistency {
    pub point: OrbitPoint,
    /// Trace pairing with the tangent-to-algebra identification.
    pub raw_pairing: FormCandidate,
    /// `(1/t) ds ^ dt`.
    pub canonical: FormCandidate,
    /// Trace pairing through the derivative of the coadjoint action.
    pub from_derivative: FormCandidate,
    /// Chart form `Psi^*(d lambda ^ d mu / mu^2) = (1/t^2) dt ^ ds`.
    pub chart: FormCandidate,
}

fn candidate(p: &OrbitPoint, coefficient: f64) -> FormCandidate {
    let omega = |x: &OrbitTangent, y: &OrbitTangent| coefficient * (x.ds * y.dt - x.dt * y.ds);
    let x_j1 = OrbitTangent::new(p.t, 0.0);
    let x_j2 = OrbitTangent::new(0.0, -2.0 * p.t);
    let mut residual: f64 = 0.0;
    for (e, dj1, dj2) in [(OrbitTangent::DS, 0.0, 2.0), (OrbitTangent::DT, 1.0, 0.0)] {
        residual = residual.max((omega(&x_j1, &e) - dj1).abs());
        residual = residual.max((omega(&x_j2, &e) - dj2).abs());
    }
    FormCandidate {
        coefficient,
        field_residual: residual,
        deviation_from_canonical: (coefficient - 1.0 / p.t).abs(),
    }
}

pub fn kks_consistency(charts: &Charts, p: &OrbitPoint) -> Result<KksConsistency> {
    let (ds, dt) = (OrbitTangent::DS, OrbitTangent::DT);
    let raw = kks_raw_pairing(p, &ds, &dt)?;
    let derived = kks_from_derivative(p, &ds, &dt)?;
    let chart = half_plane_pullback_coefficient(|s, t| charts.psi(&OrbitPoint::new(s, t)), p.s, p.t, 1e-5)?;
    Ok(KksConsistency {
        point: *p,
        raw_pairing: candidate(p, raw),
        canonical: candidate(p, kks_form(p, &ds, &dt)?),
        from_derivative: candidate(p, derived),
        chart: candidate(p, chart),
    })
}
