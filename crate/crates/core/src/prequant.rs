//! Prequantum operators for the SUT(2,R) orbit with `omega = (1/t) ds ^ dt`,
//! written in the coordinates `a = log t` and `s` where `omega = ds ^ da`.
//!
//! The operators are
//!
//! - `J1 psi = -i hbar t psi_s + t log t psi + t psi`
//! - `J2 psi = 2 i hbar psi_a + 2 s psi`
//!
//! Wave functions are entire in `(a, s)` so that the flows, which shift
//! their arguments by imaginary amounts, can be evaluated.

use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// A wave function of `(a, s)` with its analytic continuation and partials
/// up to second order.
pub trait ScalarField: Sync {
    fn eval(&self, a: Complex64, s: Complex64) -> Complex64;
    fn d_a(&self, a: Complex64, s: Complex64) -> Complex64;
    fn d_s(&self, a: Complex64, s: Complex64) -> Complex64;
    fn d_aa(&self, a: Complex64, s: Complex64) -> Complex64;
    fn d_as(&self, a: Complex64, s: Complex64) -> Complex64;
    fn d_ss(&self, a: Complex64, s: Complex64) -> Complex64;
}

/// The test basis `{1, s, t, e^{iks}, e^{sigma a}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestField {
    One,
    S,
    T,
    ExpIks(f64),
    ExpSigmaA(f64),
}

impl TestField {
    pub fn standard_basis() -> Vec<TestField> {
        vec![
            TestField::One,
            TestField::S,
            TestField::T,
            TestField::ExpIks(1.3),
            TestField::ExpSigmaA(0.7),
        ]
    }

    pub fn name(&self) -> String {
        match self {
            TestField::One => "1".into(),
            TestField::S => "s".into(),
            TestField::T => "t".into(),
            TestField::ExpIks(k) => format!("exp(i*{k}*s)"),
            TestField::ExpSigmaA(sig) => format!("exp({sig}*a)"),
        }
    }
}

impl ScalarField for TestField {
    fn eval(&self, a: Complex64, s: Complex64) -> Complex64 {
        match *self {
            TestField::One => re(1.0),
            TestField::S => s,
            TestField::T => a.exp(),
            TestField::ExpIks(k) => (I * k * s).exp(),
            TestField::ExpSigmaA(sig) => (a * sig).exp(),
        }
    }

    fn d_a(&self, a: Complex64, s: Complex64) -> Complex64 {
        match *self {
            TestField::T => a.exp(),
            TestField::ExpSigmaA(sig) => self.eval(a, s) * sig,
            _ => re(0.0),
        }
    }

    fn d_s(&self, a: Complex64, s: Complex64) -> Complex64 {
        match *self {
            TestField::S => re(1.0),
            TestField::ExpIks(k) => self.eval(a, s) * I * k,
            _ => re(0.0),
        }
    }

    fn d_aa(&self, a: Complex64, s: Complex64) -> Complex64 {
        match *self {
            TestField::T => a.exp(),
            TestField::ExpSigmaA(sig) => self.eval(a, s) * sig * sig,
            _ => re(0.0),
        }
    }

    fn d_as(&self, _a: Complex64, _s: Complex64) -> Complex64 {
        re(0.0)
    }

    fn d_ss(&self, a: Complex64, s: Complex64) -> Complex64 {
        match *self {
            TestField::ExpIks(k) => -self.eval(a, s) * k * k,
            _ => re(0.0),
        }
    }
}

/// Point of the orbit in `(s, t)`, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitCoords {
    pub s: f64,
    pub t: f64,
}

impl OrbitCoords {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t = {t} must be positive")));
        }
        Ok(Self { s, t })
    }

    fn a(&self) -> Complex64 {
        re(self.t.ln())
    }

    fn s_c(&self) -> Complex64 {
        re(self.s)
    }
}

/// Which moment function: `J1 = t` or `J2 = 2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Moment {
    J1,
    J2,
}

/// `J_i psi` at a point.
pub fn prequantum_apply(i: Moment, psi: &dyn ScalarField, p: OrbitCoords, hbar: f64) -> Complex64 {
    let (a, s) = (p.a(), p.s_c());
    let t = p.t;
    match i {
        Moment::J1 => -I * hbar * t * psi.d_s(a, s) + psi.eval(a, s) * (t * t.ln() + t),
        Moment::J2 => 2.0 * I * hbar * psi.d_a(a, s) + psi.eval(a, s) * (2.0 * p.s),
    }
}

/// Rate of the `J2` flow: `e^{s tau}` or `e^{2 s tau}`, the latter being the
/// one whose generator is the `J2` operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowVariant {
    SingleRate,
    DoubleRate,
}

/// `e^{tau J1} psi = e^{tau t (log t + 1)} psi(a, s - i hbar t tau)`,
/// `e^{tau J2} psi = e^{c s tau} psi(a + 2 i hbar tau, s)` with `c = 1`
/// (single rate) or `c = 2` (double rate).
pub fn flow_apply(
    i: Moment,
    tau: f64,
    psi: &dyn ScalarField,
    p: OrbitCoords,
    hbar: f64,
    variant: FlowVariant,
) -> Complex64 {
    let (a, s) = (p.a(), p.s_c());
    let t = p.t;
    match i {
        Moment::J1 => re(tau * t * (t.ln() + 1.0)).exp() * psi.eval(a, s - I * hbar * t * tau),
        Moment::J2 => {
            let c = match variant {
                FlowVariant::SingleRate => 1.0,
                FlowVariant::DoubleRate => 2.0,
            };
            re(c * p.s * tau).exp() * psi.eval(a + 2.0 * I * hbar * tau, s)
        }
    }
}

/// `d/dtau flow_apply` at `tau = 0` by central difference.
pub fn flow_generator(i: Moment, psi: &dyn ScalarField, p: OrbitCoords, hbar: f64, variant: FlowVariant) -> Complex64 {
    let h = 1e-5;
    (flow_apply(i, h, psi, p, hbar, variant) - flow_apply(i, -h, psi, p, hbar, variant)) / (2.0 * h)
}

/// `|d/dtau flow - J_i psi|` at a point.
pub fn generator_defect(i: Moment, psi: &dyn ScalarField, p: OrbitCoords, hbar: f64, variant: FlowVariant) -> f64 {
    (flow_generator(i, psi, p, hbar, variant) - prequantum_apply(i, psi, p, hbar)).norm()
}

/// Tensor grid `s x t` with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitGrid {
    pub s: (f64, f64, usize),
    pub t: (f64, f64, usize),
}

impl OrbitGrid {
    pub fn new(s: (f64, f64, usize), t: (f64, f64, usize)) -> Result<Self> {
        if s.2 == 0 || t.2 == 0 {
            return Err(Error::Domain("grid counts must be positive".into()));
        }
        if !(t.0 > 0.0 && t.1 > 0.0) {
            return Err(Error::Domain(format!("t range {}..{} must be positive", t.0, t.1)));
        }
        Ok(Self { s, t })
    }

    fn axis((lo, hi, n): (f64, f64, usize)) -> impl Iterator<Item = f64> {
        (0..n).map(move |i| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
    }

    pub fn points(&self) -> Vec<OrbitCoords> {
        Self::axis(self.t)
            .flat_map(|t| Self::axis(self.s).map(move |s| OrbitCoords { s, t }))
            .collect()
    }

    /// Same box with each count doubled (less one, so the old nodes remain).
    pub fn refined(&self) -> Self {
        Self {
            s: (self.s.0, self.s.1, 2 * self.s.2 - 1),
            t: (self.t.0, self.t.1, 2 * self.t.2 - 1),
        }
    }
}

/// Per-point comparison of the flows' generators with the operators.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    /// `max |d/dtau e^{tau J1} psi - J1 psi|` over grid and fields.
    pub j1_defect: f64,
    /// Same for `J2` with the single-rate flow.
    pub j2_single_rate_defect: f64,
    /// Same for `J2` with `e^{2 s tau}`.
    pub j2_double_rate_defect: f64,
    /// `max |defect(psi = 1) - |s||` for the single-rate `J2` flow.
    pub j2_unit_defect_vs_abs_s: f64,
    pub mismatch_detected: bool,
}

pub fn flow_report(grid: &OrbitGrid, fields: &[TestField], hbar: f64, tol: f64) -> FlowReport {
    let mut j1: f64 = 0.0;
    let mut j2p: f64 = 0.0;
    let mut j2c: f64 = 0.0;
    let mut unit: f64 = 0.0;
    for p in grid.points() {
        for f in fields {
            j1 = j1.max(generator_defect(Moment::J1, f, p, hbar, FlowVariant::SingleRate));
            j2p = j2p.max(generator_defect(Moment::J2, f, p, hbar, FlowVariant::SingleRate));
            j2c = j2c.max(generator_defect(Moment::J2, f, p, hbar, FlowVariant::DoubleRate));
        }
        let d = generator_defect(Moment::J2, &TestField::One, p, hbar, FlowVariant::SingleRate);
        unit = unit.max((d - p.s.abs()).abs());
    }
    FlowReport {
        j1_defect: j1,
        j2_single_rate_defect: j2p,
        j2_double_rate_defect: j2c,
        j2_unit_defect_vs_abs_s: unit,
        mismatch_detected: j2p > tol && j2c < tol,
    }
}

/// Classical observable `c_t t + c_s s + c_0`. The span of `{t, s, 1}` is
/// closed under `{f, g} = f_s g_a - f_a g_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    pub c_t: f64,
    pub c_s: f64,
    pub c_0: f64,
}

impl Observable {
    pub const J1: Self = Self {
        c_t: 1.0,
        c_s: 0.0,
        c_0: 0.0,
    };
    pub const J2: Self = Self {
        c_t: 0.0,
        c_s: 2.0,
        c_0: 0.0,
    };

    fn value(&self, a: Complex64, s: Complex64) -> Complex64 {
        a.exp() * self.c_t + s * self.c_s + self.c_0
    }

    /// `{f, g} = t (f_s g_t - f_t g_s)`.
    pub fn poisson(&self, g: &Self) -> Self {
        Self {
            c_t: self.c_s * g.c_t - self.c_t * g.c_s,
            c_s: 0.0,
            c_0: 0.0,
        }
    }
}

/// First-order operator `c_s d/ds + c_a d/da + c_0` with coefficients
/// evaluated from an observable.
struct FirstOrder {
    eps_field: f64,
    hbar: f64,
    f: Observable,
}

impl FirstOrder {
    /// `Q_f = -i hbar X_f - theta(X_f) + f` with `iota_{X_f} omega = eps df`,
    /// `X_f = eps (f_a d/ds - f_s d/da)` and `theta = -a ds`.
    fn coefficients(&self, a: Complex64, _s: Complex64) -> [Complex64; 3] {
        let f_a = a.exp() * self.f.c_t;
        let f_s = re(self.f.c_s);
        let eps = self.eps_field;
        let c_s = -I * self.hbar * eps * f_a;
        let c_a = I * self.hbar * eps * f_s;
        [c_s, c_a, a * f_a * eps]
    }

    /// Coefficient partials `[d/da, d/ds]` of each coefficient.
    fn coefficient_partials(&self, a: Complex64) -> [[Complex64; 2]; 3] {
        let f_a = a.exp() * self.f.c_t;
        let eps = self.eps_field;
        [
            [-I * self.hbar * eps * f_a, re(0.0)],
            [re(0.0), re(0.0)],
            [(f_a + a * f_a) * eps + f_a, re(self.f.c_s)],
        ]
    }
}

/// `Q psi` together with its first partials, from the partials of `psi`.
fn apply_with_partials(op: &FirstOrder, psi: &dyn ScalarField, a: Complex64, s: Complex64) -> [Complex64; 3] {
    let [cs, ca, c0_theta] = op.coefficients(a, s);
    let c0 = c0_theta + op.f.value(a, s);
    let [[cs_a, cs_s], [ca_a, ca_s], [c0_a, c0_s]] = op.coefficient_partials(a);
    let (v, pa, ps) = (psi.eval(a, s), psi.d_a(a, s), psi.d_s(a, s));
    let (paa, pas, pss) = (psi.d_aa(a, s), psi.d_as(a, s), psi.d_ss(a, s));
    let value = cs * ps + ca * pa + c0 * v;
    let d_a = cs_a * ps + cs * pas + ca_a * pa + ca * paa + c0_a * v + c0 * pa;
    let d_s = cs_s * ps + cs * pss + ca_s * pa + ca * pas + c0_s * v + c0 * ps;
    [value, d_a, d_s]
}

/// `Q (Q' psi)` at a point.
fn compose(outer: &FirstOrder, inner: &FirstOrder, psi: &dyn ScalarField, a: Complex64, s: Complex64) -> Complex64 {
    let [v, v_a, v_s] = apply_with_partials(inner, psi, a, s);
    let [cs, ca, c0_theta] = outer.coefficients(a, s);
    let c0 = c0_theta + outer.f.value(a, s);
    cs * v_s + ca * v_a + c0 * v
}

/// `Q_f psi` in the given field convention.
pub fn quantize(f: Observable, eps_field: f64, psi: &dyn ScalarField, p: OrbitCoords, hbar: f64) -> Complex64 {
    let op = FirstOrder { eps_field, hbar, f };
    apply_with_partials(&op, psi, p.a(), p.s_c())[0]
}

/// `([Q_J1, Q_J2] - eps_dirac i hbar Q_{J1,J2}) psi` at a point.
pub fn dirac_defect(eps_field: f64, eps_dirac: f64, psi: &dyn ScalarField, p: OrbitCoords, hbar: f64) -> Complex64 {
    let q1 = FirstOrder {
        eps_field,
        hbar,
        f: Observable::J1,
    };
    let q2 = FirstOrder {
        eps_field,
        hbar,
        f: Observable::J2,
    };
    let q12 = FirstOrder {
        eps_field,
        hbar,
        f: Observable::J1.poisson(&Observable::J2),
    };
    let (a, s) = (p.a(), p.s_c());
    let comm = compose(&q1, &q2, psi, a, s) - compose(&q2, &q1, psi, a, s);
    comm - I * hbar * eps_dirac * apply_with_partials(&q12, psi, a, s)[0]
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConventionResidual {
    pub eps_field: i8,
    pub eps_dirac: i8,
    pub max_residual: f64,
    pub worst_point: OrbitCoords,
    pub worst_field: TestField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiracReport {
    pub conventions: Vec<ConventionResidual>,
    /// Index into `conventions` of the smallest residual.
    pub best: usize,
    /// Residual when every `Q_f` is replaced by multiplication by `f`.
    pub multiplication_residual: f64,
    /// `max 2 hbar t |psi|` over the grid, the multiplication scheme's
    /// expected residual.
    pub multiplication_expected: f64,
}

impl DiracReport {
    pub fn best(&self) -> &ConventionResidual {
        &self.conventions[self.best]
    }

    /// Residual of the `eps_field = +1` operators.
    pub fn plus_field(&self, eps_dirac: i8) -> &ConventionResidual {
        self.conventions
            .iter()
            .find(|c| c.eps_field == 1 && c.eps_dirac == eps_dirac)
            .expect("all four conventions are present")
    }
}

pub fn dirac_residual(grid: &OrbitGrid, fields: &[TestField], hbar: f64) -> DiracReport {
    let points = grid.points();
    let mut conventions = Vec::with_capacity(4);
    for eps_field in [1i8, -1] {
        for eps_dirac in [1i8, -1] {
            let mut worst = (0.0, points[0], fields[0]);
            for &p in &points {
                for &f in fields {
                    let r = dirac_defect(eps_field as f64, eps_dirac as f64, &f, p, hbar).norm();
                    if r > worst.0 {
                        worst = (r, p, f);
                    }
                }
            }
            conventions.push(ConventionResidual {
                eps_field,
                eps_dirac,
                max_residual: worst.0,
                worst_point: worst.1,
                worst_field: worst.2,
            });
        }
    }
    let best = (0..conventions.len())
        .min_by(|&i, &j| conventions[i].max_residual.total_cmp(&conventions[j].max_residual))
        .unwrap_or(0);

    let bracket = Observable::J1.poisson(&Observable::J2);
    let mut mult: f64 = 0.0;
    let mut expected: f64 = 0.0;
    for &p in &points {
        for &f in fields {
            let (a, s) = (p.a(), p.s_c());
            let v = f.eval(a, s);
            let j1 = Observable::J1.value(a, s);
            let j2 = Observable::J2.value(a, s);
            let comm = j1 * (j2 * v) - j2 * (j1 * v);
            mult = mult.max((comm - I * hbar * bracket.value(a, s) * v).norm());
            expected = expected.max(2.0 * hbar * p.t * v.norm());
        }
    }
    DiracReport {
        conventions,
        best,
        multiplication_residual: mult,
        multiplication_expected: expected,
    }
}

/// `theta = -log(t) ds` or the variant `-|log t| ds`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialVariant {
    Log,
    AbsLog,
}

fn theta_s(variant: PotentialVariant, t: f64) -> f64 {
    match variant {
        PotentialVariant::Log => -t.ln(),
        PotentialVariant::AbsLog => -t.ln().abs(),
    }
}

/// `max |d theta - omega|` as `ds ^ dt` coefficients, with `d theta`
/// from central differences (`theta_t = 0`).
pub fn symplectic_potential_residual(variant: PotentialVariant, grid: &OrbitGrid) -> f64 {
    let h = 1e-5;
    grid.points()
        .iter()
        .map(|p| {
            // d(theta_s ds) = -(d theta_s / dt) ds ^ dt.
            let dtheta = -(theta_s(variant, p.t + h) - theta_s(variant, p.t - h)) / (2.0 * h);
            (dtheta - 1.0 / p.t).abs()
        })
        .fold(0.0, f64::max)
}
