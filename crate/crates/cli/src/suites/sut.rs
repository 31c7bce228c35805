use cohgeom::prequant::{
    dirac_defect, dirac_residual, generator_defect, symplectic_potential_residual, FlowVariant, Moment, OrbitCoords,
    OrbitGrid, PotentialVariant, ScalarField, TestField,
};
use cohgeom::sut::{
    coadjoint_action, half_plane_pullback_coefficient, kks_form, kks_from_derivative, moment_and_fields, poisson,
    Charts, OrbitPoint, OrbitTangent, Poly, SutDual, SutElement,
};
use cohgeom::{c64, Error};
use rayon::prelude::*;

use crate::parse::Axes;
use crate::report::{Cell, Report};
use crate::settings::Settings;
use crate::{CliError, SutCommand};

const ORBIT_GRID: &str = "t:0.5..4:8 s:-2..2:8";
const CHART_GRID: &str = "a:0.5..2:4 b:-1..3:4";

fn orbit_grid(axes: &Axes) -> Result<OrbitGrid, CliError> {
    let s = axes.get("s").map_err(CliError::Usage)?;
    let t = axes.get("t").map_err(CliError::Usage)?;
    OrbitGrid::new(s.range(), t.range()).map_err(|e| CliError::Usage(e.to_string()))
}

/// Long-format rows `check, x, y, value, reference, dev, status`.
struct Checks {
    report: Report,
    tol: f64,
}

impl Checks {
    fn new(tol: f64) -> Self {
        Self {
            report: Report::new(vec!["check", "x", "y", "value", "reference", "dev", "status"]),
            tol,
        }
    }

    fn add(&mut self, check: &str, x: f64, y: f64, value: f64, reference: f64) {
        let dev = (value - reference).abs();
        let ok = dev < self.tol;
        self.report.require(ok);
        self.report.dev(dev);
        self.report.push(vec![
            Cell::text(check),
            Cell::Num(x),
            Cell::Num(y),
            Cell::Num(value),
            Cell::Num(reference),
            Cell::Num(dev),
            Cell::status(ok),
        ]);
    }

    fn add_result(&mut self, check: &str, x: f64, y: f64, value: Result<f64, Error>, reference: f64) {
        let value = value.unwrap_or_else(|e| {
            super::row_error(&format!("{check} at ({x}, {y})"), &e);
            f64::NAN
        });
        self.add(check, x, y, value, reference);
    }
}

fn kks(axes: &Axes, tol: f64) -> Result<Report, CliError> {
    let grid = orbit_grid(axes)?;
    let mut c = Checks::new(tol);
    let image = coadjoint_action(&SutElement::new(2.0, 1.0)?, &SutDual::new(1.0, 4.0));
    c.add("coadjoint_example_u", 1.0, 4.0, image.u, 3.0);
    c.add("coadjoint_example_v", 1.0, 4.0, image.v, 1.0);
    let (ds, dt) = (OrbitTangent::DS, OrbitTangent::DT);
    for q in grid.points() {
        let p = OrbitPoint::new(q.s, q.t);
        c.add_result("kks_canonical", p.s, p.t, kks_form(&p, &ds, &dt), 1.0 / p.t);
        c.add_result(
            "kks_vs_derivative",
            p.s,
            p.t,
            kks_form(&p, &ds, &dt),
            kks_from_derivative(&p, &ds, &dt)?,
        );
        c.add_result(
            "poisson_j1_j2",
            p.s,
            p.t,
            poisson(&Poly::j1(), &Poly::j2(), p),
            -2.0 * p.t,
        );
        c.add_result(
            "hamiltonian_fields",
            p.s,
            p.t,
            moment_and_fields(&p).map(|m| m.residual),
            0.0,
        );
    }
    Ok(c.report)
}

fn charts(axes: &Axes, tol: f64, u0: f64, v0: f64) -> Result<Report, CliError> {
    let charts = Charts::new(u0, v0)?;
    let a_axis = axes.get("a").map_err(CliError::Usage)?.values();
    let b_axis = axes.get("b").map_err(CliError::Usage)?.values();
    let mut c = Checks::new(tol);
    for &b in &b_axis {
        for &a in &a_axis {
            let chi = half_plane_pullback_coefficient(|x, y| charts.chi(x, y), a, b, 1e-5);
            c.add_result("chi_pullback", a, b, chi, 2.0);
            let round = charts.phi_inv(a, b).and_then(|p| {
                let (a2, b2) = charts.phi(&p)?;
                Ok((a2 - a).hypot(b2 - b))
            });
            c.add_result("phi_round_trip", a, b, round, 0.0);
            let p = charts.phi_inv(a, b)?;
            let psi = half_plane_pullback_coefficient(|s, t| charts.psi(&OrbitPoint::new(s, t)), p.s, p.t, 1e-5);
            c.add_result("psi_form", p.s, p.t, psi, -1.0 / (p.t * p.t));
        }
    }
    Ok(c.report)
}

fn flow(axes: &Axes, tol: f64, hbar: f64) -> Result<Report, CliError> {
    let grid = orbit_grid(axes)?;
    let fields = TestField::standard_basis();
    let cases: Vec<(OrbitCoords, TestField)> = grid
        .points()
        .into_iter()
        .flat_map(|p| fields.iter().map(move |&f| (p, f)))
        .collect();
    let rows: Vec<[f64; 3]> = cases
        .par_iter()
        .map(|(p, f)| {
            [
                generator_defect(Moment::J1, f, *p, hbar, FlowVariant::SingleRate),
                generator_defect(Moment::J2, f, *p, hbar, FlowVariant::SingleRate),
                generator_defect(Moment::J2, f, *p, hbar, FlowVariant::DoubleRate),
            ]
        })
        .collect();
    let mut report = Report::new(vec![
        "s",
        "t",
        "field",
        "j1_defect",
        "j2_single_rate_defect",
        "j2_double_rate_defect",
        "status",
    ]);
    let mut mismatch = false;
    for ((p, f), [j1, j2p, j2c]) in cases.iter().zip(rows) {
        let ok = j1 < tol && j2c < tol;
        mismatch |= j2p > tol;
        report.require(ok);
        report.dev(j1.max(j2c));
        report.push(vec![
            Cell::Num(p.s),
            Cell::Num(p.t),
            Cell::text(f.name()),
            Cell::Num(j1),
            Cell::Num(j2p),
            Cell::Num(j2c),
            Cell::status(ok),
        ]);
    }
    if !mismatch {
        eprintln!("single-rate J2 flow matches its operator everywhere on the grid");
    }
    report.require(mismatch);
    Ok(report)
}

/// `|defect| / (4 hbar t |psi|)` of the `(+1, +1)` pair, as (min, max).
fn defect_ratio(grid: &OrbitGrid, hbar: f64) -> (f64, f64) {
    let mut range = (f64::INFINITY, 0.0f64);
    for p in grid.points() {
        for f in TestField::standard_basis() {
            let psi = f.eval(c64(p.t.ln(), 0.0), c64(p.s, 0.0)).norm();
            if psi > 1e-12 {
                let r = dirac_defect(1.0, 1.0, &f, p, hbar).norm() / (4.0 * hbar * p.t * psi);
                range = (range.0.min(r), range.1.max(r));
            }
        }
    }
    range
}

fn push(
    report: &mut Report,
    check: &str,
    eps: (i64, i64),
    value: f64,
    at: Option<(&OrbitCoords, &TestField)>,
    status: Option<bool>,
) {
    let (s, t, field) = at.map_or((f64::NAN, f64::NAN, String::new()), |(p, f)| (p.s, p.t, f.name()));
    if let Some(ok) = status {
        report.require(ok);
    }
    report.push(vec![
        Cell::text(check),
        Cell::Int(eps.0),
        Cell::Int(eps.1),
        Cell::Num(value),
        Cell::Num(s),
        Cell::Num(t),
        Cell::text(field),
        status.map_or(Cell::text("INFO"), Cell::status),
    ]);
}

fn dirac(axes: &Axes, tol: f64, hbar: f64) -> Result<Report, CliError> {
    let grid = orbit_grid(axes)?;
    let fields = TestField::standard_basis();
    let d = dirac_residual(&grid, &fields, hbar);
    let mut report = Report::new(vec![
        "check",
        "eps_field",
        "eps_dirac",
        "value",
        "s",
        "t",
        "field",
        "status",
    ]);
    for (i, c) in d.conventions.iter().enumerate() {
        let status = (i == d.best).then_some(c.max_residual < tol);
        if i == d.best {
            report.dev(c.max_residual);
        }
        let eps = (c.eps_field as i64, c.eps_dirac as i64);
        push(
            &mut report,
            "convention",
            eps,
            c.max_residual,
            Some((&c.worst_point, &c.worst_field)),
            status,
        );
    }
    for (label, g) in [("defect_ratio", grid), ("defect_ratio_refined", grid.refined())] {
        let (lo, hi) = defect_ratio(&g, hbar);
        let stable = (lo - 1.0).abs() < 1e-10 && (hi - 1.0).abs() < 1e-10;
        report.dev((lo - 1.0).abs().max((hi - 1.0).abs()));
        push(&mut report, &format!("{label}_min"), (1, 1), lo, None, Some(stable));
        push(&mut report, &format!("{label}_max"), (1, 1), hi, None, Some(stable));
    }
    let log = symplectic_potential_residual(PotentialVariant::Log, &grid);
    report.dev(log);
    push(&mut report, "potential_log", (0, 0), log, None, Some(log < tol));
    let abs = symplectic_potential_residual(PotentialVariant::AbsLog, &grid);
    push(&mut report, "potential_abs_log", (0, 0), abs, None, None);
    push(
        &mut report,
        "multiplication",
        (0, 0),
        d.multiplication_residual,
        None,
        None,
    );
    push(
        &mut report,
        "multiplication_expected",
        (0, 0),
        d.multiplication_expected,
        None,
        None,
    );
    Ok(report)
}

pub fn run(s: &mut Settings, cmd: &SutCommand) -> Result<Report, CliError> {
    let (a, default_grid, default_tol) = match cmd {
        SutCommand::Kks(a) => (a, ORBIT_GRID, "1e-12"),
        SutCommand::Charts(a) => (a, CHART_GRID, "1e-6"),
        SutCommand::Flow(a) => (a, ORBIT_GRID, "1e-6"),
        SutCommand::Dirac(a) => (a, ORBIT_GRID, "1e-8"),
    };
    let axes: Axes = s.get("grid", a.grid().as_deref(), default_grid)?;
    let tol = s.positive("tol", a.tol.as_deref(), default_tol)?;
    match cmd {
        SutCommand::Kks(_) => kks(&axes, tol),
        SutCommand::Charts(a) => {
            let u0: f64 = s.get("u0", a.u0.as_deref(), "1")?;
            let v0: f64 = s.get("v0", a.v0.as_deref(), "4")?;
            charts(&axes, tol, u0, v0)
        }
        SutCommand::Flow(a) => flow(&axes, tol, s.positive("hbar", a.hbar.as_deref(), "1")?),
        SutCommand::Dirac(a) => dirac(&axes, tol, s.positive("hbar", a.hbar.as_deref(), "1")?),
    }
}
