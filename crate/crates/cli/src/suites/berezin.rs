use std::fmt;
use std::str::FromStr;

use cohgeom::berezin::{
    basis_f, cayley, conjugate_pair, correspondence_report, symbol, BerezinOperator, BerezinSpace, RadialRule,
    DEFAULT_ANGULAR_NODES, DEFAULT_RADIAL_NODES,
};
use cohgeom::{Complex64, Error};
use rayon::prelude::*;

use super::row_error;
use crate::parse::{Cutoff, FloatList, Point, PointList};
use crate::report::{Cell, Report};
use crate::settings::Settings;
use crate::{BerezinArgs, BerezinCommand, CliError};

const POINTS: &str = "0,1;0,2;1,1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Rule(RadialRule);

impl FromStr for Rule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "jacobi" => Ok(Rule(RadialRule::GaussJacobi)),
            "legendre" => Ok(Rule(RadialRule::GaussLegendre)),
            _ => Err("expected jacobi or legendre".into()),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            RadialRule::GaussJacobi => "jacobi",
            RadialRule::GaussLegendre => "legendre",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Op {
    Identity,
    MultZ,
    MultZbar,
    Projector,
}

impl FromStr for Op {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "identity" => Ok(Op::Identity),
            "mult-z" => Ok(Op::MultZ),
            "mult-zbar" => Ok(Op::MultZbar),
            "projector" => Ok(Op::Projector),
            _ => Err("expected identity, mult-z, mult-zbar or projector".into()),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Op::Identity => "identity",
            Op::MultZ => "mult-z",
            Op::MultZbar => "mult-zbar",
            Op::Projector => "projector",
        })
    }
}

fn planck(s: &mut Settings, a: &BerezinArgs, default: &str) -> Result<f64, CliError> {
    let h: f64 = s.get("h", a.h.as_deref(), default)?;
    if !(h > 0.0 && h < 1.0) {
        return Err(CliError::Usage(format!("h must lie in (0, 1), got {h}")));
    }
    Ok(h)
}

/// Space with the quadrature flags applied and a cutoff covering `points`.
fn space(
    s: &mut Settings,
    a: &BerezinArgs,
    h: f64,
    points: &[Complex64],
    default_cutoff: &str,
) -> Result<BerezinSpace, CliError> {
    let cutoff: Cutoff = s.get("cutoff", a.cutoff.as_deref(), default_cutoff)?;
    let radial: usize = s.get("radial", a.radial.as_deref(), &DEFAULT_RADIAL_NODES.to_string())?;
    let angular: usize = s.get("angular", a.angular.as_deref(), &DEFAULT_ANGULAR_NODES.to_string())?;
    let rule: Rule = s.get("rule", a.rule.as_deref(), "jacobi")?;
    let kernel_tol = s.positive("kernel_tol", a.kernel_tol.as_deref(), "1e-12")?;
    let n = match cutoff {
        Cutoff::Fixed(n) => n,
        Cutoff::Auto => {
            let mut radius: f64 = 0.0;
            for &p in points {
                radius = radius.max(cayley(p).map_err(|e| CliError::Usage(e.to_string()))?.norm());
            }
            BerezinSpace::cutoff_for(h, radius, kernel_tol)
        }
    };
    let mut space =
        BerezinSpace::with_quadrature(h, n, radial, angular, rule.0).map_err(|e| CliError::Usage(e.to_string()))?;
    space.kernel_tol = kernel_tol;
    Ok(space)
}

fn points(s: &mut Settings, a: &BerezinArgs) -> Result<Vec<Complex64>, CliError> {
    let list: PointList = s.get("point", a.points().as_deref(), POINTS)?;
    for p in &list.0 {
        if !(p.im > 0.0) {
            return Err(CliError::Usage(format!(
                "point {} is not in the upper half plane",
                Point(*p)
            )));
        }
    }
    Ok(list.0)
}

fn gram(s: &mut Settings, a: &BerezinArgs) -> Result<Report, CliError> {
    let h = planck(s, a, "0.25")?;
    let mut space = space(s, a, h, &[], "8")?;
    space.quad_tol = s.positive("tol", a.tol.as_deref(), "1e-8")?;
    let mut report = Report::new(vec!["l", "m", "re", "im", "dev", "status"]);
    let g = match space.gram() {
        Ok(g) => g,
        Err(e) => {
            row_error("gram", &e);
            report.require(false);
            return Ok(report);
        }
    };
    for l in 0..g.nrows() {
        for m in 0..g.ncols() {
            let delta = if l == m { 1.0 } else { 0.0 };
            let dev = (g[(l, m)] - delta).norm();
            let ok = dev < space.quad_tol;
            report.require(ok);
            report.dev(dev);
            report.push(vec![
                Cell::Int(l as i64),
                Cell::Int(m as i64),
                Cell::Num(g[(l, m)].re),
                Cell::Num(g[(l, m)].im),
                Cell::Num(dev),
                Cell::status(ok),
            ]);
        }
    }
    Ok(report)
}

fn kernel(s: &mut Settings, a: &BerezinArgs) -> Result<Report, CliError> {
    let h = planck(s, a, "0.25")?;
    let pts = points(s, a)?;
    let space = space(s, a, h, &pts, "auto")?;
    let level: usize = s.get("level", a.level.as_deref(), "2")?;
    if level >= space.cutoff() {
        return Err(CliError::Usage(format!("level {level} needs cutoff above {level}")));
    }
    let tol = s.positive("tol", a.tol.as_deref(), "1e-6")?;
    let rows: Vec<Result<[f64; 9], Error>> = pts
        .par_iter()
        .map(|&p| {
            let k = space.kernel(p, p)?.re;
            let exact = space.kernel_exact(p, p)?.re;
            let repro = space.reproducing_value(p, level)?;
            let f = basis_f(level, p, h)?;
            Ok([
                k,
                exact,
                (k - exact).abs() / exact,
                repro.re,
                repro.im,
                f.re,
                f.im,
                (repro - f).norm(),
                0.0,
            ])
        })
        .collect();
    let mut report = Report::new(vec![
        "re_p",
        "im_p",
        "kernel",
        "kernel_exact",
        "kernel_dev",
        "repro_re",
        "repro_im",
        "f_re",
        "f_im",
        "dev",
        "status",
    ]);
    for (p, row) in pts.iter().zip(rows) {
        let mut cells = vec![Cell::Num(p.re), Cell::Num(p.im)];
        let ok = match row {
            Ok(v) => {
                cells.extend(v[..8].iter().map(|&x| Cell::Num(x)));
                report.dev(v[7]);
                v[2] < space.kernel_tol && v[7] < tol
            }
            Err(e) => {
                row_error(&format!("p={}", Point(*p)), &e);
                cells.extend(std::iter::repeat_n(Cell::Num(f64::NAN), 8));
                false
            }
        };
        report.require(ok);
        cells.push(Cell::status(ok));
        report.push(cells);
    }
    Ok(report)
}

fn symbols(s: &mut Settings, a: &BerezinArgs) -> Result<Report, CliError> {
    let h = planck(s, a, "0.25")?;
    let pts = points(s, a)?;
    let space = space(s, a, h, &pts, "auto")?;
    let op: Op = s.get("op", a.op.as_deref(), "mult-z")?;
    let tol = s.positive("tol", a.tol.as_deref(), "1e-10")?;
    let n = space.cutoff();
    let operator = match op {
        Op::Identity => BerezinOperator::identity(n),
        Op::MultZ => BerezinOperator::mult_z(&space),
        Op::MultZbar => BerezinOperator::mult_z(&space).adjoint(),
        Op::Projector => BerezinOperator::projector(n, 0),
    };
    let mut report = Report::new(vec![
        "re_p",
        "im_p",
        "unnorm_re",
        "unnorm_im",
        "norm_re",
        "norm_im",
        "expected_re",
        "expected_im",
        "dev",
        "status",
    ]);
    for &p in &pts {
        let z = cayley(p)?;
        let expected = match op {
            Op::Identity => Complex64::new(1.0, 0.0),
            Op::MultZ => z,
            Op::MultZbar => z.conj(),
            Op::Projector => Complex64::new((1.0 - z.norm_sqr()).powf(1.0 / h), 0.0),
        };
        let mut cells = vec![Cell::Num(p.re), Cell::Num(p.im)];
        let ok = match symbol(&operator, p, p, &space) {
            Ok(sym) => {
                let dev = (sym.normalized - expected).norm();
                report.dev(dev);
                for x in [sym.unnormalized, sym.normalized, expected] {
                    cells.extend([Cell::Num(x.re), Cell::Num(x.im)]);
                }
                cells.push(Cell::Num(dev));
                dev < tol
            }
            Err(e) => {
                row_error(&format!("p={}", Point(p)), &e);
                cells.extend(std::iter::repeat_n(Cell::Num(f64::NAN), 7));
                false
            }
        };
        report.require(ok);
        cells.push(Cell::status(ok));
        report.push(cells);
    }
    Ok(report)
}

fn star(s: &mut Settings, a: &BerezinArgs) -> Result<Report, CliError> {
    let hs: FloatList = s.get("hs", a.hs.as_deref(), "0.2,0.1,0.05")?;
    if hs.0.len() < 2 || hs.0.iter().any(|h| !(*h > 0.0 && *h < 1.0)) {
        return Err(CliError::Usage("hs needs at least two values in (0, 1)".into()));
    }
    let p: Point = s.get("point", a.points().as_deref(), "0.3,1.2")?;
    let min_order = s.positive("min_order", a.min_order.as_deref(), "0.8")?;
    let mut report = Report::new(vec![
        "h",
        "cutoff",
        "product_dev",
        "bracket_dev",
        "product_order",
        "bracket_order",
        "status",
    ]);
    let r = match correspondence_report(&conjugate_pair, p.0, &hs.0) {
        Ok(r) => r,
        Err(e) => {
            row_error("star", &e);
            report.require(false);
            return Ok(report);
        }
    };
    let ok = r.product_monotone && r.bracket_monotone && r.product_order >= min_order;
    report.require(ok);
    for row in &r.rows {
        report.dev(row.product_dev.max(row.bracket_dev));
        report.push(vec![
            Cell::Num(row.h),
            Cell::Int(row.cutoff as i64),
            Cell::Num(row.product_dev),
            Cell::Num(row.bracket_dev),
            Cell::Num(r.product_order),
            Cell::Num(r.bracket_order),
            Cell::status(ok),
        ]);
    }
    Ok(report)
}

pub fn run(s: &mut Settings, cmd: &BerezinCommand) -> Result<Report, CliError> {
    match cmd {
        BerezinCommand::Gram(a) => gram(s, a),
        BerezinCommand::Kernel(a) => kernel(s, a),
        BerezinCommand::Symbol(a) => symbols(s, a),
        BerezinCommand::Star(a) => star(s, a),
    }
}
