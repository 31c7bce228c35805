use std::fmt;
use std::str::FromStr;

use cohgeom::pullback::{
    analytic_tangent, closed_form, metric_components, numeric_tangent, pullback_value, SampleGrid, StateFamily,
    TangentMethod, TangentSpec,
};
use cohgeom::{c64, Complex64, Error};
use rayon::prelude::*;

use super::row_error;
use crate::parse::GridSize;
use crate::report::{Cell, Report};
use crate::settings::Settings;
use crate::{CliError, PullbackArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Wh,
    Su2,
    Su11,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "wh" => Ok(Family::Wh),
            "su2" => Ok(Family::Su2),
            "su11" => Ok(Family::Su11),
            _ => Err("expected wh, su2 or su11".into()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Wh => "wh",
            Family::Su2 => "su2",
            Family::Su11 => "su11",
        })
    }
}

struct Row {
    base: Complex64,
    g: [f64; 4],
    reference: f64,
    dev: f64,
    oracle_dev: f64,
    ok: bool,
}

fn bases(grid: GridSize, radius: f64) -> Vec<Complex64> {
    let half = radius / 2f64.sqrt();
    let axis = |n: usize| -> Vec<f64> {
        (0..n)
            .map(|i| {
                if n == 1 {
                    0.0
                } else {
                    -half + 2.0 * half * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    };
    let (xs, ys) = (axis(grid.nx), axis(grid.ny));
    ys.iter().flat_map(|&y| xs.iter().map(move |&x| c64(x, y))).collect()
}

fn row(fam: &StateFamily, base: Complex64, step: f64) -> Result<(Row, Option<f64>), Error> {
    let m = metric_components(fam, base, TangentMethod::Analytic)?;
    let mut oracle: f64 = 0.0;
    for d in [c64(1.0, 0.0), c64(0.0, 1.0)] {
        let t = TangentSpec::new(base, d);
        let a = analytic_tangent(fam, t)?;
        let n = numeric_tangent(fam, t, step)?;
        oracle = oracle.max(a.sub(&n)?.norm() / a.norm().max(1.0));
    }
    let (reference, dev) = match closed_form(fam, base, c64(1.0, 0.0), c64(0.0, 1.0)) {
        Ok(r12) => {
            let mut dev: f64 = 0.0;
            for (u, w) in SampleGrid::standard_pairs() {
                let r = closed_form(fam, base, u, w)?;
                let v = pullback_value(fam, base, u, w, TangentMethod::Analytic)?;
                dev = dev.max((v - r).norm() / r.norm());
            }
            (r12.im, Some(dev))
        }
        Err(Error::UnsupportedBasePoint(_)) => (f64::NAN, None),
        Err(e) => return Err(e),
    };
    let g = [m.g11, m.g12, m.g22, m.omega12];
    Ok((
        Row {
            base,
            g,
            reference,
            dev: dev.unwrap_or(f64::NAN),
            oracle_dev: oracle,
            ok: true,
        },
        dev,
    ))
}

pub fn run(s: &mut Settings, a: &PullbackArgs) -> Result<Report, CliError> {
    let family: Family = s.get("family", a.family.as_deref(), "wh")?;
    let squeeze: f64 = s.get("squeeze", a.squeeze.as_deref(), "0")?;
    let fam = match family {
        Family::Wh => StateFamily::wh(squeeze),
        Family::Su2 => StateFamily::su2(s.get("rep", a.rep.as_deref(), "1")?, squeeze),
        Family::Su11 => StateFamily::su11(s.get("rep", a.rep.as_deref(), "1")?),
    };
    let at_origin_only = family == Family::Su2 || squeeze != 0.0;
    let grid: GridSize = s.get(
        "grid",
        a.grid.as_deref(),
        if at_origin_only {
            "1x1"
        } else if family == Family::Su11 {
            "4x4"
        } else {
            "5x5"
        },
    )?;
    let default_radius = match family {
        Family::Wh if !at_origin_only => "2",
        Family::Su11 => "0.8",
        _ => "0",
    };
    let radius: f64 = s.get("radius", a.radius.as_deref(), default_radius)?;
    if !(radius >= 0.0) {
        return Err(CliError::Usage(format!("radius must be non-negative, got {radius}")));
    }
    let tol = s.positive("tol", a.tol.as_deref(), "1e-8")?;
    let oracle_tol = s.positive("oracle_tol", a.oracle_tol.as_deref(), "1e-6")?;
    let step = s.positive("step", a.step.as_deref(), "1e-4")?;

    let rows: Vec<Row> = bases(grid, radius)
        .par_iter()
        .map(|&base| match row(&fam, base, step) {
            Ok((mut r, dev)) => {
                r.ok = dev.is_none_or(|d| d < tol) && r.oracle_dev < oracle_tol;
                r
            }
            Err(e) => {
                row_error(&format!("alpha={base}"), &e);
                let nan = f64::NAN;
                Row {
                    base,
                    g: [nan; 4],
                    reference: nan,
                    dev: nan,
                    oracle_dev: nan,
                    ok: false,
                }
            }
        })
        .collect();

    let mut report = Report::new(vec![
        "re_alpha",
        "im_alpha",
        "g11",
        "g12",
        "g22",
        "omega12",
        "ref",
        "dev",
        "oracle_dev",
        "status",
    ]);
    for r in rows {
        report.require(r.ok);
        report.dev(r.dev);
        let mut cells = vec![Cell::Num(r.base.re), Cell::Num(r.base.im)];
        cells.extend(r.g.iter().map(|&x| Cell::Num(x)));
        cells.extend([
            Cell::Num(r.reference),
            Cell::Num(r.dev),
            Cell::Num(r.oracle_dev),
            Cell::status(r.ok),
        ]);
        report.push(cells);
    }
    Ok(report)
}
