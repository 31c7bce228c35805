use cohgeom::orbits::wh_squeezed;
use cohgeom::uncertainty::{min_uncertainty_residual, quadratures, rs_report};
use rayon::prelude::*;

use super::row_error;
use crate::parse::Point;
use crate::report::{Cell, Report};
use crate::settings::Settings;
use crate::{CliError, UncertaintyArgs};

pub fn run(s: &mut Settings, a: &UncertaintyArgs) -> Result<Report, CliError> {
    let n: usize = s.get("n", a.n.as_deref(), "64")?;
    if n < 2 {
        return Err(CliError::Usage("n must be at least 2".into()));
    }
    let alpha: Point = s.get("alpha", a.alpha.as_deref(), "0.5,-0.3")?;
    let squeeze: f64 = s.get("squeeze", a.squeeze.as_deref(), "0.5")?;
    let tol = s.positive("tol", a.tol.as_deref(), "1e-9")?;
    let mismatch = s.positive("mismatch", a.mismatch.as_deref(), "0.01")?;

    let mag = squeeze.abs();
    let squeezes: Vec<f64> = if mag == 0.0 { vec![0.0] } else { vec![0.0, mag, -mag] };
    let lambdas: Vec<f64> = if mag == 0.0 {
        vec![1.0]
    } else {
        vec![(-mag).exp(), 1.0, mag.exp()]
    };
    let cases: Vec<(f64, f64)> = squeezes
        .iter()
        .flat_map(|&v| lambdas.iter().map(move |&l| (v, l)))
        .collect();
    let (q, p) = quadratures(n)?;

    let rows: Vec<Vec<Cell>> = cases
        .par_iter()
        .map(|&(v, lambda)| {
            let matched = (lambda - v.exp()).abs() < 1e-12 * lambda;
            let computed = wh_squeezed(alpha.0, v, n).and_then(|psi| {
                let r = rs_report(&q, &p, &psi)?;
                Ok((r, min_uncertainty_residual(&q, &p, lambda, &psi)?))
            });
            match computed {
                Ok((r, resid)) => {
                    let ok = if matched {
                        r.slack_rs.abs() < tol && resid < tol && r.rs_ok && r.heisenberg_ok && r.anticomm_ok
                    } else {
                        resid > mismatch
                    };
                    vec![
                        Cell::Num(v),
                        Cell::Num(lambda),
                        Cell::text(if matched { "matched" } else { "mismatched" }),
                        Cell::Num(r.moments.delta_a()),
                        Cell::Num(r.moments.delta_b()),
                        Cell::Num(r.slack_rs),
                        Cell::Num(resid),
                        Cell::status(ok),
                    ]
                }
                Err(e) => {
                    row_error(&format!("v={v}"), &e);
                    let mut row = vec![Cell::Num(v), Cell::Num(lambda), Cell::text("error")];
                    row.extend(std::iter::repeat_n(Cell::Num(f64::NAN), 4));
                    row.push(Cell::status(false));
                    row
                }
            }
        })
        .collect();

    let mut report = Report::new(vec![
        "v", "lambda", "kind", "delta_q", "delta_p", "slack_rs", "residual", "status",
    ]);
    for row in rows {
        let matched = matches!(&row[2], Cell::Text(k) if k == "matched");
        if matched {
            for c in [&row[5], &row[6]] {
                if let Cell::Num(x) = c {
                    report.dev(x.abs());
                }
            }
        }
        report.require(row[7] == Cell::status(true));
        report.push(row);
    }
    Ok(report)
}
