pub mod berezin;
pub mod pullback;
pub mod sut;
pub mod uncertainty;

use crate::report::{Cell, Report};
use crate::settings::Settings;
use crate::{BerezinArgs, BerezinCommand, CliError, PullbackArgs, SutArgs, SutCommand, UncertaintyArgs};

/// Row failure that the report records instead of aborting.
pub(crate) fn row_error(context: &str, e: &dyn std::fmt::Display) {
    eprintln!("{context}: {e}");
}

type Suite = fn(&mut Settings) -> Result<Report, CliError>;
type Step = (&'static str, Vec<(&'static str, &'static str)>, Suite);

fn plan() -> Vec<Step> {
    let pullback: Suite = |s| pullback::run(s, &PullbackArgs::default());
    let uncertainty: Suite = |s| uncertainty::run(s, &UncertaintyArgs::default());
    let sut: [(&str, Suite); 4] = [
        ("sut kks", |s| sut::run(s, &SutCommand::Kks(SutArgs::default()))),
        ("sut charts", |s| sut::run(s, &SutCommand::Charts(SutArgs::default()))),
        ("sut flow", |s| sut::run(s, &SutCommand::Flow(SutArgs::default()))),
        ("sut dirac", |s| sut::run(s, &SutCommand::Dirac(SutArgs::default()))),
    ];
    let gram: Suite = |s| berezin::run(s, &BerezinCommand::Gram(BerezinArgs::default()));
    let kernel: Suite = |s| berezin::run(s, &BerezinCommand::Kernel(BerezinArgs::default()));
    let symbol: Suite = |s| berezin::run(s, &BerezinCommand::Symbol(BerezinArgs::default()));
    let star: Suite = |s| berezin::run(s, &BerezinCommand::Star(BerezinArgs::default()));

    let mut plan = vec![("pullback", vec![("family", "wh")], pullback)];
    for v in ["-1", "-0.5", "0.5", "1"] {
        plan.push(("pullback", vec![("family", "wh"), ("squeeze", v)], pullback));
    }
    for j in ["0.5", "1", "2"] {
        for v in ["0", "0.5"] {
            plan.push((
                "pullback",
                vec![("family", "su2"), ("rep", j), ("squeeze", v)],
                pullback,
            ));
        }
    }
    for k in ["0.75", "1", "2"] {
        plan.push((
            "pullback",
            vec![("family", "su11"), ("rep", k), ("tol", "1e-6")],
            pullback,
        ));
    }
    plan.push(("uncertainty", vec![], uncertainty));
    plan.push(("uncertainty", vec![("alpha", "0,0")], uncertainty));
    for (name, s) in sut {
        plan.push((name, vec![], s));
    }
    for h in ["0.45", "0.25"] {
        plan.push(("berezin gram", vec![("h", h), ("cutoff", "8")], gram));
    }
    plan.push(("berezin kernel", vec![], kernel));
    for op in ["identity", "mult-z", "mult-zbar", "projector"] {
        plan.push(("berezin symbol", vec![("op", op)], symbol));
    }
    plan.push(("berezin star", vec![], star));
    plan
}

pub fn report_all() -> Result<Report, CliError> {
    let mut out = Report::new(vec!["suite", "params", "rows", "max_dev", "status"]);
    for (name, pairs, suite) in plan() {
        let mut settings = Settings::from_pairs(&pairs);
        let r = suite(&mut settings)?;
        let params: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.require(r.pass);
        out.dev(r.max_dev);
        out.push(vec![
            Cell::text(name),
            Cell::text(params.join(" ")),
            Cell::Int(r.rows.len() as i64),
            Cell::Num(r.max_dev),
            Cell::status(r.pass),
        ]);
    }
    Ok(out)
}
