//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p cohgeom --test acceptance`. The process exits
//! nonzero if a criterion fails, except for sub-cases listed in `KNOWN_RED`,
//! which are printed as FAIL but do not abort the workspace run.

use std::process::ExitCode;

use cohgeom::berezin::{basis_f, cayley, conjugate_pair, correspondence_report, star, BerezinSpace, RadialRule};
use cohgeom::orbits::{wh_coherent, wh_squeezed};
use cohgeom::prequant::{
    dirac_defect, dirac_residual, flow_report, symplectic_potential_residual, OrbitGrid, PotentialVariant, ScalarField,
    TestField,
};
use cohgeom::pullback::{
    analytic_tangent, kahler_verdict, numeric_tangent, pullback_form, pullback_value, squeezed_bracket, su2_prefactor,
    su2_swapped_bracket, SampleGrid, StateFamily, TangentMethod, TangentSpec, Truncation,
};
use cohgeom::sut::{
    coadjoint_action, half_plane_pullback_coefficient, moment_and_fields, poisson, Charts, OrbitPoint, Poly, SutDual,
    SutElement,
};
use cohgeom::uncertainty::{min_uncertainty_residual, quadratures, rs_report};
use cohgeom::{c64, Complex64, Result, I};
use nalgebra::DMatrix;

/// Sub-cases that cannot be met: the SU(2) squeezed vacuum does not exist
/// for half-integer spin when the squeeze is nonzero.
const KNOWN_RED: &[&str] = &["3:j=0.5,v=0.5"];

struct Outcome {
    failures: Vec<String>,
    detail: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            detail: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, label: impl Into<String>) {
        if !ok {
            self.failures.push(label.into());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.detail.push(s.into());
    }

    fn result<T>(&mut self, r: Result<T>, label: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{label}: {e}"));
                None
            }
        }
    }
}

fn one() -> Complex64 {
    c64(1.0, 0.0)
}

fn criterion_1(o: &mut Outcome) {
    let fam = StateFamily::wh(0.0);
    let grid = SampleGrid::square(2.0, 5);
    let mut max_dev: f64 = 0.0;
    for &base in &grid.bases {
        for &(u, w) in &grid.pairs {
            if let Some(r) = o.result(pullback_form(&fam, base, u, w), &format!("alpha={base}")) {
                max_dev = max_dev.max(r.abs_deviation);
            }
        }
    }
    o.check(max_dev < 1e-8, format!("max deviation {max_dev:.3e}"));
    o.note(format!("max |pullback - conj(u) w| = {max_dev:.3e} over 25 points"));
}

fn criterion_2(o: &mut Outcome) {
    let origin = c64(0.0, 0.0);
    let pairs = [
        (one(), one()),
        (one(), I),
        (I, I),
        (I, one()),
        (c64(0.3, -1.2), c64(-0.7, 0.4)),
    ];
    let mut max_dev: f64 = 0.0;
    let mut max_im_shift: f64 = 0.0;
    for &v in &[-1.0, -0.5, 0.5, 1.0] {
        let fam = StateFamily::wh(v);
        for &(u, w) in &pairs {
            let label = format!("v={v},u={u},w={w}");
            let Some(value) = o.result(pullback_value(&fam, origin, u, w, TangentMethod::Analytic), &label) else {
                continue;
            };
            max_dev = max_dev.max((value - squeezed_bracket(v, u, w)).norm());
            let flat = pullback_value(&StateFamily::wh(0.0), origin, u, w, TangentMethod::Analytic).unwrap();
            max_im_shift = max_im_shift.max((value.im - flat.im).abs());
        }
    }
    o.check(max_dev < 1e-8, format!("bracket deviation {max_dev:.3e}"));
    o.check(
        max_im_shift < 1e-8,
        format!("imaginary part moves with v by {max_im_shift:.3e}"),
    );
    o.note(format!("bracket dev {max_dev:.3e}, Im shift {max_im_shift:.3e}"));
}

fn criterion_3(o: &mut Outcome) {
    let origin = c64(0.0, 0.0);
    let mut max_dev: f64 = 0.0;
    let mut swapped_dev: f64 = 0.0;
    for &j in &[0.5, 1.0, 2.0] {
        for &v in &[0.0, 0.5] {
            let label = format!("3:j={j},v={v}");
            let fam = StateFamily::su2(j, v);
            let Some(pre) = o.result(su2_prefactor(j, v), &label) else {
                continue;
            };
            for &(u, w) in &SampleGrid::standard_pairs() {
                let Some(value) = o.result(pullback_value(&fam, origin, u, w, TangentMethod::Analytic), &label) else {
                    break;
                };
                let dev = (value / pre - squeezed_bracket(v, u, w)).norm();
                max_dev = max_dev.max(dev);
                if dev >= 1e-8 {
                    o.failures.push(format!("{label}: deviation {dev:.3e}"));
                }
                swapped_dev = swapped_dev.max((value / pre - su2_swapped_bracket(v, u, w)).norm());
            }
            if v == 0.0 {
                if let Some(verdict) = o.result(kahler_verdict(&fam, &SampleGrid::origin(), 1e-8), &label) {
                    o.check(
                        verdict.is_kahler && verdict.is_symplectic,
                        format!("{label}: verdict {verdict:?}"),
                    );
                }
            }
        }
    }
    o.note(format!(
        "max dev {max_dev:.3e}; swapped-bracket variant deviates by {swapped_dev:.3e}"
    ));
}

fn criterion_4(o: &mut Outcome) {
    let grid = SampleGrid::square(0.8, 4);
    let mut max_rel: f64 = 0.0;
    for &k in &[0.75, 1.0, 2.0] {
        let fam = StateFamily::su11(k);
        for &base in &grid.bases {
            for &(u, w) in &grid.pairs {
                if let Some(r) = o.result(pullback_form(&fam, base, u, w), &format!("k={k},alpha={base}")) {
                    max_rel = max_rel.max(r.abs_deviation / r.reference.norm());
                }
            }
        }
    }
    o.check(max_rel < 1e-6, format!("relative deviation {max_rel:.3e}"));
    o.note(format!("max relative deviation {max_rel:.3e}"));
}

fn criterion_5(o: &mut Outcome) {
    let n = 64;
    let (q, p) = quadratures(n).unwrap();
    let mut slack: f64 = 0.0;
    let mut resid: f64 = 0.0;
    let mut mismatched = f64::INFINITY;
    for &alpha in &[c64(0.0, 0.0), c64(1.0, 0.5), c64(-0.8, -0.6)] {
        let coh = wh_coherent(alpha, n).unwrap();
        slack = slack.max(rs_report(&q, &p, &coh).unwrap().slack_rs.abs());
        resid = resid.max(min_uncertainty_residual(&q, &p, 1.0, &coh).unwrap());
    }
    for &v in &[-0.5, 0.5] {
        for &alpha in &[c64(0.0, 0.0), c64(0.5, -0.3)] {
            let sq = wh_squeezed(alpha, v, n).unwrap();
            let r = rs_report(&q, &p, &sq).unwrap();
            o.check(
                r.rs_ok && r.heisenberg_ok && r.anticomm_ok,
                format!("inequalities at v={v}"),
            );
            slack = slack.max(r.slack_rs.abs());
            resid = resid.max(min_uncertainty_residual(&q, &p, f64::exp(v), &sq).unwrap());
            for lambda in [1.0, f64::exp(-v)] {
                mismatched = mismatched.min(min_uncertainty_residual(&q, &p, lambda, &sq).unwrap());
            }
        }
    }
    o.check(slack < 1e-9, format!("RS slack {slack:.3e}"));
    o.check(resid < 1e-9, format!("matched residual {resid:.3e}"));
    o.check(mismatched > 0.01, format!("mismatched residual {mismatched:.3e}"));
    o.note(format!(
        "slack {slack:.3e}, matched {resid:.3e}, smallest mismatched {mismatched:.3e}"
    ));
}

fn sut_points() -> Vec<OrbitPoint> {
    let axis = |lo: f64, hi: f64| (0..8).map(move |i| lo + (hi - lo) * i as f64 / 7.0);
    axis(0.5, 4.0)
        .flat_map(|t| axis(-2.0, 2.0).map(move |s| OrbitPoint::new(s, t)))
        .collect()
}

fn criterion_6(o: &mut Outcome) {
    let g = SutElement::new(2.0, 1.0).unwrap();
    let image = coadjoint_action(&g, &SutDual::new(1.0, 4.0));
    o.check(
        image.u == 3.0 && image.v == 1.0,
        format!("worked example gives ({}, {})", image.u, image.v),
    );
    let mut bracket: f64 = 0.0;
    let mut fields: f64 = 0.0;
    for p in sut_points() {
        if let Some(b) = o.result(poisson(&Poly::j1(), &Poly::j2(), p), "poisson") {
            bracket = bracket.max((b + 2.0 * p.t).abs());
        }
        if let Some(m) = o.result(moment_and_fields(&p), "fields") {
            fields = fields.max(m.residual);
        }
    }
    o.check(bracket < 1e-12, format!("{{J1,J2}} + 2 J1 = {bracket:.3e}"));
    o.check(fields < 1e-12, format!("field residual {fields:.3e}"));
    let charts = Charts::new(1.0, 4.0).unwrap();
    let mut chart_dev: f64 = 0.0;
    for &(a, b) in &[(0.5, -1.0), (1.0, 0.0), (2.0, 3.0), (0.8, 0.4)] {
        if let Some(c) = o.result(
            half_plane_pullback_coefficient(|x, y| charts.chi(x, y), a, b, 1e-5),
            "chi",
        ) {
            chart_dev = chart_dev.max((c - 2.0).abs());
        }
    }
    o.check(chart_dev < 1e-6, format!("chi pullback deviation {chart_dev:.3e}"));
    o.note(format!(
        "bracket {bracket:.3e}, fields {fields:.3e}, chi pullback {chart_dev:.3e}"
    ));
}

/// `|defect| / (4 hbar t |psi|)` for the `(+1, +1)` pair over a grid.
fn plus_defect_ratio(grid: &OrbitGrid, hbar: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for p in grid.points() {
        for f in TestField::standard_basis() {
            let psi = f.eval(c64(p.t.ln(), 0.0), c64(p.s, 0.0)).norm();
            if psi < 1e-12 {
                continue;
            }
            let r = dirac_defect(1.0, 1.0, &f, p, hbar).norm() / (4.0 * hbar * p.t * psi);
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    (lo, hi)
}

fn criterion_7(o: &mut Outcome) {
    let grid = OrbitGrid::new((-2.0, 2.0, 8), (0.5, 4.0, 8)).unwrap();
    let fields = TestField::standard_basis();
    let potential = symplectic_potential_residual(PotentialVariant::Log, &grid);
    o.check(potential < 1e-8, format!("d theta - omega = {potential:.3e}"));
    let flows = flow_report(&grid, &fields, 1.0, 1e-6);
    o.check(
        flows.mismatch_detected,
        format!("flow mismatch not detected: {flows:?}"),
    );
    let report = dirac_residual(&grid, &fields, 1.0);
    o.check(report.conventions.len() == 4, "four conventions");
    let (lo, hi) = plus_defect_ratio(&grid, 1.0);
    let (rlo, rhi) = plus_defect_ratio(&grid.refined(), 1.0);
    let stable = [lo, hi, rlo, rhi].iter().all(|r| (r - 1.0).abs() < 1e-12);
    o.check(stable, format!("defect ratio ranges {lo}..{hi} and {rlo}..{rhi}"));
    let conv: Vec<String> = report
        .conventions
        .iter()
        .map(|c| format!("({:+},{:+})={:.3e}", c.eps_field, c.eps_dirac, c.max_residual))
        .collect();
    o.note(format!(
        "potential {potential:.3e}; J2 flow defect e^(s tau) {:.3e} vs e^(2s tau) {:.3e}; dirac {}; (+1,+1) defect = 4 hbar t |psi|",
        flows.j2_single_rate_defect,
        flows.j2_double_rate_defect,
        conv.join(" ")
    ));
}

fn gram_dev(space: &BerezinSpace) -> Result<f64> {
    let g = space.gram()?;
    let n = space.cutoff();
    Ok((g - DMatrix::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

fn reproducing_devs(space: &BerezinSpace) -> Result<Vec<Complex64>> {
    [I, c64(0.0, 2.0), c64(1.0, 1.0)]
        .iter()
        .map(|&p| space.reproducing_value(p, 2))
        .collect()
}

fn criterion_8(o: &mut Outcome) {
    let mut gram: f64 = 0.0;
    for &h in &[0.45, 0.25] {
        if let Some(d) = o.result(
            BerezinSpace::new(h, 8).and_then(|s| gram_dev(&s)),
            &format!("gram h={h}"),
        ) {
            gram = gram.max(d);
        }
    }
    o.check(gram < 1e-8, format!("gram deviation {gram:.3e}"));
    let space = BerezinSpace::new(0.25, 8).unwrap();
    let mut repro: f64 = 0.0;
    if let Some(vals) = o.result(reproducing_devs(&space), "reproducing") {
        for (v, p) in vals.iter().zip([I, c64(0.0, 2.0), c64(1.0, 1.0)]) {
            repro = repro.max((v - basis_f(2, p, 0.25).unwrap()).norm());
        }
    }
    o.check(repro < 1e-6, format!("reproducing deviation {repro:.3e}"));
    if let Some(r) = o.result(
        correspondence_report(&conjugate_pair, c64(0.3, 1.2), &[0.2, 0.1, 0.05]),
        "star",
    ) {
        o.check(r.product_monotone, "product deviation not monotone");
        o.check(r.bracket_monotone, "bracket deviation not monotone");
        let rows: Vec<String> = r
            .rows
            .iter()
            .map(|x| format!("h={} {:.3e}/{:.3e}", x.h, x.product_dev, x.bracket_dev))
            .collect();
        o.note(format!(
            "gram {gram:.3e}, reproducing {repro:.3e}, star {} (orders {:.2}, {:.2})",
            rows.join(" "),
            r.product_order,
            r.bracket_order
        ));
    }
}

fn criterion_9(o: &mut Outcome) {
    let mut tangent: f64 = 0.0;
    let mut cases: Vec<(StateFamily, Vec<Complex64>)> = vec![
        (StateFamily::wh(0.0), SampleGrid::square(2.0, 5).bases),
        (StateFamily::su11(0.75), SampleGrid::square(0.8, 4).bases),
        (StateFamily::su11(2.0), SampleGrid::square(0.8, 4).bases),
    ];
    for &v in &[-1.0, -0.5, 0.5, 1.0] {
        cases.push((StateFamily::wh(v), vec![c64(0.0, 0.0)]));
    }
    for &j in &[0.5, 1.0, 2.0] {
        cases.push((StateFamily::su2(j, 0.0), vec![c64(0.0, 0.0)]));
    }
    for &j in &[1.0, 2.0] {
        cases.push((StateFamily::su2(j, 0.5), vec![c64(0.0, 0.0)]));
    }
    for (fam, bases) in &cases {
        for &base in bases {
            for d in [one(), I] {
                let t = TangentSpec::new(base, d);
                let a = analytic_tangent(fam, t);
                let n = numeric_tangent(fam, t, 1e-4);
                if let (Some(a), Some(n)) = (o.result(a, "analytic"), o.result(n, "numeric")) {
                    let dev = a.sub(&n).unwrap().norm();
                    tangent = tangent.max(dev / a.norm().max(1.0));
                }
            }
        }
    }
    o.check(tangent < 1e-6, format!("tangent oracle {tangent:.3e}"));

    // Pullback truncations doubled.
    let mut trunc_ratio: f64 = 0.0;
    for (fam, tol, bases) in [
        (StateFamily::wh(0.0), 1e-8, SampleGrid::square(2.0, 5).bases),
        (StateFamily::wh(1.0), 1e-8, vec![c64(0.0, 0.0)]),
        (StateFamily::su11(0.75), 1e-6, SampleGrid::square(0.8, 4).bases),
    ] {
        for base in bases {
            let n = fam.dim_at(base).unwrap();
            let doubled = fam.with_truncation(Truncation::Fixed(2 * n));
            for &(u, w) in &SampleGrid::standard_pairs() {
                let a = pullback_value(&fam, base, u, w, TangentMethod::Analytic).unwrap();
                let b = pullback_value(&doubled, base, u, w, TangentMethod::Analytic).unwrap();
                trunc_ratio = trunc_ratio.max((a - b).norm() / a.norm() / tol);
            }
        }
    }
    o.check(
        trunc_ratio < 10.0,
        format!("pullback truncation change {trunc_ratio:.2} x tol"),
    );

    // Uncertainty truncation doubled.
    let slack = |n: usize| {
        let (q, p) = quadratures(n).unwrap();
        rs_report(&q, &p, &wh_squeezed(c64(0.5, -0.3), 0.5, n).unwrap())
            .unwrap()
            .slack_rs
    };
    let unc_ratio = (slack(64) - slack(128)).abs() / 1e-9;
    o.check(
        unc_ratio < 10.0,
        format!("uncertainty truncation change {unc_ratio:.2} x tol"),
    );

    // Berezin quadrature and cutoff doubled.
    let mut quad_ratio: f64 = 0.0;
    for &h in &[0.45, 0.25] {
        let base = gram_dev(&BerezinSpace::new(h, 8).unwrap()).unwrap();
        let fine = BerezinSpace::with_quadrature(h, 8, 128, 512, RadialRule::GaussJacobi).unwrap();
        quad_ratio = quad_ratio.max((base - gram_dev(&fine).unwrap()).abs() / 1e-8);
    }
    let coarse = reproducing_devs(&BerezinSpace::new(0.25, 8).unwrap()).unwrap();
    let fine =
        reproducing_devs(&BerezinSpace::with_quadrature(0.25, 16, 128, 512, RadialRule::GaussJacobi).unwrap()).unwrap();
    for (a, b) in coarse.iter().zip(&fine) {
        quad_ratio = quad_ratio.max((a - b).norm() / 1e-6);
    }
    let p = c64(0.3, 1.2);
    for &h in &[0.2, 0.1, 0.05] {
        let z = cayley(p).unwrap().norm();
        let l = BerezinSpace::cutoff_for(h, z, 1e-16);
        let value = |l: usize| {
            let space = BerezinSpace::with_quadrature(h, l, 1, 1, RadialRule::GaussJacobi).unwrap();
            let (a, b) = conjugate_pair(&space);
            star(&a, &b, p, &space).unwrap()
        };
        quad_ratio = quad_ratio.max((value(l) - value(2 * l)).norm() / 1e-8);
    }
    o.check(
        quad_ratio < 10.0,
        format!("berezin refinement change {quad_ratio:.2} x tol"),
    );

    // Orbit grids doubled.
    let grid = OrbitGrid::new((-2.0, 2.0, 8), (0.5, 4.0, 8)).unwrap();
    let fields = TestField::standard_basis();
    let a = dirac_residual(&grid, &fields, 1.0);
    let b = dirac_residual(&grid.refined(), &fields, 1.0);
    let best_same = a.best().eps_field == b.best().eps_field && a.best().eps_dirac == b.best().eps_dirac;
    o.check(
        best_same && (a.best().max_residual - b.best().max_residual).abs() < 1e-7,
        "dirac best pair moved",
    );
    o.note(format!(
        "tangent {tangent:.3e}; changes/tol: pullback {trunc_ratio:.2}, uncertainty {unc_ratio:.2}, berezin {quad_ratio:.2}"
    ));
}

type Criterion = (&'static str, fn(&mut Outcome));

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("WH coherent Kahler embedding", criterion_1),
        ("WH squeezed pullback", criterion_2),
        ("SU(2) pullback", criterion_3),
        ("SU(1,1) disc metric", criterion_4),
        ("uncertainty saturation", criterion_5),
        ("SUT orbit", criterion_6),
        ("prequantization checker", criterion_7),
        ("Berezin quantization", criterion_8),
        ("oracle cross-checks", criterion_9),
    ];
    let mut hard_failure = false;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let mut o = Outcome::new();
        run(&mut o);
        let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
        let known = !o.failures.is_empty() && o.failures.iter().all(|f| KNOWN_RED.iter().any(|k| f.starts_with(k)));
        hard_failure |= !o.failures.is_empty() && !known;
        println!("criterion {}: {status} {name}: {}", i + 1, o.detail.join("; "));
        for f in &o.failures {
            let tag = if known { "known" } else { "failure" };
            println!("    {tag}: {f}");
        }
    }
    if hard_failure {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
