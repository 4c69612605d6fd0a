//! Built-in reproduction suites: one row per checked result, each with a
//! pass flag and the first failures.

use std::fmt::Write as _;

use nse_symmetry::conserved::{
    catalog_entry, catalog_form, compare_with_catalog, invariant_arguments, solve_forms, verify_conserved,
    AnsatzBasis, CompareOptions, SolveOptions, VerifyMode, VerifyOptions,
};
use nse_symmetry::expr::{int, parse, rat, Expr, Symbol, Var};
use nse_symmetry::properties;
use nse_symmetry::solutions::{
    bouton_ansatz, classical_family, euler_number, nse_residual, rational_angle, rotated, solution_zero_test,
    stagnation_solution, time_translated, verify_isobaricity, IsobaricSystem, ProfileSet,
};
use nse_symmetry::symmetry::{catalog, covariance_factor_seeded, finite_scaling};
use nse_symmetry::weights::{classify, smoothness_scenario, Criticality, ScalingExponents};
use serde_json::{json, Value};

use crate::commands::Report;
use crate::{Context, Suite};

struct Row {
    id: String,
    passed: bool,
    detail: String,
    failures: Vec<String>,
}

impl Row {
    fn new(id: &str, failures: Vec<String>, detail: String) -> Row {
        Row {
            id: id.to_string(),
            passed: failures.is_empty(),
            detail,
            failures,
        }
    }
}

pub fn run(suite: Suite, ctx: &Context) -> Report {
    let mut rows = Vec::new();
    if matches!(suite, Suite::Table | Suite::All) {
        rows.extend(table_rows(ctx.seed));
    }
    if matches!(suite, Suite::Properties | Suite::All) {
        rows.extend(property_rows(ctx.seed));
    }
    let passed = rows.iter().all(|r| r.passed);
    let mut text = String::new();
    for r in &rows {
        writeln!(text, "{}  {:<28} {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail).unwrap();
        for f in r.failures.iter().take(3) {
            writeln!(text, "      {f}").unwrap();
        }
    }
    writeln!(
        text,
        "{} of {} rows passed",
        rows.iter().filter(|r| r.passed).count(),
        rows.len()
    )
    .unwrap();
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| json!({"id": r.id, "passed": r.passed, "detail": r.detail, "failures": r.failures}))
        .collect();
    Report::new(json!({"seed": ctx.seed, "passed": passed, "rows": json_rows}), text, passed)
}

fn property_rows(seed: u64) -> Vec<Row> {
    properties::run_all(seed)
        .into_iter()
        .map(|o| {
            let mut r = Row::new(&format!("property/{}", o.name), o.failures, format!("{}/{} cases", o.passed, o.cases));
            r.passed = o.ok;
            r
        })
        .collect()
}

fn table_rows(seed: u64) -> Vec<Row> {
    vec![
        invariant_row(seed),
        euler_row(seed),
        criticality_row(),
        ansatz_row(seed),
        exact_solution_row(seed),
        catalog_row(seed),
        empty_degrees_row(seed),
    ]
}

fn invariant_row(seed: u64) -> Row {
    let r = invariant_arguments(&SolveOptions {
        seed,
        ..SolveOptions::default()
    });
    let failures = r
        .expected
        .iter()
        .filter(|e| !(e.found && e.annihilated))
        .map(|e| format!("{}: found {}, annihilated {}", e.expr, e.found, e.annihilated))
        .collect();
    Row::new(
        "invariant-arguments",
        failures,
        format!("{} of 7 invariants, generating set of {}", r.expected.iter().filter(|e| e.found).count(), r.generating_set.len()),
    )
}

fn euler_row(seed: u64) -> Row {
    let gens = catalog().conservation_set();
    let form = catalog_form(0).expect("catalog zero-form");
    let s = verify_conserved(
        &form,
        &gens,
        &VerifyOptions {
            seed,
            ..VerifyOptions::default()
        },
    );
    let p = verify_conserved(
        &form,
        &gens,
        &VerifyOptions {
            mode: VerifyMode::Probabilistic,
            n_points: 100,
            tol: 1e-12,
            seed,
        },
    );
    let max = p.generators.iter().map(|g| g.max_residual).fold(0.0, f64::max);
    let mut failures = Vec::new();
    for g in &s.generators {
        if !g.structural {
            failures.push(format!("{} not structural", g.generator));
        }
    }
    if !p.verified || max >= 1e-12 {
        failures.push(format!("sampled residual {max:.3e}"));
    }
    Row::new("euler-number-invariance", failures, format!("5 generators structural, sampled max {max:.1e}"))
}

/// Exponents, verdict, then expected scenario, smooth-at-zero and blow-up
/// flags where the table states them.
type Case = (i64, i64, Criticality, Option<u8>, Option<bool>, Option<bool>);

fn criticality_row() -> Row {
    use Criticality::*;
    let cases: [Case; 5] = [
        (1, 2, Supercritical, None, Some(false), None),
        (2, 5, Critical, None, None, None),
        (0, 1, Subcritical, None, None, None),
        (-20, -40, Subcritical, Some(4), None, Some(true)),
        (3, 1, Supercritical, Some(3), Some(true), None),
    ];
    let mut failures = Vec::new();
    for (ax, at, verdict, scenario, smooth, excluded) in cases {
        let s = ScalingExponents::ints(ax, at);
        let Ok(c) = classify(&s) else {
            failures.push(format!("({ax},{at}) rejected"));
            continue;
        };
        if c.verdict != verdict {
            failures.push(format!("({ax},{at}): {}, expected {verdict}", c.verdict));
        }
        if scenario.is_none() && smooth.is_none() && excluded.is_none() {
            continue;
        }
        let Ok(sc) = smoothness_scenario(&s) else {
            failures.push(format!("({ax},{at}) has no scenario"));
            continue;
        };
        let ok = scenario.is_none_or(|n| sc.scenario == Some(n))
            && smooth.is_none_or(|b| sc.smooth_at_zero_possible == b)
            && excluded.is_none_or(|b| sc.blowup_excluded == b);
        if !ok {
            failures.push(format!(
                "({ax},{at}): scenario {:?} smooth {} excluded {}",
                sc.scenario, sc.smooth_at_zero_possible, sc.blowup_excluded
            ));
        }
    }
    Row::new("criticality-table", failures, "5 exponent pairs".into())
}

fn ansatz_row(seed: u64) -> Row {
    let pairs = [
        ScalingExponents::ints(1, 2),
        ScalingExponents::ints(2, 5),
        ScalingExponents::ints(3, 1),
        ScalingExponents::new(rat(3, 2), rat(-1, 3)),
        ScalingExponents::ints(-2, -1),
    ];
    let mut failures = Vec::new();
    for s in &pairs {
        let label = format!("({},{})", s.alpha_x, s.alpha_t);
        let f = match bouton_ansatz(s, &ProfileSet::opaque(3)) {
            Ok(f) => f,
            Err(e) => {
                failures.push(format!("{label}: {e}"));
                continue;
            }
        };
        let r = verify_isobaricity(&f, s, IsobaricSystem::Combined, false);
        if !r.all_structural {
            failures.push(format!("{label}: homogeneity residual not structurally zero"));
        }
        let phi = finite_scaling(&s.alpha_x, &s.alpha_t, &Symbol::k());
        let vel = s.velocity_exponent();
        let [u, v, w, p] = f.fields();
        for (name, q, expected) in [("u", u, vel.clone()), ("v", v, vel.clone()), ("w", w, vel.clone()), ("p", p, &vel * int(2))] {
            let got = covariance_factor_seeded(&q, &phi, seed).ok().and_then(|c| c.exponent());
            if got.as_ref() != Some(&expected) {
                failures.push(format!("{label}: {name} exponent {got:?}, expected {expected}"));
            }
        }
    }
    let c = classical_family(&ProfileSet::opaque(2), &Expr::sym(Symbol::tau())).expect("arity 2");
    let r = verify_isobaricity(&c, &ScalingExponents::classical(), IsobaricSystem::Separate, true);
    if !r.all_structural {
        failures.push("classical family: homogeneity residual not structurally zero".into());
    }
    Row::new("self-similar-ansatz", failures, "5 exponent pairs and the classical family".into())
}

fn exact_solution_row(seed: u64) -> Row {
    let s = stagnation_solution();
    let mut failures = Vec::new();
    let r = nse_residual(&s).report(&solution_zero_test());
    if !r.all_structural {
        failures.push("stagnation residual not structurally zero".into());
    }
    match euler_number(&s) {
        Ok(e) => {
            let expected = parse("-y^2/(x^2+y^2)").expect("literal");
            if !solution_zero_test().check(&(e.expr.clone() - expected)).is_zero() || !e.time_independent {
                failures.push(format!("Euler number {} (time independent {})", e.value, e.time_independent));
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    let test = solution_zero_test().seed(seed).tol(1e-10);
    for shift in [1, 3] {
        if !nse_residual(&time_translated(&s, &Expr::from(shift))).report(&test).all_zero {
            failures.push(format!("time shift {shift} breaks the solution"));
        }
    }
    for m in [rat(1, 2), rat(-3, 7)] {
        let (c, sn) = rational_angle(m.clone());
        if !nse_residual(&rotated(&s, Var::Z, &c, &sn)).report(&test).all_zero {
            failures.push(format!("rotation about z with tan(θ/2) = {m} breaks the solution"));
        }
    }
    Row::new("exact-solution", failures, "stagnation flow, Euler number, shifted and rotated copies".into())
}

fn catalog_row(seed: u64) -> Row {
    let gens = catalog().conservation_set();
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    let probabilistic = VerifyOptions {
        mode: VerifyMode::Probabilistic,
        n_points: 100,
        tol: 1e-9,
        seed,
    };
    for k in [3, 5, 8] {
        if !verify_conserved(&catalog_form(k).expect("catalog"), &gens, &probabilistic).verified {
            failures.push(format!("B{k} fails verification"));
        }
    }
    let solve_opts = SolveOptions {
        seed,
        ..SolveOptions::default()
    };
    for (k, count) in [(2, 10), (4, 18), (6, 10)] {
        let entry = catalog_entry(k).expect("catalog");
        if entry.terms.len() != count {
            failures.push(format!("B{k} lists {} terms, expected {count}", entry.terms.len()));
        }
        let r = match solve_forms(k, &gens, &AnsatzBasis::default(), &solve_opts) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("B{k}: {e}"));
                continue;
            }
        };
        let c = compare_with_catalog(
            &r,
            &CompareOptions {
                seed,
                ..CompareOptions::default()
            },
        );
        let after = c.residual_after_flags.unwrap_or(f64::INFINITY);
        if !(c.in_span_after_flags && after < 1e-6) {
            failures.push(format!("B{k}: {} (residual {after:.2e})", c.status));
        }
        notes.push(format!("B{k} {} flagged", c.flagged.len()));
    }
    Row::new("conserved-catalog", failures, format!("B3 B5 B8 verified; {}", notes.join(", ")))
}

fn empty_degrees_row(seed: u64) -> Row {
    let gens = catalog().conservation_set();
    let opts = SolveOptions {
        seed,
        ..SolveOptions::default()
    };
    let mut failures = Vec::new();
    let mut gaps = Vec::new();
    for k in [1, 7] {
        match solve_forms(k, &gens, &AnsatzBasis::default(), &opts) {
            Ok(r) => {
                if r.nullspace_dim != 0 || r.gap < 1e3 {
                    failures.push(format!("k={k}: dimension {}, gap {:.2e}", r.nullspace_dim, r.gap));
                }
                gaps.push(format!("k={k} gap {:.1e}", r.gap));
            }
            Err(e) => failures.push(format!("k={k}: {e}")),
        }
    }
    Row::new("empty-degrees", failures, gaps.join(", "))
}
