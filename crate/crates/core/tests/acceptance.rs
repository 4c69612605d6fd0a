//! Acceptance criteria 1–8, one line per criterion. Runs without the libtest
//! harness so the lines always reach stdout.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nse_symmetry::conserved::{
    catalog_entry, catalog_form, compare_with_catalog, invariant_arguments, solve_forms, verify_conserved,
    AnsatzBasis, CompareOptions, SolveOptions, VerifyMode, VerifyOptions,
};
use nse_symmetry::expr::{int, parse, rat, structurally_zero, Expr, Symbol, Var, DEFAULT_SEED};
use nse_symmetry::properties;
use nse_symmetry::solutions::{
    bouton_ansatz, classical_family, euler_number, nse_residual, rational_angle, rotated, solution_zero_test,
    stagnation_solution, time_translated, verify_isobaricity, IsobaricSystem, ProfileSet,
};
use nse_symmetry::symmetry::{apply_generator, catalog, covariance_factor, finite_scaling};
use nse_symmetry::weights::{classify, smoothness_scenario, Criticality, ScalingExponents};

type Check = Result<String, Vec<String>>;

fn outcome(failures: Vec<String>, detail: String) -> Check {
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(failures)
    }
}

fn euler_number_invariance() -> Check {
    let gens = catalog().conservation_set();
    let b0 = catalog_form(0).unwrap();
    let mut failures = Vec::new();
    let s = verify_conserved(&b0, &gens, &VerifyOptions::default());
    if s.generators.len() != 5 {
        failures.push(format!("{} generators", s.generators.len()));
    }
    for g in &s.generators {
        if !g.structural {
            failures.push(format!("{} is not structurally zero", g.generator));
        }
    }
    let p = verify_conserved(
        &b0,
        &gens,
        &VerifyOptions {
            mode: VerifyMode::Probabilistic,
            n_points: 100,
            tol: 1e-12,
            seed: DEFAULT_SEED,
        },
    );
    let max = p.generators.iter().map(|g| g.max_residual).fold(0.0, f64::max);
    if !p.verified || max >= 1e-12 {
        failures.push(format!("sampled residual {max:.3e}"));
    }
    outcome(failures, format!("structural under T X Rx Ry Rz; sampled max {max:.1e}"))
}

fn catalog_verification() -> Check {
    let gens = catalog().conservation_set();
    let opts = VerifyOptions {
        mode: VerifyMode::Probabilistic,
        n_points: 100,
        tol: 1e-9,
        seed: DEFAULT_SEED,
    };
    let mut failures = Vec::new();
    for k in [3, 5, 8] {
        let r = verify_conserved(&catalog_form(k).unwrap(), &gens, &opts);
        if !r.verified || r.generators.len() != 5 {
            failures.push(format!("B{k} fails: {:?}", r.failures().map(|(g, f)| (g, f.term.clone())).collect::<Vec<_>>()));
        }
    }
    let mut notes = Vec::new();
    for (k, count) in [(2, 10), (4, 18), (6, 10)] {
        let entry = catalog_entry(k).unwrap();
        if entry.terms.len() != count {
            failures.push(format!("B{k} transcribed with {} terms", entry.terms.len()));
        }
        let report = verify_conserved(&entry.form(), &gens, &opts);
        let failing: Vec<&str> = report.generators.iter().filter(|g| !g.passed).map(|g| g.generator.as_str()).collect();
        if report.failures().any(|(_, f)| f.witness.point.is_empty()) {
            failures.push(format!("B{k}: failure without witness"));
        }
        let r = solve_forms(k, &gens, &AnsatzBasis::default(), &SolveOptions::default()).unwrap();
        let c = compare_with_catalog(&r, &CompareOptions::default());
        let after = c.residual_after_flags.unwrap_or(f64::INFINITY);
        if r.verified_forms().is_empty() || !(after < 1e-6) {
            failures.push(format!("B{k}: {} (distance {after:.2e})", c.status));
        }
        notes.push(format!(
            "B{k} fails {{{}}}, {} flagged, distance {after:.0e}",
            failing.join(","),
            c.flagged.len()
        ));
    }
    outcome(failures, format!("B3 B5 B8 verified; {}", notes.join("; ")))
}

fn emptiness() -> Check {
    let gens = catalog().conservation_set();
    let mut failures = Vec::new();
    let mut gaps = Vec::new();
    for k in [1, 7] {
        let r = solve_forms(k, &gens, &AnsatzBasis::default(), &SolveOptions::default()).unwrap();
        if r.nullspace_dim != 0 || !(r.gap >= 1e3) {
            failures.push(format!("k={k}: dimension {}, gap {:.2e}", r.nullspace_dim, r.gap));
        }
        gaps.push(format!("k={k} gap {:.1e}", r.gap));
    }
    outcome(failures, gaps.join(", "))
}

fn criticality_table() -> Check {
    use Criticality::*;
    let mut failures = Vec::new();
    let verdict = |ax, at| classify(&ScalingExponents::ints(ax, at)).map(|c| c.verdict);
    for (ax, at, want) in [(1, 2, Supercritical), (2, 5, Critical), (0, 1, Subcritical), (-20, -40, Subcritical), (3, 1, Supercritical)] {
        match verdict(ax, at) {
            Ok(v) if v == want => {}
            other => failures.push(format!("({ax},{at}): {other:?}, expected {want}")),
        }
    }
    let sc = |ax, at| smoothness_scenario(&ScalingExponents::ints(ax, at)).unwrap();
    if sc(1, 2).smooth_at_zero_possible {
        failures.push("(1,2) smooth at zero".into());
    }
    let s = sc(-20, -40);
    if s.scenario != Some(4) || !s.blowup_excluded {
        failures.push(format!("(-20,-40): scenario {:?}, blow-up excluded {}", s.scenario, s.blowup_excluded));
    }
    let s = sc(3, 1);
    if s.scenario != Some(3) || !s.smooth_at_zero_possible {
        failures.push(format!("(3,1): scenario {:?}, smooth {}", s.scenario, s.smooth_at_zero_possible));
    }
    outcome(failures, "5 exponent pairs, exact".into())
}

fn self_similar() -> Check {
    let pairs = [
        ScalingExponents::ints(1, 2),
        ScalingExponents::ints(2, 5),
        ScalingExponents::ints(3, 1),
        ScalingExponents::new(rat(3, 2), rat(-1, 3)),
        ScalingExponents::ints(-2, -1),
    ];
    let mut failures = Vec::new();
    for s in &pairs {
        let f = bouton_ansatz(s, &ProfileSet::opaque(3)).unwrap();
        let r = verify_isobaricity(&f, s, IsobaricSystem::Combined, false);
        if !r.all_structural {
            failures.push(format!("({},{}) not structural", s.alpha_x, s.alpha_t));
        }
        let phi = finite_scaling(&s.alpha_x, &s.alpha_t, &Symbol::k());
        let vel = s.velocity_exponent();
        let [u, v, w, p] = f.fields();
        for (q, want) in [(u, vel.clone()), (v, vel.clone()), (w, vel.clone()), (p, &vel * int(2))] {
            let got = covariance_factor(&q, &phi).ok().and_then(|c| c.exponent());
            if got.as_ref() != Some(&want) {
                failures.push(format!("({},{}): exponent {got:?}, expected {want}", s.alpha_x, s.alpha_t));
            }
        }
    }
    let c = classical_family(&ProfileSet::opaque(2), &Expr::sym(Symbol::tau())).unwrap();
    let r = verify_isobaricity(&c, &ScalingExponents::classical(), IsobaricSystem::Separate, true);
    if !r.all_structural {
        failures.push("classical family not structural".into());
    }
    outcome(failures, "5 exponent pairs and the classical family, structural".into())
}

fn exact_solution() -> Check {
    let s = stagnation_solution();
    let mut failures = Vec::new();
    if !nse_residual(&s).report(&solution_zero_test()).all_structural {
        failures.push("stagnation residual not structural".into());
    }
    let e = euler_number(&s).unwrap();
    let want = parse("-y^2/(x^2+y^2)").unwrap();
    if !structurally_zero(&(e.expr.clone() - want)) {
        failures.push(format!("Euler number {}", e.value));
    }
    if !structurally_zero(&e.expr.diff(&Var::T.symbol())) {
        failures.push("Euler number depends on t".into());
    }
    let test = solution_zero_test().tol(1e-10);
    for shift in [1, 2, 5] {
        if !nse_residual(&time_translated(&s, &Expr::from(shift))).report(&test).all_zero {
            failures.push(format!("shift {shift}"));
        }
    }
    for m in [rat(1, 2), rat(-3, 7), rat(5, 3)] {
        let (c, sn) = rational_angle(m.clone());
        if !nse_residual(&rotated(&s, Var::Z, &c, &sn)).report(&test).all_zero {
            failures.push(format!("rotation tan(θ/2) = {m}"));
        }
    }
    outcome(failures, "residuals zero; E = -y^2/(x^2+y^2), t-independent".into())
}

fn invariant_args() -> Check {
    let r = invariant_arguments(&SolveOptions::default());
    let mut failures: Vec<String> = r
        .expected
        .iter()
        .filter(|e| !e.found || !e.annihilated)
        .map(|e| format!("{}: found {}, annihilated {}", e.expr, e.found, e.annihilated))
        .collect();
    for text in nse_symmetry::conserved::EXPECTED_INVARIANTS {
        let e = parse(text).unwrap();
        for g in catalog().scaling_pair() {
            if !structurally_zero(&apply_generator(&g, &e)) {
                failures.push(format!("{} does not annihilate {text} structurally", g.name()));
            }
        }
    }
    outcome(failures, format!("7 of 7, generating set {}", r.generating_set.len()))
}

fn property_suites() -> Check {
    let seed = DEFAULT_SEED;
    let runs = [
        properties::d_squared(seed, 200),
        properties::cartan_vs_flow(seed, 50),
        properties::leibniz(seed, 100),
        properties::weight_additivity(seed, 100),
        properties::weight_covariance_bridge(seed, 100),
        properties::derivative_vs_fd(seed, 100),
    ];
    let failures: Vec<String> = runs
        .iter()
        .filter(|o| !o.ok)
        .flat_map(|o| o.failures.iter().map(move |f| format!("{}: {f}", o.name)))
        .collect();
    let summary: Vec<String> = runs.iter().map(|o| format!("{} {}/{}", o.name, o.passed, o.cases)).collect();
    outcome(failures, summary.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, Duration, fn() -> Check); 8] = [
        ("AC1 Euler-number invariance", Duration::from_secs(1), euler_number_invariance),
        ("AC2 catalog verification", Duration::from_secs(300), catalog_verification),
        ("AC3 emptiness at k = 1, 7", Duration::from_secs(120), emptiness),
        ("AC4 criticality table", Duration::from_secs(1), criticality_table),
        ("AC5 self-similar machinery", Duration::from_secs(10), self_similar),
        ("AC6 exact-solution oracle", Duration::from_secs(5), exact_solution),
        ("AC7 invariant arguments", Duration::from_secs(30), invariant_args),
        ("AC8 property suites", Duration::from_secs(120), property_suites),
    ];
    let mut all = true;
    for (name, budget, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        match (&result, in_time) {
            (Ok(detail), true) => println!("PASS {name} ({:.2}s): {detail}", elapsed.as_secs_f64()),
            (Ok(detail), false) => {
                all = false;
                println!("FAIL {name} ({:.2}s, budget {}s): {detail}", elapsed.as_secs_f64(), budget.as_secs());
            }
            (Err(failures), _) => {
                all = false;
                println!("FAIL {name} ({:.2}s): {}", elapsed.as_secs_f64(), failures.join("; "));
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
