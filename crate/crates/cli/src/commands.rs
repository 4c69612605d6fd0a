use std::fmt::Write as _;
use std::path::Path;

use nse_symmetry::conserved::{
    catalog_form, compare_with_catalog, invariant_arguments, solve_forms, tuple_label, verify_conserved, AnsatzBasis,
    CompareOptions, SolveOptions, VerifyMode, VerifyOptions,
};
use nse_symmetry::expr::{parse, Expr, SampleDomain, Symbol, ZeroTest};
use nse_symmetry::exterior::{parse_form, KForm};
use nse_symmetry::expr::ParseOptions;
use nse_symmetry::solutions::{
    bouton_ansatz, classical_family, euler_number, nse_residual, solution_zero_test, stagnation_solution,
    verify_isobaricity, IsobaricSystem, ProfileSet, SolutionFields,
};
use nse_symmetry::symmetry::{
    apply_generator, catalog, covariance_factor_seeded, finite_scaling, parse_transform,
    GENERATOR_NAMES,
};
use nse_symmetry::weights::{classify, parse_rational, smoothness_scenario, weight_of, ScalingExponents, WeightError};
use serde_json::{json, Value};

use crate::{Builtin, Command, Context, Exponents, Family, Mode, SolutionSource, System};

pub struct Report {
    pub json: Value,
    pub text: String,
    pub passed: bool,
}

impl Report {
    pub fn new(json: Value, text: String, passed: bool) -> Report {
        Report { json, text, passed }
    }
}

type Outcome = Result<Report, String>;

pub fn run(cmd: Command, ctx: &Context) -> Outcome {
    match cmd {
        Command::Weights { expr, exps } => weights(&expr, &exps),
        Command::Classify { exps } => criticality(&exps),
        Command::Scenario { exps } => scenario(&exps),
        Command::Apply {
            generator,
            transform,
            expr,
        } => apply(generator.as_deref(), transform.as_deref(), &expr, ctx),
        Command::Lie { generator, form, file } => lie(&generator, form, file.as_deref()),
        Command::VerifyForm {
            k,
            form,
            generators,
            mode,
            tol,
            samples,
        } => verify_form(k, form.as_deref(), &generators, mode, tol, samples, ctx),
        Command::SolveForms {
            k,
            degree,
            samples,
            tol,
            generators,
            no_compare,
        } => solve(k, degree, &samples, tol, &generators, !no_compare, ctx),
        Command::Residual { source, tol, samples } => residual(&source, tol, samples, ctx),
        Command::Euler { source } => euler(&source),
        Command::Ansatz { exps, family, system } => ansatz(&exps, family, system, ctx),
        Command::InvariantArgs { samples } => invariants(&samples, ctx),
        Command::Reproduce { suite } => Ok(crate::reproduce::run(suite, ctx)),
    }
}

fn parse_expr(text: &str) -> Result<Expr, String> {
    parse(text).map_err(|e| format!("cannot parse `{text}`: {e}"))
}

fn exponents(e: &Exponents) -> Result<Option<ScalingExponents>, String> {
    match (&e.ax, &e.at) {
        (None, None) => Ok(None),
        (Some(ax), Some(at)) => {
            let ax = parse_rational(ax).map_err(|m| format!("--ax: {m}"))?;
            let at = parse_rational(at).map_err(|m| format!("--at: {m}"))?;
            Ok(Some(ScalingExponents::new(ax, at)))
        }
        _ => Err("--ax and --at must be given together".into()),
    }
}

fn required_exponents(e: &Exponents) -> Result<ScalingExponents, String> {
    exponents(e)?.ok_or_else(|| "--ax and --at are required".to_string())
}

fn generators(names: &[String]) -> Result<Vec<nse_symmetry::exterior::VectorField>, String> {
    let names: Vec<&str> = names.iter().map(String::as_str).collect();
    catalog()
        .select(&names)
        .map_err(|e| format!("{e}; known generators: {}", GENERATOR_NAMES.join(", ")))
}

fn samples_budget(text: &str) -> Result<Option<usize>, String> {
    if text == "auto" {
        return Ok(None);
    }
    text.parse()
        .map(Some)
        .map_err(|_| format!("--samples expects a count or \"auto\", got {text:?}"))
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn weights(text: &str, exps: &Exponents) -> Outcome {
    let e = parse_expr(text)?;
    let s = exponents(exps)?;
    let (weight, reason) = match weight_of(&e) {
        Ok(Some(w)) => (Some(w), None),
        Ok(None) => (None, Some("terms carry different weights".to_string())),
        Err(err @ WeightError::NonIsobaricArgument { .. }) => (None, Some(err.to_string())),
        Err(err) => return Err(err.to_string()),
    };
    let exponent = match (&weight, &s) {
        (Some(w), Some(s)) => Some(w.evaluate(s).to_string()),
        _ => None,
    };
    let mut text = String::new();
    match (&weight, &reason) {
        (Some(w), _) => {
            writeln!(text, "weight {w}").unwrap();
            if let Some(x) = &exponent {
                writeln!(text, "scaling exponent {x}").unwrap();
            }
        }
        (None, r) => writeln!(text, "not isobaric: {}", r.as_deref().unwrap_or("")).unwrap(),
    }
    let json = json!({
        "expr": e.to_string(),
        "isobaric": weight.is_some(),
        "weight": weight,
        "exponent": exponent,
        "reason": reason,
    });
    Ok(Report::new(json, text, weight.is_some()))
}

fn criticality(exps: &Exponents) -> Outcome {
    let s = required_exponents(exps)?;
    let c = classify(&s).map_err(|e| e.to_string())?;
    let sc = smoothness_scenario(&s).ok();
    let json = json!({
        "alpha_x": s.alpha_x.to_string(),
        "alpha_t": s.alpha_t.to_string(),
        "verdict": c.verdict,
        "energy_exponent": c.energy_exponent.to_string(),
        "velocity_exponent": c.velocity_exponent.to_string(),
        "scenario": sc.as_ref().and_then(|x| x.scenario),
        "blowup_excluded": sc.as_ref().map(|x| x.blowup_excluded),
        "smooth_at_zero_possible": sc.as_ref().map(|x| x.smooth_at_zero_possible),
        "severity_verdict": c.severity_verdict,
        "opposite_sign_verdict": c.opposite_sign_verdict,
        "method": c.method,
    });
    let mut text = String::new();
    writeln!(text, "({}, {}): {}", s.alpha_x, s.alpha_t, c.verdict).unwrap();
    writeln!(text, "energy exponent {}", c.energy_exponent).unwrap();
    writeln!(text, "velocity exponent {}", c.velocity_exponent).unwrap();
    writeln!(text, "severity comparison {}", c.severity_verdict).unwrap();
    if let Some(v) = c.opposite_sign_verdict {
        writeln!(text, "opposite-sign comparison {v}").unwrap();
    }
    match &sc {
        Some(x) => {
            match x.scenario {
                Some(n) => writeln!(text, "scenario {n}").unwrap(),
                None => writeln!(text, "scenario none (mixed signs)").unwrap(),
            }
            writeln!(text, "blow-up excluded {}", x.blowup_excluded).unwrap();
        }
        None => writeln!(text, "scenario not applicable").unwrap(),
    }
    Ok(Report::new(json, text, true))
}

fn scenario(exps: &Exponents) -> Outcome {
    let s = required_exponents(exps)?;
    let sc = smoothness_scenario(&s).map_err(|e| e.to_string())?;
    let mut json = serde_json::to_value(&sc).expect("serializable");
    json["alpha_x"] = json!(s.alpha_x.to_string());
    json["alpha_t"] = json!(s.alpha_t.to_string());
    let mut text = String::new();
    match sc.scenario {
        Some(n) => writeln!(text, "scenario {n} ({})", sc.verdict).unwrap(),
        None => writeln!(text, "no scenario: exponents of mixed sign ({})", sc.verdict).unwrap(),
    }
    writeln!(text, "smooth at t = 0 possible {}", sc.smooth_at_zero_possible).unwrap();
    writeln!(text, "blow-up excluded {}", sc.blowup_excluded).unwrap();
    writeln!(text, "smooth form t^({}) x^({})", sc.time_exponent, sc.space_exponent).unwrap();
    Ok(Report::new(json, text, true))
}

fn zero_test(ctx: &Context) -> ZeroTest {
    ZeroTest::new().seed(ctx.seed).domain(SampleDomain::Positive)
}

fn apply(generator: Option<&str>, transform: Option<&str>, text: &str, ctx: &Context) -> Outcome {
    let e = parse_expr(text)?;
    if let Some(name) = generator {
        let g = generators(&[name.to_string()])?.remove(0);
        let r = apply_generator(&g, &e);
        let verdict = zero_test(ctx).check(&r);
        let json = json!({
            "generator": g.name(),
            "expr": e.to_string(),
            "result": r.to_string(),
            "annihilated": verdict.is_zero(),
            "structural": verdict.is_structural(),
        });
        let text = format!("{}({}) = {}\n", g.name(), e, r);
        return Ok(Report::new(json, text, true));
    }
    let spec = transform.expect("clap requires one of --generator, --transform");
    let phi = parse_transform(spec).map_err(|e| e.to_string())?;
    let image = phi.apply(&e);
    let cov = covariance_factor_seeded(&e, &phi, ctx.seed).ok();
    let mut text = format!("{} maps {} to {}\n", phi.name(), e, image);
    if let Some(c) = &cov {
        match c.exponent() {
            Some(x) => writeln!(text, "covariant, factor exponent {x}").unwrap(),
            None => writeln!(text, "not covariant").unwrap(),
        }
    }
    let json = json!({
        "transform": phi.name(),
        "expr": e.to_string(),
        "image": image.to_string(),
        "covariance": cov,
    });
    Ok(Report::new(json, text, true))
}

fn read_form(text: &str) -> Result<KForm, String> {
    parse_form(text.trim(), &ParseOptions::default()).map_err(|e| format!("cannot parse form: {e}"))
}

fn lie(name: &str, form: Option<String>, file: Option<&Path>) -> Outcome {
    let g = generators(&[name.to_string()])?.remove(0);
    let text = match (form, file) {
        (Some(t), _) => t,
        (None, Some(p)) => read(p)?,
        (None, None) => unreachable!("clap requires --form or --file"),
    };
    let w = read_form(&text)?;
    let l = w.lie(&g);
    let terms: Vec<Value> = l
        .terms()
        .map(|(m, c)| json!({"tuple": tuple_label(m), "coefficient": c.to_string()}))
        .collect();
    let json = json!({
        "generator": g.name(),
        "form": w.to_string(),
        "degree": w.degree(),
        "lie": l.to_string(),
        "terms": terms,
    });
    Ok(Report::new(json, format!("L_{} = {}\n", g.name(), l), true))
}

fn verify_form(
    k: Option<usize>,
    path: Option<&Path>,
    names: &[String],
    mode: Mode,
    tol: f64,
    samples: usize,
    ctx: &Context,
) -> Outcome {
    let gens = generators(names)?;
    let (form, source) = match path {
        Some(p) => {
            let w = read_form(&read(p)?)?;
            if let Some(k) = k.filter(|k| *k != w.degree()) {
                return Err(format!("--k {k} but the form in {} has degree {}", p.display(), w.degree()));
            }
            (w, p.display().to_string())
        }
        None => {
            let k = k.ok_or("--k or --form is required")?;
            (catalog_form(k).map_err(|e| e.to_string())?, "catalog".to_string())
        }
    };
    let opts = VerifyOptions {
        mode: match mode {
            Mode::Structural => VerifyMode::Structural,
            Mode::Probabilistic => VerifyMode::Probabilistic,
        },
        n_points: samples,
        tol,
        seed: ctx.seed,
    };
    let r = verify_conserved(&form, &gens, &opts);
    let mut text = String::new();
    writeln!(text, "{}-form from {source}, {} terms", r.degree, r.terms).unwrap();
    for g in &r.generators {
        let how = if g.structural {
            "structural".to_string()
        } else {
            format!("max residual {:.3e}", g.max_residual)
        };
        writeln!(text, "  {:<3} {}  {how}", g.generator, if g.passed { "pass" } else { "FAIL" }).unwrap();
        for f in &g.failures {
            writeln!(text, "      {} : {} ; witness value {:.6e} at {:?}", f.term, f.coefficient, f.witness.value, f.witness.point)
                .unwrap();
        }
    }
    writeln!(text, "verified {}", r.verified).unwrap();
    let json = json!({
        "k": r.degree,
        "source": source,
        "verified": r.verified,
        "generators": r.generators.len(),
        "structural": r.all_structural(),
        "terms": r.terms,
        "checks": r.generators,
    });
    Ok(Report::new(json, text, r.verified))
}

#[allow(clippy::too_many_arguments)]
fn solve(k: usize, degree: u32, samples: &str, tol: f64, names: &[String], compare: bool, ctx: &Context) -> Outcome {
    let gens = generators(names)?;
    let basis = AnsatzBasis::dependent(degree, &[1]);
    let opts = SolveOptions {
        n_samples: samples_budget(samples)?,
        svd_tol: tol,
        seed: ctx.seed,
        verify: VerifyOptions {
            seed: ctx.seed,
            ..VerifyOptions::default()
        },
        ..SolveOptions::default()
    };
    let r = solve_forms(k, &gens, &basis, &opts).map_err(|e| e.to_string())?;
    let cmp = compare.then(|| {
        compare_with_catalog(
            &r,
            &CompareOptions {
                seed: ctx.seed,
                ..CompareOptions::default()
            },
        )
    });
    let mut text = String::new();
    writeln!(text, "k = {k}: {} unknowns, {} rows, basis {}", r.unknowns, r.rows, r.basis).unwrap();
    writeln!(text, "nullspace dimension {}, gap {:.3e}", r.nullspace_dim, r.gap).unwrap();
    for (i, f) in r.forms.iter().enumerate() {
        writeln!(
            text,
            "form {}: {} terms, exact {}, verified {}, residual {:.2e}",
            i + 1,
            f.n_terms,
            f.exact,
            f.verified,
            f.residual
        )
        .unwrap();
        for t in &f.terms {
            writeln!(text, "    ({}) {}", t.coefficient, t.tuple).unwrap();
        }
    }
    for w in &r.warnings {
        writeln!(text, "warning: {w}").unwrap();
    }
    if let Some(c) = &cmp {
        writeln!(text, "catalog: {}", c.status).unwrap();
        for f in &c.flagged {
            writeln!(
                text,
                "  flagged {}: printed {}, fitted {}",
                f.tuple,
                f.printed.as_deref().unwrap_or("absent"),
                f.corrected.as_deref().unwrap_or("-")
            )
            .unwrap();
        }
    }
    let mut json = serde_json::to_value(&r).expect("serializable");
    if let Some(c) = &cmp {
        json["comparison"] = serde_json::to_value(c).expect("serializable");
    }
    Ok(Report::new(json, text, r.all_verified()))
}

fn solution(src: &SolutionSource) -> Result<(SolutionFields, String), String> {
    match (&src.file, src.builtin) {
        (Some(p), _) => {
            let f = SolutionFields::parse_file(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok((f, p.display().to_string()))
        }
        (None, Some(Builtin::Stagnation)) => Ok((stagnation_solution(), "stagnation".into())),
        (None, Some(Builtin::Classical)) => Ok((
            classical_family(&ProfileSet::opaque(2), &Expr::sym(Symbol::tau())).expect("arity 2"),
            "classical".into(),
        )),
        (None, None) => Err("--file or --builtin is required".into()),
    }
}

fn residual(src: &SolutionSource, tol: f64, samples: usize, ctx: &Context) -> Outcome {
    let (f, source) = solution(src)?;
    let test = solution_zero_test().seed(ctx.seed).tol(tol).points(samples);
    let r = nse_residual(&f).report(&test);
    let mut text = String::new();
    for q in &r.residuals {
        let v = if q.verdict.is_structural() {
            "zero (structural)".to_string()
        } else if q.verdict.is_zero() {
            "zero (sampled)".to_string()
        } else {
            format!("nonzero: {}", q.expr)
        };
        writeln!(text, "{:<12} {v}", q.label).unwrap();
    }
    writeln!(text, "solution {}", if r.all_zero { "satisfies the equations" } else { "fails" }).unwrap();
    let json = json!({
        "source": source,
        "fields": f.fields().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "residuals": r.residuals,
        "all_zero": r.all_zero,
        "all_structural": r.all_structural,
    });
    Ok(Report::new(json, text, r.all_zero))
}

fn euler(src: &SolutionSource) -> Outcome {
    let (f, source) = solution(src)?;
    let e = euler_number(&f).map_err(|e| e.to_string())?;
    let text = format!(
        "E = {}\ntime independent {}\nscale invariant {}\n",
        e.value, e.time_independent, e.scale_invariant
    );
    let mut json = serde_json::to_value(&e).expect("serializable");
    json["source"] = json!(source);
    Ok(Report::new(json, text, e.time_independent))
}

fn ansatz(exps: &Exponents, family: Family, system: System, ctx: &Context) -> Outcome {
    let (s, f, include_tau) = match family {
        Family::Bouton => {
            let s = required_exponents(exps)?;
            let f = bouton_ansatz(&s, &ProfileSet::opaque(3)).map_err(|e| e.to_string())?;
            (s, f, false)
        }
        Family::Classical => {
            let s = exponents(exps)?.unwrap_or_else(ScalingExponents::classical);
            let f = classical_family(&ProfileSet::opaque(2), &Expr::sym(Symbol::tau())).expect("arity 2");
            (s, f, true)
        }
    };
    let sys = match system {
        System::Separate => IsobaricSystem::Separate,
        System::Combined => IsobaricSystem::Combined,
    };
    let iso = verify_isobaricity(&f, &s, sys, include_tau);
    let phi = finite_scaling(&s.alpha_x, &s.alpha_t, &Symbol::k());
    let vel = s.velocity_exponent();
    let [u, v, w, p] = f.fields();
    let mut covariance = Vec::new();
    for (name, q, expected) in [("u", u, vel.clone()), ("v", v, vel.clone()), ("w", w, vel.clone()), ("p", p, &vel * nse_symmetry::expr::int(2))] {
        let found = covariance_factor_seeded(&q, &phi, ctx.seed).ok().and_then(|c| c.exponent());
        covariance.push(json!({
            "field": name,
            "expected": expected.to_string(),
            "exponent": found.as_ref().map(|x| x.to_string()),
            "ok": found.as_ref() == Some(&expected),
        }));
    }
    let cov_ok = covariance.iter().all(|c| c["ok"] == json!(true));
    let passed = iso.all_zero && cov_ok;
    let mut text = String::new();
    writeln!(text, "{f}").unwrap();
    for r in &iso.residuals {
        let v = if r.verdict.is_structural() {
            "zero (structural)"
        } else if r.verdict.is_zero() {
            "zero (sampled)"
        } else {
            "NONZERO"
        };
        writeln!(text, "{:<20} {v}", r.label).unwrap();
    }
    for c in &covariance {
        writeln!(
            text,
            "{} scales with k^{} (expected {})",
            c["field"].as_str().unwrap_or(""),
            c["exponent"].as_str().unwrap_or("?"),
            c["expected"].as_str().unwrap_or("")
        )
        .unwrap();
    }
    let json = json!({
        "alpha_x": s.alpha_x.to_string(),
        "alpha_t": s.alpha_t.to_string(),
        "fields": {"u": f.u.to_string(), "v": f.v.to_string(), "w": f.w.to_string(), "p": f.p.to_string()},
        "isobaricity": iso,
        "covariance": covariance,
        "passed": passed,
    });
    Ok(Report::new(json, text, passed))
}

fn invariants(samples: &str, ctx: &Context) -> Outcome {
    let opts = SolveOptions {
        n_samples: samples_budget(samples)?,
        seed: ctx.seed,
        ..SolveOptions::default()
    };
    let r = invariant_arguments(&opts);
    let mut text = String::new();
    writeln!(text, "{} unknowns, {} rows, nullspace dimension {}", r.unknowns, r.rows, r.nullspace_dim).unwrap();
    writeln!(
        text,
        "generating set: {}",
        r.generating_set.iter().map(|m| m.expr.as_str()).collect::<Vec<_>>().join(", ")
    )
    .unwrap();
    for e in &r.expected {
        writeln!(text, "  {:<10} found {} annihilated {}", e.expr, e.found, e.annihilated).unwrap();
    }
    Ok(Report::new(serde_json::to_value(&r).expect("serializable"), text, r.all_found))
}
