//! Check that every generator's Lie derivative annihilates a form.

use rayon::prelude::*;
use serde::Serialize;

use crate::expr::{PointSampler, SampleDomain, Witness, ZeroTest, ZeroVerdict, DEFAULT_SEED};
use crate::exterior::{vars_of, KForm, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Normal form first, random evaluation as fallback.
    Structural,
    /// Random evaluation only.
    Probabilistic,
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub mode: VerifyMode,
    pub n_points: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            mode: VerifyMode::Structural,
            n_points: 100,
            tol: 1e-9,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermFailure {
    pub term: String,
    pub coefficient: String,
    pub witness: Witness,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub passed: bool,
    /// Every coefficient reduced to zero without sampling.
    pub structural: bool,
    /// Largest `|coefficient|` of the Lie derivative over the sample points.
    pub max_residual: f64,
    pub failures: Vec<TermFailure>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConservedReport {
    pub degree: usize,
    pub terms: usize,
    pub generators: Vec<GeneratorCheck>,
    pub verified: bool,
}

impl ConservedReport {
    pub fn all_structural(&self) -> bool {
        self.generators.iter().all(|g| g.structural)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &TermFailure)> {
        self.generators
            .iter()
            .flat_map(|g| g.failures.iter().map(move |f| (g.generator.as_str(), f)))
    }
}

pub fn tuple_label(mask: crate::exterior::Mask) -> String {
    let v: Vec<String> = vars_of(mask).iter().map(|v| format!("d{v}")).collect();
    if v.is_empty() {
        "1".to_string()
    } else {
        v.join("^")
    }
}

fn check_one(form: &KForm, g: &VectorField, opts: &VerifyOptions) -> GeneratorCheck {
    let lie = form.lie(g);
    let test = ZeroTest::new()
        .points(opts.n_points)
        .tol(opts.tol)
        .seed(opts.seed)
        .domain(SampleDomain::Mixed);
    let mut structural = true;
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    for (m, c) in lie.terms() {
        let verdict = match opts.mode {
            VerifyMode::Structural => test.check(c),
            VerifyMode::Probabilistic => test.check_numeric(c),
        };
        match &verdict {
            ZeroVerdict::ZeroStructural => {}
            ZeroVerdict::ZeroProbabilistic => structural = false,
            ZeroVerdict::NonZero(w) => {
                structural = false;
                failures.push(TermFailure {
                    term: tuple_label(m),
                    coefficient: c.to_string(),
                    witness: w.clone(),
                });
            }
        }
        if !verdict.is_structural() {
            max_residual = max_residual.max(sampled_max(c, opts));
        }
    }
    GeneratorCheck {
        generator: g.name().to_string(),
        passed: failures.is_empty(),
        structural,
        max_residual,
        failures,
    }
}

fn sampled_max(c: &crate::expr::Expr, opts: &VerifyOptions) -> f64 {
    let syms = c.free_symbols();
    let mut sampler = PointSampler::new(opts.seed ^ 0x9e37_79b9, SampleDomain::Mixed);
    let mut m: f64 = 0.0;
    for _ in 0..opts.n_points {
        let p = sampler.sample(&syms);
        if let Ok(v) = c.eval(&p) {
            if v.is_finite() {
                m = m.max(v.abs());
            }
        }
    }
    m
}

/// Lie derivative of `form` along each generator, zero-tested term by term.
pub fn verify_conserved(form: &KForm, gens: &[VectorField], opts: &VerifyOptions) -> ConservedReport {
    let generators: Vec<GeneratorCheck> = gens.par_iter().map(|g| check_one(form, g, opts)).collect();
    let verified = !generators.is_empty() && generators.iter().all(|g| g.passed);
    ConservedReport {
        degree: form.degree(),
        terms: form.len(),
        generators,
        verified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conserved::catalog::{catalog_form, euler_number};
    use crate::expr::Var;
    use crate::symmetry::catalog;

    #[test]
    fn cavitation_number_passes_structurally() {
        let r = verify_conserved(&catalog_form(0).unwrap(), &catalog().conservation_set(), &VerifyOptions::default());
        assert!(r.verified);
        assert!(r.all_structural());
        assert_eq!(r.generators.len(), 5);
    }

    #[test]
    fn bare_dx_dp_fails_under_scaling() {
        let w = KForm::term(crate::expr::Expr::one(), &[Var::X, Var::P]);
        let r = verify_conserved(&w, &catalog().conservation_set(), &VerifyOptions::default());
        assert!(!r.verified);
        let x = r.generators.iter().find(|g| g.generator == "X").unwrap();
        assert!(!x.passed);
        assert_eq!(x.failures[0].term, "dx^dp");
        let t = r.generators.iter().find(|g| g.generator == "T").unwrap();
        assert!(t.passed);
    }

    #[test]
    fn dt_dp_alone_passes_scaling() {
        let w = KForm::term(crate::expr::Expr::one(), &[Var::T, Var::P]);
        let r = verify_conserved(&w, &catalog().conservation_set(), &VerifyOptions::default());
        assert!(r.verified);
        let e = KForm::term(euler_number(), &[Var::T, Var::P]);
        assert!(verify_conserved(&e, &catalog().conservation_set(), &VerifyOptions::default()).verified);
    }
}
