//! Projection of a printed catalog form onto the span of solver-derived
//! forms, with greedy flagging of tuples that keep it out of the span.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::expr::{Expr, Symbol, Var, DEFAULT_SEED};
use crate::exterior::{KForm, Mask};
use crate::numeric::rationalize;
use crate::symmetry::catalog;

use super::catalog::catalog_entry;
use super::linalg::project;
use super::sampling::{sample_point, Sampler};
use super::solver::NullspaceResult;
use super::verify::{tuple_label, verify_conserved, VerifyOptions};

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub n_points: usize,
    pub tol: f64,
    pub max_flags: usize,
    pub seed: u64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            n_points: 40,
            tol: 1e-6,
            max_flags: 8,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FlaggedTuple {
    pub tuple: String,
    /// Printed coefficient after merging repeated tuples; `None` when the
    /// listing has no such tuple.
    pub printed: Option<String>,
    /// Coefficient of the best-fitting solver form on this tuple.
    pub corrected: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogComparison {
    pub k: usize,
    pub status: String,
    pub has_entry: bool,
    pub verified_forms: usize,
    pub residual: Option<f64>,
    pub in_span: bool,
    pub residual_after_flags: Option<f64>,
    pub in_span_after_flags: bool,
    pub flagged: Vec<FlaggedTuple>,
    pub combination: Vec<f64>,
    /// Printed form with flagged tuples replaced by the fitted ones.
    pub corrected_form: Option<String>,
    pub corrected_verified: Option<bool>,
}

fn empty(k: usize, status: &str, has_entry: bool, verified: usize) -> CatalogComparison {
    CatalogComparison {
        k,
        status: status.to_string(),
        has_entry,
        verified_forms: verified,
        residual: None,
        in_span: false,
        residual_after_flags: None,
        in_span_after_flags: false,
        flagged: Vec::new(),
        combination: Vec::new(),
        corrected_form: None,
        corrected_verified: None,
    }
}

struct Samples {
    tuples: Vec<Mask>,
    n_points: usize,
    /// rows are `tuple * n_points + point`
    basis: DMatrix<f64>,
    target: DVector<f64>,
}

impl Samples {
    fn select(&self, excluded: &BTreeSet<Mask>) -> (DMatrix<f64>, DVector<f64>) {
        let rows: Vec<usize> = self
            .tuples
            .iter()
            .enumerate()
            .filter(|(_, m)| !excluded.contains(m))
            .flat_map(|(i, _)| (i * self.n_points..(i + 1) * self.n_points).collect::<Vec<_>>())
            .collect();
        let b = DMatrix::from_fn(rows.len(), self.basis.ncols(), |r, c| self.basis[(rows[r], c)]);
        let t = DVector::from_fn(rows.len(), |r, _| self.target[rows[r]]);
        (b, t)
    }
}

fn sample(target: &KForm, forms: &[&KForm], opts: &CompareOptions) -> Samples {
    let mut tuples: BTreeSet<Mask> = target.terms().map(|(m, _)| m).collect();
    for f in forms {
        tuples.extend(f.terms().map(|(m, _)| m));
    }
    let tuples: Vec<Mask> = tuples.into_iter().collect();
    let mut syms: BTreeSet<Symbol> = [Var::U, Var::V, Var::W, Var::P].iter().map(|v| v.symbol()).collect();
    for (_, c) in target.terms() {
        syms.extend(c.free_symbols());
    }
    for f in forms {
        for (_, c) in f.terms() {
            syms.extend(c.free_symbols());
        }
    }
    let syms: Vec<Symbol> = syms.into_iter().collect();
    let mut sampler = Sampler::new(opts.seed);
    let points: Vec<_> = (0..opts.n_points).map(|_| sample_point(&mut sampler, &syms)).collect();
    let n = tuples.len() * opts.n_points;
    let mut basis = DMatrix::zeros(n, forms.len());
    let mut t = DVector::zeros(n);
    for (i, m) in tuples.iter().enumerate() {
        let tc = target.coefficient_mask(*m);
        for (p, pt) in points.iter().enumerate() {
            let r = i * opts.n_points + p;
            t[r] = tc.eval(pt).unwrap_or(f64::NAN);
            for (j, f) in forms.iter().enumerate() {
                basis[(r, j)] = f.coefficient_mask(*m).eval(pt).unwrap_or(f64::NAN);
            }
        }
    }
    Samples {
        tuples,
        n_points: opts.n_points,
        basis,
        target: t,
    }
}

/// Whether the printed form at `r.k` lies in the span of `r`'s verified
/// forms; tuples are flagged greedily until the residual drops below
/// `opts.tol` or `opts.max_flags` is reached.
pub fn compare_with_catalog(r: &NullspaceResult, opts: &CompareOptions) -> CatalogComparison {
    let forms = r.verified_forms();
    let Ok(entry) = catalog_entry(r.k) else {
        return empty(r.k, "no catalog entry", false, forms.len());
    };
    if forms.is_empty() {
        return empty(r.k, "no verified forms", true, 0);
    }
    let target = entry.form();
    let s = sample(&target, &forms, opts);
    let mut excluded = BTreeSet::new();
    let (b, t) = s.select(&excluded);
    let (mut coef, residual) = project(&b, &t);
    let mut current = residual;
    while current > opts.tol && excluded.len() < opts.max_flags {
        let best = s
            .tuples
            .iter()
            .filter(|m| !excluded.contains(*m))
            .map(|m| {
                let mut e = excluded.clone();
                e.insert(*m);
                let (b, t) = s.select(&e);
                let (c, res) = project(&b, &t);
                (*m, c, res)
            })
            .min_by(|a, b| a.2.total_cmp(&b.2));
        let Some((m, c, res)) = best else { break };
        excluded.insert(m);
        coef = c;
        current = res;
    }
    let in_span = residual <= opts.tol;
    let after = current <= opts.tol;
    let rational: Option<Vec<Expr>> = coef
        .iter()
        .map(|x| rationalize(*x, 1000, 1e-6).map(Expr::rational))
        .collect();
    let fitted = |m: Mask| -> Option<Expr> {
        rational
            .as_ref()
            .map(|cs| Expr::sum(cs.iter().zip(&forms).map(|(c, f)| c * &f.coefficient_mask(m))))
    };
    let flagged: Vec<FlaggedTuple> = excluded
        .iter()
        .map(|m| {
            let printed = target.coefficient_mask(*m);
            FlaggedTuple {
                tuple: tuple_label(*m),
                printed: (!printed.is_zero_literal()).then(|| printed.to_string()),
                corrected: fitted(*m).map(|e| e.to_string()),
            }
        })
        .collect();
    let (corrected_form, corrected_verified) = if after && !excluded.is_empty() && rational.is_some() {
        let terms = target
            .terms()
            .filter(|(m, _)| !excluded.contains(m))
            .map(|(m, c)| (crate::exterior::vars_of(m), c.clone()))
            .chain(
                excluded
                    .iter()
                    .map(|m| (crate::exterior::vars_of(*m), fitted(*m).expect("rational"))),
            );
        let form = KForm::from_terms(r.k, terms);
        let ok = verify_conserved(&form, &catalog().conservation_set(), &VerifyOptions::default()).verified;
        (Some(form.to_string()), Some(ok))
    } else {
        (None, None)
    };
    let status = if in_span {
        "in span"
    } else if after {
        "in span after excluding flagged tuples"
    } else {
        "not in span"
    };
    CatalogComparison {
        k: r.k,
        status: status.to_string(),
        has_entry: true,
        verified_forms: forms.len(),
        residual: Some(residual),
        in_span,
        residual_after_flags: Some(current),
        in_span_after_flags: after,
        flagged: if in_span { Vec::new() } else { flagged },
        combination: coef.iter().copied().collect(),
        corrected_form,
        corrected_verified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conserved::{solve_forms, AnsatzBasis, SolveOptions};

    fn solve(k: usize) -> NullspaceResult {
        solve_forms(k, &catalog().conservation_set(), &AnsatzBasis::default(), &SolveOptions::default()).unwrap()
    }

    #[test]
    fn top_form_is_in_span() {
        let c = compare_with_catalog(&solve(8), &CompareOptions::default());
        assert!(c.in_span);
        assert!(c.residual.unwrap() < 1e-9);
    }

    #[test]
    fn five_form_is_in_span() {
        let c = compare_with_catalog(&solve(5), &CompareOptions::default());
        assert!(c.in_span, "{c:?}");
    }

    #[test]
    fn degree_one_has_no_entry() {
        let c = compare_with_catalog(&solve(1), &CompareOptions::default());
        assert_eq!(c.status, "no catalog entry");
        assert!(!c.has_entry);
    }

    #[test]
    fn two_form_flags_two_tuples() {
        let c = compare_with_catalog(&solve(2), &CompareOptions::default());
        assert!(!c.in_span && c.in_span_after_flags);
        let mut t: Vec<&str> = c.flagged.iter().map(|f| f.tuple.as_str()).collect();
        t.sort();
        assert_eq!(t, vec!["dy^dw", "dz^du"]);
        assert_eq!(c.corrected_verified, Some(true));
    }
}
