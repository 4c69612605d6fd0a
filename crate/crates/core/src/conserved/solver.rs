//! Sampling-based nullspace solver for the Lie-derivative conditions on a
//! k-form with ansatz coefficients.
//!
//! With `ω = Σ_{I,β} c_{I,β} φ_β dx^I`, each generator gives
//! `L_V ω = Σ c_{I,β} (V(φ_β) dx^I + φ_β L_V(dx^I))`, which is linear in the
//! unknowns `c`. The `V(φ_β)` and the components of `L_V(dx^I)` are built
//! once and compiled to a tape; rows are evaluations at sampled points.
//! Tuples that no generator mixes form independent blocks.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::expr::{Expr, Rational, Symbol, Tape, Var, DEFAULT_SEED};
use crate::exterior::{vars_of, KForm, Mask, VectorField};
use crate::numeric::rationalize;

use super::basis::AnsatzBasis;
use super::linalg;
use super::sampling::{sample_values, Sampler};
use super::verify::{tuple_label, verify_conserved, ConservedReport, VerifyOptions};
use super::ConservedError;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Row target; `None` means four rows per unknown.
    pub n_samples: Option<usize>,
    pub svd_tol: f64,
    pub seed: u64,
    pub max_den: u64,
    pub rational_tol: f64,
    pub verify: VerifyOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            n_samples: None,
            svd_tol: 1e-8,
            seed: DEFAULT_SEED,
            max_den: 1_000_000,
            rational_tol: 1e-7,
            verify: VerifyOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FormTerm {
    pub tuple: String,
    pub coefficient: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericEntry {
    pub tuple: String,
    pub basis: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolvedForm {
    pub block: usize,
    /// Every entry was rationalized.
    pub exact: bool,
    pub verified: bool,
    /// `‖A c‖ / (‖A‖ ‖c‖)` on rows from points not used in the solve.
    pub residual: f64,
    pub n_terms: usize,
    pub terms: Vec<FormTerm>,
    pub numeric: Vec<NumericEntry>,
    pub failing_generators: Vec<String>,
    #[serde(skip)]
    pub form: Option<KForm>,
    #[serde(skip)]
    pub report: Option<ConservedReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockSummary {
    pub tuples: Vec<String>,
    pub unknowns: usize,
    pub rows: usize,
    pub nullspace_dim: usize,
    pub gap: f64,
    pub sigma_max: f64,
    pub sigma_min: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NullspaceResult {
    pub k: usize,
    pub generators: Vec<String>,
    pub basis: String,
    pub basis_size: usize,
    pub unknowns: usize,
    pub rows: usize,
    pub singular_values: Vec<f64>,
    pub nullspace_dim: usize,
    /// Smallest block gap.
    pub gap: f64,
    pub blocks: Vec<BlockSummary>,
    pub forms: Vec<SolvedForm>,
    pub warnings: Vec<String>,
}

impl NullspaceResult {
    pub fn verified_forms(&self) -> Vec<&KForm> {
        self.forms
            .iter()
            .filter(|f| f.verified)
            .filter_map(|f| f.form.as_ref())
            .collect()
    }

    pub fn all_verified(&self) -> bool {
        self.forms.iter().all(|f| f.verified)
    }
}

pub fn masks_of_degree(k: usize) -> Vec<Mask> {
    (0u16..256).map(|m| m as Mask).filter(|m| m.count_ones() as usize == k).collect()
}

/// The symbolic templates shared by every row.
pub(crate) struct System {
    pub k: usize,
    pub masks: Vec<Mask>,
    pub nb: usize,
    pub ng: usize,
    /// `lie[g][i]`: components `(j, slot)` of `L_g(dx^{masks[i]})`.
    pub lie: Vec<Vec<Vec<(usize, usize)>>>,
    pub symbols: Vec<Symbol>,
    pub tape: Tape,
    pub blocks: Vec<Vec<usize>>,
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut j = i;
    while parent[j] != r {
        let n = parent[j];
        parent[j] = r;
        j = n;
    }
    r
}

impl System {
    pub fn build(k: usize, gens: &[VectorField], basis: &AnsatzBasis) -> System {
        let masks = masks_of_degree(k);
        let index: BTreeMap<Mask, usize> = masks.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let nb = basis.len();
        let ng = gens.len();
        let mut exprs: Vec<Expr> = basis.functions.clone();
        for g in gens {
            for f in &basis.functions {
                exprs.push(g.apply(f));
            }
        }
        let mut lie = vec![vec![Vec::new(); masks.len()]; ng];
        let mut parent: Vec<usize> = (0..masks.len()).collect();
        for (gi, g) in gens.iter().enumerate() {
            for (i, m) in masks.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let l = KForm::term(Expr::one(), &vars_of(*m)).lie(g);
                for (jm, c) in l.terms() {
                    if c.is_zero_literal() {
                        continue;
                    }
                    let j = index[&jm];
                    lie[gi][i].push((j, exprs.len()));
                    exprs.push(c.clone());
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..masks.len() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
        blocks.sort();
        let mut syms: BTreeSet<Symbol> = Var::ALL.iter().map(|v| v.symbol()).collect();
        for e in &exprs {
            syms.extend(e.free_symbols());
        }
        syms.extend(basis.support.iter().cloned());
        let symbols: Vec<Symbol> = syms.into_iter().collect();
        let tape = Tape::compile(&symbols, &exprs);
        System {
            k,
            masks,
            nb,
            ng,
            lie,
            symbols,
            tape,
            blocks,
        }
    }

    /// Tape outputs at `count` sampled points.
    pub fn evaluate(&self, sampler: &mut Sampler, count: usize) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(count);
        while out.len() < count {
            let need = count - out.len();
            let cand: Vec<Vec<f64>> = (0..need + need / 8 + 1)
                .map(|_| sample_values(sampler, &self.symbols))
                .collect();
            let vals: Vec<Option<Vec<f64>>> = cand
                .par_iter()
                .map(|c| {
                    self.tape
                        .eval(c)
                        .ok()
                        .filter(|v| v.iter().all(|x| x.is_finite()))
                })
                .collect();
            out.extend(vals.into_iter().flatten().take(need));
        }
        out
    }

    pub fn rows_per_point(&self, block: &[usize]) -> usize {
        self.ng * block.len()
    }

    pub fn block_matrix(&self, block: &[usize], points: &[Vec<f64>]) -> DMatrix<f64> {
        let nb = self.nb;
        let len = block.len();
        let cols = len * nb;
        let rpp = self.rows_per_point(block);
        let mut pos = vec![usize::MAX; self.masks.len()];
        for (ii, i) in block.iter().enumerate() {
            pos[*i] = ii;
        }
        let chunks: Vec<Vec<f64>> = points
            .par_iter()
            .map(|o| {
                let mut ch = vec![0.0; rpp * cols];
                for gi in 0..self.ng {
                    let vphi = &o[nb + gi * nb..nb + (gi + 1) * nb];
                    for jj in 0..len {
                        let row = gi * len + jj;
                        for b in 0..nb {
                            ch[row * cols + jj * nb + b] += vphi[b];
                        }
                    }
                    for (ii, i) in block.iter().enumerate() {
                        for (j, slot) in &self.lie[gi][*i] {
                            let jj = pos[*j];
                            let val = o[*slot];
                            let row = gi * len + jj;
                            for b in 0..nb {
                                ch[row * cols + ii * nb + b] += o[b] * val;
                            }
                        }
                    }
                }
                ch
            })
            .collect();
        let mut m = DMatrix::zeros(points.len() * rpp, cols);
        for (p, ch) in chunks.iter().enumerate() {
            for r in 0..rpp {
                for c in 0..cols {
                    m[(p * rpp + r, c)] = ch[r * cols + c];
                }
            }
        }
        m
    }
}

fn relative_residual(a: &DMatrix<f64>, x: &DVector<f64>) -> f64 {
    let num = (a * x).norm();
    let den = a.norm() * x.norm();
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

struct BlockOutcome {
    summary: BlockSummary,
    singular_values: Vec<f64>,
    vectors: Vec<DVector<f64>>,
    rows: usize,
}

/// Solve the Lie-derivative system for degree-`k` forms over `basis`.
pub fn solve_forms(
    k: usize,
    gens: &[VectorField],
    basis: &AnsatzBasis,
    opts: &SolveOptions,
) -> Result<NullspaceResult, ConservedError> {
    if k > 8 {
        return Err(ConservedError::BadDegree(k));
    }
    if gens.is_empty() {
        return Err(ConservedError::NoGenerators);
    }
    if basis.is_empty() {
        return Err(ConservedError::EmptyBasis);
    }
    let sys = System::build(k, gens, basis);
    let nb = sys.nb;
    let unknowns = sys.masks.len() * nb;
    let mut warnings = Vec::new();
    if let Some(n) = opts.n_samples {
        if n < unknowns {
            warnings.push(format!(
                "requested {n} rows for {unknowns} unknowns; sampling raised to keep every block overdetermined"
            ));
        } else if n < 3 * unknowns {
            warnings.push(format!("{n} rows is below the recommended {} for {unknowns} unknowns", 3 * unknowns));
        }
    }
    let plan: Vec<usize> = sys
        .blocks
        .iter()
        .map(|b| {
            let cols = b.len() * nb;
            let target = match opts.n_samples {
                None => 4 * cols,
                Some(n) => (n * cols).div_ceil(unknowns),
            };
            let rpp = sys.rows_per_point(b);
            target.max(cols + 8).div_ceil(rpp).max(nb + 8)
        })
        .collect();
    let max_points = plan.iter().copied().max().unwrap_or(0);
    let mut sampler = Sampler::new(opts.seed);
    let points = sys.evaluate(&mut sampler, max_points);
    let mut fresh_sampler = Sampler::new(opts.seed.wrapping_add(0x51ed_270b));
    let fresh = sys.evaluate(&mut fresh_sampler, nb + 8);

    let outcomes: Vec<BlockOutcome> = sys
        .blocks
        .par_iter()
        .zip(plan.par_iter())
        .map(|(block, &np)| {
            let a = sys.block_matrix(block, &points[..np]);
            let ns = linalg::nullspace(&a, opts.svd_tol);
            let vectors = linalg::rref(&ns.basis, 1e-9);
            BlockOutcome {
                summary: BlockSummary {
                    tuples: block.iter().map(|i| tuple_label(sys.masks[*i])).collect(),
                    unknowns: a.ncols(),
                    rows: a.nrows(),
                    nullspace_dim: ns.basis.len(),
                    gap: ns.gap,
                    sigma_max: ns.singular_values.first().copied().unwrap_or(0.0),
                    sigma_min: ns.singular_values.last().copied().unwrap_or(0.0),
                },
                singular_values: ns.singular_values,
                rows: a.nrows(),
                vectors,
            }
        })
        .collect();

    let mut forms = Vec::new();
    for (bi, (block, out)) in sys.blocks.iter().zip(&outcomes).enumerate() {
        if out.vectors.is_empty() {
            continue;
        }
        let check = sys.block_matrix(block, &fresh);
        for vec in &out.vectors {
            forms.push(make_form(&sys, basis, gens, bi, block, vec, &check, opts));
        }
    }
    let mut singular_values: Vec<f64> = outcomes.iter().flat_map(|o| o.singular_values.iter().copied()).collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let gap = outcomes
        .iter()
        .map(|o| o.summary.gap)
        .fold(f64::INFINITY, f64::min);
    for f in &forms {
        if !f.exact {
            warnings.push(format!("block {}: a null vector did not rationalize; kept numeric-only", f.block));
        } else if !f.verified {
            warnings.push(format!(
                "block {}: rationalized vector failed verification under {}",
                f.block,
                f.failing_generators.join(", ")
            ));
        }
    }
    Ok(NullspaceResult {
        k,
        generators: gens.iter().map(|g| g.name().to_string()).collect(),
        basis: basis.description.clone(),
        basis_size: nb,
        unknowns,
        rows: outcomes.iter().map(|o| o.rows).sum(),
        singular_values,
        nullspace_dim: forms.len(),
        gap,
        blocks: outcomes.into_iter().map(|o| o.summary).collect(),
        forms,
        warnings,
    })
}

#[allow(clippy::too_many_arguments)]
fn make_form(
    sys: &System,
    basis: &AnsatzBasis,
    gens: &[VectorField],
    block_index: usize,
    block: &[usize],
    vec: &DVector<f64>,
    check: &DMatrix<f64>,
    opts: &SolveOptions,
) -> SolvedForm {
    let nb = sys.nb;
    let mut numeric = Vec::new();
    let mut exact: Vec<(usize, usize, Rational)> = Vec::new();
    let mut all_rational = true;
    for (c, x) in vec.iter().enumerate() {
        if *x == 0.0 {
            continue;
        }
        let (ii, b) = (c / nb, c % nb);
        numeric.push(NumericEntry {
            tuple: tuple_label(sys.masks[block[ii]]),
            basis: basis.labels[b].clone(),
            value: *x,
        });
        match rationalize(*x, opts.max_den, opts.rational_tol) {
            Some(r) if !num_traits::Zero::is_zero(&r) => exact.push((ii, b, r)),
            Some(_) => {}
            None => all_rational = false,
        }
    }
    if !all_rational {
        return SolvedForm {
            block: block_index,
            exact: false,
            verified: false,
            residual: relative_residual(check, vec),
            n_terms: 0,
            terms: Vec::new(),
            numeric,
            failing_generators: Vec::new(),
            form: None,
            report: None,
        };
    }
    let mut xr = DVector::zeros(vec.len());
    for (ii, b, r) in &exact {
        xr[ii * nb + b] = crate::symmetry::rational_f64(r);
    }
    let form = KForm::from_terms(
        sys.k,
        exact
            .iter()
            .map(|(ii, b, r)| (vars_of(sys.masks[block[*ii]]), Expr::rational(r.clone()) * &basis.functions[*b])),
    );
    let report = verify_conserved(&form, gens, &opts.verify);
    let terms = form
        .terms()
        .map(|(m, c)| FormTerm {
            tuple: tuple_label(m),
            coefficient: c.to_string(),
        })
        .collect();
    SolvedForm {
        block: block_index,
        exact: true,
        verified: report.verified,
        residual: relative_residual(check, &xr),
        n_terms: form.len(),
        terms,
        numeric,
        failing_generators: report
            .generators
            .iter()
            .filter(|g| !g.passed)
            .map(|g| g.generator.clone())
            .collect(),
        form: Some(form),
        report: Some(report),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::catalog;

    #[test]
    fn zero_forms_give_cavitation_number() {
        let r = solve_forms(0, &catalog().conservation_set(), &AnsatzBasis::default(), &SolveOptions::default()).unwrap();
        assert_eq!(r.nullspace_dim, 1);
        assert!(r.forms[0].verified);
        let b0 = crate::conserved::catalog_form(0).unwrap();
        let f = r.forms[0].form.as_ref().unwrap();
        assert!(f.equivalent(&b0, &crate::expr::ZeroTest::new()));
    }

    #[test]
    fn one_forms_are_empty() {
        let r = solve_forms(1, &catalog().conservation_set(), &AnsatzBasis::default(), &SolveOptions::default()).unwrap();
        assert_eq!(r.nullspace_dim, 0);
        assert!(r.gap >= 1e3, "gap {}", r.gap);
    }

    #[test]
    fn blocks_follow_rotation_orbits() {
        let sys = System::build(1, &catalog().conservation_set(), &AnsatzBasis::default());
        let sizes: Vec<usize> = sys.blocks.iter().map(|b| b.len()).collect();
        let mut sorted = sizes.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 1, 3, 3]);
    }

    #[test]
    fn bad_inputs() {
        let b = AnsatzBasis::default();
        assert!(matches!(
            solve_forms(9, &catalog().conservation_set(), &b, &SolveOptions::default()),
            Err(ConservedError::BadDegree(9))
        ));
        assert!(matches!(
            solve_forms(2, &[], &b, &SolveOptions::default()),
            Err(ConservedError::NoGenerators)
        ));
    }
}
