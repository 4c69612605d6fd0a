//! Zero-form invariants of the two scaling generators over the extended
//! monomial basis.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::expr::{parse, structurally_zero, Expr};
use crate::symmetry::{apply_generator, catalog};

use super::basis::{monomial_label, AnsatzBasis};
use super::linalg::rank;
use super::solver::{solve_forms, SolveOptions};

pub const EXPECTED_INVARIANTS: [&str; 7] = ["y/x", "z/x", "u*t/x", "v*t/x", "w*t/x", "p*t^2/x^2", "nu*t/x^2"];

#[derive(Debug, Clone, Serialize)]
pub struct InvariantMonomial {
    pub expr: String,
    pub exponents: Vec<i64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectedInvariant {
    pub expr: String,
    /// Exponent vector lies in the rational span of the generating set.
    pub found: bool,
    /// `X₁` and `X₂` reduce it to zero without sampling.
    pub annihilated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub support: Vec<String>,
    pub unknowns: usize,
    pub rows: usize,
    pub nullspace_dim: usize,
    pub monomials: usize,
    pub non_monomial: usize,
    pub generating_set: Vec<InvariantMonomial>,
    pub expected: Vec<ExpectedInvariant>,
    pub all_found: bool,
}

fn exponents_of(e: &Expr, support: &[crate::expr::Symbol]) -> Option<Vec<i64>> {
    use crate::expr::Node;
    let mut ex = vec![0i64; support.len()];
    let factors: Vec<Expr> = match e.node() {
        Node::Mul(fs) => fs.clone(),
        _ => vec![e.clone()],
    };
    for f in factors {
        let (base, p) = match f.node() {
            Node::Pow(b, p) => (b.clone(), p.clone()),
            Node::Num(_) => continue,
            _ => (f.clone(), crate::expr::int(1)),
        };
        let s = base.as_symbol()?;
        let i = support.iter().position(|x| x == s)?;
        if !p.is_integer() {
            return None;
        }
        ex[i] += i64::try_from(p.to_integer()).ok()?;
    }
    Some(ex)
}

fn span_rank(vectors: &[Vec<i64>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(vectors.len(), vectors[0].len(), |i, j| vectors[i][j] as f64);
    rank(&m, 1e-9)
}

/// Solve for zero-forms annihilated by `X₁` and `X₂` over
/// [`AnsatzBasis::invariant_monomials`] and reduce the monomial solutions to
/// a generating set.
pub fn invariant_arguments(opts: &SolveOptions) -> InvariantReport {
    let basis = AnsatzBasis::invariant_monomials();
    let gens = catalog().scaling_pair();
    let r = solve_forms(0, &gens, &basis, opts).expect("valid degree and basis");
    let support = basis.support.clone();
    let mut found: Vec<Vec<i64>> = Vec::new();
    let mut non_monomial = 0;
    for f in &r.forms {
        let nz: Vec<_> = f.numeric.iter().filter(|e| e.value != 0.0).collect();
        if nz.len() == 1 && f.verified {
            let j = basis.labels.iter().position(|l| *l == nz[0].basis).expect("label from basis");
            found.push(basis.exponents.as_ref().expect("monomial basis")[j].clone());
        } else {
            non_monomial += 1;
        }
    }
    let mut sorted = found.clone();
    sorted.sort_by_key(|v| (v.iter().map(|x| x.abs()).sum::<i64>(), v.clone()));
    let mut gen_set: Vec<Vec<i64>> = Vec::new();
    for v in sorted {
        if v.iter().all(|x| *x == 0) {
            continue;
        }
        let mut trial = gen_set.clone();
        trial.push(v.clone());
        if span_rank(&trial) > gen_set.len() {
            gen_set = trial;
        }
    }
    let base_rank = span_rank(&gen_set);
    let expected: Vec<ExpectedInvariant> = EXPECTED_INVARIANTS
        .iter()
        .map(|text| {
            let e = parse(text).expect("invariant parses");
            let in_span = exponents_of(&e, &support).is_some_and(|ex| {
                let mut t = gen_set.clone();
                t.push(ex);
                span_rank(&t) == base_rank
            });
            let annihilated = gens.iter().all(|g| {
                let a = apply_generator(g, &e);
                a.is_zero_literal() || structurally_zero(&a)
            });
            ExpectedInvariant {
                expr: text.to_string(),
                found: in_span,
                annihilated,
            }
        })
        .collect();
    let all_found = expected.iter().all(|e| e.found && e.annihilated);
    InvariantReport {
        support: support.iter().map(|s| s.name().to_string()).collect(),
        unknowns: r.unknowns,
        rows: r.rows,
        nullspace_dim: r.nullspace_dim,
        monomials: found.len(),
        non_monomial,
        generating_set: gen_set
            .iter()
            .map(|ex| InvariantMonomial {
                expr: monomial_label(&support, ex),
                exponents: ex.clone(),
            })
            .collect(),
        expected,
        all_found,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Var;

    #[test]
    fn seven_arguments_recovered() {
        let r = invariant_arguments(&SolveOptions::default());
        assert!(r.all_found, "{:?}", r.expected);
        assert_eq!(r.generating_set.len(), 7);
        assert_eq!(r.non_monomial, 0);
    }

    #[test]
    fn x_alone_is_not_invariant() {
        let x1 = &catalog().x1;
        let e = Expr::var(Var::X);
        assert!(!structurally_zero(&apply_generator(x1, &e)));
        assert_eq!(exponents_of(&parse("p*t^2/x^2").unwrap(), &AnsatzBasis::invariant_monomials().support),
            Some(vec![-2, 0, 0, 2, 0, 0, 0, 1, 0]));
    }
}
