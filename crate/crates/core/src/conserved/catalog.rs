//! Verbatim listings of the published conserved forms.
//!
//! Coefficients are written with three placeholders: `E = p/q`,
//! `q = u²+v²+w²` and `s = q^(1/2)`. Terms whose tuples repeat are kept as
//! listed; the assembled [`KForm`] merges them.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::expr::{parse_with, rat, Expr, ParseOptions, Symbol, Var};
use crate::exterior::KForm;

use super::ConservedError;

/// One printed term: sign-carrying coefficient text and its differentials.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogTerm {
    pub coefficient: String,
    pub vars: Vec<Var>,
    #[serde(skip)]
    pub expr: Expr,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub k: usize,
    pub name: String,
    pub terms: Vec<CatalogTerm>,
}

impl CatalogEntry {
    pub fn form(&self) -> KForm {
        KForm::from_terms(self.k, self.terms.iter().map(|t| (t.vars.clone(), t.expr.clone())))
    }

    /// Tuples that are printed more than once.
    pub fn repeated_tuples(&self) -> Vec<Vec<Var>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in &self.terms {
            if !seen.insert(t.vars.clone()) && !out.contains(&t.vars) {
                out.push(t.vars.clone());
            }
        }
        out
    }
}

pub const CATALOG_DEGREES: [usize; 7] = [0, 2, 3, 4, 5, 6, 8];

const B0: &[(&str, &str)] = &[("E", "")];

const B2: &[(&str, &str)] = &[
    ("E*(q+u^2)/q", "x u"),
    ("E*(q*w+u*s*v)/(q*s)", "x v"),
    ("E*(u*s*w-v*q)/(q*s)", "x w"),
    ("E*(u*s*v-w*q)/(q*s)", "y u"),
    ("E*(q+v^2)/q", "y v"),
    ("E*(s*v^3+u*q*w)/(q*s*w)", "y w"),
    ("E*(u*s*w-v*q)/(q*s)", "z u"),
    ("E*(s*v*w-u*q)/(q*s)", "z v"),
    ("E*(q+w^2)/q", "z w"),
    ("E", "t p"),
];

const B3: &[(&str, &str)] = &[
    ("E*w/s", "x y p"),
    ("-E*v/s", "x z p"),
    ("E*u/s", "y z p"),
    ("E*w/s", "t u v"),
    ("-E*v/s", "t u w"),
    ("E*u/s", "t v w"),
];

const B4: &[(&str, &str)] = &[
    ("E*(2*q-u^2-v^2)/(2*q)", "x y u v"),
    ("E*(2*q*u-w*v*s)/(2*q*s)", "x y u w"),
    ("E*(q*s*w+2*u*v*q)/(2*q*s*u)", "x y v w"),
    ("-E*(w*v*s+2*u*q)/(2*q*s)", "x z u v"),
    ("E*(2*q-u^2-w^2)/(2*q)", "x z u w"),
    ("E*(2*q*u*w-u^2*v*s)/(2*q*s*u)", "x z v w"),
    ("E*(q*w*s-2*u*v*q)/(2*q*s*u)", "y z u v"),
    ("-E*(u^2*v*s+2*u*w*q)/(2*q*s*u)", "y z u w"),
    ("E*(2*q-v^2-w^2)/(2*q)", "y z v w"),
    ("E*(q+u^2)/q", "x t u p"),
    ("E*(w*q+u*v*s)/(q*s)", "x t v p"),
    ("E*(u*s*w^2-q*v*w)/(q*s*w)", "x t w p"),
    ("E*(u*s*v-q*w)/(q*s)", "y t u p"),
    ("E*(q+v^2)/q", "y t v p"),
    ("E*(s*v*w^2+q*u*w)/(q*s*w)", "y t w p"),
    ("E*(u*s*w^2+q*v*w)/(q*s*w)", "z t u p"),
    ("E*(s*v*w-q*u)/(q*s)", "z t v p"),
    ("E*(q+w^2)/q", "z t w p"),
];

const B5: &[(&str, &str)] = &[
    ("E*u/s", "x y z u p"),
    ("E*v/s", "x y z v p"),
    ("E*w/s", "x y z w p"),
    ("E*u/s", "x t u v w"),
    ("E*v/s", "y t u v w"),
    ("E*w/s", "z t u v w"),
];

const B6: &[(&str, &str)] = &[
    ("E", "x y z u v w"),
    ("E*(2*q-u^2-v^2)/(2*q)", "x y t u v p"),
    ("E*(2*q*u-s*v*w)/(2*q*s)", "x y t u v p"),
    ("E*(u^2*s*w+2*q*u*v)/(2*q*s*u)", "x y t v w p"),
    ("-E*(s*v*w+2*q*u)/(2*q*s)", "x z t u v p"),
    ("E*(2*q-u^2-w^2)/(2*q)", "x z t u v p"),
    ("-E*(u*s*v-2*q*w)/(2*q*s)", "x z t v w p"),
    ("E*(u*s*w-2*q*v)/(2*q*s)", "y z t u v p"),
    ("-E*(u*s*v+2*q*w)/(2*q*s)", "y z t u v p"),
    ("E*(2*q-v^2-w^2)/(2*q)", "y z t v w p"),
];

const B8: &[(&str, &str)] = &[("E", "x y z t u v w p")];

/// `u²+v²+w²`.
pub fn speed_squared() -> Expr {
    Expr::sum(Var::VELOCITY.iter().map(|v| Expr::var(*v).powi(2)))
}

/// `(u²+v²+w²)^(1/2)`.
pub fn speed() -> Expr {
    speed_squared().pow(rat(1, 2))
}

/// The cavitation number `p/(u²+v²+w²)`.
pub fn euler_number() -> Expr {
    Expr::var(Var::P) * speed_squared().recip()
}

/// Parse a coefficient written with the `E`, `q`, `s` placeholders.
pub fn coefficient(text: &str) -> Expr {
    let opts = ParseOptions {
        auto_declare: false,
        declared: ["E", "q", "s"].iter().map(|s| s.to_string()).collect(),
    };
    let raw = parse_with(text, &opts).unwrap_or_else(|e| panic!("catalog coefficient `{text}`: {e}"));
    let mut m = BTreeMap::new();
    m.insert(Symbol::new("E"), euler_number());
    m.insert(Symbol::new("q"), speed_squared());
    m.insert(Symbol::new("s"), speed());
    raw.subs(&m)
}

fn vars(text: &str) -> Vec<Var> {
    text.split_whitespace()
        .map(|n| Var::from_name(n).unwrap_or_else(|| panic!("catalog variable `{n}`")))
        .collect()
}

fn listing(k: usize) -> Option<&'static [(&'static str, &'static str)]> {
    Some(match k {
        0 => B0,
        2 => B2,
        3 => B3,
        4 => B4,
        5 => B5,
        6 => B6,
        8 => B8,
        _ => return None,
    })
}

/// The printed entry for degree `k`.
pub fn catalog_entry(k: usize) -> Result<CatalogEntry, ConservedError> {
    if k > 8 {
        return Err(ConservedError::BadDegree(k));
    }
    let rows = listing(k).ok_or(ConservedError::NoneReported(k))?;
    let terms = rows
        .iter()
        .map(|(c, v)| CatalogTerm {
            coefficient: c.to_string(),
            vars: vars(v),
            expr: coefficient(c),
        })
        .collect();
    Ok(CatalogEntry {
        k,
        name: format!("B{k}"),
        terms,
    })
}

/// The printed form of degree `k`, with repeated tuples summed.
pub fn catalog_form(k: usize) -> Result<KForm, ConservedError> {
    catalog_entry(k).map(|e| e.form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, ZeroTest};

    #[test]
    fn printed_term_counts() {
        let counts: Vec<usize> = CATALOG_DEGREES
            .iter()
            .map(|k| catalog_entry(*k).unwrap().terms.len())
            .collect();
        assert_eq!(counts, vec![1, 10, 6, 18, 6, 10, 1]);
    }

    #[test]
    fn degrees_without_entries() {
        assert!(matches!(catalog_form(1), Err(ConservedError::NoneReported(1))));
        assert!(matches!(catalog_form(7), Err(ConservedError::NoneReported(7))));
        assert!(matches!(catalog_form(9), Err(ConservedError::BadDegree(9))));
    }

    #[test]
    fn zero_form_is_cavitation_number() {
        let b0 = catalog_form(0).unwrap();
        let d = b0.as_scalar() - parse("p/(u^2+v^2+w^2)").unwrap();
        assert!(ZeroTest::new().check(&d).is_zero());
    }

    #[test]
    fn first_three_form_term() {
        let b3 = catalog_form(3).unwrap();
        let c = b3.coefficient(&[Var::X, Var::Y, Var::P]);
        let d = c - parse("p*w/(u^2+v^2+w^2)^(3/2)").unwrap();
        assert!(ZeroTest::new().check(&d).is_zero());
    }

    #[test]
    fn repeated_tuples_in_six_form() {
        let e = catalog_entry(6).unwrap();
        assert_eq!(e.repeated_tuples().len(), 3);
        assert_eq!(e.form().len(), 7);
    }
}
