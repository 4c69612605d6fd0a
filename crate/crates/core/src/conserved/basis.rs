//! Ansatz bases for the unknown coefficients of a conserved form.

use serde::Serialize;

use crate::expr::{Expr, Symbol, Var};

use super::catalog::{euler_number, speed};
use super::linalg;
use super::sampling::{sample_point, Sampler};

#[derive(Debug, Clone, Serialize)]
pub struct AnsatzBasis {
    #[serde(skip)]
    pub functions: Vec<Expr>,
    pub labels: Vec<String>,
    /// Symbols the functions may depend on.
    #[serde(serialize_with = "ser_symbols")]
    pub support: Vec<Symbol>,
    pub description: String,
    /// Integer exponent vectors over `support`, when every function is a
    /// monomial.
    #[serde(skip)]
    pub exponents: Option<Vec<Vec<i64>>>,
}

fn ser_symbols<S: serde::Serializer>(v: &[Symbol], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.name().to_string()))
}

fn dependent_support() -> Vec<Symbol> {
    [Var::U, Var::V, Var::W, Var::P].iter().map(|v| v.symbol()).collect()
}

fn velocity_monomials(degree: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for total in 0..=degree {
        for c in 0..=total.min(1) {
            for b in 0..=total - c {
                let a = total - b - c;
                out.push((a, b, c));
            }
        }
    }
    out
}

fn mono_label(a: u32, b: u32, c: u32) -> String {
    let mut parts = Vec::new();
    for (n, e) in [("u", a), ("v", b), ("w", c)] {
        match e {
            0 => {}
            1 => parts.push(n.to_string()),
            _ => parts.push(format!("{n}^{e}")),
        }
    }
    parts.join("*")
}

impl AnsatzBasis {
    /// `ℰ^e·u^a v^b w^c / s^(a+b+c)` with `a+b+c ≤ degree`, `c ≤ 1` and `e` in
    /// `pressure_powers`. Every function has isobaric weight zero; `w² = s² −
    /// u² − v²` is why `c` stops at one.
    pub fn dependent(degree: u32, pressure_powers: &[i64]) -> AnsatzBasis {
        let s = speed();
        let e = euler_number();
        let mut functions = Vec::new();
        let mut labels = Vec::new();
        for &pe in pressure_powers {
            for (a, b, c) in velocity_monomials(degree) {
                let n = (a + b + c) as i64;
                let f = Expr::product([
                    e.powi(pe),
                    Expr::var(Var::U).powi(a as i64),
                    Expr::var(Var::V).powi(b as i64),
                    Expr::var(Var::W).powi(c as i64),
                    s.powi(-n),
                ]);
                let mono = mono_label(a, b, c);
                let epart = match pe {
                    0 => String::new(),
                    1 => "E".to_string(),
                    _ => format!("E^{pe}"),
                };
                let label = match (epart.is_empty(), mono.is_empty(), n) {
                    (true, true, _) => "1".to_string(),
                    (false, true, _) => epart,
                    (true, false, 1) => format!("{mono}/s"),
                    (true, false, _) => format!("{mono}/s^{n}"),
                    (false, false, 1) => format!("{epart}*{mono}/s"),
                    (false, false, _) => format!("{epart}*{mono}/s^{n}"),
                };
                functions.push(f);
                labels.push(label);
            }
        }
        AnsatzBasis {
            functions,
            labels,
            support: dependent_support(),
            description: format!("weight-zero dependent basis, degree {degree}, pressure powers {pressure_powers:?}"),
            exponents: None,
        }
    }

    /// `u^a v^b w^c p^e s^f` with `a+b+c ≤ degree`, `c ≤ 1`, `e` in
    /// `pressure_powers` and `floor ≤ f ≤ 0`; weights are not restricted.
    pub fn unweighted(degree: u32, pressure_powers: &[i64], floor: i64) -> AnsatzBasis {
        let s = speed();
        let mut functions = Vec::new();
        let mut labels = Vec::new();
        for &pe in pressure_powers {
            for (a, b, c) in velocity_monomials(degree) {
                for f in floor.min(0)..=0 {
                    functions.push(Expr::product([
                        Expr::var(Var::P).powi(pe),
                        Expr::var(Var::U).powi(a as i64),
                        Expr::var(Var::V).powi(b as i64),
                        Expr::var(Var::W).powi(c as i64),
                        s.powi(f),
                    ]));
                    let mut parts = Vec::new();
                    if pe != 0 {
                        parts.push(if pe == 1 { "p".to_string() } else { format!("p^{pe}") });
                    }
                    let m = mono_label(a, b, c);
                    if !m.is_empty() {
                        parts.push(m);
                    }
                    if f != 0 {
                        parts.push(format!("s^{f}"));
                    }
                    labels.push(if parts.is_empty() { "1".to_string() } else { parts.join("*") });
                }
            }
        }
        AnsatzBasis {
            functions,
            labels,
            support: dependent_support(),
            description: format!(
                "unweighted dependent basis, degree {degree}, pressure powers {pressure_powers:?}, s floor {floor}"
            ),
            exponents: None,
        }
    }

    /// Monomials `x^a t^b` times at most two distinct factors from
    /// `{y, z, u, v, w, p, ν}`, with `a ∈ [-2, 1]`, `b ∈ [0, 2]`.
    pub fn invariant_monomials() -> AnsatzBasis {
        let support: Vec<Symbol> = Var::ALL.iter().map(|v| v.symbol()).chain([Symbol::nu()]).collect();
        let extras = [1usize, 2, 4, 5, 6, 7, 8];
        let mut picks: Vec<Vec<usize>> = vec![vec![]];
        for (i, a) in extras.iter().enumerate() {
            picks.push(vec![*a]);
            for b in &extras[i + 1..] {
                picks.push(vec![*a, *b]);
            }
        }
        let mut functions = Vec::new();
        let mut labels = Vec::new();
        let mut exponents = Vec::new();
        for ax in -2..=1i64 {
            for at in 0..=2i64 {
                for pick in &picks {
                    let mut ex = vec![0i64; support.len()];
                    ex[0] = ax;
                    ex[3] = at;
                    for &j in pick {
                        ex[j] = 1;
                    }
                    functions.push(monomial(&support, &ex));
                    labels.push(monomial_label(&support, &ex));
                    exponents.push(ex);
                }
            }
        }
        AnsatzBasis {
            functions,
            labels,
            support,
            description: "monomials in x, t and up to two of y, z, u, v, w, p, nu".to_string(),
            exponents: Some(exponents),
        }
    }

    /// Caller-supplied functions over the given support.
    pub fn custom(functions: Vec<Expr>, support: Vec<Symbol>) -> AnsatzBasis {
        let labels = functions.iter().map(|f| f.to_string()).collect();
        AnsatzBasis {
            functions,
            labels,
            support,
            description: "custom basis".to_string(),
            exponents: None,
        }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    /// Drop functions that are numerically dependent on earlier ones.
    pub fn pruned(&self, seed: u64) -> AnsatzBasis {
        let n = self.len();
        if n == 0 {
            return self.clone();
        }
        let mut sampler = Sampler::new(seed);
        let pts: Vec<Vec<f64>> = (0..3 * n + 8)
            .map(|_| {
                let p = sample_point(&mut sampler, &self.support);
                self.functions
                    .iter()
                    .map(|f| f.eval(&p).unwrap_or(f64::NAN))
                    .collect()
            })
            .filter(|row: &Vec<f64>| row.iter().all(|x| x.is_finite()))
            .collect();
        let mut keep: Vec<usize> = Vec::new();
        for j in 0..n {
            let mut cols = keep.clone();
            cols.push(j);
            let m = nalgebra::DMatrix::from_fn(pts.len(), cols.len(), |i, c| pts[i][cols[c]]);
            if linalg::rank(&m, 1e-10) == cols.len() {
                keep.push(j);
            }
        }
        if keep.len() == n {
            return self.clone();
        }
        AnsatzBasis {
            functions: keep.iter().map(|&j| self.functions[j].clone()).collect(),
            labels: keep.iter().map(|&j| self.labels[j].clone()).collect(),
            support: self.support.clone(),
            description: format!("{} (pruned)", self.description),
            exponents: self
                .exponents
                .as_ref()
                .map(|ex| keep.iter().map(|&j| ex[j].clone()).collect()),
        }
    }
}

impl Default for AnsatzBasis {
    fn default() -> Self {
        AnsatzBasis::dependent(2, &[1])
    }
}

pub fn monomial(support: &[Symbol], ex: &[i64]) -> Expr {
    Expr::product(
        support
            .iter()
            .zip(ex)
            .filter(|(_, e)| **e != 0)
            .map(|(s, e)| Expr::sym(s.clone()).powi(*e)),
    )
}

pub fn monomial_label(support: &[Symbol], ex: &[i64]) -> String {
    let parts: Vec<String> = support
        .iter()
        .zip(ex)
        .filter(|(_, e)| **e != 0)
        .map(|(s, e)| if *e == 1 { s.name().to_string() } else { format!("{}^{}", s.name(), e) })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}
