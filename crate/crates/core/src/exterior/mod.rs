//! Differential forms on the eight-variable space (x, y, z, t, u, v, w, p).
//!
//! A k-form is stored sparsely as a map from a bitmask of differentials to a
//! coefficient; bit `i` is the variable `Var::ALL[i]`, so iterating set bits
//! from low to high yields the canonical increasing tuple.

mod text;
mod transform;

use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use crate::expr::{Expr, Var, ZeroTest, ZeroVerdict};

pub use text::{parse_form, FormParseError};
pub use transform::{FiniteTransform, TransformKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("cannot contract a 0-form")]
    ContractZeroForm,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
}

/// Differential index tuple as a bitmask.
pub type Mask = u8;

pub fn mask_of(vars: &[Var]) -> Option<Mask> {
    let mut m: Mask = 0;
    for v in vars {
        let bit = 1 << v.index();
        if m & bit != 0 {
            return None;
        }
        m |= bit;
    }
    Some(m)
}

pub fn vars_of(mask: Mask) -> Vec<Var> {
    Var::ALL
        .iter()
        .copied()
        .filter(|v| mask & (1 << v.index()) != 0)
        .collect()
}

/// Sign of the permutation that sorts `vars` into canonical order.
fn sort_sign(vars: &[Var]) -> i64 {
    let mut inversions = 0;
    for i in 0..vars.len() {
        for j in i + 1..vars.len() {
            if vars[i].index() > vars[j].index() {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of `dI ∧ dJ` relative to the canonical order of `I ∪ J`.
fn wedge_sign(a: Mask, b: Mask) -> i64 {
    let mut inversions = 0;
    for i in 0..8 {
        if a & (1 << i) != 0 {
            inversions += (b & ((1u16 << i) - 1) as u8).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of set bits of `m` strictly below bit `i`.
fn below(m: Mask, i: usize) -> u32 {
    (m & ((1u16 << i) - 1) as u8).count_ones()
}

#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    degree: usize,
    terms: BTreeMap<Mask, Expr>,
}

impl KForm {
    pub fn zero(degree: usize) -> KForm {
        KForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(f: Expr) -> KForm {
        let mut k = KForm::zero(0);
        k.add_term(0, f);
        k
    }

    /// `coef · dv₁ ∧ … ∧ dv_k`, with the sign of reordering applied.
    pub fn term(coef: Expr, vars: &[Var]) -> KForm {
        let mut k = KForm::zero(vars.len());
        if let Some(m) = mask_of(vars) {
            k.add_term(m, coef * sort_sign(vars));
        }
        k
    }

    pub fn differential(v: Var) -> KForm {
        KForm::term(Expr::one(), &[v])
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<Var>, Expr)>>(degree: usize, terms: I) -> KForm {
        let mut k = KForm::zero(degree);
        for (vars, c) in terms {
            assert_eq!(vars.len(), degree, "term degree differs from form degree");
            k = k + KForm::term(c, &vars);
        }
        k
    }

    fn add_term(&mut self, m: Mask, c: Expr) {
        if c.is_zero_literal() {
            return;
        }
        let entry = self.terms.remove(&m);
        let total = match entry {
            Some(old) => old + c,
            None => c,
        };
        if !total.is_zero_literal() {
            self.terms.insert(m, total);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &Expr)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coefficient(&self, vars: &[Var]) -> Expr {
        match mask_of(vars) {
            Some(m) => self.terms.get(&m).cloned().unwrap_or_else(Expr::zero) * sort_sign(vars),
            None => Expr::zero(),
        }
    }

    pub fn coefficient_mask(&self, m: Mask) -> Expr {
        self.terms.get(&m).cloned().unwrap_or_else(Expr::zero)
    }

    /// Coefficient of a 0-form.
    pub fn as_scalar(&self) -> Expr {
        self.coefficient_mask(0)
    }

    pub fn map_coefficients<F: Fn(&Expr) -> Expr>(&self, f: F) -> KForm {
        let mut k = KForm::zero(self.degree);
        for (m, c) in &self.terms {
            k.add_term(*m, f(c));
        }
        k
    }

    pub fn scale(&self, f: &Expr) -> KForm {
        self.map_coefficients(|c| c * f)
    }

    pub fn wedge(&self, other: &KForm) -> KForm {
        let degree = (self.degree + other.degree).min(8);
        let mut k = KForm::zero(degree);
        if self.degree + other.degree > 8 {
            return k;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                k.add_term(ma | mb, ca * cb * wedge_sign(*ma, *mb));
            }
        }
        k
    }

    /// Exterior derivative over the eight core variables.
    pub fn d(&self) -> KForm {
        if self.degree >= 8 {
            return KForm::zero(8);
        }
        let mut k = KForm::zero(self.degree + 1);
        for (m, c) in &self.terms {
            for v in Var::ALL {
                let i = v.index();
                if m & (1 << i) != 0 {
                    continue;
                }
                let dc = c.diff(&v.symbol());
                if dc.is_zero_literal() {
                    continue;
                }
                let sign = if below(*m, i).is_multiple_of(2) { 1 } else { -1 };
                k.add_term(m | (1 << i), dc * sign);
            }
        }
        k
    }

    /// Contraction with `field` in the first slot.
    pub fn interior(&self, field: &VectorField) -> Result<KForm, ExteriorError> {
        if self.degree == 0 {
            return Err(ExteriorError::ContractZeroForm);
        }
        let mut k = KForm::zero(self.degree - 1);
        for (m, c) in &self.terms {
            for (j, v) in vars_of(*m).into_iter().enumerate() {
                let comp = field.component(v);
                if comp.is_zero_literal() {
                    continue;
                }
                let sign = if j % 2 == 0 { 1 } else { -1 };
                k.add_term(m & !(1 << v.index()), c * comp * sign);
            }
        }
        Ok(k)
    }

    /// Lie derivative by Cartan's formula; `V(f)` for 0-forms.
    pub fn lie(&self, field: &VectorField) -> KForm {
        if self.degree == 0 {
            return KForm::scalar(field.apply(&self.as_scalar()));
        }
        let a = self.d();
        let a = if a.degree > self.degree {
            a.interior(field).expect("degree at least one")
        } else {
            KForm::zero(self.degree)
        };
        let b = self.interior(field).expect("degree at least one").d();
        let mut out = a + b;
        if !field.parameter_components().is_empty() {
            // parameters carry no differentials, so they only act on coefficients
            out = out + self.map_coefficients(|c| {
                Expr::sum(field.parameter_components().iter().map(|(s, vc)| vc * c.diff(s)))
            });
        }
        out
    }

    /// Pull back through a finite transform: coefficients are substituted and
    /// each differential becomes `dφ_v = Σ_w ∂φ_v/∂w dw`.
    pub fn pullback(&self, phi: &FiniteTransform) -> KForm {
        let dphi: Vec<KForm> = Var::ALL
            .iter()
            .map(|v| KForm::scalar(phi.image(*v)).d())
            .collect();
        let mut k = KForm::zero(self.degree);
        for (m, c) in &self.terms {
            let mut acc = KForm::scalar(phi.apply(c));
            for v in vars_of(*m) {
                acc = acc.wedge(&dphi[v.index()]);
            }
            k = k + acc;
        }
        k
    }

    /// Re-normalizes every coefficient.
    pub fn normalize(&self) -> KForm {
        self.map_coefficients(Expr::normalize)
    }

    /// Termwise zero test of the form.
    pub fn zero_report(&self, test: &ZeroTest) -> Vec<(Mask, ZeroVerdict)> {
        self.terms.iter().map(|(m, c)| (*m, test.check(c))).collect()
    }

    /// True when every coefficient passes the zero test.
    pub fn is_zero(&self, test: &ZeroTest) -> bool {
        self.terms.values().all(|c| test.check(c).is_zero())
    }

    /// Termwise equality up to the zero test.
    pub fn equivalent(&self, other: &KForm, test: &ZeroTest) -> bool {
        self.degree == other.degree && (self - other).is_zero(test)
    }

    /// Sum of two forms. An empty form adopts the other's degree.
    pub fn try_add(&self, other: &KForm) -> Result<KForm, ExteriorError> {
        if self.degree != other.degree {
            if self.is_empty() {
                return Ok(other.clone());
            }
            if other.is_empty() {
                return Ok(self.clone());
            }
            return Err(ExteriorError::DegreeMismatch(self.degree, other.degree));
        }
        let mut k = self.clone();
        for (m, c) in &other.terms {
            k.add_term(*m, c.clone());
        }
        Ok(k)
    }
}

impl ops::Add for KForm {
    type Output = KForm;
    fn add(self, rhs: KForm) -> KForm {
        &self + &rhs
    }
}

impl ops::Add for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        self.try_add(rhs).expect("adding forms of different degree")
    }
}

impl ops::Sub for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self + &(-rhs)
    }
}

impl ops::Sub for KForm {
    type Output = KForm;
    fn sub(self, rhs: KForm) -> KForm {
        &self - &rhs
    }
}

impl ops::Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.map_coefficients(|c| -c)
    }
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A generator: one coefficient per core variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    name: String,
    coeffs: [Expr; 8],
    /// Components along parameters such as ν (they act on coefficients but
    /// carry no differential).
    extra: BTreeMap<crate::expr::Symbol, Expr>,
}

impl VectorField {
    pub fn new(name: &str, coeffs: [Expr; 8]) -> VectorField {
        VectorField {
            name: name.to_string(),
            coeffs,
            extra: BTreeMap::new(),
        }
    }

    pub fn zero(name: &str) -> VectorField {
        VectorField::new(name, std::array::from_fn(|_| Expr::zero()))
    }

    /// Field with the given nonzero components.
    pub fn from_components(name: &str, comps: &[(Var, Expr)]) -> VectorField {
        let mut f = VectorField::zero(name);
        for (v, c) in comps {
            f.coeffs[v.index()] = c.clone();
        }
        f
    }

    /// Adds a component along a parameter symbol.
    pub fn with_parameter(mut self, s: crate::expr::Symbol, c: Expr) -> VectorField {
        self.extra.insert(s, c);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn component(&self, v: Var) -> &Expr {
        &self.coeffs[v.index()]
    }

    pub fn components(&self) -> &[Expr; 8] {
        &self.coeffs
    }

    pub fn parameter_components(&self) -> &BTreeMap<crate::expr::Symbol, Expr> {
        &self.extra
    }

    /// `V(f) = Σ V_v ∂f/∂v`, including parameter components.
    pub fn apply(&self, f: &Expr) -> Expr {
        let mut terms = Vec::new();
        for v in Var::ALL {
            let c = &self.coeffs[v.index()];
            if !c.is_zero_literal() {
                terms.push(c * f.diff(&v.symbol()));
            }
        }
        for (s, c) in &self.extra {
            terms.push(c * f.diff(s));
        }
        Expr::sum(terms)
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: &Expr, other: &VectorField, b: &Expr, name: &str) -> VectorField {
        let coeffs = std::array::from_fn(|i| a * &self.coeffs[i] + b * &other.coeffs[i]);
        let mut extra = BTreeMap::new();
        for s in self.extra.keys().chain(other.extra.keys()) {
            let ca = self.extra.get(s).cloned().unwrap_or_else(Expr::zero);
            let cb = other.extra.get(s).cloned().unwrap_or_else(Expr::zero);
            let c = a * ca + b * cb;
            if !c.is_zero_literal() {
                extra.insert(s.clone(), c);
            }
        }
        VectorField {
            name: name.to_string(),
            coeffs,
            extra,
        }
    }

    /// Same field without parameter components.
    pub fn without_parameters(&self) -> VectorField {
        VectorField::new(&self.name, self.coeffs.clone())
    }
}

/// Binomial coefficient C(8, k).
pub fn max_terms(k: usize) -> usize {
    if k > 8 {
        return 0;
    }
    let mut c = 1usize;
    for i in 0..k {
        c = c * (8 - i) / (i + 1);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Var::*};

    fn e(t: &str) -> Expr {
        parse(t).unwrap()
    }

    #[test]
    fn wedge_is_antisymmetric() {
        let dx = KForm::differential(X);
        let dy = KForm::differential(Y);
        assert_eq!(dx.wedge(&dy), -&dy.wedge(&dx));
        assert!(dx.wedge(&dx).is_empty());
        let a = KForm::term(e("u"), &[X]);
        let b = KForm::term(e("v"), &[Y]);
        assert_eq!(a.wedge(&b), KForm::term(e("u*v"), &[X, Y]));
    }

    #[test]
    fn exterior_derivative() {
        assert_eq!(KForm::scalar(e("p")).d(), KForm::differential(P));
        let a = KForm::term(e("u"), &[X]);
        assert_eq!(a.d(), KForm::term(e("-1"), &[X, U]));
        assert_eq!(a.d().coefficient(&[U, X]), e("1"));
    }

    #[test]
    fn interior_products() {
        let t = VectorField::from_components("T", &[(T, Expr::one())]);
        let dtdp = KForm::term(Expr::one(), &[T, P]);
        assert_eq!(dtdp.interior(&t).unwrap(), KForm::differential(P));
        assert_eq!(
            KForm::scalar(e("x")).interior(&t),
            Err(ExteriorError::ContractZeroForm)
        );
    }

    #[test]
    fn term_counts_are_binomial() {
        assert_eq!(max_terms(2), 28);
        assert_eq!(max_terms(3), 56);
        assert_eq!(max_terms(4), 70);
        assert_eq!(max_terms(8), 1);
    }

    #[test]
    fn degree_overflow_is_zero() {
        let top = KForm::term(Expr::one(), &Var::ALL);
        let w = top.wedge(&KForm::differential(X));
        assert!(w.is_empty());
        assert_eq!(w.degree(), 8);
    }
}
