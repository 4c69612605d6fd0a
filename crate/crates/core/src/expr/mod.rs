//! Immutable symbolic expressions over rationals, symbols, rational powers
//! and opaque function calls.
//!
//! Every public constructor returns an expression in canonical form: sums
//! and products are flattened and sorted, rational constants fold, equal
//! power bases merge and additive bases of powers carry no numeric or
//! monomial content. Two expressions that normalize to the same tree compare
//! equal with `==`.

mod diff;
mod display;
mod eval;
mod parse;
mod ratform;
mod symbol;
mod tape;
mod zero;

use std::collections::BTreeMap;
use std::ops;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use diff::placeholder;
pub use eval::{Env, EvalError, FunctionInstance, Point, PolyInstance};
pub use parse::{parse, parse_with, ParseError, ParseOptions};
pub use ratform::structurally_zero;
pub use symbol::{Symbol, SymbolKind, Var, COS_THETA, SIN_THETA};
pub use tape::Tape;
pub use zero::{is_zero, PointSampler, SampleDomain, Witness, ZeroTest, ZeroVerdict, DEFAULT_SEED};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Head of an opaque call: a profile function name plus the (sorted,
/// zero-based) argument slots it has been differentiated in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Func {
    name: Arc<str>,
    derivs: Vec<u8>,
}

impl Func {
    pub fn new(name: &str) -> Func {
        Func {
            name: name.into(),
            derivs: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn derivs(&self) -> &[u8] {
        &self.derivs
    }

    pub fn with_derivs(name: &str, mut derivs: Vec<u8>) -> Func {
        derivs.sort_unstable();
        Func {
            name: name.into(),
            derivs,
        }
    }

    /// Head of ∂F/∂(argument `slot`).
    pub fn differentiated(&self, slot: usize) -> Func {
        let mut derivs = self.derivs.clone();
        derivs.push(slot as u8);
        derivs.sort_unstable();
        Func {
            name: self.name.clone(),
            derivs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Num(Rational),
    Sym(Symbol),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, Rational),
    Call(Func, Vec<Expr>),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl Expr {
    fn raw(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn zero() -> Expr {
        Expr::raw(Node::Num(Rational::zero()))
    }

    pub fn one() -> Expr {
        Expr::raw(Node::Num(Rational::one()))
    }

    pub fn num(n: i64) -> Expr {
        Expr::raw(Node::Num(int(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Expr {
        Expr::raw(Node::Num(rat(n, d)))
    }

    pub fn rational(r: Rational) -> Expr {
        Expr::raw(Node::Num(r))
    }

    pub fn sym(s: Symbol) -> Expr {
        Expr::raw(Node::Sym(s))
    }

    pub fn var(v: Var) -> Expr {
        Expr::sym(v.symbol())
    }

    /// Symbol by name (kind inferred from the name).
    pub fn named(name: &str) -> Expr {
        Expr::sym(Symbol::new(name))
    }

    pub fn call(name: &str, args: Vec<Expr>) -> Expr {
        Expr::raw(Node::Call(Func::new(name), args))
    }

    pub fn call_func(func: Func, args: Vec<Expr>) -> Expr {
        Expr::raw(Node::Call(func, args))
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self.node() {
            Node::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self.node() {
            Node::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self.node(), Node::Num(r) if r.is_zero())
    }

    pub fn is_one_literal(&self) -> bool {
        matches!(self.node(), Node::Num(r) if r.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.free_symbols().is_empty() && !self.has_calls()
    }

    pub fn sqrt(&self) -> Expr {
        self.pow(rat(1, 2))
    }

    pub fn powi(&self, n: i64) -> Expr {
        self.pow(int(n))
    }

    pub fn recip(&self) -> Expr {
        self.powi(-1)
    }

    /// Canonical sum of the given terms.
    pub fn sum<I: IntoIterator<Item = Expr>>(terms: I) -> Expr {
        let mut constant = Rational::zero();
        let mut collected: BTreeMap<Expr, Rational> = BTreeMap::new();
        let mut stack: Vec<Expr> = terms.into_iter().collect();
        while let Some(t) = stack.pop() {
            match t.node() {
                Node::Add(ts) => stack.extend(ts.iter().cloned()),
                Node::Num(c) => constant += c,
                _ => {
                    let (c, rest) = split_coefficient(&t);
                    *collected.entry(rest).or_insert_with(Rational::zero) += c;
                }
            }
        }
        let mut out: Vec<Expr> = collected
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(rest, c)| with_coefficient(c, rest))
            .collect();
        if !constant.is_zero() {
            out.push(Expr::rational(constant));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => {
                out.sort();
                Expr::raw(Node::Add(out))
            }
        }
    }

    /// Canonical product of the given factors.
    pub fn product<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
        let factors: Vec<Expr> = factors.into_iter().collect();
        if factors.len() == 1 && !matches!(factors[0].node(), Node::Pow(..)) {
            return factors.into_iter().next().unwrap();
        }
        let mut coeff = Rational::one();
        let mut powers: BTreeMap<Expr, Rational> = BTreeMap::new();
        let mut work: Vec<(Expr, Rational)> = factors.into_iter().map(|f| (f, int(1))).collect();
        loop {
            while let Some((f, e)) = work.pop() {
                match f.node() {
                    Node::Mul(fs) => {
                        for g in fs {
                            work.push((g.clone(), e.clone()));
                        }
                    }
                    Node::Num(c) if e.is_integer() => {
                        if c.is_zero() && e.is_negative() {
                            *powers.entry(f.clone()).or_insert_with(Rational::zero) += e;
                        } else {
                            coeff *= rational_powi(c, &e);
                        }
                    }
                    Node::Pow(b, pe) => {
                        *powers.entry(b.clone()).or_insert_with(Rational::zero) += pe * &e;
                    }
                    _ => {
                        *powers.entry(f.clone()).or_insert_with(Rational::zero) += e;
                    }
                }
            }
            // Entries whose merged exponent allows further rewriting go back
            // on the worklist; everything else is final.
            let mut again = Vec::new();
            let keys: Vec<Expr> = powers.keys().cloned().collect();
            for b in keys {
                let e = powers[&b].clone();
                if e.is_zero() {
                    powers.remove(&b);
                    continue;
                }
                match b.node() {
                    Node::Num(c) => {
                        if let Some(v) = exact_rational_pow(c, &e) {
                            coeff *= v;
                            powers.remove(&b);
                        }
                    }
                    Node::Mul(_) | Node::Pow(..) if e.is_integer() => {
                        powers.remove(&b);
                        again.push((b, e));
                    }
                    Node::Mul(fs) => {
                        let (pos, rest): (Vec<Expr>, Vec<Expr>) =
                            fs.iter().cloned().partition(|f| f.is_positive());
                        if !pos.is_empty() {
                            powers.remove(&b);
                            for f in pos {
                                again.push((f, e.clone()));
                            }
                            if !rest.is_empty() {
                                let rest = if rest.len() == 1 {
                                    rest.into_iter().next().unwrap()
                                } else {
                                    Expr::raw(Node::Mul(rest))
                                };
                                again.push((Expr::raw(Node::Pow(rest, int(1))), e));
                            }
                        }
                    }
                    Node::Pow(inner, e1) if inner.is_positive() => {
                        powers.remove(&b);
                        again.push((inner.clone(), e1 * &e));
                    }
                    Node::Add(ts) => {
                        if let Some(split) = split_add_content(ts, &e) {
                            powers.remove(&b);
                            if !split.numeric.is_one() {
                                again.push((Expr::rational(split.numeric), e.clone()));
                            }
                            for (mb, me) in split.monomial {
                                again.push((mb, me * &e));
                            }
                            again.push((split.reduced, e));
                        }
                    }
                    _ => {}
                }
            }
            if again.is_empty() {
                break;
            }
            // Re-expand: a `Pow` wrapper with exponent 1 marks a bare base.
            for (b, e) in again {
                match b.node() {
                    Node::Pow(inner, one) if one.is_one() => {
                        *powers.entry(inner.clone()).or_insert_with(Rational::zero) += e;
                    }
                    _ => work.push((b, e)),
                }
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        let mut out: Vec<Expr> = powers
            .into_iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(b, e)| {
                if e.is_one() {
                    b
                } else {
                    Expr::raw(Node::Pow(b, e))
                }
            })
            .collect();
        out.sort();
        if out.is_empty() {
            return Expr::rational(coeff);
        }
        if coeff.is_one() && out.len() == 1 {
            return out.pop().unwrap();
        }
        if out.len() == 1 {
            if let Node::Add(ts) = out[0].node() {
                let c = Expr::rational(coeff);
                return Expr::sum(ts.iter().map(|t| Expr::product([c.clone(), t.clone()])));
            }
        }
        if !coeff.is_one() {
            out.insert(0, Expr::rational(coeff));
        }
        Expr::raw(Node::Mul(out))
    }

    /// `self^e` for a rational exponent.
    pub fn pow(&self, e: Rational) -> Expr {
        if e.is_zero() {
            return Expr::one();
        }
        if e.is_one() {
            return self.clone();
        }
        match self.node() {
            Node::Num(c) => {
                if c.is_zero() && e.is_negative() {
                    return Expr::raw(Node::Pow(self.clone(), e));
                }
                match exact_rational_pow(c, &e) {
                    Some(v) => Expr::rational(v),
                    None => Expr::raw(Node::Pow(self.clone(), e)),
                }
            }
            Node::Sym(_) | Node::Call(..) => Expr::raw(Node::Pow(self.clone(), e)),
            _ => Expr::product([Expr::raw(Node::Pow(self.clone(), e))]),
        }
    }

    /// True when the expression is strictly positive wherever it is defined.
    pub fn is_positive(&self) -> bool {
        match self.node() {
            Node::Num(c) => c.is_positive(),
            Node::Sym(s) => s.is_positive(),
            Node::Pow(b, _) => b.is_positive(),
            Node::Mul(fs) => fs.iter().all(Expr::is_positive),
            Node::Add(ts) => ts.iter().all(Expr::is_positive),
            Node::Call(..) => false,
        }
    }

    /// Rebuilds the tree bottom-up through the canonical constructors.
    pub fn normalize(&self) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Add(ts) => Expr::sum(ts.iter().map(Expr::normalize)),
            Node::Mul(fs) => Expr::product(fs.iter().map(Expr::normalize)),
            Node::Pow(b, e) => b.normalize().pow(e.clone()),
            Node::Call(f, args) => {
                Expr::call_func(f.clone(), args.iter().map(Expr::normalize).collect())
            }
        }
    }

    /// Distributes products over sums and expands positive integer powers of
    /// sums. Denominators and fractional powers are left as atoms.
    pub fn expand(&self) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Call(f, args) => {
                Expr::call_func(f.clone(), args.iter().map(Expr::expand).collect())
            }
            Node::Add(ts) => Expr::sum(ts.iter().map(Expr::expand)),
            Node::Mul(fs) => distribute(fs.iter().map(Expr::expand)),
            Node::Pow(b, e) => {
                let b = b.expand();
                if e.is_integer() && e.is_positive() {
                    if let Node::Add(_) = b.node() {
                        let n = e.to_integer().to_usize().unwrap_or(0);
                        return distribute(std::iter::repeat_n(b, n));
                    }
                }
                b.pow(e.clone())
            }
        }
    }

    /// Free symbols in canonical order.
    pub fn free_symbols(&self) -> Vec<Symbol> {
        let mut out = std::collections::BTreeSet::new();
        self.visit(&mut |e| {
            if let Node::Sym(s) = e.node() {
                out.insert(s.clone());
            }
        });
        out.into_iter().collect()
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Node::Sym(t) = e.node() {
                if t == s {
                    found = true;
                }
            }
        });
        found
    }

    pub fn has_calls(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Node::Call(..) = e.node() {
                found = true;
            }
        });
        found
    }

    /// Distinct opaque function names with their arities.
    pub fn functions(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |e| {
            if let Node::Call(f, args) = e.node() {
                out.insert(f.name().to_string(), args.len());
            }
        });
        out
    }

    /// True if a literal division by zero survived normalization.
    pub fn has_zero_division(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| {
            if let Node::Pow(b, ex) = e.node() {
                if b.is_zero_literal() && ex.is_negative() {
                    found = true;
                }
            }
        });
        found
    }

    /// Pre-order traversal.
    pub fn visit<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match self.node() {
            Node::Num(_) | Node::Sym(_) => {}
            Node::Add(cs) | Node::Mul(cs) | Node::Call(_, cs) => {
                for c in cs {
                    c.visit(f);
                }
            }
            Node::Pow(b, _) => b.visit(f),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

/// Expanded product of already expanded factors.
fn distribute<I: IntoIterator<Item = Expr>>(factors: I) -> Expr {
    let mut acc: Vec<Expr> = vec![Expr::one()];
    for f in factors {
        let parts: Vec<Expr> = match f.node() {
            Node::Add(ts) => ts.clone(),
            _ => vec![f.clone()],
        };
        let mut next = Vec::with_capacity(acc.len() * parts.len());
        for a in &acc {
            for p in &parts {
                // a product of monomials can still carry a sum base with a
                // negative exponent, which stays an atom
                next.push(a * p);
            }
        }
        acc = next;
    }
    Expr::sum(acc)
}

/// Splits a non-constant term into rational coefficient and the rest.
fn split_coefficient(e: &Expr) -> (Rational, Expr) {
    if let Node::Mul(fs) = e.node() {
        if let Node::Num(c) = fs[0].node() {
            let rest = if fs.len() == 2 {
                fs[1].clone()
            } else {
                Expr::raw(Node::Mul(fs[1..].to_vec()))
            };
            return (c.clone(), rest);
        }
    }
    (Rational::one(), e.clone())
}

fn with_coefficient(c: Rational, rest: Expr) -> Expr {
    if c.is_one() {
        return rest;
    }
    match rest.node() {
        Node::Mul(fs) => {
            let mut v = Vec::with_capacity(fs.len() + 1);
            v.push(Expr::rational(c));
            v.extend(fs.iter().cloned());
            Expr::raw(Node::Mul(v))
        }
        _ => Expr::raw(Node::Mul(vec![Expr::rational(c), rest])),
    }
}

struct AddContent {
    numeric: Rational,
    monomial: Vec<(Expr, Rational)>,
    reduced: Expr,
}

/// Factors numeric and monomial content out of a sum used as a power base
/// with exponent `e`. Monomial content and the sign are only extracted when
/// that is valid for the exponent (integer `e`, or positive factors).
fn split_add_content(terms: &[Expr], e: &Rational) -> Option<AddContent> {
    let integer_exp = e.is_integer();
    let mut coeffs = Vec::with_capacity(terms.len());
    let mut term_powers: Vec<BTreeMap<Expr, Rational>> = Vec::with_capacity(terms.len());
    for t in terms {
        let (c, rest) = match t.node() {
            Node::Num(c) => (c.clone(), Expr::one()),
            _ => split_coefficient(t),
        };
        coeffs.push(c);
        let mut m = BTreeMap::new();
        let factors: Vec<Expr> = match rest.node() {
            Node::Mul(fs) => fs.clone(),
            Node::Num(_) => Vec::new(),
            _ => vec![rest.clone()],
        };
        for f in factors {
            match f.node() {
                Node::Pow(b, pe) => {
                    m.insert(b.clone(), pe.clone());
                }
                _ => {
                    m.insert(f.clone(), int(1));
                }
            }
        }
        term_powers.push(m);
    }
    let mut g_num = BigInt::zero();
    let mut g_den = BigInt::one();
    for c in &coeffs {
        g_num = g_num.gcd(c.numer());
        g_den = g_den.lcm(c.denom());
    }
    let mut numeric = Rational::new(g_num, g_den);
    if integer_exp && leading_coefficient(terms).is_negative() {
        numeric = -numeric;
    }
    let mut monomial = Vec::new();
    if let Some(first) = term_powers.first() {
        for (b, e0) in first {
            if !integer_exp && !b.is_positive() {
                continue;
            }
            let mut common = e0.clone();
            let mut ok = true;
            for m in &term_powers[1..] {
                match m.get(b) {
                    Some(ei) if ei.signum() == e0.signum() => {
                        if ei.abs() < common.abs() {
                            common = ei.clone();
                        }
                    }
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                monomial.push((b.clone(), common));
            }
        }
    }
    if numeric.is_one() && monomial.is_empty() {
        return None;
    }
    let mut divisor = vec![Expr::rational(numeric.recip())];
    for (b, me) in &monomial {
        divisor.push(b.pow(-me.clone()));
    }
    let divisor = Expr::product(divisor);
    let reduced = Expr::sum(terms.iter().map(|t| Expr::product([t.clone(), divisor.clone()])));
    Some(AddContent {
        numeric,
        monomial,
        reduced,
    })
}

/// Coefficient of the term whose non-numeric part sorts first. Unlike the
/// first term of the sorted sum, this choice is stable under negation.
fn leading_coefficient(terms: &[Expr]) -> Rational {
    terms
        .iter()
        .map(|t| match t.node() {
            Node::Num(c) => (Expr::one(), c.clone()),
            _ => {
                let (c, rest) = split_coefficient(t);
                (rest, c)
            }
        })
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, c)| c)
        .unwrap_or_else(Rational::one)
}

/// c^e for an integer exponent.
fn rational_powi(c: &Rational, e: &Rational) -> Rational {
    let n = e.to_integer().to_i32().expect("exponent out of range");
    num_traits::Pow::pow(c, n)
}

/// c^e when the result is rational.
fn exact_rational_pow(c: &Rational, e: &Rational) -> Option<Rational> {
    if e.is_integer() {
        if c.is_zero() && e.is_negative() {
            return None;
        }
        return Some(rational_powi(c, e));
    }
    if !c.is_positive() {
        return None;
    }
    let q = e.denom().to_u32()?;
    let rn = c.numer().nth_root(q);
    let rd = c.denom().nth_root(q);
    if num_traits::Pow::pow(&rn, q) != *c.numer() || num_traits::Pow::pow(&rd, q) != *c.denom() {
        return None;
    }
    let root = Rational::new(rn, rd);
    Some(rational_powi(&root, &Rational::from_integer(e.numer().clone())))
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::num(n)
    }
}

impl From<Var> for Expr {
    fn from(v: Var) -> Expr {
        Expr::var(v)
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Expr {
        Expr::sym(s)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Expr {
        Expr::rational(r)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $body(&self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $body(&self, rhs)
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                $body(self, &rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                $body(self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Expr, b: &Expr| Expr::sum([a.clone(), b.clone()]));
binop!(Sub, sub, |a: &Expr, b: &Expr| Expr::sum([a.clone(), -b]));
binop!(Mul, mul, |a: &Expr, b: &Expr| Expr::product([a.clone(), b.clone()]));
binop!(Div, div, |a: &Expr, b: &Expr| Expr::product([a.clone(), b.recip()]));

macro_rules! scalar_op {
    ($tr:ident, $method:ident) => {
        impl ops::$tr<i64> for Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                ops::$tr::$method(&self, &Expr::num(rhs))
            }
        }
        impl ops::$tr<i64> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: i64) -> Expr {
                ops::$tr::$method(self, &Expr::num(rhs))
            }
        }
    };
}

scalar_op!(Add, add);
scalar_op!(Sub, sub);
scalar_op!(Mul, mul);
scalar_op!(Div, div);

impl ops::Mul<Expr> for i64 {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        &rhs * self
    }
}

impl ops::Mul<&Expr> for i64 {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        rhs * self
    }
}

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product([Expr::num(-1), self.clone()])
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::sum(iter)
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::product(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::var(Var::X)
    }
    fn y() -> Expr {
        Expr::var(Var::Y)
    }

    #[test]
    fn constants_fold() {
        let e = Expr::num(2) + Expr::num(3) * Expr::ratio(1, 3);
        assert_eq!(e, Expr::num(3));
        assert_eq!(Expr::num(4).sqrt(), Expr::num(2));
        assert_eq!(Expr::ratio(9, 4).pow(rat(-1, 2)), Expr::ratio(2, 3));
    }

    #[test]
    fn like_terms_collect_and_cancel() {
        let e = x() * y() * 2 + y() * x() * (-2);
        assert!(e.is_zero_literal());
        let e = x() + x();
        assert_eq!(e, Expr::num(2) * x());
    }

    #[test]
    fn bases_merge() {
        let e = x() * x().powi(3) / x().powi(4);
        assert!(e.is_one_literal());
        let s = (x().powi(2) + y().powi(2)).sqrt();
        assert_eq!(&s * &s, x().powi(2) + y().powi(2));
    }

    #[test]
    fn even_root_of_square_is_not_collapsed() {
        let e = x().powi(2).sqrt();
        assert_ne!(e, x());
        // squaring it back is exact
        assert_eq!(e.powi(2), x().powi(2));
    }

    #[test]
    fn sum_content_is_factored_from_denominators() {
        let t = Expr::var(Var::T) + Expr::sym(Symbol::tau());
        let a = (x() * 2 + y() * 2).recip();
        assert_eq!(a, Expr::ratio(1, 2) * (x() + y()).recip());
        let b = (x().powi(2) / t.powi(2) + y().powi(2) / t.powi(2)).recip();
        assert_eq!(b, t.powi(2) / (x().powi(2) + y().powi(2)));
        let neg = (-x() - y()).recip();
        assert_eq!(neg, -(x() + y()).recip());
    }

    #[test]
    fn positive_symbols_distribute_fractional_powers() {
        let k = Expr::sym(Symbol::k());
        let e = (k.powi(2) * x()).sqrt();
        assert_eq!(e, &k * x().sqrt());
        let k2 = Expr::sym(Symbol::positive_param("k2"));
        assert_eq!((&k * &k2).pow(rat(1, 3)), k.pow(rat(1, 3)) * k2.pow(rat(1, 3)));
    }

    #[test]
    fn normalize_is_idempotent_on_samples() {
        let exprs = [
            x() / (x() + y()) + y().powi(2) * 3,
            (x() * 2 + 4).recip() * (x() + 2),
            (x().powi(2) + y().powi(2)).pow(rat(-3, 2)) * x(),
        ];
        for e in exprs {
            let n = e.normalize();
            assert_eq!(n, e);
            assert_eq!(n.normalize(), n);
        }
    }

    #[test]
    fn expand_distributes() {
        let e = ((x() + y()) * (x() - y())).expand();
        assert_eq!(e, x().powi(2) - y().powi(2));
        let e = (x() + 1).powi(2).expand();
        assert_eq!(e, x().powi(2) + x() * 2 + 1);
    }
}
