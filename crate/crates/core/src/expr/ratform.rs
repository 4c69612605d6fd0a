//! Expanded rational normal form used as the structural route of the zero
//! test.
//!
//! An expression becomes `numerator / Π factor^m` where the numerator is a
//! Laurent polynomial in atoms (symbols, calls, fractional powers) and each
//! factor is the expanded polynomial of a sum that appeared with a negative
//! exponent. A fractional power of a sum `B^(n+f)` with `0 < f < 1` is split
//! into `B^n` and a root atom `B^f`; products of root atoms that reach a full
//! power of `B` fold back into the expanded polynomial. `sin_theta^2` is
//! rewritten as `1 - cos_theta^2`.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{int, Expr, Node, Rational, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Sym(Symbol),
    Call(Expr),
    /// Fractional power of an expandable sum; exponent kept in (0, 1).
    Root(Expr),
    /// Any other base, carried with its raw exponent.
    Opaque(Expr),
}

type Mono = BTreeMap<Atom, Rational>;
type Poly = BTreeMap<Mono, Rational>;

#[derive(Clone, Debug)]
struct RatForm {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

struct TooLarge;

const MAX_TERMS: usize = 20_000;

/// True when the expanded rational normal form of `e` has a zero numerator.
/// A `false` answer is inconclusive.
pub fn structurally_zero(e: &Expr) -> bool {
    if e.is_zero_literal() {
        return true;
    }
    let mut cx = Context::default();
    match cx.form(e) {
        Ok(r) => r.num.is_empty(),
        Err(TooLarge) => false,
    }
}

#[derive(Default)]
struct Context {
    cache: HashMap<Expr, Rc<RatForm>>,
    /// Expanded polynomial of each root base.
    root_base: HashMap<Expr, Rc<Poly>>,
}

fn constant(c: Rational) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert(Mono::new(), c);
    }
    p
}

fn atom_poly(a: Atom, e: Rational) -> Poly {
    let mut m = Mono::new();
    m.insert(a, e);
    let mut p = Poly::new();
    p.insert(m, Rational::one());
    p
}

fn add_into(acc: &mut Poly, m: Mono, c: Rational) {
    use std::collections::btree_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(v) => {
            if !c.is_zero() {
                v.insert(c);
            }
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (m, c) in b {
        add_into(&mut out, m.clone(), c.clone());
    }
    out
}

fn check(p: &Poly) -> Result<(), TooLarge> {
    if p.len() > MAX_TERMS {
        Err(TooLarge)
    } else {
        Ok(())
    }
}

impl Context {
    fn form(&mut self, e: &Expr) -> Result<Rc<RatForm>, TooLarge> {
        if let Some(r) = self.cache.get(e) {
            return Ok(r.clone());
        }
        let r = Rc::new(self.build(e)?);
        self.cache.insert(e.clone(), r.clone());
        Ok(r)
    }

    fn build(&mut self, e: &Expr) -> Result<RatForm, TooLarge> {
        let plain = |num: Poly| RatForm {
            num,
            den: BTreeMap::new(),
        };
        Ok(match e.node() {
            Node::Num(c) => plain(constant(c.clone())),
            Node::Sym(s) => plain(self.reduce_poly(atom_poly(Atom::Sym(s.clone()), int(1)))?),
            Node::Call(..) => plain(atom_poly(Atom::Call(e.clone()), int(1))),
            Node::Add(ts) => {
                let mut acc = plain(Poly::new());
                for t in ts {
                    let f = self.form(t)?;
                    acc = self.add(&acc, &f)?;
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = plain(constant(int(1)));
                for f in fs {
                    let g = self.form(f)?;
                    acc = self.mul(&acc, &g)?;
                }
                acc
            }
            Node::Pow(b, ex) => self.power(b, ex)?,
        })
    }

    fn power(&mut self, b: &Expr, ex: &Rational) -> Result<RatForm, TooLarge> {
        let plain = |num: Poly| RatForm {
            num,
            den: BTreeMap::new(),
        };
        match b.node() {
            Node::Sym(s) => Ok(plain(self.reduce_poly(atom_poly(Atom::Sym(s.clone()), ex.clone()))?)),
            Node::Call(..) => Ok(plain(atom_poly(Atom::Call(b.clone()), ex.clone()))),
            Node::Add(_) => {
                let base = self.form(b)?;
                if ex.is_integer() {
                    let n = ex.to_integer().to_i64().unwrap_or(0);
                    return self.int_power(&base, n);
                }
                if !base.den.is_empty() {
                    return Ok(plain(atom_poly(Atom::Opaque(b.clone()), ex.clone())));
                }
                let n = ex.floor();
                let f = ex - &n;
                self.root_base
                    .entry(b.clone())
                    .or_insert_with(|| Rc::new(base.num.clone()));
                let root = plain(atom_poly(Atom::Root(b.clone()), f));
                let n = n.to_integer().to_i64().unwrap_or(0);
                let whole = self.int_power(&base, n)?;
                self.mul(&whole, &root)
            }
            _ => Ok(plain(atom_poly(Atom::Opaque(b.clone()), ex.clone()))),
        }
    }

    fn int_power(&mut self, base: &RatForm, n: i64) -> Result<RatForm, TooLarge> {
        if n == 0 {
            return Ok(RatForm {
                num: constant(int(1)),
                den: BTreeMap::new(),
            });
        }
        if n > 0 {
            let mut acc = RatForm {
                num: constant(int(1)),
                den: BTreeMap::new(),
            };
            for _ in 0..n {
                acc = self.mul(&acc, base)?;
            }
            return Ok(acc);
        }
        // Reciprocal: a single-term numerator inverts monomially, otherwise
        // it becomes a denominator factor.
        let m = (-n) as u32;
        let mut num = constant(int(1));
        for (f, k) in &base.den {
            for _ in 0..(k * m) {
                num = self.poly_mul(&num, f)?;
            }
        }
        let mut den = BTreeMap::new();
        if base.num.len() == 1 {
            let (mono, c) = base.num.iter().next().unwrap();
            let inv: Mono = mono.iter().map(|(a, e)| (a.clone(), -e * int(m as i64))).collect();
            let mut p = Poly::new();
            p.insert(inv, c.recip().pow(m as i32));
            num = self.poly_mul(&num, &p)?;
        } else if base.num.is_empty() {
            return Err(TooLarge);
        } else {
            let (key, scale) = primitive(&base.num);
            num = self.poly_mul(&num, &constant(scale.recip().pow(m as i32)))?;
            den.insert(key, m);
        }
        Ok(RatForm { num, den })
    }

    fn add(&mut self, a: &RatForm, b: &RatForm) -> Result<RatForm, TooLarge> {
        if a.num.is_empty() {
            return Ok(b.clone());
        }
        if b.num.is_empty() {
            return Ok(a.clone());
        }
        let mut den = a.den.clone();
        for (f, k) in &b.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
        let na = self.lift(&a.num, &a.den, &den)?;
        let nb = self.lift(&b.num, &b.den, &den)?;
        let num = poly_add(&na, &nb);
        check(&num)?;
        Ok(RatForm { num, den })
    }

    fn lift(
        &mut self,
        num: &Poly,
        have: &BTreeMap<Poly, u32>,
        want: &BTreeMap<Poly, u32>,
    ) -> Result<Poly, TooLarge> {
        let mut out = num.clone();
        for (f, k) in want {
            let missing = k - have.get(f).copied().unwrap_or(0);
            for _ in 0..missing {
                out = self.poly_mul(&out, f)?;
            }
        }
        Ok(out)
    }

    fn mul(&mut self, a: &RatForm, b: &RatForm) -> Result<RatForm, TooLarge> {
        let num = self.poly_mul(&a.num, &b.num)?;
        if num.is_empty() {
            return Ok(RatForm {
                num,
                den: BTreeMap::new(),
            });
        }
        let mut den = a.den.clone();
        for (f, k) in &b.den {
            *den.entry(f.clone()).or_insert(0) += k;
        }
        Ok(RatForm { num, den })
    }

    fn poly_mul(&mut self, a: &Poly, b: &Poly) -> Result<Poly, TooLarge> {
        if a.len().saturating_mul(b.len()) > MAX_TERMS * 8 {
            return Err(TooLarge);
        }
        let mut out = Poly::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let mut m = ma.clone();
                for (at, e) in mb {
                    let slot = m.entry(at.clone()).or_insert_with(Rational::zero);
                    *slot += e;
                    if slot.is_zero() {
                        m.remove(at);
                    }
                }
                for (m2, c2) in self.reduce_mono(m, ca * cb)? {
                    add_into(&mut out, m2, c2);
                }
            }
        }
        check(&out)?;
        Ok(out)
    }

    fn reduce_poly(&mut self, p: Poly) -> Result<Poly, TooLarge> {
        let mut out = Poly::new();
        for (m, c) in p {
            for (m2, c2) in self.reduce_mono(m, c)? {
                add_into(&mut out, m2, c2);
            }
        }
        Ok(out)
    }

    /// Folds full powers of root atoms and squares of `sin_theta`.
    fn reduce_mono(&mut self, mut m: Mono, c: Rational) -> Result<Vec<(Mono, Rational)>, TooLarge> {
        let full_root = m.iter().find_map(|(a, e)| match a {
            Atom::Root(b) if *e >= Rational::one() => Some(b.clone()),
            _ => None,
        });
        if let Some(b) = full_root {
            let key = Atom::Root(b.clone());
            let e = m[&key].clone() - int(1);
            if e.is_zero() {
                m.remove(&key);
            } else {
                m.insert(key, e);
            }
            let base = self.root_base[&b].clone();
            let mut single = Poly::new();
            single.insert(m, c);
            return Ok(self.poly_mul(&single, &base)?.into_iter().collect());
        }
        let sin = Atom::Sym(Symbol::sin_theta());
        if let Some(e) = m.get(&sin) {
            if *e >= int(2) {
                let rest = e - int(2);
                if rest.is_zero() {
                    m.remove(&sin);
                } else {
                    m.insert(sin, rest);
                }
                let mut with_cos = m.clone();
                let cos = Atom::Sym(Symbol::cos_theta());
                let ce = with_cos.entry(cos.clone()).or_insert_with(Rational::zero);
                *ce += int(2);
                if ce.is_zero() {
                    with_cos.remove(&cos);
                }
                let mut out = self.reduce_mono(m, c.clone())?;
                out.extend(self.reduce_mono(with_cos, -c)?);
                return Ok(out);
            }
        }
        Ok(vec![(m, c)])
    }
}

/// Scales a polynomial so its leading coefficient is one; returns the scaled
/// polynomial and the factor removed.
fn primitive(p: &Poly) -> (Poly, Rational) {
    let lead = p.values().next().cloned().unwrap_or_else(|| int(1));
    let mut g = num_bigint::BigInt::zero();
    let mut l = num_bigint::BigInt::one();
    for c in p.values() {
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    let mut scale = Rational::new(g, l);
    if lead.is_negative() {
        scale = -scale;
    }
    let out = p.iter().map(|(m, c)| (m.clone(), c / &scale)).collect();
    (out, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn zero(text: &str) -> bool {
        structurally_zero(&parse(text).unwrap())
    }

    #[test]
    fn rational_identities() {
        assert!(zero("(u^2+v^2) - (v^2+u^2)"));
        assert!(zero("1/(x+y) + 1/(x-y) - 2*x/(x^2-y^2)"));
        assert!(zero("(x+y)^2 - x^2 - 2*x*y - y^2"));
        assert!(zero("x/(t+tau)^2 - x*(t+tau)^(-2)"));
        assert!(!zero("p - p*1000001/1000000"));
        assert!(!zero("x + 1"));
    }

    #[test]
    fn roots_fold() {
        assert!(zero("(u^2+v^2+w^2)^(1/2)*(u^2+v^2+w^2)^(1/2) - u^2 - v^2 - w^2"));
        assert!(zero("(u^2+v^2+w^2)^(-3/2)*(u^2+v^2+w^2) - (u^2+v^2+w^2)^(-1/2)"));
        assert!(zero("u*(u^2+v^2)^(-1/2) - u/(u^2+v^2)^(1/2)"));
    }

    #[test]
    fn laurent_and_calls() {
        assert!(zero("t^(1/2)*t^(1/2) - t"));
        assert!(zero("F(y/x)*x - x*F(y/x)"));
        assert!(zero("(x*y + x*z)*F(y) - x*(y+z)*F(y)"));
    }

    #[test]
    fn trig_rewrite() {
        assert!(zero("cos_theta^2 + sin_theta^2 - 1"));
        assert!(zero("(u*cos_theta - v*sin_theta)^2 + (v*cos_theta + u*sin_theta)^2 - u^2 - v^2"));
    }
}
