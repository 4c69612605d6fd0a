use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;

use super::{exact_rational_pow, Expr, Node, Rational, Symbol};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no value for symbol `{0}`")]
    MissingSymbol(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative base under fractional power")]
    NegativeBase,
    #[error("no instance registered for function `{0}`")]
    UnknownFunction(String),
    #[error("value is not rational")]
    Irrational,
}

/// Symbol values at one evaluation point.
pub type Point = BTreeMap<Symbol, f64>;

/// Concrete numeric stand-in for an opaque profile function.
pub trait FunctionInstance: Send + Sync {
    /// Value of the partial derivative of the function in the listed slots.
    fn eval(&self, derivs: &[u8], args: &[f64]) -> f64;
}

/// Dense polynomial of total degree at most two.
#[derive(Debug, Clone)]
pub struct PolyInstance {
    c0: f64,
    lin: Vec<f64>,
    /// Symmetric matrix of the quadratic part, value = xᵀ Q x.
    quad: Vec<Vec<f64>>,
}

impl PolyInstance {
    pub fn random<R: Rng>(arity: usize, rng: &mut R) -> PolyInstance {
        let c0 = rng.gen_range(-1.0..1.0);
        let lin = (0..arity).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut quad = vec![vec![0.0; arity]; arity];
        for i in 0..arity {
            for j in i..arity {
                let c: f64 = rng.gen_range(-1.0..1.0);
                if i == j {
                    quad[i][i] = c;
                } else {
                    quad[i][j] = c / 2.0;
                    quad[j][i] = c / 2.0;
                }
            }
        }
        PolyInstance { c0, lin, quad }
    }
}

impl FunctionInstance for PolyInstance {
    fn eval(&self, derivs: &[u8], a: &[f64]) -> f64 {
        let n = self.lin.len();
        match derivs {
            [] => {
                let mut v = self.c0;
                for i in 0..n {
                    v += self.lin[i] * a[i];
                    for j in 0..n {
                        v += self.quad[i][j] * a[i] * a[j];
                    }
                }
                v
            }
            [i] => {
                let i = *i as usize;
                let mut v = self.lin[i];
                for j in 0..n {
                    v += 2.0 * self.quad[i][j] * a[j];
                }
                v
            }
            [i, j] => 2.0 * self.quad[*i as usize][*j as usize],
            _ => 0.0,
        }
    }
}

/// Numeric environment: symbol values plus function instances.
#[derive(Clone, Default)]
pub struct Env {
    pub point: Point,
    pub functions: BTreeMap<String, Arc<dyn FunctionInstance>>,
}

/// Side information gathered while evaluating, used by the zero test.
#[derive(Debug, Clone, Copy)]
pub(crate) struct EvalStats {
    pub max_magnitude: f64,
    pub min_denominator: f64,
    pub min_radicand: f64,
}

impl Default for EvalStats {
    fn default() -> Self {
        EvalStats {
            max_magnitude: 0.0,
            min_denominator: f64::INFINITY,
            min_radicand: f64::INFINITY,
        }
    }
}

impl Env {
    pub fn new(point: Point) -> Env {
        Env {
            point,
            functions: BTreeMap::new(),
        }
    }

    pub fn with_function(mut self, name: &str, f: Arc<dyn FunctionInstance>) -> Env {
        self.functions.insert(name.to_string(), f);
        self
    }

    pub fn set(&mut self, s: Symbol, v: f64) {
        self.point.insert(s, v);
    }
}

impl Expr {
    /// Double-precision value at a point without opaque calls.
    pub fn eval(&self, point: &Point) -> Result<f64, EvalError> {
        let env = Env {
            point: point.clone(),
            functions: BTreeMap::new(),
        };
        self.eval_env(&env)
    }

    pub fn eval_env(&self, env: &Env) -> Result<f64, EvalError> {
        let mut stats = EvalStats::default();
        self.eval_tracked(env, &mut stats)
    }

    pub(crate) fn eval_tracked(&self, env: &Env, st: &mut EvalStats) -> Result<f64, EvalError> {
        let v = match self.node() {
            Node::Num(r) => r.to_f64().unwrap_or(f64::NAN),
            Node::Sym(s) => *env
                .point
                .get(s)
                .ok_or_else(|| EvalError::MissingSymbol(s.name().to_string()))?,
            Node::Add(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += t.eval_tracked(env, st)?;
                }
                acc
            }
            Node::Mul(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= f.eval_tracked(env, st)?;
                }
                acc
            }
            Node::Pow(b, e) => {
                let bv = b.eval_tracked(env, st)?;
                pow_f64(bv, e, st)?
            }
            Node::Call(f, args) => {
                let mut av = Vec::with_capacity(args.len());
                for a in args {
                    av.push(a.eval_tracked(env, st)?);
                }
                let inst = env
                    .functions
                    .get(f.name())
                    .ok_or_else(|| EvalError::UnknownFunction(f.name().to_string()))?;
                inst.eval(f.derivs(), &av)
            }
        };
        st.max_magnitude = st.max_magnitude.max(v.abs());
        Ok(v)
    }

    /// Exact value at a rational point; fails on irrational roots.
    pub fn eval_exact(&self, point: &BTreeMap<Symbol, Rational>) -> Result<Rational, EvalError> {
        match self.node() {
            Node::Num(r) => Ok(r.clone()),
            Node::Sym(s) => point
                .get(s)
                .cloned()
                .ok_or_else(|| EvalError::MissingSymbol(s.name().to_string())),
            Node::Add(ts) => {
                let mut acc = Rational::zero();
                for t in ts {
                    acc += t.eval_exact(point)?;
                }
                Ok(acc)
            }
            Node::Mul(fs) => {
                let mut acc = Rational::from_integer(1.into());
                for f in fs {
                    acc *= f.eval_exact(point)?;
                }
                Ok(acc)
            }
            Node::Pow(b, e) => {
                let bv = b.eval_exact(point)?;
                if bv.is_zero() && e.is_negative() {
                    return Err(EvalError::DivisionByZero);
                }
                if !e.is_integer() && bv.is_negative() {
                    return Err(EvalError::NegativeBase);
                }
                exact_rational_pow(&bv, e).ok_or(EvalError::Irrational)
            }
            Node::Call(f, _) => Err(EvalError::UnknownFunction(f.name().to_string())),
        }
    }
}

pub(crate) fn pow_f64(bv: f64, e: &Rational, st: &mut EvalStats) -> Result<f64, EvalError> {
    if e.is_negative() {
        st.min_denominator = st.min_denominator.min(bv.abs());
        if bv == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
    }
    if e.is_integer() {
        let n = e.to_integer().to_i32().unwrap_or(i32::MAX);
        return Ok(bv.powi(n));
    }
    st.min_radicand = st.min_radicand.min(bv);
    if bv < 0.0 {
        return Err(EvalError::NegativeBase);
    }
    if *e.denom() == 2.into() {
        let n = e.numer().to_i32().unwrap_or(i32::MAX);
        return Ok(bv.sqrt().powi(n));
    }
    Ok(bv.powf(e.to_f64().unwrap_or(f64::NAN)))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, Var};

    fn pt(vals: &[(&str, f64)]) -> Point {
        vals.iter().map(|(n, v)| (Symbol::new(n), *v)).collect()
    }

    #[test]
    fn euler_number_value() {
        let e = parse("p/(u^2+v^2+w^2)").unwrap();
        let v = e
            .eval(&pt(&[("u", 1.0), ("v", 0.0), ("w", 0.0), ("p", 2.0)]))
            .unwrap();
        assert_eq!(v, 2.0);
    }

    #[test]
    fn rational_in_time() {
        let e = parse("x/(t+tau)").unwrap();
        assert_eq!(e.eval(&pt(&[("x", 3.0), ("t", 1.0), ("tau", 2.0)])).unwrap(), 1.0);
    }

    #[test]
    fn pythagorean_root() {
        let e = parse("(u^2+v^2+w^2)^(1/2)").unwrap();
        assert_eq!(e.eval(&pt(&[("u", 3.0), ("v", 4.0), ("w", 0.0)])).unwrap(), 5.0);
    }

    #[test]
    fn errors_are_reported() {
        let e = parse("x/y").unwrap();
        assert_eq!(e.eval(&pt(&[("x", 1.0)])), Err(EvalError::MissingSymbol("y".into())));
        assert_eq!(e.eval(&pt(&[("x", 1.0), ("y", 0.0)])), Err(EvalError::DivisionByZero));
        let r = Expr::var(Var::X).sqrt();
        assert_eq!(r.eval(&pt(&[("x", -1.0)])), Err(EvalError::NegativeBase));
    }

    #[test]
    fn exact_evaluation() {
        let e = parse("(u^2+v^2)^(1/2)/p").unwrap();
        let point: BTreeMap<Symbol, Rational> = [("u", 3), ("v", 4), ("p", 10)]
            .iter()
            .map(|(n, v)| (Symbol::new(n), Rational::from_integer((*v).into())))
            .collect();
        assert_eq!(e.eval_exact(&point).unwrap(), crate::expr::rat(1, 2));
    }

    #[test]
    fn poly_instance_derivatives_match_differences() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        let f = PolyInstance::random(2, &mut rng);
        let a = [0.7, -1.3];
        let h = 1e-6;
        let num = (f.eval(&[], &[a[0] + h, a[1]]) - f.eval(&[], &[a[0] - h, a[1]])) / (2.0 * h);
        assert!((num - f.eval(&[0], &a)).abs() < 1e-6);
        let num = (f.eval(&[0], &[a[0], a[1] + h]) - f.eval(&[0], &[a[0], a[1] - h])) / (2.0 * h);
        assert!((num - f.eval(&[0, 1], &a)).abs() < 1e-6);
    }
}
