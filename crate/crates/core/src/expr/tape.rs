use std::collections::HashMap;

use num_traits::ToPrimitive;

use super::eval::{pow_f64, EvalStats};
use super::{EvalError, Expr, Node, Rational, Symbol};

#[derive(Debug, Clone)]
enum Op {
    Const(f64),
    Input(usize),
    Add(Vec<usize>),
    Mul(Vec<usize>),
    Pow(usize, Rational),
}

/// Flat evaluation program for a batch of call-free expressions with shared
/// subexpressions evaluated once.
#[derive(Debug, Clone)]
pub struct Tape {
    inputs: Vec<Symbol>,
    ops: Vec<Op>,
    outputs: Vec<usize>,
}

impl Tape {
    /// Compiles `exprs` over the given input symbols. Panics if an expression
    /// uses a symbol outside `inputs` or contains an opaque call.
    pub fn compile(inputs: &[Symbol], exprs: &[Expr]) -> Tape {
        let mut b = Builder {
            inputs,
            ops: Vec::new(),
            seen: HashMap::new(),
        };
        let outputs = exprs.iter().map(|e| b.emit(e)).collect();
        Tape {
            inputs: inputs.to_vec(),
            ops: b.ops,
            outputs,
        }
    }

    pub fn inputs(&self) -> &[Symbol] {
        &self.inputs
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    /// Values of all outputs at `values` (aligned with `inputs`).
    pub fn eval(&self, values: &[f64]) -> Result<Vec<f64>, EvalError> {
        let mut slots = vec![0.0; self.ops.len()];
        let mut st = EvalStats::default();
        for (i, op) in self.ops.iter().enumerate() {
            slots[i] = match op {
                Op::Const(c) => *c,
                Op::Input(k) => values[*k],
                Op::Add(xs) => xs.iter().map(|&j| slots[j]).sum(),
                Op::Mul(xs) => xs.iter().map(|&j| slots[j]).product(),
                Op::Pow(j, e) => pow_f64(slots[*j], e, &mut st)?,
            };
        }
        Ok(self.outputs.iter().map(|&o| slots[o]).collect())
    }
}

struct Builder<'a> {
    inputs: &'a [Symbol],
    ops: Vec<Op>,
    seen: HashMap<Expr, usize>,
}

impl Builder<'_> {
    fn emit(&mut self, e: &Expr) -> usize {
        if let Some(&i) = self.seen.get(e) {
            return i;
        }
        let op = match e.node() {
            Node::Num(r) => Op::Const(r.to_f64().unwrap_or(f64::NAN)),
            Node::Sym(s) => Op::Input(
                self.inputs
                    .iter()
                    .position(|t| t == s)
                    .unwrap_or_else(|| panic!("symbol `{s}` is not a tape input")),
            ),
            Node::Add(ts) => Op::Add(ts.iter().map(|t| self.emit(t)).collect()),
            Node::Mul(fs) => Op::Mul(fs.iter().map(|f| self.emit(f)).collect()),
            Node::Pow(b, ex) => Op::Pow(self.emit(b), ex.clone()),
            Node::Call(f, _) => panic!("opaque call `{}` cannot be compiled", f.name()),
        };
        self.ops.push(op);
        let i = self.ops.len() - 1;
        self.seen.insert(e.clone(), i);
        i
    }
}
