use std::collections::BTreeMap;

use super::{int, Expr, Func, Node, Symbol};

impl Expr {
    /// Exact partial derivative with respect to `s`. Opaque calls follow the
    /// chain rule and produce derivative heads `D[i]F` on the same arguments.
    pub fn diff(&self, s: &Symbol) -> Expr {
        if !self.contains_symbol(s) {
            return Expr::zero();
        }
        match self.node() {
            Node::Num(_) => Expr::zero(),
            Node::Sym(t) => {
                if t == s {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(ts) => Expr::sum(ts.iter().map(|t| t.diff(s))),
            Node::Mul(fs) => {
                let mut terms = Vec::new();
                for i in 0..fs.len() {
                    let di = fs[i].diff(s);
                    if di.is_zero_literal() {
                        continue;
                    }
                    let mut parts = Vec::with_capacity(fs.len());
                    parts.push(di);
                    for (j, f) in fs.iter().enumerate() {
                        if j != i {
                            parts.push(f.clone());
                        }
                    }
                    terms.push(Expr::product(parts));
                }
                Expr::sum(terms)
            }
            Node::Pow(b, e) => {
                let db = b.diff(s);
                Expr::product([
                    Expr::rational(e.clone()),
                    b.pow(e - int(1)),
                    db,
                ])
            }
            Node::Call(f, args) => {
                let mut terms = Vec::new();
                for (i, a) in args.iter().enumerate() {
                    let da = a.diff(s);
                    if da.is_zero_literal() {
                        continue;
                    }
                    terms.push(Expr::product([
                        da,
                        Expr::call_func(f.differentiated(i), args.clone()),
                    ]));
                }
                Expr::sum(terms)
            }
        }
    }

    /// Simultaneous substitution of symbols.
    pub fn subs(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        if map.is_empty() {
            return self.clone();
        }
        self.subs_inner(map)
    }

    fn subs_inner(&self, map: &BTreeMap<Symbol, Expr>) -> Expr {
        match self.node() {
            Node::Num(_) => self.clone(),
            Node::Sym(s) => map.get(s).cloned().unwrap_or_else(|| self.clone()),
            Node::Add(ts) => Expr::sum(ts.iter().map(|t| t.subs_inner(map))),
            Node::Mul(fs) => Expr::product(fs.iter().map(|f| f.subs_inner(map))),
            Node::Pow(b, e) => b.subs_inner(map).pow(e.clone()),
            Node::Call(f, args) => {
                Expr::call_func(f.clone(), args.iter().map(|a| a.subs_inner(map)).collect())
            }
        }
    }

    /// Single-symbol substitution.
    pub fn subs1(&self, s: &Symbol, value: &Expr) -> Expr {
        let mut m = BTreeMap::new();
        m.insert(s.clone(), value.clone());
        self.subs(&m)
    }

    /// Replaces every call of `name` (and its derivatives) by `template`,
    /// an expression in the placeholder symbols `_1, _2, ...`.
    pub fn subs_function(&self, name: &str, template: &Expr) -> Expr {
        match self.node() {
            Node::Num(_) | Node::Sym(_) => self.clone(),
            Node::Add(ts) => Expr::sum(ts.iter().map(|t| t.subs_function(name, template))),
            Node::Mul(fs) => Expr::product(fs.iter().map(|f| f.subs_function(name, template))),
            Node::Pow(b, e) => b.subs_function(name, template).pow(e.clone()),
            Node::Call(f, args) => {
                let args: Vec<Expr> = args.iter().map(|a| a.subs_function(name, template)).collect();
                if f.name() != name {
                    return Expr::call_func(f.clone(), args);
                }
                let mut body = template.clone();
                for &d in f.derivs() {
                    body = body.diff(&placeholder(d as usize));
                }
                let map: BTreeMap<Symbol, Expr> = args
                    .into_iter()
                    .enumerate()
                    .map(|(i, a)| (placeholder(i), a))
                    .collect();
                body.subs(&map)
            }
        }
    }
}

/// Placeholder symbol `_{i+1}` for argument slot `i` of a profile template.
pub fn placeholder(slot: usize) -> Symbol {
    Symbol::new(&format!("_{}", slot + 1))
}

impl Func {
    pub fn is_underived(&self) -> bool {
        self.derivs().is_empty()
    }
}
