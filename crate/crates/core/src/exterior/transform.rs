use std::collections::BTreeMap;

use crate::expr::{Expr, Rational, Symbol, Var};

/// What family a transform belongs to, when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransformKind {
    Scaling {
        alpha_x: Rational,
        alpha_t: Rational,
        k: Symbol,
    },
    Rotation(Var),
    TimeShift(Symbol),
    General,
}

/// A finite point transformation given as a substitution map on the core
/// variables (and optionally on ν, τ), together with its group parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTransform {
    name: String,
    map: BTreeMap<Symbol, Expr>,
    params: Vec<Symbol>,
    kind: TransformKind,
}

impl FiniteTransform {
    pub fn new(name: &str, map: BTreeMap<Symbol, Expr>, params: Vec<Symbol>) -> FiniteTransform {
        let map = map
            .into_iter()
            .filter(|(s, e)| e.as_symbol() != Some(s))
            .collect();
        FiniteTransform {
            name: name.to_string(),
            map,
            params,
            kind: TransformKind::General,
        }
    }

    pub fn with_kind(mut self, kind: TransformKind) -> FiniteTransform {
        self.kind = kind;
        self
    }

    pub fn kind(&self) -> &TransformKind {
        &self.kind
    }

    pub fn identity() -> FiniteTransform {
        FiniteTransform::new("identity", BTreeMap::new(), Vec::new())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn map(&self) -> &BTreeMap<Symbol, Expr> {
        &self.map
    }

    /// Image of a core variable.
    pub fn image(&self, v: Var) -> Expr {
        self.image_of(&v.symbol())
    }

    pub fn image_of(&self, s: &Symbol) -> Expr {
        self.map.get(s).cloned().unwrap_or_else(|| Expr::sym(s.clone()))
    }

    /// Substitutes the transform into `e`.
    pub fn apply(&self, e: &Expr) -> Expr {
        e.subs(&self.map)
    }

    /// Transform whose action is `self` followed by `next`.
    pub fn then(&self, next: &FiniteTransform) -> FiniteTransform {
        let mut map: BTreeMap<Symbol, Expr> = self
            .map
            .iter()
            .map(|(s, e)| (s.clone(), next.apply(e)))
            .collect();
        for (s, e) in &next.map {
            map.entry(s.clone()).or_insert_with(|| e.clone());
        }
        let mut params = self.params.clone();
        for p in &next.params {
            if !params.contains(p) {
                params.push(p.clone());
            }
        }
        FiniteTransform::new(&format!("{}*{}", self.name, next.name), map, params)
    }

    /// Binds parameters to values (symbolic or numeric).
    pub fn bind(&self, values: &BTreeMap<Symbol, Expr>) -> FiniteTransform {
        let map = self.map.iter().map(|(s, e)| (s.clone(), e.subs(values))).collect();
        let params = self
            .params
            .iter()
            .filter(|p| !values.contains_key(p))
            .cloned()
            .collect();
        FiniteTransform::new(&self.name, map, params)
    }

    /// True when every image is structurally its own variable.
    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn binding_and_composition() {
        let t = Symbol::new("t");
        let tau = Symbol::tau();
        let mut m = BTreeMap::new();
        m.insert(t.clone(), parse("t + tau").unwrap());
        let shift = FiniteTransform::new("tshift", m, vec![tau.clone()]);
        let mut zero = BTreeMap::new();
        zero.insert(tau.clone(), Expr::zero());
        assert!(shift.bind(&zero).is_identity());
        let twice = shift.then(&shift);
        assert_eq!(twice.image(Var::T), parse("t + 2*tau").unwrap());
    }
}
