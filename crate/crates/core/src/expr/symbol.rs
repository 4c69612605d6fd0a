use std::fmt;
use std::sync::Arc;

/// Role a symbol plays in the workspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum SymbolKind {
    Independent,
    Dependent,
    Parameter,
    /// Auto-declared or helper symbol with no fixed physical role.
    Free,
}

/// The eight coordinates of the jet-free variable space, in canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub enum Var {
    X,
    Y,
    Z,
    T,
    U,
    V,
    W,
    P,
}

impl Var {
    pub const ALL: [Var; 8] = [
        Var::X,
        Var::Y,
        Var::Z,
        Var::T,
        Var::U,
        Var::V,
        Var::W,
        Var::P,
    ];
    pub const SPACE: [Var; 3] = [Var::X, Var::Y, Var::Z];
    pub const VELOCITY: [Var; 3] = [Var::U, Var::V, Var::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Var> {
        Var::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        CORE_NAMES[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Var> {
        CORE_NAMES.iter().position(|n| *n == name).map(|i| Var::ALL[i])
    }

    pub fn symbol(self) -> Symbol {
        Symbol::new(self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const CORE_NAMES: [&str; 8] = ["x", "y", "z", "t", "u", "v", "w", "p"];

/// Reserved parameters. `cos_theta`/`sin_theta` carry finite rotations.
const PARAM_NAMES: [&str; 7] = [
    "nu",
    "tau",
    "k",
    "alpha_x",
    "alpha_t",
    "cos_theta",
    "sin_theta",
];

/// Parameters that are strictly positive by construction (0 < k, ν > 0, τ > 0).
const POSITIVE_PARAMS: [&str; 3] = ["nu", "tau", "k"];

pub const COS_THETA: &str = "cos_theta";
pub const SIN_THETA: &str = "sin_theta";

/// A named scalar symbol. Ordering puts the eight core variables first in
/// canonical order, then reserved parameters, then everything else by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    rank: u8,
    name: Arc<str>,
    kind: SymbolKind,
    positive: bool,
}

impl Symbol {
    /// Symbol with the kind implied by its name; unreserved names are `Free`.
    pub fn new(name: &str) -> Symbol {
        if let Some(v) = Var::from_name(name) {
            let kind = if v.index() < 4 {
                SymbolKind::Independent
            } else {
                SymbolKind::Dependent
            };
            return Symbol {
                rank: v.index() as u8,
                name: name.into(),
                kind,
                positive: false,
            };
        }
        if let Some(i) = PARAM_NAMES.iter().position(|n| *n == name) {
            return Symbol {
                rank: 10 + i as u8,
                name: name.into(),
                kind: SymbolKind::Parameter,
                positive: POSITIVE_PARAMS.contains(&name),
            };
        }
        Symbol {
            rank: 40,
            name: name.into(),
            kind: SymbolKind::Free,
            positive: false,
        }
    }

    /// An auxiliary parameter known to be strictly positive, e.g. a second
    /// scaling factor `k2` used in group-law checks.
    pub fn positive_param(name: &str) -> Symbol {
        let mut s = Symbol::new(name);
        if s.kind == SymbolKind::Free {
            s.kind = SymbolKind::Parameter;
            s.rank = 30;
        }
        s.positive = true;
        s
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> SymbolKind {
        self.kind
    }

    pub fn is_positive(&self) -> bool {
        self.positive
    }

    pub fn as_var(&self) -> Option<Var> {
        if self.rank < 8 {
            Var::from_index(self.rank as usize)
        } else {
            None
        }
    }

    pub fn is_reserved(name: &str) -> bool {
        Var::from_name(name).is_some() || PARAM_NAMES.contains(&name)
    }

    pub fn nu() -> Symbol {
        Symbol::new("nu")
    }
    pub fn tau() -> Symbol {
        Symbol::new("tau")
    }
    pub fn k() -> Symbol {
        Symbol::new("k")
    }
    pub fn cos_theta() -> Symbol {
        Symbol::new(COS_THETA)
    }
    pub fn sin_theta() -> Symbol {
        Symbol::new(SIN_THETA)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl From<Var> for Symbol {
    fn from(v: Var) -> Symbol {
        v.symbol()
    }
}
