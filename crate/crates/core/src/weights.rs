//! Isobaric weights, homogeneity degrees and the criticality classification
//! of scaling exponents.

use std::fmt;
use std::ops;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::expr::{int, rat, Expr, Node, Rational, Symbol, Var};

/// Weight `a·α_x + b·α_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    pub a: Rational,
    pub b: Rational,
}

impl Weight {
    pub fn new(a: Rational, b: Rational) -> Weight {
        Weight { a, b }
    }

    pub fn ints(a: i64, b: i64) -> Weight {
        Weight::new(int(a), int(b))
    }

    pub fn zero() -> Weight {
        Weight::ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exponent of the scaling factor for the given exponents.
    pub fn evaluate(&self, s: &ScalingExponents) -> Rational {
        &self.a * &s.alpha_x + &self.b * &s.alpha_t
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight::new(&self.a * c, &self.b * c)
    }
}

impl ops::Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl ops::Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        &self + &o
    }
}

impl ops::Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(-self.a, -self.b)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.a.to_string(), self.b.to_string()].serialize(s)
    }
}

/// Weight of a symbol: x, y, z ↦ (1,0); t, τ ↦ (0,1); u, v, w ↦ (1,−1);
/// p ↦ (2,−2); ν ↦ (2,−1); everything else (0,0).
pub fn symbol_weight(s: &Symbol) -> Weight {
    match s.as_var() {
        Some(Var::X | Var::Y | Var::Z) => Weight::ints(1, 0),
        Some(Var::T) => Weight::ints(0, 1),
        Some(Var::U | Var::V | Var::W) => Weight::ints(1, -1),
        Some(Var::P) => Weight::ints(2, -2),
        None => match s.name() {
            "nu" => Weight::ints(2, -1),
            "tau" => Weight::ints(0, 1),
            _ => Weight::zero(),
        },
    }
}

/// Weight of a core variable (and of its differential).
pub fn var_weight(v: Var) -> Weight {
    symbol_weight(&v.symbol())
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("non-isobaric argument `{arg}` of `{func}`")]
    NonIsobaricArgument { func: String, arg: String },
    #[error("degenerate scaling exponents (0, 0)")]
    Degenerate,
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// Isobaric weight of `e`, `None` if it mixes weights.
pub fn weight_of(e: &Expr) -> Result<Option<Weight>, WeightError> {
    graded(e, &symbol_weight, true)
}

/// Degree of homogeneity in `vars`: `e(λ·vars) = λ^d e`.
pub fn homogeneity_degree(e: &Expr, vars: &[Symbol]) -> Option<Rational> {
    let grade = |s: &Symbol| {
        if vars.contains(s) {
            Weight::ints(1, 0)
        } else {
            Weight::zero()
        }
    };
    graded(e, &grade, false).ok().flatten().map(|w| w.a)
}

fn graded(e: &Expr, grade: &dyn Fn(&Symbol) -> Weight, strict: bool) -> Result<Option<Weight>, WeightError> {
    Ok(match e.node() {
        Node::Num(_) => Some(Weight::zero()),
        Node::Sym(s) => Some(grade(s)),
        Node::Add(ts) => {
            let mut w: Option<Weight> = None;
            for t in ts {
                match graded(t, grade, strict)? {
                    None => return Ok(None),
                    Some(tw) => match &w {
                        None => w = Some(tw),
                        Some(prev) if *prev == tw => {}
                        Some(_) => return Ok(None),
                    },
                }
            }
            w
        }
        Node::Mul(fs) => {
            let mut w = Weight::zero();
            for f in fs {
                match graded(f, grade, strict)? {
                    None => return Ok(None),
                    Some(fw) => w = w + fw,
                }
            }
            Some(w)
        }
        Node::Pow(b, ex) => graded(b, grade, strict)?.map(|w| w.scale(ex)),
        Node::Call(f, args) => {
            for a in args {
                let ok = matches!(graded(a, grade, strict)?, Some(w) if w.is_zero());
                if !ok {
                    if strict {
                        return Err(WeightError::NonIsobaricArgument {
                            func: f.name().to_string(),
                            arg: a.to_string(),
                        });
                    }
                    return Ok(None);
                }
            }
            Some(Weight::zero())
        }
    })
}

/// Scaling exponents `(α_x, α_t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ScalingExponents {
    pub alpha_x: Rational,
    pub alpha_t: Rational,
}

impl ScalingExponents {
    pub fn new(alpha_x: Rational, alpha_t: Rational) -> ScalingExponents {
        ScalingExponents { alpha_x, alpha_t }
    }

    pub fn ints(ax: i64, at: i64) -> ScalingExponents {
        ScalingExponents::new(int(ax), int(at))
    }

    pub fn classical() -> ScalingExponents {
        ScalingExponents::ints(1, 2)
    }

    pub fn is_degenerate(&self) -> bool {
        self.alpha_x.is_zero() && self.alpha_t.is_zero()
    }

    /// Velocity exponent `α_x − α_t`.
    pub fn velocity_exponent(&self) -> Rational {
        &self.alpha_x - &self.alpha_t
    }
}

impl fmt::Display for ScalingExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(α_x = {}, α_t = {})", self.alpha_x, self.alpha_t)
    }
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a rational.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim().replace('\u{2212}', "-");
    let bad = || format!("not a rational: `{text}`");
    match t.split_once('/') {
        Some((n, d)) => {
            let n = num_bigint::BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = num_bigint::BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{text}`"));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(
            num_bigint::BigInt::from_str(&t).map_err(|_| bad())?,
        )),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Criticality {
    Subcritical,
    Critical,
    Supercritical,
}

impl fmt::Display for Criticality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Criticality::Subcritical => "subcritical",
            Criticality::Critical => "critical",
            Criticality::Supercritical => "supercritical",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalityReport {
    pub verdict: Criticality,
    /// `5α_x − 2α_t`, the exponent of the energy under scaling.
    #[serde(serialize_with = "ser_rational")]
    pub energy_exponent: Rational,
    /// `α_x − α_t`.
    #[serde(serialize_with = "ser_rational")]
    pub velocity_exponent: Rational,
    pub method: &'static str,
    /// Comparison of `|α_x − α_t|` with `|3/2 α_x|`.
    pub severity_verdict: Criticality,
    /// `|α_t/α_x|` against 1/2, reported only when `α_x α_t < 0`.
    pub opposite_sign_verdict: Option<Criticality>,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

pub fn energy_scaling_exponent(s: &ScalingExponents) -> Rational {
    int(5) * &s.alpha_x - int(2) * &s.alpha_t
}

fn compare(lhs: &Rational, rhs: &Rational) -> Criticality {
    match lhs.cmp(rhs) {
        std::cmp::Ordering::Greater => Criticality::Subcritical,
        std::cmp::Ordering::Equal => Criticality::Critical,
        std::cmp::Ordering::Less => Criticality::Supercritical,
    }
}

pub fn classify(s: &ScalingExponents) -> Result<CriticalityReport, WeightError> {
    if s.is_degenerate() {
        return Err(WeightError::Degenerate);
    }
    let energy = energy_scaling_exponent(s);
    let verdict = if energy.is_negative() {
        Criticality::Subcritical
    } else if energy.is_zero() {
        Criticality::Critical
    } else {
        Criticality::Supercritical
    };
    let severity_verdict = compare(&s.velocity_exponent().abs(), &(rat(3, 2) * &s.alpha_x).abs());
    let opposite_sign_verdict = if (&s.alpha_x * &s.alpha_t).is_negative() {
        Some(compare(&(&s.alpha_t / &s.alpha_x).abs(), &rat(1, 2)))
    } else {
        None
    };
    Ok(CriticalityReport {
        verdict,
        energy_exponent: energy,
        velocity_exponent: s.velocity_exponent(),
        method: "inequality-form",
        severity_verdict,
        opposite_sign_verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScenarioReport {
    /// 1–3 for positive exponents, 4–6 for negative ones (sub-, critical,
    /// supercritical in that order); `None` when the signs differ.
    pub scenario: Option<u8>,
    pub smooth_at_zero_possible: bool,
    pub blowup_excluded: bool,
    pub verdict: Criticality,
    /// Exponent of t in the smooth form, `(α_x − α_t)/α_t`.
    #[serde(serialize_with = "ser_rational")]
    pub time_exponent: Rational,
    /// Exponent of x in the smooth form, `(α_x − α_t)/α_x`.
    #[serde(serialize_with = "ser_rational")]
    pub space_exponent: Rational,
}

pub fn smoothness_scenario(s: &ScalingExponents) -> Result<ScenarioReport, WeightError> {
    if s.is_degenerate() {
        return Err(WeightError::Degenerate);
    }
    if s.alpha_x.is_zero() {
        return Err(WeightError::NotApplicable(
            "α_x = 0 leaves (α_x − α_t)/α_x undefined".into(),
        ));
    }
    if s.alpha_t.is_zero() {
        return Err(WeightError::NotApplicable(
            "α_t = 0 leaves (α_x − α_t)/α_t undefined".into(),
        ));
    }
    let verdict = classify(s)?.verdict;
    let time_exponent = s.velocity_exponent() / &s.alpha_t;
    let space_exponent = s.velocity_exponent() / &s.alpha_x;
    let offset = match (s.alpha_x.is_positive(), s.alpha_t.is_positive()) {
        (true, true) => Some(0),
        (false, false) => Some(3),
        _ => None,
    };
    let scenario = offset.map(|o| {
        o + match verdict {
            Criticality::Subcritical => 1,
            Criticality::Critical => 2,
            Criticality::Supercritical => 3,
        }
    });
    Ok(ScenarioReport {
        scenario,
        smooth_at_zero_possible: time_exponent.is_positive() && space_exponent.is_positive(),
        blowup_excluded: scenario == Some(4),
        verdict,
        time_exponent,
        space_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn w(t: &str) -> Option<Weight> {
        weight_of(&parse(t).unwrap()).unwrap()
    }

    #[test]
    fn symbol_weights() {
        assert_eq!(w("u"), Some(Weight::ints(1, -1)));
        assert_eq!(w("nu*t/x^2"), Some(Weight::zero()));
        assert_eq!(w("x + t"), None);
        assert_eq!(w("u^2+v^2+w^2"), Some(Weight::ints(2, -2)));
        assert_eq!(w("p/(u^2+v^2+w^2)"), Some(Weight::zero()));
        assert_eq!(w("3"), Some(Weight::zero()));
    }

    #[test]
    fn calls_need_dimensionless_arguments() {
        assert_eq!(w("x/(t+tau)*F1(y/x, z/x)"), Some(Weight::ints(1, -1)));
        let err = weight_of(&parse("F(x)").unwrap()).unwrap_err();
        assert!(matches!(err, WeightError::NonIsobaricArgument { .. }));
    }

    #[test]
    fn homogeneity() {
        let e = parse("x/(t+tau)*F1(y/x, z/x)").unwrap();
        let space: Vec<Symbol> = ["x", "y", "z"].iter().map(|n| Symbol::new(n)).collect();
        let time = vec![Symbol::new("t"), Symbol::tau()];
        assert_eq!(homogeneity_degree(&e, &space), Some(int(1)));
        assert_eq!(homogeneity_degree(&e, &time), Some(int(-1)));
        assert_eq!(homogeneity_degree(&Expr::num(4), &time), Some(int(0)));
        assert_eq!(homogeneity_degree(&parse("x + 1").unwrap(), &space), None);
    }

    #[test]
    fn energy_exponents() {
        assert_eq!(energy_scaling_exponent(&ScalingExponents::ints(1, 2)), int(1));
        assert_eq!(energy_scaling_exponent(&ScalingExponents::ints(2, 5)), int(0));
        assert_eq!(energy_scaling_exponent(&ScalingExponents::ints(0, 1)), int(-2));
    }

    #[test]
    fn classification_table() {
        let v = |a, b| classify(&ScalingExponents::ints(a, b)).unwrap().verdict;
        assert_eq!(v(1, 2), Criticality::Supercritical);
        assert_eq!(v(-20, -40), Criticality::Subcritical);
        assert_eq!(v(2, 5), Criticality::Critical);
        assert_eq!(v(0, 1), Criticality::Subcritical);
        assert_eq!(classify(&ScalingExponents::ints(0, 0)), Err(WeightError::Degenerate));
        let r = classify(&ScalingExponents::ints(1, 2)).unwrap();
        assert_eq!(r.severity_verdict, Criticality::Supercritical);
        assert_eq!(r.opposite_sign_verdict, None);
        let r = classify(&ScalingExponents::ints(-1, 2)).unwrap();
        assert_eq!(r.opposite_sign_verdict, Some(Criticality::Subcritical));
    }

    #[test]
    fn scenarios() {
        let s = |a, b| smoothness_scenario(&ScalingExponents::ints(a, b)).unwrap();
        let r = s(1, 2);
        assert!(!r.smooth_at_zero_possible);
        assert!(!r.blowup_excluded);
        let r = s(-20, -40);
        assert_eq!(r.scenario, Some(4));
        assert!(r.blowup_excluded);
        let r = s(3, 1);
        assert_eq!(r.scenario, Some(3));
        assert!(r.smooth_at_zero_possible);
        assert!(!r.blowup_excluded);
        assert!(smoothness_scenario(&ScalingExponents::ints(0, 1)).is_err());
        assert_eq!(s(1, -1).scenario, None);
    }

    #[test]
    fn rational_flags() {
        assert_eq!(parse_rational("5/2"), Ok(rat(5, 2)));
        assert_eq!(parse_rational("-20"), Ok(int(-20)));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
