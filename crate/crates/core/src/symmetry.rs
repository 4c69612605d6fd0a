//! Generator catalog of the Navier–Stokes point symmetries, the finite
//! transforms they integrate to, and detection of covariance factors.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::expr::{
    int, Env, Expr, Node, PointSampler, Rational, SampleDomain, Symbol, Var, Witness, ZeroTest, ZeroVerdict,
};
use crate::exterior::{FiniteTransform, TransformKind, VectorField};
use crate::numeric::rationalize;
use crate::weights::{parse_rational, Weight};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymmetryError {
    #[error("zero expression has no covariance factor")]
    ZeroExpression,
    #[error("unknown generator `{0}` (expected T, X, X1, X2, Rx, Ry, Rz)")]
    UnknownGenerator(String),
    #[error("bad transform spec `{0}` (expected scale:ax=..,at=.., rot:x|y|z or tshift)")]
    BadTransform(String),
}

/// The seven generators: T, X, X₁, X₂ and the three rotations.
#[derive(Clone, Debug)]
pub struct GeneratorCatalog {
    pub t: VectorField,
    pub x: VectorField,
    pub x1: VectorField,
    pub x2: VectorField,
    pub rx: VectorField,
    pub ry: VectorField,
    pub rz: VectorField,
}

pub const GENERATOR_NAMES: [&str; 7] = ["T", "X", "X1", "X2", "Rx", "Ry", "Rz"];

impl GeneratorCatalog {
    pub fn get(&self, name: &str) -> Option<&VectorField> {
        Some(match name {
            "T" => &self.t,
            "X" => &self.x,
            "X1" => &self.x1,
            "X2" => &self.x2,
            "Rx" => &self.rx,
            "Ry" => &self.ry,
            "Rz" => &self.rz,
            _ => return None,
        })
    }

    pub fn all(&self) -> Vec<&VectorField> {
        vec![&self.t, &self.x, &self.x1, &self.x2, &self.rx, &self.ry, &self.rz]
    }

    /// T, X, R_x, R_y, R_z: the set used for conserved forms.
    pub fn conservation_set(&self) -> Vec<VectorField> {
        vec![
            self.t.clone(),
            self.x.clone(),
            self.rx.clone(),
            self.ry.clone(),
            self.rz.clone(),
        ]
    }

    /// The two independent scalings X₁, X₂.
    pub fn scaling_pair(&self) -> Vec<VectorField> {
        vec![self.x1.clone(), self.x2.clone()]
    }

    /// Generators selected by name.
    pub fn select(&self, names: &[&str]) -> Result<Vec<VectorField>, SymmetryError> {
        names
            .iter()
            .map(|n| {
                self.get(n)
                    .cloned()
                    .ok_or_else(|| SymmetryError::UnknownGenerator(n.to_string()))
            })
            .collect()
    }
}

fn v(var: Var) -> Expr {
    Expr::var(var)
}

fn build_catalog() -> GeneratorCatalog {
    use Var::*;
    let nu = Expr::sym(Symbol::nu());
    let t = VectorField::from_components("T", &[(T, Expr::one())]);
    let x = VectorField::from_components(
        "X",
        &[
            (X, v(X)),
            (Y, v(Y)),
            (Z, v(Z)),
            (T, 2 * v(T)),
            (U, -v(U)),
            (V, -v(V)),
            (W, -v(W)),
            (P, -2 * v(P)),
        ],
    );
    let x1 = VectorField::from_components(
        "X1",
        &[
            (X, v(X)),
            (Y, v(Y)),
            (Z, v(Z)),
            (U, v(U)),
            (V, v(V)),
            (W, v(W)),
            (P, 2 * v(P)),
        ],
    )
    .with_parameter(Symbol::nu(), 2 * nu.clone());
    let x2 = VectorField::from_components(
        "X2",
        &[(T, v(T)), (U, -v(U)), (V, -v(V)), (W, -v(W)), (P, -2 * v(P))],
    )
    .with_parameter(Symbol::nu(), -nu);
    let rx = VectorField::from_components("Rx", &[(Z, v(Y)), (Y, -v(Z)), (W, v(V)), (V, -v(W))]);
    let ry = VectorField::from_components("Ry", &[(X, v(Z)), (Z, -v(X)), (U, v(W)), (W, -v(U))]);
    let rz = VectorField::from_components("Rz", &[(Y, v(X)), (X, -v(Y)), (V, v(U)), (U, -v(V))]);
    GeneratorCatalog { t, x, x1, x2, rx, ry, rz }
}

/// The shared generator catalog.
pub fn catalog() -> &'static GeneratorCatalog {
    static CATALOG: OnceLock<GeneratorCatalog> = OnceLock::new();
    CATALOG.get_or_init(build_catalog)
}

/// `Σ g_v ∂e/∂v` (parameter components included).
pub fn apply_generator(g: &VectorField, e: &Expr) -> Expr {
    g.apply(e)
}

/// `α_x X₁ + α_t X₂`.
pub fn scaling_generator(alpha_x: &Rational, alpha_t: &Rational) -> VectorField {
    let c = catalog();
    c.x1.combine(
        &Expr::rational(alpha_x.clone()),
        &c.x2,
        &Expr::rational(alpha_t.clone()),
        &format!("{alpha_x}*X1+{alpha_t}*X2"),
    )
}

/// Finite scaling with factor symbol `k`.
pub fn finite_scaling(alpha_x: &Rational, alpha_t: &Rational, k: &Symbol) -> FiniteTransform {
    let kx = |e: Rational| Expr::sym(k.clone()).pow(e);
    let vel = alpha_x - alpha_t;
    let mut map = BTreeMap::new();
    for var in Var::SPACE {
        map.insert(var.symbol(), kx(alpha_x.clone()) * v(var));
    }
    for var in Var::VELOCITY {
        map.insert(var.symbol(), kx(vel.clone()) * v(var));
    }
    map.insert(Var::T.symbol(), kx(alpha_t.clone()) * v(Var::T));
    map.insert(Var::P.symbol(), kx(int(2) * &vel) * v(Var::P));
    map.insert(
        Symbol::nu(),
        kx(int(2) * alpha_x - alpha_t) * Expr::sym(Symbol::nu()),
    );
    map.insert(Symbol::tau(), kx(alpha_t.clone()) * Expr::sym(Symbol::tau()));
    FiniteTransform::new(&format!("scale(ax={alpha_x},at={alpha_t})"), map, vec![k.clone()]).with_kind(
        TransformKind::Scaling {
            alpha_x: alpha_x.clone(),
            alpha_t: alpha_t.clone(),
            k: k.clone(),
        },
    )
}

/// Flow of the rotation generator about `axis`, written with the
/// parameters `cos_theta`, `sin_theta`.
pub fn finite_rotation(axis: Var) -> FiniteTransform {
    let c = Expr::sym(Symbol::cos_theta());
    let s = Expr::sym(Symbol::sin_theta());
    // (a, b) rotate as a ↦ a c − b s, b ↦ b c + a s.
    let (pairs, name) = match axis {
        Var::X => ([(Var::Y, Var::Z), (Var::V, Var::W)], "rot:x"),
        Var::Y => ([(Var::Z, Var::X), (Var::W, Var::U)], "rot:y"),
        _ => ([(Var::X, Var::Y), (Var::U, Var::V)], "rot:z"),
    };
    let mut map = BTreeMap::new();
    for (a, b) in pairs {
        map.insert(a.symbol(), v(a) * &c - v(b) * &s);
        map.insert(b.symbol(), v(b) * &c + v(a) * &s);
    }
    let axis = if matches!(axis, Var::X | Var::Y) { axis } else { Var::Z };
    FiniteTransform::new(name, map, vec![Symbol::cos_theta(), Symbol::sin_theta()])
        .with_kind(TransformKind::Rotation(axis))
}

/// `t ↦ t + τ`.
pub fn time_translation(tau: &Symbol) -> FiniteTransform {
    let mut map = BTreeMap::new();
    map.insert(Var::T.symbol(), v(Var::T) + Expr::sym(tau.clone()));
    FiniteTransform::new("tshift", map, vec![tau.clone()]).with_kind(TransformKind::TimeShift(tau.clone()))
}

/// Parses `scale:ax=1,at=2`, `rot:z` or `tshift`.
pub fn parse_transform(spec: &str) -> Result<FiniteTransform, SymmetryError> {
    let bad = || SymmetryError::BadTransform(spec.to_string());
    let spec_t = spec.trim();
    if spec_t == "tshift" {
        return Ok(time_translation(&Symbol::tau()));
    }
    if let Some(axis) = spec_t.strip_prefix("rot:") {
        let axis = match axis.trim() {
            "x" => Var::X,
            "y" => Var::Y,
            "z" => Var::Z,
            _ => return Err(bad()),
        };
        return Ok(finite_rotation(axis));
    }
    if let Some(args) = spec_t.strip_prefix("scale:") {
        let mut ax = None;
        let mut at = None;
        for part in args.split(',') {
            let (key, val) = part.split_once('=').ok_or_else(bad)?;
            let r = parse_rational(val).map_err(|_| bad())?;
            match key.trim() {
                "ax" => ax = Some(r),
                "at" => at = Some(r),
                _ => return Err(bad()),
            }
        }
        let (Some(ax), Some(at)) = (ax, at) else {
            return Err(bad());
        };
        return Ok(finite_scaling(&ax, &at, &Symbol::k()));
    }
    Err(bad())
}

/// Numeric flow of a catalog generator at parameter `eps`.
pub fn flow(name: &str, eps: f64) -> Option<FiniteTransform> {
    let num = |x: f64| Expr::rational(Rational::from_float(x).unwrap_or_else(Rational::zero));
    let scaling = |ax: i64, at: i64| {
        let k = Symbol::k();
        let t = finite_scaling(&int(ax), &int(at), &k);
        let mut b = BTreeMap::new();
        b.insert(k, num(eps.exp()));
        t.bind(&b)
    };
    let rotation = |axis: Var| {
        let mut b = BTreeMap::new();
        b.insert(Symbol::cos_theta(), num(eps.cos()));
        b.insert(Symbol::sin_theta(), num(eps.sin()));
        finite_rotation(axis).bind(&b)
    };
    Some(match name {
        "T" => {
            let mut b = BTreeMap::new();
            b.insert(Symbol::tau(), num(eps));
            time_translation(&Symbol::tau()).bind(&b)
        }
        "X" => scaling(1, 2),
        "X1" => scaling(1, 0),
        "X2" => scaling(0, 1),
        "Rx" => rotation(Var::X),
        "Ry" => rotation(Var::Y),
        "Rz" => rotation(Var::Z),
        _ => return None,
    })
}

#[derive(Debug, Clone, Serialize)]
pub enum CovarianceVerdict {
    Invariant,
    Covariant {
        #[serde(serialize_with = "crate::weights::ser_rational")]
        exponent: Rational,
    },
    NotCovariant(Witness),
}

#[derive(Debug, Clone, Serialize)]
pub struct CovarianceReport {
    pub verdict: CovarianceVerdict,
    pub transform: String,
    /// Weight `(a, b)` of the factor `k^{aα_x + bα_t}`, when the expression
    /// is covariant under both unit scalings.
    pub weight: Option<Weight>,
}

impl CovarianceReport {
    /// Factor exponent; zero for invariants.
    pub fn exponent(&self) -> Option<Rational> {
        match &self.verdict {
            CovarianceVerdict::Invariant => Some(Rational::zero()),
            CovarianceVerdict::Covariant { exponent } => Some(exponent.clone()),
            CovarianceVerdict::NotCovariant(_) => None,
        }
    }
}

fn zero_test(seed: u64) -> ZeroTest {
    ZeroTest::new().points(25).seed(seed).domain(SampleDomain::Positive)
}

/// Decides whether `φ*(e) = f·e` with `f = k^c` constant (scalings) or
/// `f = 1` (other transforms).
pub fn covariance_factor(e: &Expr, phi: &FiniteTransform) -> Result<CovarianceReport, SymmetryError> {
    covariance_factor_seeded(e, phi, crate::expr::ZeroTest::default().seed)
}

pub fn covariance_factor_seeded(e: &Expr, phi: &FiniteTransform, seed: u64) -> Result<CovarianceReport, SymmetryError> {
    if zero_test(seed).check(e).is_zero() {
        return Err(SymmetryError::ZeroExpression);
    }
    let verdict = factor_exponent(e, phi, seed);
    let weight = match (phi.kind(), &verdict) {
        (TransformKind::Scaling { k, .. }, CovarianceVerdict::Invariant | CovarianceVerdict::Covariant { .. }) => {
            let a = factor_exponent(e, &finite_scaling(&int(1), &int(0), k), seed);
            let b = factor_exponent(e, &finite_scaling(&int(0), &int(1), k), seed);
            let exp = |v: &CovarianceVerdict| match v {
                CovarianceVerdict::Invariant => Some(Rational::zero()),
                CovarianceVerdict::Covariant { exponent } => Some(exponent.clone()),
                CovarianceVerdict::NotCovariant(_) => None,
            };
            match (exp(&a), exp(&b)) {
                (Some(a), Some(b)) => Some(Weight::new(a, b)),
                _ => None,
            }
        }
        _ => None,
    };
    Ok(CovarianceReport {
        verdict,
        transform: phi.name().to_string(),
        weight,
    })
}

fn to_verdict(c: Rational) -> CovarianceVerdict {
    if c.is_zero() {
        CovarianceVerdict::Invariant
    } else {
        CovarianceVerdict::Covariant { exponent: c }
    }
}

fn factor_exponent(e: &Expr, phi: &FiniteTransform, seed: u64) -> CovarianceVerdict {
    let image = phi.apply(e);
    let ratio = &image / e;
    let test = zero_test(seed);
    let k = match phi.kind() {
        TransformKind::Scaling { k, .. } => Some(k.clone()),
        _ => None,
    };
    // Literal k^c or 1.
    if let Some(r) = ratio.as_rational() {
        if r.is_one() {
            return CovarianceVerdict::Invariant;
        }
    }
    if let (Some(k), Node::Pow(b, c)) = (&k, ratio.node()) {
        if b.as_symbol() == Some(k) {
            return to_verdict(c.clone());
        }
    }
    if ratio.as_symbol().is_some() && ratio.as_symbol() == k.as_ref() {
        return to_verdict(int(1));
    }
    let Some(k) = k else {
        return match test.check(&(&image - e)) {
            ZeroVerdict::NonZero(w) => CovarianceVerdict::NotCovariant(w),
            _ => CovarianceVerdict::Invariant,
        };
    };
    // Constancy in every non-parameter symbol.
    for s in ratio.free_symbols() {
        if phi.params().contains(&s) {
            continue;
        }
        if let ZeroVerdict::NonZero(w) = test.check(&ratio.diff(&s)) {
            return CovarianceVerdict::NotCovariant(w);
        }
    }
    // Exponent read at k = 2 and k = 3.
    let Some(c) = numeric_exponent(&ratio, &k, seed) else {
        return CovarianceVerdict::NotCovariant(Witness {
            point: BTreeMap::new(),
            value: f64::NAN,
        });
    };
    let check = &image - Expr::sym(k.clone()).pow(c.clone()) * e;
    match test.check(&check) {
        ZeroVerdict::NonZero(w) => CovarianceVerdict::NotCovariant(w),
        _ => to_verdict(c),
    }
}

fn numeric_exponent(ratio: &Expr, k: &Symbol, seed: u64) -> Option<Rational> {
    let mut sampler = PointSampler::new(seed ^ 0x6b, SampleDomain::Positive);
    let functions = sampler.instances(&ratio.functions());
    let symbols: Vec<Symbol> = ratio.free_symbols().into_iter().filter(|s| s != k).collect();
    for _ in 0..20 {
        let mut env = Env {
            point: sampler.sample(&symbols),
            functions: functions.clone(),
        };
        let mut at = |kv: f64| {
            env.set(k.clone(), kv);
            ratio.eval_env(&env).ok().filter(|r| r.is_finite() && *r > 0.0)
        };
        let (Some(r2), Some(r3)) = (at(2.0), at(3.0)) else {
            continue;
        };
        let c2 = r2.ln() / 2f64.ln();
        let c3 = r3.ln() / 3f64.ln();
        if (c2 - c3).abs() > 1e-6 * (1.0 + c2.abs()) {
            return None;
        }
        return rationalize(c2, 10_000, 1e-8);
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyEntry {
    pub variable: String,
    /// Symbolic `d/dk` at `k = 1` of the image.
    pub derivative: String,
    /// Coefficient of `α_x X₁ + α_t X₂`.
    pub expected: String,
    pub symbolic_ok: bool,
    /// Central difference at a sampled point.
    pub numeric_error: f64,
    pub numeric_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub entries: Vec<ConsistencyEntry>,
    pub passed: bool,
}

/// Compares the k-derivative at k = 1 of the finite scaling with the
/// infinitesimal generator, symbolically and by central differences.
pub fn generator_consistency_check(alpha_x: &Rational, alpha_t: &Rational) -> ConsistencyReport {
    let k = Symbol::k();
    let phi = finite_scaling(alpha_x, alpha_t, &k);
    let gen = scaling_generator(alpha_x, alpha_t);
    let mut symbols: Vec<Symbol> = Var::ALL.iter().map(|v| v.symbol()).collect();
    symbols.push(Symbol::nu());
    let mut sampler = PointSampler::new(0x5ca1e, SampleDomain::Positive);
    let point = sampler.sample(&symbols);
    let h = 1e-5;
    let mut entries = Vec::new();
    for s in &symbols {
        let image = phi.image_of(s);
        let derivative = image.diff(&k).subs1(&k, &Expr::one());
        let expected = match s.as_var() {
            Some(var) => gen.component(var).clone(),
            None => gen.parameter_components().get(s).cloned().unwrap_or_else(Expr::zero),
        };
        let symbolic_ok = zero_test(7).check(&(&derivative - &expected)).is_zero();
        let at = |kv: f64| {
            let mut p = point.clone();
            p.insert(k.clone(), kv);
            image.eval(&p).unwrap_or(f64::NAN)
        };
        let fd = (at(1.0 + h) - at(1.0 - h)) / (2.0 * h);
        let exact = expected.eval(&point).unwrap_or(f64::NAN);
        let numeric_error = (fd - exact).abs() / (1.0 + exact.abs());
        entries.push(ConsistencyEntry {
            variable: s.name().to_string(),
            derivative: derivative.to_string(),
            expected: expected.to_string(),
            symbolic_ok,
            numeric_error,
            numeric_ok: numeric_error < 1e-6,
        });
    }
    let passed = entries.iter().all(|e| e.symbolic_ok && e.numeric_ok);
    ConsistencyReport { entries, passed }
}

/// d/dθ at θ = 0 of the finite rotation against its generator.
pub fn rotation_consistency_check(axis: Var) -> bool {
    let phi = finite_rotation(axis);
    let gen = match axis {
        Var::X => &catalog().rx,
        Var::Y => &catalog().ry,
        _ => &catalog().rz,
    };
    let mut at_zero = BTreeMap::new();
    at_zero.insert(Symbol::cos_theta(), Expr::one());
    at_zero.insert(Symbol::sin_theta(), Expr::zero());
    Var::ALL.iter().all(|var| {
        let image = phi.image(*var);
        // d cos/dθ = −sin, d sin/dθ = cos.
        let c = Expr::sym(Symbol::cos_theta());
        let s = Expr::sym(Symbol::sin_theta());
        let d = image.diff(&Symbol::cos_theta()) * (-s) + image.diff(&Symbol::sin_theta()) * c;
        let d0 = d.subs(&at_zero);
        (d0 - gen.component(*var)).expand().is_zero_literal()
    })
}

/// Value of a rational as f64, for reports.
pub fn rational_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, rat};
    use crate::exterior::KForm;

    fn p(t: &str) -> Expr {
        parse(t).unwrap()
    }

    #[test]
    fn catalog_coefficients() {
        let c = catalog();
        let t: Vec<Expr> = c.t.components().to_vec();
        assert_eq!(t[3], Expr::one());
        assert!(t.iter().enumerate().all(|(i, e)| i == 3 || e.is_zero_literal()));
        assert_eq!(c.x.component(Var::P), &p("-2*p"));
        assert_eq!(c.x2.component(Var::T), &p("t"));
        assert_eq!(c.x2.component(Var::U), &p("-u"));
        assert_eq!(c.x1.parameter_components()[&Symbol::nu()], p("2*nu"));
    }

    #[test]
    fn classical_scaling_is_x1_plus_2x2() {
        let g = scaling_generator(&int(1), &int(2));
        for var in Var::ALL {
            assert_eq!(g.component(var), catalog().x.component(var), "{var:?}");
        }
        assert!(g.parameter_components().values().all(|e| e.is_zero_literal()));
    }

    #[test]
    fn generator_actions() {
        let c = catalog();
        assert_eq!(apply_generator(&c.x, &p("p")), p("-2*p"));
        assert!(apply_generator(&c.rz, &p("u^2+v^2+w^2")).is_zero_literal());
        assert!(apply_generator(&c.x1, &p("nu*t/x^2")).is_zero_literal());
        assert!(apply_generator(&c.x2, &p("nu*t/x^2")).is_zero_literal());
    }

    #[test]
    fn scaling_images() {
        let k = Symbol::k();
        let s = finite_scaling(&int(1), &int(2), &k);
        assert_eq!(s.apply(&p("u")), p("u/k"));
        assert_eq!(s.apply(&p("p")), p("p/k^2"));
        let s = finite_scaling(&int(0), &int(1), &k);
        assert_eq!(s.apply(&p("x")), p("x"));
        assert_eq!(s.apply(&p("t")), p("k*t"));
        let mut one = BTreeMap::new();
        one.insert(k.clone(), Expr::one());
        assert!(finite_scaling(&rat(3, 7), &int(-2), &k).bind(&one).is_identity());
    }

    #[test]
    fn scaling_group_law() {
        let k1 = Symbol::positive_param("k1");
        let k2 = Symbol::positive_param("k2");
        let (ax, at) = (rat(1, 3), int(-2));
        let composed = finite_scaling(&ax, &at, &k1).then(&finite_scaling(&ax, &at, &k2));
        let mut m = BTreeMap::new();
        m.insert(Symbol::k(), Expr::sym(k1) * Expr::sym(k2));
        let direct = finite_scaling(&ax, &at, &Symbol::k()).bind(&m);
        for s in direct.map().keys() {
            assert_eq!(composed.image_of(s), direct.image_of(s), "{}", s.name());
        }
    }

    #[test]
    fn rotations() {
        let r = finite_rotation(Var::Z);
        assert_eq!(r.image(Var::X), p("x*cos_theta - y*sin_theta"));
        assert_eq!(r.image(Var::V), p("v*cos_theta + u*sin_theta"));
        for axis in [Var::X, Var::Y, Var::Z] {
            assert!(rotation_consistency_check(axis));
            let img = finite_rotation(axis).apply(&p("u^2+v^2+w^2"));
            assert!(crate::expr::structurally_zero(&(img - p("u^2+v^2+w^2"))));
        }
        let mut zero = BTreeMap::new();
        zero.insert(Symbol::cos_theta(), Expr::one());
        zero.insert(Symbol::sin_theta(), Expr::zero());
        assert!(finite_rotation(Var::Y).bind(&zero).is_identity());
    }

    #[test]
    fn time_shift() {
        let s = time_translation(&Symbol::tau());
        assert_eq!(s.apply(&p("t")), p("t+tau"));
        assert_eq!(s.apply(&p("u")), p("u"));
        let t1 = Symbol::new("tau1");
        let t2 = Symbol::new("tau2");
        let two = time_translation(&t1).then(&time_translation(&t2));
        assert_eq!(two.image(Var::T), p("t") + Expr::sym(t1) + Expr::sym(t2));
    }

    #[test]
    fn covariance() {
        let k = Symbol::k();
        let (ax, at) = (rat(2, 3), rat(-5, 4));
        let phi = finite_scaling(&ax, &at, &k);
        let r = covariance_factor(&p("u"), &phi).unwrap();
        assert_eq!(r.exponent(), Some(&ax - &at));
        assert_eq!(r.weight, Some(Weight::ints(1, -1)));
        let r = covariance_factor(&p("p/(u^2+v^2+w^2)"), &phi).unwrap();
        assert!(matches!(r.verdict, CovarianceVerdict::Invariant));
        let r = covariance_factor(&p("x+t"), &finite_scaling(&int(1), &int(2), &k)).unwrap();
        assert!(matches!(r.verdict, CovarianceVerdict::NotCovariant(_)));
        assert_eq!(covariance_factor(&Expr::zero(), &phi).unwrap_err(), SymmetryError::ZeroExpression);
        let r = covariance_factor(&p("(u^2+v^2)^(1/2)*x/(t+tau)"), &phi).unwrap();
        assert_eq!(r.weight, Some(Weight::ints(2, -2)));
        let r = covariance_factor(&p("u^2+v^2+w^2"), &finite_rotation(Var::X)).unwrap();
        assert!(matches!(r.verdict, CovarianceVerdict::Invariant));
    }

    #[test]
    fn consistency() {
        for (ax, at) in [(1, 2), (1, 0), (0, 1), (-3, 5)] {
            let r = generator_consistency_check(&int(ax), &int(at));
            assert!(r.passed, "{ax},{at}: {r:?}");
        }
    }

    #[test]
    fn transform_specs() {
        assert!(matches!(
            parse_transform("scale:ax=1,at=2").unwrap().kind(),
            TransformKind::Scaling { .. }
        ));
        assert!(matches!(parse_transform("rot:z").unwrap().kind(), TransformKind::Rotation(Var::Z)));
        assert!(parse_transform("tshift").is_ok());
        assert!(parse_transform("rot:q").is_err());
        assert!(parse_transform("scale:ax=1").is_err());
    }

    #[test]
    fn generator_interior_products() {
        let c = catalog();
        let dtdp = KForm::term(Expr::one(), &[Var::T, Var::P]);
        assert_eq!(dtdp.interior(&c.t).unwrap(), KForm::differential(Var::P));
        let r = KForm::differential(Var::X).interior(&c.x).unwrap();
        assert_eq!(r.as_scalar(), p("x"));
        let r = KForm::differential(Var::U).interior(&c.rz).unwrap();
        assert_eq!(r.as_scalar(), p("-v"));
    }
}
