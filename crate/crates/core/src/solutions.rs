//! Self-similar ansätze, isobaricity residuals, the Navier–Stokes residual
//! operator, the Euler number and initial data.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::expr::{int, parse_with, placeholder, Expr, Node, ParseOptions, Rational, SampleDomain, Symbol, Var, ZeroTest, ZeroVerdict};
use crate::symmetry::{covariance_factor, finite_rotation, finite_scaling, time_translation, CovarianceVerdict};
use crate::weights::ScalingExponents;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolutionError {
    #[error("ansatz exponents undefined for α_t = 0")]
    UndefinedExponents,
    #[error("undefined at t = 0: {0}")]
    UndefinedAtZero(String),
    #[error("zero velocity field: Euler number undefined")]
    ZeroVelocity,
    #[error("profile set has arity {found}, expected {expected}")]
    Arity { expected: usize, found: usize },
    #[error("line {line}: {message}")]
    File { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Dimensionalized,
    Nondimensionalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    General,
    Bouton,
    Classical,
    SmoothAtZero,
}

/// One profile slot: an opaque function or an explicit template in the
/// placeholders `_1, _2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Opaque(String),
    Template(Expr),
}

impl Profile {
    pub fn at(&self, args: &[Expr]) -> Expr {
        match self {
            Profile::Opaque(name) => Expr::call(name, args.to_vec()),
            Profile::Template(t) => {
                let m: BTreeMap<Symbol, Expr> =
                    args.iter().enumerate().map(|(i, a)| (placeholder(i), a.clone())).collect();
                t.subs(&m)
            }
        }
    }
}

/// Three velocity profiles and one pressure profile of a fixed arity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSet {
    pub velocity: [Profile; 3],
    pub pressure: Profile,
    pub arity: usize,
}

impl ProfileSet {
    /// Opaque `F1..F3` for velocity and `F4` for pressure.
    pub fn opaque(arity: usize) -> ProfileSet {
        ProfileSet::named(["F1", "F2", "F3", "F4"], arity)
    }

    pub fn named(names: [&str; 4], arity: usize) -> ProfileSet {
        ProfileSet {
            velocity: [0, 1, 2].map(|i| Profile::Opaque(names[i].to_string())),
            pressure: Profile::Opaque(names[3].to_string()),
            arity,
        }
    }

    /// Explicit templates in `_1, _2, ...`.
    pub fn templates(velocity: [Expr; 3], pressure: Expr, arity: usize) -> ProfileSet {
        ProfileSet {
            velocity: velocity.map(Profile::Template),
            pressure: Profile::Template(pressure),
            arity,
        }
    }

    fn expect_arity(&self, n: usize) -> Result<(), SolutionError> {
        if self.arity != n {
            return Err(SolutionError::Arity {
                expected: n,
                found: self.arity,
            });
        }
        Ok(())
    }
}

/// Candidate solution `(u, v, w, p)` over `(x, y, z, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionFields {
    pub u: Expr,
    pub v: Expr,
    pub w: Expr,
    pub p: Expr,
    pub mode: Mode,
    pub family: Family,
    /// Exponents the fields are meant to be covariant under.
    pub exponents: ScalingExponents,
    /// Parameter bindings such as `nu = 1/100`.
    pub params: BTreeMap<Symbol, Expr>,
}

impl SolutionFields {
    pub fn new(u: Expr, v: Expr, w: Expr, p: Expr) -> SolutionFields {
        SolutionFields {
            u,
            v,
            w,
            p,
            mode: Mode::Dimensionalized,
            family: Family::General,
            exponents: ScalingExponents::classical(),
            params: BTreeMap::new(),
        }
    }

    /// `u, v, w, p` with parameter bindings applied.
    pub fn fields(&self) -> [Expr; 4] {
        [&self.u, &self.v, &self.w, &self.p].map(|e| e.subs(&self.params))
    }

    pub fn velocity(&self) -> [Expr; 3] {
        let [u, v, w, _] = self.fields();
        [u, v, w]
    }

    pub fn viscosity(&self) -> Expr {
        self.params
            .get(&Symbol::nu())
            .cloned()
            .unwrap_or_else(|| Expr::sym(Symbol::nu()))
    }

    fn map_fields<F: Fn(&Expr) -> Expr>(&self, f: F) -> SolutionFields {
        SolutionFields {
            u: f(&self.u),
            v: f(&self.v),
            w: f(&self.w),
            p: f(&self.p),
            ..self.clone()
        }
    }

    /// Reads `u = ...`, `v = ...`, `w = ...`, `p = ...` and optional
    /// `nu = ...`, `tau = ...` lines; `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<SolutionFields, SolutionError> {
        let opts = ParseOptions {
            auto_declare: true,
            ..ParseOptions::default()
        };
        let mut vals: BTreeMap<String, Expr> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| SolutionError::File { line: i + 1, message };
            let (key, rhs) = line.split_once('=').ok_or_else(|| err("expected `name = expression`".into()))?;
            let key = key.trim();
            if !["u", "v", "w", "p", "nu", "tau"].contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            let e = parse_with(rhs.trim(), &opts).map_err(|e| err(e.to_string()))?;
            if vals.insert(key.to_string(), e).is_some() {
                return Err(err(format!("duplicate key `{key}`")));
            }
        }
        let mut get = |k: &str| {
            vals.remove(k).ok_or(SolutionError::File {
                line: 0,
                message: format!("missing `{k}`"),
            })
        };
        let mut f = SolutionFields::new(get("u")?, get("v")?, get("w")?, get("p")?);
        for (k, v) in vals {
            f.params.insert(Symbol::new(&k), v);
        }
        Ok(f)
    }
}

impl fmt::Display for SolutionFields {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "u = {}", self.u)?;
        writeln!(f, "v = {}", self.v)?;
        writeln!(f, "w = {}", self.w)?;
        write!(f, "p = {}", self.p)?;
        for (k, v) in &self.params {
            write!(f, "\n{} = {}", k.name(), v)?;
        }
        Ok(())
    }
}

fn var(v: Var) -> Expr {
    Expr::var(v)
}

/// Self-similar form for arbitrary exponents.
pub fn bouton_ansatz(s: &ScalingExponents, profiles: &ProfileSet) -> Result<SolutionFields, SolutionError> {
    if s.alpha_t.is_zero() {
        return Err(SolutionError::UndefinedExponents);
    }
    profiles.expect_arity(3)?;
    let b = s.velocity_exponent() / &s.alpha_t;
    let c = &s.alpha_x / &s.alpha_t;
    let t = var(Var::T);
    let scale = t.pow(-c);
    let args: Vec<Expr> = Var::SPACE.iter().map(|v| var(*v) * &scale).collect();
    let [pu, pv, pw] = &profiles.velocity;
    let pre = t.pow(b.clone());
    let mut f = SolutionFields::new(
        &pre * pu.at(&args),
        &pre * pv.at(&args),
        &pre * pw.at(&args),
        t.pow(int(2) * b) * profiles.pressure.at(&args),
    );
    f.family = Family::Bouton;
    f.exponents = s.clone();
    if s.alpha_x.is_zero() {
        f.mode = Mode::Nondimensionalized;
    }
    Ok(f)
}

/// Time-translated classical family with profiles of `(y/x, z/x)`.
pub fn classical_family(profiles: &ProfileSet, tau: &Expr) -> Result<SolutionFields, SolutionError> {
    profiles.expect_arity(2)?;
    let x = var(Var::X);
    let args = vec![var(Var::Y) / &x, var(Var::Z) / &x];
    let lead = &x / (var(Var::T) + tau);
    let [pu, pv, pw] = &profiles.velocity;
    let mut f = SolutionFields::new(
        &lead * pu.at(&args),
        &lead * pv.at(&args),
        &lead * pw.at(&args),
        lead.powi(2) * profiles.pressure.at(&args),
    );
    f.family = Family::Classical;
    Ok(f)
}

/// `ū = (x, −y, 0)/(t+τ)`, `p = −y²/(t+τ)²`.
pub fn stagnation_solution() -> SolutionFields {
    let profiles = ProfileSet::templates(
        [Expr::one(), -Expr::sym(placeholder(0)), Expr::zero()],
        -Expr::sym(placeholder(0)).powi(2),
        2,
    );
    classical_family(&profiles, &Expr::sym(Symbol::tau())).expect("arity 2")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsobaricSystem {
    /// Separate spatial and temporal homogeneity (weights (1,−1) and
    /// (2,−2) under X₁ and X₂): eight equations.
    Separate,
    /// `α_x r·∇q + α_t t ∂_t q = W(q) q` for the given exponents: four
    /// equations.
    Combined,
}

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub label: String,
    pub expr: String,
    pub verdict: ZeroVerdict,
    #[serde(skip)]
    pub value: Expr,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub residuals: Vec<Residual>,
    pub all_zero: bool,
    pub all_structural: bool,
}

impl ResidualReport {
    fn from_exprs(items: Vec<(String, Expr)>, test: &ZeroTest) -> ResidualReport {
        let residuals: Vec<Residual> = items
            .into_iter()
            .map(|(label, value)| Residual {
                label,
                expr: value.to_string(),
                verdict: test.check(&value),
                value,
            })
            .collect();
        ResidualReport {
            all_zero: residuals.iter().all(|r| r.verdict.is_zero()),
            all_structural: residuals.iter().all(|r| r.verdict.is_structural()),
            residuals,
        }
    }
}

/// Zero test on the positive sampling domain used for fractional powers of
/// `x` and `t`.
pub fn solution_zero_test() -> ZeroTest {
    ZeroTest::new().domain(SampleDomain::Positive)
}

/// Residuals of the homogeneity conditions satisfied by relative invariants
/// of the scaling group. With `include_tau`, τ is scaled with t.
pub fn verify_isobaricity(
    f: &SolutionFields,
    s: &ScalingExponents,
    system: IsobaricSystem,
    include_tau: bool,
) -> ResidualReport {
    let euler = |q: &Expr| Expr::sum(Var::SPACE.iter().map(|v| var(*v) * q.diff(&v.symbol())));
    let tau = Symbol::tau();
    let time = |q: &Expr| {
        let mut e = var(Var::T) * q.diff(&Var::T.symbol());
        if include_tau {
            e = e + Expr::sym(tau.clone()) * q.diff(&tau);
        }
        e
    };
    let [u, v, w, p] = f.fields();
    let named = [("u", &u, 1), ("v", &v, 1), ("w", &w, 1), ("p", &p, 2)];
    let mut items = Vec::new();
    for (name, q, m) in named {
        match system {
            IsobaricSystem::Separate => {
                items.push((format!("r.grad {name} - {m}*{name}"), euler(q) - q * m));
                items.push((format!("t d{name}/dt + {m}*{name}"), time(q) + q * m));
            }
            IsobaricSystem::Combined => {
                let wq = s.velocity_exponent() * int(m);
                let lhs = Expr::rational(s.alpha_x.clone()) * euler(q) + Expr::rational(s.alpha_t.clone()) * time(q);
                items.push((format!("scaling {name}"), lhs - Expr::rational(wq) * q));
            }
        }
    }
    ResidualReport::from_exprs(items, &solution_zero_test())
}

/// Momentum residuals `∂_t u_i + (ū·∇)u_i − νΔu_i + ∂_i p` and the
/// divergence.
#[derive(Debug, Clone)]
pub struct NseResidual {
    pub momentum: [Expr; 3],
    pub continuity: Expr,
}

impl NseResidual {
    pub fn report(&self, test: &ZeroTest) -> ResidualReport {
        let items = vec![
            ("momentum x".to_string(), self.momentum[0].clone()),
            ("momentum y".to_string(), self.momentum[1].clone()),
            ("momentum z".to_string(), self.momentum[2].clone()),
            ("continuity".to_string(), self.continuity.clone()),
        ];
        ResidualReport::from_exprs(items, test)
    }
}

pub fn nse_residual(f: &SolutionFields) -> NseResidual {
    let vel = f.velocity();
    let p = &f.fields()[3];
    let nu = f.viscosity();
    let space: Vec<Symbol> = Var::SPACE.iter().map(|v| v.symbol()).collect();
    let momentum = std::array::from_fn(|i| {
        let ui = &vel[i];
        let mut terms = vec![ui.diff(&Var::T.symbol())];
        for (j, xj) in space.iter().enumerate() {
            terms.push(&vel[j] * ui.diff(xj));
            terms.push(-(&nu * ui.diff(xj).diff(xj)));
        }
        terms.push(p.diff(&space[i]));
        Expr::sum(terms)
    });
    let continuity = Expr::sum((0..3).map(|j| vel[j].diff(&space[j])));
    NseResidual { momentum, continuity }
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerReport {
    pub value: String,
    pub time_independent: bool,
    pub scale_invariant: bool,
    #[serde(skip)]
    pub expr: Expr,
}

/// `ℰ = p/(u²+v²+w²)` with time-independence and scale-invariance flags.
pub fn euler_number(f: &SolutionFields) -> Result<EulerReport, SolutionError> {
    let [u, v, w, p] = f.fields();
    let speed2 = u.powi(2) + v.powi(2) + w.powi(2);
    let test = solution_zero_test();
    if test.check(&speed2).is_zero() {
        return Err(SolutionError::ZeroVelocity);
    }
    let e = &p / &speed2;
    let time_independent = test.check(&e.diff(&Var::T.symbol())).is_zero();
    let phi = finite_scaling(&f.exponents.alpha_x, &f.exponents.alpha_t, &Symbol::k());
    let scale_invariant = match covariance_factor(&e, &phi) {
        Ok(r) => matches!(r.verdict, CovarianceVerdict::Invariant),
        Err(_) => true,
    };
    Ok(EulerReport {
        value: e.to_string(),
        time_independent,
        scale_invariant,
        expr: e,
    })
}

/// Fields at `t = 0`. A factor `t^a` with `a > 0` makes its product vanish
/// (profiles are taken to be bounded); a surviving division by zero is an
/// error.
pub fn initial_data(f: &SolutionFields) -> Result<[Expr; 3], SolutionError> {
    let vel = f.velocity();
    let mut out = Vec::new();
    for c in &vel {
        out.push(at_time_zero(c).ok_or_else(|| SolutionError::UndefinedAtZero(c.to_string()))?);
    }
    Ok([out[0].clone(), out[1].clone(), out[2].clone()])
}

fn at_time_zero(e: &Expr) -> Option<Expr> {
    let t = Var::T.symbol();
    match e.node() {
        Node::Num(_) => Some(e.clone()),
        Node::Sym(s) => Some(if *s == t { Expr::zero() } else { e.clone() }),
        Node::Add(ts) => ts.iter().map(at_time_zero).collect::<Option<Vec<_>>>().map(Expr::sum),
        Node::Mul(fs) => {
            let vanishing = fs.iter().any(|f| match f.node() {
                Node::Sym(s) => *s == t,
                Node::Pow(b, ex) => ex.is_positive() && at_time_zero(b).is_some_and(|v| v.is_zero_literal()),
                _ => false,
            });
            if vanishing {
                return Some(Expr::zero());
            }
            fs.iter().map(at_time_zero).collect::<Option<Vec<_>>>().map(Expr::product)
        }
        Node::Pow(b, ex) => {
            let bv = at_time_zero(b)?;
            if bv.is_zero_literal() && ex.is_negative() {
                return None;
            }
            Some(bv.pow(ex.clone()))
        }
        Node::Call(func, args) => {
            let args = args.iter().map(at_time_zero).collect::<Option<Vec<_>>>()?;
            Some(Expr::call_func(func.clone(), args))
        }
    }
}

#[derive(Debug, Clone)]
pub struct SmoothForm {
    pub fields: SolutionFields,
    /// Both exponent conditions hold.
    pub preconditions_hold: bool,
    pub warnings: Vec<String>,
}

/// `ū = C t^{(α_x−α_t)/α_t} + x^{(α_x−α_t)/α_x} P(y/x, z/x)` and the
/// pressure analogue. The pressure's x-exponent is taken as printed unless
/// `doubled_pressure_exponent` is set.
pub fn l1prime_form(
    s: &ScalingExponents,
    constants: ([Expr; 3], Expr),
    polys: &ProfileSet,
    doubled_pressure_exponent: bool,
) -> Result<SmoothForm, SolutionError> {
    if s.alpha_t.is_zero() || s.alpha_x.is_zero() {
        return Err(SolutionError::UndefinedExponents);
    }
    polys.expect_arity(2)?;
    let b = s.velocity_exponent() / &s.alpha_t;
    let e = s.velocity_exponent() / &s.alpha_x;
    let mut warnings = Vec::new();
    let preconditions_hold = b.is_positive() && e.is_positive();
    if !b.is_positive() {
        warnings.push(format!("(α_x−α_t)/α_t = {b} is not positive"));
    }
    if !e.is_positive() {
        warnings.push(format!("(α_x−α_t)/α_x = {e} is not positive"));
    }
    let pe: Rational = if doubled_pressure_exponent {
        int(2) * &e
    } else {
        warnings.push(format!(
            "pressure correction uses x^({e}) as printed; weight 2(α_x−α_t) needs x^({})",
            int(2) * &e
        ));
        e.clone()
    };
    let x = var(Var::X);
    let t = var(Var::T);
    let args = vec![var(Var::Y) / &x, var(Var::Z) / &x];
    let (cv, cp) = constants;
    let comp = |i: usize| &cv[i] * t.pow(b.clone()) + x.pow(e.clone()) * polys.velocity[i].at(&args);
    let mut fields = SolutionFields::new(
        comp(0),
        comp(1),
        comp(2),
        cp * t.pow(int(2) * &b) + x.pow(pe) * polys.pressure.at(&args),
    );
    fields.family = Family::SmoothAtZero;
    fields.exponents = s.clone();
    Ok(SmoothForm {
        fields,
        preconditions_hold,
        warnings,
    })
}

/// Solution moved by `t ↦ t + τ'`.
pub fn time_translated(f: &SolutionFields, shift: &Expr) -> SolutionFields {
    let tau = Symbol::new("tau_shift");
    let phi = time_translation(&tau);
    let mut bind = BTreeMap::new();
    bind.insert(tau, shift.clone());
    let phi = phi.bind(&bind);
    f.map_fields(|e| phi.apply(e))
}

/// Solution rotated about `axis` by the angle with the given cosine and
/// sine: `ũ(r) = R ū(R⁻¹ r)`, `p̃(r) = p(R⁻¹ r)`.
pub fn rotated(f: &SolutionFields, axis: Var, cos: &Expr, sin: &Expr) -> SolutionFields {
    let rot = finite_rotation(axis);
    let bind = |c: &Expr, s: &Expr| {
        let mut m = BTreeMap::new();
        m.insert(Symbol::cos_theta(), c.clone());
        m.insert(Symbol::sin_theta(), s.clone());
        rot.bind(&m)
    };
    let forward = bind(cos, sin);
    let inverse = bind(cos, &-sin);
    let back: BTreeMap<Symbol, Expr> = Var::SPACE
        .iter()
        .map(|v| (v.symbol(), inverse.image(*v)))
        .collect();
    let moved = f.map_fields(|e| e.subs(&back));
    let vel: BTreeMap<Symbol, Expr> = [(Var::U, &moved.u), (Var::V, &moved.v), (Var::W, &moved.w)]
        .into_iter()
        .map(|(v, e)| (v.symbol(), e.clone()))
        .collect();
    SolutionFields {
        u: forward.image(Var::U).subs(&vel),
        v: forward.image(Var::V).subs(&vel),
        w: forward.image(Var::W).subs(&vel),
        ..moved
    }
}

/// Exact rational point on the unit circle, `((1−m²)/(1+m²), 2m/(1+m²))`.
pub fn rational_angle(m: Rational) -> (Expr, Expr) {
    let one = int(1);
    let d = &one + &m * &m;
    (
        Expr::rational((&one - &m * &m) / &d),
        Expr::rational(int(2) * &m / &d),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse, rat};

    fn p(t: &str) -> Expr {
        parse(t).unwrap()
    }

    #[test]
    fn leray_case() {
        let f = bouton_ansatz(&ScalingExponents::ints(1, 2), &ProfileSet::opaque(3)).unwrap();
        assert_eq!(f.u, p("t^(-1/2)*F1(x*t^(-1/2), y*t^(-1/2), z*t^(-1/2))"));
        assert_eq!(f.p, p("F4(x*t^(-1/2), y*t^(-1/2), z*t^(-1/2))/t"));
        let f = bouton_ansatz(&ScalingExponents::ints(1, 1), &ProfileSet::opaque(3)).unwrap();
        assert_eq!(f.u, p("F1(x/t, y/t, z/t)"));
        assert_eq!(
            bouton_ansatz(&ScalingExponents::ints(1, 0), &ProfileSet::opaque(3)),
            Err(SolutionError::UndefinedExponents)
        );
    }

    #[test]
    fn classical_members() {
        let ones = ProfileSet::templates([Expr::one(), Expr::zero(), Expr::zero()], Expr::zero(), 2);
        let f = classical_family(&ones, &Expr::sym(Symbol::tau())).unwrap();
        assert_eq!(f.u, p("x/(t+tau)"));
        let s = stagnation_solution();
        assert_eq!(s.v, p("-y/(t+tau)"));
        assert_eq!(s.p, p("-y^2/(t+tau)^2"));
    }

    #[test]
    fn stagnation_is_exact() {
        let r = nse_residual(&stagnation_solution()).report(&solution_zero_test());
        assert!(r.all_structural, "{r:?}");
    }

    #[test]
    fn simple_residuals() {
        let c = SolutionFields::new(Expr::num(1), Expr::num(2), Expr::zero(), Expr::num(3));
        assert!(nse_residual(&c).report(&solution_zero_test()).all_zero);
        let d = SolutionFields::new(p("x"), Expr::zero(), Expr::zero(), Expr::zero());
        assert_eq!(nse_residual(&d).continuity, Expr::one());
    }

    #[test]
    fn isobaricity() {
        let f = classical_family(&ProfileSet::opaque(2), &Expr::zero()).unwrap();
        let r = verify_isobaricity(&f, &ScalingExponents::classical(), IsobaricSystem::Separate, false);
        assert_eq!(r.residuals.len(), 8);
        assert!(r.all_structural, "{r:?}");
        let f = classical_family(&ProfileSet::opaque(2), &Expr::sym(Symbol::tau())).unwrap();
        let r = verify_isobaricity(&f, &ScalingExponents::classical(), IsobaricSystem::Separate, true);
        assert!(r.all_zero);
        let s = ScalingExponents::new(rat(3, 2), rat(-1, 3));
        let f = bouton_ansatz(&s, &ProfileSet::opaque(3)).unwrap();
        let r = verify_isobaricity(&f, &s, IsobaricSystem::Combined, false);
        assert_eq!(r.residuals.len(), 4);
        assert!(r.all_zero, "{r:?}");
        let bad = SolutionFields::new(p("x+t"), Expr::zero(), Expr::zero(), Expr::zero());
        let r = verify_isobaricity(&bad, &ScalingExponents::classical(), IsobaricSystem::Separate, false);
        assert!(!r.all_zero);
    }

    #[test]
    fn euler_numbers() {
        let e = euler_number(&stagnation_solution()).unwrap();
        assert!(solution_zero_test().check(&(e.expr.clone() - p("-y^2/(x^2+y^2)"))).is_zero());
        assert!(e.time_independent && e.scale_invariant);
        let f = classical_family(&ProfileSet::opaque(2), &Expr::sym(Symbol::tau())).unwrap();
        let e = euler_number(&f).unwrap();
        assert_eq!(e.expr, p("F4(y/x,z/x)/(F1(y/x,z/x)^2+F2(y/x,z/x)^2+F3(y/x,z/x)^2)"));
        assert!(e.time_independent);
        let c = SolutionFields::new(Expr::one(), Expr::zero(), Expr::zero(), p("nu"));
        assert_eq!(euler_number(&c).unwrap().expr, p("nu"));
        let z = SolutionFields::new(Expr::zero(), Expr::zero(), Expr::zero(), Expr::one());
        assert!(euler_number(&z).is_err());
    }

    #[test]
    fn initial_values() {
        let f = classical_family(&ProfileSet::opaque(2), &Expr::sym(Symbol::tau())).unwrap();
        assert_eq!(initial_data(&f).unwrap()[0], p("x/tau*F1(y/x,z/x)"));
        let mut g = f.clone();
        g.params.insert(Symbol::tau(), Expr::zero());
        assert!(matches!(initial_data(&g), Err(SolutionError::UndefinedAtZero(_))));
        let b = bouton_ansatz(&ScalingExponents::ints(-2, -1), &ProfileSet::opaque(3)).unwrap();
        assert!(initial_data(&b).unwrap().iter().all(Expr::is_zero_literal));
        let c = SolutionFields::new(p("x"), Expr::one(), Expr::zero(), Expr::zero());
        assert_eq!(initial_data(&c).unwrap()[0], p("x"));
    }

    #[test]
    fn smooth_form() {
        let s = ScalingExponents::ints(3, 1);
        let consts = ([Expr::one(), Expr::num(2), Expr::zero()], Expr::num(5));
        let zero = ProfileSet::templates([Expr::zero(), Expr::zero(), Expr::zero()], Expr::zero(), 2);
        let f = l1prime_form(&s, consts.clone(), &zero, false).unwrap();
        assert!(f.preconditions_hold);
        assert_eq!(f.fields.u, p("t^2"));
        assert!(initial_data(&f.fields).unwrap().iter().all(Expr::is_zero_literal));
        let g = l1prime_form(&s, consts.clone(), &ProfileSet::named(["P1", "P2", "P3", "P4"], 2), true).unwrap();
        assert!(!initial_data(&g.fields).unwrap()[0].is_zero_literal());
        let r = verify_isobaricity(&g.fields, &s, IsobaricSystem::Combined, false);
        assert!(r.all_zero, "{r:?}");
        let h = l1prime_form(&s, consts, &ProfileSet::named(["P1", "P2", "P3", "P4"], 2), false).unwrap();
        let r = verify_isobaricity(&h.fields, &s, IsobaricSystem::Combined, false);
        assert!(!r.residuals[3].verdict.is_zero());
        assert!(r.residuals[..3].iter().all(|r| r.verdict.is_zero()));
        assert!(!l1prime_form(&ScalingExponents::ints(1, 2), (std::array::from_fn(|_| Expr::one()), Expr::one()), &zero, true).unwrap().preconditions_hold);
    }

    #[test]
    fn closures() {
        let s = stagnation_solution();
        for shift in [1, 3, 7] {
            let f = time_translated(&s, &Expr::num(shift));
            assert!(nse_residual(&f).report(&solution_zero_test()).all_zero);
        }
        for m in [rat(1, 2), rat(-3, 7), rat(5, 3)] {
            let (c, sn) = rational_angle(m);
            let f = rotated(&s, Var::Z, &c, &sn);
            let r = nse_residual(&f).report(&solution_zero_test());
            assert!(r.all_zero, "{r:?}");
        }
    }

    #[test]
    fn solution_file() {
        let f = SolutionFields::parse_file("# stagnation\nu = x/(t+tau)\nv = -y/(t+tau)\nw = 0\np = -y^2/(t+tau)^2\ntau = 2\n").unwrap();
        assert_eq!(f.fields()[0], p("x/(t+2)"));
        assert!(SolutionFields::parse_file("u = x\n").is_err());
        assert!(SolutionFields::parse_file("u = x\nq = 1").is_err());
    }
}
