use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::eval::{EvalStats, FunctionInstance, PolyInstance};
use super::{structurally_zero, Env, Expr, Point, Symbol, Var};

pub const DEFAULT_SEED: u64 = 0x5eed_0f_f0_7d5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SampleDomain {
    /// Magnitudes in [0.5, 2]; x, y, z, u, v, w get random signs.
    Mixed,
    /// Every symbol in [0.5, 2].
    Positive,
}

/// Seeded generator of evaluation points.
pub struct PointSampler {
    rng: ChaCha8Rng,
    domain: SampleDomain,
}

impl PointSampler {
    pub fn new(seed: u64, domain: SampleDomain) -> PointSampler {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            domain,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn sample(&mut self, symbols: &[Symbol]) -> Point {
        self.sample_in(symbols, self.domain)
    }

    pub fn sample_in(&mut self, symbols: &[Symbol], domain: SampleDomain) -> Point {
        symbols
            .iter()
            .map(|s| {
                let mut v: f64 = self.rng.gen_range(0.5..2.0);
                let signed = matches!(
                    s.as_var(),
                    Some(Var::X | Var::Y | Var::Z | Var::U | Var::V | Var::W)
                );
                if domain == SampleDomain::Mixed && signed && self.rng.gen_bool(0.5) {
                    v = -v;
                }
                (s.clone(), v)
            })
            .collect()
    }

    /// Random degree-two polynomial instances for every opaque function.
    pub fn instances(&mut self, functions: &BTreeMap<String, usize>) -> BTreeMap<String, Arc<dyn FunctionInstance>> {
        functions
            .iter()
            .map(|(name, arity)| {
                let f: Arc<dyn FunctionInstance> = Arc::new(PolyInstance::random(*arity, &mut self.rng));
                (name.clone(), f)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub point: BTreeMap<String, f64>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub enum ZeroVerdict {
    ZeroStructural,
    ZeroProbabilistic,
    NonZero(Witness),
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero(_))
    }

    pub fn is_structural(&self) -> bool {
        matches!(self, ZeroVerdict::ZeroStructural)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            ZeroVerdict::NonZero(w) => Some(w),
            _ => None,
        }
    }
}

/// Configurable zero test: structural normal form first, then seeded random
/// evaluation.
#[derive(Debug, Clone)]
pub struct ZeroTest {
    pub n_points: usize,
    pub tol: f64,
    pub seed: u64,
    pub domain: SampleDomain,
    /// Skip the structural route.
    pub numeric_only: bool,
    /// Symbols held at fixed values instead of being sampled.
    pub fixed: Point,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            n_points: 25,
            tol: 1e-9,
            seed: DEFAULT_SEED,
            domain: SampleDomain::Mixed,
            numeric_only: false,
            fixed: Point::new(),
        }
    }
}

const MIN_SINGULAR: f64 = 1e-6;
const TRIES: usize = 60;

impl ZeroTest {
    pub fn new() -> ZeroTest {
        ZeroTest::default()
    }

    pub fn points(mut self, n: usize) -> Self {
        self.n_points = n.max(1);
        self
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn domain(mut self, d: SampleDomain) -> Self {
        self.domain = d;
        self
    }

    pub fn numeric(mut self) -> Self {
        self.numeric_only = true;
        self
    }

    pub fn fix(mut self, s: Symbol, v: f64) -> Self {
        self.fixed.insert(s, v);
        self
    }

    pub fn check(&self, e: &Expr) -> ZeroVerdict {
        if e.is_zero_literal() || (!self.numeric_only && structurally_zero(e)) {
            return ZeroVerdict::ZeroStructural;
        }
        self.check_numeric(e)
    }

    /// Random-evaluation route only.
    pub fn check_numeric(&self, e: &Expr) -> ZeroVerdict {
        let symbols: Vec<Symbol> = e
            .free_symbols()
            .into_iter()
            .filter(|s| !self.fixed.contains_key(s))
            .collect();
        let mut sampler = PointSampler::new(self.seed, self.domain);
        let functions = sampler.instances(&e.functions());
        let mut evaluated = 0;
        for _ in 0..self.n_points {
            let Some((env, v, stats)) = self.good_point(e, &symbols, &functions, &mut sampler) else {
                continue;
            };
            evaluated += 1;
            if !(v.abs() < self.tol * (1.0 + stats.max_magnitude)) {
                return ZeroVerdict::NonZero(witness(&env.point, v));
            }
        }
        if evaluated == 0 {
            return ZeroVerdict::NonZero(Witness {
                point: BTreeMap::new(),
                value: f64::NAN,
            });
        }
        ZeroVerdict::ZeroProbabilistic
    }

    fn good_point(
        &self,
        e: &Expr,
        symbols: &[Symbol],
        functions: &BTreeMap<String, Arc<dyn FunctionInstance>>,
        sampler: &mut PointSampler,
    ) -> Option<(Env, f64, EvalStats)> {
        for attempt in 0..2 * TRIES {
            let domain = if attempt < TRIES {
                self.domain
            } else {
                SampleDomain::Positive
            };
            let mut point = sampler.sample_in(symbols, domain);
            point.extend(self.fixed.iter().map(|(k, v)| (k.clone(), *v)));
            let env = Env {
                point,
                functions: functions.clone(),
            };
            let mut stats = EvalStats::default();
            if let Ok(v) = e.eval_tracked(&env, &mut stats) {
                if stats.min_denominator >= MIN_SINGULAR && stats.min_radicand >= MIN_SINGULAR && v.is_finite() {
                    return Some((env, v, stats));
                }
            }
        }
        None
    }
}

fn witness(point: &Point, value: f64) -> Witness {
    Witness {
        point: point.iter().map(|(s, v)| (s.name().to_string(), *v)).collect(),
        value,
    }
}

/// Zero test with the default seed and domain.
pub fn is_zero(e: &Expr, n_points: usize, tol: f64) -> ZeroVerdict {
    ZeroTest::new().points(n_points).tol(tol).check(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn verdicts() {
        let e = parse("(u^2+v^2) - (v^2+u^2)").unwrap();
        assert!(is_zero(&e, 25, 1e-9).is_structural());
        let e = parse("p - p*1000001/1000000").unwrap();
        let v = is_zero(&e, 25, 1e-9);
        assert!(v.witness().is_some());
    }

    #[test]
    fn probabilistic_route_accepts_identities() {
        let e = parse("(x^2+2*x*y+y^2)^(1/2)*(x+y) - (x+y)^2").unwrap();
        // |x+y|(x+y) is not (x+y)^2 for mixed signs, so it must be rejected
        assert!(!ZeroTest::new().check(&e).is_zero());
        let e = parse("(x^2+2*x*y+y^2)^(1/2) - (x+y)").unwrap();
        let v = ZeroTest::new().domain(SampleDomain::Positive).check(&e);
        assert!(matches!(v, ZeroVerdict::ZeroProbabilistic));
    }

    #[test]
    fn opaque_functions_get_instances() {
        let e = parse("F(x)*G(y) - G(y)*F(x)").unwrap();
        assert!(is_zero(&e, 5, 1e-9).is_zero());
        let e = parse("F(x) - F(y)").unwrap();
        assert!(!is_zero(&e, 5, 1e-9).is_zero());
    }

    #[test]
    fn seeded_sampling_is_reproducible() {
        let syms = vec![Symbol::new("x"), Symbol::new("p")];
        let a = PointSampler::new(7, SampleDomain::Mixed).sample(&syms);
        let b = PointSampler::new(7, SampleDomain::Mixed).sample(&syms);
        assert_eq!(a, b);
        assert!(a[&Symbol::new("p")] > 0.0);
    }
}
