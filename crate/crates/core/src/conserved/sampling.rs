//! Sample points for the solver rows.
//!
//! `x, y, z, u, v, w` take values in ±[0.5, 2]; everything else in
//! [0.5, 2]. Points with `|ū| < 0.75`, `|u| < 0.1` or `|w| < 0.1` are
//! rejected.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Point, Symbol, Var};

pub const MIN_SPEED: f64 = 0.75;
pub const MIN_DENOMINATOR: f64 = 0.1;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Sampler {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, s: &Symbol) -> f64 {
    let mag: f64 = rng.gen_range(0.5..2.0);
    let signed = matches!(
        s.as_var(),
        Some(Var::X | Var::Y | Var::Z | Var::U | Var::V | Var::W)
    );
    if signed && rng.gen_bool(0.5) {
        -mag
    } else {
        mag
    }
}

fn acceptable(p: &Point) -> bool {
    let get = |v: Var| p.get(&v.symbol()).copied();
    let speed2: f64 = Var::VELOCITY.iter().filter_map(|v| get(*v)).map(|x| x * x).sum();
    let has_velocity = Var::VELOCITY.iter().any(|v| get(*v).is_some());
    if has_velocity && speed2.sqrt() < MIN_SPEED {
        return false;
    }
    [Var::U, Var::W]
        .iter()
        .all(|v| get(*v).is_none_or(|x| x.abs() >= MIN_DENOMINATOR))
}

pub fn sample_point(sampler: &mut Sampler, symbols: &[Symbol]) -> Point {
    loop {
        let p: Point = symbols.iter().map(|s| (s.clone(), draw(&mut sampler.rng, s))).collect();
        if acceptable(&p) {
            return p;
        }
    }
}

/// Sample values in the order of `symbols`.
pub fn sample_values(sampler: &mut Sampler, symbols: &[Symbol]) -> Vec<f64> {
    let p = sample_point(sampler, symbols);
    symbols.iter().map(|s| p[s]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_bounds_hold() {
        let syms: Vec<Symbol> = Var::ALL.iter().map(|v| v.symbol()).chain([Symbol::nu()]).collect();
        let mut s = Sampler::new(5);
        for _ in 0..200 {
            let p = sample_point(&mut s, &syms);
            let speed: f64 = Var::VELOCITY.iter().map(|v| p[&v.symbol()].powi(2)).sum::<f64>().sqrt();
            assert!(speed >= MIN_SPEED);
            assert!(p[&Var::P.symbol()] >= 0.5 && p[&Var::T.symbol()] > 0.0);
            assert!(p.values().all(|x| (0.5..=2.0).contains(&x.abs())));
        }
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let syms = vec![Var::U.symbol(), Var::P.symbol()];
        let a = sample_values(&mut Sampler::new(9), &syms);
        let b = sample_values(&mut Sampler::new(9), &syms);
        assert_eq!(a, b);
    }
}
