//! Small numeric helpers shared by the checks.

use num_bigint::BigInt;

use crate::expr::Rational;

/// Best rational approximation of `x` by continued fractions with the
/// denominator bounded by `max_den`; `None` if it is not within `tol`.
pub fn rationalize(x: f64, max_den: u64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    let mut best = None;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        best = Some((h2, k2));
        if (x - h2 as f64 / k2 as f64).abs() <= tol * (1.0 + x.abs()) {
            break;
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
    }
    let (h, k) = best?;
    if (x - h as f64 / k as f64).abs() <= tol * (1.0 + x.abs()) {
        Some(Rational::new(BigInt::from(h), BigInt::from(k)))
    } else {
        None
    }
}
