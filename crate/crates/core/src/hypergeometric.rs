//! Terminating Gauss hypergeometric series.
//!
//! Only the polynomial cases are supported: one upper parameter must be a
//! non-positive integer. The alternating terms of these polynomials grow
//! like binomial coefficients while their sum stays of order one, so the
//! series is accumulated in exact rational arithmetic. Every finite `f64` is
//! a dyadic rational, which makes the evaluation exact for the given
//! inputs; only the final conversion back to `f64` rounds.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Result, WalkError};

pub type Exact = BigRational;

pub(crate) fn exact(v: f64) -> Result<Exact> {
    Exact::from_float(v)
        .ok_or_else(|| WalkError::InvalidArgument(format!("non-finite value {v}")))
}

pub(crate) fn exact_int(v: i64) -> Exact {
    Exact::from_integer(BigInt::from(v))
}

pub(crate) fn to_f64(v: &Exact) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// `Some(n)` when `v` is the non-positive integer `-n`.
fn non_positive_integer(v: f64) -> Option<u64> {
    (v.is_finite() && v <= 0.0 && v.fract() == 0.0 && v >= -(u32::MAX as f64)).then(|| (-v) as u64)
}

/// Number of the last non-vanishing term, `K` with `(a)_k (b)_k = 0` for
/// all `k > K`.
fn termination_order(a: f64, b: f64) -> Result<u64> {
    match (non_positive_integer(a), non_positive_integer(b)) {
        (Some(p), Some(q)) => Ok(p.min(q)),
        (Some(p), None) | (None, Some(p)) => Ok(p),
        (None, None) => Err(WalkError::UnsupportedArgument(format!(
            "2F1({a}, {b}; ...) does not terminate"
        ))),
    }
}

/// Series coefficients `(a)_k (b)_k / ((c)_k k!)` for `k = 0..=order`,
/// built term to term from the ratio `(a+k)(b+k) / ((c+k)(k+1))`.
pub(crate) fn coefficients(a: &Exact, b: &Exact, c: &Exact, order: u64) -> Result<Vec<Exact>> {
    let mut out = Vec::with_capacity(order as usize + 1);
    let mut term = Exact::one();
    out.push(term.clone());
    for k in 0..order {
        let kq = exact_int(k as i64);
        let denom = (c + &kq) * (&kq + Exact::one());
        if denom.is_zero() {
            return Err(WalkError::UnsupportedArgument(
                "lower parameter hits a pole; use the regularized series".into(),
            ));
        }
        term = term * (a + &kq) * (b + &kq) / denom;
        out.push(term.clone());
    }
    Ok(out)
}

/// Regularized coefficients `(a)_k (b)_k / (Γ(c+k) k!)` for integer `c`,
/// with `1/Γ(n) = 0` at non-positive integers `n`.
pub(crate) fn regularized_coefficients(a: &Exact, b: &Exact, c: i64, order: u64) -> Vec<Exact> {
    let mut out = Vec::with_capacity(order as usize + 1);
    // Running (a)_k (b)_k / k!
    let mut upper = Exact::one();
    // Running 1/Γ(c+k), only tracked once c+k >= 1.
    let mut inv_gamma: Option<Exact> = None;
    for k in 0..=order {
        if k > 0 {
            let kq = exact_int(k as i64 - 1);
            upper = upper * (a + &kq) * (b + &kq) / exact_int(k as i64);
        }
        let arg = c + k as i64;
        inv_gamma = if arg < 1 {
            None
        } else {
            Some(match inv_gamma {
                Some(g) => g / exact_int(arg - 1),
                None => Exact::one() / factorial(arg - 1),
            })
        };
        out.push(match &inv_gamma {
            Some(g) => &upper * g,
            None => Exact::zero(),
        });
    }
    out
}

pub(crate) fn factorial(n: i64) -> Exact {
    let mut acc = BigInt::one();
    for i in 2..=n.max(0) {
        acc *= i;
    }
    Exact::from_integer(acc)
}

/// Exact `Σ coef_k z^k`, ascending in `k`.
fn sum_powers(coefs: &[Exact], z: &Exact) -> Exact {
    let mut total = Exact::zero();
    let mut zk = Exact::one();
    for (k, c) in coefs.iter().enumerate() {
        if k > 0 {
            zk = &zk * z;
        }
        if !c.is_zero() {
            total += c * &zk;
        }
    }
    total
}

/// `2F1(a, b; c; z)` for a terminating series.
///
/// Fails with `UnsupportedArgument` if neither `a` nor `b` is a
/// non-positive integer, or if `c` is a non-positive integer whose pole is
/// reached before the series terminates.
pub fn hyp2f1_terminating(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let order = termination_order(a, b)?;
    let coefs = coefficients(&exact(a)?, &exact(b)?, &exact(c)?, order)?;
    Ok(to_f64(&sum_powers(&coefs, &exact(z)?)))
}

/// Regularized `2F1(a, b; c; z) / Γ(c)` for integer `c`, terminating.
pub fn hyp2f1_regularized_terminating(a: f64, b: f64, c: i64, z: f64) -> Result<f64> {
    let order = termination_order(a, b)?;
    let coefs = regularized_coefficients(&exact(a)?, &exact(b)?, c, order);
    Ok(to_f64(&sum_powers(&coefs, &exact(z)?)))
}

/// An unreduced ratio of big integers. Skipping the gcd keeps long
/// products cheap; the value is only looked at when converted to `f64`.
#[derive(Debug, Clone)]
pub(crate) struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl Fraction {
    pub(crate) fn from_exact(v: &Exact) -> Self {
        Self {
            num: v.numer().clone(),
            den: v.denom().clone(),
        }
    }

    pub(crate) fn from_f64(v: f64) -> Result<Self> {
        Ok(Self::from_exact(&exact(v)?))
    }

    pub(crate) fn one() -> Self {
        Self {
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }

    pub(crate) fn mul(&self, other: &Fraction) -> Fraction {
        Fraction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    /// `self · p/q` for small integers, `q ≠ 0`.
    pub(crate) fn scale(&self, p: i64, q: i64) -> Fraction {
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        Fraction {
            num: &self.num * p,
            den: &self.den * q,
        }
    }

    pub(crate) fn add_one(&self) -> Fraction {
        Fraction {
            num: &self.num + &self.den,
            den: self.den.clone(),
        }
    }

    pub(crate) fn neg(&self) -> Fraction {
        Fraction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub(crate) fn recip(&self) -> Result<Fraction> {
        if self.num.is_zero() {
            return Err(WalkError::UnsupportedArgument(
                "reciprocal of an exactly vanishing value".into(),
            ));
        }
        let (num, den) = if self.num < BigInt::zero() {
            (-&self.den, -&self.num)
        } else {
            (self.den.clone(), self.num.clone())
        };
        Ok(Fraction { num, den })
    }

    /// `self^e`; negative exponents need a nonzero base.
    pub(crate) fn powi(&self, e: i64) -> Result<Fraction> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs() as usize;
        Ok(Fraction {
            num: num_traits::pow::pow(base.num, e),
            den: num_traits::pow::pow(base.den, e),
        })
    }

    pub(crate) fn to_f64(&self) -> f64 {
        to_f64(&Exact::new_raw(self.num.clone(), self.den.clone()))
    }
}

/// `1 + r₀y(1 + r₁y(1 + … (1 + r_{n−1}y)))`, the series whose consecutive
/// term ratios are `rₖ·y`, for integer ratios `rₖ = pₖ/qₖ`.
pub(crate) fn nested_series(ratios: &[(i64, i64)], y: &Fraction) -> Fraction {
    let mut acc = Fraction::one();
    for &(p, q) in ratios.iter().rev() {
        acc = acc.mul(y).scale(p, q).add_one();
    }
    acc
}
