//! Analytic amplitudes of the walk, independent of the step recursion.
//!
//! Within each decoupled pair the walk is a one-dimensional walk with coin
//! angle `θ = 2π·p`. Starting from a single component at the origin, the
//! amplitude to be found in the same component at coordinate `m` after `t`
//! steps is the *stay* propagator; the amplitude to be found in the partner
//! component is the *flip* propagator. Both are terminating hypergeometric
//! polynomials in `cos θ`:
//!
//! ```text
//! stay(m) = (−1)^{(t−m)/2} sin²θ · Γ((m+t+2)/2) / Γ((t−m+2)/2)
//!           · cos^m θ · 2F̃1((m−t+2)/2, (m+t+2)/2; m+1; cos²θ)
//! flip(m) = −i sin θ · cos^{t−1} θ · 2F1((2−m−t)/2, (m−t)/2; 1; −tan²θ)
//! ```
//!
//! The regularized `2F̃1` keeps `stay` finite for `m < 0`. At `m = t` the
//! series for `stay` does not terminate and its value is `cos^t θ`.
//!
//! The polynomials are evaluated in exact rational arithmetic with
//! `sin²θ = 1 − cos²θ` substituted, so the identity they encode holds exactly
//! for the `f64` value of `cos θ`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coin::CoinParams;
use crate::error::{invalid, Result, WalkError};
use crate::hypergeometric::{exact_int, factorial, nested_series, regularized_coefficients, Fraction};
use crate::walk::{initial_state, Pair, SpinVector, WalkState};

const TAU: f64 = 2.0 * PI;

fn check_site(m: i64, t: usize) -> Result<()> {
    let ti = t as i64;
    if m.abs() > ti || (ti - m).rem_euclid(2) != 0 {
        return invalid(format!("site m = {m} is not reachable at t = {t}"));
    }
    Ok(())
}

/// Stay/flip propagators of one decoupled pair at a fixed time.
///
/// Both series are summed innermost-first from their integer term ratios,
/// so every step is a product with a small integer or with `cos²θ` (resp.
/// `−tan²θ`) and no gcd is ever taken.
pub struct Propagators {
    t: usize,
    sin: f64,
    cos: Fraction,
    cos_sq: Fraction,
    sin_sq: Fraction,
}

impl Propagators {
    /// `angle` is the coin parameter as a fraction of a turn.
    pub fn new(angle: f64, t: usize) -> Result<Self> {
        let theta = TAU * angle;
        let cos = Fraction::from_f64(theta.cos())?;
        let cos_sq = cos.mul(&cos);
        let sin_sq = cos_sq.neg().add_one();
        Ok(Self {
            t,
            sin: theta.sin(),
            cos,
            cos_sq,
            sin_sq,
        })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Same-component propagator at coordinate `m`.
    pub fn stay(&self, m: i64) -> Result<Complex64> {
        check_site(m, self.t)?;
        let t = self.t as i64;
        if m == t {
            return Ok(Complex64::new(self.cos.powi(t)?.to_f64(), 0.0));
        }
        let a = (m - t + 2) / 2;
        let b = (m + t + 2) / 2;
        let c = m + 1;
        let d = (t - m + 2) / 2;
        // 1/Γ(c+k) vanishes below k0; the series stops after k = −a.
        let k0 = (-m).max(0);
        let last = -a;
        if k0 > last {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let lead = &regularized_coefficients(&exact_int(a), &exact_int(b), c, k0 as u64)[k0 as usize];
        let ratios: Vec<(i64, i64)> = (k0..last).map(|k| ((a + k) * (b + k), (k + 1) * (c + k))).collect();
        let sign = if ((t - m) / 2) % 2 == 0 { 1 } else { -1 };
        let front = crate::hypergeometric::Exact::from_integer(factorial(b - 1).to_integer() * sign)
            / factorial(d - 1)
            * lead;
        let value = Fraction::from_exact(&front)
            .mul(&self.sin_sq)
            .mul(&self.cos.powi(m + 2 * k0)?)
            .mul(&nested_series(&ratios, &self.cos_sq));
        Ok(Complex64::new(value.to_f64(), 0.0))
    }

    /// Partner-component propagator at coordinate `m`.
    pub fn flip(&self, m: i64) -> Result<Complex64> {
        check_site(m, self.t)?;
        let t = self.t as i64;
        if t == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let a = (2 - m - t) / 2;
        let b = (m - t) / 2;
        let order = if a <= 0 { (-a).min(-b) } else { -b };
        let ratios: Vec<(i64, i64)> = (0..order).map(|k| ((a + k) * (b + k), (k + 1) * (k + 1))).collect();
        let sum = if ratios.is_empty() {
            Fraction::one()
        } else {
            // 2F1(...; −tan²θ)
            let cos_sq_inv = self.cos_sq.recip().map_err(|_| {
                WalkError::UnsupportedArgument("flip propagator needs cos θ ≠ 0".into())
            })?;
            nested_series(&ratios, &self.sin_sq.mul(&cos_sq_inv).neg())
        };
        let value = self.cos.powi(t - 1)?.mul(&sum);
        Ok(Complex64::new(0.0, -self.sin * value.to_f64()))
    }
}

/// `F_m` of the analytic solution: the stay propagator.
pub fn stay_amplitude(m: i64, t: usize, angle: f64) -> Result<Complex64> {
    Propagators::new(angle, t)?.stay(m)
}

/// `G_m` of the analytic solution: the flip propagator.
pub fn flip_amplitude(m: i64, t: usize, angle: f64) -> Result<Complex64> {
    Propagators::new(angle, t)?.flip(m)
}

/// Tabulated propagators for both pairs at one time, reusable across
/// initial spins.
pub struct ClosedForm {
    t: usize,
    z: f64,
    /// stay/flip on coordinates `−t..=t` (step 2) for the `(0,3)` pair.
    plus_stay: Vec<Complex64>,
    plus_flip: Vec<Complex64>,
    anti_stay: Vec<Complex64>,
    anti_flip: Vec<Complex64>,
}

fn tabulate(angle: f64, t: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let props = Propagators::new(angle, t)?;
    let zero = Complex64::new(0.0, 0.0);
    let mut stay = Vec::with_capacity(t + 1);
    let mut flip = Vec::with_capacity(t + 1);
    for j in 0..=t {
        let m = 2 * j as i64 - t as i64;
        // m = −t never enters the solution (boundary factors).
        if j == 0 {
            stay.push(zero);
            flip.push(zero);
        } else {
            stay.push(props.stay(m)?);
            flip.push(props.flip(m)?);
        }
    }
    Ok((stay, flip))
}

impl ClosedForm {
    pub fn new(params: &CoinParams, t: usize) -> Result<Self> {
        let (plus_stay, plus_flip) = if t == 0 { (vec![], vec![]) } else { tabulate(params.y(), t)? };
        let (anti_stay, anti_flip) = if t == 0 { (vec![], vec![]) } else { tabulate(params.x(), t)? };
        Ok(Self {
            t,
            z: params.z(),
            plus_stay,
            plus_flip,
            anti_stay,
            anti_flip,
        })
    }

    pub fn amplitudes(&self, spin: &SpinVector) -> Result<WalkState> {
        let t = self.t;
        if t == 0 {
            return initial_state(spin);
        }
        if !spin.is_normalized() {
            return invalid("initial spin must be normalized");
        }
        let [a0, a1, a2, a3] = spin.0;
        let phase_plus = Complex64::from_polar(1.0, -TAU * self.z * t as f64);
        let phase_anti = phase_plus.conj();
        let zero = Complex64::new(0.0, 0.0);
        let mut plus = Vec::with_capacity(t + 1);
        let mut anti = Vec::with_capacity(t + 1);
        for j in 0..=t {
            // index of −m is t − j
            let r = t - j;
            let first_p = if j == 0 { zero } else { phase_plus * (self.plus_stay[j] * a0 + self.plus_flip[j] * a3) };
            let second_p = if j == t { zero } else { phase_plus * (self.plus_flip[r] * a0 + self.plus_stay[r] * a3) };
            let first_a = if j == 0 { zero } else { phase_anti * (self.anti_stay[j] * a1 + self.anti_flip[j] * a2) };
            let second_a = if j == t { zero } else { phase_anti * (self.anti_flip[r] * a1 + self.anti_stay[r] * a2) };
            plus.push(Pair::new(first_p, second_p));
            anti.push(Pair::new(first_a, second_a));
        }
        WalkState::from_diagonals(t, plus, anti)
    }
}

/// The walk state at time `t` from the analytic solution.
pub fn amplitudes_closed(spin: &SpinVector, params: &CoinParams, t: usize) -> Result<WalkState> {
    ClosedForm::new(params, t)?.amplitudes(spin)
}
