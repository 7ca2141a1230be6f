//! Walk state on the two lattice diagonals and its exact evolution.
//!
//! Components 0 and 3 only ever occupy sites `(m, m)` and components 1 and 2
//! only sites `(m, −m)`, and at time `t` only sites with `m ≡ t (mod 2)` are
//! reachable. The state therefore stores two arrays of `t + 1` pairs each,
//! indexed by `j` with `m = −t + 2j`. One step costs `O(t)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coin::CoinParams;
use crate::error::{invalid, Result};

pub type C64 = Complex64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Tolerance for treating a spin vector as normalized.
pub const NORM_TOL: f64 = 1e-12;

/// Spin amplitudes for the basis states `|0⟩..|3⟩`, where `i = 2a + b` for
/// qubit bits `a` (A) and `b` (B).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinVector(pub [C64; 4]);

impl SpinVector {
    pub fn new(amps: [C64; 4]) -> Self {
        Self(amps)
    }

    pub fn from_real(amps: [f64; 4]) -> Self {
        Self(amps.map(|a| C64::new(a, 0.0)))
    }

    pub fn basis(i: usize) -> Self {
        let mut a = [ZERO; 4];
        a[i] = C64::new(1.0, 0.0);
        Self(a)
    }

    /// Product state `|ψ_A⟩ ⊗ |ψ_B⟩` under the `i = 2a + b` ordering.
    pub fn product(qubit_a: [C64; 2], qubit_b: [C64; 2]) -> Self {
        Self([
            qubit_a[0] * qubit_b[0],
            qubit_a[0] * qubit_b[1],
            qubit_a[1] * qubit_b[0],
            qubit_a[1] * qubit_b[1],
        ])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    /// Rescales to unit norm; fails on a zero or non-finite vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if !n.is_finite() || n <= 0.0 {
            return invalid("spin vector has zero or non-finite norm");
        }
        let s = 1.0 / n.sqrt();
        Ok(Self(self.0.map(|a| a * s)))
    }

    pub fn amplitudes(&self) -> &[C64; 4] {
        &self.0
    }
}

/// Amplitudes on one diagonal: `first` is component 0 (plus) or 1 (anti),
/// `second` is component 3 (plus) or 2 (anti).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pair {
    pub first: C64,
    pub second: C64,
}

impl Pair {
    pub fn new(first: C64, second: C64) -> Self {
        Self { first, second }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.first.norm_sqr() + self.second.norm_sqr()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkState {
    t: usize,
    /// `(A0, A3)` at site `(m, m)`.
    plus: Vec<Pair>,
    /// `(A1, A2)` at site `(m, −m)`.
    anti: Vec<Pair>,
}

impl WalkState {
    /// Builds a state from raw diagonal arrays; both must hold `t + 1` pairs.
    pub fn from_diagonals(t: usize, plus: Vec<Pair>, anti: Vec<Pair>) -> Result<Self> {
        if plus.len() != t + 1 || anti.len() != t + 1 {
            return invalid(format!(
                "diagonals must hold {} entries at t = {t}, got {} and {}",
                t + 1,
                plus.len(),
                anti.len()
            ));
        }
        Ok(Self { t, plus, anti })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn plus(&self) -> &[Pair] {
        &self.plus
    }

    pub fn anti(&self) -> &[Pair] {
        &self.anti
    }

    /// Lattice coordinate `m` of diagonal index `j`.
    #[inline]
    pub fn coord(&self, j: usize) -> i64 {
        2 * j as i64 - self.t as i64
    }

    /// Diagonal index of coordinate `m`, if the site is on the support.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let t = self.t as i64;
        if m < -t || m > t || (m + t) % 2 != 0 {
            None
        } else {
            Some(((m + t) / 2) as usize)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.plus.iter().chain(self.anti.iter()).map(Pair::norm_sqr).sum()
    }

    /// Full amplitude `A^{(i)}_{m,n}`; zero off the support.
    pub fn amplitude(&self, component: usize, m: i64, n: i64) -> C64 {
        let spin = self.site_spinor(m, n);
        spin.map(|s| s.0[component]).unwrap_or(ZERO)
    }

    /// The (unnormalized) spin vector at site `(m, n)`, or `None` off the
    /// support. At the origin both diagonals meet and all four components
    /// can be nonzero.
    pub fn site_spinor(&self, m: i64, n: i64) -> Option<SpinVector> {
        let mut out = [ZERO; 4];
        let mut hit = false;
        if m == n {
            if let Some(j) = self.index_of(m) {
                out[0] = self.plus[j].first;
                out[3] = self.plus[j].second;
                hit = true;
            }
        }
        if m == -n {
            if let Some(j) = self.index_of(m) {
                out[1] = self.anti[j].first;
                out[2] = self.anti[j].second;
                hit = true;
            }
        }
        hit.then_some(SpinVector(out))
    }

    /// Every supported site in ascending `(m, n)` order with its spin vector.
    pub fn sites(&self) -> Vec<(i64, i64, SpinVector)> {
        let mut out = Vec::with_capacity(2 * self.t + 1);
        for j in 0..=self.t {
            let m = self.coord(j);
            if m == 0 {
                let p = self.plus[j];
                let a = self.anti[j];
                out.push((0, 0, SpinVector([p.first, a.first, a.second, p.second])));
            } else {
                let p = self.plus[j];
                let a = self.anti[j];
                out.push((m, m, SpinVector([p.first, ZERO, ZERO, p.second])));
                out.push((m, -m, SpinVector([ZERO, a.first, a.second, ZERO])));
            }
        }
        out.sort_by_key(|&(m, n, _)| (m, n));
        out
    }

    /// Largest entrywise amplitude difference against another state at the
    /// same time.
    pub fn max_abs_diff(&self, other: &WalkState) -> Result<f64> {
        if self.t != other.t {
            return invalid(format!("time mismatch: {} vs {}", self.t, other.t));
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self
            .plus
            .iter()
            .zip(&other.plus)
            .chain(self.anti.iter().zip(&other.anti))
        {
            worst = worst
                .max((a.first - b.first).norm())
                .max((a.second - b.second).norm());
        }
        Ok(worst)
    }

    /// Checks norm and the boundary zeros implied by the evolution.
    pub fn validate(&self) -> Result<()> {
        let t = self.t;
        if self.plus.len() != t + 1 || self.anti.len() != t + 1 {
            return invalid("diagonal length does not match t + 1");
        }
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return invalid(format!("norm {norm} differs from 1 at t = {t}"));
        }
        if t > 0 {
            let edge = [
                self.plus[0].first,
                self.plus[t].second,
                self.anti[0].first,
                self.anti[t].second,
            ];
            if edge.iter().any(|a| *a != ZERO) {
                return invalid(format!("boundary amplitude nonzero at t = {t}"));
            }
        }
        Ok(())
    }
}

/// The walk at `t = 0`, localized at the origin.
pub fn initial_state(spin: &SpinVector) -> Result<WalkState> {
    if !spin.is_normalized() {
        return invalid(format!(
            "initial spin must be normalized, |s|^2 = {}",
            spin.norm_sqr()
        ));
    }
    let a = spin.0;
    Ok(WalkState {
        t: 0,
        plus: vec![Pair::new(a[0], a[3])],
        anti: vec![Pair::new(a[1], a[2])],
    })
}

fn step_diagonal(old: &[Pair], block: crate::coin::Block) -> Vec<Pair> {
    // new.first[j] comes from old[j-1] (moves m -> m+1),
    // new.second[j] from old[j] (moves m -> m-1).
    let n = old.len();
    let mut out = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let first = if j > 0 {
            let p = old[j - 1];
            block.apply(p.first, p.second).0
        } else {
            ZERO
        };
        let second = if j < n {
            let p = old[j];
            block.apply(p.first, p.second).1
        } else {
            ZERO
        };
        out.push(Pair::new(first, second));
    }
    out
}

/// One application of shift·coin.
pub fn step(state: &WalkState, params: &CoinParams) -> WalkState {
    WalkState {
        t: state.t + 1,
        plus: step_diagonal(&state.plus, params.plus_block()),
        anti: step_diagonal(&state.anti, params.anti_block()),
    }
}

/// State after `steps` applications of the walk operator.
pub fn simulate(spin: &SpinVector, params: &CoinParams, steps: usize) -> Result<WalkState> {
    let mut state = initial_state(spin)?;
    for _ in 0..steps {
        state = step(&state, params);
    }
    Ok(state)
}

/// Iterator over the states at `t = 0, 1, 2, ...`.
pub struct Evolution {
    params: CoinParams,
    next: Option<WalkState>,
}

impl Evolution {
    pub fn new(spin: &SpinVector, params: &CoinParams) -> Result<Self> {
        Ok(Self {
            params: *params,
            next: Some(initial_state(spin)?),
        })
    }
}

impl Iterator for Evolution {
    type Item = WalkState;

    fn next(&mut self) -> Option<WalkState> {
        let cur = self.next.take()?;
        self.next = Some(step(&cur, &self.params));
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn params(x: f64, y: f64, z: f64) -> CoinParams {
        CoinParams::new(x, y, z).unwrap()
    }

    #[test]
    fn initial_state_layout() {
        let s = initial_state(&SpinVector::basis(0)).unwrap();
        assert_eq!(s.plus(), &[Pair::new(c(1.0, 0.0), ZERO)]);
        assert_eq!(s.anti(), &[Pair::default()]);

        let h = FRAC_1_SQRT_2;
        let s = initial_state(&SpinVector::new([c(h, 0.0), c(0.0, h), ZERO, ZERO])).unwrap();
        assert_eq!(s.plus()[0], Pair::new(c(h, 0.0), ZERO));
        assert_eq!(s.anti()[0], Pair::new(c(0.0, h), ZERO));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_spin() {
        assert!(initial_state(&SpinVector::from_real([1.0, 1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn one_step_plus_diagonal() {
        let (x, y, z) = (0.3, 0.1, 0.07);
        let s = simulate(&SpinVector::basis(0), &params(x, y, z), 1).unwrap();
        let e = C64::from_polar(1.0, -2.0 * PI * z);
        assert!((s.amplitude(0, 1, 1) - e * (2.0 * PI * y).cos()).norm() < 1e-15);
        assert!((s.amplitude(3, -1, -1) - e * c(0.0, -(2.0 * PI * y).sin())).norm() < 1e-15);
        assert_eq!(s.amplitude(0, -1, -1), ZERO);
        assert_eq!(s.amplitude(3, 1, 1), ZERO);
        assert!(s.anti().iter().all(|p| p.norm_sqr() == 0.0));
    }

    #[test]
    fn one_step_anti_diagonal() {
        let (x, y, z) = (0.3, 0.1, 0.07);
        let s = simulate(&SpinVector::basis(1), &params(x, y, z), 1).unwrap();
        let e = C64::from_polar(1.0, 2.0 * PI * z);
        assert!((s.amplitude(1, 1, -1) - e * (2.0 * PI * x).cos()).norm() < 1e-15);
        assert!((s.amplitude(2, -1, 1) - e * c(0.0, -(2.0 * PI * x).sin())).norm() < 1e-15);
    }

    #[test]
    fn leading_edge_amplitude() {
        let (y, z) = (0.125, 0.1);
        let p = params(0.2, y, z);
        for t in [1usize, 5, 17, 40] {
            let s = simulate(&SpinVector::basis(0), &p, t).unwrap();
            let want = C64::from_polar(1.0, -2.0 * PI * t as f64 * z) * (2.0 * PI * y).cos().powi(t as i32);
            let got = s.amplitude(0, t as i64, t as i64);
            assert!((got - want).norm() < 1e-14, "t={t}");
        }
    }

    #[test]
    fn sectors_stay_decoupled() {
        let p = params(1.0 / 6.0, 0.125, 0.1);
        let h = FRAC_1_SQRT_2;
        let s = simulate(&SpinVector::from_real([h, 0.0, 0.0, h]), &p, 60).unwrap();
        assert!(s.anti().iter().all(|q| q.first == ZERO && q.second == ZERO));
        let s = simulate(&SpinVector::from_real([0.0, h, -h, 0.0]), &p, 60).unwrap();
        assert!(s.plus().iter().all(|q| q.first == ZERO && q.second == ZERO));
    }

    #[test]
    fn states_validate_along_evolution() {
        let p = params(1.0 / 8.0, 1.0 / 12.0, 0.1);
        let spin = SpinVector::new([c(0.5, 0.1), c(0.2, -0.4), c(0.3, 0.3), c(-0.1, 0.2)])
            .normalized()
            .unwrap();
        for s in Evolution::new(&spin, &p).unwrap().take(200) {
            s.validate().unwrap();
        }
    }

    #[test]
    fn sites_cover_support_once() {
        let spin = SpinVector::from_real([0.5, 0.5, 0.5, 0.5]);
        let s = simulate(&spin, &params(0.1, 0.2, 0.3), 4).unwrap();
        let sites = s.sites();
        assert_eq!(sites.len(), 2 * 4 + 1);
        let total: f64 = sites.iter().map(|(_, _, v)| v.norm_sqr()).sum();
        assert!((total - 1.0).abs() < 1e-14);
        assert!(sites.windows(2).all(|w| (w[0].0, w[0].1) < (w[1].0, w[1].1)));
        assert!(s.site_spinor(1, 0).is_none());
        assert!(s.site_spinor(1, 1).is_none());
    }
}
