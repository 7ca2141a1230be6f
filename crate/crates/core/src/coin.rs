//! The three-parameter Bell-basis coin.
//!
//! The coin is diagonal in the Bell basis
//! `|Φ1,2⟩ = (|0⟩ ± |3⟩)/√2`, `|Φ3,4⟩ = (|1⟩ ± |2⟩)/√2` with eigenphases
//! fixed by the angles `(x, y, z)`, each a fraction of a full turn. In the
//! computational basis it only mixes the pairs `(0, 3)` and `(1, 2)`, which
//! is what lets the walk split into two independent one-dimensional walks.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

const TAU: f64 = 2.0 * PI;

/// Coin angles as fractions of a turn (the physical angle is `2π·x`).
///
/// Values are reduced into `[0, 1)` on construction; every coin entry is
/// periodic with period one in each parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoinParams {
    x: f64,
    y: f64,
    z: f64,
}

impl CoinParams {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return invalid(format!("coin parameters must be finite, got ({x}, {y}, {z})"));
        }
        Ok(Self {
            x: x.rem_euclid(1.0),
            y: y.rem_euclid(1.0),
            z: z.rem_euclid(1.0),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Eigenphases `λ1..λ4` of the coin on `|Φ1⟩..|Φ4⟩`; they sum to zero.
    pub fn bell_phases(&self) -> [f64; 4] {
        [
            -TAU * (self.z + self.y),
            -TAU * (self.z - self.y),
            TAU * (self.z - self.x),
            TAU * (self.z + self.x),
        ]
    }

    /// The 2×2 block acting on the `(0, 3)` pair.
    pub fn plus_block(&self) -> Block {
        Block::new(TAU * self.y, -TAU * self.z)
    }

    /// The 2×2 block acting on the `(1, 2)` pair.
    pub fn anti_block(&self) -> Block {
        Block::new(TAU * self.x, TAU * self.z)
    }
}

impl fmt::Display for CoinParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// `e^{iφ} [[cos θ, −i sin θ], [−i sin θ, cos θ]]`, the coin restricted to
/// one decoupled pair of spin components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub diag: Complex64,
    pub off: Complex64,
}

impl Block {
    fn new(angle: f64, phase: f64) -> Self {
        let e = Complex64::from_polar(1.0, phase);
        Self {
            diag: e * angle.cos(),
            off: e * Complex64::new(0.0, -angle.sin()),
        }
    }

    #[inline]
    pub fn apply(&self, first: Complex64, second: Complex64) -> (Complex64, Complex64) {
        (
            self.diag * first + self.off * second,
            self.off * first + self.diag * second,
        )
    }
}

/// A 4×4 unitary acting on the spin space, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinMatrix(pub [[Complex64; 4]; 4]);

impl CoinMatrix {
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn apply(&self, v: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|c| self.0[r][c] * v[c]).sum();
        }
        out
    }

    /// Largest entrywise deviation of `C·C†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let dot: Complex64 = (0..4).map(|k| self.0[i][k] * self.0[j][k].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &CoinMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((self.0[i][j] - other.0[i][j]).norm());
            }
        }
        worst
    }
}

/// Builds the coin directly from its closed-form entries.
pub fn build_coin(params: &CoinParams) -> CoinMatrix {
    let zero = Complex64::new(0.0, 0.0);
    let p = params.plus_block();
    let a = params.anti_block();
    CoinMatrix([
        [p.diag, zero, zero, p.off],
        [zero, a.diag, a.off, zero],
        [zero, a.off, a.diag, zero],
        [p.off, zero, zero, p.diag],
    ])
}

/// The four Bell vectors `|Φ1⟩..|Φ4⟩` in the computational basis.
pub fn bell_basis() -> [[f64; 4]; 4] {
    let h = FRAC_1_SQRT_2;
    [
        [h, 0.0, 0.0, h],
        [h, 0.0, 0.0, -h],
        [0.0, h, h, 0.0],
        [0.0, h, -h, 0.0],
    ]
}

/// Builds the coin from its spectral form `Σ_k e^{iλ_k} |Φ_k⟩⟨Φ_k|`.
pub fn build_coin_from_bell(params: &CoinParams) -> CoinMatrix {
    let phases = params.bell_phases();
    let basis = bell_basis();
    let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (phi, &lambda) in basis.iter().zip(phases.iter()) {
        let e = Complex64::from_polar(1.0, lambda);
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] += e * (phi[i] * phi[j]);
            }
        }
    }
    CoinMatrix(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_angles_give_identity() {
        let coin = build_coin(&CoinParams::new(0.0, 0.0, 0.0).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((coin.entry(i, j) - want).norm() < 1e-15);
            }
        }
        let bell = build_coin_from_bell(&CoinParams::new(0.0, 0.0, 0.0).unwrap());
        assert!(bell.max_abs_diff(&coin) < 1e-15);
    }

    #[test]
    fn explicit_entries() {
        let coin = build_coin(&CoinParams::new(0.125, 0.125, 0.1).unwrap());
        let e = Complex64::from_polar(1.0, -PI / 5.0);
        let r = (PI / 4.0).cos();
        assert!((coin.entry(0, 0) - e * r).norm() < 1e-15);
        assert!((coin.entry(0, 3) - c(0.0, -1.0) * e * (PI / 4.0).sin()).norm() < 1e-15);
    }

    #[test]
    fn spectral_form_matches() {
        for &(x, y, z) in &[(0.125, 0.125, 0.1), (1.0 / 6.0, 0.125, 0.1), (0.3, 0.77, 0.41)] {
            let p = CoinParams::new(x, y, z).unwrap();
            assert!(build_coin(&p).max_abs_diff(&build_coin_from_bell(&p)) < 1e-14);
            let s: f64 = p.bell_phases().iter().sum();
            assert!(s.abs() < 1e-12);
        }
    }

    #[test]
    fn bell_vectors_are_eigenvectors() {
        let p = CoinParams::new(0.21, 0.05, 0.9).unwrap();
        let coin = build_coin_from_bell(&p);
        for (phi, &lambda) in bell_basis().iter().zip(p.bell_phases().iter()) {
            let v = phi.map(|a| c(a, 0.0));
            let cv = coin.apply(&v);
            let e = Complex64::from_polar(1.0, lambda);
            for k in 0..4 {
                assert!((cv[k] - e * v[k]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn periodic_in_each_parameter() {
        let base = build_coin(&CoinParams::new(0.2, 0.35, 0.05).unwrap());
        for shifted in [
            CoinParams::new(1.2, 0.35, 0.05),
            CoinParams::new(0.2, -0.65, 0.05),
            CoinParams::new(0.2, 0.35, 3.05),
        ] {
            assert!(build_coin(&shifted.unwrap()).max_abs_diff(&base) < 1e-13);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(CoinParams::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(CoinParams::new(0.0, f64::INFINITY, 0.0).is_err());
    }
}
