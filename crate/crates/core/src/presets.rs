//! Named coin and spin settings, and the tail-model shapes reported for them.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::asymptotics::{BasisKind, BasisTerm};
use crate::coin::CoinParams;
use crate::error::{invalid, Result};
use crate::walk::SpinVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoinPreset {
    P1,
    P2,
    P3,
}

impl CoinPreset {
    pub const ALL: [CoinPreset; 3] = [CoinPreset::P1, CoinPreset::P2, CoinPreset::P3];

    pub fn params(&self) -> CoinParams {
        let (x, y, z) = match self {
            CoinPreset::P1 => (1.0 / 8.0, 1.0 / 8.0, 1.0 / 10.0),
            CoinPreset::P2 => (1.0 / 8.0, 1.0 / 12.0, 1.0 / 10.0),
            CoinPreset::P3 => (1.0 / 6.0, 1.0 / 8.0, 1.0 / 10.0),
        };
        CoinParams::new(x, y, z).expect("preset parameters are finite")
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoinPreset::P1 => "p1",
            CoinPreset::P2 => "p2",
            CoinPreset::P3 => "p3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Oscillating terms of the spin–position entanglement tail.
    pub fn entropy_basis(&self) -> Vec<BasisTerm> {
        use BasisKind::*;
        match self {
            CoinPreset::P1 => vec![
                BasisTerm::new(CosineSq, PI / 2.0, 0.0, 2.0),
                BasisTerm::new(SineSq, PI / 4.0, PI / 8.0, 2.5),
            ],
            CoinPreset::P2 => vec![
                BasisTerm::new(CosineSq, PI / 6.0, PI / 12.0, 0.5),
                BasisTerm::new(SineSq, PI / 4.0, PI / 8.0, 0.5),
            ],
            CoinPreset::P3 => vec![
                BasisTerm::new(CosineSq, PI / 4.0, PI / 8.0, 0.5),
                BasisTerm::new(SineSq, PI / 3.0, PI / 6.0, 0.5),
            ],
        }
    }

    /// Oscillating terms of the entangling-power tail.
    pub fn entangling_power_basis(&self) -> Vec<BasisTerm> {
        use BasisKind::*;
        match self {
            CoinPreset::P1 => vec![BasisTerm::new(Sine, -PI / 2.0, PI / 8.0, 0.25)],
            CoinPreset::P2 => vec![
                BasisTerm::new(Sine, PI / 3.0, PI / 12.0, 0.25),
                BasisTerm::new(Sine, PI / 2.0, PI / 16.0, 0.25),
            ],
            CoinPreset::P3 => vec![
                BasisTerm::new(Sine, PI / 2.0, 0.0, 0.25),
                BasisTerm::new(Sine, -2.0 * PI / 3.0, PI / 6.0, 0.25),
            ],
        }
    }

    /// Oscillating terms shared by the sandwiched and Petz divergence tails.
    pub fn renyi_basis(&self) -> Vec<BasisTerm> {
        use BasisKind::*;
        match self {
            CoinPreset::P1 => vec![
                BasisTerm::new(Sine, PI / 4.0, PI / 16.0, 1.5),
                BasisTerm::new(Cosine, PI / 2.0, PI / 16.0, 0.5),
            ],
            CoinPreset::P2 => vec![
                BasisTerm::new(Cosine, PI / 3.0, PI / 12.0, 0.5),
                BasisTerm::new(Cosine, PI / 2.0, PI / 8.0, 0.5),
            ],
            CoinPreset::P3 => vec![
                BasisTerm::new(Sine, -PI / 2.0, PI / 6.0, 0.5),
                BasisTerm::new(Cosine, 2.0 * PI / 3.0, PI / 4.0, 0.5),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinPreset {
    /// `|0⟩ ⊗ (|0⟩ + |1⟩)/√2`.
    Initen,
    /// `(|00⟩ + i|01⟩)/√2`.
    Renyi,
}

impl SpinPreset {
    pub fn spin(&self) -> SpinVector {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            SpinPreset::Initen => SpinVector([h, h, zero, zero]),
            SpinPreset::Renyi => SpinVector([h, Complex64::new(0.0, FRAC_1_SQRT_2), zero, zero]),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SpinPreset::Initen => "initen",
            SpinPreset::Renyi => "renyi",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [SpinPreset::Initen, SpinPreset::Renyi]
            .into_iter()
            .find(|p| p.name() == name)
    }
}

/// Parses `0.125`, `1/6` or `-3/4`. Fractions are divided once, so `1/6`
/// is the nearest double to one sixth.
pub fn parse_fraction(s: &str) -> Result<f64> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad_number(s))?;
            let den: f64 = den.trim().parse().map_err(|_| bad_number(s))?;
            if den == 0.0 {
                return invalid(format!("zero denominator in '{s}'"));
            }
            num / den
        }
        None => s.parse().map_err(|_| bad_number(s))?,
    };
    if !value.is_finite() {
        return invalid(format!("'{s}' is not finite"));
    }
    Ok(value)
}

fn bad_number(s: &str) -> crate::error::WalkError {
    crate::error::WalkError::InvalidArgument(format!("cannot parse '{s}' as a number or fraction"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/6").unwrap(), 1.0 / 6.0);
        assert_eq!(parse_fraction(" 0.125 ").unwrap(), 0.125);
        assert_eq!(parse_fraction("-3/4").unwrap(), -0.75);
        assert!(parse_fraction("1/0").is_err());
        assert!(parse_fraction("abc").is_err());
        assert!(parse_fraction("inf").is_err());
    }

    #[test]
    fn presets_round_trip_names() {
        for p in CoinPreset::ALL {
            assert_eq!(CoinPreset::from_name(p.name()), Some(p));
        }
        assert_eq!(SpinPreset::from_name("renyi"), Some(SpinPreset::Renyi));
        assert!(SpinPreset::Initen.spin().is_normalized());
        assert!(SpinPreset::Renyi.spin().is_normalized());
    }
}
