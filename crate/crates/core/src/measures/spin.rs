use serde::{Deserialize, Serialize};

use super::MeasureSeries;
use crate::coin::CoinParams;
use crate::error::{invalid, Result};
use crate::linalg::{von_neumann_entropy, Matrix, Qubit};
use crate::walk::{Evolution, SpinVector, WalkState};

/// `ρ̃ = Σ_{m,n} |s_{m,n}⟩⟨s_{m,n}|`, the spin state with position traced out.
pub fn reduced_spin_density(state: &WalkState) -> Matrix {
    let mut rho = Matrix::zeros(4);
    for (_, _, s) in state.sites() {
        rho.add_outer(&s.0);
    }
    rho
}

/// Which part of the spin the entropy series is taken over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Subsystem {
    /// Both spin qubits: the full 4×4 `ρ̃`.
    Spin,
    /// The marginal of `ρ̃` on the high-order qubit.
    QubitA,
    /// The marginal of `ρ̃` on the low-order qubit.
    #[default]
    QubitB,
}

impl Subsystem {
    pub fn entropy(&self, rho: &Matrix) -> Result<f64> {
        match self {
            Subsystem::Spin => von_neumann_entropy(rho),
            Subsystem::QubitA => von_neumann_entropy(&rho.partial_trace(Qubit::A)?),
            Subsystem::QubitB => von_neumann_entropy(&rho.partial_trace(Qubit::B)?),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Subsystem::Spin => "spin",
            Subsystem::QubitA => "qubit-a",
            Subsystem::QubitB => "qubit-b",
        }
    }
}

impl std::str::FromStr for Subsystem {
    type Err = crate::error::WalkError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spin" => Ok(Subsystem::Spin),
            "qubit-a" | "a" => Ok(Subsystem::QubitA),
            "qubit-b" | "b" => Ok(Subsystem::QubitB),
            other => invalid(format!("unknown subsystem '{other}'")),
        }
    }
}

/// Spin–position entanglement `E(t)` for `t = 0..=steps`.
pub fn spin_position_entanglement(
    spin: &SpinVector,
    params: &CoinParams,
    steps: usize,
    subsystem: Subsystem,
) -> Result<MeasureSeries> {
    let mut series = MeasureSeries::new(format!("entropy-{}", subsystem.name()));
    for state in Evolution::new(spin, params)?.take(steps + 1) {
        let rho = reduced_spin_density(&state);
        series.push(state.t(), subsystem.entropy(&rho)?)?;
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{initial_state, simulate};
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    #[test]
    fn initial_spin_density_is_pure() {
        let h = FRAC_1_SQRT_2;
        let spin = SpinVector::from_real([h, h, 0.0, 0.0]);
        let rho = reduced_spin_density(&initial_state(&spin).unwrap());
        assert!(rho.max_abs_diff(&Matrix::outer(&spin.0)) < 1e-16);
        for sub in [Subsystem::Spin, Subsystem::QubitA, Subsystem::QubitB] {
            assert!(sub.entropy(&rho).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn density_has_unit_trace_and_bounded_entropy() {
        let h = FRAC_1_SQRT_2;
        let spin = SpinVector::from_real([h, h, 0.0, 0.0]);
        let p = CoinParams::new(0.125, 0.125, 0.1).unwrap();
        let state = simulate(&spin, &p, 40).unwrap();
        let rho = reduced_spin_density(&state);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.is_hermitian(1e-14));
        let e = Subsystem::Spin.entropy(&rho).unwrap();
        assert!((0.0..=2.0 * LN_2 + 1e-12).contains(&e));
        for sub in [Subsystem::QubitA, Subsystem::QubitB] {
            let e = sub.entropy(&rho).unwrap();
            assert!((0.0..=LN_2 + 1e-12).contains(&e));
        }
    }

    #[test]
    fn series_covers_every_step() {
        let spin = SpinVector::basis(1);
        let p = CoinParams::new(0.2, 0.3, 0.0).unwrap();
        let s = spin_position_entanglement(&spin, &p, 10, Subsystem::Spin).unwrap();
        assert_eq!(s.len(), 11);
        assert_eq!(s.samples[0].t, 0);
        assert!(s.samples[0].value.abs() < 1e-12);
    }

    #[test]
    fn parses_names() {
        for sub in [Subsystem::Spin, Subsystem::QubitA, Subsystem::QubitB] {
            assert_eq!(sub.name().parse::<Subsystem>().unwrap(), sub);
        }
        assert!("c".parse::<Subsystem>().is_err());
    }
}
