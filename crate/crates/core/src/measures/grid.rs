use serde::{Deserialize, Serialize};

use super::{GridDistribution, GridEntry, SITE_PROBABILITY_FLOOR};
use crate::error::{Result, WalkError};
use crate::linalg::{von_neumann_entropy, Matrix, Qubit};
use crate::walk::{SpinVector, WalkState};

/// `P_{m,n}(t) = Σ_i |A^{(i)}_{m,n}|²` over the supported sites.
pub fn probability_grid(state: &WalkState) -> GridDistribution {
    let entries = state
        .sites()
        .into_iter()
        .map(|(m, n, v)| GridEntry { m, n, value: v.norm_sqr() })
        .collect();
    GridDistribution { t: state.t(), entries }
}

fn conditional_entropy(spin: &SpinVector, keep: Qubit) -> Option<f64> {
    let p = spin.norm_sqr();
    if p <= SITE_PROBABILITY_FLOOR {
        return None;
    }
    let inv = 1.0 / p.sqrt();
    let v: Vec<_> = spin.0.iter().map(|a| a * inv).collect();
    let reduced = Matrix::outer(&v).partial_trace(keep).ok()?;
    von_neumann_entropy(&reduced).ok()
}

/// Entanglement between the two spin qubits of the conditional state at a
/// site, keeping qubit A (tracing out B).
pub fn site_entanglement(state: &WalkState, m: i64, n: i64) -> Result<f64> {
    site_entanglement_with(state, m, n, Qubit::A)
}

/// As [`site_entanglement`] with a choice of which qubit to keep. For a
/// pure conditional state both choices agree.
pub fn site_entanglement_with(state: &WalkState, m: i64, n: i64, keep: Qubit) -> Result<f64> {
    state
        .site_spinor(m, n)
        .and_then(|s| conditional_entropy(&s, keep))
        .ok_or(WalkError::UndefinedSite { m, n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub m: i64,
    pub n: i64,
    pub probability: f64,
    /// `None` where the site probability is below the conditioning floor.
    pub entanglement: Option<f64>,
}

/// Probability and per-site entanglement over every supported site.
pub fn entanglement_grid(state: &WalkState, keep: Qubit) -> Vec<GridRow> {
    state
        .sites()
        .into_iter()
        .map(|(m, n, v)| GridRow {
            m,
            n,
            probability: v.norm_sqr(),
            entanglement: conditional_entropy(&v, keep),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coin::CoinParams;
    use crate::walk::{initial_state, simulate, Pair};
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

    #[test]
    fn initial_grid_is_a_point() {
        let s = initial_state(&SpinVector::basis(2)).unwrap();
        let g = probability_grid(&s);
        assert_eq!(g.entries, vec![GridEntry { m: 0, n: 0, value: 1.0 }]);
    }

    #[test]
    fn one_step_probabilities() {
        let y = 0.13;
        let s = simulate(&SpinVector::basis(0), &CoinParams::new(0.4, y, 0.2).unwrap(), 1).unwrap();
        let g = probability_grid(&s);
        assert!((g.get(1, 1) - (2.0 * PI * y).cos().powi(2)).abs() < 1e-15);
        assert!((g.get(-1, -1) - (2.0 * PI * y).sin().powi(2)).abs() < 1e-15);
        assert!((g.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn product_state_has_no_site_entanglement() {
        let h = FRAC_1_SQRT_2;
        let s = initial_state(&SpinVector::from_real([h, h, 0.0, 0.0])).unwrap();
        assert!(site_entanglement(&s, 0, 0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn bell_site_is_maximally_entangled() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let s = WalkState::from_diagonals(0, vec![Pair::new(h, h)], vec![Pair::new(z, z)]).unwrap();
        for keep in [Qubit::A, Qubit::B] {
            assert!((site_entanglement_with(&s, 0, 0, keep).unwrap() - LN_2).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_sites_are_undefined() {
        let s = simulate(&SpinVector::basis(0), &CoinParams::new(0.1, 0.0, 0.0).unwrap(), 3).unwrap();
        // y = 0: everything moves along +m, the rest of the diagonal is empty
        assert!(matches!(site_entanglement(&s, -1, -1), Err(WalkError::UndefinedSite { .. })));
        assert!(matches!(site_entanglement(&s, 0, 1), Err(WalkError::UndefinedSite { .. })));
        assert!(site_entanglement(&s, 3, 3).is_ok());
    }
}
