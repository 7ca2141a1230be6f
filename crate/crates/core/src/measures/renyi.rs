use serde::{Deserialize, Serialize};

use super::{reduced_spin_density, MeasureSeries};
use crate::coin::CoinParams;
use crate::error::{invalid, Result, WalkError};
use crate::linalg::{mat_power, DensityMatrix, Matrix};
use crate::walk::{Evolution, SpinVector};

/// Trace arguments at or below this are treated as orthogonal states.
const DIVERGENCE_FLOOR: f64 = 1e-300;

/// Overlaps `⟨ψ₀|ρ̃|ψ₀⟩` at or below this are round-off of an exact zero.
pub const OVERLAP_FLOOR: f64 = 1e-14;

fn check_order(alpha: f64, allow_zero: bool) -> Result<()> {
    if !alpha.is_finite() || alpha == 1.0 {
        return invalid(format!("Rényi order must be finite and not 1, got {alpha}"));
    }
    let low_ok = if allow_zero { alpha >= 0.0 } else { alpha > 0.0 };
    if !low_ok || alpha > 1.0 {
        return Err(WalkError::UnsupportedArgument(format!(
            "Rényi order {alpha} outside the supported range"
        )));
    }
    Ok(())
}

fn log_ratio(arg: f64, norm: f64, alpha: f64) -> Result<f64> {
    if arg <= DIVERGENCE_FLOOR || !arg.is_finite() {
        return Err(WalkError::Divergence(format!(
            "trace argument {arg:e} at order {alpha}"
        )));
    }
    Ok((arg / norm).ln() / (alpha - 1.0))
}

/// Sandwiched Rényi divergence
/// `(1/(α−1)) ln( tr[(σ^β ρ σ^β)^α] / tr ρ )` with `β = (1−α)/2α`,
/// for `0 < α < 1`.
///
/// The sandwich carries eigenvalues of `ρ` as `λ^{1/α}`, so at small `α`
/// the weak end of a spread spectrum is lost to round-off.
pub fn srd(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_order(alpha, false)?;
    let beta = (1.0 - alpha) / (2.0 * alpha);
    let s = mat_power(sigma.matrix(), beta)?;
    let sandwich = s * *rho.matrix() * s;
    // symmetrize the rounding before the spectral power
    let sandwich = (sandwich + sandwich.adjoint()).scale(0.5.into());
    let arg = mat_power(&sandwich, alpha)?.trace().re;
    log_ratio(arg, rho.matrix().trace().re, alpha)
}

/// Petz–Rényi relative entropy `(1/(α−1)) ln( tr[ρ^α σ^{1−α}] / tr ρ )`,
/// for `0 ≤ α < 1`.
pub fn rre(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<f64> {
    check_order(alpha, true)?;
    let arg = (mat_power(rho.matrix(), alpha)? * mat_power(sigma.matrix(), 1.0 - alpha)?)
        .trace()
        .re;
    log_ratio(arg, rho.matrix().trace().re, alpha)
}

/// `(1/(α−1)) ln( Σ p^α q^{1−α} / Σ p )`.
pub fn classical_renyi(p: &[f64], q: &[f64], alpha: f64) -> Result<f64> {
    if !alpha.is_finite() || alpha == 1.0 {
        return invalid(format!("Rényi order must be finite and not 1, got {alpha}"));
    }
    if p.len() != q.len() {
        return invalid(format!("length mismatch: {} vs {}", p.len(), q.len()));
    }
    if p.iter().chain(q).any(|v| *v < 0.0 || !v.is_finite()) {
        return invalid("probabilities must be finite and non-negative");
    }
    if p.iter().zip(q).any(|(pi, qi)| *pi > 0.0 && *qi == 0.0) {
        return invalid("support of p is not contained in support of q");
    }
    let arg: f64 = p
        .iter()
        .zip(q)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, qi)| pi.powf(alpha) * qi.powf(1.0 - alpha))
        .sum();
    log_ratio(arg, p.iter().sum(), alpha)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenyiSeries {
    pub alpha: f64,
    pub srd: MeasureSeries,
    pub rre: MeasureSeries,
}

/// Divergences of `ρ̃(t)` from the initial spin projector for
/// `t = 1..=steps`.
///
/// With `σ = |ψ₀⟩⟨ψ₀|` every positive power of `σ` is `σ`, so the SRD is
/// `(α/(α−1)) ln⟨ψ₀|ρ̃|ψ₀⟩` and the RRE is `(1/(α−1)) ln⟨ψ₀|ρ̃^α|ψ₀⟩`.
/// Both vanish together, so a sample is flagged in both series once the
/// overlap falls to [`OVERLAP_FLOOR`].
pub fn renyi_series(spin: &SpinVector, params: &CoinParams, alpha: f64, steps: usize) -> Result<RenyiSeries> {
    check_order(alpha, false)?;
    if steps < 1 {
        return invalid("Rényi series needs at least one step");
    }
    let psi = spin.0;
    let mut srd_series = MeasureSeries::new(format!("srd-{alpha}"));
    let mut rre_series = MeasureSeries::new(format!("rre-{alpha}"));
    for state in Evolution::new(spin, params)?.skip(1).take(steps) {
        let t = state.t();
        let rho = reduced_spin_density(&state);
        let overlap = rho.expectation(&psi).re;
        if overlap <= OVERLAP_FLOOR {
            srd_series.flag(t);
            rre_series.flag(t);
            continue;
        }
        srd_series.push(t, alpha * log_ratio(overlap, 1.0, alpha)?)?;
        let powered = mat_power(&hermitian_part(&rho), alpha)?;
        rre_series.push(t, log_ratio(powered.expectation(&psi).re, 1.0, alpha)?)?;
    }
    Ok(RenyiSeries {
        alpha,
        srd: srd_series,
        rre: rre_series,
    })
}

fn hermitian_part(m: &Matrix) -> Matrix {
    (*m + m.adjoint()).scale(0.5.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn diag(p: &[f64]) -> DensityMatrix {
        DensityMatrix::new(Matrix::from_real_diagonal(p)).unwrap()
    }

    fn random_probs(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    }

    #[test]
    fn hand_evaluated_examples() {
        let rho = diag(&[0.5, 0.5, 0.0, 0.0]);
        let sigma = diag(&[0.25; 4]);
        assert!((srd(&rho, &sigma, 0.5).unwrap() - LN_2).abs() < 1e-14);
        assert!((rre(&rho, &sigma, 0.5).unwrap() - LN_2).abs() < 1e-14);
        assert!((classical_renyi(&[0.5, 0.5, 0.0, 0.0], &[0.25; 4], 0.5).unwrap() - LN_2).abs() < 1e-14);
        assert!((classical_renyi(&[1.0, 0.0], &[0.5, 0.5], 0.5).unwrap() - LN_2).abs() < 1e-14);
    }

    #[test]
    fn identical_states_give_zero() {
        let h = FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&SpinVector::new([
            Complex64::new(h, 0.0),
            Complex64::new(0.0, h),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]))
        .unwrap();
        for alpha in [0.25, 0.5, 0.75] {
            assert!(srd(&rho, &rho, alpha).unwrap().abs() < 1e-12);
            assert!(rre(&rho, &rho, alpha).unwrap().abs() < 1e-12);
        }
        let mixed = diag(&[0.1, 0.2, 0.3, 0.4]);
        assert!(srd(&mixed, &mixed, 0.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn commuting_pairs_reduce_to_classical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_probs(&mut rng, 4);
            let q = random_probs(&mut rng, 4);
            for alpha in [0.25, 0.5, 0.75] {
                let cl = classical_renyi(&p, &q, alpha).unwrap();
                assert!((srd(&diag(&p), &diag(&q), alpha).unwrap() - cl).abs() < 1e-12);
                assert!((rre(&diag(&p), &diag(&q), alpha).unwrap() - cl).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthogonal_states_diverge() {
        let rho = diag(&[1.0, 0.0, 0.0, 0.0]);
        let sigma = diag(&[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(srd(&rho, &sigma, 0.5), Err(WalkError::Divergence(_))));
        assert!(matches!(rre(&rho, &sigma, 0.5), Err(WalkError::Divergence(_))));
    }

    #[test]
    fn bad_orders_and_supports() {
        let rho = diag(&[0.5, 0.5, 0.0, 0.0]);
        assert!(matches!(srd(&rho, &rho, 1.0), Err(WalkError::InvalidArgument(_))));
        assert!(matches!(rre(&rho, &rho, 1.0), Err(WalkError::InvalidArgument(_))));
        assert!(srd(&rho, &rho, 0.0).is_err());
        assert!(rre(&rho, &rho, 0.0).is_ok());
        assert!(matches!(
            classical_renyi(&[0.5, 0.5], &[1.0, 0.0], 0.5),
            Err(WalkError::InvalidArgument(_))
        ));
        assert!(classical_renyi(&[1.0], &[1.0], 1.0).is_err());
    }

    #[test]
    fn series_matches_generic_path() {
        let h = FRAC_1_SQRT_2;
        let spin = SpinVector::new([
            Complex64::new(h, 0.0),
            Complex64::new(0.0, h),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]);
        let p = CoinParams::new(0.125, 0.125, 0.1).unwrap();
        let sigma = DensityMatrix::pure(&spin).unwrap();
        let series = renyi_series(&spin, &p, 0.25, 30).unwrap();
        assert_eq!(series.srd.len(), 30);
        assert_eq!(series.srd.samples[0].t, 1);
        for (t, state) in Evolution::new(&spin, &p).unwrap().enumerate().skip(1).take(30) {
            let rho = DensityMatrix::new(reduced_spin_density(&state)).unwrap();
            let s = srd(&rho, &sigma, 0.25).unwrap();
            let r = rre(&rho, &sigma, 0.25).unwrap();
            assert!((series.srd.value_at(t).unwrap() - s).abs() < 1e-9, "srd t = {t}");
            assert!((series.rre.value_at(t).unwrap() - r).abs() < 1e-9, "rre t = {t}");
            assert!(s >= -1e-12);
        }
    }

    #[test]
    fn vanishing_overlap_flags_both_series() {
        // y = 1/4 sends every |00⟩ amplitude to |11⟩ on the first step
        let params = CoinParams::new(0.0, 0.25, 0.0).unwrap();
        let r = renyi_series(&SpinVector::basis(0), &params, 0.25, 3).unwrap();
        assert_eq!(r.srd.flagged, vec![1, 3]);
        assert_eq!(r.rre.flagged, vec![1, 3]);
        assert!(r.srd.value_at(2).unwrap().abs() < 1e-12);
    }
}
