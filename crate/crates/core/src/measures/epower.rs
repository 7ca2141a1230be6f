use num_complex::Complex64;
use rayon::prelude::*;

use super::{MeasureSeries, QuadratureSpec};
use crate::coin::CoinParams;
use crate::error::Result;
use crate::linalg::{purity, Matrix};
use crate::quadrature::{gauss_legendre, periodic_trapezoid};
use crate::walk::{initial_state, step, SpinVector, WalkState};

type C64 = Complex64;
const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// The linear map `|s⟩⟨s| ↦ ρ̃(t)` from an initial spin to the reduced spin
/// state after `t` steps, as a 16×16 matrix on vectorized operators.
///
/// The walk is linear in the initial spin, so each site's spinor is `K_k s`
/// for a 4×4 matrix `K_k` whose columns come from evolving the four basis
/// spins. Then `ρ̃_{ij} = Σ_{ab} Φ_{(ij),(ab)} s_a s̄_b` with
/// `Φ_{(ij),(ab)} = Σ_k K_k[i][a] conj(K_k[j][b])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinChannel {
    t: usize,
    phi: Box<[[C64; 16]; 16]>,
}

impl SpinChannel {
    /// Builds the channel at time `t` by evolving the basis spins.
    pub fn at(params: &CoinParams, t: usize) -> Result<Self> {
        let mut states = basis_states()?;
        for _ in 0..t {
            states = states.map(|s| step(&s, params));
        }
        Ok(Self::from_basis_states(&states))
    }

    /// `states[a]` must be the walk started from basis spin `a`, all at the
    /// same time.
    pub fn from_basis_states(states: &[WalkState; 4]) -> Self {
        let mut phi = Box::new([[ZERO; 16]; 16]);
        let columns = states.each_ref().map(|s| s.sites());
        #[allow(clippy::needless_range_loop)]
        for k in 0..columns[0].len() {
            let kraus: [[C64; 4]; 4] = std::array::from_fn(|a| columns[a][k].2 .0);
            // kraus[a][i] = K_k[i][a]
            for i in 0..4 {
                for j in 0..4 {
                    let row = &mut phi[4 * i + j];
                    for a in 0..4 {
                        let kia = kraus[a][i];
                        if kia == ZERO {
                            continue;
                        }
                        for b in 0..4 {
                            row[4 * a + b] += kia * kraus[b][j].conj();
                        }
                    }
                }
            }
        }
        Self { t: states[0].t(), phi }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// `ρ̃(t)` for the walk started from `spin`.
    pub fn apply(&self, spin: &SpinVector) -> Matrix {
        let s = spin.0;
        let mut outer = [ZERO; 16];
        for a in 0..4 {
            for b in 0..4 {
                outer[4 * a + b] = s[a] * s[b].conj();
            }
        }
        let mut rho = Matrix::zeros(4);
        for i in 0..4 {
            for j in 0..4 {
                let row = &self.phi[4 * i + j];
                let v = row.iter().zip(&outer).map(|(p, o)| p * o).sum();
                rho.set(i, j, v);
            }
        }
        rho
    }

    /// Quadrature average of the linear entropy `1 − tr ρ̃²` over the
    /// samples, summed in order.
    pub fn mean_linear_entropy(&self, samples: &[ProductStateSample]) -> f64 {
        samples
            .iter()
            .map(|s| s.weight * (1.0 - purity(&self.apply(&s.spin))))
            .sum()
    }
}

fn basis_states() -> Result<[WalkState; 4]> {
    Ok([
        initial_state(&SpinVector::basis(0))?,
        initial_state(&SpinVector::basis(1))?,
        initial_state(&SpinVector::basis(2))?,
        initial_state(&SpinVector::basis(3))?,
    ])
}

/// One node of the product-state quadrature; weights sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductStateSample {
    pub spin: SpinVector,
    pub weight: f64,
}

fn bloch_qubit(u: f64, alpha: f64) -> [C64; 2] {
    let c = ((1.0 + u) / 2.0).max(0.0).sqrt();
    let s = ((1.0 - u) / 2.0).max(0.0).sqrt();
    [C64::new(c, 0.0), C64::from_polar(s, alpha)]
}

impl ProductStateSample {
    /// Tensor grid over `(cos θ₁, α₁, cos θ₂, α₂)`, normalized so the
    /// weights integrate the uniform measure on the two Bloch spheres.
    pub fn grid(quad: &QuadratureSpec) -> Result<Vec<Self>> {
        let quad = QuadratureSpec::new(quad.n_theta, quad.n_alpha)?;
        let (us, uw) = gauss_legendre(quad.n_theta)?;
        let (alphas, aw) = periodic_trapezoid(quad.n_alpha)?;
        let norm = 1.0 / (16.0 * std::f64::consts::PI * std::f64::consts::PI);
        let mut qubits = Vec::with_capacity(us.len() * alphas.len());
        for (u, wu) in us.iter().zip(&uw) {
            for (alpha, wa) in alphas.iter().zip(&aw) {
                qubits.push((bloch_qubit(*u, *alpha), wu * wa));
            }
        }
        let mut out = Vec::with_capacity(qubits.len() * qubits.len());
        for (qa, wa) in &qubits {
            for (qb, wb) in &qubits {
                out.push(Self {
                    spin: SpinVector::product(*qa, *qb),
                    weight: norm * wa * wb,
                });
            }
        }
        Ok(out)
    }
}

/// Average linear entropy of `ρ̃(t)` over product initial spins.
pub fn entangling_power(params: &CoinParams, t: usize, quad: &QuadratureSpec) -> Result<f64> {
    let samples = ProductStateSample::grid(quad)?;
    Ok(SpinChannel::at(params, t)?.mean_linear_entropy(&samples))
}

/// Entangling power for `t = 0..=steps` from a single evolution of the
/// basis spins. Time points are evaluated in parallel; each sum runs in a
/// fixed order so the output does not depend on the thread count.
pub fn entangling_power_series(params: &CoinParams, steps: usize, quad: &QuadratureSpec) -> Result<MeasureSeries> {
    let samples = ProductStateSample::grid(quad)?;
    let mut states = basis_states()?;
    let mut channels = Vec::with_capacity(steps + 1);
    for t in 0..=steps {
        if t > 0 {
            states = states.map(|s| step(&s, params));
        }
        channels.push(SpinChannel::from_basis_states(&states));
    }
    let values: Vec<f64> = channels
        .par_iter()
        .map(|c| c.mean_linear_entropy(&samples))
        .collect();
    MeasureSeries::from_pairs("entangling-power", values.into_iter().enumerate())
}
