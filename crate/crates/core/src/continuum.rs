//! Continuum limit of the walk: two Dirac fermions in 1+1 dimensions
//! coupled to a constant gauge potential.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{invalid, Result, WalkError};
use crate::walk::SpinVector;

type C64 = Complex64;

/// Constant modes of the continuum fields. `k1`, `k2` pick the branch of
/// the mass combinations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ContinuumParams {
    pub alpha_bar: f64,
    pub xi_bar: f64,
    pub theta_bar1: f64,
    pub theta_bar2: f64,
    pub k1: i64,
    pub k2: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ContinuumFields {
    /// `(A₀, A₁)` seen by the `+` fermion.
    pub a_plus: (f64, f64),
    pub a_minus: (f64, f64),
    pub mass_plus: C64,
    pub mass_minus: C64,
}

/// `Θ± = θ̄₁ e^{i(ᾱ−ξ̄+k₁π)} ± e^{i(ᾱ+ξ̄+k₂π)} θ̄₂`,
/// `𝓜± = (Θ₊ ∓ Θ₋)/2`, `A± = (ᾱ ∓ ξ̄, 0)`.
pub fn continuum_fields(p: &ContinuumParams) -> ContinuumFields {
    let first = C64::from_polar(p.theta_bar1, p.alpha_bar - p.xi_bar + p.k1 as f64 * PI);
    let second = C64::from_polar(1.0, p.alpha_bar + p.xi_bar + p.k2 as f64 * PI) * p.theta_bar2;
    let theta_plus = first + second;
    let theta_minus = first - second;
    ContinuumFields {
        a_plus: (p.alpha_bar - p.xi_bar, 0.0),
        a_minus: (p.alpha_bar + p.xi_bar, 0.0),
        mass_plus: (theta_plus - theta_minus) / 2.0,
        mass_minus: (theta_plus + theta_minus) / 2.0,
    }
}

/// `p₀ = √(p² + m²)` and `Q± = √(p₀ ± p)`. The smaller root is taken as
/// `m / Q_larger` to avoid cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub energy: f64,
    pub q_plus: f64,
    pub q_minus: f64,
}

impl Kinematics {
    pub fn new(p: f64, m: f64) -> Result<Self> {
        if !p.is_finite() || !m.is_finite() || m < 0.0 {
            return invalid(format!("need finite p and m >= 0, got p = {p}, m = {m}"));
        }
        let energy = p.hypot(m);
        if energy == 0.0 {
            return Err(WalkError::DegenerateSpinor { p, m });
        }
        let (q_plus, q_minus) = if p >= 0.0 {
            let big = (energy + p).sqrt();
            (big, m / big)
        } else {
            let big = (energy - p).sqrt();
            (m / big, big)
        };
        Ok(Self {
            energy,
            q_plus,
            q_minus,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiracSpinor(pub [C64; 2]);

impl DiracSpinor {
    pub fn dot(&self, other: &DiracSpinor) -> C64 {
        self.0[0].conj() * other.0[0] + self.0[1].conj() * other.0[1]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0[0].norm_sqr() + self.0[1].norm_sqr()
    }
}

/// Positive-energy spinor `u(p) = (Q₋, Q₊)`.
pub fn dirac_u(p: f64, m: f64) -> Result<DiracSpinor> {
    let k = Kinematics::new(p, m)?;
    Ok(DiracSpinor([k.q_minus.into(), k.q_plus.into()]))
}

/// Negative-energy spinor `v(p) = (Q₋, −Q₊)`.
pub fn dirac_v(p: f64, m: f64) -> Result<DiracSpinor> {
    let k = Kinematics::new(p, m)?;
    Ok(DiracSpinor([k.q_minus.into(), (-k.q_plus).into()]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn sign(&self) -> f64 {
        match self {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        }
    }
}

/// `E(p) = V ± √(p² + m²)`.
pub fn dispersion(p: f64, potential: f64, m: f64, branch: Branch) -> f64 {
    potential + branch.sign() * p.hypot(m)
}

/// Momenta where the lower branch is non-negative, `|p| ≤ √(V² − m²)`;
/// `None` when `V < m`.
pub fn positive_energy_window(potential: f64, m: f64) -> Option<(f64, f64)> {
    if potential < m {
        return None;
    }
    let r = ((potential - m) * (potential + m)).sqrt();
    Some((-r, r))
}

/// Gaussian packet of width `sigma` whose spin factor points along the
/// Bloch angles `(theta, mu)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub sigma: f64,
    pub theta: f64,
    pub mu: f64,
}

impl PacketSpec {
    pub fn new(sigma: f64, theta: f64, mu: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite()) || !theta.is_finite() || !mu.is_finite() {
            return invalid(format!("packet needs finite angles and sigma > 0, got sigma = {sigma}"));
        }
        Ok(Self { sigma, theta, mu })
    }
}

/// Mode coefficients `(a_p, b_{−p})` of the packet.
pub fn packet_coefficients(spec: &PacketSpec, m: f64, p: f64) -> Result<(C64, C64)> {
    let spec = PacketSpec::new(spec.sigma, spec.theta, spec.mu)?;
    let k = Kinematics::new(p, m)?;
    let s = spec.sigma;
    let envelope = (2.0 * PI * s * s).powf(0.25) * (-p * p * s * s / 4.0).exp() / (2.0 * k.energy).sqrt();
    let c = (spec.theta / 2.0).cos();
    let twist = C64::from_polar((spec.theta / 2.0).sin(), spec.mu);
    let a = envelope * (k.q_minus * c + k.q_plus * twist);
    let b = envelope * (k.q_plus * c - k.q_minus * twist);
    Ok((a, b))
}

/// `∫ dp/2π (|a|² + |b|²)` by the trapezoid rule on `|p| ≤ 12/σ`.
pub fn packet_norm(spec: &PacketSpec, m: f64, nodes: usize) -> Result<f64> {
    if nodes < 2 {
        return invalid("packet quadrature needs at least 2 nodes");
    }
    let half = 12.0 / spec.sigma;
    let h = 2.0 * half / (nodes - 1) as f64;
    let mut sum = 0.0;
    for k in 0..nodes {
        let p = -half + k as f64 * h;
        let (a, b) = packet_coefficients(spec, m, p)?;
        let w = if k == 0 || k == nodes - 1 { 0.5 } else { 1.0 };
        sum += w * (a.norm_sqr() + b.norm_sqr());
    }
    Ok(sum * h / (2.0 * PI))
}

/// Reassembles the walk's four components from the two fermions:
/// `(ψ₊₁, ψ₊₂, ψ₋₁, ψ₋₂) ↦ (ψ₊₁, ψ₋₂, ψ₊₂, ψ₋₁)`.
pub fn assemble_walk_spinor(psi_plus: [C64; 2], psi_minus: [C64; 2]) -> SpinVector {
    SpinVector([psi_plus[0], psi_minus[1], psi_plus[1], psi_minus[0]])
}

/// Energy of the two-fermion system,
/// `2α ± √(p₁² + θ₁²) ± √(p₂² + θ₂²)`.
pub fn two_particle_spectrum(
    p1: f64,
    p2: f64,
    alpha: f64,
    theta1: f64,
    theta2: f64,
    branches: (Branch, Branch),
) -> f64 {
    2.0 * alpha + branches.0.sign() * p1.hypot(theta1) + branches.1.sign() * p2.hypot(theta2)
}
