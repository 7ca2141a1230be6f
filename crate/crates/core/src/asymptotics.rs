//! Tail models `c + Σ aᵢ·fᵢ(ωᵢt + φᵢ)/t^{pᵢ}` and their linear fits.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measures::MeasureSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Sine,
    Cosine,
    SineSq,
    CosineSq,
}

/// One oscillation shape with fixed frequency and phase; only its
/// amplitude is fitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BasisTerm {
    pub angular_frequency: f64,
    pub phase: f64,
    pub decay_power: f64,
    pub kind: BasisKind,
}

impl BasisTerm {
    pub fn new(kind: BasisKind, angular_frequency: f64, phase: f64, decay_power: f64) -> Self {
        Self {
            angular_frequency,
            phase,
            decay_power,
            kind,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.angular_frequency.is_finite() || !self.phase.is_finite() {
            return invalid("basis frequency and phase must be finite");
        }
        if !(self.decay_power >= 0.0 && self.decay_power.is_finite()) {
            return invalid(format!("decay power must be >= 0, got {}", self.decay_power));
        }
        Ok(())
    }

    /// The unit-amplitude term at time `t > 0`. Squared kinds go through
    /// the half-angle form.
    pub fn eval(&self, t: f64) -> f64 {
        let u = self.angular_frequency * t + self.phase;
        let shape = match self.kind {
            BasisKind::Sine => u.sin(),
            BasisKind::Cosine => u.cos(),
            BasisKind::SineSq => 0.5 * (1.0 - (2.0 * u).cos()),
            BasisKind::CosineSq => 0.5 * (1.0 + (2.0 * u).cos()),
        };
        shape / t.powf(self.decay_power)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelTerm {
    pub amplitude: f64,
    #[serde(flatten)]
    pub basis: BasisTerm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticModel {
    pub constant: f64,
    pub terms: Vec<ModelTerm>,
}

impl AsymptoticModel {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, amplitude: f64, basis: BasisTerm) -> Self {
        self.terms.push(ModelTerm { amplitude, basis });
        self
    }

    pub fn basis(&self) -> Vec<BasisTerm> {
        self.terms.iter().map(|t| t.basis).collect()
    }
}

pub fn eval_model(model: &AsymptoticModel, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return invalid(format!("model time must be positive, got {t}"));
    }
    for term in &model.terms {
        term.basis.validate()?;
    }
    Ok(model.constant + model.terms.iter().map(|m| m.amplitude * m.basis.eval(t)).sum::<f64>())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FitReport {
    pub model: AsymptoticModel,
    pub rms_residual: f64,
    pub max_residual: f64,
    pub window: (usize, usize),
    pub samples: usize,
}

impl FitReport {
    pub fn constant(&self) -> f64 {
        self.model.constant
    }

    pub fn amplitudes(&self) -> Vec<f64> {
        self.model.terms.iter().map(|t| t.amplitude).collect()
    }
}

/// Relative singular-value cutoff below which the design is rank deficient.
const RANK_TOL: f64 = 1e-10;

/// The default fitting window `[T/2, T]` for a series ending at `T`.
pub fn default_window(series: &MeasureSeries) -> Result<(usize, usize)> {
    match series.samples.last() {
        Some(last) => Ok((last.t / 2, last.t)),
        None => invalid("empty series has no window"),
    }
}

/// Least-squares fit of the constant and the amplitude of every basis term
/// over the samples with `t₀ ≤ t ≤ t₁`.
pub fn fit_tail(series: &MeasureSeries, basis: &[BasisTerm], window: (usize, usize)) -> Result<FitReport> {
    for b in basis {
        b.validate()?;
    }
    let (t0, t1) = window;
    let points: Vec<(f64, f64)> = series
        .window(t0, t1)
        .filter(|s| s.t > 0)
        .map(|s| (s.t as f64, s.value))
        .collect();
    let cols = basis.len() + 1;
    if points.len() < cols + 1 {
        return invalid(format!(
            "window [{t0}, {t1}] holds {} samples, need at least {}",
            points.len(),
            cols + 1
        ));
    }
    let mut design = DMatrix::from_fn(points.len(), cols, |i, j| {
        if j == 0 {
            1.0
        } else {
            basis[j - 1].eval(points[i].0)
        }
    });
    // unit-norm columns so the rank test is scale free
    let mut scales = vec![0.0; cols];
    for (j, scale) in scales.iter_mut().enumerate() {
        let n = design.column(j).norm();
        if n == 0.0 {
            return invalid(format!("basis term {j} vanishes on the window"));
        }
        design.column_mut(j).unscale_mut(n);
        *scale = n;
    }
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|p| p.1));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= RANK_TOL * smax {
        return invalid("fit design is rank deficient (duplicate or dependent basis terms)");
    }
    let coef = svd
        .solve(&rhs, 0.0)
        .map_err(|e| crate::error::WalkError::InvalidArgument(e.to_string()))?;
    let residual = &design * &coef - &rhs;
    let rms = (residual.norm_squared() / points.len() as f64).sqrt();
    let max = residual.amax();
    let coef: Vec<f64> = coef.iter().zip(&scales).map(|(c, s)| c / s).collect();
    let model = AsymptoticModel {
        constant: coef[0],
        terms: basis
            .iter()
            .zip(&coef[1..])
            .map(|(b, a)| ModelTerm {
                amplitude: *a,
                basis: *b,
            })
            .collect(),
    };
    Ok(FitReport {
        model,
        rms_residual: rms,
        max_residual: max,
        window,
        samples: points.len(),
    })
}

/// Mean of the samples with `t₀ ≤ t ≤ t₁`.
pub fn tail_constant(series: &MeasureSeries, window: (usize, usize)) -> Result<f64> {
    let (sum, n) = series
        .window(window.0, window.1)
        .fold((0.0, 0usize), |(s, n), x| (s + x.value, n + 1));
    if n == 0 {
        return invalid(format!("window [{}, {}] holds no samples", window.0, window.1));
    }
    Ok(sum / n as f64)
}
