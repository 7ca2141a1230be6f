//! Information-theoretic measures of the walk.

mod epower;
mod grid;
mod renyi;
mod spin;

pub use epower::{entangling_power, entangling_power_series, ProductStateSample, SpinChannel};
pub use grid::{entanglement_grid, probability_grid, site_entanglement, site_entanglement_with, GridRow};
pub use renyi::{classical_renyi, renyi_series, rre, srd, RenyiSeries, OVERLAP_FLOOR};
pub use spin::{reduced_spin_density, spin_position_entanglement, Subsystem};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Below this probability a site's conditional spin state is undefined.
pub const SITE_PROBABILITY_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridEntry {
    pub m: i64,
    pub n: i64,
    pub value: f64,
}

/// Values on the sites of the 2d lattice, sorted by `(m, n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridDistribution {
    pub t: usize,
    pub entries: Vec<GridEntry>,
}

impl GridDistribution {
    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.value).sum()
    }

    pub fn get(&self, m: i64, n: i64) -> f64 {
        self.entries
            .binary_search_by_key(&(m, n), |e| (e.m, e.n))
            .map(|i| self.entries[i].value)
            .unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: usize,
    pub value: f64,
}

/// A time series of one scalar measure. Samples whose value diverged are
/// left out of `samples` and listed in `flagged`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSeries {
    pub label: String,
    pub samples: Vec<Sample>,
    #[serde(default)]
    pub flagged: Vec<usize>,
}

impl MeasureSeries {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            samples: Vec::new(),
            flagged: Vec::new(),
        }
    }

    pub fn from_pairs(label: impl Into<String>, pairs: impl IntoIterator<Item = (usize, f64)>) -> Result<Self> {
        let mut s = Self::new(label);
        for (t, value) in pairs {
            s.push(t, value)?;
        }
        Ok(s)
    }

    /// Appends a sample; times must be strictly increasing.
    pub fn push(&mut self, t: usize, value: f64) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if t <= last.t {
                return invalid(format!("series times must increase: {t} after {}", last.t));
            }
        }
        self.samples.push(Sample { t, value });
        Ok(())
    }

    pub fn flag(&mut self, t: usize) {
        self.flagged.push(t);
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn value_at(&self, t: usize) -> Option<f64> {
        self.samples
            .binary_search_by_key(&t, |s| s.t)
            .ok()
            .map(|i| self.samples[i].value)
    }

    pub fn window(&self, t0: usize, t1: usize) -> impl Iterator<Item = &Sample> {
        self.samples.iter().filter(move |s| s.t >= t0 && s.t <= t1)
    }
}

/// Tensor-product rule for the integral over product initial states:
/// Gauss–Legendre in each `cos θ`, periodic trapezoid in each phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuadratureSpec {
    pub n_theta: usize,
    pub n_alpha: usize,
}

impl QuadratureSpec {
    pub fn new(n_theta: usize, n_alpha: usize) -> Result<Self> {
        if n_theta < 2 || n_alpha < 2 {
            return invalid(format!(
                "quadrature needs at least 2 nodes per angle, got ({n_theta}, {n_alpha})"
            ));
        }
        Ok(Self { n_theta, n_alpha })
    }

    pub fn doubled(&self) -> Self {
        Self {
            n_theta: 2 * self.n_theta,
            n_alpha: 2 * self.n_alpha,
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { n_theta: 8, n_alpha: 8 }
    }
}
