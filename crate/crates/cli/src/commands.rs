use std::path::Path;

use bellwalk::asymptotics::{default_window, fit_tail, tail_constant};
use bellwalk::closed_form::ClosedForm;
use bellwalk::continuum::{dirac_u, dirac_v, packet_norm, Kinematics, PacketSpec};
use bellwalk::measures::{
    entangling_power_series, entanglement_grid, reduced_spin_density, renyi_series, MeasureSeries,
};
use bellwalk::{Evolution, WalkState};
use serde_json::json;

use crate::args::Measure;
use crate::config::Settings;
use crate::error::CliError;
use crate::output::{Payload, Table};

/// Largest tolerated `| |ψ|² − 1 |` before a run is aborted.
const NORM_DRIFT: f64 = 1e-9;

/// The outcome of a command: output to write, then possibly an error to
/// report after writing.
pub struct Outcome {
    pub payload: Payload,
    pub after: Option<CliError>,
}

impl Outcome {
    fn ok(payload: Payload) -> Self {
        Self { payload, after: None }
    }
}

fn checked(state: WalkState) -> Result<WalkState, CliError> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_DRIFT || !norm.is_finite() {
        return Err(CliError::NormDrift { t: state.t(), norm });
    }
    Ok(state)
}

fn evolve(s: &Settings) -> Result<impl Iterator<Item = Result<WalkState, CliError>>, CliError> {
    Ok(Evolution::new(&s.spin, &s.coin)?.take(s.steps + 1).map(checked))
}

fn final_state(s: &Settings) -> Result<WalkState, CliError> {
    let mut last = None;
    for state in evolve(s)? {
        last = Some(state?);
    }
    last.ok_or_else(|| CliError::Runtime("no states produced".into()))
}

fn series_table(series: &MeasureSeries) -> Table {
    let mut t = Table::new(&["t", "value"]);
    for s in &series.samples {
        t.push(vec![s.t.into(), s.value.into()]);
    }
    t
}

pub fn simulate(s: &Settings) -> Result<Outcome, CliError> {
    let state = final_state(s)?;
    let mut table = Table::new(&["t", "m", "n", "component", "re", "im"]);
    for (m, n, spin) in state.sites() {
        let components: &[usize] = match (m == n, m == -n) {
            (true, true) => &[0, 1, 2, 3],
            (true, false) => &[0, 3],
            _ => &[1, 2],
        };
        for &i in components {
            let a = spin.0[i];
            table.push(vec![state.t().into(), m.into(), n.into(), i.into(), a.re.into(), a.im.into()]);
        }
    }
    Ok(Outcome::ok(Payload::Table(table)))
}

pub fn check_closed_form(s: &Settings) -> Result<Outcome, CliError> {
    let mut worst: f64 = 0.0;
    let mut worst_t = 0;
    let mut per_step = Vec::with_capacity(s.steps + 1);
    for state in evolve(s)? {
        let state = state?;
        let t = state.t();
        let closed = ClosedForm::new(&s.coin, t)?.amplitudes(&s.spin)?;
        let diff = closed.max_abs_diff(&state)?;
        per_step.push(diff);
        if diff > worst {
            worst = diff;
            worst_t = t;
        }
    }
    let pass = worst < s.tolerance;
    let report = json!({
        "maxAbsDiff": worst,
        "worstT": worst_t,
        "tolerance": s.tolerance,
        "pass": pass,
        "perStep": per_step,
    });
    let after = (!pass).then(|| {
        CliError::CheckFailed(format!("max |closed - recursion| = {worst:e} at t = {worst_t}"))
    });
    Ok(Outcome {
        payload: Payload::Report(report),
        after,
    })
}

fn entropy_series(s: &Settings) -> Result<MeasureSeries, CliError> {
    let mut series = MeasureSeries::new(format!("entropy-{}", s.subsystem.name()));
    for state in evolve(s)? {
        let state = state?;
        let e = s.subsystem.entropy(&reduced_spin_density(&state))?;
        series.push(state.t(), e)?;
    }
    Ok(series)
}

pub fn entropy(s: &Settings) -> Result<Outcome, CliError> {
    Ok(Outcome::ok(Payload::Table(series_table(&entropy_series(s)?))))
}

pub fn grid(s: &Settings) -> Result<Outcome, CliError> {
    let state = final_state(s)?;
    let rows = entanglement_grid(&state, s.keep);
    let total: f64 = rows.iter().map(|r| r.probability).sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(CliError::NormDrift { t: state.t(), norm: total });
    }
    let mut table = Table::new(&["t", "m", "n", "P", "E_site"]);
    for r in rows {
        table.push(vec![state.t().into(), r.m.into(), r.n.into(), r.probability.into(), r.entanglement.into()]);
    }
    Ok(Outcome::ok(Payload::Table(table)))
}

pub fn epower(s: &Settings) -> Result<Outcome, CliError> {
    let series = entangling_power_series(&s.coin, s.steps, &s.quadrature)?;
    Ok(Outcome::ok(Payload::Table(series_table(&series))))
}

pub fn renyi(s: &Settings) -> Result<Outcome, CliError> {
    let r = renyi_series(&s.spin, &s.coin, s.alpha, s.steps)?;
    let mut table = Table::new(&["t", "srd", "rre"]);
    for t in 1..=s.steps {
        table.push(vec![t.into(), r.srd.value_at(t).into(), r.rre.value_at(t).into()]);
    }
    let mut flagged: Vec<usize> = r.srd.flagged.iter().chain(&r.rre.flagged).copied().collect();
    flagged.sort_unstable();
    flagged.dedup();
    let after = (!flagged.is_empty()).then(|| CliError::Divergence(format!("overlap vanished at t = {flagged:?}")));
    Ok(Outcome {
        payload: Payload::Table(table),
        after,
    })
}

pub fn continuum_check(_s: &Settings) -> Result<Outcome, CliError> {
    let mut spinor: f64 = 0.0;
    for m in [0.1, 1.0, 5.0] {
        for k in 0..100 {
            let p = -10.0 + 20.0 * k as f64 / 99.0;
            let kin = Kinematics::new(p, m)?;
            let (u, v, v_rev) = (dirac_u(p, m)?, dirac_v(p, m)?, dirac_v(-p, m)?);
            let two_e = 2.0 * kin.energy;
            spinor = spinor
                .max((u.norm_sqr() - two_e).abs())
                .max((v.norm_sqr() - two_e).abs())
                .max(u.dot(&v_rev).norm())
                .max(((kin.q_plus * kin.q_minus).powi(2) - m * m).abs())
                .max((kin.q_plus.powi(2) + kin.q_minus.powi(2) - two_e).abs());
        }
    }
    let mut packet: f64 = 0.0;
    for sigma in [0.5, 1.0, 4.0] {
        for m in [0.1, 1.0] {
            let spec = PacketSpec::new(sigma, 1.1, 0.4)?;
            packet = packet.max((packet_norm(&spec, m, 2048)? - 1.0).abs());
        }
    }
    let pass = spinor <= 1e-12 && packet <= 1e-6;
    let report = json!({
        "spinorMaxDefect": spinor,
        "spinorTolerance": 1e-12,
        "packetMaxDefect": packet,
        "packetTolerance": 1e-6,
        "pass": pass,
    });
    let after = (!pass).then(|| CliError::CheckFailed(format!("spinor defect {spinor:e}, packet defect {packet:e}")));
    Ok(Outcome {
        payload: Payload::Report(report),
        after,
    })
}

fn read_series(path: &Path) -> Result<MeasureSeries, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut series = MeasureSeries::new(path.display().to_string());
    for record in reader.records() {
        let record = record?;
        let bad = || CliError::Usage(format!("{}: rows must be t,value", path.display()));
        let t: usize = record.get(0).and_then(|v| v.trim().parse().ok()).ok_or_else(bad)?;
        match record.get(1).map(str::trim) {
            Some("") | None => series.flag(t),
            Some(v) => series.push(t, v.parse().map_err(|_| bad())?)?,
        }
    }
    Ok(series)
}

fn computed_series(s: &Settings) -> Result<MeasureSeries, CliError> {
    Ok(match s.measure {
        Measure::Entropy => entropy_series(s)?,
        Measure::Epower => entangling_power_series(&s.coin, s.steps, &s.quadrature)?,
        Measure::Srd => renyi_series(&s.spin, &s.coin, s.alpha, s.steps)?.srd,
        Measure::Rre => renyi_series(&s.spin, &s.coin, s.alpha, s.steps)?.rre,
    })
}

pub fn fit(s: &Settings) -> Result<Outcome, CliError> {
    let series = match &s.input {
        Some(p) => read_series(p)?,
        None => computed_series(s)?,
    };
    let basis = s.basis.as_ref().ok_or_else(|| {
        CliError::Usage("fit needs --basis, --basis-preset or a preset coin".into())
    })?;
    let window = match s.window {
        Some(w) => w,
        None => default_window(&series)?,
    };
    let report = fit_tail(&series, basis, window)?;
    let terms: Vec<_> = report
        .model
        .terms
        .iter()
        .map(|t| {
            json!({
                "amplitude": t.amplitude,
                "angularFrequency": t.basis.angular_frequency,
                "phase": t.basis.phase,
                "decayPower": t.basis.decay_power,
                "kind": t.basis.kind,
            })
        })
        .collect();
    let value = json!({
        "constant": report.model.constant,
        "terms": terms,
        "rmsResidual": report.rms_residual,
        "maxResidual": report.max_residual,
        "window": [window.0, window.1],
        "samples": report.samples,
        "tailMean": tail_constant(&series, window)?,
    });
    Ok(Outcome::ok(Payload::Report(value)))
}

