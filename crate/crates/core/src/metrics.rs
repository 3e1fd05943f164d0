//! Peak activation `α_m` and time of peak `t_m` extracted from run output,
//! plus the trace and metrics CSV writers.

use std::fmt;
use std::io::Write;

use crate::diffusion::RunOutput;
use crate::error::{Error, Result};
use crate::fmt::real;

/// Which series of a node is measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerView {
    Named(String),
    /// Sum over all replicas of the node.
    Aggregate,
}

impl fmt::Display for LayerView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerView::Named(name) => f.write_str(name),
            LayerView::Aggregate => f.write_str("AGGREGATE"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActivationTrace {
    pub node: String,
    pub layer: LayerView,
    /// Energy at `t = 0..=T`.
    pub series: Vec<f64>,
    pub alpha_m: f64,
    pub t_m: usize,
}

impl ActivationTrace {
    pub fn from_series(node: impl Into<String>, layer: LayerView, series: Vec<f64>) -> Self {
        let (t_m, alpha_m) = peak(&series);
        ActivationTrace {
            node: node.into(),
            layer,
            series,
            alpha_m,
            t_m,
        }
    }
}

/// Maximum of `series` and the earliest index attaining it.
pub fn peak(series: &[f64]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (t, &x) in series.iter().enumerate() {
        if x > best.1 {
            best = (t, x);
        }
    }
    best
}

fn layer_position(run: &RunOutput, view: &LayerView) -> Result<Option<usize>> {
    match view {
        LayerView::Aggregate => Ok(None),
        LayerView::Named(name) => run
            .layer_position(name)
            .map(Some)
            .ok_or_else(|| Error::UnknownLayer(name.clone())),
    }
}

pub fn extract_trace(run: &RunOutput, node: &str, view: &LayerView) -> Result<ActivationTrace> {
    let layer = layer_position(run, view)?;
    let pos = run
        .position(node)
        .ok_or_else(|| Error::NotRecorded(vec![node.to_string()]))?;
    let series = match layer {
        Some(l) => run.replica_series(pos, l),
        None => run.aggregate_series(pos),
    };
    Ok(ActivationTrace::from_series(node, view.clone(), series))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricRow {
    pub node: String,
    pub layer: LayerView,
    pub alpha_m: f64,
    pub t_m: usize,
}

/// One row per target, in input order. Every target missing from the run is
/// reported in a single error.
pub fn batch_metrics(
    run: &RunOutput,
    targets: &[&str],
    view: &LayerView,
) -> Result<Vec<MetricRow>> {
    if targets.is_empty() {
        return Err(Error::InvalidConfig("no metric targets given".into()));
    }
    layer_position(run, view)?;
    let missing: Vec<String> = targets
        .iter()
        .filter(|t| run.position(t).is_none())
        .map(|t| t.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::NotRecorded(missing));
    }
    targets
        .iter()
        .map(|t| {
            let trace = extract_trace(run, t, view)?;
            Ok(MetricRow {
                node: trace.node,
                layer: trace.layer,
                alpha_m: trace.alpha_m,
                t_m: trace.t_m,
            })
        })
        .collect()
}

pub const TRACE_HEADER: &str = "node,layer,t,energy";
pub const METRICS_HEADER: &str = "node,layer,alpha_m,t_m";

/// Quotes a CSV field when it contains a delimiter, quote or line break.
pub fn csv_field(s: &str) -> std::borrow::Cow<'_, str> {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\"")).into()
    } else {
        s.into()
    }
}

/// Writes every recorded replica series as `node,layer,t,energy`.
pub fn write_trace_csv<W: Write>(run: &RunOutput, mut out: W) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for (pos, label) in run.labels().iter().enumerate() {
        for (l, layer) in run.layer_names().iter().enumerate() {
            for t in 0..=run.horizon() {
                writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(label),
                    csv_field(layer),
                    t,
                    real(run.energy(t, pos, l))
                )?;
            }
        }
    }
    Ok(())
}

pub fn write_metrics_csv<W: Write>(rows: &[MetricRow], mut out: W) -> Result<()> {
    writeln!(out, "{METRICS_HEADER}")?;
    for row in rows {
        writeln!(
            out,
            "{},{},{},{}",
            csv_field(&row.node),
            csv_field(&row.layer.to_string()),
            real(row.alpha_m),
            row.t_m
        )?;
    }
    Ok(())
}
