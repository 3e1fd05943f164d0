//! `multispread run`: every item over the full (seed layer, D_x, R) grid.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use log::{info, warn};
use multispread_core::diffusion::Engine;
use multispread_core::fmt::real;
use multispread_core::graph::largest_viable_cluster;
use multispread_core::metrics::{batch_metrics, csv_field, write_trace_csv};
use multispread_core::{LayerSelector, LayerView, MultiplexNetwork, Recording, SimulationConfig};
use rayon::prelude::*;
use serde::Serialize;

use super::{create_dir, file_stem, load, write_file, write_json};
use crate::error::Result;
use crate::experiment::{ExperimentSpec, ItemSpec};

pub const METRICS_FILE: &str = "metrics.csv";
pub const REPORT_FILE: &str = "run_report.json";
pub const TRACE_DIR: &str = "traces";
pub const RUN_HEADER: &str = "item,group,frequency,seed_layer,dx,R,node,layer,alpha_m,t_m";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DroppedItem {
    pub item: String,
    pub missing: Vec<String>,
}

/// Contents of `run_report.json`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub items_total: usize,
    pub items_run: usize,
    pub dropped: Vec<DroppedItem>,
    pub network_nodes: usize,
    pub cells_per_item: usize,
    pub cells: usize,
    pub rows: usize,
    pub warnings: Vec<String>,
}

struct Cell<'a> {
    item: &'a ItemSpec,
    seed_layer: &'a str,
    coupling: Option<f64>,
    retention: f64,
}

impl Cell<'_> {
    fn dx_field(&self) -> String {
        self.coupling.map(real).unwrap_or_default()
    }

    fn trace_name(&self) -> String {
        let dx = self
            .coupling
            .map(|d| format!("_dx{}", real(d)))
            .unwrap_or_default();
        format!(
            "{}_{}{}_R{}.csv",
            file_stem(&self.item.id),
            file_stem(self.seed_layer),
            dx,
            real(self.retention)
        )
    }
}

/// Runs the experiment and writes `metrics.csv`, `run_report.json` and,
/// when enabled, one trace file per item and cell.
pub fn cmd_run(spec: &ExperimentSpec) -> Result<RunReport> {
    spec.validate()?;
    let layers: Vec<(String, PathBuf)> = spec
        .network
        .layers
        .iter()
        .map(|l| (l.name.clone(), l.path.clone()))
        .collect();
    let (mut net, load_report) = load(&layers, spec.network.attributes.as_deref())?;
    let mut warnings = load_report.warnings;
    if spec.network.lvc {
        let before = net.node_count();
        net = largest_viable_cluster(&net)?;
        info!("LVC kept {} of {} nodes", net.node_count(), before);
    }
    let sim = &spec.simulation;
    let multiplex = net.layer_count() > 1;
    if !multiplex && !sim.coupling.is_empty() {
        warnings.push("single-layer network: coupling grid ignored".to_string());
    }

    let mut dropped = Vec::new();
    let mut items = Vec::new();
    for item in &spec.items {
        let mut seen = HashSet::new();
        let missing: Vec<String> = item
            .words()
            .filter(|w| net.node(w).is_none() && seen.insert(*w))
            .map(str::to_string)
            .collect();
        if missing.is_empty() {
            items.push(item);
        } else {
            let msg = format!(
                "item `{}` dropped, missing: {}",
                item.id,
                missing.join(", ")
            );
            warn!("{msg}");
            warnings.push(msg);
            dropped.push(DroppedItem {
                item: item.id.clone(),
                missing,
            });
        }
    }

    let couplings: Vec<Option<f64>> = if multiplex {
        sim.coupling.iter().copied().map(Some).collect()
    } else {
        vec![None]
    };
    let mut cells = Vec::new();
    for item in &items {
        for seed_layer in &sim.seed_layers {
            for &coupling in &couplings {
                for &retention in &sim.retention {
                    cells.push(Cell {
                        item,
                        seed_layer,
                        coupling,
                        retention,
                    });
                }
            }
        }
    }

    let results: Vec<(String, usize, Option<Vec<u8>>)> = cells
        .par_iter()
        .map(|cell| run_cell(&net, spec, cell))
        .collect::<Result<_>>()?;

    create_dir(&spec.output)?;
    let mut metrics = String::with_capacity(64 * results.len() + RUN_HEADER.len());
    metrics.push_str(RUN_HEADER);
    metrics.push('\n');
    let mut rows = 0;
    for (text, n, _) in &results {
        metrics.push_str(text);
        rows += n;
    }
    write_file(&spec.output.join(METRICS_FILE), metrics.as_bytes())?;
    if sim.traces {
        let dir = spec.output.join(TRACE_DIR);
        create_dir(&dir)?;
        for (cell, (_, _, trace)) in cells.iter().zip(&results) {
            let bytes = trace.as_deref().expect("traces recorded when enabled");
            write_file(&dir.join(cell.trace_name()), bytes)?;
        }
    }

    let report = RunReport {
        items_total: spec.items.len(),
        items_run: items.len(),
        dropped,
        network_nodes: net.node_count(),
        cells_per_item: sim.seed_layers.len() * couplings.len() * sim.retention.len(),
        cells: cells.len(),
        rows,
        warnings,
    };
    write_json(&spec.output.join(REPORT_FILE), &report)?;
    Ok(report)
}

fn run_cell(
    net: &MultiplexNetwork,
    spec: &ExperimentSpec,
    cell: &Cell,
) -> Result<(String, usize, Option<Vec<u8>>)> {
    let sim = &spec.simulation;
    let selector = match cell.seed_layer {
        "all" => LayerSelector::All,
        name => LayerSelector::Named(name.to_string()),
    };
    let mut config = SimulationConfig::new(cell.retention, sim.horizon);
    if let Some(dx) = cell.coupling {
        config.coupling = dx;
    }
    config.decay = sim.decay;
    config.suppress = sim.suppress;
    config.weighted_split = sim.weighted_split;
    config.seed_split = sim.seed_split;
    for s in &cell.item.seeds {
        config = config.with_seed(s.as_str(), selector.clone(), sim.seed_amount);
    }
    let view = match (sim.measure.as_str(), &selector) {
        ("seed", LayerSelector::All) | ("aggregate", _) => LayerView::Aggregate,
        ("seed", LayerSelector::Named(name)) => LayerView::Named(name.clone()),
        (name, _) => LayerView::Named(name.to_string()),
    };

    let engine = Engine::new(net, &config)?;
    let recording = if sim.traces {
        Recording::All
    } else {
        let ids = cell
            .item
            .targets
            .iter()
            .map(|t| net.require_node(t))
            .collect::<Result<_, _>>()?;
        Recording::Nodes(ids)
    };
    let out = engine.run(&recording)?;
    let targets: Vec<&str> = cell.item.targets.iter().map(String::as_str).collect();
    let metric_rows = batch_metrics(&out, &targets, &view)?;

    let mut text = String::new();
    for row in &metric_rows {
        let frequency = cell.item.frequency.or_else(|| {
            net.node(&row.node)
                .and_then(|id| net.attributes(id))
                .and_then(|a| a.frequency)
        });
        writeln!(
            text,
            "{},{},{},{},{},{},{},{},{},{}",
            csv_field(&cell.item.id),
            csv_field(&cell.item.group),
            frequency.map(real).unwrap_or_default(),
            csv_field(cell.seed_layer),
            cell.dx_field(),
            real(cell.retention),
            csv_field(&row.node),
            csv_field(&row.layer.to_string()),
            real(row.alpha_m),
            row.t_m
        )
        .expect("writing to a String");
    }
    let trace = if sim.traces {
        let mut buf = Vec::new();
        write_trace_csv(&out, &mut buf)?;
        Some(buf)
    } else {
        None
    };
    Ok((text, metric_rows.len(), trace))
}
