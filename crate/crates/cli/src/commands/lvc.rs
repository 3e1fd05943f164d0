//! `multispread lvc`: prune a multiplex to its Largest Viable Cluster.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use multispread_core::graph::{largest_viable_cluster, write_layer};
use serde::Serialize;

use super::{create_dir, file_stem, load, write_file, write_json};
use crate::error::{CliError, Result};

pub const REPORT_FILE: &str = "lvc_report.json";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LvcReport {
    pub input_nodes: usize,
    pub nodes: usize,
    pub edges_per_layer: BTreeMap<String, usize>,
    pub edges_total: usize,
    pub warnings: Vec<String>,
}

/// Writes `<out>/<layer>.tsv` for every layer and `lvc_report.json`.
pub fn cmd_lvc(layers: &[(String, PathBuf)], out: &Path) -> Result<LvcReport> {
    if layers.len() < 2 {
        return Err(CliError::Argument(format!(
            "lvc needs at least 2 layers, got {}",
            layers.len()
        )));
    }
    for (name, _) in layers {
        if file_stem(name) != *name {
            return Err(CliError::Argument(format!(
                "layer name `{name}` is used as a file name and may only contain [A-Za-z0-9._-]"
            )));
        }
    }
    let (net, load_report) = load(layers, None)?;
    let lvc = largest_viable_cluster(&net)?;

    create_dir(out)?;
    let mut edges_per_layer = BTreeMap::new();
    for layer in lvc.layers() {
        let mut buf = Vec::new();
        write_layer(&lvc, layer.name(), &mut buf)?;
        write_file(&out.join(format!("{}.tsv", layer.name())), &buf)?;
        edges_per_layer.insert(layer.name().to_string(), layer.edge_count());
    }
    let report = LvcReport {
        input_nodes: net.node_count(),
        nodes: lvc.node_count(),
        edges_total: edges_per_layer.values().sum(),
        edges_per_layer,
        warnings: load_report.warnings,
    };
    write_json(&out.join(REPORT_FILE), &report)?;
    Ok(report)
}
