//! `multispread stream`: mindset streams as edge lists plus valence tables.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use multispread_core::graph::mindset_stream;
use multispread_core::metrics::csv_field;
use multispread_core::MindsetStream;

use super::{create_dir, load, write_file};
use crate::error::{CliError, Result};

pub const STREAMS_FILE: &str = "streams.csv";
pub const STREAMS_HEADER: &str = "stream,source,target,layer,path_length";
pub const VALENCE_HEADER: &str = "node,valence";

/// Parses `source,target`.
pub fn parse_pair(arg: &str) -> Result<(String, String)> {
    match arg.split_once(',') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(CliError::Argument(format!(
            "expected SOURCE,TARGET, got `{arg}`"
        ))),
    }
}

/// Stream `k` (1-based, in pair order) goes to `stream_<k>.tsv` and
/// `stream_<k>_valence.csv`; `streams.csv` indexes them.
pub fn cmd_stream(
    layers: &[(String, PathBuf)],
    attributes: Option<&Path>,
    layer: &str,
    pairs: &[(String, String)],
    out: &Path,
) -> Result<Vec<MindsetStream>> {
    if pairs.is_empty() {
        return Err(CliError::Argument("no --pair given".into()));
    }
    let (net, _) = load(layers, attributes)?;
    let streams = pairs
        .iter()
        .map(|(a, b)| {
            Ok(mindset_stream(
                &net,
                layer,
                net.require_node(a)?,
                net.require_node(b)?,
            )?)
        })
        .collect::<Result<Vec<_>>>()?;

    create_dir(out)?;
    let mut index = format!("{STREAMS_HEADER}\n");
    for (k, s) in streams.iter().enumerate() {
        let k = k + 1;
        let length = s.path_length.map_or("inf".to_string(), |l| l.to_string());
        writeln!(
            index,
            "{k},{},{},{},{length}",
            csv_field(net.label(s.source)),
            csv_field(net.label(s.target)),
            csv_field(&s.layer)
        )
        .expect("writing to a String");

        let mut edges = String::new();
        for &(a, b) in &s.edges {
            writeln!(edges, "{}\t{}", net.label(a), net.label(b)).expect("writing to a String");
        }
        write_file(&out.join(format!("stream_{k}.tsv")), edges.as_bytes())?;

        let mut valence = format!("{VALENCE_HEADER}\n");
        for (&node, v) in s.nodes.iter().zip(&s.valences) {
            writeln!(
                valence,
                "{},{}",
                csv_field(net.label(node)),
                v.map_or("", |v| v.as_str())
            )
            .expect("writing to a String");
        }
        write_file(
            &out.join(format!("stream_{k}_valence.csv")),
            valence.as_bytes(),
        )?;
    }
    write_file(&out.join(STREAMS_FILE), index.as_bytes())?;
    Ok(streams)
}
