//! Layered edge-list and attribute file formats.
//!
//! Layer files are UTF-8 TSV with one edge per line,
//! `source<TAB>target[<TAB>weight]`. Attribute files are TSV triples
//! `label<TAB>key<TAB>value`. In both, `#` starts a comment line and blank
//! lines are ignored.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{MultiplexNetwork, NetworkBuilder};
use crate::error::{Error, Result};

/// Non-fatal findings collected while loading.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LoadReport {
    pub warnings: Vec<String>,
}

fn content_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.map(|l| l.trim_end_matches('\r').to_string())))
        .filter(|(_, line)| match line {
            Ok(l) => !(l.trim().is_empty() || l.starts_with('#')),
            Err(_) => true,
        })
}

/// Reads one edge list into layer `layer` of `builder`. `path` is used only
/// for error messages.
pub fn read_layer<R: BufRead>(
    builder: &mut NetworkBuilder,
    layer: usize,
    reader: R,
    path: &Path,
) -> Result<()> {
    let parse_err = |line, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    for (line_no, line) in content_lines(reader) {
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        let (a, b, weight) = match fields.as_slice() {
            [a, b] => (*a, *b, 1.0),
            [a, b, w] => {
                let w: f64 = w
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad weight `{w}`")))?;
                (*a, *b, w)
            }
            _ => {
                return Err(parse_err(
                    line_no,
                    format!(
                        "expected 2 or 3 tab-separated fields, found {}",
                        fields.len()
                    ),
                ))
            }
        };
        builder.add_edge(layer, a, b, weight).map_err(|e| match e {
            Error::InvalidEdge { .. } => parse_err(line_no, e.to_string()),
            other => other,
        })?;
    }
    Ok(())
}

/// Reads `label<TAB>key<TAB>value` rows. Rows naming labels that are not in
/// the network produce warnings.
pub fn read_attributes<R: BufRead>(
    builder: &mut NetworkBuilder,
    reader: R,
    path: &Path,
    report: &mut LoadReport,
) -> Result<()> {
    let parse_err = |line, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    for (line_no, line) in content_lines(reader) {
        let line = line?;
        let fields: Vec<&str> = line.split('\t').collect();
        let [label, key, value] = fields.as_slice() else {
            return Err(parse_err(
                line_no,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        };
        let Some(node) = builder.node(label) else {
            report.warnings.push(format!(
                "{}:{line_no}: attribute for unknown label `{label}` ignored",
                path.display()
            ));
            continue;
        };
        let attrs = builder.attributes_mut(node);
        match *key {
            "valence" => {
                attrs.valence = Some(value.parse().map_err(|e| parse_err(line_no, e))?);
            }
            "frequency" => {
                let f: f64 = value
                    .trim()
                    .parse()
                    .ok()
                    .filter(|f: &f64| f.is_finite() && *f >= 0.0)
                    .ok_or_else(|| parse_err(line_no, format!("bad frequency `{value}`")))?;
                attrs.frequency = Some(f);
            }
            other => {
                attrs.extra.insert(other.to_string(), value.to_string());
            }
        }
    }
    Ok(())
}

/// Loads a network from `(layer name, path)` pairs and an optional attribute
/// file. The node registry is the union of all layer vocabularies, in order of
/// first appearance.
pub fn load_network<S: AsRef<str>, P: AsRef<Path>>(
    layer_files: &[(S, P)],
    attribute_file: Option<&Path>,
) -> Result<(MultiplexNetwork, LoadReport)> {
    let mut builder = NetworkBuilder::new();
    let mut report = LoadReport::default();
    for (name, path) in layer_files {
        let path = path.as_ref();
        let layer = builder.add_layer(name.as_ref())?;
        let file = File::open(path).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        read_layer(&mut builder, layer, BufReader::new(file), path)?;
    }
    if let Some(path) = attribute_file {
        let file = File::open(path).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            message: e.to_string(),
        })?;
        read_attributes(&mut builder, BufReader::new(file), path, &mut report)?;
    }
    Ok((builder.build(), report))
}

/// Writes one layer as an edge list. The weight column is emitted only when
/// the layer carries a non-default weight; weights use the shortest decimal
/// form that parses back to the same value.
pub fn write_layer<W: Write>(net: &MultiplexNetwork, layer: &str, mut out: W) -> Result<()> {
    let layer = net.layer(layer)?;
    let weighted = layer.is_weighted();
    for (a, b, w) in layer.edges() {
        if weighted {
            writeln!(out, "{}\t{}\t{}", net.label(a), net.label(b), w)?;
        } else {
            writeln!(out, "{}\t{}", net.label(a), net.label(b))?;
        }
    }
    Ok(())
}
