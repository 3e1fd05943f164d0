//! `multispread compare`: pairwise group statistics over a metrics table.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::warn;
use multispread_core::fmt::real;
use multispread_core::stats::kendall_tau;
use multispread_core::GroupComparison;
use serde::Serialize;

use crate::error::{CliError, Result};

pub const COMPARE_HEADER: &str = "seed_layer,dx,groups,measure,R,value,significant";
pub const TAU_HEADER: &str = "seed_layer,dx,measure,R,tau,n";

#[derive(Clone, Debug)]
pub struct CompareOptions {
    pub group_column: String,
    pub measures: Vec<String>,
    /// Explicit level order; default is first appearance.
    pub levels: Option<Vec<String>>,
    /// Column correlated with each measure by Kendall tau.
    pub frequency_column: Option<String>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            group_column: "group".into(),
            measures: vec!["alpha_m".into(), "t_m".into()],
            levels: None,
            frequency_column: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Skipped {
    pub seed_layer: String,
    pub dx: String,
    #[serde(rename = "R")]
    pub r: String,
    pub measure: String,
    pub groups: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub rows_read: usize,
    pub levels: Vec<String>,
    pub cells: usize,
    pub comparisons: usize,
    pub tau_rows: usize,
    pub skipped: Vec<Skipped>,
}

#[derive(Debug)]
pub struct CompareOutput {
    pub csv: String,
    /// Present when a frequency column was requested.
    pub tau_csv: Option<String>,
    pub report: CompareReport,
}

#[derive(Default)]
struct Cell {
    key: [String; 3],
    // level index -> measure index -> values
    groups: HashMap<usize, Vec<Vec<f64>>>,
    // (frequency, measures) for rows with a frequency
    frequency: Vec<(f64, Vec<f64>)>,
}

fn column(headers: &csv::StringRecord, name: &str, path: &Path) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| CliError::Input {
            path: path.to_path_buf(),
            message: format!("missing column `{name}`"),
        })
}

fn number(field: &str, what: &str, line: u64, path: &Path) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| CliError::Input {
        path: path.to_path_buf(),
        message: format!("line {line}: {what} `{field}` is not a number"),
    })
}

/// Cells are keyed by `(seed_layer, dx, R)` and emitted in order of first
/// appearance; `seed_layer` and `dx` are optional columns.
pub fn compare_reader<R: std::io::Read>(
    reader: R,
    path: &Path,
    opts: &CompareOptions,
) -> Result<CompareOutput> {
    let csv_err = |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let group_col = column(&headers, &opts.group_column, path)?;
    let r_col = column(&headers, "R", path)?;
    let seed_col = headers.iter().position(|h| h == "seed_layer");
    let dx_col = headers.iter().position(|h| h == "dx");
    let measure_cols = opts
        .measures
        .iter()
        .map(|m| column(&headers, m, path))
        .collect::<Result<Vec<_>>>()?;
    let freq_col = opts
        .frequency_column
        .as_deref()
        .map(|f| column(&headers, f, path))
        .transpose()?;
    if opts.measures.is_empty() {
        return Err(CliError::Argument("no measures given".into()));
    }

    let mut levels: Vec<String> = opts.levels.clone().unwrap_or_default();
    let fixed_levels = opts.levels.is_some();
    let mut cells: Vec<Cell> = Vec::new();
    let mut cell_index: HashMap<[String; 3], usize> = HashMap::new();
    let mut rows_read = 0;
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        rows_read += 1;
        let get = |c: Option<usize>| c.and_then(|c| record.get(c)).unwrap_or("").to_string();
        let key = [get(seed_col), get(dx_col), get(Some(r_col))];
        let values = measure_cols
            .iter()
            .zip(&opts.measures)
            .map(|(&c, m)| number(&record[c], m, line, path))
            .collect::<Result<Vec<f64>>>()?;
        let idx = *cell_index.entry(key.clone()).or_insert_with(|| {
            cells.push(Cell {
                key,
                ..Default::default()
            });
            cells.len() - 1
        });
        let cell = &mut cells[idx];

        if let Some(fc) = freq_col {
            let f = record[fc].trim();
            if !f.is_empty() {
                cell.frequency
                    .push((number(f, "frequency", line, path)?, values.clone()));
            }
        }
        let level = &record[group_col];
        let level_idx = match levels.iter().position(|l| l == level) {
            Some(i) => i,
            None if fixed_levels => continue,
            None => {
                levels.push(level.to_string());
                levels.len() - 1
            }
        };
        let per_measure = cell
            .groups
            .entry(level_idx)
            .or_insert_with(|| vec![Vec::new(); values.len()]);
        for (sample, v) in per_measure.iter_mut().zip(values) {
            sample.push(v);
        }
    }
    if levels.len() < 2 {
        return Err(CliError::Input {
            path: path.to_path_buf(),
            message: format!("column `{}` has fewer than 2 levels", opts.group_column),
        });
    }

    let mut csv = format!("{COMPARE_HEADER}\n");
    let mut tau_csv = freq_col.map(|_| format!("{TAU_HEADER}\n"));
    let mut skipped = Vec::new();
    let (mut comparisons, mut tau_rows) = (0, 0);
    for cell in &cells {
        let [seed, dx, r] = &cell.key;
        for (m, measure) in opts.measures.iter().enumerate() {
            for i in 0..levels.len() {
                for j in i + 1..levels.len() {
                    let groups = format!("{} vs {}", levels[i], levels[j]);
                    let empty = Vec::new();
                    let sample = |l: usize| cell.groups.get(&l).map_or(&empty, |g| &g[m]);
                    match GroupComparison::new(&levels[i], sample(i), &levels[j], sample(j)) {
                        Ok(c) => {
                            comparisons += 1;
                            writeln!(
                                csv,
                                "{},{},{},{},{},{},{}",
                                field(seed),
                                field(dx),
                                field(&groups),
                                field(measure),
                                field(r),
                                real(c.cohens_d),
                                c.significant
                            )
                            .expect("writing to a String");
                        }
                        Err(e) => {
                            warn!("cell ({seed}, {dx}, {r}) {measure} {groups}: {e}");
                            skipped.push(Skipped {
                                seed_layer: seed.clone(),
                                dx: dx.clone(),
                                r: r.clone(),
                                measure: measure.clone(),
                                groups,
                                reason: e.to_string(),
                            });
                        }
                    }
                }
            }
            if let Some(tau_out) = &mut tau_csv {
                let x: Vec<f64> = cell.frequency.iter().map(|(f, _)| *f).collect();
                let y: Vec<f64> = cell.frequency.iter().map(|(_, v)| v[m]).collect();
                match kendall_tau(&x, &y) {
                    Ok(tau) => {
                        tau_rows += 1;
                        writeln!(
                            tau_out,
                            "{},{},{},{},{},{}",
                            field(seed),
                            field(dx),
                            field(measure),
                            field(r),
                            real(tau),
                            x.len()
                        )
                        .expect("writing to a String");
                    }
                    Err(e) => skipped.push(Skipped {
                        seed_layer: seed.clone(),
                        dx: dx.clone(),
                        r: r.clone(),
                        measure: measure.clone(),
                        groups: "kendall_tau".into(),
                        reason: e.to_string(),
                    }),
                }
            }
        }
    }

    Ok(CompareOutput {
        csv,
        tau_csv,
        report: CompareReport {
            rows_read,
            levels,
            cells: cells.len(),
            comparisons,
            tau_rows,
            skipped,
        },
    })
}

fn field(s: &str) -> std::borrow::Cow<'_, str> {
    multispread_core::metrics::csv_field(s)
}

/// Sidecar paths next to `out`: `<stem>_tau.csv` and `<stem>_report.json`.
pub fn sidecar_paths(out: &Path) -> (PathBuf, PathBuf) {
    let stem = out
        .file_stem()
        .map_or_else(|| "compare".into(), |s| s.to_string_lossy().into_owned());
    (
        out.with_file_name(format!("{stem}_tau.csv")),
        out.with_file_name(format!("{stem}_report.json")),
    )
}

pub fn cmd_compare(metrics: &Path, out: &Path, opts: &CompareOptions) -> Result<CompareReport> {
    let file = std::fs::File::open(metrics).map_err(crate::error::io_err(metrics))?;
    let output = compare_reader(std::io::BufReader::new(file), metrics, opts)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        super::create_dir(dir)?;
    }
    super::write_file(out, output.csv.as_bytes())?;
    let (tau_path, report_path) = sidecar_paths(out);
    if let Some(tau) = &output.tau_csv {
        super::write_file(&tau_path, tau.as_bytes())?;
    }
    super::write_json(&report_path, &output.report)?;
    Ok(output.report)
}
