pub mod compare;
pub mod lvc;
pub mod run;
pub mod spectrum;
pub mod stream;

use std::fs;
use std::path::{Path, PathBuf};

use multispread_core::graph::{load_network, LoadReport};
use multispread_core::MultiplexNetwork;
use serde::Serialize;

use crate::error::{io_err, CliError, Result};

/// Parses `name=path`.
pub fn parse_layer_arg(arg: &str) -> Result<(String, PathBuf)> {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(CliError::Argument(format!(
            "expected LAYER=PATH, got `{arg}`"
        ))),
    }
}

pub fn load(
    layers: &[(String, PathBuf)],
    attributes: Option<&Path>,
) -> Result<(MultiplexNetwork, LoadReport)> {
    if layers.is_empty() {
        return Err(CliError::Argument("no layer files given".into()));
    }
    Ok(load_network(layers, attributes)?)
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(io_err(path))
}

/// Pretty JSON with a trailing newline.
pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_file(path, text.as_bytes())
}

/// Keeps `[A-Za-z0-9._-]`, maps everything else to `_`.
pub(crate) fn file_stem(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layer_args() {
        assert_eq!(
            parse_layer_arg("sem=a/b.tsv").unwrap(),
            ("sem".into(), PathBuf::from("a/b.tsv"))
        );
        assert_eq!(parse_layer_arg("x=y=z").unwrap().1, PathBuf::from("y=z"));
        assert!(parse_layer_arg("sem").is_err());
        assert!(parse_layer_arg("=a").is_err());
    }

    #[test]
    fn stems() {
        assert_eq!(file_stem("rat 1/ä"), "rat_1__");
        assert_eq!(file_stem("R0.5_dx-1"), "R0.5_dx-1");
    }
}
