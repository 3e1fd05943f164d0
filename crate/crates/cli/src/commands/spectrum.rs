//! `multispread spectrum`: λ2 of layers, supra-Laplacian and superposition
//! over a coupling grid.

use std::fmt::Write as _;
use std::path::PathBuf;

use multispread_core::fmt::real;
use multispread_core::spectral::{dx_sweep, log_grid};
use multispread_core::SpectralReport;

use super::load;
use crate::error::{CliError, Result};

pub const SPECTRUM_HEADER: &str =
    "dx,lambda2_layer1,lambda2_layer2,lambda2_supra,lambda2_superposition,regime";

/// Parses `start:stop:count` into a log-spaced grid.
pub fn parse_log_grid(arg: &str) -> Result<Vec<f64>> {
    let bad = || CliError::Argument(format!("expected START:STOP:COUNT, got `{arg}`"));
    let parts: Vec<&str> = arg.split(':').collect();
    let [start, stop, count] = parts[..] else {
        return Err(bad());
    };
    let start: f64 = start.parse().map_err(|_| bad())?;
    let stop: f64 = stop.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    if !(start > 0.0 && stop > start && count >= 1) {
        return Err(CliError::Argument(format!(
            "log grid `{arg}` needs 0 < START < STOP and COUNT >= 1"
        )));
    }
    Ok(log_grid(start, stop, count))
}

pub fn cmd_spectrum(
    layers: &[(String, PathBuf)],
    grid: &[f64],
    rates: [f64; 2],
) -> Result<Vec<SpectralReport>> {
    let (net, _) = load(layers, None)?;
    Ok(dx_sweep(&net, grid, rates)?)
}

pub fn spectrum_csv(reports: &[SpectralReport]) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            real(r.coupling),
            real(r.lambda2_per_layer[0].1),
            real(r.lambda2_per_layer[1].1),
            real(r.lambda2_supra),
            real(r.lambda2_superposition),
            r.regime
        )
        .expect("writing to a String");
    }
    out
}
