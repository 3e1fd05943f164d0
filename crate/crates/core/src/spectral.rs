//! Laplacians, the two-layer supra-Laplacian, and diffusion regimes.
//!
//! For layers with combinatorial Laplacians `L1`, `L2`, layer rates `p1`,
//! `p2` and coupling `D_x`, the supra-Laplacian over the `2N` replica
//! coordinates is
//!
//! ```text
//! | p1·L1 + D_x·I     −D_x·I     |
//! |    −D_x·I      p2·L2 + D_x·I |
//! ```
//!
//! Its second-smallest eigenvalue `λ2(s)` grows with `D_x` toward the
//! superposition ceiling `λ2((p1·L1 + p2·L2) / 2)`.

use std::fmt;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::MultiplexNetwork;

/// Slack used when comparing eigenvalues for regime labels.
pub const REGIME_EPSILON: f64 = 1e-9;

const ASYMMETRY_TOLERANCE: f64 = 1e-12;

/// Combinatorial Laplacian `D − A` of one layer over the full node registry.
/// Edge weights are ignored.
pub fn laplacian(net: &MultiplexNetwork, layer: &str) -> Result<DMatrix<f64>> {
    let layer = net.layer(layer)?;
    let n = net.node_count();
    let mut lap = DMatrix::zeros(n, n);
    for u in net.nodes() {
        let nbrs = layer.neighbors(u);
        lap[(u.index(), u.index())] = nbrs.len() as f64;
        for nb in nbrs {
            lap[(u.index(), nb.node.index())] = -1.0;
        }
    }
    Ok(lap)
}

/// Builds the two-layer supra-Laplacian from layer Laplacians.
pub fn supra_from_laplacians(
    first: &DMatrix<f64>,
    second: &DMatrix<f64>,
    coupling: f64,
    rates: [f64; 2],
) -> DMatrix<f64> {
    let n = first.nrows();
    let mut supra = DMatrix::zeros(2 * n, 2 * n);
    supra
        .view_mut((0, 0), (n, n))
        .copy_from(&(first * rates[0]));
    supra
        .view_mut((n, n), (n, n))
        .copy_from(&(second * rates[1]));
    for i in 0..n {
        supra[(i, i)] += coupling;
        supra[(n + i, n + i)] += coupling;
        supra[(i, n + i)] = -coupling;
        supra[(n + i, i)] = -coupling;
    }
    supra
}

fn require_two_layers(net: &MultiplexNetwork) -> Result<()> {
    if net.layer_count() != 2 {
        return Err(Error::LayerCount {
            expected: "exactly 2",
            found: net.layer_count(),
        });
    }
    Ok(())
}

fn check_coupling(coupling: f64) -> Result<()> {
    if coupling.is_finite() && coupling > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "coupling {coupling} must be finite and > 0"
        )))
    }
}

pub fn supra_laplacian(
    net: &MultiplexNetwork,
    coupling: f64,
    rates: [f64; 2],
) -> Result<DMatrix<f64>> {
    require_two_layers(net)?;
    check_coupling(coupling)?;
    let names: Vec<&str> = net.layer_names().collect();
    let first = laplacian(net, names[0])?;
    let second = laplacian(net, names[1])?;
    Ok(supra_from_laplacians(&first, &second, coupling, rates))
}

/// Superposition Laplacian `(p1·L1 + p2·L2) / 2`.
pub fn superposition(first: &DMatrix<f64>, second: &DMatrix<f64>, rates: [f64; 2]) -> DMatrix<f64> {
    (first * rates[0] + second * rates[1]) * 0.5
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn spectrum(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    let (rows, cols) = matrix.shape();
    if rows != cols || rows == 0 {
        return Err(Error::MatrixShape { rows, cols });
    }
    let scale = matrix.amax();
    if scale > 0.0 {
        let asym = (matrix - matrix.transpose()).amax() / scale;
        if asym > ASYMMETRY_TOLERANCE {
            return Err(Error::NotSymmetric(asym));
        }
    }
    let mut values: Vec<f64> = matrix
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Second-smallest eigenvalue of a symmetric positive-semidefinite matrix.
/// Repeated eigenvalues are kept, so a disconnected graph yields 0. Round-off
/// below zero is clamped.
pub fn lambda2(matrix: &DMatrix<f64>) -> Result<f64> {
    let (rows, cols) = matrix.shape();
    if rows < 2 {
        return Err(Error::MatrixShape { rows, cols });
    }
    Ok(spectrum(matrix)?[1].max(0.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// `λ2(s)` no larger than the slowest layer's.
    SubMultiplex,
    /// Faster than the slowest layer, not faster than the fastest.
    Multiplex,
    /// Faster than either layer alone.
    Superdiffusion,
}

impl Regime {
    pub fn classify(supra: f64, first: f64, second: f64) -> Regime {
        let (lo, hi) = if first <= second {
            (first, second)
        } else {
            (second, first)
        };
        if supra > hi + REGIME_EPSILON {
            Regime::Superdiffusion
        } else if supra > lo + REGIME_EPSILON {
            Regime::Multiplex
        } else {
            Regime::SubMultiplex
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Regime::SubMultiplex => "SUB_MULTIPLEX",
            Regime::Multiplex => "MULTIPLEX",
            Regime::Superdiffusion => "SUPERDIFFUSION",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    /// `(layer name, λ2)` in layer order.
    pub lambda2_per_layer: Vec<(String, f64)>,
    pub lambda2_supra: f64,
    pub lambda2_superposition: f64,
    pub coupling: f64,
    pub rates: [f64; 2],
    pub regime: Regime,
}

/// Layer Laplacians and their derived quantities, reused across couplings.
#[derive(Clone, Debug)]
pub struct TwoLayerSpectra {
    names: [String; 2],
    laplacians: [DMatrix<f64>; 2],
    layer_lambda2: [f64; 2],
    superposition_lambda2: f64,
    rates: [f64; 2],
}

impl TwoLayerSpectra {
    pub fn new(net: &MultiplexNetwork, rates: [f64; 2]) -> Result<Self> {
        require_two_layers(net)?;
        if rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidConfig(format!(
                "layer rates {rates:?} must be finite and > 0"
            )));
        }
        let names: Vec<String> = net.layer_names().map(str::to_string).collect();
        let first = laplacian(net, &names[0])?;
        let second = laplacian(net, &names[1])?;
        // Layer λ2 is reported for the rate-scaled layer Laplacian.
        let layer_lambda2 = [
            lambda2(&(&first * rates[0]))?,
            lambda2(&(&second * rates[1]))?,
        ];
        let superposition_lambda2 = lambda2(&superposition(&first, &second, rates))?;
        Ok(TwoLayerSpectra {
            names: [names[0].clone(), names[1].clone()],
            laplacians: [first, second],
            layer_lambda2,
            superposition_lambda2,
            rates,
        })
    }

    pub fn layer_lambda2(&self) -> [f64; 2] {
        self.layer_lambda2
    }

    pub fn superposition_lambda2(&self) -> f64 {
        self.superposition_lambda2
    }

    pub fn supra_lambda2(&self, coupling: f64) -> Result<f64> {
        check_coupling(coupling)?;
        lambda2(&supra_from_laplacians(
            &self.laplacians[0],
            &self.laplacians[1],
            coupling,
            self.rates,
        ))
    }

    pub fn report(&self, coupling: f64) -> Result<SpectralReport> {
        let supra = self.supra_lambda2(coupling)?;
        let [a, b] = self.layer_lambda2;
        Ok(SpectralReport {
            lambda2_per_layer: vec![(self.names[0].clone(), a), (self.names[1].clone(), b)],
            lambda2_supra: supra,
            lambda2_superposition: self.superposition_lambda2,
            coupling,
            rates: self.rates,
            regime: Regime::classify(supra, a, b),
        })
    }
}

/// Layer, supra and superposition `λ2` with the regime label, unit rates.
pub fn classify_regime(net: &MultiplexNetwork, coupling: f64) -> Result<SpectralReport> {
    TwoLayerSpectra::new(net, [1.0, 1.0])?.report(coupling)
}

/// One report per coupling value. The grid must be positive and strictly
/// ascending; points are evaluated in parallel and returned in grid order.
pub fn dx_sweep(
    net: &MultiplexNetwork,
    grid: &[f64],
    rates: [f64; 2],
) -> Result<Vec<SpectralReport>> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty coupling grid".into()));
    }
    if let Some(bad) = grid.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::InvalidGrid(format!("coupling {bad} must be > 0")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "coupling grid must be strictly ascending".into(),
        ));
    }
    let spectra = TwoLayerSpectra::new(net, rates)?;
    grid.par_iter().map(|&dx| spectra.report(dx)).collect()
}

/// `count` log-spaced points from `start` to `stop` inclusive.
pub fn log_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let (a, b) = (start.log10(), stop.log10());
            (0..count)
                .map(|i| 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64))
                .collect()
        }
    }
}
