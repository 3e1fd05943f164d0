//! Declarative experiment description read by `multispread run`.
//!
//! The file is TOML; its exact layout is documented in `docs/experiment.md`.
//! Relative paths are resolved against the directory holding the file.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    #[serde(default = "default_output")]
    pub output: PathBuf,
    pub network: NetworkSpec,
    pub simulation: GridSpec,
    pub items: Vec<ItemSpec>,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NetworkSpec {
    pub layers: Vec<LayerFile>,
    #[serde(default)]
    pub attributes: Option<PathBuf>,
    /// Restrict to the Largest Viable Cluster before running.
    #[serde(default)]
    pub lvc: bool,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LayerFile {
    pub name: String,
    pub path: PathBuf,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub horizon: usize,
    pub retention: Vec<f64>,
    /// Required for multiplex networks; ignored for single-layer ones.
    #[serde(default)]
    pub coupling: Vec<f64>,
    /// Layer names, or `all` to seed every replica.
    pub seed_layers: Vec<String>,
    #[serde(default = "one")]
    pub seed_amount: f64,
    #[serde(default)]
    pub decay: f64,
    #[serde(default)]
    pub suppress: f64,
    #[serde(default)]
    pub weighted_split: bool,
    #[serde(default)]
    pub seed_split: bool,
    /// `seed` (the seeded layer, or the aggregate for `all`), `aggregate`,
    /// or a layer name.
    #[serde(default = "seed_measure")]
    pub measure: String,
    /// Also write one trace CSV per item and cell.
    #[serde(default)]
    pub traces: bool,
}

fn one() -> f64 {
    1.0
}

fn seed_measure() -> String {
    "seed".to_string()
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ItemSpec {
    pub id: String,
    #[serde(default)]
    pub group: String,
    pub seeds: Vec<String>,
    pub targets: Vec<String>,
    #[serde(default)]
    pub frequency: Option<f64>,
}

impl ItemSpec {
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.seeds.iter().chain(&self.targets).map(String::as_str)
    }
}

/// Command-line values that replace fields of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub output: Option<PathBuf>,
    pub horizon: Option<usize>,
    pub retention: Option<Vec<f64>>,
    pub coupling: Option<Vec<f64>>,
    pub seed_layers: Option<Vec<String>>,
    pub traces: Option<bool>,
}

impl ExperimentSpec {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: origin.to_path_buf(),
            message: e.message().to_string(),
        })
    }

    /// Reads and parses `path`, resolving relative paths against its parent.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(crate::error::io_err(path))?;
        let mut spec = Self::parse(&text, path)?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        spec.resolve_paths(base);
        Ok(spec)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.output);
        for layer in &mut self.network.layers {
            fix(&mut layer.path);
        }
        if let Some(a) = &mut self.network.attributes {
            fix(a);
        }
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.output {
            self.output = v;
        }
        if let Some(v) = o.horizon {
            self.simulation.horizon = v;
        }
        if let Some(v) = o.retention {
            self.simulation.retention = v;
        }
        if let Some(v) = o.coupling {
            self.simulation.coupling = v;
        }
        if let Some(v) = o.seed_layers {
            self.simulation.seed_layers = v;
        }
        if let Some(v) = o.traces {
            self.simulation.traces = v;
        }
    }

    /// Structural checks that do not need the network.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Spec(m));
        let sim = &self.simulation;
        if self.network.layers.is_empty() {
            return bad("at least one layer file is required".into());
        }
        if self.network.lvc && self.network.layers.len() < 2 {
            return bad("lvc = true needs at least two layers".into());
        }
        if sim.horizon < 1 {
            return bad("horizon must be at least 1".into());
        }
        if sim.retention.is_empty() {
            return bad("retention grid is empty".into());
        }
        if let Some(r) = sim.retention.iter().find(|r| !(0.0..=1.0).contains(*r)) {
            return bad(format!("retention {r} outside [0, 1]"));
        }
        if self.network.layers.len() > 1 {
            if sim.coupling.is_empty() {
                return bad("coupling grid is empty".into());
            }
            if let Some(d) = sim.coupling.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
                return bad(format!("coupling {d} must be > 0"));
            }
        }
        if sim.seed_layers.is_empty() {
            return bad("seed_layers is empty".into());
        }
        let names: Vec<&str> = self
            .network
            .layers
            .iter()
            .map(|l| l.name.as_str())
            .collect();
        for s in &sim.seed_layers {
            if s != "all" && !names.contains(&s.as_str()) {
                return bad(format!("seed layer `{s}` is not a network layer"));
            }
        }
        if !matches!(sim.measure.as_str(), "seed" | "aggregate")
            && !names.contains(&sim.measure.as_str())
        {
            return bad(format!(
                "measure `{}` is not seed, aggregate or a layer name",
                sim.measure
            ));
        }
        if self.items.is_empty() {
            return bad("no items".into());
        }
        let mut ids = HashSet::new();
        for item in &self.items {
            if !ids.insert(item.id.as_str()) {
                return bad(format!("duplicate item id `{}`", item.id));
            }
            if item.seeds.is_empty() || item.targets.is_empty() {
                return bad(format!(
                    "item `{}` needs at least one seed and one target",
                    item.id
                ));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
output = "results"

[network]
lvc = true
[[network.layers]]
name = "phonological"
path = "phon.tsv"
[[network.layers]]
name = "semantic"
path = "/data/sem.tsv"

[simulation]
horizon = 50
retention = [0.2, 0.5, 0.8]
coupling = [0.1, 1.0, 10.0]
seed_layers = ["phonological", "semantic", "all"]

[[items]]
id = "rat-1"
group = "easy"
seeds = ["cottage", "swiss", "cake"]
targets = ["cheese"]
"#;

    #[test]
    fn parses_and_resolves() {
        let mut spec = ExperimentSpec::parse(SAMPLE, Path::new("x.toml")).unwrap();
        spec.resolve_paths(Path::new("/exp"));
        assert_eq!(spec.output, Path::new("/exp/results"));
        assert_eq!(spec.network.layers[0].path, Path::new("/exp/phon.tsv"));
        assert_eq!(spec.network.layers[1].path, Path::new("/data/sem.tsv"));
        assert_eq!(spec.simulation.seed_amount, 1.0);
        assert_eq!(spec.simulation.measure, "seed");
        spec.validate().unwrap();
    }

    #[test]
    fn overrides_replace_fields() {
        let mut spec = ExperimentSpec::parse(SAMPLE, Path::new("x.toml")).unwrap();
        spec.apply(Overrides {
            horizon: Some(10),
            retention: Some(vec![0.5]),
            ..Default::default()
        });
        assert_eq!(spec.simulation.horizon, 10);
        assert_eq!(spec.simulation.retention, vec![0.5]);
        assert_eq!(spec.simulation.coupling.len(), 3);
    }

    #[test]
    fn validation_failures() {
        let base = ExperimentSpec::parse(SAMPLE, Path::new("x.toml")).unwrap();
        let check = |f: &dyn Fn(&mut ExperimentSpec)| {
            let mut s = base.clone();
            f(&mut s);
            s.validate().is_err()
        };
        assert!(check(&|s| s.simulation.horizon = 0));
        assert!(check(&|s| s.simulation.retention.clear()));
        assert!(check(&|s| s.simulation.coupling = vec![0.0]));
        assert!(check(&|s| s.simulation.seed_layers = vec!["syntax".into()]));
        assert!(check(&|s| s.simulation.measure = "syntax".into()));
        assert!(check(&|s| s.items.push(s.items[0].clone())));
        assert!(check(&|s| s.items[0].targets.clear()));
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = SAMPLE.replace("horizon = 50", "horizon = 50\nhorizn = 3");
        assert!(matches!(
            ExperimentSpec::parse(&text, Path::new("x.toml")),
            Err(CliError::Config { .. })
        ));
    }
}
