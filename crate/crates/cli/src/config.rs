use crate::error::{Failure, Outcome};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use tbg_core::potential::{Combiner, Stacking};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Angles,
    Potential,
    Bands,
    Dirac,
    Scaling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum StackingArg {
    #[value(name = "AA")]
    AA,
    #[value(name = "AB")]
    AB,
}

impl From<StackingArg> for Stacking {
    fn from(s: StackingArg) -> Self {
        match s {
            StackingArg::AA => Stacking::AA,
            StackingArg::AB => Stacking::AB,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CombinerArg {
    Additive,
    Product,
}

impl From<CombinerArg> for Combiner {
    fn from(c: CombinerArg) -> Self {
        match c {
            CombinerArg::Additive => Combiner::Additive,
            CombinerArg::Product => Combiner::PointwiseProduct,
        }
    }
}

/// Every setting of a run. Command-line flags fill it first; a `--config`
/// file supplies whatever the flags left out.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub a_max: Option<i64>,
    pub stacking: Option<StackingArg>,
    pub combiner: Option<CombinerArg>,
    pub lambda: Option<f64>,
    pub shell_cutoff: Option<f64>,
    pub potential_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub ring_radius: Option<f64>,
    pub n_angles: Option<usize>,
    pub threads: Option<usize>,
    pub angles: Option<Vec<[i64; 2]>>,
    pub delta: Option<f64>,
    pub scaling_cutoff: Option<f64>,
    pub path: Option<String>,
    pub samples: Option<usize>,
    pub n_bands: Option<usize>,
}

macro_rules! merge_fields {
    ($lhs:ident, $rhs:ident, $($f:ident),*) => {
        RunConfig { $($f: $lhs.$f.or($rhs.$f)),* }
    };
}

impl RunConfig {
    /// Field-wise `self`, falling back to `other`.
    pub fn or(self, other: RunConfig) -> RunConfig {
        merge_fields!(
            self, other, command, a, b, a_max, stacking, combiner, lambda, shell_cutoff, potential_path,
            output_path, ring_radius, n_angles, threads, angles, delta, scaling_cutoff, path, samples, n_bands
        )
    }

    pub fn load(path: &std::path::Path) -> Outcome<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(Failure::io(path))?;
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }

    pub fn angle(&self) -> Outcome<(i64, i64)> {
        match (self.a, self.b) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Failure::Input("--a and --b are required".into())),
        }
    }

    /// Rejects non-positive or non-finite values and missing input files.
    pub fn validate(&self) -> Outcome<()> {
        let positive = |name: &str, v: Option<f64>| match v {
            Some(x) if !(x.is_finite() && x > 0.0) => Err(Failure::Input(format!("{name} must be positive, got {x}"))),
            _ => Ok(()),
        };
        positive("shell_cutoff", self.shell_cutoff)?;
        positive("ring_radius", self.ring_radius)?;
        positive("delta", self.delta)?;
        positive("scaling_cutoff", self.scaling_cutoff)?;
        if let Some(l) = self.lambda {
            if !l.is_finite() {
                return Err(Failure::Input(format!("lambda must be finite, got {l}")));
            }
        }
        for (name, v) in [("threads", self.threads), ("samples", self.samples), ("n_bands", self.n_bands)] {
            if v == Some(0) {
                return Err(Failure::Input(format!("{name} must be positive")));
            }
        }
        if let Some(n) = self.n_angles {
            if n < 8 {
                return Err(Failure::Input(format!("n_angles must be at least 8, got {n}")));
            }
        }
        if let Some(p) = &self.potential_path {
            std::fs::metadata(p).map_err(Failure::io(p))?;
        }
        if let Some(dir) = self.output_path.as_ref().and_then(|p| p.parent()) {
            if !dir.as_os_str().is_empty() {
                std::fs::metadata(dir).map_err(Failure::io(dir))?;
            }
        }
        Ok(())
    }
}
