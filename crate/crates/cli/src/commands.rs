use crate::config::{CombinerArg, CommandKind, RunConfig, StackingArg};
use crate::error::{Failure, Outcome};
use std::path::Path;
use tbg_core::bloch::{band_path, bands_csv, symmetry_path, PathPoint};
use tbg_core::lattice::{classify_angle, enumerate_angles, superlattice_basis, CommensurationData};
use tbg_core::perturbation::{scaling_csv, scaling_study_with, DEFAULT_SCALING_CUTOFF};
use tbg_core::pipeline::{dirac_run, DiracSettings};
use tbg_core::potential::{twist, PotentialFile, Stacking, TwistSpec, TwistedDump};
use tbg_core::Potential;

const DEFAULT_LAMBDA: f64 = 0.5;
const DEFAULT_DIRAC_SHELLS: f64 = 8.0;
const DEFAULT_BAND_SHELLS: f64 = 4.0;
const DEFAULT_PATH: &str = "K,G,M,K";
const DEFAULT_ANGLES: [[i64; 2]; 4] = [[2, 1], [5, 1], [7, 1], [8, 1]];

/// Runs the configured command and returns the text to emit.
pub fn run(cfg: &RunConfig) -> Outcome<String> {
    cfg.validate()?;
    match cfg.command.ok_or_else(|| Failure::Input("no command given".into()))? {
        CommandKind::Angles => cmd_angles(cfg),
        CommandKind::Potential => cmd_potential(cfg),
        CommandKind::Bands => cmd_bands(cfg),
        CommandKind::Dirac => cmd_dirac(cfg),
        CommandKind::Scaling => cmd_scaling(cfg),
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn cmd_angles(cfg: &RunConfig) -> Outcome<String> {
    let a_max = cfg.a_max.ok_or_else(|| Failure::Input("--a-max is required".into()))?;
    if a_max < 2 {
        return Err(Failure::Input(format!("--a-max must be at least 2, got {a_max}")));
    }
    let rows: Vec<_> = enumerate_angles(a_max).iter().map(CommensurationData::record).collect();
    Ok(to_json(&rows))
}

/// A potential file holds either one layer (`orbits`) or a twisted dump (`modes`).
enum LoadedPotential {
    Layer(Potential),
    Twisted(CommensurationData, Stacking, Potential),
}

fn read_json(path: &Path) -> Outcome<serde_json::Value> {
    let text = std::fs::read_to_string(path).map_err(Failure::io(path))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_potential(cfg: &RunConfig) -> Outcome<LoadedPotential> {
    let Some(path) = &cfg.potential_path else {
        return Ok(LoadedPotential::Layer(PotentialFile::reference().build()?));
    };
    let value = read_json(path)?;
    let context = |e: serde_json::Error| Failure::Input(format!("{}: {e}", path.display()));
    if value.get("modes").is_some() {
        let dump: TwistedDump = serde_json::from_value(value).map_err(context)?;
        let (data, w) = dump.load()?;
        Ok(LoadedPotential::Twisted(data, dump.stacking, w))
    } else {
        let file: PotentialFile = serde_json::from_value(value).map_err(context)?;
        Ok(LoadedPotential::Layer(file.build()?))
    }
}

fn stacking(cfg: &RunConfig) -> Stacking {
    cfg.stacking.unwrap_or(StackingArg::AA).into()
}

/// Twisted potential for the configured angle, from a layer or a dump.
fn twisted_potential(cfg: &RunConfig) -> Outcome<(CommensurationData, Stacking, Potential)> {
    match load_potential(cfg)? {
        LoadedPotential::Layer(v) => {
            let (a, b) = cfg.angle()?;
            let data = classify_angle(a, b)?;
            let st = stacking(cfg);
            let mut spec = TwistSpec::additive(data, st);
            spec.combiner = cfg.combiner.unwrap_or(CombinerArg::Additive).into();
            Ok((data, st, twist(&v, &spec)?))
        }
        LoadedPotential::Twisted(data, st, w) => {
            if let (Some(a), Some(b)) = (cfg.a, cfg.b) {
                if (a, b) != (data.a(), data.b()) {
                    return Err(Failure::Input(format!(
                        "potential file is twisted at ({}, {}), not ({a}, {b})",
                        data.a(),
                        data.b()
                    )));
                }
            }
            Ok((data, st, w))
        }
    }
}

fn cmd_potential(cfg: &RunConfig) -> Outcome<String> {
    let (data, st, w) = twisted_potential(cfg)?;
    let mut dump = TwistedDump::new(&data, st, &w);
    if let Some(c) = cfg.combiner {
        dump.combiner = c.into();
    }
    Ok(to_json(&dump))
}

fn cmd_dirac(cfg: &RunConfig) -> Outcome<String> {
    let (data, st, w) = twisted_potential(cfg)?;
    let defaults = DiracSettings::default();
    let settings = DiracSettings {
        lambda: cfg.lambda.unwrap_or(DEFAULT_LAMBDA),
        cutoff_shells: cfg.shell_cutoff.unwrap_or(DEFAULT_DIRAC_SHELLS),
        ring_radius: cfg.ring_radius,
        n_angles: cfg.n_angles.unwrap_or(defaults.n_angles),
        k_point: defaults.k_point,
    };
    Ok(to_json(&dirac_run(&data, Some(st), &w, &settings)?))
}

fn cmd_bands(cfg: &RunConfig) -> Outcome<String> {
    let (data, _, w) = twisted_potential(cfg)?;
    let lat = superlattice_basis::<f64>(&data);
    let points = cfg
        .path
        .as_deref()
        .unwrap_or(DEFAULT_PATH)
        .split(',')
        .map(|s| s.trim().parse::<PathPoint>())
        .collect::<Result<Vec<_>, _>>()?;
    if points.len() < 2 {
        return Err(Failure::Input("a band path needs at least two points".into()));
    }
    let ks = symmetry_path(&lat, &points, cfg.samples.unwrap_or(20));
    let cutoff = cfg.shell_cutoff.unwrap_or(DEFAULT_BAND_SHELLS) * lat.shortest_dual();
    let rows = band_path(&lat, &w, cfg.lambda.unwrap_or(DEFAULT_LAMBDA), &ks, cutoff, cfg.n_bands.unwrap_or(8))?;
    Ok(bands_csv(&rows))
}

fn cmd_scaling(cfg: &RunConfig) -> Outcome<String> {
    let v = match load_potential(cfg)? {
        LoadedPotential::Layer(v) => v,
        LoadedPotential::Twisted(..) => {
            return Err(Failure::Input("scaling needs a single-layer potential, not a twisted dump".into()))
        }
    };
    let angles: Vec<(i64, i64)> =
        cfg.angles.clone().unwrap_or_else(|| DEFAULT_ANGLES.to_vec()).into_iter().map(|[a, b]| (a, b)).collect();
    let table = scaling_study_with(
        &v,
        &angles,
        cfg.delta.unwrap_or(1.0),
        cfg.scaling_cutoff.unwrap_or(DEFAULT_SCALING_CUTOFF),
        stacking(cfg),
    )?;
    Ok(scaling_csv(&table))
}
