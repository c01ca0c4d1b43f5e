use super::spectrum::eigenvalues;
use super::{assemble, plain_basis};
use crate::error::{Error, Result};
use crate::lattice::{symmetry_data, HoneycombBasis, KPoint};
use crate::potential::FourierPotential;
use crate::scalar::Real;
use nalgebra::Vector2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::str::FromStr;

/// Lowest bands at one quasimomentum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct BandRow<T: Real> {
    pub k: [T; 2],
    pub energies: Vec<T>,
}

/// Lowest `n_bands` eigenvalues along `k_list`.
///
/// Each point gets its own basis `|k + κ̃m| ≤ cutoff`, so the spectrum does
/// not depend on where the list started.
pub fn band_path<T: Real>(
    lattice: &HoneycombBasis<T>,
    w: &FourierPotential<T>,
    lambda: T,
    k_list: &[Vector2<T>],
    cutoff: T,
    n_bands: usize,
) -> Result<Vec<BandRow<T>>> {
    if k_list.is_empty() {
        return Err(Error::InvalidArgument("empty k list".into()));
    }
    k_list
        .par_iter()
        .map(|k| {
            let basis = plain_basis(lattice, k, cutoff)?;
            if basis.len() < n_bands {
                return Err(Error::InvalidArgument(format!(
                    "basis of {} plane waves at k = ({}, {}) cannot hold {n_bands} bands",
                    basis.len(),
                    k.x.as_f64(),
                    k.y.as_f64()
                )));
            }
            let mut e = eigenvalues(&assemble(&basis, k, lambda, w)?)?;
            e.truncate(n_bands);
            Ok(BandRow { k: [k.x, k.y], energies: e })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathPoint {
    Gamma,
    K,
    KPrime,
    M,
}

impl FromStr for PathPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" | "Gamma" => Ok(PathPoint::Gamma),
            "K" => Ok(PathPoint::K),
            "Kp" | "K'" => Ok(PathPoint::KPrime),
            "M" => Ok(PathPoint::M),
            _ => Err(Error::InvalidArgument(format!("unknown path point {s:?}"))),
        }
    }
}

impl PathPoint {
    pub fn location<T: Real>(self, lattice: &HoneycombBasis<T>) -> Vector2<T> {
        let k = symmetry_data(lattice.kind(), KPoint::K).anchor(lattice);
        match self {
            PathPoint::Gamma => Vector2::zeros(),
            PathPoint::K => k,
            PathPoint::KPrime => -k,
            PathPoint::M => lattice.dual_matrix().column(0) / T::lit(2.0),
        }
    }
}

/// Straight segments through `points`, `per_segment` samples each, endpoints included once.
pub fn symmetry_path<T: Real>(lattice: &HoneycombBasis<T>, points: &[PathPoint], per_segment: usize) -> Vec<Vector2<T>> {
    let corners: Vec<Vector2<T>> = points.iter().map(|p| p.location(lattice)).collect();
    let mut out = Vec::new();
    for pair in corners.windows(2) {
        for j in 0..per_segment {
            let t = T::int(j as i64) / T::int(per_segment as i64);
            out.push(pair[0] + (pair[1] - pair[0]) * t);
        }
    }
    if let Some(last) = corners.last() {
        out.push(*last);
    }
    out
}

/// CSV with header `idx,kx,ky,E1,…,En` and 17 significant digits.
pub fn bands_csv<T: Real>(rows: &[BandRow<T>]) -> String {
    let n = rows.iter().map(|r| r.energies.len()).max().unwrap_or(0);
    let mut s = String::from("idx,kx,ky");
    for j in 1..=n {
        write!(s, ",E{j}").unwrap();
    }
    s.push('\n');
    for (i, r) in rows.iter().enumerate() {
        write!(s, "{i},{:.16e},{:.16e}", r.k[0].as_f64(), r.k[1].as_f64()).unwrap();
        for e in &r.energies {
            write!(s, ",{:.16e}", e.as_f64()).unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn parse_bands_csv(text: &str) -> Result<Vec<BandRow<f64>>> {
    let bad = |line: usize| Error::InvalidArgument(format!("malformed band table at line {line}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad(1))?;
    if !header.starts_with("idx,kx,ky") {
        return Err(bad(1));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let cols: Vec<f64> = line.split(',').skip(1).map(|c| c.parse().map_err(|_| bad(i + 2))).collect::<Result<_>>()?;
            if cols.len() < 2 {
                return Err(bad(i + 2));
            }
            Ok(BandRow { k: [cols[0], cols[1]], energies: cols[2..].to_vec() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{build_basis, eigensolve};
    use crate::lattice::{classify_angle, superlattice_basis, LatticeKind};
    use crate::potential::{reference_potential, twist, Stacking, TwistSpec};

    #[test]
    fn free_bands_are_sorted_kinetic_energies() {
        let lat = HoneycombBasis::<f64>::unit(LatticeKind::Direct);
        let path = symmetry_path(&lat, &[PathPoint::K, PathPoint::Gamma, PathPoint::M], 6);
        assert_eq!(path.len(), 13);
        let cutoff = 2.5 * lat.shortest_dual();
        let rows = band_path(&lat, &FourierPotential::zero(lat), 0.0, &path, cutoff, 4).unwrap();
        for (k, row) in path.iter().zip(&rows) {
            let mut want: Vec<f64> = plain_basis(&lat, k, cutoff).unwrap().indices().iter()
                .map(|&m| (k + lat.dual_point(m)).norm_squared())
                .collect();
            want.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (e, w) in row.energies.iter().zip(&want) {
                assert!((e - w).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_point_matches_anchor_solve() {
        let d = classify_angle(2, 1).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let w = twist(&reference_potential(), &TwistSpec::additive(d, Stacking::AA)).unwrap();
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let cutoff = 4.0 * lat.shortest_dual();
        let full = eigensolve(&assemble(&build_basis(&sym, &lat, &k, cutoff).unwrap(), &k, 0.5, &w).unwrap()).unwrap();
        let rows = band_path(&lat, &w, 0.5, &[k], cutoff, 6).unwrap();
        for (a, b) in rows[0].energies.iter().zip(&full.eigenvalues) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn lowest_band_is_continuous() {
        let d = classify_angle(2, 1).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let w = twist(&reference_potential(), &TwistSpec::additive(d, Stacking::AA)).unwrap();
        let path = symmetry_path(&lat, &[PathPoint::Gamma, PathPoint::K], 40);
        let rows = band_path(&lat, &w, 0.05, &path, 4.0 * lat.shortest_dual(), 1).unwrap();
        let step = (path[1] - path[0]).norm();
        // |∇E| ≤ 2|k + κ̃m| ≤ 2|K| near the bottom of the spectrum
        let slope = 2.0 * path.last().unwrap().norm();
        for p in rows.windows(2) {
            assert!((p[1].energies[0] - p[0].energies[0]).abs() < 10.0 * step * slope);
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let rows = vec![
            BandRow { k: [0.1, -1.0 / 3.0], energies: vec![std::f64::consts::PI, 1e-300] },
            BandRow { k: [2.0, 0.0], energies: vec![-0.0, 7.25] },
        ];
        let text = bands_csv(&rows);
        assert!(text.starts_with("idx,kx,ky,E1,E2\n0,"));
        assert_eq!(parse_bands_csv(&text).unwrap(), rows);
    }

    #[test]
    fn rejects_empty_path() {
        let lat = HoneycombBasis::<f64>::unit(LatticeKind::Direct);
        assert!(band_path(&lat, &FourierPotential::zero(lat), 0.0, &[], 10.0, 1).is_err());
    }
}
