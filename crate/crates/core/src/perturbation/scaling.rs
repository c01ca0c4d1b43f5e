use crate::bloch::{build_basis, find_dirac, DEFAULT_DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::lattice::{classify_angle, superlattice_basis, symmetry_data, HoneycombBasis, KPoint, LatticeKind};
use crate::potential::{twist, FourierPotential, Stacking, TwistSpec};
use crate::scalar::Real;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Default basis radius, in units of the shortest unit-lattice dual vector.
pub const DEFAULT_SCALING_CUTOFF: f64 = 1.5;

#[allow(non_snake_case)]
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct ScalingRow<T: Real> {
    pub a: i64,
    pub b: i64,
    pub N: T,
    pub lambda: T,
    pub vd_abs: Option<T>,
    pub N_times_vd: Option<T>,
    /// `ok`, `multiplicity=<n>` or `error: <message>`.
    pub flag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct ScalingTable<T: Real> {
    pub rows: Vec<ScalingRow<T>>,
    /// max/min of `N·|v_d|` over every row with a computed velocity.
    pub ratio: Option<T>,
}

impl<T: Real> ScalingTable<T> {
    /// `(N, N·|v_d|)` of the rows with a computed velocity, in input order.
    pub fn scaled_velocities(&self) -> Vec<(T, T)> {
        self.rows.iter().filter_map(|r| r.N_times_vd.map(|v| (r.N, v))).collect()
    }
}

fn scaling_row<T: Real>(
    v: &FourierPotential<T>,
    a: i64,
    b: i64,
    delta: T,
    cutoff: T,
    stacking: Stacking,
) -> ScalingRow<T> {
    let data = match classify_angle(a, b) {
        Ok(d) => d,
        Err(e) => {
            return ScalingRow {
                a,
                b,
                N: T::zero(),
                lambda: T::zero(),
                vd_abs: None,
                N_times_vd: None,
                flag: format!("error: {e}"),
            }
        }
    };
    let n: T = data.n();
    let lambda = delta / (n * n);
    let mut row = ScalingRow { a, b, N: n, lambda, vd_abs: None, N_times_vd: None, flag: String::new() };
    let run = || -> Result<(usize, T)> {
        let w = twist(v, &TwistSpec::additive(data, stacking))?;
        let lat = superlattice_basis::<T>(&data);
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let radius = cutoff * HoneycombBasis::<T>::unit(LatticeKind::Direct).shortest_dual();
        let basis = build_basis(&sym, &lat, &k, radius)?;
        let r = find_dirac(&basis, &w, lambda, T::lit(DEFAULT_DEGENERACY_TOL))?;
        Ok((r.multiplicity, r.v_d_magnitude))
    };
    match run() {
        Ok((mult, vd)) => {
            row.vd_abs = Some(vd);
            row.N_times_vd = Some(n * vd);
            row.flag = if mult == 2 { "ok".into() } else { format!("multiplicity={mult}") };
        }
        Err(e) => row.flag = format!("error: {e}"),
    }
    row
}

/// `N·|v_d|` at `λ = δ/N²` for each angle, AA stacking.
///
/// `cutoff` is the plane-wave radius in units of the shortest dual vector of
/// the unit lattice, so every angle resolves the same single-layer modes.
pub fn scaling_study<T: Real>(
    v: &FourierPotential<T>,
    angles: &[(i64, i64)],
    delta: T,
    cutoff: T,
) -> Result<ScalingTable<T>> {
    scaling_study_with(v, angles, delta, cutoff, Stacking::AA)
}

pub fn scaling_study_with<T: Real>(
    v: &FourierPotential<T>,
    angles: &[(i64, i64)],
    delta: T,
    cutoff: T,
    stacking: Stacking,
) -> Result<ScalingTable<T>> {
    if !(delta > T::zero()) {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    if angles.is_empty() {
        return Err(Error::InvalidArgument("empty angle list".into()));
    }
    let rows: Vec<ScalingRow<T>> =
        angles.par_iter().map(|&(a, b)| scaling_row(v, a, b, delta, cutoff, stacking)).collect();
    let v: Vec<T> = rows.iter().filter_map(|r| r.N_times_vd).collect();
    let ratio = if v.is_empty() {
        None
    } else {
        let max = v.iter().copied().fold(T::zero(), |a, b| a.max(b));
        let min = v.iter().copied().fold(max, |a, b| a.min(b));
        Some(max / min)
    };
    Ok(ScalingTable { rows, ratio })
}

fn cell<T: Real>(x: Option<T>) -> String {
    x.map(|v| format!("{:.16e}", v.as_f64())).unwrap_or_default()
}

/// `a,b,N,lambda,vd_abs,N_times_vd,flag`.
pub fn scaling_csv<T: Real>(table: &ScalingTable<T>) -> String {
    let mut s = String::from("a,b,N,lambda,vd_abs,N_times_vd,flag\n");
    for r in &table.rows {
        writeln!(
            s,
            "{},{},{:.16e},{:.16e},{},{},{}",
            r.a,
            r.b,
            r.N.as_f64(),
            r.lambda.as_f64(),
            cell(r.vd_abs),
            cell(r.N_times_vd),
            r.flag.replace(',', ";")
        )
        .unwrap();
    }
    s
}
