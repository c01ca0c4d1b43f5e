use super::{validate_honeycomb, FourierPotential};
use crate::error::{Error, Result};
use crate::int::IVec2;
use crate::lattice::{
    coupling_matrices, high_symmetry_points, rotation_120, rotation_matrix, superlattice_basis, CommensurationData,
    HoneycombBasis, LatticeKind,
};
use crate::scalar::Real;
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stacking {
    AA,
    AB,
}

/// How the two rotated layers are combined into one potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Combiner {
    /// `½(V₊ + V₋)`.
    Additive,
    /// `V₊ · V₋`.
    PointwiseProduct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistSpec<T: Real> {
    pub data: CommensurationData,
    pub stacking: Stacking,
    pub combiner: Combiner,
    /// Build the potential at `−θ` instead of `θ`.
    pub flipped: bool,
    /// Drop product modes with `|κ̃m|` above this radius.
    pub truncation: Option<T>,
}

impl<T: Real> TwistSpec<T> {
    pub fn additive(data: CommensurationData, stacking: Stacking) -> Self {
        TwistSpec { data, stacking, combiner: Combiner::Additive, flipped: false, truncation: None }
    }
}

/// One rotated (and for AB, shifted) layer re-expressed on the superlattice.
///
/// Layer `t = ±1` is `x ↦ V(R_{−tθ}(x + t·c))`, so its modes sit at `R_{tθ}κp`.
/// For AB stacking `c` runs over `½R^jK₀` and the layer is averaged over `j`.
fn layer<T: Real>(
    pot: &FourierPotential<T>,
    spec: &TwistSpec<T>,
    lattice: HoneycombBasis<T>,
    t: i32,
) -> Result<FourierPotential<T>> {
    let s = if spec.flipped { -t } else { t };
    let cm = coupling_matrices(&spec.data)?;
    let na = cm.layer(s);
    let mut rot = rotation_matrix::<T>(&spec.data);
    if s < 0 {
        rot = rot.transpose();
    }
    let shifts: Vec<Vector2<T>> = match spec.stacking {
        Stacking::AA => Vec::new(),
        Stacking::AB => {
            let (k0, _) = high_symmetry_points(&HoneycombBasis::<T>::unit(LatticeKind::Dual));
            let r = rotation_120::<T>();
            let half = T::lit(0.5);
            vec![r.transpose() * k0 * half, k0 * half, r * k0 * half]
        }
    };
    let unit = pot.lattice();
    let mut out = FourierPotential::zero(lattice);
    for (p, c) in pot.iter() {
        let weight = phase_average(&rot, &unit.dual_point(p), &shifts, t);
        out.add(na.apply(p), c * weight);
    }
    Ok(out)
}

fn phase_average<T: Real>(rot: &Matrix2<T>, q: &Vector2<T>, shifts: &[Vector2<T>], t: i32) -> Complex<T> {
    if shifts.is_empty() {
        return Complex::from(T::one());
    }
    let rq = rot * q;
    let sign = T::int(t as i64);
    let sum = shifts.iter().fold(Complex::default(), |acc, a| {
        let phi = sign * rq.dot(a);
        acc + Complex::new(phi.cos(), phi.sin())
    });
    sum / T::int(shifts.len() as i64)
}

/// Twisted bilayer potential on the superlattice of `spec.data`.
pub fn twist<T: Real>(pot: &FourierPotential<T>, spec: &TwistSpec<T>) -> Result<FourierPotential<T>> {
    let unit = HoneycombBasis::<T>::unit(LatticeKind::Direct);
    if !pot.lattice().same_lattice(&unit) {
        return Err(Error::InvalidPotential("single-layer potential must live on the unit lattice".into()));
    }
    if let Some(mode) = validate_honeycomb(pot).first_violation() {
        return Err(Error::NotHoneycomb { mode });
    }
    let lattice = superlattice_basis::<T>(&spec.data);
    let upper = layer(pot, spec, lattice, 1)?;
    let lower = layer(pot, spec, lattice, -1)?;
    let mut out = match spec.combiner {
        Combiner::Additive => {
            let half = T::lit(0.5);
            let mut w = upper.scaled(half);
            for (m, c) in lower.iter() {
                w.add(m, c * half);
            }
            w
        }
        Combiner::PointwiseProduct => convolve(&upper, &lower, spec.truncation),
    };
    let honeycomb = validate_honeycomb(&out).passes();
    out.set_honeycomb(honeycomb);
    Ok(out)
}

/// Fourier coefficients of the pointwise product `f·g`.
pub(crate) fn convolve<T: Real>(f: &FourierPotential<T>, g: &FourierPotential<T>, radius: Option<T>) -> FourierPotential<T> {
    let lattice = *f.lattice();
    let keep = |m: IVec2| radius.map_or(true, |r| lattice.dual_point(m).norm() <= r);
    let mut out = FourierPotential::zero(lattice);
    for (p, a) in f.iter() {
        for (q, b) in g.iter() {
            if keep(p + q) {
                out.add(p + q, a * b);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{classify_angle, enumerate_angles};
    use crate::potential::{build_cosine_family, reference_potential, Sign};
    use std::f64::consts::PI;

    fn rich_potential() -> FourierPotential<f64> {
        build_cosine_family(&[(IVec2::new(1, 0), 1.0), (IVec2::new(2, 1), 0.3), (IVec2::new(-1, 0), 0.2)], Sign::Plus)
            .unwrap()
    }

    fn rotate(theta: f64, x: &Vector2<f64>) -> Vector2<f64> {
        Matrix2::new(theta.cos(), -theta.sin(), theta.sin(), theta.cos()) * x
    }

    /// Real-space definition of the two layers, evaluated pointwise.
    fn layers_at(v: &FourierPotential<f64>, d: &CommensurationData, stacking: Stacking, x: &Vector2<f64>) -> (f64, f64) {
        let th: f64 = d.theta();
        // counter-clockwise rotations; the shift acts before rotating the argument
        let k0 = Vector2::new(1.0 / 3f64.sqrt(), 0.0);
        let shifts: Vec<Vector2<f64>> = match stacking {
            Stacking::AA => vec![Vector2::zeros()],
            Stacking::AB => (0..3).map(|j| rotate(2.0 * PI * j as f64 / 3.0, &k0) * 0.5).collect(),
        };
        let n = shifts.len() as f64;
        let up: f64 = shifts.iter().map(|a| v.evaluate(&rotate(-th, &(x + a))).re).sum::<f64>() / n;
        let down: f64 = shifts.iter().map(|a| v.evaluate(&rotate(th, &(x - a))).re).sum::<f64>() / n;
        (up, down)
    }

    #[test]
    fn aa_reference_modes() {
        let d = classify_angle(2, 1).unwrap();
        let w = twist(&reference_potential::<f64>(), &TwistSpec::additive(d, Stacking::AA)).unwrap();
        assert_eq!(w.len(), 12);
        assert!(w.iter().all(|(_, c)| (c - Complex::new(0.25, 0.0)).norm() < 1e-15));
        let cm = coupling_matrices(&d).unwrap();
        assert_eq!(w.get(cm.plus.apply(IVec2::new(1, 0))).re, 0.25);
        assert!(w.is_honeycomb());
    }

    #[test]
    fn additive_layers_match_real_space() {
        let v = rich_potential();
        for (a, b) in [(2, 1), (5, 3), (3, 1), (7, 2)] {
            let d = classify_angle(a, b).unwrap();
            for stacking in [Stacking::AA, Stacking::AB] {
                let w = twist(&v, &TwistSpec::additive(d, stacking)).unwrap();
                for x in [Vector2::new(0.37, -1.21), Vector2::new(2.9, 0.05)] {
                    let (up, down) = layers_at(&v, &d, stacking, &x);
                    let got = w.evaluate(&x);
                    assert!((got.re - 0.5 * (up + down)).abs() < 1e-12, "({a},{b}) {stacking:?}");
                    assert!(got.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn product_matches_real_space() {
        let v = reference_potential::<f64>();
        let d = classify_angle(2, 1).unwrap();
        for stacking in [Stacking::AA, Stacking::AB] {
            let spec = TwistSpec { combiner: Combiner::PointwiseProduct, ..TwistSpec::additive(d, stacking) };
            let w = twist(&v, &spec).unwrap();
            for x in [Vector2::new(0.1, 0.2), Vector2::new(-3.3, 1.4)] {
                let (up, down) = layers_at(&v, &d, stacking, &x);
                assert!((w.evaluate(&x).re - up * down).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn aa_output_is_even_real_and_rotation_invariant() {
        let v = rich_potential();
        for d in enumerate_angles(8) {
            let w = twist(&v, &TwistSpec::additive(d, Stacking::AA)).unwrap();
            assert!(validate_honeycomb(&w).passes(), "({}, {})", d.a(), d.b());
        }
    }

    #[test]
    fn ab_output_is_rotation_invariant_but_not_even() {
        let d = classify_angle(2, 1).unwrap();
        let w = twist(&rich_potential(), &TwistSpec::additive(d, Stacking::AB)).unwrap();
        let r = validate_honeycomb(&w);
        assert!(r.reality.is_empty() && r.rotation.is_empty());
        assert!(!r.evenness.is_empty());
    }

    #[test]
    fn flipped_ab_is_the_reflected_potential() {
        let v = rich_potential();
        for d in enumerate_angles(7) {
            let spec = TwistSpec::additive(d, Stacking::AB);
            let w = twist(&v, &spec).unwrap();
            let wf = twist(&v, &TwistSpec { flipped: true, ..spec }).unwrap();
            assert_eq!(w.len(), wf.len());
            for (m, c) in w.iter() {
                assert!((wf.get(-m) - c).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn truncation_drops_far_modes() {
        let d = classify_angle(2, 1).unwrap();
        let spec = TwistSpec {
            combiner: Combiner::PointwiseProduct,
            truncation: Some(2.0),
            ..TwistSpec::additive(d, Stacking::AA)
        };
        let w = twist(&reference_potential::<f64>(), &spec).unwrap();
        assert!(w.modes().all(|m| w.lattice().dual_point(m).norm() <= 2.0));
    }

    #[test]
    fn rejects_non_honeycomb_input() {
        let d = classify_angle(2, 1).unwrap();
        let bad = FourierPotential::from_coefficients(
            HoneycombBasis::unit(LatticeKind::Direct),
            [(IVec2::new(1, 0), Complex::new(1.0, 0.0))],
        );
        assert!(matches!(twist(&bad, &TwistSpec::additive(d, Stacking::AA)), Err(Error::NotHoneycomb { .. })));
    }
}
