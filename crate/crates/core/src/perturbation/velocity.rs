use crate::int::IVec2;
use crate::lattice::{OrbitSet, SymmetryData};
use crate::potential::conditions::ivec;
use crate::potential::FourierPotential;
use crate::scalar::Real;
use nalgebra::{Matrix2, Vector2};
use serde::Serialize;

/// Terms of `|K*|² + λ‖W‖∞ + λ²‖∇W‖²∞ Σ_{m∈S∖{0}} |K*(m)|⁻⁴`.
///
/// The sup norms are replaced by the coefficient sums `Σ|Ŵ_m|` and
/// `Σ|Ŵ_m||κ̃m|`, which bound them from above.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "")]
pub struct VelocityBound<T: Real> {
    pub kinetic: T,
    pub potential_norm: T,
    pub gradient_norm: T,
    /// Sum over the orbit representatives inside the cutoff.
    pub lattice_sum: T,
    /// `π/(3A*R²)`: the integral of `r⁻⁴` beyond the cutoff `R` at one point
    /// per three dual cells.
    pub tail: T,
    pub bracket: T,
}

pub fn velocity_bound<T: Real>(
    w: &FourierPotential<T>,
    lambda: T,
    k: &Vector2<T>,
    s: &OrbitSet<T>,
    sym: &SymmetryData,
    dual: &Matrix2<T>,
) -> VelocityBound<T> {
    let kinetic = k.norm_squared();
    let potential_norm = w.l1_norm();
    let gradient_norm = w.gradient_l1_norm();
    let lattice_sum = s
        .representatives
        .iter()
        .filter(|&&m| !sym.orbit(m).contains(&IVec2::ZERO))
        .map(|&m| (k + dual * ivec::<T>(m)).norm_squared().powi(-2))
        .fold(T::zero(), |a, b| a + b);
    let area = dual.determinant().abs();
    let r = s.cutoff_radius;
    let tail = T::pi() / (T::lit(3.0) * area * r * r);
    let l = lambda.abs();
    let bracket = kinetic + l * potential_norm + l * l * gradient_norm * gradient_norm * (lattice_sum + tail);
    VelocityBound { kinetic, potential_norm, gradient_norm, lattice_sum, tail, bracket }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{classify_angle, orbit_representatives, superlattice_basis, symmetry_data, KPoint};
    use crate::potential::{reference_potential, twist, Stacking, TwistSpec};

    fn family(a: i64, b: i64, lambda_of_n: impl Fn(f64) -> f64, shells: f64) -> (f64, VelocityBound<f64>) {
        let d = classify_angle(a, b).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let w = twist(&reference_potential(), &TwistSpec::additive(d, Stacking::AA)).unwrap();
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let s = orbit_representatives(&sym, &lat, &k, shells * lat.shortest_dual());
        let n: f64 = d.n();
        (n, velocity_bound(&w, lambda_of_n(n), &k, &s, &sym, lat.dual_matrix()))
    }

    #[test]
    fn free_bracket_is_kinetic() {
        let d = classify_angle(2, 1).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let s = orbit_representatives(&sym, &lat, &k, 4.0 * lat.shortest_dual());
        let b = velocity_bound(&FourierPotential::zero(lat), 0.7, &k, &s, &sym, lat.dual_matrix());
        assert_eq!(b.bracket, k.norm_squared());
    }

    #[test]
    fn doubling_lambda_respects_polynomial_structure() {
        let (_, b1) = family(2, 1, |_| 1e-3, 6.0);
        let (_, b2) = family(2, 1, |_| 2e-3, 6.0);
        let linear = b1.bracket - b1.kinetic;
        assert!(b2.bracket - b2.kinetic <= 4.0 * linear);
        assert!(b2.bracket - b2.kinetic >= 2.0 * linear);
    }

    #[test]
    fn tail_matches_direct_summation() {
        // Σ over orbits between R and 3R against the difference of tails
        let d = classify_angle(2, 1).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let w = twist(&reference_potential(), &TwistSpec::additive(d, Stacking::AA)).unwrap();
        let r = 20.0 * lat.shortest_dual();
        let inner = velocity_bound(&w, 1.0, &k, &orbit_representatives(&sym, &lat, &k, r), &sym, lat.dual_matrix());
        let outer =
            velocity_bound(&w, 1.0, &k, &orbit_representatives(&sym, &lat, &k, 3.0 * r), &sym, lat.dual_matrix());
        let shell = outer.lattice_sum - inner.lattice_sum;
        let predicted = inner.tail - outer.tail;
        assert!((shell / predicted - 1.0).abs() < 0.05, "{shell} {predicted}");
    }

    #[test]
    fn lattice_sum_grows_like_n_to_the_fourth() {
        // the sum runs over a dual lattice whose cell shrinks like 1/N², so
        // with λ = 1/N² the quadratic term does not decay
        let rows: Vec<(f64, VelocityBound<f64>)> =
            [(2, 1), (5, 1), (7, 1)].iter().map(|&(a, b)| family(a, b, |n| 1.0 / (n * n), 8.0)).collect();
        for (n, b) in &rows {
            let scaled = (b.lattice_sum + b.tail) / n.powi(4);
            assert!(scaled > 1e-4 && scaled < 1.0, "{n}: {scaled}");
            assert!(b.kinetic * n * n < 20.0);
        }
    }
}
