use super::FourierPotential;
use crate::error::{Error, Result};
use crate::int::IVec2;
use crate::lattice::{CouplingMatrices, OrbitSet, SymmetryData};
use crate::scalar::{cabs, Real};
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex;
use serde::Serialize;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    /// Nonzero modes outside `plus·ℤ² ∪ minus·ℤ²`.
    pub offending: Vec<IVec2>,
}

impl SupportReport {
    pub fn passes(&self) -> bool {
        self.offending.is_empty()
    }
}

pub fn support_check<T: Real>(w: &FourierPotential<T>, cm: &CouplingMatrices) -> SupportReport {
    let offending = w
        .modes()
        .filter(|&m| !w.is_negligible(m) && !cm.in_support_lattice(m))
        .collect();
    SupportReport { offending }
}

/// Re-selects each orbit representative `m` so that `Ŵ_{m−ρ₁} = 0`.
///
/// The origin is kept for its own orbit when it qualifies; otherwise the
/// lexicographically smallest qualifying member is used.
pub fn choose_s_with_zero_pattern<T: Real>(
    w: &FourierPotential<T>,
    sym: &SymmetryData,
    orbits: &OrbitSet<T>,
) -> Result<OrbitSet<T>> {
    let rho = sym.rho_plus();
    let representatives = orbits
        .representatives
        .iter()
        .map(|&rep| {
            let orbit = sym.orbit(rep);
            let mut ok: Vec<IVec2> = orbit.into_iter().filter(|&x| w.is_negligible(x - rho)).collect();
            ok.sort();
            if ok.contains(&IVec2::ZERO) {
                Ok(IVec2::ZERO)
            } else {
                ok.first().copied().ok_or(Error::ZeroPatternFailure { orbit })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OrbitSet { representatives, cutoff_radius: orbits.cutoff_radius })
}

/// `Ŵ_{−ρ₋₁}`; its nonvanishing separates the `K*` triplet at first order.
pub fn fw_condition<T: Real>(w: &FourierPotential<T>, sym: &SymmetryData) -> Complex<T> {
    w.get(-sym.rho_minus())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderSum<T: Real> {
    pub total: Complex<T>,
    /// Nonzero summands, keyed by representative.
    pub terms: Vec<(IVec2, Complex<T>)>,
    /// Estimate of the omitted tail beyond the orbit cutoff.
    pub tail_bound: T,
    /// Every summand vanished: the sum cannot decide the splitting.
    pub inconclusive: bool,
}

impl<T: Real> SecondOrderSum<T> {
    /// All nonzero summands have real parts of one sign and negligible imaginary parts.
    pub fn sign_definite(&self) -> bool {
        let tol = T::lit(T::ZERO_TOL);
        let pos = self.terms.iter().all(|(_, z)| z.re > tol && z.im.abs() <= tol);
        let neg = self.terms.iter().all(|(_, z)| z.re < -tol && z.im.abs() <= tol);
        !self.terms.is_empty() && (pos || neg)
    }
}

pub(crate) fn check_denominators<T: Real>(
    sym: &SymmetryData,
    s: &OrbitSet<T>,
    k: &Vector2<T>,
    dual: &Matrix2<T>,
) -> Result<()> {
    let k_norm = k.norm();
    let tol = T::lit(1e-10) * k_norm.max(T::one());
    let modes: Vec<IVec2> = s
        .representatives
        .iter()
        .copied()
        .filter(|&m| !sym.orbit(m).contains(&IVec2::ZERO))
        .filter(|&m| ((k + dual * ivec(m)).norm() - k_norm).abs() <= tol)
        .collect();
    if modes.is_empty() {
        Ok(())
    } else {
        Err(Error::DegenerateDenominator { modes })
    }
}

pub(crate) fn ivec<T: Real>(m: IVec2) -> Vector2<T> {
    Vector2::new(T::int(m.x), T::int(m.y))
}

/// Tail estimate for `Σ f(|K*(m)|)` over orbits outside `radius`, with
/// `f(r) = G²/(r²(r² − |K*|²))` and `G` the gradient bound of `w`.
pub(crate) fn smoothness_tail<T: Real>(w: &FourierPotential<T>, radius: T, k_norm_sq: T) -> T {
    let g = w.gradient_l1_norm();
    let r2 = radius * radius;
    if g == T::zero() {
        return T::zero();
    }
    if r2 <= k_norm_sq {
        return T::max_value().unwrap_or_else(T::one);
    }
    let density = T::two_pi() / (T::lit(3.0) * w.lattice().dual_cell_area());
    density * g * g * (r2 / (r2 - k_norm_sq)).ln() / (T::lit(2.0) * k_norm_sq)
}

/// `Σ_{m ∈ S∖{0}} Ŵ_m Ŵ_{m−ρ₋₁} / (|K*|² − |K*(m)|²)`.
pub fn second_order_sum<T: Real>(
    w: &FourierPotential<T>,
    sym: &SymmetryData,
    s: &OrbitSet<T>,
    k: &Vector2<T>,
    dual: &Matrix2<T>,
) -> Result<SecondOrderSum<T>> {
    check_denominators(sym, s, k, dual)?;
    let e0 = k.norm_squared();
    let rho = sym.rho_minus();
    let mut total = Complex::default();
    let mut terms = Vec::new();
    for &m in &s.representatives {
        if sym.orbit(m).contains(&IVec2::ZERO) {
            continue;
        }
        let product = w.get(m) * w.get(m - rho);
        if cabs(product) <= T::lit(T::ZERO_TOL) {
            continue;
        }
        let term = product / (e0 - (k + dual * ivec(m)).norm_squared());
        total += term;
        terms.push((m, term));
    }
    let tail_bound = smoothness_tail(w, s.cutoff_radius, e0);
    Ok(SecondOrderSum { total, inconclusive: terms.is_empty(), terms, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{
        classify_angle, coupling_matrices, orbit_representatives, superlattice_basis, symmetry_data, HoneycombBasis,
        KPoint, LatticeKind,
    };
    use crate::potential::{reference_potential, twist, Stacking, TwistSpec};

    fn setup(a: i64, b: i64) -> (FourierPotential<f64>, SymmetryData, OrbitSet<f64>, Vector2<f64>) {
        let d = classify_angle(a, b).unwrap();
        let w = twist(&reference_potential(), &TwistSpec::additive(d, Stacking::AA)).unwrap();
        let lat = superlattice_basis::<f64>(&d);
        let sym = symmetry_data(lat.kind(), KPoint::K);
        let k = sym.anchor(&lat);
        let orbits = orbit_representatives(&sym, &lat, &k, 8.0 * lat.shortest_dual());
        (w, sym, orbits, k)
    }

    #[test]
    fn twisted_support_is_on_coupled_lattices() {
        let d = classify_angle(2, 1).unwrap();
        let (mut w, sym, _, _) = setup(2, 1);
        let cm = coupling_matrices(&d).unwrap();
        assert!(support_check(&w, &cm).passes());
        w.add(sym.rho_plus(), Complex::new(1.0, 0.0));
        assert_eq!(support_check(&w, &cm).offending, vec![sym.rho_plus()]);
        let empty = FourierPotential::<f64>::zero(*w.lattice());
        assert!(support_check(&empty, &cm).passes());
    }

    #[test]
    fn fw_coefficient_values() {
        let (w, sym, _, _) = setup(2, 1);
        assert_eq!(fw_condition(&w, &sym), Complex::new(0.0, 0.0));

        let v = reference_potential::<f64>();
        let sym1 = symmetry_data(LatticeKind::Direct, KPoint::K);
        assert_eq!(fw_condition(&v, &sym1), Complex::new(0.5, 0.0));
        let empty = FourierPotential::<f64>::zero(HoneycombBasis::unit(LatticeKind::Direct));
        assert_eq!(fw_condition(&empty, &sym1).norm(), 0.0);
    }

    #[test]
    fn zero_pattern_selection_on_twisted_potential() {
        let (w, sym, orbits, _) = setup(2, 1);
        let s = choose_s_with_zero_pattern(&w, &sym, &orbits).unwrap();
        assert_eq!(s.len(), orbits.len());
        for (&m, &r) in s.representatives.iter().zip(&orbits.representatives) {
            assert!(sym.orbit(r).contains(&m));
            assert!(w.get(m - sym.rho_plus()).norm() == 0.0);
        }
    }

    #[test]
    fn dense_potential_defeats_zero_pattern() {
        let lat = HoneycombBasis::<f64>::unit(LatticeKind::Direct);
        let sym = symmetry_data(LatticeKind::Direct, KPoint::K);
        let k = sym.anchor(&lat);
        let mut dense = FourierPotential::zero(lat);
        for x in -4..=4 {
            for y in -4..=4 {
                dense.add(IVec2::new(x, y), Complex::new(1.0, 0.0));
            }
        }
        let orbits = orbit_representatives(&sym, &lat, &k, 2.0 * lat.shortest_dual());
        match choose_s_with_zero_pattern(&dense, &sym, &orbits) {
            Err(Error::ZeroPatternFailure { orbit }) => assert!(orbits.representatives.contains(&sym.canonical(orbit[0]))),
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn reference_second_order_sum_is_negative() {
        let (w, sym, orbits, k) = setup(2, 1);
        let s = choose_s_with_zero_pattern(&w, &sym, &orbits).unwrap();
        let sum = second_order_sum(&w, &sym, &s, &k, w.lattice().dual_matrix()).unwrap();
        assert!(!sum.inconclusive);
        assert!(sum.sign_definite());
        assert!(sum.total.re < 0.0 && sum.total.im == 0.0);
        assert!(sum.tail_bound.is_finite() && sum.tail_bound > 0.0);
    }

    #[test]
    fn vanishing_products_are_inconclusive() {
        let (w, sym, orbits, k) = setup(2, 1);
        let empty = FourierPotential::zero(*w.lattice());
        let s = choose_s_with_zero_pattern(&empty, &sym, &orbits).unwrap();
        let sum = second_order_sum(&empty, &sym, &s, &k, w.lattice().dual_matrix()).unwrap();
        assert_eq!(sum.total, Complex::new(0.0, 0.0));
        assert!(sum.inconclusive);

        // Keep only one factor of every contributing product.
        let s = choose_s_with_zero_pattern(&w, &sym, &orbits).unwrap();
        let mut single = FourierPotential::zero(*w.lattice());
        for (m, c) in w.iter() {
            if w.get(m - sym.rho_minus()).norm() == 0.0 {
                single.add(m, c);
            }
        }
        let sum = second_order_sum(&single, &sym, &s, &k, w.lattice().dual_matrix()).unwrap();
        assert!(sum.inconclusive);
    }

    #[test]
    fn degenerate_shell_is_reported() {
        let (w, sym, orbits, k) = setup(2, 1);
        // The origin orbit member ρ₁ is skipped, so inject a same-length index.
        let mut s = orbits.clone();
        let lat = *w.lattice();
        let n0 = k.norm();
        let twin = (-8..=8)
            .flat_map(|x| (-8..=8).map(move |y| IVec2::new(x, y)))
            .find(|&m| !sym.orbit(m).contains(&IVec2::ZERO) && ((k + lat.dual_point(m)).norm() - n0).abs() < 1e-12);
        if let Some(m) = twin {
            s.representatives.push(m);
            assert!(matches!(
                second_order_sum(&w, &sym, &s, &k, lat.dual_matrix()),
                Err(Error::DegenerateDenominator { .. })
            ));
        }
    }
}
