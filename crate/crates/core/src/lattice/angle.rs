use crate::error::{Error, Result};
use crate::scalar::Real;
use nalgebra::Matrix2;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Which triangular lattice a honeycomb basis spans: the direct lattice or
/// its reciprocal lattice (up to scale).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    #[serde(rename = "Lambda")]
    Direct,
    #[serde(rename = "LambdaStar")]
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AlphaClass {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "4pi")]
    FourPi,
    #[serde(rename = "8pi")]
    EightPi,
}

impl AlphaClass {
    pub fn value<T: Real>(self) -> T {
        match self {
            AlphaClass::One => T::one(),
            AlphaClass::Two => T::lit(2.0),
            AlphaClass::FourPi => T::lit(4.0) * T::pi(),
            AlphaClass::EightPi => T::lit(8.0) * T::pi(),
        }
    }
}

/// A commensurate twist angle `tan θ = √3 b / a` with its arithmetic invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CommensurationData {
    a: i64,
    b: i64,
    epsilon: u8,
    rho_flag: u8,
}

impl CommensurationData {
    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// 1 when `ab` is odd.
    pub fn epsilon(&self) -> u8 {
        self.epsilon
    }

    /// 1 when 3 divides `a`.
    pub fn rho_flag(&self) -> u8 {
        self.rho_flag
    }

    pub fn alpha(&self) -> AlphaClass {
        match (self.rho_flag, self.epsilon) {
            (1, 1) => AlphaClass::EightPi,
            (0, 1) => AlphaClass::Two,
            (1, 0) => AlphaClass::FourPi,
            _ => AlphaClass::One,
        }
    }

    /// Kind of the superlattice `R_θΛ ∩ R_{-θ}Λ = N·Λ` or `N·Λ*`.
    pub fn superlattice_kind(&self) -> LatticeKind {
        if self.rho_flag == 1 {
            LatticeKind::Dual
        } else {
            LatticeKind::Direct
        }
    }

    /// `a² + 3b²`, the squared length scale `(αN)²`.
    pub fn norm_sq(&self) -> i64 {
        self.a * self.a + 3 * self.b * self.b
    }

    pub fn theta<T: Real>(&self) -> T {
        (T::lit(3.0).sqrt() * T::int(self.b)).atan2(T::int(self.a))
    }

    pub fn n<T: Real>(&self) -> T {
        T::int(self.norm_sq()).sqrt() / self.alpha().value::<T>()
    }

    pub fn record(&self) -> AngleRecord {
        AngleRecord {
            a: self.a,
            b: self.b,
            theta_rad: self.theta(),
            epsilon: self.epsilon,
            rho_flag: self.rho_flag,
            alpha_class: self.alpha(),
            n: self.n(),
            superlattice: self.superlattice_kind(),
        }
    }
}

/// One row of the exported angle table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleRecord {
    pub a: i64,
    pub b: i64,
    pub theta_rad: f64,
    pub epsilon: u8,
    pub rho_flag: u8,
    pub alpha_class: AlphaClass,
    #[serde(rename = "N")]
    pub n: f64,
    pub superlattice: LatticeKind,
}

pub fn classify_angle(a: i64, b: i64) -> Result<CommensurationData> {
    if !(0 < b && b < a) {
        return Err(Error::InvalidAngle { a, b, reason: "requires 0 < b < a" });
    }
    if a.gcd(&b) != 1 {
        return Err(Error::InvalidAngle { a, b, reason: "a and b must be coprime" });
    }
    Ok(CommensurationData {
        a,
        b,
        epsilon: u8::from((a * b) % 2 == 1),
        rho_flag: u8::from(a % 3 == 0),
    })
}

/// All reduced pairs `0 < b < a ≤ a_max`, sorted by twist angle.
pub fn enumerate_angles(a_max: i64) -> Vec<CommensurationData> {
    let mut out: Vec<_> = (2..=a_max)
        .flat_map(|a| (1..a).filter_map(move |b| classify_angle(a, b).ok()))
        .collect();
    // tan θ = √3 b/a is monotone in b/a; compare exactly
    out.sort_by(|p, q| (p.b * q.a).cmp(&(q.b * p.a)));
    out
}

/// Reduces an angle modulo π/3, the rotational period of a honeycomb potential.
pub fn reduce_angle<T: Real>(theta: T) -> T {
    let period = T::frac_pi_3();
    let mut r = theta % period;
    if r < T::zero() {
        r += period;
    }
    // representation error of π/3 itself
    if r >= period - period * T::lit(4.0) * T::default_epsilon() {
        r = (r - period).max(T::zero());
    }
    r
}

/// Counter-clockwise rotation by `θ`, written with integer entries over `√(a²+3b²)`.
pub fn rotation_matrix<T: Real>(data: &CommensurationData) -> Matrix2<T> {
    let scale = T::int(data.norm_sq()).sqrt();
    let a = T::int(data.a) / scale;
    let s = T::lit(3.0).sqrt() * T::int(data.b) / scale;
    Matrix2::new(a, -s, s, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn classifies_reference_pairs() {
        let d = classify_angle(2, 1).unwrap();
        assert_eq!((d.epsilon(), d.rho_flag(), d.alpha()), (0, 0, AlphaClass::One));
        assert_abs_diff_eq!(d.n::<f64>(), 7f64.sqrt(), epsilon = 1e-14);
        assert_eq!(d.superlattice_kind(), LatticeKind::Direct);

        let d = classify_angle(3, 1).unwrap();
        assert_eq!((d.epsilon(), d.rho_flag(), d.alpha()), (1, 1, AlphaClass::EightPi));
        assert_abs_diff_eq!(d.n::<f64>(), 3f64.sqrt() / (4.0 * PI), epsilon = 1e-14);
        assert_eq!(d.superlattice_kind(), LatticeKind::Dual);

        let d = classify_angle(5, 3).unwrap();
        assert_eq!((d.epsilon(), d.rho_flag(), d.alpha()), (1, 0, AlphaClass::Two));
        assert_abs_diff_eq!(d.n::<f64>(), 13f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn rejects_unreduced_pairs() {
        assert!(classify_angle(4, 2).is_err());
        assert!(classify_angle(1, 2).is_err());
        assert!(classify_angle(3, 0).is_err());
        assert!(classify_angle(2, 2).is_err());
    }

    #[test]
    fn tangent_matches() {
        for d in enumerate_angles(10) {
            let t: f64 = d.theta();
            assert_abs_diff_eq!(t.tan(), 3f64.sqrt() * d.b() as f64 / d.a() as f64, epsilon = 1e-12);
            assert!(t > 0.0 && t < PI / 3.0);
        }
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let v = enumerate_angles(3);
        let pairs: Vec<_> = v.iter().map(|d| (d.a(), d.b())).collect();
        assert_eq!(pairs, vec![(3, 1), (2, 1), (3, 2)]);
        assert_eq!(enumerate_angles(10).len(), 31);
    }

    #[test]
    fn reduces_modulo_sixty_degrees() {
        assert_eq!(reduce_angle(PI / 3.0), 0.0);
        assert_abs_diff_eq!(reduce_angle(PI / 2.0), PI / 6.0, epsilon = 1e-15);
        assert_eq!(reduce_angle(0.1), 0.1);
        let r = reduce_angle(2.0 * PI - 1e-17);
        assert!((0.0..PI / 3.0).contains(&r));
    }

    #[test]
    fn rotation_closed_form() {
        let r: Matrix2<f64> = rotation_matrix(&classify_angle(2, 1).unwrap());
        let s7 = 7f64.sqrt();
        let s3 = 3f64.sqrt();
        let expect = Matrix2::new(2.0 / s7, -s3 / s7, s3 / s7, 2.0 / s7);
        assert_abs_diff_eq!(r, expect, epsilon = 1e-15);

        let r: Matrix2<f64> = rotation_matrix(&classify_angle(3, 1).unwrap());
        assert_abs_diff_eq!(r[(0, 0)], s3 / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r[(1, 0)], 0.5, epsilon = 1e-15);

        for d in enumerate_angles(10) {
            let r: Matrix2<f64> = rotation_matrix(&d);
            assert_abs_diff_eq!(r.transpose() * r, Matrix2::identity(), epsilon = 1e-12);
            assert_abs_diff_eq!(r.determinant(), 1.0, epsilon = 1e-12);
            let t: f64 = d.theta();
            assert_abs_diff_eq!(r[(1, 0)], t.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn record_serializes_alpha_class() {
        let rec = classify_angle(3, 1).unwrap().record();
        let json = serde_json::to_value(&rec).unwrap();
        assert_eq!(json["alpha_class"], "8pi");
        assert_eq!(json["superlattice"], "LambdaStar");
        assert!(json.get("N").is_some());
    }
}
