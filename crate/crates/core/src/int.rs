//! Exact integer vectors and 2×2 matrices.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Integer 2-vector. Ordered lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct IVec2 {
    pub x: i64,
    pub y: i64,
}

impl IVec2 {
    pub const ZERO: IVec2 = IVec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        IVec2 { x, y }
    }

    pub fn norm_sq(self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl From<[i64; 2]> for IVec2 {
    fn from(v: [i64; 2]) -> Self {
        IVec2::new(v[0], v[1])
    }
}

impl From<IVec2> for [i64; 2] {
    fn from(v: IVec2) -> Self {
        [v.x, v.y]
    }
}

impl fmt::Debug for IVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for IVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Add for IVec2 {
    type Output = IVec2;
    fn add(self, o: IVec2) -> IVec2 {
        IVec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for IVec2 {
    type Output = IVec2;
    fn sub(self, o: IVec2) -> IVec2 {
        IVec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for IVec2 {
    type Output = IVec2;
    fn neg(self) -> IVec2 {
        IVec2::new(-self.x, -self.y)
    }
}

impl Mul<IVec2> for i64 {
    type Output = IVec2;
    fn mul(self, v: IVec2) -> IVec2 {
        IVec2::new(self * v.x, self * v.y)
    }
}

/// Integer 2×2 matrix stored row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct IMat2 {
    pub rows: [[i64; 2]; 2],
}

impl IMat2 {
    pub const IDENTITY: IMat2 = IMat2 { rows: [[1, 0], [0, 1]] };

    pub const fn new(rows: [[i64; 2]; 2]) -> Self {
        IMat2 { rows }
    }

    pub fn det(&self) -> i64 {
        let [[a, b], [c, d]] = self.rows;
        a * d - b * c
    }

    /// Adjugate, so that `adj · M = det · I`.
    pub fn adjugate(&self) -> IMat2 {
        let [[a, b], [c, d]] = self.rows;
        IMat2::new([[d, -b], [-c, a]])
    }

    pub fn apply(&self, v: IVec2) -> IVec2 {
        let [[a, b], [c, d]] = self.rows;
        IVec2::new(a * v.x + b * v.y, c * v.x + d * v.y)
    }

    pub fn pow(&self, n: u32) -> IMat2 {
        (0..n).fold(IMat2::IDENTITY, |acc, _| acc * *self)
    }

    /// Solves `M x = v` over the integers, if an integer solution exists.
    pub fn solve_integer(&self, v: IVec2) -> Option<IVec2> {
        let det = self.det();
        if det == 0 {
            return None;
        }
        let w = self.adjugate().apply(v);
        if w.x % det == 0 && w.y % det == 0 {
            Some(IVec2::new(w.x / det, w.y / det))
        } else {
            None
        }
    }

    /// `v ∈ M ℤ²`, decided exactly.
    pub fn contains(&self, v: IVec2) -> bool {
        self.solve_integer(v).is_some()
    }
}

impl From<[[i64; 2]; 2]> for IMat2 {
    fn from(rows: [[i64; 2]; 2]) -> Self {
        IMat2::new(rows)
    }
}

impl From<IMat2> for [[i64; 2]; 2] {
    fn from(m: IMat2) -> Self {
        m.rows
    }
}

impl fmt::Debug for IMat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows)
    }
}

impl Mul for IMat2 {
    type Output = IMat2;
    fn mul(self, o: IMat2) -> IMat2 {
        let [[a, b], [c, d]] = self.rows;
        let [[e, f], [g, h]] = o.rows;
        IMat2::new([[a * e + b * g, a * f + b * h], [c * e + d * g, c * f + d * h]])
    }
}
