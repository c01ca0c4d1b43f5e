use super::cosine::{build_cosine_family, Sign};
use super::twist::{Combiner, Stacking};
use super::{validate_honeycomb, FourierPotential};
use crate::error::{Error, Result};
use crate::int::IVec2;
use crate::lattice::{classify_angle, superlattice_basis, CommensurationData, LatticeKind};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub m: IVec2,
    pub a: f64,
}

/// Single-layer cosine family as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialFile {
    pub lattice: LatticeKind,
    pub sign: Sign,
    pub orbits: Vec<OrbitRecord>,
}

impl PotentialFile {
    pub fn reference() -> Self {
        PotentialFile {
            lattice: LatticeKind::Direct,
            sign: Sign::Plus,
            orbits: vec![OrbitRecord { m: IVec2::new(1, 0), a: 1.0 }],
        }
    }

    pub fn build(&self) -> Result<FourierPotential<f64>> {
        if self.lattice != LatticeKind::Direct {
            return Err(Error::InvalidPotential("single-layer potentials live on \"Lambda\"".into()));
        }
        let coeffs: Vec<_> = self.orbits.iter().map(|o| (o.m, o.a)).collect();
        build_cosine_family(&coeffs, self.sign)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub m: IVec2,
    pub re: f64,
    pub im: f64,
}

fn is_additive(c: &Combiner) -> bool {
    *c == Combiner::Additive
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// Twisted potential as stored on disk, modes in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedDump {
    pub a: i64,
    pub b: i64,
    pub stacking: Stacking,
    #[serde(default = "additive", skip_serializing_if = "is_additive")]
    pub combiner: Combiner,
    #[serde(default, skip_serializing_if = "is_false")]
    pub flipped: bool,
    pub modes: Vec<ModeRecord>,
}

fn additive() -> Combiner {
    Combiner::Additive
}

impl TwistedDump {
    pub fn new(data: &CommensurationData, stacking: Stacking, w: &FourierPotential<f64>) -> Self {
        TwistedDump {
            a: data.a(),
            b: data.b(),
            stacking,
            combiner: Combiner::Additive,
            flipped: false,
            modes: w.iter().map(|(m, c)| ModeRecord { m, re: c.re, im: c.im }).collect(),
        }
    }

    pub fn load(&self) -> Result<(CommensurationData, FourierPotential<f64>)> {
        let data = classify_angle(self.a, self.b)?;
        let mut w = FourierPotential::zero(superlattice_basis(&data));
        for rec in &self.modes {
            if !(rec.re.is_finite() && rec.im.is_finite()) {
                return Err(Error::InvalidPotential(format!("non-finite coefficient at {}", rec.m)));
            }
            w.add(rec.m, Complex::new(rec.re, rec.im));
        }
        let honeycomb = validate_honeycomb(&w).passes();
        w.set_honeycomb(honeycomb);
        Ok((data, w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{twist, TwistSpec};

    #[test]
    fn potential_file_round_trip() {
        let text = r#"{"lattice": "Lambda", "sign": "+", "orbits": [{"m": [1,0], "a": 0.35}]}"#;
        let f: PotentialFile = serde_json::from_str(text).unwrap();
        let v = f.build().unwrap();
        assert_eq!(v.len(), 6);
        assert_eq!(v.get(IVec2::new(1, 0)).re, 0.175);
        let again: PotentialFile = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn dump_is_sorted_and_reloads_exactly() {
        let d = classify_angle(2, 1).unwrap();
        let w = twist(&PotentialFile::reference().build().unwrap(), &TwistSpec::additive(d, Stacking::AB)).unwrap();
        let dump = TwistedDump::new(&d, Stacking::AB, &w);
        let json = serde_json::to_string(&dump).unwrap();
        assert!(json.starts_with(r#"{"a":2,"b":1,"stacking":"AB","modes":[{"m":["#));
        let ms: Vec<IVec2> = dump.modes.iter().map(|r| r.m).collect();
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(ms, sorted);
        let back: TwistedDump = serde_json::from_str(&json).unwrap();
        let (d2, w2) = back.load().unwrap();
        assert_eq!(d2, d);
        assert_eq!(w2.iter().collect::<Vec<_>>(), w.iter().collect::<Vec<_>>());
    }
}
