//! The shipped Stone spaces, their named points, set algebra and clopen
//! partitions.
//!
//! Every space here has a countable clopen base, so its weight is `ℵ₀`.

pub mod boxes;
pub mod compact;
pub mod cylinder;
pub mod interval;
pub mod literal;
pub mod partition;
pub mod point;
pub mod set;

use std::fmt;
use std::sync::Arc;

use crate::error::{parse_err, Error, Result};
use crate::rational::Rational;

pub use interval::{Interval, Line};
pub use partition::Partition;
pub use point::{compare_cut, CompactPoint, CutPoint, CylinderPoint, NamedPoint};
pub use set::SymbolicSet;

/// A finite discrete space with named points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    pub name: String,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// The type space of `(Q, <)` in one variable.
    CutLine,
    /// `n` independent cut lines.
    MultiOrder(usize),
    /// One-point compactification of a countable discrete set.
    Compactification,
    /// The type space of the dense cyclic order on `Q/Z`.
    Cyclic,
    /// Cantor space `2^N`.
    Cylinder,
    Finite(Arc<FiniteSpace>),
    Singleton,
}

impl Space {
    pub fn parse(s: &str) -> Result<Space> {
        let s = s.trim();
        match s {
            "cutline" => Ok(Space::CutLine),
            "compactification" => Ok(Space::Compactification),
            "cyclic" => Ok(Space::Cyclic),
            "cylinder" => Ok(Space::Cylinder),
            "singleton" => Ok(Space::Singleton),
            _ => {
                let n = s
                    .strip_prefix("multiorder:")
                    .ok_or_else(|| parse_err(format!("unknown space `{s}`")))?;
                match n.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(Space::MultiOrder(n)),
                    _ => Err(parse_err(format!("bad arity in `{s}`"))),
                }
            }
        }
    }

    pub fn finite(name: impl Into<String>, points: Vec<String>) -> Space {
        Space::Finite(Arc::new(FiniteSpace { name: name.into(), points }))
    }

    /// The ambient order and number of coordinates of a line-like space.
    pub fn line(&self) -> Option<(Line, usize)> {
        match self {
            Space::CutLine => Some((Line::cut(), 1)),
            Space::MultiOrder(n) => Some((Line::cut(), *n)),
            Space::Cyclic => Some((Line::circle(), 1)),
            _ => None,
        }
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self, Space::CutLine)
    }

    /// Grid coordinates of a point of a line-like space. On the circle,
    /// `0-` is stored as `1-`, the top of the order `[0, 1-]`.
    pub fn coords(&self, x: &NamedPoint) -> Result<Vec<CutPoint>> {
        let bad = || Error::PointNotInSpace { point: x.to_string(), space: self.to_string() };
        match (self, x) {
            (Space::CutLine, NamedPoint::Cut(c)) => Ok(vec![c.clone()]),
            (Space::MultiOrder(n), NamedPoint::Product(cs)) if cs.len() == *n => Ok(cs.clone()),
            (Space::Cyclic, NamedPoint::Cyclic(c)) => {
                let q = c.rational().ok_or_else(bad)?;
                if q.is_negative() || *q >= Rational::one() {
                    return Err(bad());
                }
                Ok(vec![match c {
                    CutPoint::Minus(q) if q.is_zero() => CutPoint::Minus(Rational::one()),
                    other => other.clone(),
                }])
            }
            _ => Err(bad()),
        }
    }

    /// Inverse of [`Space::coords`].
    pub fn from_coords(&self, cs: Vec<CutPoint>) -> NamedPoint {
        match self {
            Space::CutLine => NamedPoint::Cut(cs.into_iter().next().expect("one coordinate")),
            Space::MultiOrder(_) => NamedPoint::Product(cs),
            Space::Cyclic => NamedPoint::Cyclic(match cs.into_iter().next().expect("one coordinate") {
                CutPoint::Minus(q) if q == Rational::one() => CutPoint::Minus(Rational::zero()),
                other => other,
            }),
            _ => panic!("{self} has no coordinates"),
        }
    }

    pub fn check_point(&self, x: &NamedPoint) -> Result<()> {
        let ok = match (self, x) {
            (Space::CutLine | Space::MultiOrder(_) | Space::Cyclic, _) => return self.coords(x).map(|_| ()),
            (Space::Compactification, NamedPoint::Compact(_)) => true,
            (Space::Cylinder, NamedPoint::Cylinder(_)) => true,
            (Space::Finite(f), NamedPoint::Finite(i)) => *i < f.points.len(),
            (Space::Singleton, NamedPoint::Singleton) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::PointNotInSpace { point: x.to_string(), space: self.to_string() })
        }
    }

    /// Renders a grid coordinate the way points of this space are written.
    pub fn coord_string(&self, c: &CutPoint) -> String {
        match (self, c) {
            (Space::Cyclic, CutPoint::Minus(q)) if *q == Rational::one() => "0-".into(),
            _ => c.to_string(),
        }
    }

    pub fn point_string(&self, x: &NamedPoint) -> String {
        match (self, x) {
            (Space::Finite(f), NamedPoint::Finite(i)) => {
                f.points.get(*i).cloned().unwrap_or_else(|| x.to_string())
            }
            _ => x.to_string(),
        }
    }

    /// Parses a single coordinate of a line-like space.
    pub(crate) fn parse_coord(&self, s: &str) -> Result<CutPoint> {
        let c = CutPoint::parse(s).ok_or_else(|| parse_err(format!("bad point `{s}`")))?;
        match self {
            Space::Cyclic => {
                let x = NamedPoint::Cyclic(c);
                Ok(self.coords(&x)?.remove(0))
            }
            _ => Ok(c),
        }
    }

    pub fn parse_point(&self, s: &str) -> Result<NamedPoint> {
        let s = s.trim();
        let bad = || parse_err(format!("bad point `{s}` for {self}"));
        let x = match self {
            Space::CutLine => NamedPoint::Cut(CutPoint::parse(s).ok_or_else(bad)?),
            Space::Cyclic => NamedPoint::Cyclic(CutPoint::parse(s).ok_or_else(bad)?),
            Space::MultiOrder(_) => {
                let inner = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(s);
                let cs: Option<Vec<CutPoint>> = inner.split(',').map(CutPoint::parse).collect();
                NamedPoint::Product(cs.ok_or_else(bad)?)
            }
            Space::Compactification => NamedPoint::Compact(match s {
                "lim" => CompactPoint::Limit,
                _ => CompactPoint::Iso(s.strip_prefix('i').and_then(|k| k.parse().ok()).ok_or_else(bad)?),
            }),
            Space::Cylinder => NamedPoint::Cylinder(CylinderPoint::parse(s).ok_or_else(bad)?),
            Space::Finite(f) => NamedPoint::Finite(f.points.iter().position(|p| p == s).ok_or_else(bad)?),
            Space::Singleton => match s {
                "*" => NamedPoint::Singleton,
                _ => return Err(bad()),
            },
        };
        self.check_point(&x)?;
        Ok(x)
    }

    /// Named points of height at most `height`, in a fixed order.
    pub fn samples(&self, height: u64) -> Vec<NamedPoint> {
        match self {
            Space::CutLine => cut_samples(height).into_iter().map(NamedPoint::Cut).collect(),
            Space::MultiOrder(n) => {
                let base = cut_samples(height);
                let mut out: Vec<Vec<CutPoint>> = vec![Vec::new()];
                for _ in 0..*n {
                    out = out
                        .into_iter()
                        .flat_map(|v| {
                            base.iter().map(move |c| {
                                let mut w = v.clone();
                                w.push(c.clone());
                                w
                            })
                        })
                        .collect();
                }
                out.into_iter().map(NamedPoint::Product).collect()
            }
            Space::Cyclic => {
                let mut qs: Vec<Rational> = rationals_up_to(height)
                    .into_iter()
                    .filter(|q| !q.is_negative() && *q < Rational::one())
                    .collect();
                qs.sort();
                qs.into_iter()
                    .flat_map(|q| {
                        [CutPoint::Minus(q.clone()), CutPoint::Rat(q.clone()), CutPoint::Plus(q)]
                    })
                    .map(NamedPoint::Cyclic)
                    .collect()
            }
            Space::Compactification => (0..=height)
                .map(|k| NamedPoint::Compact(CompactPoint::Iso(k)))
                .chain([NamedPoint::Compact(CompactPoint::Limit)])
                .collect(),
            Space::Cylinder => {
                let mut pts = std::collections::BTreeSet::new();
                for len in 0..=height as usize {
                    for bits in 0u64..(1 << len) {
                        let w: Vec<bool> = (0..len).map(|i| bits >> (len - 1 - i) & 1 == 1).collect();
                        pts.insert(CylinderPoint::new(w.clone(), false));
                        pts.insert(CylinderPoint::new(w, true));
                    }
                }
                pts.into_iter().map(NamedPoint::Cylinder).collect()
            }
            Space::Finite(f) => (0..f.points.len()).map(NamedPoint::Finite).collect(),
            Space::Singleton => vec![NamedPoint::Singleton],
        }
    }
}

/// Rationals `p/q` with `|p| <= h` and `1 <= q <= h`, sorted.
pub fn rationals_up_to(h: u64) -> Vec<Rational> {
    let h = h as i64;
    let mut v = Vec::new();
    for q in 1..=h.max(1) {
        for p in -h..=h {
            if num_integer::gcd(p, q) == 1 {
                v.push(Rational::new(p, q));
            }
        }
    }
    v.sort();
    v.dedup();
    v
}

fn cut_samples(height: u64) -> Vec<CutPoint> {
    let mut v = vec![CutPoint::MinusInf];
    for q in rationals_up_to(height) {
        v.extend([CutPoint::Minus(q.clone()), CutPoint::Rat(q.clone()), CutPoint::Plus(q)]);
    }
    v.push(CutPoint::PlusInf);
    v
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::CutLine => f.write_str("cutline"),
            Space::MultiOrder(n) => write!(f, "multiorder:{n}"),
            Space::Compactification => f.write_str("compactification"),
            Space::Cyclic => f.write_str("cyclic"),
            Space::Cylinder => f.write_str("cylinder"),
            Space::Finite(s) => write!(f, "finite:{}", s.name),
            Space::Singleton => f.write_str("singleton"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings_round_trip() {
        for s in ["cutline", "multiorder:3", "compactification", "cyclic", "cylinder"] {
            assert_eq!(Space::parse(s).unwrap().to_string(), s);
        }
        assert!(Space::parse("multiorder:0").is_err());
        assert!(Space::parse("torus").is_err());
    }

    #[test]
    fn sample_counts() {
        assert_eq!(rationals_up_to(1).len(), 3);
        assert_eq!(rationals_up_to(4).len(), 23);
        assert_eq!(Space::CutLine.samples(4).len(), 71);
        assert_eq!(Space::MultiOrder(2).samples(1).len(), 121);
        assert_eq!(Space::Cyclic.samples(2).len(), 6);
        assert_eq!(Space::Compactification.samples(3).len(), 5);
        assert_eq!(Space::Cylinder.samples(1).len(), 4);
    }

    #[test]
    fn cyclic_coordinates() {
        let s = Space::Cyclic;
        let top = s.parse_point("0-").unwrap();
        assert_eq!(s.coords(&top).unwrap(), vec![CutPoint::Minus(Rational::one())]);
        assert_eq!(s.from_coords(s.coords(&top).unwrap()), top);
        assert!(s.parse_point("1").is_err());
        assert!(s.parse_point("-1/2").is_err());
    }

    #[test]
    fn point_parsing() {
        let m = Space::MultiOrder(2);
        assert_eq!(
            m.parse_point("(-inf, 5)").unwrap(),
            NamedPoint::Product(vec![CutPoint::MinusInf, CutPoint::Rat(Rational::from_integer(5))])
        );
        assert!(m.parse_point("(1,2,3)").is_err());
        assert_eq!(Space::Compactification.parse_point("i7").unwrap(), NamedPoint::Compact(CompactPoint::Iso(7)));
        assert_eq!(Space::Cylinder.parse_point("01|1").unwrap().to_string(), "0|1");
    }
}
