//! Named points of the shipped spaces.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::rational::Rational;

/// A point of the cut line: the type space of a dense linear order over `Q`.
///
/// `Minus(q)` is the cut immediately below `q`, `Plus(q)` the cut immediately
/// above. Irrational cuts exist in the space but are never named.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CutPoint {
    MinusInf,
    Minus(Rational),
    Rat(Rational),
    Plus(Rational),
    PlusInf,
}

impl CutPoint {
    fn rank(&self) -> (u8, Option<(&Rational, u8)>) {
        match self {
            CutPoint::MinusInf => (0, None),
            CutPoint::Minus(q) => (1, Some((q, 0))),
            CutPoint::Rat(q) => (1, Some((q, 1))),
            CutPoint::Plus(q) => (1, Some((q, 2))),
            CutPoint::PlusInf => (2, None),
        }
    }

    pub fn rational(&self) -> Option<&Rational> {
        match self {
            CutPoint::Minus(q) | CutPoint::Rat(q) | CutPoint::Plus(q) => Some(q),
            _ => None,
        }
    }

    /// Immediate successor in the order, when one exists.
    pub fn succ(&self) -> Option<CutPoint> {
        match self {
            CutPoint::Minus(q) => Some(CutPoint::Rat(q.clone())),
            CutPoint::Rat(q) => Some(CutPoint::Plus(q.clone())),
            _ => None,
        }
    }

    /// Immediate predecessor in the order, when one exists.
    pub fn pred(&self) -> Option<CutPoint> {
        match self {
            CutPoint::Rat(q) => Some(CutPoint::Minus(q.clone())),
            CutPoint::Plus(q) => Some(CutPoint::Rat(q.clone())),
            _ => None,
        }
    }

    pub fn is_isolated(&self) -> bool {
        matches!(self, CutPoint::Rat(_))
    }

    /// Height of the underlying rational; the infinities have height 0.
    pub fn height(&self) -> u64 {
        self.rational().map_or(0, Rational::height)
    }

    /// Same tag, new rational. Infinities are returned unchanged.
    pub fn with_rational(&self, q: Rational) -> CutPoint {
        match self {
            CutPoint::Minus(_) => CutPoint::Minus(q),
            CutPoint::Rat(_) => CutPoint::Rat(q),
            CutPoint::Plus(_) => CutPoint::Plus(q),
            other => other.clone(),
        }
    }

    pub fn parse(s: &str) -> Option<CutPoint> {
        let s = s.trim();
        match s {
            "-inf" => return Some(CutPoint::MinusInf),
            "+inf" | "inf" => return Some(CutPoint::PlusInf),
            _ => {}
        }
        let (body, tag) = if let Some(b) = s.strip_suffix('-') {
            (b, 0)
        } else if let Some(b) = s.strip_suffix('+') {
            (b, 2)
        } else {
            (s, 1)
        };
        let q: Rational = body.parse().ok()?;
        Some(match tag {
            0 => CutPoint::Minus(q),
            1 => CutPoint::Rat(q),
            _ => CutPoint::Plus(q),
        })
    }
}

impl Ord for CutPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, x) = self.rank();
        let (b, y) = other.rank();
        a.cmp(&b).then_with(|| match (x, y) {
            (Some((p, s)), Some((q, t))) => p.cmp(q).then(s.cmp(&t)),
            _ => Ordering::Equal,
        })
    }
}

impl PartialOrd for CutPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CutPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CutPoint::MinusInf => f.write_str("-inf"),
            CutPoint::PlusInf => f.write_str("+inf"),
            CutPoint::Minus(q) => write!(f, "{q}-"),
            CutPoint::Rat(q) => write!(f, "{q}"),
            CutPoint::Plus(q) => write!(f, "{q}+"),
        }
    }
}

/// Total order on one cut line.
pub fn compare_cut(p: &CutPoint, q: &CutPoint) -> Ordering {
    p.cmp(q)
}

/// Points of the one-point compactification of a countable discrete set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompactPoint {
    Iso(u64),
    Limit,
}

impl fmt::Display for CompactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactPoint::Iso(k) => write!(f, "i{k}"),
            CompactPoint::Limit => f.write_str("lim"),
        }
    }
}

/// An eventually constant point of Cantor space: `word` followed by the
/// constant `tail` bit forever. Stored with trailing tail bits stripped.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CylinderPoint {
    word: Vec<bool>,
    tail: bool,
}

impl CylinderPoint {
    pub fn new(mut word: Vec<bool>, tail: bool) -> Self {
        while word.last() == Some(&tail) {
            word.pop();
        }
        CylinderPoint { word, tail }
    }

    pub fn word(&self) -> &[bool] {
        &self.word
    }

    pub fn tail(&self) -> bool {
        self.tail
    }

    /// Bit at position `i` of the infinite sequence.
    pub fn bit(&self, i: usize) -> bool {
        self.word.get(i).copied().unwrap_or(self.tail)
    }

    pub fn is_eventually_zero(&self) -> bool {
        !self.tail
    }

    pub fn starts_with(&self, prefix: &[bool]) -> bool {
        prefix.iter().enumerate().all(|(i, b)| self.bit(i) == *b)
    }

    pub fn parse(s: &str) -> Option<CylinderPoint> {
        let (w, t) = s.trim().split_once('|')?;
        let tail = match t {
            "0" => false,
            "1" => true,
            _ => return None,
        };
        Some(CylinderPoint::new(parse_word(w)?, tail))
    }
}

pub(crate) fn parse_word(w: &str) -> Option<Vec<bool>> {
    w.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

pub(crate) fn word_string(w: &[bool]) -> String {
    w.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

impl fmt::Display for CylinderPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", word_string(&self.word), u8::from(self.tail))
    }
}

/// A named point of one of the shipped spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedPoint {
    Cut(CutPoint),
    Product(Vec<CutPoint>),
    Compact(CompactPoint),
    /// A point of the circle; the rational lies in `[0, 1)`.
    Cyclic(CutPoint),
    Cylinder(CylinderPoint),
    /// Index into a finite space's point list.
    Finite(usize),
    Singleton,
}

impl NamedPoint {
    pub fn rat(q: Rational) -> NamedPoint {
        NamedPoint::Cut(CutPoint::Rat(q))
    }

    /// Height used by sample enumeration.
    pub fn height(&self) -> u64 {
        match self {
            NamedPoint::Cut(c) | NamedPoint::Cyclic(c) => c.height(),
            NamedPoint::Product(cs) => cs.iter().map(CutPoint::height).max().unwrap_or(0),
            NamedPoint::Compact(CompactPoint::Iso(k)) => *k,
            NamedPoint::Compact(CompactPoint::Limit) => 0,
            NamedPoint::Cylinder(p) => p.word().len() as u64,
            NamedPoint::Finite(_) | NamedPoint::Singleton => 0,
        }
    }
}

impl fmt::Display for NamedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedPoint::Cut(c) | NamedPoint::Cyclic(c) => write!(f, "{c}"),
            NamedPoint::Product(cs) => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            NamedPoint::Compact(p) => write!(f, "{p}"),
            NamedPoint::Cylinder(p) => write!(f, "{p}"),
            NamedPoint::Finite(i) => write!(f, "#{i}"),
            NamedPoint::Singleton => f.write_str("*"),
        }
    }
}

impl Serialize for NamedPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn cut_order_examples() {
        assert_eq!(compare_cut(&CutPoint::Rat(q(0)), &CutPoint::Plus(q(0))), Ordering::Less);
        let p = CutPoint::Minus(Rational::new(1, 3));
        assert_eq!(compare_cut(&p, &p), Ordering::Equal);
        assert_eq!(
            compare_cut(&CutPoint::Minus(Rational::new(1, 3)), &CutPoint::Rat(Rational::new(1, 3))),
            Ordering::Less
        );
        assert!(CutPoint::Plus(q(0)) < CutPoint::Minus(Rational::new(1, 100)));
        assert!(CutPoint::MinusInf < CutPoint::Minus(q(-1000)));
        assert!(CutPoint::Plus(q(1000)) < CutPoint::PlusInf);
    }

    #[test]
    fn successor_structure() {
        let m = CutPoint::Minus(q(2));
        assert_eq!(m.succ(), Some(CutPoint::Rat(q(2))));
        assert_eq!(m.succ().unwrap().succ(), Some(CutPoint::Plus(q(2))));
        assert_eq!(CutPoint::Plus(q(2)).succ(), None);
        assert_eq!(CutPoint::MinusInf.succ(), None);
        assert_eq!(CutPoint::Minus(q(2)).pred(), None);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["-inf", "+inf", "1/2-", "-3+", "0", "-7/3"] {
            let p = CutPoint::parse(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!(CutPoint::parse("x").is_none());
    }

    #[test]
    fn cylinder_points_strip_tail() {
        let p = CylinderPoint::new(vec![false, true, false, false], false);
        assert_eq!(p.word(), &[false, true]);
        assert_eq!(p.to_string(), "01|0");
        assert_eq!(CylinderPoint::parse("0100|0"), Some(p.clone()));
        assert!(p.starts_with(&[false, true, false, false, false]));
        assert!(!p.starts_with(&[true]));
    }
}
