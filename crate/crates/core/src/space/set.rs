//! Symbolic subsets of a shipped space.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

use super::boxes::BoxSet;
use super::compact::CompactSet;
use super::cylinder::CylinderSet;
use super::interval::Interval;
use super::point::{CompactPoint, CutPoint, NamedPoint};
use super::Space;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Repr {
    Boxes(BoxSet),
    Compact(CompactSet),
    Cylinder(CylinderSet),
    Finite(BTreeSet<usize>),
    Singleton(bool),
}

/// A set in the locally closed class of its space, kept in canonical form:
/// two values are equal iff they denote the same points.
///
/// Binary operations panic when the operands live in different spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicSet {
    space: Space,
    pub(crate) repr: Repr,
}

impl SymbolicSet {
    pub(crate) fn new(space: Space, repr: Repr) -> SymbolicSet {
        SymbolicSet { space, repr }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn empty(space: &Space) -> SymbolicSet {
        let repr = match space {
            Space::Compactification => Repr::Compact(CompactSet::empty()),
            Space::Cylinder => Repr::Cylinder(CylinderSet::empty()),
            Space::Finite(_) => Repr::Finite(BTreeSet::new()),
            Space::Singleton => Repr::Singleton(false),
            _ => {
                let (line, n) = space.line().expect("line space");
                Repr::Boxes(BoxSet::empty(line, n))
            }
        };
        SymbolicSet::new(space.clone(), repr)
    }

    pub fn full(space: &Space) -> SymbolicSet {
        SymbolicSet::empty(space).complement()
    }

    /// Union of boxes of a line-like space, in grid coordinates.
    pub fn from_boxes(space: &Space, boxes: &[Vec<Interval>]) -> SymbolicSet {
        let (line, n) = space.line().expect("line space");
        SymbolicSet::new(space.clone(), Repr::Boxes(BoxSet::from_boxes(line, n, boxes)))
    }

    pub fn from_box_set(space: &Space, b: BoxSet) -> SymbolicSet {
        SymbolicSet::new(space.clone(), Repr::Boxes(b))
    }

    pub fn from_compact(c: CompactSet) -> SymbolicSet {
        SymbolicSet::new(Space::Compactification, Repr::Compact(c))
    }

    pub fn from_cylinder(c: CylinderSet) -> SymbolicSet {
        SymbolicSet::new(Space::Cylinder, Repr::Cylinder(c))
    }

    /// A finite set of named points.
    pub fn points(space: &Space, pts: &[NamedPoint]) -> Result<SymbolicSet> {
        for p in pts {
            space.check_point(p)?;
        }
        let repr = match space {
            Space::Compactification => Repr::Compact(CompactSet::points(
                &pts.iter().map(|p| match p {
                    NamedPoint::Compact(c) => c.clone(),
                    _ => unreachable!(),
                }).collect::<Vec<_>>(),
            )),
            Space::Cylinder => Repr::Cylinder(CylinderSet::points(
                &pts.iter().map(|p| match p {
                    NamedPoint::Cylinder(c) => c.clone(),
                    _ => unreachable!(),
                }).collect::<Vec<_>>(),
            )),
            Space::Finite(_) => Repr::Finite(
                pts.iter().map(|p| match p {
                    NamedPoint::Finite(i) => *i,
                    _ => unreachable!(),
                }).collect(),
            ),
            Space::Singleton => Repr::Singleton(!pts.is_empty()),
            _ => {
                let boxes: Result<Vec<Vec<Interval>>> = pts
                    .iter()
                    .map(|p| Ok(space.coords(p)?.into_iter().map(Interval::point).collect()))
                    .collect();
                return Ok(SymbolicSet::from_boxes(space, &boxes?));
            }
        };
        Ok(SymbolicSet::new(space.clone(), repr))
    }

    pub fn as_boxes(&self) -> Option<&BoxSet> {
        match &self.repr {
            Repr::Boxes(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_compact(&self) -> Option<&CompactSet> {
        match &self.repr {
            Repr::Compact(c) => Some(c),
            _ => None,
        }
    }

    pub fn as_cylinder(&self) -> Option<&CylinderSet> {
        match &self.repr {
            Repr::Cylinder(c) => Some(c),
            _ => None,
        }
    }

    pub fn member(&self, x: &NamedPoint) -> Result<bool> {
        self.space.check_point(x)?;
        Ok(match (&self.repr, x) {
            (Repr::Boxes(b), _) => b.contains(&self.space.coords(x)?).unwrap_or(false),
            (Repr::Compact(c), NamedPoint::Compact(p)) => c.contains(p),
            (Repr::Cylinder(c), NamedPoint::Cylinder(p)) => c.contains(p),
            (Repr::Finite(s), NamedPoint::Finite(i)) => s.contains(i),
            (Repr::Singleton(b), NamedPoint::Singleton) => *b,
            _ => unreachable!("checked above"),
        })
    }

    /// Membership for points already known to be in the space.
    pub fn contains(&self, x: &NamedPoint) -> bool {
        self.member(x).unwrap_or(false)
    }

    fn check_same(&self, other: &SymbolicSet) {
        assert!(
            self.space == other.space,
            "space mismatch: {} vs {}",
            self.space,
            other.space
        );
    }

    pub fn try_same_space(&self, other: &SymbolicSet) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch { expected: self.space.to_string(), found: other.space.to_string() })
        }
    }

    fn zip(&self, other: &SymbolicSet, op: fn(bool, bool) -> bool) -> SymbolicSet {
        self.check_same(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Boxes(a), Repr::Boxes(b)) => Repr::Boxes(a.combine(b, op)),
            (Repr::Compact(a), Repr::Compact(b)) => Repr::Compact(a.combine(b, op)),
            (Repr::Cylinder(a), Repr::Cylinder(b)) => Repr::Cylinder(a.combine(b, op)),
            (Repr::Finite(a), Repr::Finite(b)) => {
                let n = match &self.space {
                    Space::Finite(f) => f.points.len(),
                    _ => unreachable!(),
                };
                Repr::Finite((0..n).filter(|i| op(a.contains(i), b.contains(i))).collect())
            }
            (Repr::Singleton(a), Repr::Singleton(b)) => Repr::Singleton(op(*a, *b)),
            _ => unreachable!("same space, same representation"),
        };
        SymbolicSet::new(self.space.clone(), repr)
    }

    pub fn union(&self, other: &SymbolicSet) -> SymbolicSet {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &SymbolicSet) -> SymbolicSet {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &SymbolicSet) -> SymbolicSet {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> SymbolicSet {
        let repr = match &self.repr {
            Repr::Boxes(b) => Repr::Boxes(b.complement()),
            Repr::Compact(c) => Repr::Compact(c.complement()),
            Repr::Cylinder(c) => Repr::Cylinder(c.complement()),
            Repr::Finite(s) => {
                let n = match &self.space {
                    Space::Finite(f) => f.points.len(),
                    _ => unreachable!(),
                };
                Repr::Finite((0..n).filter(|i| !s.contains(i)).collect())
            }
            Repr::Singleton(b) => Repr::Singleton(!b),
        };
        SymbolicSet::new(self.space.clone(), repr)
    }

    pub fn union_all<'a>(space: &Space, sets: impl IntoIterator<Item = &'a SymbolicSet>) -> SymbolicSet {
        sets.into_iter().fold(SymbolicSet::empty(space), |acc, s| acc.union(s))
    }

    pub fn is_empty(&self) -> bool {
        match &self.repr {
            Repr::Boxes(b) => b.is_empty(),
            Repr::Compact(c) => c.is_empty(),
            Repr::Cylinder(c) => c.is_empty(),
            Repr::Finite(s) => s.is_empty(),
            Repr::Singleton(b) => !b,
        }
    }

    pub fn is_full(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn is_subset(&self, other: &SymbolicSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn closure(&self) -> SymbolicSet {
        let repr = match &self.repr {
            Repr::Boxes(b) => Repr::Boxes(b.closure()),
            Repr::Compact(c) => Repr::Compact(c.closure()),
            Repr::Cylinder(c) => Repr::Cylinder(c.closure()),
            other => other.clone(),
        };
        SymbolicSet::new(self.space.clone(), repr)
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn is_open(&self) -> bool {
        self.complement().is_closed()
    }

    pub fn is_clopen(&self) -> bool {
        match &self.repr {
            Repr::Compact(c) => c.is_clopen(),
            Repr::Cylinder(c) => c.is_clopen(),
            _ => self.is_closed() && self.is_open(),
        }
    }

    /// The least named member, or `None` for the empty set.
    pub fn witness(&self) -> Option<NamedPoint> {
        match &self.repr {
            Repr::Boxes(b) => b.witness().map(|cs| self.space.from_coords(cs)),
            Repr::Compact(c) => c.witness().map(NamedPoint::Compact),
            Repr::Cylinder(c) => c.witness().map(NamedPoint::Cylinder),
            Repr::Finite(s) => s.iter().next().map(|i| NamedPoint::Finite(*i)),
            Repr::Singleton(b) => b.then_some(NamedPoint::Singleton),
        }
    }

    /// The members, when the set is finite.
    pub fn finite_points(&self) -> Option<Vec<NamedPoint>> {
        match &self.repr {
            Repr::Boxes(b) => {
                let mut out = Vec::new();
                for bx in b.boxes() {
                    if !bx.iter().all(Interval::is_point) {
                        return None;
                    }
                    out.push(self.space.from_coords(bx.into_iter().map(|iv| iv.lo).collect()));
                }
                Some(out)
            }
            Repr::Compact(c) => match &c.iso {
                super::compact::IsoSet::Finite(s) => {
                    let mut v: Vec<NamedPoint> =
                        s.iter().map(|k| NamedPoint::Compact(CompactPoint::Iso(*k))).collect();
                    if c.limit {
                        v.push(NamedPoint::Compact(CompactPoint::Limit));
                    }
                    Some(v)
                }
                _ => None,
            },
            Repr::Cylinder(c) => {
                if c.clopen_words().next().is_some() {
                    return None;
                }
                let w: Vec<NamedPoint> = std::iter::from_fn({
                    let mut rest = c.clone();
                    move || {
                        let p = rest.witness()?;
                        rest = rest.difference(&CylinderSet::points(std::slice::from_ref(&p)));
                        Some(NamedPoint::Cylinder(p))
                    }
                })
                .collect();
                Some(w)
            }
            Repr::Finite(s) => Some(s.iter().map(|i| NamedPoint::Finite(*i)).collect()),
            Repr::Singleton(b) => Some(if *b { vec![NamedPoint::Singleton] } else { vec![] }),
        }
    }

    /// Canonical boxes of a line-like set, in grid coordinates.
    pub fn boxes(&self) -> Option<Vec<Vec<Interval>>> {
        self.as_boxes().map(BoxSet::boxes)
    }

    /// Grid breakpoints of a line-like set, per coordinate.
    pub fn breakpoints(&self) -> Option<Vec<Vec<CutPoint>>> {
        self.as_boxes().map(BoxSet::breakpoints)
    }
}

impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Boxes(b) => b.fmt_with(f, &|c| self.space.coord_string(c)),
            Repr::Compact(c) => write!(f, "{c}"),
            Repr::Cylinder(c) => write!(f, "{c}"),
            Repr::Finite(s) => {
                let names: Vec<String> =
                    s.iter().map(|i| self.space.point_string(&NamedPoint::Finite(*i))).collect();
                write!(f, "{{{}}}", names.join(","))
            }
            Repr::Singleton(true) => f.write_str("{*}"),
            Repr::Singleton(false) => f.write_str("{}"),
        }
    }
}
