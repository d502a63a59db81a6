//! Finite clopen partitions, which stand in for entourages.
//!
//! A partition `P` induces the entourage `W_P = ⋃ A×A`, an equivalence
//! relation, so `W_P ∘ W_P = W_P`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::boxes::{below, refine, BoxSet};
use super::compact::{CompactSet, IsoSet};
use super::cylinder::CylinderSet;
use super::interval::{Interval, Line};
use super::point::{CompactPoint, CutPoint, NamedPoint};
use super::set::SymbolicSet;
use super::{rationals_up_to, Space};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Kind {
    /// Product of per-coordinate clopen interval partitions; classes are
    /// numbered row-major with the last coordinate fastest.
    Grid(Vec<Vec<Interval>>),
    Classes(Vec<SymbolicSet>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    space: Space,
    kind: Kind,
}

/// Clopen atoms of a line cut at the rationals `values`.
fn canonical_axis(line: &Line, values: &[Rational]) -> Vec<Interval> {
    let mut out = Vec::new();
    let mut start = line.lo.clone();
    for c in values {
        let r = CutPoint::Rat(c.clone());
        if !line.contains(&r) {
            continue;
        }
        if r != line.lo {
            out.push(Interval::closed(start, CutPoint::Minus(c.clone())));
        }
        out.push(Interval::point(r));
        start = CutPoint::Plus(c.clone());
    }
    if start <= line.hi {
        out.push(Interval::closed(start, line.hi.clone()));
    }
    out
}

fn words(depth: usize) -> Vec<Vec<bool>> {
    (0u64..(1 << depth))
        .map(|bits| (0..depth).map(|i| bits >> (depth - 1 - i) & 1 == 1).collect())
        .collect()
}

impl Partition {
    /// The level-`level` member of the cofinal family of partitions.
    ///
    /// Cut lines are cut at every rational `p/q` with `|p| <= level` and
    /// `q <= level`; products take the product partition; the
    /// compactification isolates `i0..=i{level}`; Cantor space is cut into
    /// cylinders of depth `level`. Finite spaces get the discrete partition.
    pub fn canonical(space: &Space, level: u32) -> Result<Partition> {
        if level == 0 {
            return Err(Error::InvalidArgument("partition level must be at least 1".into()));
        }
        let kind = match space {
            Space::CutLine | Space::MultiOrder(_) | Space::Cyclic => {
                let (line, n) = space.line().expect("line space");
                let axis = canonical_axis(&line, &rationals_up_to(level as u64));
                Kind::Grid(vec![axis; n])
            }
            Space::Compactification => {
                let mut classes: Vec<SymbolicSet> = (0..=level as u64)
                    .map(|k| SymbolicSet::from_compact(CompactSet::points(&[CompactPoint::Iso(k)])))
                    .collect();
                let rest = IsoSet::Cofinite((0..=level as u64).collect());
                classes.push(SymbolicSet::from_compact(CompactSet { iso: rest, limit: true }));
                Kind::Classes(classes)
            }
            Space::Cylinder => Kind::Classes(
                words(level as usize)
                    .into_iter()
                    .map(|w| SymbolicSet::from_cylinder(CylinderSet::cylinders(&[w])))
                    .collect(),
            ),
            Space::Finite(f) => Kind::Classes(
                (0..f.points.len())
                    .map(|i| SymbolicSet::points(space, &[NamedPoint::Finite(i)]).expect("valid index"))
                    .collect(),
            ),
            Space::Singleton => Kind::Classes(vec![SymbolicSet::full(space)]),
        };
        Ok(Partition { space: space.clone(), kind })
    }

    /// The one-class partition; its entourage is `X × X`.
    pub fn trivial(space: &Space) -> Partition {
        Partition { space: space.clone(), kind: Kind::Classes(vec![SymbolicSet::full(space)]) }
    }

    /// A partition from explicit classes, checked to be nonempty, clopen,
    /// pairwise disjoint and covering.
    pub fn from_classes(space: &Space, classes: Vec<SymbolicSet>) -> Result<Partition> {
        let bad = |m: String| Err(Error::InvalidPartition(m));
        if classes.is_empty() {
            return bad("no classes".into());
        }
        let mut seen = SymbolicSet::empty(space);
        for c in &classes {
            c.try_same_space(&seen)?;
            if c.is_empty() {
                return bad("empty class".into());
            }
            if !c.is_clopen() {
                return bad(format!("class {c} is not clopen"));
            }
            if !c.intersect(&seen).is_empty() {
                return bad(format!("class {c} overlaps an earlier class"));
            }
            seen = seen.union(c);
        }
        if !seen.is_full() {
            return bad("classes do not cover the space".into());
        }
        Ok(Partition { space: space.clone(), kind: Kind::Classes(classes) })
    }

    /// A product partition of a line-like space from per-coordinate clopen
    /// interval partitions.
    pub fn from_grid(space: &Space, axes: Vec<Vec<Interval>>) -> Result<Partition> {
        let (line, n) = space
            .line()
            .ok_or_else(|| Error::InvalidPartition(format!("{space} has no coordinates")))?;
        if axes.len() != n {
            return Err(Error::InvalidPartition("wrong number of axes".into()));
        }
        for axis in &axes {
            let sorted = axis.windows(2).all(|w| below(&w[0], &w[1]));
            let boxes: Vec<Vec<Interval>> = axis.iter().map(|iv| vec![iv.clone()]).collect();
            let covers = BoxSet::from_boxes(line.clone(), 1, &boxes).is_full();
            if !sorted || !covers || axis.iter().any(|iv| !iv.is_clopen_in(&line)) {
                return Err(Error::InvalidPartition("axis is not a clopen interval partition".into()));
            }
        }
        Ok(Partition { space: space.clone(), kind: Kind::Grid(axes) })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            Kind::Grid(axes) => axes.iter().map(Vec::len).product(),
            Kind::Classes(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn grid_axes(&self) -> Option<&[Vec<Interval>]> {
        match &self.kind {
            Kind::Grid(a) => Some(a),
            Kind::Classes(_) => None,
        }
    }

    fn grid_index(axes: &[Vec<Interval>], coords: &[CutPoint]) -> Option<usize> {
        let mut at = 0;
        for (axis, c) in axes.iter().zip(coords) {
            at = at * axis.len() + axis.binary_search_by(|iv| iv.locate(c)).ok()?;
        }
        Some(at)
    }

    /// Index of the class containing `x`.
    pub fn class_of(&self, x: &NamedPoint) -> Result<usize> {
        self.space.check_point(x)?;
        match &self.kind {
            Kind::Grid(axes) => Partition::grid_index(axes, &self.space.coords(x)?)
                .ok_or_else(|| Error::InvalidPartition(format!("no class contains {x}"))),
            Kind::Classes(cs) => cs
                .iter()
                .position(|c| c.contains(x))
                .ok_or_else(|| Error::InvalidPartition(format!("no class contains {x}"))),
        }
    }

    /// `(x, y) ∈ W_P`.
    pub fn same_class(&self, x: &NamedPoint, y: &NamedPoint) -> Result<bool> {
        Ok(self.class_of(x)? == self.class_of(y)?)
    }

    /// Per-coordinate piece indices of grid class `i`.
    pub fn grid_digits(&self, i: usize) -> Option<Vec<usize>> {
        let axes = self.grid_axes()?;
        let mut digits = vec![0; axes.len()];
        let mut rest = i;
        for d in (0..axes.len()).rev() {
            digits[d] = rest % axes[d].len();
            rest /= axes[d].len();
        }
        Some(digits)
    }

    pub fn class_set(&self, i: usize) -> SymbolicSet {
        match &self.kind {
            Kind::Grid(axes) => {
                let digits = self.grid_digits(i).expect("grid");
                let b: Vec<Interval> = digits.iter().zip(axes).map(|(&k, a)| a[k].clone()).collect();
                SymbolicSet::from_boxes(&self.space, &[b])
            }
            Kind::Classes(cs) => cs[i].clone(),
        }
    }

    pub fn classes(&self) -> Vec<SymbolicSet> {
        (0..self.len()).map(|i| self.class_set(i)).collect()
    }

    /// Every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch { expected: other.space.to_string(), found: self.space.to_string() });
        }
        if let (Kind::Grid(a), Kind::Grid(b)) = (&self.kind, &other.kind) {
            return Ok(a.iter().zip(b).all(|(x, y)| refine(x, y).len() == x.len()));
        }
        for i in 0..self.len() {
            let c = self.class_set(i);
            let w = c.witness().expect("classes are nonempty");
            if !c.is_subset(&other.class_set(other.class_of(&w)?)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks disjointness, covering and clopenness through the set algebra.
    pub fn validate(&self) -> Result<()> {
        Partition::from_classes(&self.space, self.classes()).map(|_| ())
    }

    /// Applies a map to every class, keeping the grid shape when
    /// `on_axis` can transport the axes.
    pub(crate) fn map_parts(
        &self,
        on_axis: Option<&dyn Fn(usize, &Interval) -> Interval>,
        on_class: &dyn Fn(&SymbolicSet) -> SymbolicSet,
    ) -> Partition {
        let kind = match (&self.kind, on_axis) {
            (Kind::Grid(axes), Some(g)) => Kind::Grid(
                axes.iter().enumerate().map(|(d, a)| a.iter().map(|iv| g(d, iv)).collect()).collect(),
            ),
            _ => Kind::Classes(self.classes().iter().map(on_class).collect()),
        };
        Partition { space: self.space.clone(), kind }
    }

    /// Classes with the given indices merged, for coarsening tests.
    pub fn merge(&self, groups: &[Vec<usize>]) -> Result<Partition> {
        let used: BTreeSet<usize> = groups.iter().flatten().copied().collect();
        if used.len() != self.len() || used.iter().next_back() != Some(&(self.len() - 1)) {
            return Err(Error::InvalidPartition("merge groups must cover every class once".into()));
        }
        let classes = groups
            .iter()
            .map(|g| SymbolicSet::union_all(&self.space, g.iter().map(|i| self.class_set(*i)).collect::<Vec<_>>().iter()))
            .collect();
        Partition::from_classes(&self.space, classes)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{}", self.class_set(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_cut_line_has_seven_atoms() {
        let p = Partition::canonical(&Space::CutLine, 1).unwrap();
        assert_eq!(p.len(), 7);
        p.validate().unwrap();
        assert_eq!(
            p.to_string(),
            "[-inf,-1-] | {-1} | [-1+,0-] | {0} | [0+,1-] | {1} | [1+,+inf]"
        );
    }

    #[test]
    fn compactification_level_three() {
        let p = Partition::canonical(&Space::Compactification, 3).unwrap();
        assert_eq!(p.len(), 5);
        p.validate().unwrap();
        assert_eq!(p.class_of(&NamedPoint::Compact(CompactPoint::Limit)).unwrap(), 4);
        assert_eq!(p.class_of(&NamedPoint::Compact(CompactPoint::Iso(9))).unwrap(), 4);
    }

    #[test]
    fn level_zero_rejected() {
        assert!(Partition::canonical(&Space::CutLine, 0).is_err());
    }

    #[test]
    fn refinement_between_levels() {
        for space in [Space::CutLine, Space::MultiOrder(2), Space::Cyclic, Space::Compactification, Space::Cylinder] {
            let p1 = Partition::canonical(&space, 1).unwrap();
            let p2 = Partition::canonical(&space, 2).unwrap();
            assert!(p1.refines(&p1).unwrap());
            assert!(p2.refines(&p1).unwrap(), "{space}");
        }
        let p1 = Partition::canonical(&Space::CutLine, 1).unwrap();
        let p2 = Partition::canonical(&Space::CutLine, 2).unwrap();
        assert!(!p1.refines(&p2).unwrap());
        let atom = p1.class_set(4);
        let meets = p2.classes().iter().filter(|c| !c.intersect(&atom).is_empty()).count();
        assert!(meets > 1);
    }

    #[test]
    fn every_class_has_a_witness() {
        for space in [Space::CutLine, Space::MultiOrder(2), Space::Cyclic, Space::Compactification, Space::Cylinder] {
            for level in 1..=3 {
                let p = Partition::canonical(&space, level).unwrap();
                for (i, c) in p.classes().iter().enumerate() {
                    let w = c.witness().expect("nonempty class");
                    assert_eq!(p.class_of(&w).unwrap(), i);
                }
            }
        }
    }

    #[test]
    fn cyclic_levels() {
        let p = Partition::canonical(&Space::Cyclic, 1).unwrap();
        assert_eq!(p.to_string(), "{0} | [0+,0-]");
        let p2 = Partition::canonical(&Space::Cyclic, 2).unwrap();
        assert_eq!(p2.len(), 4);
        p2.validate().unwrap();
    }

    #[test]
    fn same_class_is_transitive() {
        let p = Partition::canonical(&Space::CutLine, 2).unwrap();
        let pts = Space::CutLine.samples(2);
        for x in &pts {
            for y in &pts {
                if !p.same_class(x, y).unwrap() {
                    continue;
                }
                for z in &pts {
                    if p.same_class(y, z).unwrap() {
                        assert!(p.same_class(x, z).unwrap());
                    }
                }
            }
        }
    }
}
