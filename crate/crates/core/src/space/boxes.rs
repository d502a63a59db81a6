//! Finite unions of interval boxes in a product of cut lines.
//!
//! A set is stored as a grid: every coordinate carries a partition of the
//! line into intervals, and one bit per grid cell records membership. After
//! every operation the grid is coarsened by merging adjacent slabs with equal
//! contents. The coarsest grid is determined by the point set alone, so the
//! derived equality is set equality.

use std::fmt;

use super::interval::{Interval, Line};
use super::point::CutPoint;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoxSet {
    line: Line,
    axes: Vec<Vec<Interval>>,
    bits: Vec<bool>,
}

/// `a` lies entirely below `b`.
pub(crate) fn below(a: &Interval, b: &Interval) -> bool {
    match a.hi.cmp(&b.lo) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => !(a.hi_inc && b.lo_inc),
        std::cmp::Ordering::Greater => false,
    }
}

/// Common refinement of two interval partitions of the same line, with the
/// index of the containing piece on each side.
pub(crate) fn refine(a: &[Interval], b: &[Interval]) -> Vec<(Interval, usize, usize)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if let Some(c) = a[i].intersect(&b[j]) {
            out.push((c, i, j));
        }
        let a_first = match a[i].hi.cmp(&b[j].hi) {
            std::cmp::Ordering::Less => Some(true),
            std::cmp::Ordering::Greater => Some(false),
            std::cmp::Ordering::Equal if a[i].hi_inc == b[j].hi_inc => None,
            std::cmp::Ordering::Equal => Some(!a[i].hi_inc),
        };
        match a_first {
            Some(true) => i += 1,
            Some(false) => j += 1,
            None => {
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// The partition `{below iv, iv, above iv}` of `line`, dropping empty parts.
fn split_line(line: &Line, iv: &Interval) -> Vec<Interval> {
    let mut out = Vec::with_capacity(3);
    if let Some(l) = Interval::new(line.lo.clone(), true, iv.lo.clone(), !iv.lo_inc) {
        out.push(l);
    }
    out.push(iv.clone());
    if let Some(h) = Interval::new(iv.hi.clone(), !iv.hi_inc, line.hi.clone(), true) {
        out.push(h);
    }
    out
}

fn merge_run(run: &[Interval]) -> Interval {
    let (first, last) = (&run[0], &run[run.len() - 1]);
    Interval { lo: first.lo.clone(), lo_inc: first.lo_inc, hi: last.hi.clone(), hi_inc: last.hi_inc }
}

fn strides(axes: &[Vec<Interval>]) -> Vec<usize> {
    let mut s = vec![1; axes.len()];
    for d in (0..axes.len().saturating_sub(1)).rev() {
        s[d] = s[d + 1] * axes[d + 1].len();
    }
    s
}

impl BoxSet {
    pub fn empty(line: Line, arity: usize) -> BoxSet {
        let axes = vec![vec![line.whole()]; arity];
        BoxSet { line, axes, bits: vec![false] }
    }

    pub fn full(line: Line, arity: usize) -> BoxSet {
        let axes = vec![vec![line.whole()]; arity];
        BoxSet { line, axes, bits: vec![true] }
    }

    pub fn line(&self) -> &Line {
        &self.line
    }

    pub fn arity(&self) -> usize {
        self.axes.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn is_full(&self) -> bool {
        self.bits.iter().all(|b| *b)
    }

    /// Union of the given boxes. Each box lists one interval per coordinate.
    pub fn from_boxes(line: Line, arity: usize, boxes: &[Vec<Interval>]) -> BoxSet {
        if boxes.is_empty() {
            return BoxSet::empty(line, arity);
        }
        let mut axes: Vec<Vec<Interval>> = vec![vec![line.whole()]; arity];
        for b in boxes {
            assert_eq!(b.len(), arity, "box arity mismatch");
            for (d, iv) in b.iter().enumerate() {
                let parts = split_line(&line, iv);
                axes[d] = refine(&axes[d], &parts).into_iter().map(|(c, _, _)| c).collect();
            }
        }
        let st = strides(&axes);
        let mut bits = vec![false; st[0] * axes[0].len()];
        for b in boxes {
            let ranges: Vec<Vec<usize>> = b
                .iter()
                .enumerate()
                .map(|(d, iv)| (0..axes[d].len()).filter(|&k| axes[d][k].is_subset(iv)).collect())
                .collect();
            mark(&ranges, &st, 0, 0, &mut bits);
        }
        let mut s = BoxSet { line, axes, bits };
        s.coarsen();
        s
    }

    /// Product of one-dimensional sets.
    pub fn product(factors: &[BoxSet]) -> BoxSet {
        let line = factors[0].line.clone();
        if factors.iter().any(BoxSet::is_empty) {
            return BoxSet::empty(line, factors.len());
        }
        let axes: Vec<Vec<Interval>> = factors
            .iter()
            .map(|f| {
                assert_eq!(f.arity(), 1, "product of non-linear factors");
                f.axes[0].clone()
            })
            .collect();
        let mut bits = vec![true];
        for f in factors {
            bits = bits.iter().flat_map(|a| f.bits.iter().map(move |b| *a && *b)).collect();
        }
        BoxSet { line, axes, bits }
    }

    pub fn single_box(line: Line, b: Vec<Interval>) -> BoxSet {
        let arity = b.len();
        BoxSet::from_boxes(line, arity, &[b])
    }

    fn coarsen(&mut self) {
        for d in 0..self.axes.len() {
            let st = strides(&self.axes);
            let len = self.axes[d].len();
            let inner = st[d];
            let outer = self.bits.len() / (len * inner);
            let slab_eq = |a: usize, b: usize| {
                (0..outer).all(|o| {
                    let base = o * len * inner;
                    (0..inner).all(|i| self.bits[base + a * inner + i] == self.bits[base + b * inner + i])
                })
            };
            let mut groups: Vec<(usize, usize)> = Vec::new();
            for j in 0..len {
                match groups.last_mut() {
                    Some((_, end)) if slab_eq(*end, j) => *end = j,
                    _ => groups.push((j, j)),
                }
            }
            if groups.len() == len {
                continue;
            }
            let axis: Vec<Interval> =
                groups.iter().map(|&(a, b)| merge_run(&self.axes[d][a..=b])).collect();
            let mut bits = Vec::with_capacity(outer * groups.len() * inner);
            for o in 0..outer {
                for &(a, _) in &groups {
                    let base = o * len * inner + a * inner;
                    bits.extend_from_slice(&self.bits[base..base + inner]);
                }
            }
            self.axes[d] = axis;
            self.bits = bits;
        }
    }

    /// Pointwise combination of two sets over their common grid.
    pub fn combine(&self, other: &BoxSet, op: impl Fn(bool, bool) -> bool) -> BoxSet {
        assert_eq!(self.line, other.line, "line mismatch");
        assert_eq!(self.arity(), other.arity(), "arity mismatch");
        let refined: Vec<Vec<(Interval, usize, usize)>> =
            self.axes.iter().zip(&other.axes).map(|(a, b)| refine(a, b)).collect();
        let axes: Vec<Vec<Interval>> =
            refined.iter().map(|r| r.iter().map(|(c, _, _)| c.clone()).collect()).collect();
        let (sa, sb) = (strides(&self.axes), strides(&other.axes));
        let total: usize = axes.iter().map(Vec::len).product();
        let mut bits = Vec::with_capacity(total);
        let mut idx = vec![0usize; axes.len()];
        for _ in 0..total {
            let (mut ia, mut ib) = (0, 0);
            for (d, &k) in idx.iter().enumerate() {
                ia += refined[d][k].1 * sa[d];
                ib += refined[d][k].2 * sb[d];
            }
            bits.push(op(self.bits[ia], other.bits[ib]));
            for d in (0..idx.len()).rev() {
                idx[d] += 1;
                if idx[d] < axes[d].len() {
                    break;
                }
                idx[d] = 0;
            }
        }
        let mut s = BoxSet { line: self.line.clone(), axes, bits };
        s.coarsen();
        s
    }

    pub fn union(&self, other: &BoxSet) -> BoxSet {
        self.combine(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &BoxSet) -> BoxSet {
        self.combine(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &BoxSet) -> BoxSet {
        self.combine(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> BoxSet {
        BoxSet {
            line: self.line.clone(),
            axes: self.axes.clone(),
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn is_subset(&self, other: &BoxSet) -> bool {
        self.difference(other).is_empty()
    }

    fn cell_of(&self, coords: &[CutPoint]) -> Option<usize> {
        if coords.len() != self.arity() {
            return None;
        }
        let st = strides(&self.axes);
        let mut at = 0;
        for (d, p) in coords.iter().enumerate() {
            at += self.axes[d].binary_search_by(|iv| iv.locate(p)).ok()? * st[d];
        }
        Some(at)
    }

    /// Membership; `None` when the coordinates are off the line.
    pub fn contains(&self, coords: &[CutPoint]) -> Option<bool> {
        self.cell_of(coords).map(|c| self.bits[c])
    }

    /// The canonical box decomposition: cells merged along the last
    /// coordinate first, then the one before, and so on.
    pub fn boxes(&self) -> Vec<Vec<Interval>> {
        self.box_ranges()
            .into_iter()
            .map(|r| r.iter().enumerate().map(|(d, &(a, b))| merge_run(&self.axes[d][a..=b])).collect())
            .collect()
    }

    fn box_ranges(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.arity();
        let st = strides(&self.axes);
        let mut boxes: Vec<Vec<(usize, usize)>> = Vec::new();
        for (c, _) in self.bits.iter().enumerate().filter(|(_, b)| **b) {
            boxes.push((0..n).map(|d| (c / st[d]) % self.axes[d].len()).map(|k| (k, k)).collect());
        }
        for d in (0..n).rev() {
            let key = |b: &Vec<(usize, usize)>| {
                let mut k: Vec<(usize, usize)> =
                    b.iter().enumerate().filter(|(e, _)| *e != d).map(|(_, r)| *r).collect();
                k.push(b[d]);
                k
            };
            boxes.sort_by_key(key);
            let mut merged: Vec<Vec<(usize, usize)>> = Vec::with_capacity(boxes.len());
            for b in boxes {
                if let Some(last) = merged.last_mut() {
                    let same_rest = (0..n).all(|e| e == d || last[e] == b[e]);
                    if same_rest && last[d].1 + 1 == b[d].0 {
                        last[d].1 = b[d].1;
                        continue;
                    }
                }
                merged.push(b);
            }
            boxes = merged;
        }
        boxes.sort();
        boxes
    }

    pub fn closure(&self) -> BoxSet {
        let closed: Vec<Vec<Interval>> =
            self.boxes().iter().map(|b| b.iter().map(Interval::closure).collect()).collect();
        BoxSet::from_boxes(self.line.clone(), self.arity(), &closed)
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn is_open(&self) -> bool {
        self.complement().is_closed()
    }

    pub fn is_clopen(&self) -> bool {
        self.is_closed() && self.is_open()
    }

    /// A named member from the least nonempty cell.
    pub fn witness(&self) -> Option<Vec<CutPoint>> {
        let c = self.bits.iter().position(|b| *b)?;
        let st = strides(&self.axes);
        Some((0..self.arity()).map(|d| self.axes[d][(c / st[d]) % self.axes[d].len()].witness()).collect())
    }

    /// Image under coordinatewise order-preserving bijections of the line.
    pub fn map_monotone(&self, g: &[&dyn Fn(&CutPoint) -> CutPoint]) -> BoxSet {
        let axes = self
            .axes
            .iter()
            .zip(g)
            .map(|(axis, g)| axis.iter().map(|iv| iv.map_monotone(g)).collect())
            .collect();
        BoxSet { line: self.line.clone(), axes, bits: self.bits.clone() }
    }

    /// Image under the projection onto the first `k` coordinates.
    pub fn project(&self, k: usize) -> BoxSet {
        let boxes: Vec<Vec<Interval>> = self.boxes().into_iter().map(|b| b[..k].to_vec()).collect();
        BoxSet::from_boxes(self.line.clone(), k, &boxes)
    }

    /// Preimage under the projection from `n` coordinates onto the current
    /// ones.
    pub fn extend(&self, n: usize) -> BoxSet {
        assert!(n >= self.arity());
        let mut axes = self.axes.clone();
        axes.resize(n, vec![self.line.whole()]);
        BoxSet { line: self.line.clone(), axes, bits: self.bits.clone() }
    }

    /// Endpoints of all grid pieces, in coordinate order.
    pub fn breakpoints(&self) -> Vec<Vec<CutPoint>> {
        self.axes
            .iter()
            .map(|axis| {
                let mut v: Vec<CutPoint> =
                    axis.iter().flat_map(|iv| [iv.lo.clone(), iv.hi.clone()]).collect();
                v.dedup();
                v
            })
            .collect()
    }

    /// Text form; `disp` renders coordinates.
    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, disp: &dyn Fn(&CutPoint) -> String) -> fmt::Result {
        let boxes = self.boxes();
        if boxes.is_empty() {
            return f.write_str("{}");
        }
        for (i, b) in boxes.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            for (d, iv) in b.iter().enumerate() {
                if d > 0 {
                    f.write_str("×")?;
                }
                iv.fmt_with(f, disp)?;
            }
        }
        Ok(())
    }
}

fn mark(ranges: &[Vec<usize>], st: &[usize], d: usize, base: usize, bits: &mut [bool]) {
    if d == ranges.len() {
        bits[base] = true;
        return;
    }
    for &k in &ranges[d] {
        mark(ranges, st, d + 1, base + k * st[d], bits);
    }
}

impl fmt::Display for BoxSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|p| p.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn iv(lo: CutPoint, li: bool, hi: CutPoint, hi_inc: bool) -> Interval {
        Interval::new(lo, li, hi, hi_inc).unwrap()
    }

    fn line1(ivs: &[Interval]) -> BoxSet {
        let boxes: Vec<Vec<Interval>> = ivs.iter().map(|i| vec![i.clone()]).collect();
        BoxSet::from_boxes(Line::cut(), 1, &boxes)
    }

    #[test]
    fn adjacent_intervals_merge() {
        let a = line1(&[
            Interval::closed(CutPoint::MinusInf, CutPoint::Minus(q(0))),
            Interval::point(CutPoint::Rat(q(0))),
            Interval::closed(CutPoint::Plus(q(0)), CutPoint::PlusInf),
        ]);
        assert!(a.is_full());
        assert_eq!(a, BoxSet::full(Line::cut(), 1));
    }

    #[test]
    fn equality_is_set_equality() {
        let a = line1(&[Interval::closed(CutPoint::Rat(q(0)), CutPoint::Rat(q(2)))]);
        let b = line1(&[
            Interval::closed(CutPoint::Rat(q(0)), CutPoint::Minus(q(1))),
            Interval::closed(CutPoint::Rat(q(1)), CutPoint::Rat(q(2))),
        ]);
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "[0,2]");
    }

    #[test]
    fn closure_adds_limit_endpoints() {
        let s = line1(&[iv(CutPoint::Plus(q(0)), false, CutPoint::PlusInf, true)]);
        assert!(!s.is_closed());
        let c = s.closure();
        assert_eq!(c, line1(&[Interval::closed(CutPoint::Plus(q(0)), CutPoint::PlusInf)]));
        assert!(c.is_closed());
        assert!(c.is_clopen());
    }

    #[test]
    fn product_membership() {
        let b = BoxSet::single_box(
            Line::cut(),
            vec![Interval::point(CutPoint::MinusInf), Line::cut().whole()],
        );
        assert_eq!(b.contains(&[CutPoint::MinusInf, CutPoint::Rat(q(5))]), Some(true));
        assert_eq!(b.contains(&[CutPoint::Rat(q(0)), CutPoint::Rat(q(5))]), Some(false));
        assert_eq!(b.to_string(), "{-inf}×[-inf,+inf]");
    }

    #[test]
    fn canonical_boxes_of_an_l_shape() {
        let line = Line::cut();
        let m = Interval::point(CutPoint::MinusInf);
        let w = line.whole();
        let s = BoxSet::from_boxes(line.clone(), 2, &[vec![m.clone(), w.clone()], vec![w.clone(), m.clone()]]);
        let t = BoxSet::from_boxes(line, 2, &[vec![w, m.clone()], vec![m, iv(CutPoint::MinusInf, false, CutPoint::PlusInf, true)]]);
        assert_eq!(s, t);
        assert_eq!(s.boxes().len(), 2);
    }

    #[test]
    fn projection_and_extension() {
        let line = Line::cut();
        let a = Interval::closed(CutPoint::Plus(q(0)), CutPoint::Minus(q(1)));
        let b = Interval::closed(CutPoint::Plus(q(2)), CutPoint::Minus(q(3)));
        let s = BoxSet::single_box(line.clone(), vec![a.clone(), b]);
        let p = s.project(1);
        assert_eq!(p, BoxSet::single_box(line.clone(), vec![a.clone()]));
        assert!(p.is_clopen());
        assert_eq!(p.extend(2), BoxSet::single_box(line.clone(), vec![a, line.whole()]));
    }

    fn arb_point() -> impl Strategy<Value = CutPoint> {
        (0u8..5, -3i64..=3).prop_map(|(t, n)| match t {
            0 => CutPoint::MinusInf,
            1 => CutPoint::Minus(q(n)),
            2 => CutPoint::Rat(q(n)),
            3 => CutPoint::Plus(q(n)),
            _ => CutPoint::PlusInf,
        })
    }

    fn arb_interval() -> impl Strategy<Value = Option<Interval>> {
        (arb_point(), any::<bool>(), arb_point(), any::<bool>())
            .prop_map(|(a, ai, b, bi)| Interval::new(a, ai, b, bi))
    }

    fn arb_set(arity: usize) -> impl Strategy<Value = BoxSet> {
        prop::collection::vec(prop::collection::vec(arb_interval(), arity), 0..4).prop_map(move |bs| {
            let boxes: Vec<Vec<Interval>> =
                bs.into_iter().filter_map(|b| b.into_iter().collect::<Option<Vec<_>>>()).collect();
            BoxSet::from_boxes(Line::cut(), arity, &boxes)
        })
    }

    fn samples() -> Vec<CutPoint> {
        let mut v = vec![CutPoint::MinusInf, CutPoint::PlusInf];
        for n in -4..=4 {
            for half in [q(n), Rational::new(2 * n + 1, 2)] {
                v.push(CutPoint::Minus(half.clone()));
                v.push(CutPoint::Rat(half.clone()));
                v.push(CutPoint::Plus(half));
            }
        }
        v
    }

    proptest! {
        #[test]
        fn algebra_agrees_with_membership(s in arb_set(2), t in arb_set(2)) {
            let (u, i, d) = (s.union(&t), s.intersect(&t), s.difference(&t));
            let pts = samples();
            for x in &pts {
                for y in &pts {
                    let c = [x.clone(), y.clone()];
                    let (a, b) = (s.contains(&c).unwrap(), t.contains(&c).unwrap());
                    prop_assert_eq!(u.contains(&c).unwrap(), a || b);
                    prop_assert_eq!(i.contains(&c).unwrap(), a && b);
                    prop_assert_eq!(d.contains(&c).unwrap(), a && !b);
                }
            }
        }

        #[test]
        fn closure_laws(s in arb_set(2), t in arb_set(2)) {
            let c = s.closure();
            prop_assert!(s.is_subset(&c));
            prop_assert_eq!(c.closure(), c.clone());
            let st = s.union(&t);
            prop_assert!(c.is_subset(&st.closure()));
        }

        #[test]
        fn boxes_round_trip(s in arb_set(2)) {
            let r = BoxSet::from_boxes(Line::cut(), 2, &s.boxes());
            prop_assert_eq!(r, s.clone());
            if let Some(w) = s.witness() {
                prop_assert_eq!(s.contains(&w), Some(true));
            } else {
                prop_assert!(s.is_empty());
            }
        }

        #[test]
        fn complement_partitions(s in arb_set(1)) {
            let c = s.complement();
            prop_assert!(s.intersect(&c).is_empty());
            prop_assert!(s.union(&c).is_full());
        }
    }
}
