//! Subsets of Cantor space built from cylinders and finitely many named
//! points.
//!
//! A set is `(C \ R) ∪ A` with `C` clopen, `R ⊆ C` finite and `A` finite and
//! disjoint from `C`. The clopen part is kept as its antichain of maximal
//! cylinders, which is unique.

use std::collections::BTreeSet;
use std::fmt;

use super::point::{word_string, CylinderPoint};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CylinderSet {
    clopen: BTreeSet<Vec<bool>>,
    added: BTreeSet<CylinderPoint>,
    removed: BTreeSet<CylinderPoint>,
}

fn expand(words: &BTreeSet<Vec<bool>>, depth: usize) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::new();
    for w in words {
        let free = depth - w.len();
        for bits in 0u64..(1 << free) {
            let mut v = w.clone();
            v.extend((0..free).map(|i| bits >> (free - 1 - i) & 1 == 1));
            out.insert(v);
        }
    }
    out
}

/// Maximal cylinders of a union of depth-`depth` cylinders.
fn reduce(mut level: BTreeSet<Vec<bool>>, depth: usize) -> BTreeSet<Vec<bool>> {
    let mut out = BTreeSet::new();
    for d in (0..depth).rev() {
        let mut next = BTreeSet::new();
        for w in &level {
            if w.last() == Some(&false) {
                let mut sib = w.clone();
                *sib.last_mut().unwrap() = true;
                if level.contains(&sib) {
                    next.insert(w[..d].to_vec());
                }
            }
        }
        for w in level {
            if !next.contains(&w[..d]) {
                out.insert(w);
            }
        }
        level = next;
    }
    out.extend(level);
    out
}

fn depth_of(a: &BTreeSet<Vec<bool>>) -> usize {
    a.iter().map(Vec::len).max().unwrap_or(0)
}

fn clopen_op(
    a: &BTreeSet<Vec<bool>>,
    b: &BTreeSet<Vec<bool>>,
    op: impl Fn(bool, bool) -> bool,
) -> BTreeSet<Vec<bool>> {
    let depth = depth_of(a).max(depth_of(b));
    let (ea, eb) = (expand(a, depth), expand(b, depth));
    let all = expand(&BTreeSet::from([Vec::new()]), depth);
    let level = all.into_iter().filter(|w| op(ea.contains(w), eb.contains(w))).collect();
    reduce(level, depth)
}

fn in_clopen(c: &BTreeSet<Vec<bool>>, p: &CylinderPoint) -> bool {
    c.iter().any(|w| p.starts_with(w))
}

impl CylinderSet {
    pub fn empty() -> CylinderSet {
        CylinderSet { clopen: BTreeSet::new(), added: BTreeSet::new(), removed: BTreeSet::new() }
    }

    pub fn full() -> CylinderSet {
        CylinderSet::cylinders(&[Vec::new()])
    }

    pub fn cylinders(words: &[Vec<bool>]) -> CylinderSet {
        let set: BTreeSet<Vec<bool>> = words.iter().cloned().collect();
        let depth = depth_of(&set);
        CylinderSet { clopen: reduce(expand(&set, depth), depth), ..CylinderSet::empty() }
    }

    pub fn points(pts: &[CylinderPoint]) -> CylinderSet {
        CylinderSet { added: pts.iter().cloned().collect(), ..CylinderSet::empty() }
    }

    pub fn clopen_words(&self) -> impl Iterator<Item = &Vec<bool>> {
        self.clopen.iter()
    }

    pub fn contains(&self, p: &CylinderPoint) -> bool {
        self.added.contains(p) || (in_clopen(&self.clopen, p) && !self.removed.contains(p))
    }

    pub fn is_empty(&self) -> bool {
        self.clopen.is_empty() && self.added.is_empty()
    }

    pub fn combine(&self, o: &CylinderSet, op: impl Fn(bool, bool) -> bool + Copy) -> CylinderSet {
        let clopen = clopen_op(&self.clopen, &o.clopen, op);
        let mut out = CylinderSet { clopen, ..CylinderSet::empty() };
        let special: BTreeSet<&CylinderPoint> =
            self.added.iter().chain(&self.removed).chain(&o.added).chain(&o.removed).collect();
        for p in special {
            let want = op(self.contains(p), o.contains(p));
            match (want, in_clopen(&out.clopen, p)) {
                (true, false) => {
                    out.added.insert(p.clone());
                }
                (false, true) => {
                    out.removed.insert(p.clone());
                }
                _ => {}
            }
        }
        out
    }

    pub fn union(&self, o: &CylinderSet) -> CylinderSet {
        self.combine(o, |a, b| a || b)
    }

    pub fn intersect(&self, o: &CylinderSet) -> CylinderSet {
        self.combine(o, |a, b| a && b)
    }

    pub fn difference(&self, o: &CylinderSet) -> CylinderSet {
        self.combine(o, |a, b| a && !b)
    }

    pub fn complement(&self) -> CylinderSet {
        CylinderSet::full().difference(self)
    }

    /// Cantor space has no isolated points, so removed points come back.
    pub fn closure(&self) -> CylinderSet {
        CylinderSet { clopen: self.clopen.clone(), added: self.added.clone(), removed: BTreeSet::new() }
    }

    pub fn is_clopen(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty()
    }

    /// The clopen part: this set minus its isolated points, when closed.
    pub fn perfect_part(&self) -> CylinderSet {
        CylinderSet { clopen: self.clopen.clone(), ..CylinderSet::empty() }
    }

    pub fn witness(&self) -> Option<CylinderPoint> {
        let from_clopen = self.clopen.iter().find_map(|w| {
            [false, true]
                .into_iter()
                .map(|t| CylinderPoint::new(w.clone(), t))
                .chain((0..).map(|k| {
                    let mut v = w.clone();
                    v.extend(std::iter::repeat_n(true, k));
                    v.push(false);
                    CylinderPoint::new(v, true)
                }))
                .find(|p| !self.removed.contains(p))
        });
        let from_added = self.added.iter().next().cloned();
        match (from_clopen, from_added) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Image under a bijection that acts on cylinders of every depth.
    pub fn map(
        &self,
        on_word: impl Fn(&[bool]) -> Vec<bool>,
        on_point: impl Fn(&CylinderPoint) -> CylinderPoint,
    ) -> CylinderSet {
        let words: Vec<Vec<bool>> = self.clopen.iter().map(|w| on_word(w)).collect();
        let mut out = CylinderSet::cylinders(&words);
        out.added = self.added.iter().map(&on_point).collect();
        out.removed = self.removed.iter().map(&on_point).collect();
        out
    }

    pub fn max_depth(&self) -> usize {
        let pts = self.added.iter().chain(&self.removed).map(|p| p.word().len());
        depth_of(&self.clopen).max(pts.max().unwrap_or(0))
    }
}

impl fmt::Display for CylinderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let mut parts: Vec<String> = self.clopen.iter().map(|w| format!("<{}>", word_string(w))).collect();
        if !self.added.is_empty() {
            let pts: Vec<String> = self.added.iter().map(ToString::to_string).collect();
            parts.push(format!("{{{}}}", pts.join(",")));
        }
        f.write_str(&parts.join(" ∪ "))?;
        if !self.removed.is_empty() {
            let pts: Vec<String> = self.removed.iter().map(ToString::to_string).collect();
            write!(f, " \\ {{{}}}", pts.join(","))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn sibling_cylinders_merge() {
        let s = CylinderSet::cylinders(&[w("00"), w("01"), w("1")]);
        assert_eq!(s, CylinderSet::full());
        assert_eq!(CylinderSet::cylinders(&[w("0"), w("01")]), CylinderSet::cylinders(&[w("0")]));
    }

    #[test]
    fn points_and_closure() {
        let p = CylinderPoint::new(w("0"), false);
        let s = CylinderSet::cylinders(&[w("0")]).difference(&CylinderSet::points(std::slice::from_ref(&p)));
        assert!(!s.contains(&p));
        assert!(s.closure().contains(&p));
        assert!(s.closure().is_clopen());
        let w0 = s.witness().unwrap();
        assert!(s.contains(&w0));
        let q = CylinderPoint::new(w("1"), false);
        let t = CylinderSet::points(std::slice::from_ref(&q));
        assert_eq!(t.closure(), t);
        assert!(!t.is_clopen());
        assert!(CylinderSet::full().complement().is_empty());
    }

    #[test]
    fn complement_round_trip() {
        let s = CylinderSet::cylinders(&[w("01")]).union(&CylinderSet::points(&[CylinderPoint::new(w("1"), true)]));
        assert_eq!(s.complement().complement(), s);
        assert!(s.intersect(&s.complement()).is_empty());
    }
}
