//! Subsets of the one-point compactification of `N`.

use std::collections::BTreeSet;
use std::fmt;

use super::point::CompactPoint;

/// Isolated points: either a finite set or the complement of one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IsoSet {
    Finite(BTreeSet<u64>),
    Cofinite(BTreeSet<u64>),
}

impl IsoSet {
    pub fn contains(&self, k: u64) -> bool {
        match self {
            IsoSet::Finite(s) => s.contains(&k),
            IsoSet::Cofinite(s) => !s.contains(&k),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, IsoSet::Cofinite(_))
    }

    fn complement(&self) -> IsoSet {
        match self {
            IsoSet::Finite(s) => IsoSet::Cofinite(s.clone()),
            IsoSet::Cofinite(s) => IsoSet::Finite(s.clone()),
        }
    }

    fn combine(&self, other: &IsoSet, op: impl Fn(bool, bool) -> bool) -> IsoSet {
        let keys = self.listed() | other.listed();
        if op(self.is_infinite(), other.is_infinite()) {
            IsoSet::Cofinite(keys.into_iter().filter(|k| !op(self.contains(*k), other.contains(*k))).collect())
        } else {
            IsoSet::Finite(keys.into_iter().filter(|k| op(self.contains(*k), other.contains(*k))).collect())
        }
    }

    /// Every index that is excluded or included explicitly.
    fn listed(&self) -> &BTreeSet<u64> {
        match self {
            IsoSet::Finite(s) | IsoSet::Cofinite(s) => s,
        }
    }

    pub fn map(&self, g: impl Fn(u64) -> u64) -> IsoSet {
        match self {
            IsoSet::Finite(s) => IsoSet::Finite(s.iter().map(|k| g(*k)).collect()),
            IsoSet::Cofinite(s) => IsoSet::Cofinite(s.iter().map(|k| g(*k)).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactSet {
    pub iso: IsoSet,
    pub limit: bool,
}

impl CompactSet {
    pub fn empty() -> CompactSet {
        CompactSet { iso: IsoSet::Finite(BTreeSet::new()), limit: false }
    }

    pub fn full() -> CompactSet {
        CompactSet { iso: IsoSet::Cofinite(BTreeSet::new()), limit: true }
    }

    pub fn points(pts: &[CompactPoint]) -> CompactSet {
        let mut iso = BTreeSet::new();
        let mut limit = false;
        for p in pts {
            match p {
                CompactPoint::Iso(k) => {
                    iso.insert(*k);
                }
                CompactPoint::Limit => limit = true,
            }
        }
        CompactSet { iso: IsoSet::Finite(iso), limit }
    }

    pub fn contains(&self, p: &CompactPoint) -> bool {
        match p {
            CompactPoint::Iso(k) => self.iso.contains(*k),
            CompactPoint::Limit => self.limit,
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.limit && matches!(&self.iso, IsoSet::Finite(s) if s.is_empty())
    }

    pub fn combine(&self, o: &CompactSet, op: impl Fn(bool, bool) -> bool) -> CompactSet {
        CompactSet { iso: self.iso.combine(&o.iso, &op), limit: op(self.limit, o.limit) }
    }

    pub fn union(&self, o: &CompactSet) -> CompactSet {
        self.combine(o, |a, b| a || b)
    }

    pub fn intersect(&self, o: &CompactSet) -> CompactSet {
        self.combine(o, |a, b| a && b)
    }

    pub fn complement(&self) -> CompactSet {
        CompactSet { iso: self.iso.complement(), limit: !self.limit }
    }

    pub fn difference(&self, o: &CompactSet) -> CompactSet {
        self.combine(o, |a, b| a && !b)
    }

    /// Infinitely many isolated points accumulate at the limit.
    pub fn closure(&self) -> CompactSet {
        CompactSet { iso: self.iso.clone(), limit: self.limit || self.iso.is_infinite() }
    }

    pub fn is_clopen(&self) -> bool {
        self.iso.is_infinite() == self.limit
    }

    pub fn witness(&self) -> Option<CompactPoint> {
        match &self.iso {
            IsoSet::Finite(s) => s.iter().next().map(|k| CompactPoint::Iso(*k)),
            IsoSet::Cofinite(s) => (0..).find(|k| !s.contains(k)).map(CompactPoint::Iso),
        }
        .or(self.limit.then_some(CompactPoint::Limit))
    }

    /// Largest explicitly listed isolated index.
    pub fn max_listed(&self) -> Option<u64> {
        self.iso.listed().iter().next_back().copied()
    }
}

impl fmt::Display for CompactSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u64>| s.iter().map(|k| format!("i{k}")).collect::<Vec<_>>().join(",");
        let mut parts = Vec::new();
        match &self.iso {
            IsoSet::Finite(s) if s.is_empty() => {}
            IsoSet::Finite(s) => parts.push(format!("{{{}}}", list(s))),
            IsoSet::Cofinite(s) => parts.push(format!("co{{{}}}", list(s))),
        }
        if self.limit {
            parts.push("{lim}".into());
        }
        if parts.is_empty() {
            f.write_str("{}")
        } else {
            f.write_str(&parts.join(" ∪ "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_adds_the_limit_to_infinite_sets() {
        let s = CompactSet { iso: IsoSet::Cofinite(BTreeSet::from([0, 1])), limit: false };
        assert!(!s.is_clopen());
        let c = s.closure();
        assert!(c.limit && c.is_clopen());
        let f = CompactSet::points(&[CompactPoint::Iso(3)]);
        assert_eq!(f.closure(), f);
        assert!(f.is_clopen());
        assert!(!CompactSet::points(&[CompactPoint::Limit]).is_clopen());
    }

    #[test]
    fn algebra() {
        let a = CompactSet { iso: IsoSet::Cofinite(BTreeSet::from([0])), limit: true };
        let b = CompactSet::points(&[CompactPoint::Iso(0), CompactPoint::Iso(5)]);
        assert_eq!(a.union(&b), CompactSet::full());
        assert_eq!(a.intersect(&b), CompactSet::points(&[CompactPoint::Iso(5)]));
        assert!(a.difference(&a).is_empty());
        assert_eq!(a.witness(), Some(CompactPoint::Iso(1)));
        assert_eq!(a.to_string(), "co{i0} ∪ {lim}");
    }
}
