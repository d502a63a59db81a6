//! Generalized intervals of a cut line.
//!
//! Intervals are normalized so that an excluded endpoint is always a limit
//! point from the inside: an excluded lower end is `Plus(q)` or `MinusInf`,
//! an excluded upper end is `Minus(q)` or `PlusInf`. Every other exclusion is
//! rewritten to the included successor or predecessor.

use std::cmp::Ordering;
use std::fmt;

use crate::rational::Rational;

use super::point::CutPoint;

/// The ambient order of a line-like space: all points between `lo` and `hi`
/// inclusive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Line {
    pub lo: CutPoint,
    pub hi: CutPoint,
}

impl Line {
    pub fn cut() -> Line {
        Line { lo: CutPoint::MinusInf, hi: CutPoint::PlusInf }
    }

    /// The circle cut open at its isolated point `0`, as the order
    /// `[0, 1-]`.
    pub fn circle() -> Line {
        Line { lo: CutPoint::Rat(Rational::zero()), hi: CutPoint::Minus(Rational::one()) }
    }

    pub fn contains(&self, p: &CutPoint) -> bool {
        &self.lo <= p && p <= &self.hi
    }

    pub fn whole(&self) -> Interval {
        Interval::closed(self.lo.clone(), self.hi.clone())
    }

    /// Points `Minus(q)`, `Rat(q)`, `Plus(q)` that lie on the line.
    pub fn triple(&self, q: &Rational) -> impl Iterator<Item = CutPoint> + '_ {
        [CutPoint::Minus(q.clone()), CutPoint::Rat(q.clone()), CutPoint::Plus(q.clone())]
            .into_iter()
            .filter(move |p| self.contains(p))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: CutPoint,
    pub lo_inc: bool,
    pub hi: CutPoint,
    pub hi_inc: bool,
}

impl Interval {
    /// Builds a normalized interval, or `None` when it denotes the empty set.
    pub fn new(lo: CutPoint, lo_inc: bool, hi: CutPoint, hi_inc: bool) -> Option<Interval> {
        let (lo, lo_inc) = match (lo_inc, lo.succ()) {
            (false, Some(s)) => (s, true),
            _ => (lo, lo_inc),
        };
        let (hi, hi_inc) = match (hi_inc, hi.pred()) {
            (false, Some(p)) => (p, true),
            _ => (hi, hi_inc),
        };
        let nonempty = match lo.cmp(&hi) {
            Ordering::Less => true,
            Ordering::Equal => lo_inc && hi_inc,
            Ordering::Greater => false,
        };
        nonempty.then_some(Interval { lo, lo_inc, hi, hi_inc })
    }

    pub fn closed(lo: CutPoint, hi: CutPoint) -> Interval {
        assert!(lo <= hi, "closed interval with lo > hi");
        Interval { lo, lo_inc: true, hi, hi_inc: true }
    }

    pub fn point(p: CutPoint) -> Interval {
        Interval::closed(p.clone(), p)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, p: &CutPoint) -> bool {
        self.locate(p) == Ordering::Equal
    }

    /// `Less` if the whole interval lies below `p`, `Greater` if above,
    /// `Equal` if `p` is a member.
    pub fn locate(&self, p: &CutPoint) -> Ordering {
        match self.lo.cmp(p) {
            Ordering::Greater => return Ordering::Greater,
            Ordering::Equal if !self.lo_inc => return Ordering::Greater,
            _ => {}
        }
        match self.hi.cmp(p) {
            Ordering::Less => Ordering::Less,
            Ordering::Equal if !self.hi_inc => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn closure(&self) -> Interval {
        Interval::closed(self.lo.clone(), self.hi.clone())
    }

    pub fn is_closed(&self) -> bool {
        self.lo_inc && self.hi_inc
    }

    /// Open in `line` iff each included endpoint has a neighborhood on its
    /// outer side that stays inside.
    pub fn is_open_in(&self, line: &Line) -> bool {
        let lo_ok = !self.lo_inc
            || self.lo == line.lo
            || matches!(self.lo, CutPoint::Rat(_) | CutPoint::Plus(_));
        let hi_ok = !self.hi_inc
            || self.hi == line.hi
            || matches!(self.hi, CutPoint::Rat(_) | CutPoint::Minus(_));
        lo_ok && hi_ok
    }

    pub fn is_clopen_in(&self, line: &Line) -> bool {
        self.is_closed() && self.is_open_in(line)
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_inc) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_inc),
            Ordering::Less => (other.lo.clone(), other.lo_inc),
            Ordering::Equal => (self.lo.clone(), self.lo_inc && other.lo_inc),
        };
        let (hi, hi_inc) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_inc),
            Ordering::Greater => (other.hi.clone(), other.hi_inc),
            Ordering::Equal => (self.hi.clone(), self.hi_inc && other.hi_inc),
        };
        Interval::new(lo, lo_inc, hi, hi_inc)
    }

    pub fn is_subset(&self, other: &Interval) -> bool {
        self.intersect(other).as_ref() == Some(self)
    }

    /// A named member: the lower end if included, otherwise a rational just
    /// inside it.
    pub fn witness(&self) -> CutPoint {
        if self.lo_inc {
            return self.lo.clone();
        }
        let upper = self.hi.rational().cloned();
        CutPoint::Rat(match (self.lo.rational(), upper) {
            (Some(q), Some(r)) => Rational::midpoint(q, &r),
            (Some(q), None) => q.floor() + Rational::one(),
            (None, Some(r)) => r.floor() - Rational::one(),
            (None, None) => Rational::zero(),
        })
    }

    /// Both endpoints, for breakpoint collection.
    pub fn endpoints(&self) -> [&CutPoint; 2] {
        [&self.lo, &self.hi]
    }

    /// Applies an order-preserving bijection to both endpoints.
    pub fn map_monotone(&self, g: impl Fn(&CutPoint) -> CutPoint) -> Interval {
        Interval { lo: g(&self.lo), lo_inc: self.lo_inc, hi: g(&self.hi), hi_inc: self.hi_inc }
    }

    /// Text form using `disp` for endpoints.
    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, disp: &dyn Fn(&CutPoint) -> String) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", disp(&self.lo));
        }
        write!(
            f,
            "{}{},{}{}",
            if self.lo_inc { '[' } else { '(' },
            disp(&self.lo),
            disp(&self.hi),
            if self.hi_inc { ']' } else { ')' }
        )
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|p| p.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn normalization_moves_exclusions_to_limit_points() {
        let i = Interval::new(CutPoint::Minus(q(0)), false, CutPoint::Plus(q(1)), false).unwrap();
        assert_eq!(i, Interval::closed(CutPoint::Rat(q(0)), CutPoint::Rat(q(1))));
        let j = Interval::new(CutPoint::Rat(q(0)), false, CutPoint::Rat(q(0)), true);
        assert!(j.is_none());
        let k = Interval::new(CutPoint::Plus(q(0)), false, CutPoint::PlusInf, true).unwrap();
        assert!(!k.lo_inc);
        assert_eq!(k.closure(), Interval::closed(CutPoint::Plus(q(0)), CutPoint::PlusInf));
        assert!(Interval::new(CutPoint::Minus(q(1)), true, CutPoint::Rat(q(0)), true).is_none());
    }

    #[test]
    fn membership_respects_inclusion() {
        let i = Interval::closed(CutPoint::Plus(q(0)), CutPoint::PlusInf);
        assert!(i.contains(&CutPoint::Rat(q(2))));
        assert!(!i.contains(&CutPoint::Rat(q(0))));
        let open_inf = Interval::new(CutPoint::MinusInf, false, CutPoint::PlusInf, true).unwrap();
        assert!(!open_inf.contains(&CutPoint::MinusInf));
        assert!(open_inf.contains(&CutPoint::Minus(q(-100))));
    }

    #[test]
    fn clopen_classification() {
        let line = Line::cut();
        assert!(Interval::closed(CutPoint::Plus(q(0)), CutPoint::Minus(q(1))).is_clopen_in(&line));
        assert!(Interval::point(CutPoint::Rat(q(3))).is_clopen_in(&line));
        assert!(!Interval::point(CutPoint::Plus(q(3))).is_open_in(&line));
        assert!(!Interval::closed(CutPoint::Minus(q(0)), CutPoint::PlusInf).is_open_in(&line));
        assert!(line.whole().is_clopen_in(&line));
        assert!(Line::circle().whole().is_clopen_in(&Line::circle()));
    }

    #[test]
    fn witness_is_member() {
        let i = Interval::closed(CutPoint::Plus(q(0)), CutPoint::Minus(q(1)));
        assert_eq!(i.witness(), CutPoint::Plus(q(0)));
        let open = Interval::new(CutPoint::Plus(q(0)), false, CutPoint::Minus(q(1)), false).unwrap();
        assert_eq!(open.witness(), CutPoint::Rat(Rational::new(1, 2)));
        for iv in [
            Interval::new(CutPoint::MinusInf, false, CutPoint::Minus(q(-3)), true).unwrap(),
            Interval::new(CutPoint::Plus(q(5)), false, CutPoint::PlusInf, false).unwrap(),
            Interval::new(CutPoint::MinusInf, false, CutPoint::PlusInf, false).unwrap(),
        ] {
            assert!(iv.contains(&iv.witness()), "{iv}");
        }
    }

    #[test]
    fn intersection() {
        let a = Interval::closed(CutPoint::MinusInf, CutPoint::Rat(q(1)));
        let b = Interval::new(CutPoint::Rat(q(1)), false, CutPoint::PlusInf, true).unwrap();
        assert!(a.intersect(&b).is_none());
        let c = Interval::closed(CutPoint::Rat(q(0)), CutPoint::PlusInf);
        assert_eq!(a.intersect(&c), Some(Interval::closed(CutPoint::Rat(q(0)), CutPoint::Rat(q(1)))));
        assert!(a.intersect(&c).unwrap().is_subset(&a));
    }
}
