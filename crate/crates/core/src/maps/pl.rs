//! Piecewise-linear order automorphisms of `Q` and of the circle `Q/Z`.

use std::fmt;

use crate::error::{parse_err, Result};
use crate::rational::Rational;
use crate::space::CutPoint;

/// An increasing PL bijection of `Q`: linear between breakpoints, a
/// translation outside them. No breakpoints means the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PlMap {
    points: Vec<(Rational, Rational)>,
}

fn slope(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    &(&b.1 - &a.1) / &(&b.0 - &a.0)
}

fn interpolate(a: &(Rational, Rational), b: &(Rational, Rational), x: &Rational) -> Rational {
    &a.1 + &(&(x - &a.0) * &slope(a, b))
}

impl PlMap {
    pub fn identity() -> PlMap {
        PlMap::default()
    }

    pub fn translation(t: Rational) -> PlMap {
        PlMap::new(vec![(Rational::zero(), t)]).expect("valid")
    }

    /// Builds a map from breakpoints `(x_i, y_i)`; both coordinates must be
    /// strictly increasing.
    pub fn new(points: Vec<(Rational, Rational)>) -> Result<PlMap> {
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(parse_err("breakpoints must be strictly increasing in x and y"));
            }
        }
        let mut m = PlMap { points };
        m.normalize();
        Ok(m)
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    pub fn is_identity(&self) -> bool {
        self.points.is_empty()
    }

    /// Drops breakpoints where the slope does not change.
    fn normalize(&mut self) {
        let one = Rational::one();
        loop {
            let n = self.points.len();
            let removable = (0..n).find(|&i| {
                if n == 1 {
                    return self.points[0].0 == self.points[0].1;
                }
                let left = if i == 0 { one.clone() } else { slope(&self.points[i - 1], &self.points[i]) };
                let right = if i + 1 == n { one.clone() } else { slope(&self.points[i], &self.points[i + 1]) };
                left == right
            });
            match removable {
                Some(i) => {
                    self.points.remove(i);
                }
                None => break,
            }
        }
        if let [(x, y)] = self.points.as_slice() {
            self.points = vec![(Rational::zero(), y - x)];
        }
    }

    pub fn apply(&self, x: &Rational) -> Rational {
        let pts = &self.points;
        match pts.len() {
            0 => x.clone(),
            _ if x <= &pts[0].0 => x + &(&pts[0].1 - &pts[0].0),
            n if x >= &pts[n - 1].0 => x + &(&pts[n - 1].1 - &pts[n - 1].0),
            _ => {
                let i = pts.partition_point(|p| &p.0 <= x);
                interpolate(&pts[i - 1], &pts[i], x)
            }
        }
    }

    pub fn apply_cut(&self, p: &CutPoint) -> CutPoint {
        match p.rational() {
            Some(q) => p.with_rational(self.apply(q)),
            None => p.clone(),
        }
    }

    pub fn inverse(&self) -> PlMap {
        PlMap { points: self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PlMap) -> PlMap {
        let inv = other.inverse();
        let mut xs: Vec<Rational> = other.points.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(self.points.iter().map(|(x, _)| inv.apply(x)));
        xs.sort();
        xs.dedup();
        let points = xs.into_iter().map(|x| {
            let y = self.apply(&other.apply(&x));
            (x, y)
        });
        let mut m = PlMap { points: points.collect() };
        m.normalize();
        m
    }

    /// Parses `x=y,x=y,...`; an empty string is the identity.
    pub fn parse(s: &str) -> Result<PlMap> {
        let s = s.trim();
        if s.is_empty() || s == "id" {
            return Ok(PlMap::identity());
        }
        let pts: Result<Vec<(Rational, Rational)>> = s
            .split(',')
            .map(|pair| {
                let (x, y) = pair.split_once('=').ok_or_else(|| parse_err(format!("bad breakpoint `{pair}`")))?;
                let x: Rational = x.trim().parse().map_err(|_| parse_err(format!("bad rational `{x}`")))?;
                let y: Rational = y.trim().parse().map_err(|_| parse_err(format!("bad rational `{y}`")))?;
                Ok((x, y))
            })
            .collect();
        PlMap::new(pts?)
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.points.iter().map(|(x, y)| format!("{x}={y}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// An orientation-preserving PL homeomorphism of the circle `Q/Z`, given by
/// a lift `L` with `L(x + 1) = L(x) + 1`. The breakpoints list one period:
/// `x_0` lies in `[0, 1)`, and the segment after the last breakpoint runs to
/// `(x_0 + 1, y_0 + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircleMap {
    points: Vec<(Rational, Rational)>,
}

impl CircleMap {
    pub fn rotation(r: Rational) -> CircleMap {
        CircleMap::new(vec![(Rational::zero(), r)]).expect("valid")
    }

    pub fn identity() -> CircleMap {
        CircleMap::rotation(Rational::zero())
    }

    pub fn new(points: Vec<(Rational, Rational)>) -> Result<CircleMap> {
        if points.is_empty() {
            return Err(parse_err("a circle map needs at least one breakpoint"));
        }
        let (x0, y0) = points[0].clone();
        let one = Rational::one();
        for w in points.windows(2) {
            if w[0].0 >= w[1].0 || w[0].1 >= w[1].1 {
                return Err(parse_err("breakpoints must be strictly increasing"));
            }
        }
        let (xl, yl) = points.last().unwrap();
        if *xl >= &x0 + &one || *yl >= &y0 + &one {
            return Err(parse_err("breakpoints must fit in one period"));
        }
        let mut m = CircleMap { points };
        m.normalize();
        Ok(m)
    }

    /// Brings every breakpoint into `[0, 1)` and the image of `0` into
    /// `[0, 1)`, then drops collinear breakpoints.
    fn normalize(&mut self) {
        let one = Rational::one();
        for p in &mut self.points {
            let k = p.0.floor();
            p.0 = &p.0 - &k;
            p.1 = &p.1 - &k;
        }
        self.points.sort_by(|a, b| a.0.cmp(&b.0));
        let k = self.lift(&Rational::zero()).floor();
        for p in &mut self.points {
            p.1 = &p.1 - &k;
        }
        while self.points.len() > 1 {
            let n = self.points.len();
            let at = |i: usize| -> (Rational, Rational) {
                let j = i % n;
                let wraps = Rational::from_integer((i / n) as i64);
                (&self.points[j].0 + &wraps, &self.points[j].1 + &wraps)
            };
            let removable = (0..n).find(|&i| {
                let prev = if i == 0 {
                    (&self.points[n - 1].0 - &one, &self.points[n - 1].1 - &one)
                } else {
                    at(i - 1)
                };
                slope(&prev, &at(i)) == slope(&at(i), &at(i + 1))
            });
            match removable {
                Some(i) => {
                    self.points.remove(i);
                }
                None => break,
            }
        }
        if self.points.len() == 1 {
            let l0 = self.lift(&Rational::zero());
            self.points = vec![(Rational::zero(), l0)];
        }
    }

    pub fn breakpoints(&self) -> &[(Rational, Rational)] {
        &self.points
    }

    /// The lift `L` evaluated at any rational.
    pub fn lift(&self, x: &Rational) -> Rational {
        let one = Rational::one();
        let x0 = &self.points[0].0;
        let k = (x - x0).floor();
        let r = x - &k;
        let n = self.points.len();
        let i = self.points.partition_point(|p| p.0 <= r);
        let a = &self.points[i - 1];
        let b = if i < n {
            self.points[i].clone()
        } else {
            (&self.points[0].0 + &one, &self.points[0].1 + &one)
        };
        &interpolate(a, &b, &r) + &k
    }

    /// Image of a rational representative in `[0, 1)`.
    pub fn apply(&self, q: &Rational) -> Rational {
        self.lift(q).fract_floor()
    }

    pub fn inverse(&self) -> CircleMap {
        let mut m = CircleMap { points: self.points.iter().map(|(x, y)| (y.clone(), x.clone())).collect() };
        m.normalize();
        m
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &CircleMap) -> CircleMap {
        let inv = other.inverse();
        let mut xs: Vec<Rational> = other.points.iter().map(|(x, _)| x.fract_floor()).collect();
        xs.extend(self.points.iter().map(|(x, _)| inv.lift(x).fract_floor()));
        xs.sort();
        xs.dedup();
        let pts = xs.into_iter().map(|x| {
            let y = self.lift(&other.lift(&x));
            (x, y)
        });
        let mut m = CircleMap { points: pts.collect() };
        m.normalize();
        m
    }

    /// Parses `x=y,...` breakpoints of one period of the lift.
    pub fn parse(s: &str) -> Result<CircleMap> {
        let pl = PlMap::parse(s)?;
        if pl.is_identity() {
            return Ok(CircleMap::identity());
        }
        CircleMap::new(pl.points)
    }
}

impl fmt::Display for CircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|(x, y)| format!("{x}={y}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p, q)
    }

    #[test]
    fn pl_basics() {
        let g = PlMap::parse("0=0,1=2").unwrap();
        assert_eq!(g.apply(&r(1, 2)), r(1, 1));
        assert_eq!(g.apply(&r(-3, 1)), r(-3, 1));
        assert_eq!(g.apply(&r(5, 1)), r(6, 1));
        assert_eq!(g.compose(&g.inverse()), PlMap::identity());
        let t = PlMap::translation(r(1, 1));
        assert_eq!(t.to_string(), "0=1");
        assert_eq!(PlMap::parse("0=1,1=2").unwrap(), t);
        assert!(PlMap::parse("0=1,1=1").is_err());
        assert_eq!(t.apply_cut(&CutPoint::Minus(r(0, 1))), CutPoint::Minus(r(1, 1)));
        assert_eq!(t.apply_cut(&CutPoint::PlusInf), CutPoint::PlusInf);
    }

    #[test]
    fn circle_basics() {
        let rot = CircleMap::rotation(r(1, 4));
        assert_eq!(rot.apply(&r(7, 8)), r(1, 8));
        assert_eq!(rot.compose(&rot.inverse()), CircleMap::identity());
        let g = CircleMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 2), r(3, 4))]).unwrap();
        assert_eq!(g.apply(&r(1, 4)), r(3, 8));
        assert_eq!(g.apply(&r(3, 4)), r(7, 8));
        assert_eq!(g.inverse().apply(&r(3, 8)), r(1, 4));
        assert_eq!(g.compose(&g.inverse()), CircleMap::identity());
        assert_eq!(CircleMap::rotation(r(5, 4)), rot);
    }

    fn arb_pl() -> impl Strategy<Value = PlMap> {
        prop::collection::vec((1i64..4, 1i64..4), 0..4).prop_map(|steps| {
            let (mut x, mut y) = (r(-2, 1), r(-1, 1));
            let mut pts = Vec::new();
            for (dx, dy) in steps {
                pts.push((x.clone(), y.clone()));
                x = &x + &r(dx, 2);
                y = &y + &r(dy, 3);
            }
            PlMap::new(pts).unwrap()
        })
    }

    fn arb_circle() -> impl Strategy<Value = CircleMap> {
        (0i64..8, prop::collection::vec(1i64..4, 0..3)).prop_map(|(shift, ws)| {
            let n = ws.len() as i64 + 1;
            let total: i64 = ws.iter().sum::<i64>() + 1;
            let mut pts = Vec::new();
            let mut y = r(shift, 8);
            for (i, w) in ws.iter().chain([&1]).enumerate() {
                pts.push((r(i as i64, n), y.clone()));
                y = &y + &r(*w, total);
            }
            CircleMap::new(pts).unwrap()
        })
    }

    proptest! {
        #[test]
        fn pl_group_laws(g in arb_pl(), h in arb_pl(), p in -20i64..20, q in 1i64..6) {
            let x = r(p, q);
            prop_assert_eq!(g.inverse().apply(&g.apply(&x)), x.clone());
            prop_assert_eq!(g.compose(&h).apply(&x), g.apply(&h.apply(&x)));
            prop_assert_eq!(g.compose(&g.inverse()), PlMap::identity());
        }

        #[test]
        fn circle_group_laws(g in arb_circle(), h in arb_circle(), p in 0i64..12) {
            let x = r(p, 12);
            prop_assert_eq!(g.inverse().apply(&g.apply(&x)), x.clone());
            prop_assert_eq!(g.compose(&h).apply(&x), g.apply(&h.apply(&x)));
            prop_assert_eq!(g.compose(&g.inverse()), CircleMap::identity());
        }
    }
}
