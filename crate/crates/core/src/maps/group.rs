//! Homeomorphisms of the shipped spaces.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::rational::Rational;
use crate::space::boxes::BoxSet;
use crate::space::compact::CompactSet;
use crate::space::set::Repr;
use crate::space::{CompactPoint, CutPoint, CylinderPoint, Interval, NamedPoint, Partition, Space, SymbolicSet};

use super::pl::{CircleMap, PlMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupElement {
    Identity,
    /// PL automorphism of the cut line.
    PlAuto(PlMap),
    /// Coordinatewise PL automorphisms of a multi-order space.
    ProductAuto(Vec<PlMap>),
    /// Finite-support permutation of the isolated points of the
    /// compactification, as a map `k -> image`. The limit is fixed.
    FinSuppPerm(BTreeMap<u64, u64>),
    /// Orientation-preserving PL map of the circle.
    CyclicPlAuto(CircleMap),
    /// XOR with a finite bit mask on Cantor space.
    CylinderFlip(Vec<bool>),
    /// Permutation of a finite space, `i -> perm[i]`.
    FinitePerm(Vec<usize>),
}

fn mismatch(g: &GroupElement, space: &Space) -> Error {
    Error::SpaceMismatch { expected: space.to_string(), found: format!("group element {g}") }
}

/// Image of a cyclic coordinate in the linear model `[0, 1-]`.
fn circle_coord(g: &CircleMap, c: &CutPoint) -> CutPoint {
    let one = Rational::one();
    match c {
        CutPoint::Minus(q) => {
            let r = g.apply(&q.fract_floor());
            CutPoint::Minus(if r.is_zero() { one } else { r })
        }
        other => match other.rational() {
            Some(q) => other.with_rational(g.apply(q)),
            None => other.clone(),
        },
    }
}

fn circle_interval(g: &CircleMap, iv: &Interval, line: &crate::space::Line) -> Vec<Interval> {
    let lo = circle_coord(g, &iv.lo);
    let hi = circle_coord(g, &iv.hi);
    if lo <= hi {
        return Interval::new(lo, iv.lo_inc, hi, iv.hi_inc).into_iter().collect();
    }
    let upper = Interval::new(lo, iv.lo_inc, line.hi.clone(), true);
    let lower = Interval::new(line.lo.clone(), true, hi, iv.hi_inc);
    upper.into_iter().chain(lower).collect()
}

fn xor(word: &[bool], mask: &[bool], tail: Option<bool>) -> Vec<bool> {
    let len = match tail {
        Some(_) => word.len().max(mask.len()),
        None => word.len(),
    };
    (0..len)
        .map(|i| {
            let b = word.get(i).copied().unwrap_or(tail.unwrap_or(false));
            b ^ mask.get(i).copied().unwrap_or(false)
        })
        .collect()
}

impl GroupElement {
    pub fn pl(s: &str) -> Result<GroupElement> {
        Ok(GroupElement::PlAuto(PlMap::parse(s)?))
    }

    /// Translation of every coordinate by `t`.
    pub fn shift(space: &Space, t: Rational) -> Result<GroupElement> {
        match space {
            Space::CutLine => Ok(GroupElement::PlAuto(PlMap::translation(t))),
            Space::MultiOrder(n) => Ok(GroupElement::ProductAuto(vec![PlMap::translation(t); *n])),
            Space::Cyclic => Ok(GroupElement::CyclicPlAuto(CircleMap::rotation(t))),
            _ => Err(Error::Unsupported(format!("no translations on {space}"))),
        }
    }

    /// Builds a permutation from disjoint cycles.
    pub fn from_cycles(cycles: &[Vec<u64>]) -> Result<GroupElement> {
        let mut m = BTreeMap::new();
        for c in cycles {
            for (i, k) in c.iter().enumerate() {
                let next = c[(i + 1) % c.len()];
                if m.insert(*k, next).is_some() {
                    return Err(parse_err(format!("index {k} appears in two cycles")));
                }
            }
        }
        m.retain(|k, v| k != v);
        Ok(GroupElement::FinSuppPerm(m))
    }

    pub fn acts_on(&self, space: &Space) -> bool {
        match (self, space) {
            (GroupElement::Identity, _) => true,
            (GroupElement::PlAuto(_), Space::CutLine) => true,
            (GroupElement::ProductAuto(v), Space::MultiOrder(n)) => v.len() == *n,
            (GroupElement::FinSuppPerm(_), Space::Compactification) => true,
            (GroupElement::CyclicPlAuto(_), Space::Cyclic) => true,
            (GroupElement::CylinderFlip(_), Space::Cylinder) => true,
            (GroupElement::FinitePerm(p), Space::Finite(f)) => p.len() == f.points.len(),
            _ => false,
        }
    }

    fn check(&self, space: &Space) -> Result<()> {
        if self.acts_on(space) {
            Ok(())
        } else {
            Err(mismatch(self, space))
        }
    }

    fn coord_map(&self, d: usize, c: &CutPoint) -> CutPoint {
        match self {
            GroupElement::PlAuto(g) => g.apply_cut(c),
            GroupElement::ProductAuto(gs) => gs[d].apply_cut(c),
            GroupElement::CyclicPlAuto(g) => circle_coord(g, c),
            _ => c.clone(),
        }
    }

    pub fn apply(&self, space: &Space, x: &NamedPoint) -> Result<NamedPoint> {
        self.check(space)?;
        space.check_point(x)?;
        Ok(match (self, x) {
            (GroupElement::Identity, _) => x.clone(),
            (GroupElement::PlAuto(_) | GroupElement::ProductAuto(_) | GroupElement::CyclicPlAuto(_), _) => {
                let cs = space.coords(x)?;
                space.from_coords(cs.iter().enumerate().map(|(d, c)| self.coord_map(d, c)).collect())
            }
            (GroupElement::FinSuppPerm(m), NamedPoint::Compact(CompactPoint::Iso(k))) => {
                NamedPoint::Compact(CompactPoint::Iso(*m.get(k).unwrap_or(k)))
            }
            (GroupElement::CylinderFlip(mask), NamedPoint::Cylinder(p)) => {
                NamedPoint::Cylinder(CylinderPoint::new(xor(p.word(), mask, Some(p.tail())), p.tail()))
            }
            (GroupElement::FinitePerm(p), NamedPoint::Finite(i)) => NamedPoint::Finite(p[*i]),
            _ => x.clone(),
        })
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Identity => GroupElement::Identity,
            GroupElement::PlAuto(g) => GroupElement::PlAuto(g.inverse()),
            GroupElement::ProductAuto(gs) => GroupElement::ProductAuto(gs.iter().map(PlMap::inverse).collect()),
            GroupElement::FinSuppPerm(m) => GroupElement::FinSuppPerm(m.iter().map(|(k, v)| (*v, *k)).collect()),
            GroupElement::CyclicPlAuto(g) => GroupElement::CyclicPlAuto(g.inverse()),
            GroupElement::CylinderFlip(m) => GroupElement::CylinderFlip(m.clone()),
            GroupElement::FinitePerm(p) => {
                let mut inv = vec![0; p.len()];
                for (i, j) in p.iter().enumerate() {
                    inv[*j] = i;
                }
                GroupElement::FinitePerm(inv)
            }
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement> {
        use GroupElement::*;
        Ok(match (self, other) {
            (Identity, g) | (g, Identity) => g.clone(),
            (PlAuto(a), PlAuto(b)) => PlAuto(a.compose(b)),
            (ProductAuto(a), ProductAuto(b)) if a.len() == b.len() => {
                ProductAuto(a.iter().zip(b).map(|(x, y)| x.compose(y)).collect())
            }
            (FinSuppPerm(a), FinSuppPerm(b)) => {
                let mut m = BTreeMap::new();
                for k in a.keys().chain(b.keys()) {
                    let mid = *b.get(k).unwrap_or(k);
                    let v = *a.get(&mid).unwrap_or(&mid);
                    if v != *k {
                        m.insert(*k, v);
                    }
                }
                FinSuppPerm(m)
            }
            (CyclicPlAuto(a), CyclicPlAuto(b)) => CyclicPlAuto(a.compose(b)),
            (CylinderFlip(a), CylinderFlip(b)) => {
                let mut m = xor(a, b, Some(false));
                while m.last() == Some(&false) {
                    m.pop();
                }
                CylinderFlip(m)
            }
            (FinitePerm(a), FinitePerm(b)) if a.len() == b.len() => FinitePerm(b.iter().map(|i| a[*i]).collect()),
            _ => return Err(Error::InvalidArgument(format!("cannot compose {self} with {other}"))),
        })
    }

    /// `g[S]`.
    pub fn image_set(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        let space = s.space();
        self.check(space)?;
        Ok(match (self, &s.repr) {
            (GroupElement::Identity, _) => s.clone(),
            (GroupElement::PlAuto(_) | GroupElement::ProductAuto(_), Repr::Boxes(b)) => {
                let fs: Vec<Box<dyn Fn(&CutPoint) -> CutPoint + '_>> =
                    (0..b.arity()).map(|d| Box::new(move |c: &CutPoint| self.coord_map(d, c)) as Box<_>).collect();
                let refs: Vec<&dyn Fn(&CutPoint) -> CutPoint> = fs.iter().map(|f| f.as_ref()).collect();
                SymbolicSet::from_box_set(space, b.map_monotone(&refs))
            }
            (GroupElement::CyclicPlAuto(g), Repr::Boxes(b)) => {
                let line = b.line().clone();
                let boxes: Vec<Vec<Interval>> =
                    b.boxes().iter().flat_map(|bx| circle_interval(g, &bx[0], &line)).map(|iv| vec![iv]).collect();
                SymbolicSet::from_box_set(space, BoxSet::from_boxes(line, 1, &boxes))
            }
            (GroupElement::FinSuppPerm(m), Repr::Compact(c)) => SymbolicSet::from_compact(CompactSet {
                iso: c.iso.map(|k| *m.get(&k).unwrap_or(&k)),
                limit: c.limit,
            }),
            (GroupElement::CylinderFlip(mask), Repr::Cylinder(c)) => SymbolicSet::from_cylinder(c.map(
                |w| xor(w, mask, None),
                |p| CylinderPoint::new(xor(p.word(), mask, Some(p.tail())), p.tail()),
            )),
            (GroupElement::FinitePerm(p), Repr::Finite(ix)) => {
                SymbolicSet::new(space.clone(), Repr::Finite(ix.iter().map(|i| p[*i]).collect()))
            }
            _ => return Err(mismatch(self, space)),
        })
    }

    /// `g⁻¹[S]`.
    pub fn preimage_set(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        self.inverse().image_set(s)
    }

    /// `g[P] = {g[A] : A ∈ P}`.
    pub fn push_partition(&self, p: &Partition) -> Result<Partition> {
        self.check(p.space())?;
        let monotone = matches!(self, GroupElement::PlAuto(_) | GroupElement::ProductAuto(_));
        let on_axis = |d: usize, iv: &Interval| iv.map_monotone(|c| self.coord_map(d, c));
        let on_class = |a: &SymbolicSet| self.image_set(a).expect("checked space");
        let axis: Option<&dyn Fn(usize, &Interval) -> Interval> = if monotone { Some(&on_axis) } else { None };
        Ok(p.map_parts(axis, &on_class))
    }

    pub fn parse(space: &Space, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        if s == "id" || s == "identity" {
            return Ok(GroupElement::Identity);
        }
        let g = if let Some(rest) = s.strip_prefix("plauto:") {
            match space {
                Space::MultiOrder(n) => {
                    let parts: Result<Vec<PlMap>> = rest.split(';').map(PlMap::parse).collect();
                    let parts = parts?;
                    if parts.len() == 1 {
                        GroupElement::ProductAuto(vec![parts[0].clone(); *n])
                    } else {
                        GroupElement::ProductAuto(parts)
                    }
                }
                Space::Cyclic => GroupElement::CyclicPlAuto(CircleMap::parse(rest)?),
                _ => GroupElement::PlAuto(PlMap::parse(rest)?),
            }
        } else if let Some(rest) = s.strip_prefix("perm:") {
            let cycles: Result<Vec<Vec<u64>>> = rest
                .split(',')
                .filter(|c| !c.trim().is_empty())
                .map(|c| {
                    c.split('-')
                        .map(|k| k.trim().trim_start_matches('i').parse::<u64>().map_err(|_| parse_err(format!("bad cycle `{c}`"))))
                        .collect()
                })
                .collect();
            GroupElement::from_cycles(&cycles?)?
        } else if let Some(rest) = s.strip_prefix("flip:") {
            let w = crate::space::point::parse_word(rest).ok_or_else(|| parse_err(format!("bad mask `{rest}`")))?;
            GroupElement::CylinderFlip(w)
        } else {
            return Err(parse_err(format!("unknown group element `{s}`")));
        };
        g.check(space)?;
        Ok(g)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Identity => f.write_str("id"),
            GroupElement::PlAuto(g) => write!(f, "plauto:{g}"),
            GroupElement::ProductAuto(gs) => {
                let parts: Vec<String> = gs.iter().map(|g| g.to_string()).collect();
                write!(f, "plauto:{}", parts.join(";"))
            }
            GroupElement::FinSuppPerm(m) => {
                let mut seen = std::collections::BTreeSet::new();
                let mut cycles = Vec::new();
                for k in m.keys() {
                    if seen.contains(k) {
                        continue;
                    }
                    let mut c = vec![*k];
                    seen.insert(*k);
                    let mut j = m[k];
                    while j != *k {
                        seen.insert(j);
                        c.push(j);
                        j = m[&j];
                    }
                    cycles.push(c.iter().map(u64::to_string).collect::<Vec<_>>().join("-"));
                }
                write!(f, "perm:{}", cycles.join(","))
            }
            GroupElement::CyclicPlAuto(g) => write!(f, "plauto:{g}"),
            GroupElement::CylinderFlip(m) => write!(f, "flip:{}", crate::space::point::word_string(m)),
            GroupElement::FinitePerm(p) => {
                let parts: Vec<String> = p.iter().map(usize::to_string).collect();
                write!(f, "finperm:{}", parts.join(","))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::literal::parse_set;

    fn check_image(space: &Space, g: &GroupElement, set: &str) {
        let s = parse_set(space, set).unwrap();
        let img = g.image_set(&s).unwrap();
        for x in space.samples(3) {
            let gx = g.apply(space, &x).unwrap();
            assert_eq!(s.contains(&x), img.contains(&gx), "{g} {set} at {x}");
        }
        assert_eq!(g.preimage_set(&img).unwrap(), s);
    }

    #[test]
    fn images_agree_with_points() {
        let c = Space::CutLine;
        let g = GroupElement::pl("0=0,1=3").unwrap();
        check_image(&c, &g, "[0+,1-] ∪ {2} ∪ (1+,+inf]");
        let m = Space::MultiOrder(2);
        let h = GroupElement::parse(&m, "plauto:0=1;0=0,1=1/2").unwrap();
        check_image(&m, &h, "{-inf}×[-inf,+inf] ∪ [0,1]×(2+,+inf]");
        let y = Space::Cyclic;
        let r = GroupElement::parse(&y, "plauto:0=1/2").unwrap();
        check_image(&y, &r, "[0+,1/3-] ∪ {1/2}");
        check_image(&y, &r, "[2/3,1/3)");
        let w = GroupElement::CyclicPlAuto(CircleMap::new(vec![(Rational::zero(), Rational::zero()), (Rational::new(1, 2), Rational::new(3, 4))]).unwrap());
        check_image(&y, &w, "[1/3,0-]");
        let k = Space::Compactification;
        check_image(&k, &GroupElement::parse(&k, "perm:0-3,1-2").unwrap(), "co{i0,i1} ∪ {lim}");
        let z = Space::Cylinder;
        check_image(&z, &GroupElement::parse(&z, "flip:101").unwrap(), "<01> ∪ {1|0} \\ {0100|1}");
    }

    #[test]
    fn push_partition_matches_images() {
        let c = Space::CutLine;
        let g = GroupElement::shift(&c, Rational::one()).unwrap();
        let p = Partition::canonical(&c, 1).unwrap();
        let q = g.push_partition(&p).unwrap();
        q.validate().unwrap();
        for i in 0..p.len() {
            assert_eq!(q.class_set(i), g.image_set(&p.class_set(i)).unwrap());
        }
        let y = Space::Cyclic;
        let r = GroupElement::shift(&y, Rational::new(1, 3)).unwrap();
        r.push_partition(&Partition::canonical(&y, 2).unwrap()).unwrap().validate().unwrap();
    }

    #[test]
    fn group_laws_on_samples() {
        let k = Space::Compactification;
        let a = GroupElement::parse(&k, "perm:0-1-2").unwrap();
        let b = GroupElement::parse(&k, "perm:2-5").unwrap();
        let ab = a.compose(&b).unwrap();
        for x in k.samples(6) {
            let lhs = ab.apply(&k, &x).unwrap();
            let rhs = a.apply(&k, &b.apply(&k, &x).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert_eq!(a.compose(&a.inverse()).unwrap(), GroupElement::FinSuppPerm(BTreeMap::new()));
        assert_eq!(a.to_string(), "perm:0-1-2");
        let z = Space::Cylinder;
        let f = GroupElement::parse(&z, "flip:11").unwrap();
        assert_eq!(f.compose(&f).unwrap(), GroupElement::CylinderFlip(vec![]));
        assert!(GroupElement::parse(&z, "perm:0-1").is_err());
    }
}
