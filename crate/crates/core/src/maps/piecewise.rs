//! Piecewise maps: finitely many locally closed regions, each with an action.

use std::fmt;

use crate::error::{Error, Result};
use crate::space::{CutPoint, NamedPoint, Partition, Space, SymbolicSet};

use super::group::GroupElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Constant(NamedPoint),
    Apply(GroupElement),
    /// Cantor space only: `c0` on eventually-zero sequences, `c1` elsewhere.
    DenseCodense { c0: NamedPoint, c1: NamedPoint },
}

impl Action {
    pub fn is_dense_codense(&self) -> bool {
        matches!(self, Action::DenseCodense { .. })
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Constant(c) => write!(f, "const {c}"),
            Action::Apply(g) => write!(f, "apply {g}"),
            Action::DenseCodense { c0, c1 } => write!(f, "dense-codense {c0} / {c1}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Piece {
    pub region: SymbolicSet,
    pub action: Action,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseMap {
    space: Space,
    pieces: Vec<Piece>,
    pub name: String,
    /// Description of a net of group elements converging to this map.
    pub ellis_witness: Option<String>,
    pub claimed_in_ellis: bool,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidMap(msg.into())
}

impl PiecewiseMap {
    /// Validates totality, disjointness, local closedness and actions.
    pub fn new(space: &Space, name: impl Into<String>, pieces: Vec<Piece>) -> Result<PiecewiseMap> {
        let name = name.into();
        let mut covered = SymbolicSet::empty(space);
        for (i, p) in pieces.iter().enumerate() {
            p.region.try_same_space(&covered)?;
            let rim = p.region.closure().difference(&p.region);
            if !rim.is_closed() {
                return Err(invalid(format!("{name}: region {} is not locally closed", p.region)));
            }
            if !covered.intersect(&p.region).is_empty() {
                return Err(invalid(format!("{name}: piece {i} overlaps an earlier piece")));
            }
            covered = covered.union(&p.region);
            match &p.action {
                Action::Constant(c) => space.check_point(c)?,
                Action::Apply(g) => {
                    if !g.acts_on(space) {
                        return Err(invalid(format!("{name}: {g} does not act on {space}")));
                    }
                }
                Action::DenseCodense { c0, c1 } => {
                    if *space != Space::Cylinder || pieces.len() != 1 {
                        return Err(invalid(format!("{name}: dense-codense must be the only piece of a cylinder map")));
                    }
                    space.check_point(c0)?;
                    space.check_point(c1)?;
                }
            }
        }
        if !covered.is_full() {
            return Err(invalid(format!("{name}: pieces miss {}", covered.complement())));
        }
        Ok(PiecewiseMap { space: space.clone(), pieces, name, ellis_witness: None, claimed_in_ellis: false })
    }

    pub fn from_group(space: &Space, name: impl Into<String>, g: GroupElement) -> Result<PiecewiseMap> {
        let piece = Piece { region: SymbolicSet::full(space), action: Action::Apply(g) };
        Ok(PiecewiseMap::new(space, name, vec![piece])?.in_ellis("the constant net"))
    }

    pub fn identity(space: &Space) -> PiecewiseMap {
        PiecewiseMap::from_group(space, "identity", GroupElement::Identity).expect("identity is valid")
    }

    /// Marks the map as a claimed Ellis element with the given net.
    pub fn in_ellis(mut self, witness: impl Into<String>) -> PiecewiseMap {
        self.ellis_witness = Some(witness.into());
        self.claimed_in_ellis = true;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> PiecewiseMap {
        self.name = name.into();
        self
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_apply_only(&self) -> bool {
        self.pieces.iter().all(|p| matches!(p.action, Action::Apply(_)))
    }

    pub fn dense_codense(&self) -> Option<(&NamedPoint, &NamedPoint)> {
        match self.pieces.as_slice() {
            [Piece { action: Action::DenseCodense { c0, c1 }, .. }] => Some((c0, c1)),
            _ => None,
        }
    }

    pub fn apply_map(&self, x: &NamedPoint) -> Result<NamedPoint> {
        self.space.check_point(x)?;
        let piece = self
            .pieces
            .iter()
            .find(|p| p.region.contains(x))
            .ok_or_else(|| invalid(format!("{}: no piece contains {x}", self.name)))?;
        match &piece.action {
            Action::Constant(c) => Ok(c.clone()),
            Action::Apply(g) => g.apply(&self.space, x),
            Action::DenseCodense { c0, c1 } => match x {
                NamedPoint::Cylinder(p) if !p.tail() => Ok(c0.clone()),
                _ => Ok(c1.clone()),
            },
        }
    }

    /// `f⁻¹[A]` for any set in the class. Fails for dense-codense maps,
    /// whose fibers are not in the class.
    pub fn preimage(&self, a: &SymbolicSet) -> Result<SymbolicSet> {
        a.try_same_space(&SymbolicSet::empty(&self.space))?;
        let mut out = SymbolicSet::empty(&self.space);
        for p in &self.pieces {
            let part = match &p.action {
                Action::Constant(c) if a.contains(c) => p.region.clone(),
                Action::Constant(_) => continue,
                Action::Apply(g) => p.region.intersect(&g.preimage_set(a)?),
                Action::DenseCodense { .. } => {
                    return Err(Error::Unsupported(format!(
                        "{}: preimages of a dense-codense map are not symbolic sets",
                        self.name
                    )))
                }
            };
            out = out.union(&part);
        }
        Ok(out)
    }

    pub fn preimage_clopen(&self, a: &SymbolicSet) -> Result<SymbolicSet> {
        if !a.is_clopen() {
            return Err(Error::InvalidArgument(format!("{a} is not clopen")));
        }
        self.preimage(a)
    }

    /// `f[R]` for a region contained in a single piece.
    pub fn piece_image(&self, i: usize, r: &SymbolicSet) -> Result<SymbolicSet> {
        let p = &self.pieces[i];
        let r = r.intersect(&p.region);
        if r.is_empty() {
            return Ok(SymbolicSet::empty(&self.space));
        }
        match &p.action {
            Action::Constant(c) => SymbolicSet::points(&self.space, std::slice::from_ref(c)),
            Action::Apply(g) => g.image_set(&r),
            Action::DenseCodense { c0, c1 } => SymbolicSet::points(&self.space, &[c0.clone(), c1.clone()]),
        }
    }

    fn conj_action(&self, h: &GroupElement, a: &Action, outer: bool) -> Result<Action> {
        let hinv = h.inverse();
        Ok(match a {
            Action::Constant(c) if outer => Action::Constant(h.apply(&self.space, c)?),
            Action::Constant(c) => Action::Constant(c.clone()),
            Action::Apply(g) if outer => Action::Apply(h.compose(&g.compose(&hinv)?)?),
            Action::Apply(g) => Action::Apply(g.compose(&hinv)?),
            Action::DenseCodense { c0, c1 } if outer => {
                Action::DenseCodense { c0: h.apply(&self.space, c0)?, c1: h.apply(&self.space, c1)? }
            }
            Action::DenseCodense { .. } => a.clone(),
        })
    }

    /// Returns `(f ∘ h⁻¹, h ∘ f ∘ h⁻¹)`.
    pub fn conjugate(&self, h: &GroupElement) -> Result<(PiecewiseMap, PiecewiseMap)> {
        if !h.acts_on(&self.space) {
            return Err(Error::SpaceMismatch { expected: self.space.to_string(), found: h.to_string() });
        }
        if self.dense_codense().is_some() && !matches!(h, GroupElement::Identity | GroupElement::CylinderFlip(_)) {
            return Err(Error::Unsupported(format!("{h} may not preserve the fibers of {}", self.name)));
        }
        let build = |outer: bool, suffix: &str| -> Result<PiecewiseMap> {
            let pieces: Result<Vec<Piece>> = self
                .pieces
                .iter()
                .map(|p| Ok(Piece { region: h.image_set(&p.region)?, action: self.conj_action(h, &p.action, outer)? }))
                .collect();
            let mut m = PiecewiseMap::new(&self.space, format!("{}{suffix}", self.name), pieces?)?;
            m.ellis_witness = self.ellis_witness.clone();
            m.claimed_in_ellis = self.claimed_in_ellis;
            Ok(m)
        };
        Ok((build(false, "∘h⁻¹")?, build(true, "^h")?))
    }

    /// Exact monotonicity test on the cut line: each piece is monotone on
    /// each of its intervals, so it suffices to compare the images of the
    /// closures of consecutive intervals.
    pub fn is_monotone(&self) -> Result<bool> {
        if !self.space.is_ordered() {
            return Err(Error::Unsupported(format!("{} is not linearly ordered", self.space)));
        }
        let mut spans: Vec<(crate::space::Interval, CutPoint, CutPoint)> = Vec::new();
        for p in &self.pieces {
            let eval = |c: &CutPoint| -> Result<CutPoint> {
                let x = NamedPoint::Cut(c.clone());
                let y = match &p.action {
                    Action::Constant(k) => k.clone(),
                    Action::Apply(g) => g.apply(&self.space, &x)?,
                    Action::DenseCodense { .. } => unreachable!("validated"),
                };
                Ok(self.space.coords(&y)?.remove(0))
            };
            for b in p.region.boxes().expect("line space") {
                let iv = b[0].clone();
                let (lo, hi) = (eval(&iv.lo)?, eval(&iv.hi)?);
                spans.push((iv, lo, hi));
            }
        }
        spans.sort_by(|a, b| (&a.0.lo, !a.0.lo_inc).cmp(&(&b.0.lo, !b.0.lo_inc)));
        Ok(spans.windows(2).all(|w| w[0].2 <= w[1].1))
    }

    /// Checks on all triples of samples of height `height`, plus region
    /// endpoints, that the cyclic order is kept or the images collide.
    pub fn preserves_cyclic(&self, height: u64) -> Result<bool> {
        if self.space != Space::Cyclic {
            return Err(Error::Unsupported(format!("{} is not the cyclic space", self.space)));
        }
        let mut coords: Vec<CutPoint> = self.space.samples(height).iter().map(|x| self.space.coords(x).unwrap().remove(0)).collect();
        for p in &self.pieces {
            for b in p.region.boxes().expect("line space") {
                coords.extend(b[0].endpoints().into_iter().cloned());
            }
        }
        coords.sort();
        coords.dedup();
        let images: Result<Vec<CutPoint>> = coords
            .iter()
            .map(|c| Ok(self.space.coords(&self.apply_map(&self.space.from_coords(vec![c.clone()]))?)?.remove(0)))
            .collect();
        let images = images?;
        let cyc = |a: &CutPoint, b: &CutPoint, c: &CutPoint| (a < b && b < c) || (b < c && c < a) || (c < a && a < b);
        let n = coords.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (&images[i], &images[j], &images[k]);
                    if a == b || b == c || a == c {
                        continue;
                    }
                    if !cyc(a, b, c) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Partition of the space into the nonempty sets `f⁻¹[A]`, `A ∈ P`.
    pub fn pullback_partition(&self, p: &Partition) -> Result<Vec<SymbolicSet>> {
        let mut out = Vec::new();
        for a in p.classes() {
            let s = self.preimage(&a)?;
            if !s.is_empty() {
                out.push(s);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PiecewiseMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.name)?;
        for p in &self.pieces {
            write!(f, " [{} ↦ {}]", p.region, p.action)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::space::literal::parse_set;

    fn piece(space: &Space, region: &str, action: Action) -> Piece {
        Piece { region: parse_set(space, region).unwrap(), action }
    }

    fn pt(space: &Space, s: &str) -> NamedPoint {
        space.parse_point(s).unwrap()
    }

    fn stretch() -> PiecewiseMap {
        let c = Space::CutLine;
        PiecewiseMap::new(
            &c,
            "stretch",
            vec![
                piece(&c, "[-inf,0+]", Action::Apply(GroupElement::Identity)),
                piece(&c, "(0+,+inf]", Action::Constant(pt(&c, "+inf"))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let c = Space::CutLine;
        let gap = PiecewiseMap::new(&c, "gap", vec![piece(&c, "[-inf,0]", Action::Apply(GroupElement::Identity))]);
        assert!(gap.is_err());
        let overlap = PiecewiseMap::new(
            &c,
            "overlap",
            vec![
                piece(&c, "[-inf,0]", Action::Apply(GroupElement::Identity)),
                piece(&c, "[0,+inf]", Action::Apply(GroupElement::Identity)),
            ],
        );
        assert!(overlap.is_err());
        let y = Space::Cylinder;
        let dc = Action::DenseCodense { c0: pt(&y, "|0"), c1: pt(&y, "|1") };
        assert!(PiecewiseMap::new(&y, "tail", vec![piece(&y, "X", dc.clone())]).is_ok());
        assert!(PiecewiseMap::new(&c, "tail", vec![piece(&c, "X", dc)]).is_err());
    }

    #[test]
    fn preimages_agree_with_points() {
        let c = Space::CutLine;
        let f = stretch();
        let shift = PiecewiseMap::from_group(&c, "shift", GroupElement::shift(&c, Rational::one()).unwrap()).unwrap();
        for text in ["[0+,2-]", "{1}", "[1+,+inf]", "[-inf,-1-] ∪ {0}"] {
            let a = parse_set(&c, text).unwrap();
            for m in [&f, &shift] {
                let pre = m.preimage_clopen(&a).unwrap();
                for x in c.samples(4) {
                    assert_eq!(pre.contains(&x), a.contains(&m.apply_map(&x).unwrap()), "{} {text} {x}", m.name);
                }
            }
            assert!(shift.preimage_clopen(&a).unwrap().is_clopen());
        }
        let a = parse_set(&c, "[0+,2-]").unwrap();
        assert_eq!(shift.preimage_clopen(&a).unwrap().to_string(), "[-1+,1-]");
        assert!(f.preimage_clopen(&parse_set(&c, "(0+,1]").unwrap()).is_err());
    }

    #[test]
    fn conjugation_moves_regions() {
        let c = Space::CutLine;
        let h = GroupElement::shift(&c, Rational::one()).unwrap();
        let (fh, hfh) = stretch().conjugate(&h).unwrap();
        assert_eq!(fh.pieces()[0].region.to_string(), "[-inf,1+]");
        for x in c.samples(3) {
            let hx = h.apply(&c, &x).unwrap();
            assert_eq!(fh.apply_map(&hx).unwrap(), stretch().apply_map(&x).unwrap());
            assert_eq!(hfh.apply_map(&hx).unwrap(), h.apply(&c, &stretch().apply_map(&x).unwrap()).unwrap());
        }
        let (a, b) = stretch().conjugate(&GroupElement::Identity).unwrap();
        assert_eq!(a.pieces(), stretch().pieces());
        assert_eq!(b.pieces(), stretch().pieces());
    }

    #[test]
    fn monotone_and_cyclic() {
        let c = Space::CutLine;
        assert!(stretch().is_monotone().unwrap());
        assert!(PiecewiseMap::identity(&c).is_monotone().unwrap());
        let swap = PiecewiseMap::new(
            &c,
            "swap",
            vec![
                piece(&c, "[-inf,0-]", Action::Constant(pt(&c, "1"))),
                piece(&c, "[0,+inf]", Action::Constant(pt(&c, "-1"))),
            ],
        )
        .unwrap();
        assert!(!swap.is_monotone().unwrap());
        let y = Space::Cyclic;
        let collapse = PiecewiseMap::new(
            &y,
            "collapse",
            vec![
                piece(&y, "{0}", Action::Constant(pt(&y, "0"))),
                piece(&y, "{0+}", Action::Constant(pt(&y, "0+"))),
                piece(&y, "(0+,0-]", Action::Constant(pt(&y, "0-"))),
            ],
        )
        .unwrap();
        assert!(collapse.preserves_cyclic(3).unwrap());
        let reverse = PiecewiseMap::new(
            &y,
            "reverse",
            vec![
                piece(&y, "[0,1/3-]", Action::Constant(pt(&y, "2/3"))),
                piece(&y, "[1/3,2/3-]", Action::Constant(pt(&y, "1/3"))),
                piece(&y, "[2/3,0-]", Action::Constant(pt(&y, "0"))),
            ],
        )
        .unwrap();
        assert!(!reverse.preserves_cyclic(3).unwrap());
        assert!(swap.preserves_cyclic(3).is_err());
    }
}
