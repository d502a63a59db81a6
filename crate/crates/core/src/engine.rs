//! Oscillation derivatives, their iteration, and the ranks built on them.
//!
//! For a closed `Y`, a map `f` and a clopen partition `P`, the derivative
//! `Y'` is the set of `y ∈ Y` such that every neighbourhood of `y` contains
//! two points of `Y` whose images lie in different classes of `P`.
//!
//! Two independent routes compute it. The piecewise route uses that every
//! action extends continuously to the whole space: near `y`, the images of
//! `Y ∩ R_j` cluster in the class of `a_j(y)`, so `y ∈ Y'` iff there are
//! pieces `j, k` with `y ∈ cl(Y ∩ R_j) ∩ cl(Y ∩ R_k)` and
//! `a_j(y), a_k(y)` in different classes. The pairwise route evaluates
//! `⋃_{A ≠ B} cl(Y ∩ f⁻¹A) ∩ cl(Y ∩ f⁻¹B)` literally.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{Action, GroupElement, PiecewiseMap};
use crate::space::boxes::BoxSet;
use crate::space::{CompactPoint, CutPoint, CylinderPoint, NamedPoint, Partition, Space, SymbolicSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankValue {
    Finite(u64),
    Infinite,
    /// The iteration stopped after this many steps without deciding.
    Capped(u64),
}

impl RankValue {
    pub fn is_capped(&self) -> bool {
        matches!(self, RankValue::Capped(_))
    }

    /// Least upper bound; `Capped` absorbs everything, and the empty sup is
    /// `Finite(0)`.
    pub fn sup(values: impl IntoIterator<Item = RankValue>) -> RankValue {
        let mut acc = RankValue::Finite(0);
        for v in values {
            acc = match (acc, v) {
                (RankValue::Capped(a), RankValue::Capped(b)) => RankValue::Capped(a.max(b)),
                (c @ RankValue::Capped(_), _) | (_, c @ RankValue::Capped(_)) => c,
                (RankValue::Infinite, _) | (_, RankValue::Infinite) => RankValue::Infinite,
                (RankValue::Finite(a), RankValue::Finite(b)) => RankValue::Finite(a.max(b)),
            };
        }
        acc
    }
}

impl PartialOrd for RankValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (RankValue::Capped(_), _) | (_, RankValue::Capped(_)) => None,
            (RankValue::Finite(a), RankValue::Finite(b)) => Some(a.cmp(b)),
            (RankValue::Finite(_), RankValue::Infinite) => Some(Ordering::Less),
            (RankValue::Infinite, RankValue::Finite(_)) => Some(Ordering::Greater),
            (RankValue::Infinite, RankValue::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for RankValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankValue::Finite(n) => write!(f, "{n}"),
            RankValue::Infinite => f.write_str("∞"),
            RankValue::Capped(n) => write!(f, "undecided after {n} steps"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Empty,
    FixedPoint,
    CapReached,
}

/// Evidence that `point` lies in the derivative of the previous stage: `v1`
/// and `v2` lie in that stage and in `neighborhood`, and their images fall
/// in different classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub stage: usize,
    pub point: NamedPoint,
    pub neighborhood: SymbolicSet,
    pub v1: NamedPoint,
    pub v2: NamedPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeChain {
    /// `Y⁰ ⊋ Y¹ ⊋ …`; ends with `∅` on `Empty` and repeats the last stage
    /// on `FixedPoint`.
    pub stages: Vec<SymbolicSet>,
    pub termination: Termination,
    pub certificates: Vec<Certificate>,
}

impl DerivativeChain {
    /// Largest `α` with a nonempty stage.
    pub fn rank(&self) -> RankValue {
        match self.termination {
            Termination::FixedPoint => RankValue::Infinite,
            Termination::CapReached => RankValue::Capped(self.stages.len() as u64 - 1),
            Termination::Empty => RankValue::Finite(self.stages.len().saturating_sub(2) as u64),
        }
    }

    pub fn point_rank(&self, x: &NamedPoint) -> RankValue {
        let last = self.stages.len() - 1;
        match self.stages.iter().position(|s| !s.contains(x)) {
            Some(0) => RankValue::Finite(0),
            Some(i) => RankValue::Finite(i as u64 - 1),
            None => match self.termination {
                Termination::FixedPoint => RankValue::Infinite,
                Termination::CapReached => RankValue::Capped(last as u64),
                Termination::Empty => unreachable!("the last stage is empty"),
            },
        }
    }
}

fn check_inputs(y: &SymbolicSet, f: &PiecewiseMap, p: &Partition) -> Result<()> {
    if p.space() != f.space() {
        return Err(Error::SpaceMismatch { expected: f.space().to_string(), found: p.space().to_string() });
    }
    y.try_same_space(&SymbolicSet::empty(f.space()))?;
    if !y.is_closed() {
        return Err(Error::InvalidArgument(format!("{y} is not closed")));
    }
    Ok(())
}

/// Points of `Y` that are limits of other points of `Y`.
fn perfect_part(y: &SymbolicSet) -> SymbolicSet {
    SymbolicSet::from_cylinder(y.as_cylinder().expect("cylinder set").perfect_part())
}

fn action_at(f: &PiecewiseMap, a: &Action, y: &NamedPoint) -> Result<NamedPoint> {
    match a {
        Action::Constant(c) => Ok(c.clone()),
        Action::Apply(g) => g.apply(f.space(), y),
        Action::DenseCodense { .. } => unreachable!("handled separately"),
    }
}

/// `a⁻¹[C]` for an action extended to the whole space.
fn action_preimage(f: &PiecewiseMap, a: &Action, c: &SymbolicSet) -> Result<SymbolicSet> {
    match a {
        Action::Constant(k) if c.contains(k) => Ok(SymbolicSet::full(f.space())),
        Action::Constant(_) => Ok(SymbolicSet::empty(f.space())),
        Action::Apply(g) => g.preimage_set(c),
        Action::DenseCodense { .. } => unreachable!("handled separately"),
    }
}

/// Component of a coordinatewise automorphism, as a map of the cut line.
fn axis_component(g: &GroupElement, d: usize) -> Option<GroupElement> {
    match g {
        GroupElement::Identity => Some(GroupElement::Identity),
        GroupElement::ProductAuto(gs) => Some(GroupElement::PlAuto(gs[d].clone())),
        _ => None,
    }
}

/// `{y : g(y), h(y) in the same class}` for two automorphisms.
fn agreement_set(f: &PiecewiseMap, g: &GroupElement, h: &GroupElement, p: &Partition) -> Result<SymbolicSet> {
    let space = f.space();
    if let (Space::MultiOrder(n), Some(axes)) = (space, p.grid_axes()) {
        let line = Space::CutLine;
        let mut factors = Vec::with_capacity(*n);
        for (d, axis) in axes.iter().enumerate() {
            let (Some(gd), Some(hd)) = (axis_component(g, d), axis_component(h, d)) else {
                return agreement_by_classes(f, g, h, p);
            };
            let mut e = SymbolicSet::empty(&line);
            for iv in axis {
                let atom = SymbolicSet::from_boxes(&line, &[vec![iv.clone()]]);
                e = e.union(&gd.preimage_set(&atom)?.intersect(&hd.preimage_set(&atom)?));
            }
            factors.push(e.as_boxes().expect("line set").clone());
        }
        return Ok(SymbolicSet::from_box_set(space, BoxSet::product(&factors)));
    }
    agreement_by_classes(f, g, h, p)
}

fn agreement_by_classes(f: &PiecewiseMap, g: &GroupElement, h: &GroupElement, p: &Partition) -> Result<SymbolicSet> {
    let mut e = SymbolicSet::empty(f.space());
    for c in p.classes() {
        e = e.union(&g.preimage_set(&c)?.intersect(&h.preimage_set(&c)?));
    }
    Ok(e)
}

/// Points of `K` where the two actions land in different classes.
fn separation_set(
    f: &PiecewiseMap,
    a: &Action,
    b: &Action,
    k: &SymbolicSet,
    p: &Partition,
) -> Result<SymbolicSet> {
    match (a, b) {
        (Action::Constant(c), Action::Constant(d)) => {
            Ok(if p.same_class(c, d)? { SymbolicSet::empty(f.space()) } else { k.clone() })
        }
        (Action::Constant(c), other @ Action::Apply(_)) | (other @ Action::Apply(_), Action::Constant(c)) => {
            let class = p.class_set(p.class_of(c)?);
            Ok(k.difference(&action_preimage(f, other, &class)?))
        }
        (Action::Apply(g), Action::Apply(h)) => {
            if g == h {
                return Ok(SymbolicSet::empty(f.space()));
            }
            Ok(k.difference(&agreement_set(f, g, h, p)?))
        }
        _ => unreachable!("handled separately"),
    }
}

/// Closures `cl(Y ∩ R_j)` of the nonempty traces of the pieces.
fn piece_closures(y: &SymbolicSet, f: &PiecewiseMap) -> Vec<(usize, SymbolicSet)> {
    f.pieces()
        .iter()
        .enumerate()
        .map(|(j, piece)| (j, y.intersect(&piece.region).closure()))
        .filter(|(_, s)| !s.is_empty())
        .collect()
}

/// `(Y)'_{f,P}` by the piecewise route.
pub fn derivative(y: &SymbolicSet, f: &PiecewiseMap, p: &Partition) -> Result<SymbolicSet> {
    check_inputs(y, f, p)?;
    if let Some((c0, c1)) = f.dense_codense() {
        return Ok(if p.same_class(c0, c1)? { SymbolicSet::empty(f.space()) } else { perfect_part(y) });
    }
    let closures = piece_closures(y, f);
    let mut out = SymbolicSet::empty(f.space());
    for (i, (j, cj)) in closures.iter().enumerate() {
        for (k, ck) in &closures[i + 1..] {
            let kset = cj.intersect(ck);
            if kset.is_empty() {
                continue;
            }
            let (a, b) = (&f.pieces()[*j].action, &f.pieces()[*k].action);
            out = out.union(&separation_set(f, a, b, &kset, p)?);
        }
    }
    Ok(out)
}

/// `(Y)'_{f,P}` by the pairwise closure formula over the classes of `P`.
pub fn derivative_pairwise(y: &SymbolicSet, f: &PiecewiseMap, p: &Partition) -> Result<SymbolicSet> {
    check_inputs(y, f, p)?;
    let mut traces = Vec::new();
    for a in p.classes() {
        let t = y.intersect(&f.preimage(&a)?).closure();
        if !t.is_empty() {
            traces.push(t);
        }
    }
    let mut out = SymbolicSet::empty(f.space());
    let mut later = SymbolicSet::empty(f.space());
    for t in traces.iter().rev() {
        out = out.union(&t.intersect(&later));
        later = later.union(t);
    }
    Ok(out)
}

/// An oscillation certificate for `x ∈ (Y)'_{f,P}`, if `x` is there.
pub fn certify(y: &SymbolicSet, f: &PiecewiseMap, p: &Partition, x: &NamedPoint) -> Result<Option<(SymbolicSet, NamedPoint, NamedPoint)>> {
    check_inputs(y, f, p)?;
    let own = p.class_set(p.class_of(x)?);
    if let Some((c0, c1)) = f.dense_codense() {
        if p.same_class(c0, c1)? {
            return Ok(None);
        }
        let near = y.intersect(&own);
        let word = near.as_cylinder().and_then(|c| c.clopen_words().next().cloned());
        return Ok(word.map(|w| {
            let v1 = NamedPoint::Cylinder(CylinderPoint::new(w.clone(), false));
            let v2 = NamedPoint::Cylinder(CylinderPoint::new(w, true));
            (own, v1, v2)
        }));
    }
    let closures = piece_closures(y, f);
    let near: Vec<&(usize, SymbolicSet)> = closures.iter().filter(|(_, c)| c.contains(x)).collect();
    for (i, (j, _)) in near.iter().enumerate() {
        for (k, _) in &near[i + 1..] {
            let (a, b) = (&f.pieces()[*j].action, &f.pieces()[*k].action);
            let (fa, fb) = (action_at(f, a, x)?, action_at(f, b, x)?);
            let (ca, cb) = (p.class_of(&fa)?, p.class_of(&fb)?);
            if ca == cb {
                continue;
            }
            let n = own
                .intersect(&action_preimage(f, a, &p.class_set(ca))?)
                .intersect(&action_preimage(f, b, &p.class_set(cb))?);
            let v1 = n.intersect(y).intersect(&f.pieces()[*j].region).witness();
            let v2 = n.intersect(y).intersect(&f.pieces()[*k].region).witness();
            if let (Some(v1), Some(v2)) = (v1, v2) {
                return Ok(Some((n, v1, v2)));
            }
        }
    }
    Ok(None)
}

/// Representative points of a stage: one per box, or the listed points.
fn stage_samples(s: &SymbolicSet, limit: usize) -> Vec<NamedPoint> {
    let mut pts: Vec<NamedPoint> = match (s.finite_points(), s.boxes()) {
        (Some(pts), _) => pts,
        (None, Some(boxes)) => boxes
            .into_iter()
            .filter_map(|b| SymbolicSet::from_boxes(s.space(), &[b]).witness())
            .collect(),
        _ => s.witness().into_iter().collect(),
    };
    pts.truncate(limit);
    pts
}

pub const DEFAULT_CAP: u64 = 64;

/// Iterates the derivative from `Y` until it vanishes, repeats, or `cap`
/// derivatives have been taken.
pub fn iterate_derivative(y: &SymbolicSet, f: &PiecewiseMap, p: &Partition, cap: u64) -> Result<DerivativeChain> {
    if cap < 1 {
        return Err(Error::InvalidArgument("cap must be at least 1".into()));
    }
    check_inputs(y, f, p)?;
    let mut stages = vec![y.clone()];
    let mut certificates = Vec::new();
    if y.is_empty() {
        return Ok(DerivativeChain { stages, termination: Termination::Empty, certificates });
    }
    loop {
        let last = stages.last().expect("nonempty");
        let next = derivative(last, f, p)?;
        assert!(next.is_subset(last), "derivative left its argument");
        for x in stage_samples(&next, 8) {
            if let Some((neighborhood, v1, v2)) = certify(last, f, p, &x)? {
                certificates.push(Certificate { stage: stages.len(), point: x, neighborhood, v1, v2 });
            }
        }
        let termination = if next.is_empty() {
            Some(Termination::Empty)
        } else if &next == last {
            Some(Termination::FixedPoint)
        } else if stages.len() as u64 == cap {
            Some(Termination::CapReached)
        } else {
            None
        };
        stages.push(next);
        if let Some(termination) = termination {
            return Ok(DerivativeChain { stages, termination, certificates });
        }
    }
}

/// `β(f, P)`.
pub fn beta_of_pair(f: &PiecewiseMap, p: &Partition, cap: u64) -> Result<RankValue> {
    Ok(iterate_derivative(&SymbolicSet::full(f.space()), f, p, cap)?.rank())
}

/// `β(f|_Y, P)` for a closed `Y`.
pub fn beta_of_restriction(f: &PiecewiseMap, p: &Partition, y: &SymbolicSet, cap: u64) -> Result<RankValue> {
    Ok(iterate_derivative(y, f, p, cap)?.rank())
}

/// The sup of `β(f, P_ℓ)` over the canonical levels `1..=max_level`, and
/// whether the last three levels agree.
pub fn beta_of_map(f: &PiecewiseMap, max_level: u32, cap: u64) -> Result<(RankValue, bool)> {
    let per_level = beta_by_level(f, max_level, cap)?;
    for w in per_level.windows(2) {
        if let Some(ord) = w[0].partial_cmp(&w[1]) {
            assert!(ord != Ordering::Greater, "{}: rank dropped under refinement", f.name);
        }
    }
    let tail = &per_level[per_level.len().saturating_sub(3)..];
    let stabilized = tail.iter().all(|v| v == &tail[0]) && !tail[0].is_capped();
    Ok((RankValue::sup(per_level.iter().copied()), stabilized))
}

pub fn beta_by_level(f: &PiecewiseMap, max_level: u32, cap: u64) -> Result<Vec<RankValue>> {
    if max_level < 1 {
        return Err(Error::InvalidArgument("max level must be at least 1".into()));
    }
    (1..=max_level)
        .map(|l| beta_of_pair(f, &Partition::canonical(f.space(), l)?, cap))
        .collect()
}

/// The sup of `β(f)` over the supplied maps.
pub fn beta_of_system(maps: &[PiecewiseMap], max_level: u32, cap: u64) -> Result<RankValue> {
    if maps.is_empty() {
        return Err(Error::InvalidArgument("a system needs at least one map".into()));
    }
    let ranks: Result<Vec<RankValue>> = maps.par_iter().map(|f| Ok(beta_of_map(f, max_level, cap)?.0)).collect();
    Ok(RankValue::sup(ranks?))
}

/// `bR_{f,P}(x)`.
pub fn point_rank(f: &PiecewiseMap, p: &Partition, x: &NamedPoint, cap: u64) -> Result<RankValue> {
    f.space().check_point(x)?;
    Ok(iterate_derivative(&SymbolicSet::full(f.space()), f, p, cap)?.point_rank(x))
}

/// Cantor–Bendixson rank of a point.
pub fn cb_point_rank(space: &Space, x: &NamedPoint) -> Result<RankValue> {
    space.check_point(x)?;
    Ok(match (space, x) {
        (Space::CutLine | Space::MultiOrder(_) | Space::Cyclic, _) => {
            if space.coords(x)?.iter().all(CutPoint::is_isolated) {
                RankValue::Finite(0)
            } else {
                RankValue::Infinite
            }
        }
        (Space::Compactification, NamedPoint::Compact(CompactPoint::Iso(_))) => RankValue::Finite(0),
        (Space::Compactification, _) => RankValue::Finite(1),
        (Space::Cylinder, _) => RankValue::Infinite,
        (Space::Finite(_) | Space::Singleton, _) => RankValue::Finite(0),
    })
}

/// Pairs of pieces whose actions disagree somewhere on the common
/// boundary, decided exactly where the class allows it.
fn structurally_continuous(f: &PiecewiseMap, max_level: u32) -> Result<bool> {
    if let Some((c0, c1)) = f.dense_codense() {
        return Ok(c0 == c1);
    }
    let space = f.space();
    let closures: Vec<SymbolicSet> = f.pieces().iter().map(|p| p.region.closure()).collect();
    for j in 0..closures.len() {
        for k in j + 1..closures.len() {
            let kset = closures[j].intersect(&closures[k]);
            if kset.is_empty() {
                continue;
            }
            let (a, b) = (&f.pieces()[j].action, &f.pieces()[k].action);
            let ok = match (a, b) {
                (Action::Constant(c), Action::Constant(d)) => c == d,
                (Action::Constant(c), Action::Apply(g)) | (Action::Apply(g), Action::Constant(c)) => {
                    let target = SymbolicSet::points(space, std::slice::from_ref(c))?;
                    kset.is_subset(&g.preimage_set(&target)?)
                }
                (Action::Apply(g), Action::Apply(h)) if g == h => true,
                (Action::Apply(g), Action::Apply(h)) => match kset.finite_points() {
                    Some(pts) => {
                        let mut all = true;
                        for y in pts {
                            all &= g.apply(space, &y)? == h.apply(space, &y)?;
                        }
                        all
                    }
                    None => {
                        let mut all = true;
                        for l in 1..=max_level {
                            let p = Partition::canonical(space, l)?;
                            all &= kset.is_subset(&agreement_set(f, g, h, &p)?);
                        }
                        all
                    }
                },
                _ => unreachable!("dense-codense handled above"),
            };
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Continuity: no oscillation at any canonical level up to `max_level`,
/// and no disagreement between adjacent pieces.
pub fn is_continuous(f: &PiecewiseMap, max_level: u32) -> Result<bool> {
    let full = SymbolicSet::full(f.space());
    for l in 1..=max_level {
        if !derivative(&full, f, &Partition::canonical(f.space(), l)?)?.is_empty() {
            return Ok(false);
        }
    }
    structurally_continuous(f, max_level)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fragmentation {
    Fragmented { beta: RankValue, stabilized: bool },
    /// A nonempty closed set equal to its own derivative at this level.
    NotFragmented { fixed: SymbolicSet, level: u32, partition: Partition },
    Indeterminate { cap: u64 },
}

pub fn is_fragmented_report(f: &PiecewiseMap, max_level: u32, cap: u64) -> Result<Fragmentation> {
    let full = SymbolicSet::full(f.space());
    for l in 1..=max_level {
        let p = Partition::canonical(f.space(), l)?;
        let chain = iterate_derivative(&full, f, &p, cap)?;
        match chain.termination {
            Termination::FixedPoint => {
                let fixed = chain.stages.last().expect("nonempty").clone();
                return Ok(Fragmentation::NotFragmented { fixed, level: l, partition: p });
            }
            Termination::CapReached => return Ok(Fragmentation::Indeterminate { cap }),
            Termination::Empty => {}
        }
    }
    let (beta, stabilized) = beta_of_map(f, max_level, cap)?;
    Ok(Fragmentation::Fragmented { beta, stabilized })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Direction {
    Left,
    Right,
}

/// Directions in which `f` oscillates at `x` against the atom of `f(x)`:
/// `Right` iff `x` is a limit of points whose images lie above that atom,
/// `Left` likewise below.
pub fn oscillation_directions(f: &PiecewiseMap, p: &Partition, x: &NamedPoint) -> Result<BTreeSet<Direction>> {
    let space = f.space();
    if !space.is_ordered() {
        return Err(Error::Unsupported(format!("{space} is not linearly ordered")));
    }
    let axes = p.grid_axes().ok_or_else(|| Error::Unsupported("directions need an interval partition".into()))?;
    let fx = f.apply_map(x)?;
    let c = space.coords(&fx)?.remove(0);
    let atom = axes[0].iter().find(|iv| iv.contains(&c)).expect("partition covers the line");
    let full = SymbolicSet::full(space);
    let below = SymbolicSet::from_boxes(space, &[vec![crate::space::Interval::closed(CutPoint::MinusInf, atom.lo.clone())]]);
    let above = SymbolicSet::from_boxes(space, &[vec![crate::space::Interval::closed(atom.hi.clone(), CutPoint::PlusInf)]]);
    let strictly_above = above.difference(&SymbolicSet::points(space, &[NamedPoint::Cut(atom.hi.clone())])?);
    let strictly_below = below.difference(&SymbolicSet::points(space, &[NamedPoint::Cut(atom.lo.clone())])?);
    let mut out = BTreeSet::new();
    if full.intersect(&f.preimage(&strictly_above)?).closure().contains(x) {
        out.insert(Direction::Right);
    }
    if full.intersect(&f.preimage(&strictly_below)?).closure().contains(x) {
        out.insert(Direction::Left);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::space::literal::parse_set;
    use crate::maps::Piece;

    fn set(space: &Space, s: &str) -> SymbolicSet {
        parse_set(space, s).unwrap()
    }

    fn stretch() -> PiecewiseMap {
        let c = Space::CutLine;
        PiecewiseMap::new(
            &c,
            "stretch",
            vec![
                Piece { region: set(&c, "[-inf,0+]"), action: Action::Apply(GroupElement::Identity) },
                Piece { region: set(&c, "(0+,+inf]"), action: Action::Constant(NamedPoint::Cut(CutPoint::PlusInf)) },
            ],
        )
        .unwrap()
    }

    #[test]
    fn rank_value_order_and_sup() {
        use RankValue::*;
        assert!(Finite(2) < Finite(3));
        assert!(Finite(9) < Infinite);
        assert_eq!(Finite(1).partial_cmp(&Capped(3)), None);
        assert_eq!(RankValue::sup([]), Finite(0));
        assert_eq!(RankValue::sup([Finite(1), Infinite, Finite(2)]), Infinite);
        assert_eq!(RankValue::sup([Finite(1), Capped(5), Infinite]), Capped(5));
        assert_eq!(serde_json::to_string(&Finite(2)).unwrap(), r#"{"finite":2}"#);
        assert_eq!(serde_json::to_string(&Infinite).unwrap(), r#""infinite""#);
        assert_eq!(serde_json::to_string(&Capped(4)).unwrap(), r#"{"capped":4}"#);
    }

    #[test]
    fn stretch_has_one_oscillation_point() {
        let c = Space::CutLine;
        let f = stretch();
        for l in 1..=3 {
            let p = Partition::canonical(&c, l).unwrap();
            let full = SymbolicSet::full(&c);
            let d = derivative(&full, &f, &p).unwrap();
            assert_eq!(d.to_string(), "{0+}");
            assert_eq!(derivative_pairwise(&full, &f, &p).unwrap(), d);
            let chain = iterate_derivative(&full, &f, &p, DEFAULT_CAP).unwrap();
            assert_eq!(chain.stages.len(), 3);
            assert_eq!(chain.rank(), RankValue::Finite(1));
            let cert = &chain.certificates[0];
            assert_eq!(cert.point.to_string(), "0+");
            assert!(!p.same_class(&f.apply_map(&cert.v1).unwrap(), &f.apply_map(&cert.v2).unwrap()).unwrap());
            let dirs = oscillation_directions(&f, &p, &cert.point).unwrap();
            assert_eq!(dirs.into_iter().collect::<Vec<_>>(), vec![Direction::Right]);
        }
        assert_eq!(beta_of_map(&f, 3, DEFAULT_CAP).unwrap(), (RankValue::Finite(1), true));
        assert!(!is_continuous(&f, 2).unwrap());
    }

    #[test]
    fn continuous_maps_have_rank_zero() {
        let c = Space::CutLine;
        let g = PiecewiseMap::from_group(&c, "shift", GroupElement::shift(&c, Rational::new(1, 2)).unwrap()).unwrap();
        assert!(is_continuous(&g, 3).unwrap());
        assert_eq!(beta_of_map(&g, 3, DEFAULT_CAP).unwrap(), (RankValue::Finite(0), true));
        let empty = SymbolicSet::empty(&c);
        let chain = iterate_derivative(&empty, &g, &Partition::canonical(&c, 1).unwrap(), 4).unwrap();
        assert_eq!(chain.stages.len(), 1);
        assert_eq!(chain.rank(), RankValue::Finite(0));
        assert!(iterate_derivative(&empty, &g, &Partition::canonical(&c, 1).unwrap(), 0).is_err());
    }

    #[test]
    fn dense_codense_is_a_fixed_point() {
        let y = Space::Cylinder;
        let f = PiecewiseMap::new(
            &y,
            "tail",
            vec![Piece {
                region: SymbolicSet::full(&y),
                action: Action::DenseCodense { c0: y.parse_point("|0").unwrap(), c1: y.parse_point("|1").unwrap() },
            }],
        )
        .unwrap();
        let p = Partition::canonical(&y, 1).unwrap();
        let chain = iterate_derivative(&SymbolicSet::full(&y), &f, &p, DEFAULT_CAP).unwrap();
        assert_eq!(chain.termination, Termination::FixedPoint);
        assert_eq!(chain.stages.len(), 2);
        assert_eq!(chain.rank(), RankValue::Infinite);
        assert!(chain.stages[1].is_clopen());
        let c = &chain.certificates[0];
        assert!(!p.same_class(&f.apply_map(&c.v1).unwrap(), &f.apply_map(&c.v2).unwrap()).unwrap());
        let with_points = set(&y, "<0> ∪ {1|0}");
        assert_eq!(derivative(&with_points, &f, &p).unwrap(), set(&y, "<0>"));
        assert!(matches!(is_fragmented_report(&f, 1, 8).unwrap(), Fragmentation::NotFragmented { .. }));
    }

    #[test]
    fn rejects_open_argument() {
        let c = Space::CutLine;
        let p = Partition::canonical(&c, 1).unwrap();
        assert!(derivative(&set(&c, "(0+,1]"), &stretch(), &p).is_err());
    }

    #[test]
    fn cb_ranks() {
        let c = Space::CutLine;
        assert_eq!(cb_point_rank(&c, &c.parse_point("5").unwrap()).unwrap(), RankValue::Finite(0));
        assert_eq!(cb_point_rank(&c, &c.parse_point("0+").unwrap()).unwrap(), RankValue::Infinite);
        let k = Space::Compactification;
        assert_eq!(cb_point_rank(&k, &k.parse_point("lim").unwrap()).unwrap(), RankValue::Finite(1));
    }
}
