//! Factor maps `π: X → Y` with group epimorphisms `ρ`, the transfer
//! `θ(f)` of a piecewise map along `π`, and the comparison of derivative
//! chains upstairs and downstairs.

use std::fmt;

use serde::Serialize;

use crate::engine::{beta_of_pair, iterate_derivative, DerivativeChain, RankValue};
use crate::error::{Error, Result};
use crate::maps::{Action, GroupElement, Piece, PiecewiseMap};
use crate::space::compact::{CompactSet, IsoSet};
use crate::space::{CompactPoint, NamedPoint, Partition, Space, SymbolicSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// `multiorder:n → multiorder:k`, keeping the first `k` coordinates.
    Projection { n: usize, k: usize },
    /// Everything to the one-point space.
    Singleton,
    /// Synthetic non-open factor of the compactification onto itself:
    /// `i0 ↦ lim`, `i(k+1) ↦ ik`, `lim ↦ lim`. Equivariant for the permutations
    /// fixing `0`.
    Glue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorMap {
    pub source: Space,
    pub target: Space,
    pub kind: FactorKind,
    pub is_open: bool,
}

impl fmt::Display for FactorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FactorKind::Projection { n, k } => write!(f, "proj:{n}:{k}"),
            FactorKind::Singleton => write!(f, "singleton:{}", self.source),
            FactorKind::Glue => f.write_str("glue"),
        }
    }
}

fn shift_down(s: &IsoSet) -> IsoSet {
    let down = |set: &std::collections::BTreeSet<u64>| set.iter().filter(|k| **k > 0).map(|k| k - 1).collect();
    match s {
        IsoSet::Finite(v) => IsoSet::Finite(down(v)),
        IsoSet::Cofinite(v) => IsoSet::Cofinite(down(v)),
    }
}

impl FactorMap {
    pub fn projection(n: usize, k: usize) -> Result<FactorMap> {
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!("projection needs 1 <= k < n, got n = {n}, k = {k}")));
        }
        Ok(FactorMap {
            source: Space::MultiOrder(n),
            target: Space::MultiOrder(k),
            kind: FactorKind::Projection { n, k },
            is_open: true,
        })
    }

    pub fn singleton(space: &Space) -> FactorMap {
        FactorMap { source: space.clone(), target: Space::Singleton, kind: FactorKind::Singleton, is_open: true }
    }

    pub fn glue() -> FactorMap {
        FactorMap {
            source: Space::Compactification,
            target: Space::Compactification,
            kind: FactorKind::Glue,
            is_open: false,
        }
    }

    /// `proj:<n>:<k>`, `singleton:<space>` or `glue`.
    pub fn parse(s: &str) -> Result<FactorMap> {
        let s = s.trim();
        if s == "glue" {
            return Ok(FactorMap::glue());
        }
        if let Some(rest) = s.strip_prefix("singleton:") {
            return Ok(FactorMap::singleton(&Space::parse(rest)?));
        }
        if let Some(rest) = s.strip_prefix("proj:") {
            let nums: Vec<&str> = rest.split(':').collect();
            if let [n, k] = nums[..] {
                let n = n.parse().map_err(|_| Error::Parse(format!("bad arity `{n}`")))?;
                let k = k.parse().map_err(|_| Error::Parse(format!("bad arity `{k}`")))?;
                return FactorMap::projection(n, k);
            }
        }
        Err(Error::Parse(format!("unknown factor `{s}`")))
    }

    fn check_source(&self, x: &NamedPoint) -> Result<()> {
        self.source.check_point(x)
    }

    pub fn point_map(&self, x: &NamedPoint) -> Result<NamedPoint> {
        self.check_source(x)?;
        Ok(match (&self.kind, x) {
            (FactorKind::Projection { k, .. }, NamedPoint::Product(cs)) => NamedPoint::Product(cs[..*k].to_vec()),
            (FactorKind::Singleton, _) => NamedPoint::Singleton,
            (FactorKind::Glue, NamedPoint::Compact(CompactPoint::Iso(0))) => NamedPoint::Compact(CompactPoint::Limit),
            (FactorKind::Glue, NamedPoint::Compact(CompactPoint::Iso(k))) => NamedPoint::Compact(CompactPoint::Iso(k - 1)),
            (FactorKind::Glue, _) => NamedPoint::Compact(CompactPoint::Limit),
            _ => unreachable!("checked source point"),
        })
    }

    /// `ρ`. For the glue factor only permutations fixing `0` are in the
    /// domain.
    pub fn group_map(&self, g: &GroupElement) -> Result<GroupElement> {
        if !g.acts_on(&self.source) {
            return Err(Error::SpaceMismatch { expected: self.source.to_string(), found: g.to_string() });
        }
        Ok(match (&self.kind, g) {
            (_, GroupElement::Identity) | (FactorKind::Singleton, _) => GroupElement::Identity,
            (FactorKind::Projection { k, .. }, GroupElement::ProductAuto(gs)) => {
                if gs[..*k].iter().all(|g| g.is_identity()) {
                    GroupElement::Identity
                } else {
                    GroupElement::ProductAuto(gs[..*k].to_vec())
                }
            }
            (FactorKind::Glue, GroupElement::FinSuppPerm(m)) => {
                if m.contains_key(&0) {
                    return Err(Error::InvalidArgument(format!("{g} moves 0; glue is equivariant only for its stabiliser")));
                }
                GroupElement::FinSuppPerm(m.iter().map(|(a, b)| (a - 1, b - 1)).collect())
            }
            _ => return Err(Error::Unsupported(format!("{self} cannot transport {g}"))),
        })
    }

    pub fn set_preimage(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        s.try_same_space(&SymbolicSet::empty(&self.target))?;
        Ok(match &self.kind {
            FactorKind::Projection { n, .. } => {
                SymbolicSet::from_box_set(&self.source, s.as_boxes().expect("box set").extend(*n))
            }
            FactorKind::Singleton if s.is_empty() => SymbolicSet::empty(&self.source),
            FactorKind::Singleton => SymbolicSet::full(&self.source),
            FactorKind::Glue => {
                let c = s.as_compact().expect("compact set");
                let mut iso = c.iso.map(|k| k + 1);
                if c.limit {
                    iso = CompactSet { iso, limit: false }.union(&CompactSet::points(&[CompactPoint::Iso(0)])).iso;
                }
                SymbolicSet::from_compact(CompactSet { iso, limit: c.limit })
            }
        })
    }

    pub fn clopen_preimage(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        if !s.is_clopen() {
            return Err(Error::InvalidArgument(format!("{s} is not clopen")));
        }
        self.set_preimage(s)
    }

    pub fn image_set(&self, s: &SymbolicSet) -> Result<SymbolicSet> {
        s.try_same_space(&SymbolicSet::empty(&self.source))?;
        Ok(match &self.kind {
            FactorKind::Projection { k, .. } => {
                SymbolicSet::from_box_set(&self.target, s.as_boxes().expect("box set").project(*k))
            }
            FactorKind::Singleton if s.is_empty() => SymbolicSet::empty(&self.target),
            FactorKind::Singleton => SymbolicSet::full(&self.target),
            FactorKind::Glue => {
                let c = s.as_compact().expect("compact set");
                SymbolicSet::from_compact(CompactSet { iso: shift_down(&c.iso), limit: c.limit || c.iso.contains(0) })
            }
        })
    }

    /// Whether the image of `s` is open; `s` should be open.
    pub fn image_is_open(&self, s: &SymbolicSet) -> Result<bool> {
        Ok(self.image_set(s)?.is_open())
    }

    /// `π⁻¹P`, whose entourage is `(π×π)⁻¹[W_P]`.
    pub fn pullback_partition(&self, p: &Partition) -> Result<Partition> {
        if p.space() != &self.target {
            return Err(Error::SpaceMismatch { expected: self.target.to_string(), found: p.space().to_string() });
        }
        if let (FactorKind::Projection { n, .. }, Some(axes)) = (&self.kind, p.grid_axes()) {
            let whole = self.source.line().expect("line space").0.whole();
            let mut axes = axes.to_vec();
            axes.resize(*n, vec![whole]);
            return Partition::from_grid(&self.source, axes);
        }
        let classes = p.classes().iter().map(|c| self.set_preimage(c)).collect::<Result<Vec<_>>>()?;
        Partition::from_classes(&self.source, classes)
    }

    fn transfer_action(&self, a: &Action) -> Result<Action> {
        Ok(match a {
            Action::Constant(c) => Action::Constant(self.point_map(c)?),
            Action::Apply(g) => Action::Apply(self.group_map(g)?),
            Action::DenseCodense { .. } => {
                return Err(Error::Unsupported("dense-codense maps have no transfer".into()));
            }
        })
    }

    /// `θ(f)`, the unique map with `θ(f)∘π = π∘f`, built region by region
    /// and checked on samples of height 2.
    pub fn transfer_map(&self, f: &PiecewiseMap) -> Result<PiecewiseMap> {
        if f.space() != &self.source {
            return Err(Error::SpaceMismatch { expected: self.source.to_string(), found: f.space().to_string() });
        }
        let name = format!("θ({})", f.name);
        if self.kind == FactorKind::Singleton {
            return Ok(PiecewiseMap::identity(&self.target).renamed(name));
        }
        let mut groups: Vec<(Action, SymbolicSet, Vec<usize>)> = Vec::new();
        for (i, p) in f.pieces().iter().enumerate() {
            let action = self.transfer_action(&p.action)?;
            let region = self.image_set(&p.region)?;
            match groups.iter_mut().find(|g| g.0 == action) {
                Some(g) => {
                    g.1 = g.1.union(&region);
                    g.2.push(i);
                }
                None => groups.push((action, region, vec![i])),
            }
        }
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let common = groups[a].1.intersect(&groups[b].1);
                if common.is_empty() {
                    continue;
                }
                let agree = match common.finite_points() {
                    Some(pts) => pts.iter().all(|y| {
                        let ya = act(&self.target, &groups[a].0, y);
                        ya.is_ok() && ya.ok() == act(&self.target, &groups[b].0, y).ok()
                    }),
                    None => false,
                };
                if !agree {
                    return Err(Error::Incoherent(format!(
                        "{}: pieces {:?} and {:?} project onto overlapping regions with different actions ({} vs {}) on {common}",
                        f.name, groups[a].2, groups[b].2, groups[a].0, groups[b].0
                    )));
                }
                groups[b].1 = groups[b].1.difference(&common);
            }
        }
        let pieces = groups
            .into_iter()
            .filter(|g| !g.1.is_empty())
            .map(|(action, region, _)| Piece { region, action })
            .collect();
        let theta = PiecewiseMap::new(&self.target, name, pieces)?;
        if let Some((x, lhs, rhs)) = self.transfer_counterexample(f, &theta, 2)? {
            return Err(Error::Incoherent(format!("{}: θ(f)(π({x})) = {lhs} but π(f({x})) = {rhs}", f.name)));
        }
        Ok(theta)
    }

    /// First sample `x` with `θ(f)(π x) ≠ π(f x)`.
    pub fn transfer_counterexample(
        &self,
        f: &PiecewiseMap,
        theta: &PiecewiseMap,
        height: u64,
    ) -> Result<Option<(NamedPoint, NamedPoint, NamedPoint)>> {
        for x in self.source.samples(height) {
            let lhs = theta.apply_map(&self.point_map(&x)?)?;
            let rhs = self.point_map(&f.apply_map(&x)?)?;
            if lhs != rhs {
                return Ok(Some((x, lhs, rhs)));
            }
        }
        Ok(None)
    }

    /// First `(g, x)` with `ρ(g)(π x) ≠ π(g x)`; elements outside the
    /// domain of `ρ` are skipped.
    pub fn equivariance_counterexample(&self, group: &[GroupElement], height: u64) -> Result<Option<(GroupElement, NamedPoint)>> {
        for g in group {
            let Ok(rg) = self.group_map(g) else { continue };
            for x in self.source.samples(height) {
                if rg.apply(&self.target, &self.point_map(&x)?)? != self.point_map(&g.apply(&self.source, &x)?)? {
                    return Ok(Some((g.clone(), x)));
                }
            }
        }
        Ok(None)
    }
}

fn act(space: &Space, a: &Action, y: &NamedPoint) -> Result<NamedPoint> {
    match a {
        Action::Constant(c) => Ok(c.clone()),
        Action::Apply(g) => g.apply(space, y),
        Action::DenseCodense { .. } => Err(Error::Unsupported("dense-codense".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageComparison {
    pub alpha: usize,
    /// `(π⁻¹D)^α` for `f` and `π⁻¹P`.
    pub upstairs: String,
    /// `π⁻¹[D^α]` for `θ(f)` and `P`.
    pub pulled_back: String,
    pub inclusion: bool,
    pub equality: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorReport {
    pub factor: String,
    pub map: String,
    pub transferred: String,
    pub is_open: bool,
    pub stages: Vec<StageComparison>,
    pub beta_upstairs: RankValue,
    pub beta_downstairs: RankValue,
    pub rank_le: bool,
    pub rank_eq: bool,
}

impl FactorReport {
    pub fn strict_somewhere(&self) -> bool {
        self.stages.iter().any(|s| s.inclusion && !s.equality)
    }

    /// Inclusion and the rank bound always; equalities when `π` is open.
    pub fn passed(&self) -> bool {
        let base = self.rank_le && self.stages.iter().all(|s| s.inclusion);
        base && (!self.is_open || (self.rank_eq && self.stages.iter().all(|s| s.equality)))
    }
}

fn stage(chain: &DerivativeChain, alpha: usize) -> &SymbolicSet {
    chain.stages.get(alpha).unwrap_or_else(|| chain.stages.last().expect("nonempty chain"))
}

/// Compares `(π⁻¹D)^α_{f,π⁻¹P}` with `π⁻¹[D^α_{θ(f),P}]` for `α ≤ alpha_max`
/// and `β(f, π⁻¹P)` with `β(θ(f), P)`.
pub fn check_factor_lemmas(
    factor: &FactorMap,
    f: &PiecewiseMap,
    d: &SymbolicSet,
    p: &Partition,
    alpha_max: usize,
    cap: u64,
) -> Result<FactorReport> {
    if !d.is_closed() {
        return Err(Error::InvalidArgument(format!("{d} is not closed")));
    }
    let theta = factor.transfer_map(f)?;
    let up_p = factor.pullback_partition(p)?;
    let up = iterate_derivative(&factor.set_preimage(d)?, f, &up_p, cap)?;
    let down = iterate_derivative(d, &theta, p, cap)?;
    let mut stages = Vec::new();
    for alpha in 0..=alpha_max {
        let lhs = stage(&up, alpha);
        let rhs = factor.set_preimage(stage(&down, alpha))?;
        stages.push(StageComparison {
            alpha,
            upstairs: lhs.to_string(),
            pulled_back: rhs.to_string(),
            inclusion: lhs.is_subset(&rhs),
            equality: *lhs == rhs,
        });
    }
    let beta_upstairs = beta_of_pair(f, &up_p, cap)?;
    let beta_downstairs = beta_of_pair(&theta, p, cap)?;
    Ok(FactorReport {
        factor: factor.to_string(),
        map: f.name.clone(),
        transferred: theta.name.clone(),
        is_open: factor.is_open,
        stages,
        rank_le: beta_upstairs <= beta_downstairs,
        rank_eq: beta_upstairs == beta_downstairs,
        beta_upstairs,
        beta_downstairs,
    })
}

/// Test map for the glue factor: `{i0, lim} ↦ i1`, identity elsewhere.
pub fn glue_test_map() -> PiecewiseMap {
    let s = Space::Compactification;
    let head = CompactSet { iso: IsoSet::Finite([0].into()), limit: true };
    let tail = CompactSet { iso: IsoSet::Cofinite([0].into()), limit: false };
    PiecewiseMap::new(
        &s,
        "glue-test",
        vec![
            Piece { region: SymbolicSet::from_compact(head), action: Action::Constant(NamedPoint::Compact(CompactPoint::Iso(1))) },
            Piece { region: SymbolicSet::from_compact(tail), action: Action::Apply(GroupElement::Identity) },
        ],
    )
    .expect("valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_system, shift_limit};

    #[test]
    fn projection_basics() {
        let f = FactorMap::projection(2, 1).unwrap();
        let s = Space::MultiOrder(2);
        let x = s.parse_point("(-inf, 3)").unwrap();
        assert_eq!(f.point_map(&x).unwrap().to_string(), "(-inf)");
        assert!(FactorMap::projection(2, 2).is_err());
        let t = Space::MultiOrder(1);
        let b = crate::space::literal::parse_set(&t, "[-1, 2)").unwrap();
        let pre = f.set_preimage(&b).unwrap();
        assert!(pre.contains(&s.parse_point("(0, 7)").unwrap()));
        let open = crate::space::literal::parse_set(&s, "[0+,1-]x[2+,3-]").unwrap();
        let img = f.image_set(&open).unwrap();
        assert_eq!(img, crate::space::literal::parse_set(&t, "[0+,1-]").unwrap());
        assert!(img.is_clopen());
        assert_eq!(&open.as_boxes().unwrap().project(1), img.as_boxes().unwrap());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["proj:3:1", "singleton:cutline", "glue"] {
            assert_eq!(FactorMap::parse(s).unwrap().to_string(), s);
        }
        assert!(FactorMap::parse("proj:1:1").is_err());
        assert!(FactorMap::parse("proj:x").is_err());
    }

    #[test]
    fn shift_limit_transfers_to_shift_limit() {
        let f = FactorMap::projection(2, 1).unwrap();
        let theta = f.transfer_map(&shift_limit(2)).unwrap();
        let expect = shift_limit(1);
        for y in Space::MultiOrder(1).samples(4) {
            assert_eq!(theta.apply_map(&y).unwrap(), expect.apply_map(&y).unwrap());
        }
        assert_eq!(f.transfer_counterexample(&shift_limit(2), &theta, 4).unwrap(), None);
        let id = f.transfer_map(&PiecewiseMap::identity(&Space::MultiOrder(2))).unwrap();
        assert!(id.pieces().iter().all(|p| p.action == Action::Apply(GroupElement::Identity)));
    }

    #[test]
    fn incoherent_maps_are_rejected() {
        let s = Space::MultiOrder(2);
        let lower = crate::space::literal::parse_set(&s, "[-inf,+inf]x[-inf,0]").unwrap();
        let g = GroupElement::parse(&s, "plauto:0=1;id").unwrap();
        let f = PiecewiseMap::new(
            &s,
            "split",
            vec![
                Piece { region: lower.clone(), action: Action::Apply(GroupElement::Identity) },
                Piece { region: lower.complement(), action: Action::Apply(g) },
            ],
        )
        .unwrap();
        let err = FactorMap::projection(2, 1).unwrap().transfer_map(&f).unwrap_err();
        assert!(matches!(err, Error::Incoherent(_)), "{err}");
    }

    #[test]
    fn projection_lemmas_hold_with_equality() {
        let f = FactorMap::projection(3, 1).unwrap();
        let t = Space::MultiOrder(1);
        let p = Partition::canonical(&t, 1).unwrap();
        let r = check_factor_lemmas(&f, &shift_limit(3), &SymbolicSet::full(&t), &p, 3, 64).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.beta_upstairs, RankValue::Finite(1));
        assert_eq!(r.beta_downstairs, RankValue::Finite(1));
        assert!(r.stages.iter().all(|s| s.equality));
    }

    #[test]
    fn singleton_factor_is_degenerate() {
        let s = build_system("dlo").unwrap();
        let f = FactorMap::singleton(&s.space);
        let p = Partition::trivial(&Space::Singleton);
        assert_eq!(f.pullback_partition(&p).unwrap(), Partition::trivial(&s.space));
        for m in s.maps() {
            let r = check_factor_lemmas(&f, m, &SymbolicSet::full(&Space::Singleton), &p, 2, 64).unwrap();
            assert!(r.passed());
            assert_eq!(r.beta_upstairs, RankValue::Finite(0));
            assert_eq!(r.beta_downstairs, RankValue::Finite(0));
        }
    }

    #[test]
    fn glue_is_not_open_and_shows_strict_inclusion() {
        let g = FactorMap::glue();
        let s = Space::Compactification;
        let i0 = SymbolicSet::points(&s, &[NamedPoint::Compact(CompactPoint::Iso(0))]).unwrap();
        assert!(i0.is_open());
        assert!(!g.image_is_open(&i0).unwrap());
        let acf = build_system("acf").unwrap();
        assert_eq!(g.equivariance_counterexample(&acf.group, 6).unwrap(), None);
        let moves = GroupElement::parse(&s, "perm:1-2,3-4").unwrap();
        assert_eq!(g.equivariance_counterexample(&[moves], 6).unwrap(), None);
        let p = Partition::canonical(&s, 1).unwrap();
        let r = check_factor_lemmas(&g, &glue_test_map(), &SymbolicSet::full(&s), &p, 3, 64).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.strict_somewhere());
        assert_eq!(r.stages[1].upstairs, "{lim}");
        assert_eq!(r.stages[1].pulled_back, "{i0} ∪ {lim}");
    }

    #[test]
    fn preimages_of_clopens_are_clopen() {
        let g = FactorMap::glue();
        let p = Partition::canonical(&Space::Compactification, 3).unwrap();
        for c in p.classes() {
            assert!(g.clopen_preimage(&c).unwrap().is_clopen());
        }
    }
}
