//! Example systems with their Ellis-element catalogs.

mod finite;

use std::fmt;
use std::path::Path;

use crate::engine::RankValue;
use crate::error::{parse_err, Error, Result};
use crate::maps::{Action, CircleMap, GroupElement, Piece, PiecewiseMap, PlMap};
use crate::rational::Rational;
use crate::space::boxes::BoxSet;
use crate::space::compact::{CompactSet, IsoSet};
use crate::space::literal::parse_set;
use crate::space::{CompactPoint, CutPoint, Interval, Line, NamedPoint, Space, SymbolicSet};

pub use finite::{load_finite_system, parse_finite_system};

/// Members of a net of group elements, indexed by `n ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Net {
    /// PL maps fixing `(-∞, 0]` with slope `n` on `[0, 1]`.
    Stretch,
    /// PL maps contracting `[-n, n]` onto `[-1/n, 1/n]`.
    Squeeze,
    /// Translation of every coordinate by `n`.
    Shift,
    /// Circle maps fixing `0` and sending `1/n` to `1 - 1/n`.
    CircleSqueeze,
    /// Swaps of `i_k` and `i_{k+n}` for `m ≤ k < m + n`.
    Escape { keep: u64 },
}

impl Net {
    pub fn member(&self, space: &Space, n: u64) -> GroupElement {
        let n = n.max(2) as i64;
        let r = |p: i64, q: i64| Rational::new(p, q);
        match self {
            Net::Stretch => GroupElement::PlAuto(PlMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(n, 1))]).expect("valid")),
            Net::Squeeze => GroupElement::PlAuto(PlMap::new(vec![(r(-n, 1), r(-1, n)), (r(n, 1), r(1, n))]).expect("valid")),
            Net::Shift => GroupElement::shift(space, r(n, 1)).expect("line space"),
            Net::CircleSqueeze => GroupElement::CyclicPlAuto(
                CircleMap::new(vec![(r(0, 1), r(0, 1)), (r(1, n), r(n - 1, n))]).expect("valid"),
            ),
            Net::Escape { keep } => {
                let cycles: Vec<Vec<u64>> = (*keep..*keep + n as u64).map(|k| vec![k, k + n as u64]).collect();
                GroupElement::from_cycles(&cycles).expect("disjoint")
            }
        }
    }
}

impl fmt::Display for Net {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Net::Stretch => f.write_str("g_n = PL map 0=0,1=n"),
            Net::Squeeze => f.write_str("g_n = PL map -n=-1/n,n=1/n"),
            Net::Shift => f.write_str("g_n = translation of every coordinate by n"),
            Net::CircleSqueeze => f.write_str("g_n = circle map 0=0,1/n=1-1/n"),
            Net::Escape { keep } => write!(f, "g_n = product of swaps (k k+n) for {keep} <= k < {keep}+n"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogMap {
    pub map: PiecewiseMap,
    pub expected_beta: Option<RankValue>,
    pub net: Option<Net>,
}

#[derive(Clone, Debug)]
pub struct SystemDescriptor {
    pub spec: String,
    pub space: Space,
    pub group_description: String,
    /// Sample group elements, used for conjugation checks.
    pub group: Vec<GroupElement>,
    pub catalog: Vec<CatalogMap>,
    /// Expected `β(X, G)` over the maps claimed to be Ellis elements.
    pub expected_beta: Option<RankValue>,
    /// Whether `cb_point_rank` knows this space.
    pub cb_oracle: bool,
}

impl SystemDescriptor {
    pub fn maps(&self) -> impl Iterator<Item = &PiecewiseMap> {
        self.catalog.iter().map(|c| &c.map)
    }

    /// The maps claimed to lie in the Ellis semigroup.
    pub fn ellis_maps(&self) -> Vec<PiecewiseMap> {
        self.maps().filter(|m| m.claimed_in_ellis).cloned().collect()
    }

    pub fn find(&self, name: &str) -> Result<&CatalogMap> {
        self.catalog
            .iter()
            .find(|c| c.map.name == name)
            .ok_or_else(|| Error::InvalidArgument(format!("no map `{name}` in system {}", self.spec)))
    }

    /// A catalog map by name, or a group element given as `plauto:…`,
    /// `perm:…` or `flip:…`.
    pub fn resolve_map(&self, name: &str) -> Result<PiecewiseMap> {
        if let Ok(c) = self.find(name) {
            return Ok(c.map.clone());
        }
        if ["plauto:", "perm:", "flip:"].iter().any(|p| name.starts_with(p)) {
            let g = GroupElement::parse(&self.space, name)?;
            return PiecewiseMap::from_group(&self.space, name, g);
        }
        Err(Error::InvalidArgument(format!("no map `{name}` in system {}", self.spec)))
    }
}

fn entry(map: PiecewiseMap, expected: u64) -> CatalogMap {
    CatalogMap { map, expected_beta: Some(RankValue::Finite(expected)), net: None }
}

fn group_entry(space: &Space, name: &str, g: GroupElement) -> CatalogMap {
    entry(PiecewiseMap::from_group(space, name, g).expect("group element acts"), 0)
}

fn limit_entry(map: PiecewiseMap, expected: u64, net: Net) -> CatalogMap {
    let map = map.in_ellis(net.to_string());
    CatalogMap { map, expected_beta: Some(RankValue::Finite(expected)), net: Some(net) }
}

fn piece(space: &Space, region: &str, action: Action) -> Piece {
    Piece { region: parse_set(space, region).expect("catalog literal"), action }
}

fn cut(s: &str) -> NamedPoint {
    NamedPoint::Cut(CutPoint::parse(s).expect("catalog point"))
}

/// Identity on `(-∞, 0+]`, `+∞` above.
pub fn stretch_limit() -> PiecewiseMap {
    let c = Space::CutLine;
    PiecewiseMap::new(
        &c,
        "stretch-limit",
        vec![
            piece(&c, "[-inf,0+]", Action::Apply(GroupElement::Identity)),
            piece(&c, "(0+,+inf]", Action::Constant(cut("+inf"))),
        ],
    )
    .expect("valid")
}

/// Collapses each open half-line onto the side of `0` it approaches from.
pub fn squeeze_limit() -> PiecewiseMap {
    let c = Space::CutLine;
    PiecewiseMap::new(
        &c,
        "squeeze-limit",
        vec![
            piece(&c, "{-inf}", Action::Constant(cut("-inf"))),
            piece(&c, "(-inf,0-]", Action::Constant(cut("0-"))),
            piece(&c, "{0}", Action::Constant(cut("0"))),
            piece(&c, "[0+,+inf)", Action::Constant(cut("0+"))),
            piece(&c, "{+inf}", Action::Constant(cut("+inf"))),
        ],
    )
    .expect("valid")
}

/// Sends a point to the corner `(±∞, …)` with `-∞` exactly in the
/// coordinates where the point is at `-∞`.
pub fn shift_limit(n: usize) -> PiecewiseMap {
    let space = Space::MultiOrder(n);
    let line = Line::cut();
    let bottom = Interval::point(CutPoint::MinusInf);
    let rest = Interval::new(CutPoint::MinusInf, false, CutPoint::PlusInf, true).expect("nonempty");
    let pieces = (0..1u64 << n)
        .map(|mask| {
            let low = |d: usize| mask >> (n - 1 - d) & 1 == 1;
            let region: Vec<Interval> = (0..n).map(|d| if low(d) { bottom.clone() } else { rest.clone() }).collect();
            let corner: Vec<CutPoint> =
                (0..n).map(|d| if low(d) { CutPoint::MinusInf } else { CutPoint::PlusInf }).collect();
            Piece {
                region: SymbolicSet::from_box_set(&space, BoxSet::single_box(line.clone(), region)),
                action: Action::Constant(NamedPoint::Product(corner)),
            }
        })
        .collect();
    PiecewiseMap::new(&space, "shift-limit", pieces).expect("valid")
}

/// Fixes `0` and `0+` and sends the rest of the circle to `0-`.
pub fn cyclic_collapse() -> PiecewiseMap {
    let y = Space::Cyclic;
    let p = |s: &str| y.parse_point(s).expect("catalog point");
    PiecewiseMap::new(
        &y,
        "cyclic-collapse",
        vec![
            piece(&y, "{0}", Action::Constant(p("0"))),
            piece(&y, "{0+}", Action::Constant(p("0+"))),
            piece(&y, "(0+,0-]", Action::Constant(p("0-"))),
        ],
    )
    .expect("valid")
}

/// `|0` on eventually-zero sequences, `|1` elsewhere.
pub fn tail_map() -> PiecewiseMap {
    let y = Space::Cylinder;
    let action = Action::DenseCodense { c0: y.parse_point("|0").expect("point"), c1: y.parse_point("|1").expect("point") };
    PiecewiseMap::new(&y, "tail-map", vec![Piece { region: SymbolicSet::full(&y), action }]).expect("valid")
}

/// Fixes `i_0, …, i_{keep-1}` and the limit, sends every other point to
/// the limit.
pub fn collapse(keep: u64) -> PiecewiseMap {
    let k = Space::Compactification;
    let kept: std::collections::BTreeSet<u64> = (0..keep).collect();
    let mut pieces = Vec::new();
    if keep > 0 {
        pieces.push(Piece {
            region: SymbolicSet::from_compact(CompactSet { iso: IsoSet::Finite(kept.clone()), limit: false }),
            action: Action::Apply(GroupElement::Identity),
        });
    }
    pieces.push(Piece {
        region: SymbolicSet::from_compact(CompactSet { iso: IsoSet::Cofinite(kept), limit: true }),
        action: Action::Constant(NamedPoint::Compact(CompactPoint::Limit)),
    });
    PiecewiseMap::new(&k, format!("collapse:{keep}"), pieces).expect("valid")
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn acf() -> SystemDescriptor {
    let k = Space::Compactification;
    let perm = |s: &str| GroupElement::parse(&k, s).expect("catalog permutation");
    let group = vec![perm("perm:0-1"), perm("perm:0-1-2"), perm("perm:1-3")];
    let catalog = vec![
        entry(PiecewiseMap::identity(&k), 0),
        group_entry(&k, "perm:0-1", perm("perm:0-1")),
        group_entry(&k, "perm:0-2-1", perm("perm:0-2-1")),
        limit_entry(collapse(0), 0, Net::Escape { keep: 0 }),
        limit_entry(collapse(2), 0, Net::Escape { keep: 2 }),
    ];
    SystemDescriptor {
        spec: "acf".into(),
        space: k,
        group_description: "finite-support permutations of the isolated points".into(),
        group,
        catalog,
        expected_beta: Some(RankValue::Finite(0)),
        cb_oracle: true,
    }
}

fn dlo() -> SystemDescriptor {
    let c = Space::CutLine;
    let pl = |s: &str| GroupElement::pl(s).expect("catalog PL map");
    let group = vec![pl("0=1"), pl("0=0,1=2"), pl("-1=-1/2,1=3")];
    let catalog = vec![
        entry(PiecewiseMap::identity(&c), 0),
        group_entry(&c, "plauto:0=0,1=2", pl("0=0,1=2")),
        group_entry(&c, "plauto:0=1/2", pl("0=1/2")),
        limit_entry(stretch_limit(), 1, Net::Stretch),
        limit_entry(squeeze_limit(), 1, Net::Squeeze),
    ];
    SystemDescriptor {
        spec: "dlo".into(),
        space: c,
        group_description: "PL automorphisms of (Q, <) with rational breakpoints".into(),
        group,
        catalog,
        expected_beta: Some(RankValue::Finite(1)),
        cb_oracle: true,
    }
}

fn cyclic() -> SystemDescriptor {
    let y = Space::Cyclic;
    let circ = |pts: Vec<(Rational, Rational)>| GroupElement::CyclicPlAuto(CircleMap::new(pts).expect("valid"));
    let rot = |t: Rational| GroupElement::CyclicPlAuto(CircleMap::rotation(t));
    let bent = circ(vec![(r(0, 1), r(0, 1)), (r(1, 2), r(3, 4))]);
    let group = vec![rot(r(1, 2)), rot(r(1, 3)), bent.clone()];
    let catalog = vec![
        entry(PiecewiseMap::identity(&y), 0),
        group_entry(&y, "rotation:1/3", rot(r(1, 3))),
        group_entry(&y, "plauto:0=0,1/2=3/4", bent),
        limit_entry(cyclic_collapse(), 1, Net::CircleSqueeze),
    ];
    SystemDescriptor {
        spec: "cyclic".into(),
        space: y,
        group_description: "orientation-preserving PL maps of Q/Z".into(),
        group,
        catalog,
        expected_beta: Some(RankValue::Finite(1)),
        cb_oracle: true,
    }
}

fn multiorder(n: usize) -> SystemDescriptor {
    let space = Space::MultiOrder(n);
    let shift = GroupElement::shift(&space, r(1, 1)).expect("line space");
    let mixed = GroupElement::ProductAuto(
        (0..n)
            .map(|d| if d % 2 == 0 { PlMap::new(vec![(r(0, 1), r(0, 1)), (r(1, 1), r(2, 1))]).expect("valid") } else { PlMap::translation(r(-1, 2)) })
            .collect(),
    );
    let catalog = vec![
        entry(PiecewiseMap::identity(&space), 0),
        group_entry(&space, "shift:1", shift.clone()),
        group_entry(&space, &format!("{mixed}"), mixed.clone()),
        limit_entry(shift_limit(n), n as u64, Net::Shift),
    ];
    SystemDescriptor {
        spec: format!("multiorder:{n}"),
        space,
        group_description: "coordinatewise PL automorphisms".into(),
        group: vec![shift, mixed],
        catalog,
        expected_beta: Some(RankValue::Finite(n as u64)),
        cb_oracle: true,
    }
}

fn cylinder() -> SystemDescriptor {
    let y = Space::Cylinder;
    let flip = |s: &str| GroupElement::parse(&Space::Cylinder, s).expect("catalog flip");
    let catalog = vec![
        entry(PiecewiseMap::identity(&y), 0),
        group_entry(&y, "flip:1", flip("flip:1")),
        CatalogMap { map: tail_map(), expected_beta: Some(RankValue::Infinite), net: None },
    ];
    SystemDescriptor {
        spec: "cylinder".into(),
        space: y,
        group_description: "flips of finitely many coordinates".into(),
        group: vec![flip("flip:1"), flip("flip:011")],
        catalog,
        expected_beta: None,
        cb_oracle: true,
    }
}

/// Builds `acf`, `dlo`, `cyclic`, `multiorder:<n>`, `cylinder` or
/// `finite:<path>`.
pub fn build_system(spec: &str) -> Result<SystemDescriptor> {
    let spec = spec.trim();
    match spec {
        "acf" => Ok(acf()),
        "dlo" => Ok(dlo()),
        "cyclic" => Ok(cyclic()),
        "cylinder" => Ok(cylinder()),
        _ => {
            if let Some(n) = spec.strip_prefix("multiorder:") {
                return match n.parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(multiorder(n)),
                    _ => Err(parse_err(format!("bad arity in `{spec}`"))),
                };
            }
            if let Some(path) = spec.strip_prefix("finite:") {
                return load_finite_system(Path::new(path));
            }
            Err(parse_err(format!("unknown system `{spec}`")))
        }
    }
}

/// Checks that the net members eventually agree with `f` up to the
/// level-`ℓ` atoms, for each sample: the last `tail` of the first `terms`
/// members must land in the atom of `f(x)`. Returns the offending sample.
pub fn check_net(c: &CatalogMap, height: u64, max_level: u32, terms: u64) -> Result<Option<(NamedPoint, u32)>> {
    let Some(net) = c.net else { return Ok(None) };
    let space = c.map.space();
    let members: Vec<GroupElement> = (terms - 4..=terms).map(|n| net.member(space, n)).collect();
    for l in 1..=max_level {
        let p = crate::space::Partition::canonical(space, l)?;
        for x in space.samples(height) {
            let target = p.class_of(&c.map.apply_map(&x)?)?;
            for g in &members {
                if p.class_of(&g.apply(space, &x)?)? != target {
                    return Ok(Some((x, l)));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogs_contain_identity() {
        for spec in ["acf", "dlo", "cyclic", "cylinder", "multiorder:1", "multiorder:3"] {
            let s = build_system(spec).unwrap();
            assert!(s.find("identity").is_ok(), "{spec}");
            assert!(!s.space.to_string().is_empty());
        }
        assert!(build_system("multiorder:0").is_err());
        assert!(build_system("torus").is_err());
    }

    #[test]
    fn shift_limit_values() {
        let f = shift_limit(2);
        let s = Space::MultiOrder(2);
        let x = s.parse_point("(-inf, 5)").unwrap();
        assert_eq!(f.apply_map(&x).unwrap().to_string(), "(-inf, +inf)");
        assert_eq!(f.pieces().len(), 4);
    }

    #[test]
    fn nets_converge() {
        for spec in ["acf", "dlo", "cyclic", "multiorder:2"] {
            let s = build_system(spec).unwrap();
            for c in &s.catalog {
                assert_eq!(check_net(c, 3, 3, 400).unwrap(), None, "{spec} {}", c.map.name);
            }
        }
    }

    #[test]
    fn stretch_net_escapes() {
        let c = Space::CutLine;
        let x = c.parse_point("7").unwrap();
        assert_eq!(stretch_limit().apply_map(&x).unwrap().to_string(), "+inf");
        let g = Net::Stretch.member(&c, 50);
        assert_eq!(g.apply(&c, &x).unwrap().to_string(), "56");
    }

    #[test]
    fn resolves_group_names() {
        let s = build_system("dlo").unwrap();
        let m = s.resolve_map("plauto:0=0,1=3").unwrap();
        assert!(m.is_apply_only());
        assert!(s.resolve_map("nope").is_err());
        let k = build_system("acf").unwrap();
        assert!(k.resolve_map("perm:0-5").is_ok());
    }
}
