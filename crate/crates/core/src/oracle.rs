//! Brute-force oscillation search over named sample points.
//!
//! A positive answer is a certificate; a negative one only says that no
//! witness of bounded height exists, except on finite spaces where the
//! search is exhaustive.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::engine::derivative;
use crate::error::Result;
use crate::maps::PiecewiseMap;
use crate::space::{CutPoint, NamedPoint, Partition, Space, SymbolicSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// `v1, v2 ∈ atom ∩ Y` with images in different classes.
    Witnessed { v1: NamedPoint, v2: NamedPoint, atom: String },
    NoWitnessFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelVerdict {
    pub level: u32,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OscillationReport {
    pub point: NamedPoint,
    pub height: u64,
    pub levels: Vec<LevelVerdict>,
}

impl OscillationReport {
    pub fn witnessed_everywhere(&self) -> bool {
        self.levels.iter().all(|l| matches!(l.verdict, Verdict::Witnessed { .. }))
    }
}

/// Sample coordinates of height at most `height` inside `iv`, plus its
/// endpoints.
fn axis_candidates(base: &[CutPoint], iv: &crate::space::Interval) -> Vec<CutPoint> {
    let mut out: BTreeSet<CutPoint> = base.iter().filter(|c| iv.contains(c)).cloned().collect();
    for e in iv.endpoints() {
        if iv.contains(e) {
            out.insert(e.clone());
        }
    }
    out.into_iter().collect()
}

fn cut_base(space: &Space, height: u64) -> Vec<CutPoint> {
    let line = match space {
        Space::Cyclic => Space::Cyclic,
        _ => Space::CutLine,
    };
    line.samples(height).iter().map(|x| line.coords(x).expect("line point").remove(0)).collect()
}

/// Named points of bounded height in `atom ∩ Y`, ordered by height and
/// then by position.
pub fn candidates(space: &Space, atom: &SymbolicSet, y: &SymbolicSet, height: u64) -> Vec<NamedPoint> {
    let region = atom.intersect(y);
    let mut out: Vec<NamedPoint> = match region.boxes() {
        Some(boxes) => {
            let base = cut_base(space, height);
            let mut pts = BTreeSet::new();
            for b in boxes {
                let axes: Vec<Vec<CutPoint>> = b.iter().map(|iv| axis_candidates(&base, iv)).collect();
                let mut tuples: Vec<Vec<CutPoint>> = vec![Vec::new()];
                for axis in &axes {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            axis.iter().map(move |c| {
                                let mut t = t.clone();
                                t.push(c.clone());
                                t
                            })
                        })
                        .collect();
                }
                pts.extend(tuples.into_iter().map(|t| space.from_coords(t)));
            }
            pts.into_iter().collect()
        }
        None => {
            let mut pts: BTreeSet<NamedPoint> = space.samples(height).into_iter().filter(|x| region.contains(x)).collect();
            pts.extend(region.finite_points().unwrap_or_default());
            pts.extend(region.witness());
            pts.into_iter().collect()
        }
    };
    out.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| a.cmp(b)));
    out
}

/// First two candidates whose images fall in different classes, as
/// `(first, class of first, first of another class)`.
type AtomScan = Option<(NamedPoint, usize, Option<(NamedPoint, usize)>)>;

fn scan_atom(f: &PiecewiseMap, p: &Partition, pts: &[NamedPoint]) -> Result<AtomScan> {
    let mut first: Option<(NamedPoint, usize)> = None;
    for v in pts {
        let c = p.class_of(&f.apply_map(v)?)?;
        match &first {
            None => first = Some((v.clone(), c)),
            Some((w, c0)) if *c0 != c => return Ok(Some((w.clone(), *c0, Some((v.clone(), c))))),
            Some(_) => {}
        }
    }
    Ok(first.map(|(w, c)| (w, c, None)))
}

/// `v1 = x`, `v2` = first candidate whose image is separated from `f(x)`.
fn verdict_from_scan(f: &PiecewiseMap, p: &Partition, x: &NamedPoint, scan: &AtomScan, atom: &SymbolicSet) -> Result<Verdict> {
    let cx = p.class_of(&f.apply_map(x)?)?;
    let v2 = match scan {
        Some((w, c0, _)) if *c0 != cx => Some(w.clone()),
        Some((_, _, Some((w, _)))) => Some(w.clone()),
        _ => None,
    };
    Ok(match v2 {
        Some(v2) => Verdict::Witnessed { v1: x.clone(), v2, atom: atom.to_string() },
        None => Verdict::NoWitnessFound,
    })
}

/// Searches each canonical neighbourhood of `x` of level `1..=depth`,
/// intersected with `Y`, for a point whose image is `P`-separated from
/// `f(x)`.
pub fn witness_search(
    f: &PiecewiseMap,
    p: &Partition,
    x: &NamedPoint,
    y: &SymbolicSet,
    height: u64,
    depth: u32,
) -> Result<OscillationReport> {
    let space = f.space();
    let mut levels = Vec::new();
    for l in 1..=depth {
        let nb = Partition::canonical(space, l)?;
        let atom = nb.class_set(nb.class_of(x)?);
        let pts = candidates(space, &atom, y, height);
        let scan = scan_atom(f, p, &pts)?;
        levels.push(LevelVerdict { level: l, verdict: verdict_from_scan(f, p, x, &scan, &atom)? });
    }
    Ok(OscillationReport { point: x.clone(), height, levels })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub checked: usize,
    pub in_derivative: usize,
    /// Points of the derivative without a witness at some level.
    pub hard_failures: Vec<String>,
    /// Points outside the derivative that still had witnesses at every level.
    pub unknown: usize,
    /// Points outside the derivative refuted at some level.
    pub refuted: usize,
}

/// Checks `derivative(Y, f, P)` against [`witness_search`] on every
/// sample of `Y`.
pub fn consistency_check(f: &PiecewiseMap, p: &Partition, y: &SymbolicSet, height: u64, depth: u32) -> Result<ConsistencyReport> {
    let space = f.space();
    let d = derivative(y, f, p)?;
    let mut report = ConsistencyReport::default();
    let neighbourhoods: Vec<Partition> = (1..=depth).map(|l| Partition::canonical(space, l)).collect::<Result<_>>()?;
    let mut memo: Vec<HashMap<usize, (SymbolicSet, AtomScan)>> = vec![HashMap::new(); depth as usize];
    for x in space.samples(height) {
        if !y.contains(&x) {
            continue;
        }
        report.checked += 1;
        let inside = d.contains(&x);
        report.in_derivative += inside as usize;
        let mut all = true;
        for (li, nb) in neighbourhoods.iter().enumerate() {
            let idx = nb.class_of(&x)?;
            if let std::collections::hash_map::Entry::Vacant(e) = memo[li].entry(idx) {
                let atom = nb.class_set(idx);
                let scan = scan_atom(f, p, &candidates(space, &atom, y, height))?;
                e.insert((atom, scan));
            }
            let (atom, scan) = &memo[li][&idx];
            if verdict_from_scan(f, p, &x, scan, atom)? == Verdict::NoWitnessFound {
                all = false;
                if inside {
                    report.hard_failures.push(format!("{}: {x} at neighbourhood level {}", f.name, li + 1));
                }
                break;
            }
        }
        if !inside {
            if all {
                report.unknown += 1;
            } else {
                report.refuted += 1;
            }
        }
    }
    Ok(report)
}

/// The derivative by definition on a finite discrete space: `y` is kept
/// iff every subset containing `y` holds two points of `Y` with separated
/// images.
pub fn brute_force_derivative(y: &SymbolicSet, f: &PiecewiseMap, p: &Partition) -> Result<SymbolicSet> {
    let space = f.space();
    let Space::Finite(fs) = space else {
        return Err(crate::error::Error::Unsupported(format!("{space} is not finite")));
    };
    let n = fs.points.len();
    if n > 16 {
        return Err(crate::error::Error::Unsupported("brute force is limited to 16 points".into()));
    }
    let members: Vec<bool> = (0..n).map(|i| y.contains(&NamedPoint::Finite(i))).collect();
    let classes: Vec<usize> = (0..n).map(|i| p.class_of(&f.apply_map(&NamedPoint::Finite(i))?)).collect::<Result<_>>()?;
    let mut keep = Vec::new();
    for i in (0..n).filter(|i| members[*i]) {
        let every = (0u32..1 << n).filter(|m| m >> i & 1 == 1).all(|m| {
            let cs: BTreeSet<usize> = (0..n).filter(|j| m >> j & 1 == 1 && members[*j]).map(|j| classes[j]).collect();
            cs.len() >= 2
        });
        if every {
            keep.push(NamedPoint::Finite(i));
        }
    }
    SymbolicSet::points(space, &keep)
}
