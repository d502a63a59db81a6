//! Property suites run over a grid of systems, catalog maps, partition
//! levels and named sample points.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{build_system, parse_finite_system, SystemDescriptor};
use crate::engine::{
    beta_of_map, cb_point_rank, derivative, derivative_pairwise, is_continuous, iterate_derivative,
    oscillation_directions, DerivativeChain, RankValue, Termination,
};
use crate::error::{Error, Result};
use crate::factor::{check_factor_lemmas, glue_test_map, FactorMap};
use crate::maps::PiecewiseMap;
use crate::oracle::{brute_force_derivative, consistency_check};
use crate::space::{NamedPoint, Partition, Space, SymbolicSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Monotonicity,
    Conjugation,
    BrLeCb,
    Directions,
    Factor,
    Continuity,
    OscConsistency,
}

impl Law {
    pub const ALL: [Law; 7] = [
        Law::Monotonicity,
        Law::Conjugation,
        Law::BrLeCb,
        Law::Directions,
        Law::Factor,
        Law::Continuity,
        Law::OscConsistency,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Law::Monotonicity => "monotonicity",
            Law::Conjugation => "conjugation",
            Law::BrLeCb => "br-le-cb",
            Law::Directions => "directions",
            Law::Factor => "factor",
            Law::Continuity => "continuity",
            Law::OscConsistency => "osc-consistency",
        }
    }

    /// A single law, or every law for `all`.
    pub fn parse_selection(s: &str) -> Result<Vec<Law>> {
        if s == "all" {
            return Ok(Law::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Law> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown law `{s}`")))
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const BUILTIN_FINITE: [(&str, &str); 3] = [
    ("z4", include_str!("../systems/z4.json")),
    ("fold", include_str!("../systems/fold.json")),
    ("point", include_str!("../systems/point.json")),
];

/// The finite systems shipped with the crate.
pub fn builtin_finite_systems() -> Vec<SystemDescriptor> {
    BUILTIN_FINITE
        .iter()
        .map(|(name, text)| parse_finite_system(name, text).expect("built-in system parses"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub systems: Vec<SystemDescriptor>,
    pub levels: Vec<u32>,
    /// Height bound for named sample points.
    pub height: u64,
    /// Neighbourhood depth for the oracle.
    pub depth: u32,
    pub alpha_max: usize,
    pub cap: u64,
}

impl Grid {
    fn with_specs(specs: &[&str], levels: Vec<u32>, height: u64) -> Grid {
        let mut systems: Vec<SystemDescriptor> =
            specs.iter().map(|s| build_system(s).expect("built-in system")).collect();
        systems.extend(builtin_finite_systems());
        Grid { systems, levels, height, depth: 3, alpha_max: 3, cap: crate::engine::DEFAULT_CAP }
    }

    pub fn small() -> Grid {
        Grid::with_specs(&["acf", "dlo", "cyclic", "multiorder:1", "multiorder:2", "cylinder"], vec![1, 2], 3)
    }

    pub fn full() -> Grid {
        Grid::with_specs(
            &["acf", "dlo", "cyclic", "multiorder:1", "multiorder:2", "multiorder:3", "cylinder"],
            vec![1, 2, 3],
            4,
        )
    }

    pub fn parse(s: &str) -> Result<Grid> {
        match s {
            "small" => Ok(Grid::small()),
            "full" => Ok(Grid::full()),
            _ => Err(Error::InvalidArgument(format!("unknown grid `{s}`"))),
        }
    }

    pub fn max_level(&self) -> u32 {
        self.levels.iter().copied().max().unwrap_or(1)
    }

    fn cells(&self) -> Vec<(&SystemDescriptor, &PiecewiseMap, u32)> {
        let mut out = Vec::new();
        for s in &self.systems {
            for f in s.maps() {
                for l in &self.levels {
                    out.push((s, f, *l));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub law: String,
    pub cases: u64,
    /// Counterexample inputs, verbatim.
    pub failures: Vec<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Default)]
struct Tally {
    cases: u64,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

fn stage(chain: &DerivativeChain, alpha: usize) -> &SymbolicSet {
    chain.stages.get(alpha).unwrap_or_else(|| chain.stages.last().expect("nonempty chain"))
}

fn le(a: &RankValue, b: &RankValue) -> bool {
    matches!(a.partial_cmp(b), Some(Ordering::Less | Ordering::Equal))
}

/// About `k` classes spread evenly through `p`.
fn sample_classes(p: &Partition, k: usize) -> Vec<SymbolicSet> {
    let n = p.len();
    let mut idx: Vec<usize> = (0..k.min(n)).map(|i| i * n / k.min(n)).collect();
    idx.dedup();
    idx.into_iter().map(|i| p.class_set(i)).collect()
}

/// Closed test sets: some partition classes and the first derivative.
fn closed_subsets(full_chain: &DerivativeChain, p: &Partition) -> Vec<SymbolicSet> {
    let mut out = sample_classes(p, 6);
    let first = stage(full_chain, 1);
    if !first.is_empty() && !first.is_full() {
        out.push(first.clone());
    }
    out
}

/// `sup{bR(x) : x ∈ D}` read off the chain of the whole space.
fn sup_point_rank(chain: &DerivativeChain, d: &SymbolicSet) -> RankValue {
    match chain.termination {
        Termination::CapReached => RankValue::Capped(chain.stages.len() as u64 - 1),
        Termination::FixedPoint if !chain.stages.last().expect("nonempty").intersect(d).is_empty() => {
            RankValue::Infinite
        }
        _ => {
            let top = chain.stages.iter().rposition(|s| !s.intersect(d).is_empty());
            RankValue::Finite(top.unwrap_or(0) as u64)
        }
    }
}

fn tag(s: &SystemDescriptor, f: &PiecewiseMap, l: u32) -> String {
    format!("{} {} level {l}", s.spec, f.name)
}

fn par_cells(grid: &Grid, run: impl Fn(&SystemDescriptor, &PiecewiseMap, u32) -> Result<Tally> + Sync) -> Result<Tally> {
    let parts: Vec<Result<Tally>> = grid.cells().into_par_iter().map(|(s, f, l)| run(s, f, l)).collect();
    let mut out = Tally::default();
    for p in parts {
        out.absorb(p?);
    }
    Ok(out)
}

fn monotonicity(grid: &Grid) -> Result<Tally> {
    let alpha_max = grid.alpha_max;
    let mut t = par_cells(grid, |s, f, l| {
        let mut t = Tally::default();
        let space = f.space();
        let p = Partition::canonical(space, l)?;
        let full = iterate_derivative(&SymbolicSet::full(space), f, &p, grid.cap)?;
        for y in closed_subsets(&full, &p) {
            let c = iterate_derivative(&y, f, &p, grid.cap)?;
            for a in 0..=alpha_max {
                t.check(stage(&c, a).is_subset(stage(&full, a)), || {
                    format!("{}: stage {a} of Y = {y} is not inside stage {a} of X", tag(s, f, l))
                });
            }
            t.check(le(&c.rank(), &full.rank()), || {
                format!("{}: β(f|{y}) = {} exceeds β(f) = {}", tag(s, f, l), c.rank(), full.rank())
            });
        }
        let finer = iterate_derivative(&SymbolicSet::full(space), f, &Partition::canonical(space, l + 1)?, grid.cap)?;
        for a in 0..=alpha_max {
            t.check(stage(&full, a).is_subset(stage(&finer, a)), || {
                format!("{}: stage {a} shrinks under refinement to level {}", tag(s, f, l), l + 1)
            });
        }
        t.check(le(&full.rank(), &finer.rank()), || {
            format!("{}: β = {} but β at level {} = {}", tag(s, f, l), full.rank(), l + 1, finer.rank())
        });
        Ok(t)
    })?;
    for s in &grid.systems {
        let maps = s.ellis_maps();
        let whole = crate::engine::beta_of_system(&maps, grid.max_level(), grid.cap)?;
        for k in 1..maps.len() {
            let part = crate::engine::beta_of_system(&maps[..k], grid.max_level(), grid.cap)?;
            t.check(le(&part, &whole), || format!("{}: subfamily of {k} maps has β = {part} > {whole}", s.spec));
        }
    }
    Ok(t)
}

fn conjugation(grid: &Grid) -> Result<Tally> {
    let alpha_max = grid.alpha_max;
    par_cells(grid, |s, f, l| {
        let mut t = Tally::default();
        let space = f.space();
        let p = Partition::canonical(space, l)?;
        let full = iterate_derivative(&SymbolicSet::full(space), f, &p, grid.cap)?;
        let mut ys = vec![SymbolicSet::full(space)];
        if !stage(&full, 1).is_empty() {
            ys.push(stage(&full, 1).clone());
        }
        let samples = space.samples(grid.height);
        for h in &s.group {
            let (fh, hfh) = f.conjugate(h)?;
            let hp = h.push_partition(&p)?;
            for y in &ys {
                let hy = h.image_set(y)?;
                let c = iterate_derivative(y, f, &p, grid.cap)?;
                let c1 = iterate_derivative(&hy, &fh, &p, grid.cap)?;
                let c2 = iterate_derivative(&hy, &hfh, &hp, grid.cap)?;
                for a in 0..=alpha_max {
                    let moved = h.image_set(stage(&c, a))?;
                    t.check(moved == *stage(&c1, a), || {
                        format!("{} h = {h} Y = {y}: h[Y^{a}_f] = {moved} but Y^{a}_(f∘h⁻¹) = {}", tag(s, f, l), stage(&c1, a))
                    });
                    t.check(moved == *stage(&c2, a), || {
                        format!("{} h = {h} Y = {y}: h[Y^{a}_f] = {moved} but Y^{a}_(hfh⁻¹, h[P]) = {}", tag(s, f, l), stage(&c2, a))
                    });
                }
                t.check(c.rank() == c2.rank(), || {
                    format!("{} h = {h}: β(f) = {} but β(hfh⁻¹, h[P]) = {}", tag(s, f, l), c.rank(), c2.rank())
                });
            }
            let c1 = iterate_derivative(&SymbolicSet::full(space), &fh, &p, grid.cap)?;
            let bad = samples
                .par_iter()
                .find_first(|x| h.apply(space, x).map_or(true, |hx| full.point_rank(x) != c1.point_rank(&hx)));
            t.check(bad.is_none(), || {
                format!("{} h = {h}: point rank not invariant at {}", tag(s, f, l), bad.expect("counterexample"))
            });
        }
        Ok(t)
    })
}

fn br_le_cb(grid: &Grid) -> Result<Tally> {
    par_cells(grid, |s, f, l| {
        let mut t = Tally::default();
        let space = f.space();
        let p = Partition::canonical(space, l)?;
        let full = iterate_derivative(&SymbolicSet::full(space), f, &p, grid.cap)?;
        if s.cb_oracle {
            let samples = space.samples(grid.height);
            let bad: Vec<NamedPoint> = samples
                .par_iter()
                .filter(|x| !le(&full.point_rank(x), &cb_point_rank(space, x).expect("sample point")))
                .cloned()
                .collect();
            t.cases += samples.len() as u64;
            for x in bad {
                t.failures.push(format!("{}: bR({x}) = {} > CB = {}", tag(s, f, l), full.point_rank(&x), cb_point_rank(space, &x)?));
            }
        }
        for d in closed_subsets(&full, &p) {
            let rd = iterate_derivative(&d, f, &p, grid.cap)?.rank();
            let sup = sup_point_rank(&full, &d);
            t.check(le(&rd, &sup), || format!("{}: β(f|{d}) = {rd} > sup bR = {sup}", tag(s, f, l)));
        }
        Ok(t)
    })
}

fn directions(grid: &Grid) -> Result<Tally> {
    par_cells(grid, |s, f, l| {
        let mut t = Tally::default();
        let space = f.space();
        if !space.is_ordered() {
            return Ok(t);
        }
        t.check(f.is_monotone()?, || format!("{}: not monotone", tag(s, f, l)));
        let p = Partition::canonical(space, l)?;
        let full = SymbolicSet::full(space);
        let first = derivative(&full, f, &p)?;
        let Some(pts) = first.finite_points() else {
            t.check(false, || format!("{}: X¹ = {first} is infinite", tag(s, f, l)));
            return Ok(t);
        };
        t.check(pts.len() <= 2 * p.len(), || format!("{}: |X¹| = {} > 2·{}", tag(s, f, l), pts.len(), p.len()));
        t.check(derivative(&first, f, &p)?.is_empty(), || format!("{}: X² is nonempty", tag(s, f, l)));
        let dirs = pts.iter().map(|x| oscillation_directions(f, &p, x)).collect::<Result<Vec<_>>>()?;
        for (x, d) in pts.iter().zip(&dirs) {
            t.check(!d.is_empty(), || format!("{}: no oscillation direction at {x}", tag(s, f, l)));
        }
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if p.same_class(&f.apply_map(&pts[i])?, &f.apply_map(&pts[j])?)? {
                    t.check(dirs[i].is_disjoint(&dirs[j]), || {
                        format!("{}: {} and {} share a direction {:?}", tag(s, f, l), pts[i], pts[j], dirs[i])
                    });
                }
            }
        }
        Ok(t)
    })
}

fn factor(grid: &Grid) -> Result<Tally> {
    let mut jobs: Vec<(FactorMap, PiecewiseMap, Partition, Vec<SymbolicSet>, Vec<crate::maps::GroupElement>)> = Vec::new();
    for s in &grid.systems {
        for f in s.maps() {
            let single = FactorMap::singleton(&s.space);
            let tp = Partition::trivial(&Space::Singleton);
            jobs.push((single, f.clone(), tp, vec![SymbolicSet::full(&Space::Singleton)], s.group.clone()));
        }
        if let Space::MultiOrder(n) = s.space {
            for k in 1..n {
                let pi = FactorMap::projection(n, k)?;
                for f in s.maps() {
                    for l in &grid.levels {
                        let p = Partition::canonical(&pi.target, *l)?;
                        let ds = vec![SymbolicSet::full(&pi.target), p.class_set(0), p.class_set(p.len() / 2)];
                        jobs.push((pi.clone(), f.clone(), p, ds, s.group.clone()));
                    }
                }
            }
        }
        if s.space == Space::Compactification {
            let glue = FactorMap::glue();
            for f in [glue_test_map(), PiecewiseMap::identity(&s.space)] {
                for l in &grid.levels {
                    let p = Partition::canonical(&glue.target, *l)?;
                    jobs.push((glue.clone(), f.clone(), p, vec![SymbolicSet::full(&glue.target)], s.group.clone()));
                }
            }
        }
    }
    let parts: Vec<Result<Tally>> = jobs
        .into_par_iter()
        .map(|(pi, f, p, ds, group)| {
            let mut t = Tally::default();
            let eq = pi.equivariance_counterexample(&group, grid.height.min(3))?;
            t.check(eq.is_none(), || format!("{pi}: not equivariant at {eq:?}"));
            for d in ds {
                let r = check_factor_lemmas(&pi, &f, &d, &p, grid.alpha_max, grid.cap)?;
                t.check(r.passed(), || format!("{pi} {} D = {d}: {r:?}", f.name));
            }
            Ok(t)
        })
        .collect();
    let mut t = Tally::default();
    for p in parts {
        t.absorb(p?);
    }
    Ok(t)
}

fn continuity(grid: &Grid) -> Result<Tally> {
    let maps: Vec<(&SystemDescriptor, &PiecewiseMap)> =
        grid.systems.iter().flat_map(|s| s.maps().map(move |f| (s, f))).collect();
    let lvl = grid.max_level();
    let parts: Vec<Result<Tally>> = maps
        .into_par_iter()
        .map(|(s, f)| {
            let mut t = Tally::default();
            let cont = is_continuous(f, lvl)?;
            let (beta, _) = beta_of_map(f, lvl, grid.cap)?;
            t.check(cont == (beta == RankValue::Finite(0)), || {
                format!("{} {}: continuous = {cont} but β = {beta}", s.spec, f.name)
            });
            Ok(t)
        })
        .collect();
    let mut t = Tally::default();
    for p in parts {
        t.absorb(p?);
    }
    Ok(t)
}

fn all_subsets(space: &Space) -> Result<Vec<SymbolicSet>> {
    let pts = space.samples(0);
    (0u32..1 << pts.len())
        .map(|m| {
            let chosen: Vec<NamedPoint> = pts.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, x)| x.clone()).collect();
            SymbolicSet::points(space, &chosen)
        })
        .collect()
}

fn osc_consistency(grid: &Grid) -> Result<Tally> {
    par_cells(grid, |s, f, l| {
        let mut t = Tally::default();
        let space = f.space();
        let p = Partition::canonical(space, l)?;
        let full = iterate_derivative(&SymbolicSet::full(space), f, &p, grid.cap)?;
        let mut ys = vec![SymbolicSet::full(space)];
        if !stage(&full, 1).is_empty() && !stage(&full, 1).is_full() {
            ys.push(stage(&full, 1).clone());
        }
        for y in &ys {
            let r = consistency_check(f, &p, y, grid.height, grid.depth)?;
            t.cases += r.checked as u64;
            for h in r.hard_failures {
                t.failures.push(format!("{}: Y = {y}: {h}", tag(s, f, l)));
            }
        }
        for y in ys.iter().chain(&closed_subsets(&full, &p)) {
            if f.dense_codense().is_none() {
                let a = derivative(y, f, &p)?;
                let b = derivative_pairwise(y, f, &p)?;
                t.check(a == b, || format!("{}: Y = {y}: piecewise {a} but pairwise {b}", tag(s, f, l)));
            }
        }
        if let Space::Finite(fs) = space {
            if fs.points.len() <= 10 {
                for y in all_subsets(space)? {
                    let a = derivative(&y, f, &p)?;
                    let b = brute_force_derivative(&y, f, &p)?;
                    t.check(a == b, || format!("{}: Y = {y}: derivative {a} but brute force {b}", tag(s, f, l)));
                }
            }
        }
        Ok(t)
    })
}

pub fn run_law(law: Law, grid: &Grid) -> Result<LawReport> {
    let t = match law {
        Law::Monotonicity => monotonicity(grid),
        Law::Conjugation => conjugation(grid),
        Law::BrLeCb => br_le_cb(grid),
        Law::Directions => directions(grid),
        Law::Factor => factor(grid),
        Law::Continuity => continuity(grid),
        Law::OscConsistency => osc_consistency(grid),
    }?;
    Ok(LawReport { law: law.name().to_string(), cases: t.cases, failures: t.failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Grid {
        let mut g = Grid::small();
        g.systems.retain(|s| ["dlo", "acf", "finite:fold"].contains(&s.spec.as_str()));
        g.levels = vec![1];
        g.height = 2;
        g
    }

    #[test]
    fn law_names_round_trip() {
        for l in Law::ALL {
            assert_eq!(l.name().parse::<Law>().unwrap(), l);
        }
        assert_eq!(Law::parse_selection("all").unwrap().len(), 7);
        assert!("nope".parse::<Law>().is_err());
    }

    #[test]
    fn every_law_passes_on_a_tiny_grid() {
        let g = tiny();
        for law in Law::ALL {
            let r = run_law(law, &g).unwrap();
            assert!(r.passed(), "{law}: {:?}", r.failures);
            assert!(r.cases > 0, "{law}");
        }
    }

    #[test]
    fn builtins_parse() {
        assert_eq!(builtin_finite_systems().len(), 3);
    }

    #[test]
    fn sup_point_rank_reads_the_chain() {
        let s = build_system("dlo").unwrap();
        let f = &s.find("stretch-limit").unwrap().map;
        let p = Partition::canonical(&s.space, 1).unwrap();
        let c = iterate_derivative(&SymbolicSet::full(&s.space), f, &p, 64).unwrap();
        assert_eq!(sup_point_rank(&c, &SymbolicSet::full(&s.space)), RankValue::Finite(1));
        assert_eq!(sup_point_rank(&c, &SymbolicSet::empty(&s.space)), RankValue::Finite(0));
    }
}
