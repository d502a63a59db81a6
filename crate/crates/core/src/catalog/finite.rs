//! User-defined finite discrete systems.
//!
//! ```json
//! {"points": ["a", "b", "c"],
//!  "generators": [[["a", "b", "c"]]],
//!  "maps": {"fold": {"a": "a", "b": "a", "c": "c"}}}
//! ```
//!
//! Each generator is a list of disjoint cycles. The Ellis semigroup of a
//! finite discrete system is the monoid generated by the generators.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use serde::Deserialize;

use crate::engine::RankValue;
use crate::error::{Error, Result};
use crate::maps::{Action, GroupElement, Piece, PiecewiseMap};
use crate::space::{NamedPoint, Space, SymbolicSet};

use super::{CatalogMap, SystemDescriptor};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FiniteFile {
    points: Vec<String>,
    #[serde(default)]
    generators: Vec<Vec<Vec<String>>>,
    #[serde(default)]
    maps: BTreeMap<String, BTreeMap<String, String>>,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSystem(msg.into())
}

fn perm_name(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().map(usize::to_string).collect();
    format!("finperm:{}", parts.join(","))
}

/// Table-defined map as one constant piece per point.
fn table_map(space: &Space, name: &str, table: &[usize]) -> Result<PiecewiseMap> {
    let pieces = table
        .iter()
        .enumerate()
        .map(|(i, j)| {
            Ok(Piece {
                region: SymbolicSet::points(space, &[NamedPoint::Finite(i)])?,
                action: Action::Constant(NamedPoint::Finite(*j)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseMap::new(space, name, pieces)
}

/// Closure of the generators under composition, starting at the identity.
fn generated_monoid(gens: &[Vec<usize>], n: usize) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..n).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let next: Vec<usize> = e.iter().map(|i| g[*i]).collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn parse_finite_system(name: &str, text: &str) -> Result<SystemDescriptor> {
    let file: FiniteFile = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let n = file.points.len();
    if n == 0 {
        return Err(bad("no points"));
    }
    let index: BTreeMap<&str, usize> = file.points.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    if index.len() != n {
        return Err(bad("duplicate point names"));
    }
    let lookup = |p: &str| index.get(p).copied().ok_or_else(|| bad(format!("unknown point `{p}`")));
    let mut gens = Vec::new();
    for (gi, cycles) in file.generators.iter().enumerate() {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut moved = BTreeSet::new();
        for c in cycles {
            for (i, p) in c.iter().enumerate() {
                let from = lookup(p)?;
                if !moved.insert(from) {
                    return Err(bad(format!("generator {gi} is not a bijection: `{p}` repeats")));
                }
                perm[from] = lookup(&c[(i + 1) % c.len()])?;
            }
        }
        gens.push(perm);
    }
    let space = Space::finite(name, file.points.clone());
    let elements = generated_monoid(&gens, n);
    let mut catalog = Vec::new();
    for e in &elements {
        let is_id = e.iter().enumerate().all(|(i, j)| i == *j);
        let map = if is_id {
            PiecewiseMap::identity(&space)
        } else {
            PiecewiseMap::from_group(&space, perm_name(e), GroupElement::FinitePerm(e.clone()))?
        };
        catalog.push(CatalogMap { map, expected_beta: Some(RankValue::Finite(0)), net: None });
    }
    for (mname, table) in &file.maps {
        let mut t = vec![usize::MAX; n];
        for (from, to) in table {
            t[lookup(from)?] = lookup(to)?;
        }
        if let Some(i) = t.iter().position(|j| *j == usize::MAX) {
            return Err(bad(format!("map `{mname}` is not defined at `{}`", file.points[i])));
        }
        let mut map = table_map(&space, mname, &t)?;
        if elements.contains(&t) {
            map = map.in_ellis("a member of the generated group");
        }
        catalog.push(CatalogMap { map, expected_beta: Some(RankValue::Finite(0)), net: None });
    }
    Ok(SystemDescriptor {
        spec: format!("finite:{name}"),
        space,
        group_description: format!("group generated by {} permutation(s), {} element(s)", gens.len(), elements.len()),
        group: gens.into_iter().map(GroupElement::FinitePerm).collect(),
        catalog,
        expected_beta: Some(RankValue::Finite(0)),
        cb_oracle: true,
    })
}

pub fn load_finite_system(path: &Path) -> Result<SystemDescriptor> {
    let text = std::fs::read_to_string(path)?;
    parse_finite_system(&path.display().to_string(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_group_has_four_elements() {
        let s = parse_finite_system("z4", r#"{"points":["0","1","2","3"],"generators":[[["0","1","2","3"]]],"maps":{}}"#).unwrap();
        assert_eq!(s.catalog.len(), 4);
        assert!(s.ellis_maps().len() == 4);
    }

    #[test]
    fn one_point_system() {
        let s = parse_finite_system("pt", r#"{"points":["p"],"generators":[],"maps":{}}"#).unwrap();
        assert_eq!(s.catalog.len(), 1);
        assert_eq!(s.catalog[0].map.name, "identity");
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_finite_system("x", r#"{"points":["a"],"extra":1}"#).is_err());
        assert!(parse_finite_system("x", r#"{"points":["a","b"],"generators":[[["a","a"]]]}"#).is_err());
        assert!(parse_finite_system("x", r#"{"points":["a","b"],"maps":{"m":{"a":"b"}}}"#).is_err());
        assert!(parse_finite_system("x", r#"{"points":["a"],"maps":{"m":{"a":"z"}}}"#).is_err());
        assert!(parse_finite_system("x", "not json").is_err());
    }

    #[test]
    fn tables_are_maps() {
        let s = parse_finite_system("t", r#"{"points":["a","b","c"],"maps":{"fold":{"a":"a","b":"a","c":"c"}}}"#).unwrap();
        let m = s.find("fold").unwrap();
        assert!(!m.map.claimed_in_ellis);
        assert_eq!(m.map.apply_map(&NamedPoint::Finite(1)).unwrap(), NamedPoint::Finite(0));
    }
}
