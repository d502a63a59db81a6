//! Text syntax for symbolic sets.
//!
//! ```text
//! set     := union [ "\" union ]
//! union   := term { ("∪" | "U") term }
//! term    := "X" | "{}" | product | points | "co{" points "}" | "<" word ">"
//! product := factor { ("×" | "x") factor }
//! factor  := ("[" | "(") point "," point ("]" | ")") | "{" point { "," point } "}"
//! ```
//!
//! Cut points are written `-inf`, `+inf`, `q`, `q-`, `q+`. On the circle an
//! interval whose lower end is above its upper end wraps through `0`.
//! Compactification points are `i<k>` and `lim`; Cantor space points are
//! `<word>|<tail bit>`.

use crate::error::{parse_err, Result};

use super::boxes::BoxSet;
use super::compact::{CompactSet, IsoSet};
use super::cylinder::CylinderSet;
use super::interval::Interval;
use super::point::{parse_word, CompactPoint, NamedPoint};
use super::set::SymbolicSet;
use super::Space;

/// Splits at `sep` outside brackets and parentheses.
fn split_top<'a>(s: &'a str, seps: &[&str]) -> Vec<&'a str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < s.len() {
        let rest = &s[i..];
        let c = rest.chars().next().unwrap();
        match c {
            '[' | '(' | '{' | '<' => depth += 1,
            ']' | ')' | '}' | '>' => depth -= 1,
            _ => {}
        }
        if depth == 0 {
            if let Some(sep) = seps.iter().find(|sep| rest.starts_with(**sep)) {
                out.push(&s[start..i]);
                i += sep.len();
                start = i;
                continue;
            }
        }
        i += c.len_utf8();
    }
    out.push(&s[start..]);
    out
}

pub fn parse_set(space: &Space, text: &str) -> Result<SymbolicSet> {
    let parts = split_top(text, &["\\"]);
    match parts.as_slice() {
        [u] => parse_union(space, u),
        [a, b] => Ok(parse_union(space, a)?.difference(&parse_union(space, b)?)),
        _ => Err(parse_err("at most one `\\` allowed")),
    }
}

fn parse_union(space: &Space, text: &str) -> Result<SymbolicSet> {
    let mut acc = SymbolicSet::empty(space);
    for term in split_top(text, &["∪", " U "]) {
        acc = acc.union(&parse_term(space, term.trim())?);
    }
    Ok(acc)
}

fn braced(s: &str) -> Option<&str> {
    s.strip_prefix('{').and_then(|t| t.strip_suffix('}'))
}

fn point_list(inner: &str) -> Vec<&str> {
    if inner.trim().is_empty() {
        Vec::new()
    } else {
        split_top(inner, &[","]).into_iter().map(str::trim).collect()
    }
}

fn parse_term(space: &Space, t: &str) -> Result<SymbolicSet> {
    if t == "X" {
        return Ok(SymbolicSet::full(space));
    }
    if t == "{}" {
        return Ok(SymbolicSet::empty(space));
    }
    match space {
        Space::CutLine | Space::MultiOrder(_) | Space::Cyclic => parse_product(space, t),
        Space::Compactification => {
            if let Some(inner) = t.strip_prefix("co").and_then(braced) {
                let ks: Result<Vec<u64>> = point_list(inner)
                    .into_iter()
                    .map(|p| match space.parse_point(p)? {
                        NamedPoint::Compact(CompactPoint::Iso(k)) => Ok(k),
                        _ => Err(parse_err(format!("`{p}` is not an isolated point"))),
                    })
                    .collect();
                return Ok(SymbolicSet::from_compact(CompactSet {
                    iso: IsoSet::Cofinite(ks?.into_iter().collect()),
                    limit: false,
                }));
            }
            parse_points(space, t)
        }
        Space::Cylinder => {
            if let Some(w) = t.strip_prefix('<').and_then(|s| s.strip_suffix('>')) {
                let word = parse_word(w).ok_or_else(|| parse_err(format!("bad word `{w}`")))?;
                return Ok(SymbolicSet::from_cylinder(CylinderSet::cylinders(&[word])));
            }
            parse_points(space, t)
        }
        Space::Finite(_) | Space::Singleton => parse_points(space, t),
    }
}

fn parse_points(space: &Space, t: &str) -> Result<SymbolicSet> {
    let inner = braced(t).ok_or_else(|| parse_err(format!("expected `{{...}}`, found `{t}`")))?;
    let pts: Result<Vec<NamedPoint>> = point_list(inner).into_iter().map(|p| space.parse_point(p)).collect();
    SymbolicSet::points(space, &pts?)
}

fn parse_product(space: &Space, t: &str) -> Result<SymbolicSet> {
    let (line, n) = space.line().expect("line space");
    if let Some(inner) = braced(t) {
        if inner.trim_start().starts_with('(') || n == 1 {
            return parse_points(space, t);
        }
    }
    let factors: Vec<&str> = split_top(t, &["×", "x"]).into_iter().map(str::trim).collect();
    if factors.len() != n {
        return Err(parse_err(format!("expected {n} factors in `{t}`")));
    }
    let sets: Result<Vec<BoxSet>> = factors.iter().map(|f| parse_factor(space, &line, f)).collect();
    Ok(SymbolicSet::from_box_set(space, BoxSet::product(&sets?)))
}

fn parse_factor(space: &Space, line: &super::Line, f: &str) -> Result<BoxSet> {
    let one = |ivs: Vec<Interval>| {
        let boxes: Vec<Vec<Interval>> = ivs.into_iter().map(|iv| vec![iv]).collect();
        BoxSet::from_boxes(line.clone(), 1, &boxes)
    };
    if let Some(inner) = braced(f) {
        let pts: Result<Vec<Interval>> =
            point_list(inner).into_iter().map(|p| Ok(Interval::point(space.parse_coord(p)?))).collect();
        return Ok(one(pts?));
    }
    let lo_inc = match f.chars().next() {
        Some('[') => true,
        Some('(') => false,
        _ => return Err(parse_err(format!("bad interval `{f}`"))),
    };
    let hi_inc = match f.chars().last() {
        Some(']') => true,
        Some(')') => false,
        _ => return Err(parse_err(format!("bad interval `{f}`"))),
    };
    let inner = &f[1..f.len() - 1];
    let ends: Vec<&str> = inner.split(',').map(str::trim).collect();
    let [a, b] = ends.as_slice() else {
        return Err(parse_err(format!("interval `{f}` needs two endpoints")));
    };
    let (lo, hi) = (space.parse_coord(a)?, space.parse_coord(b)?);
    if matches!(space, Space::Cyclic) && lo > hi {
        let upper = Interval::new(lo, lo_inc, line.hi.clone(), true);
        let lower = Interval::new(line.lo.clone(), true, hi, hi_inc);
        return Ok(one(upper.into_iter().chain(lower).collect()));
    }
    if lo > hi {
        return Err(parse_err(format!("interval `{f}` has lower end above upper end")));
    }
    Ok(one(Interval::new(lo, lo_inc, hi, hi_inc).into_iter().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(space: &Space, text: &str) {
        let s = parse_set(space, text).unwrap();
        let printed = s.to_string();
        assert_eq!(parse_set(space, &printed).unwrap(), s, "{text} -> {printed}");
    }

    #[test]
    fn cut_line_literals() {
        let s = Space::CutLine;
        let a = parse_set(&s, "[0+,1-]").unwrap();
        assert!(a.is_clopen());
        assert_eq!(a.to_string(), "[0+,1-]");
        let b = parse_set(&s, "{3} ∪ (0+,+inf]").unwrap();
        assert_eq!(b.to_string(), "(0+,+inf]");
        assert_eq!(parse_set(&s, "{}").unwrap(), SymbolicSet::empty(&s));
        assert_eq!(parse_set(&s, "X").unwrap(), SymbolicSet::full(&s));
        assert!(parse_set(&s, "[1,0]").is_err());
        assert!(parse_set(&s, "[1,0").is_err());
        round_trip(&s, "[-inf,-1-] U {0} U [1/2+,3)");
    }

    #[test]
    fn product_literals() {
        let s = Space::MultiOrder(2);
        let a = parse_set(&s, "{-inf}×[-inf,+inf] ∪ [-inf,+inf] x {-inf}").unwrap();
        assert_eq!(a.boxes().unwrap().len(), 2);
        round_trip(&s, "{-inf}×[-inf,+inf] ∪ [-inf,+inf]×{-inf}");
        let p = parse_set(&s, "{(-inf, 5), (0, 0)}").unwrap();
        assert_eq!(p.finite_points().unwrap().len(), 2);
        assert!(parse_set(&s, "[0,1]").is_err());
    }

    #[test]
    fn cyclic_wrapping() {
        let s = Space::Cyclic;
        let a = parse_set(&s, "[1/2,0]").unwrap();
        assert!(a.contains(&s.parse_point("3/4").unwrap()));
        assert!(a.contains(&s.parse_point("0").unwrap()));
        assert!(!a.contains(&s.parse_point("1/4").unwrap()));
        round_trip(&s, "[1/2,0]");
        round_trip(&s, "[0+,0-]");
    }

    #[test]
    fn other_spaces() {
        let c = Space::Compactification;
        let a = parse_set(&c, "co{i0} ∪ {lim}").unwrap();
        assert!(a.is_clopen());
        round_trip(&c, "co{i0,i2} ∪ {lim}");
        let y = Space::Cylinder;
        let b = parse_set(&y, "<01> ∪ {1|0}").unwrap();
        assert!(b.contains(&y.parse_point("0110|0").unwrap()));
        round_trip(&y, "<0> \\ {0|0}");
        let f = Space::finite("t", vec!["a".into(), "b".into()]);
        assert_eq!(parse_set(&f, "{b}").unwrap().to_string(), "{b}");
    }
}
