//! Properties of the derivative on randomly generated piecewise maps.

use proptest::prelude::*;

use oscrank::engine::{derivative, derivative_pairwise, iterate_derivative, RankValue};
use oscrank::maps::{Action, GroupElement, Piece, PiecewiseMap};
use oscrank::oracle::consistency_check;
use oscrank::rational::Rational;
use oscrank::space::{Partition, Space, SymbolicSet};

/// One action per atom of the level-`level` partition: a constant drawn from
/// the samples, or a translation.
fn random_map(space: &Space, level: u32, choices: &[(bool, usize, i64)]) -> PiecewiseMap {
    let atoms = Partition::canonical(space, level).unwrap().classes();
    let samples = space.samples(2);
    let pieces = atoms
        .into_iter()
        .zip(choices.iter().cycle())
        .map(|(region, (constant, k, t))| {
            let action = if *constant {
                Action::Constant(samples[k % samples.len()].clone())
            } else {
                Action::Apply(GroupElement::shift(space, Rational::new(*t, 2)).unwrap())
            };
            Piece { region, action }
        })
        .collect();
    PiecewiseMap::new(space, "random", pieces).unwrap()
}

fn union_of_classes(p: &Partition, mask: u64) -> SymbolicSet {
    let chosen: Vec<SymbolicSet> = (0..p.len()).filter(|i| mask >> (i % 64) & 1 == 1).map(|i| p.class_set(i)).collect();
    SymbolicSet::union_all(p.space(), &chosen)
}

fn choices() -> impl Strategy<Value = Vec<(bool, usize, i64)>> {
    prop::collection::vec((any::<bool>(), 0usize..100, -4i64..=4), 1..12)
}

fn check_basic(space: &Space, f: &PiecewiseMap, mask: u64, level: u32) -> Result<(), TestCaseError> {
    let p = Partition::canonical(space, level).unwrap();
    let y = union_of_classes(&Partition::canonical(space, 1).unwrap(), mask);
    let d = derivative(&y, f, &p).unwrap();
    prop_assert!(d.is_subset(&y));
    prop_assert!(d.is_closed());
    prop_assert_eq!(&d, &derivative_pairwise(&y, f, &p).unwrap());
    let finer = derivative(&y, f, &Partition::canonical(space, level + 1).unwrap()).unwrap();
    prop_assert!(d.is_subset(&finer));
    let d_full = derivative(&SymbolicSet::full(space), f, &p).unwrap();
    prop_assert!(d.is_subset(&d_full));
    let r = consistency_check(f, &p, &y, 3, 2).unwrap();
    prop_assert!(r.hard_failures.is_empty(), "{:?}", r.hard_failures);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cut_line_derivative_laws(level in 1u32..=3, map_level in 1u32..=2, cs in choices(), mask in any::<u64>()) {
        let space = Space::CutLine;
        let f = random_map(&space, map_level, &cs);
        check_basic(&space, &f, mask, level)?;
    }

    #[test]
    fn plane_derivative_laws(level in 1u32..=2, cs in choices(), mask in any::<u64>()) {
        let space = Space::MultiOrder(2);
        let f = random_map(&space, 1, &cs);
        check_basic(&space, &f, mask, level)?;
    }

    #[test]
    fn circle_derivative_laws(level in 1u32..=3, map_level in 1u32..=3, cs in choices(), mask in any::<u64>()) {
        let space = Space::Cyclic;
        let f = random_map(&space, map_level, &cs);
        check_basic(&space, &f, mask, level)?;
    }

    #[test]
    fn conjugation_moves_the_chain(cs in choices(), t in -6i64..=6, level in 1u32..=2) {
        let space = Space::CutLine;
        let f = random_map(&space, 2, &cs);
        let h = GroupElement::shift(&space, Rational::new(t, 3)).unwrap();
        let (fh, hfh) = f.conjugate(&h).unwrap();
        let p = Partition::canonical(&space, level).unwrap();
        let full = SymbolicSet::full(&space);
        let c = iterate_derivative(&full, &f, &p, 16).unwrap();
        let c1 = iterate_derivative(&full, &fh, &p, 16).unwrap();
        let c2 = iterate_derivative(&full, &hfh, &h.push_partition(&p).unwrap(), 16).unwrap();
        prop_assert_eq!(c.stages.len(), c1.stages.len());
        prop_assert_eq!(c.stages.len(), c2.stages.len());
        for ((s, s1), s2) in c.stages.iter().zip(&c1.stages).zip(&c2.stages) {
            let moved = h.image_set(s).unwrap();
            prop_assert_eq!(&moved, s1);
            prop_assert_eq!(&moved, s2);
        }
    }

    #[test]
    fn chain_rank_is_the_top_point_rank(cs in choices(), level in 1u32..=3) {
        let space = Space::CutLine;
        let f = random_map(&space, 2, &cs);
        let p = Partition::canonical(&space, level).unwrap();
        let chain = iterate_derivative(&SymbolicSet::full(&space), &f, &p, 16).unwrap();
        let mut top = RankValue::Finite(0);
        for x in space.samples(2).into_iter().chain(chain.stages.iter().filter_map(|s| s.witness())) {
            top = RankValue::sup([top, chain.point_rank(&x)]);
        }
        prop_assert_eq!(top, chain.rank());
    }
}
