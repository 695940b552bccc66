//! Partition functions and indicators against brute-force oracles.

mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use realdw::cohomology::{cohomology_classes, TwistedCochain};
use realdw::cyclotomic::Cyclotomic;
use realdw::groups::{enumerate_gradings, group_by_name, GradedGroup};
use realdw::moduli::{Surface, DEFAULT_BUDGET};
use realdw::reptheory::{blocks_with_indicators, DEFAULT_SEED};
use realdw::tqft::{partition_direct, signed_square_root_count};

use common::{classical_indicators, hom_count};

fn split_zero(name: &str) -> TwistedCochain {
    let g = group_by_name(name).unwrap();
    TwistedCochain::zero(Arc::new(GradedGroup::split(&g).unwrap()), 2)
}

fn ratio(num: usize, den: usize) -> Cyclotomic {
    Cyclotomic::from_ratio(num as i64, den as i64)
}

#[test]
fn mednykh_counts_for_split_untwisted() {
    let surfaces = [
        Surface::sphere(),
        Surface::torus(),
        Surface::Orientable(2),
        Surface::projective_plane(),
        Surface::klein_bottle(),
        Surface::Nonorientable(3),
        Surface::Nonorientable(4),
    ];
    for name in ["C1", "C2", "C3", "C4", "S3", "C2xC2", "D8", "Q8"] {
        let g = group_by_name(name).unwrap();
        let lh = split_zero(name);
        for s in surfaces {
            let z = partition_direct(&lh, s, DEFAULT_BUDGET).unwrap();
            assert_eq!(z, ratio(hom_count(&g, s), g.order()), "{name} {}", s.name());
        }
    }
}

#[test]
fn small_mednykh_values() {
    let expect = [("C2", 2, (1, 1), 2), ("C3", 3, (1, 3), 1), ("S3", 3, (2, 3), 2)];
    for (name, classes, (rn, rd), klein) in expect {
        let lh = split_zero(name);
        let t2 = partition_direct(&lh, Surface::torus(), DEFAULT_BUDGET).unwrap();
        let rp2 = partition_direct(&lh, Surface::projective_plane(), DEFAULT_BUDGET).unwrap();
        assert_eq!(t2, ratio(classes, 1), "{name}");
        assert_eq!(rp2, ratio(rn, rd), "{name}");
        if name != "S3" {
            let k = partition_direct(&lh, Surface::klein_bottle(), DEFAULT_BUDGET).unwrap();
            assert_eq!(k, ratio(klein, 1), "{name}");
        }
    }
}

#[test]
fn projective_plane_is_signed_square_root_count() {
    for name in ["C2", "C4", "C2xC2", "D8", "Q8", "C2xC4", "S3xC2"] {
        let g = group_by_name(name).unwrap();
        for gg in enumerate_gradings(&g) {
            let gg = Arc::new(gg);
            let even = gg.even_part().len();
            for lh in cohomology_classes(&gg, 2).unwrap().representatives {
                let z = partition_direct(&lh, Surface::projective_plane(), DEFAULT_BUDGET).unwrap();
                let expected = signed_square_root_count(&lh).scale(&BigRational::new(BigInt::from(1), BigInt::from(even)));
                assert_eq!(z, expected, "{name} {:?}", gg.signs());
            }
        }
    }
}

#[test]
fn nonsplit_cyclic_projective_plane_vanishes() {
    let g = group_by_name("C4").unwrap();
    let gg = Arc::new(enumerate_gradings(&g).remove(0));
    assert!(!gg.is_split());
    for lh in cohomology_classes(&gg, 2).unwrap().representatives {
        assert!(partition_direct(&lh, Surface::projective_plane(), DEFAULT_BUDGET).unwrap().is_zero());
    }
}

#[test]
fn split_untwisted_indicators_are_classical() {
    for name in ["C2", "C3", "Q8", "S3", "D8"] {
        let (_, blocks) = blocks_with_indicators(&split_zero(name), DEFAULT_SEED).unwrap();
        let mut got: Vec<(usize, i8)> = blocks.iter().map(|b| (b.dimension, b.indicator.unwrap())).collect();
        got.sort();
        assert_eq!(got, classical_indicators(name), "{name}");
    }
}

#[test]
fn classical_oracle_sanity() {
    assert_eq!(classical_indicators("C3"), vec![(1, 0), (1, 0), (1, 1)]);
    assert_eq!(classical_indicators("Q8"), vec![(1, 1), (1, 1), (1, 1), (1, 1), (2, -1)]);
    assert_eq!(classical_indicators("D8"), vec![(1, 1), (1, 1), (1, 1), (1, 1), (2, 1)]);
}
