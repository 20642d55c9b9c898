#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;

use latticelp::lattice::{Lattice, LatticeFile};

/// Closes a family of subsets of `{0..5}` under intersection and adds the
/// full set, giving a lattice ordered by inclusion.
pub fn closure_system(seeds: &[u32]) -> Vec<u32> {
    let mut family: BTreeSet<u32> = seeds.iter().map(|s| s & 31).collect();
    family.insert(31);
    loop {
        let items: Vec<u32> = family.iter().copied().collect();
        let before = family.len();
        for &a in &items {
            for &b in &items {
                family.insert(a & b);
            }
        }
        if family.len() == before {
            return family.into_iter().collect();
        }
    }
}

pub fn lattice_from_masks(masks: &[u32]) -> Lattice {
    let name = |m: u32| format!("s{m}");
    let mut order = Vec::new();
    for &a in masks {
        for &b in masks {
            if a != b && a & !b == 0 {
                order.push([name(a), name(b)]);
            }
        }
    }
    let file = LatticeFile {
        elements: masks.iter().map(|&m| name(m)).collect(),
        order,
        ortho: None,
        phi: None,
    };
    Lattice::from_file(&file).expect("closure systems are lattices")
}

/// Random finite lattices with at most 32 elements.
pub fn fuzzed_lattice() -> impl Strategy<Value = Lattice> {
    proptest::collection::vec(0u32..32, 1..7)
        .prop_map(|seeds| lattice_from_masks(&closure_system(&seeds)))
}
