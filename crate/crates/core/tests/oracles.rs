//! Library results against independent brute force.

mod common;

use std::sync::Arc;

use common::*;
use corrlattice::catalogs::{
    atom_antichain_catalog, coatom_antichain_catalog, finest_catalog, k_partitionability_catalog,
    k_producibility_catalog,
};
use corrlattice::classifier::{enumerate_filters, DEFAULT_FILTER_CAP};
use corrlattice::ideals::{enumerate_ideals, DEFAULT_IDEAL_CAP};
use corrlattice::{class_exists, type_set, PartitionLattice, PropertySubset};

// Coatom catalog class counts, computed exhaustively and checked below
// against the brute-force signature count.
const COATOM_CLASSES_N4: usize = 14;
const COATOM_CLASSES_N5: usize = 51;
const IDEALS_N4: usize = 346;
const FILTERS_N3: usize = 20;

fn to_oracle_mask(set: impl Iterator<Item = usize>, inverse: &[usize]) -> u64 {
    set.fold(0, |acc, i| acc | 1 << inverse[i])
}

fn inverse(map: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; map.len()];
    for (o, &l) in map.iter().enumerate() {
        inv[l] = o;
    }
    inv
}

#[test]
fn partition_counts_are_bell_numbers() {
    assert_eq!((0..=6).map(bell).collect::<Vec<_>>(), vec![1, 1, 2, 5, 15, 52, 203]);
    for n in 1..=6 {
        let lattice = PartitionLattice::new(n).unwrap();
        let parts = all_partitions(n);
        assert_eq!(lattice.len() as u64, bell(n));
        assert_eq!(parts.len() as u64, bell(n));
        let mut map = index_map(&lattice, &parts);
        map.sort_unstable();
        map.dedup();
        assert_eq!(map.len(), parts.len());
    }
}

#[test]
fn refinement_matches_brute_force() {
    for n in 1..=5 {
        let lattice = PartitionLattice::new(n).unwrap();
        let parts = all_partitions(n);
        let map = index_map(&lattice, &parts);
        for i in 0..parts.len() {
            for j in 0..parts.len() {
                assert_eq!(lattice.refines(map[i], map[j]), refines(&parts[i], &parts[j]), "n={n} {i} {j}");
            }
        }
    }
}

#[test]
fn meet_and_join_are_bounds_found_by_search() {
    for n in 1..=4 {
        let lattice = PartitionLattice::new(n).unwrap();
        let parts = all_partitions(n);
        let map = index_map(&lattice, &parts);
        let m = parts.len();
        for a in 0..m {
            for b in 0..m {
                let lower: Vec<usize> =
                    (0..m).filter(|&z| refines(&parts[z], &parts[a]) && refines(&parts[z], &parts[b])).collect();
                let glb = *lower.iter().find(|&&g| lower.iter().all(|&z| refines(&parts[z], &parts[g]))).unwrap();
                let upper: Vec<usize> =
                    (0..m).filter(|&z| refines(&parts[a], &parts[z]) && refines(&parts[b], &parts[z])).collect();
                let lub = *upper.iter().find(|&&g| upper.iter().all(|&z| refines(&parts[g], &parts[z]))).unwrap();
                assert_eq!(lattice.meet(map[a], map[b]), map[glb]);
                assert_eq!(lattice.join(map[a], map[b]), map[lub]);
            }
        }
    }
}

#[test]
fn ideals_match_brute_force_down_sets() {
    for n in 1..=4 {
        let lattice = PartitionLattice::new(n).unwrap();
        let parts = all_partitions(n);
        let inv = inverse(&index_map(&lattice, &parts));
        let mut expected = all_ideals(&parts);
        let mut got: Vec<u64> = enumerate_ideals(&lattice, DEFAULT_IDEAL_CAP)
            .unwrap()
            .iter()
            .map(|ideal| to_oracle_mask(ideal.members().iter(), &inv))
            .collect();
        expected.sort_unstable();
        got.sort_unstable();
        assert_eq!(got, expected, "n={n}");
    }
    assert_eq!(all_ideals(&all_partitions(3)).len(), 9);
    assert_eq!(all_ideals(&all_partitions(4)).len(), IDEALS_N4);
}

/// Library context ideals as oracle masks, in context order.
fn oracle_context(context: &PropertySubset, inv: &[usize]) -> Vec<u64> {
    context.ideals().iter().map(|ideal| to_oracle_mask(ideal.members().iter(), inv)).collect()
}

#[test]
fn full_p3_classes_match_brute_force() {
    let lattice = Arc::new(PartitionLattice::new(3).unwrap());
    let parts = all_partitions(3);
    let inv = inverse(&index_map(&lattice, &parts));
    let context = Arc::new(PropertySubset::full(lattice).unwrap());
    let ctx = oracle_context(&context, &inv);
    let filters = enumerate_filters(&context, DEFAULT_FILTER_CAP).unwrap();
    assert_eq!(filters.len(), all_up_sets(&ctx).len());
    assert_eq!(filters.len(), FILTERS_N3);
    let mut nonempty = 0;
    for f in &filters {
        let bits = f.members().iter().fold(0u64, |acc, i| acc | 1 << i);
        let expected = class_types(&ctx, parts.len(), bits);
        assert_eq!(to_oracle_mask(type_set(f).iter(), &inv), expected, "{}", f.label());
        assert_eq!(class_exists(f).exists, expected != 0, "{}", f.label());
        nonempty += (expected != 0) as usize;
    }
    assert_eq!(nonempty, 5);
    assert_eq!(finest_catalog(3).unwrap().class_count(), distinct_signatures(&ctx, parts.len()));
}

fn brute_catalog_count(n: usize, context: impl Fn(Arc<PartitionLattice>) -> PropertySubset) -> usize {
    let lattice = Arc::new(PartitionLattice::new(n).unwrap());
    let parts = all_partitions(n);
    let inv = inverse(&index_map(&lattice, &parts));
    distinct_signatures(&oracle_context(&context(lattice), &inv), parts.len())
}

#[test]
fn antichain_catalogs_match_brute_force() {
    for n in 3..=5 {
        let atoms = brute_catalog_count(n, |l| PropertySubset::atoms(l).unwrap());
        assert_eq!(atom_antichain_catalog(n).unwrap().class_count(), atoms, "atoms n={n}");
        assert_eq!(atoms, binomial(n, 2) + 1);
        let coatoms = brute_catalog_count(n, |l| PropertySubset::coatoms(l).unwrap());
        assert_eq!(coatom_antichain_catalog(n).unwrap().class_count(), coatoms, "coatoms n={n}");
        assert_eq!(coatoms as u64, bell(n) - 1);
    }
    assert_eq!(coatom_antichain_catalog(4).unwrap().class_count(), COATOM_CLASSES_N4);
    assert_eq!(coatom_antichain_catalog(5).unwrap().class_count(), COATOM_CLASSES_N5);
}

#[test]
fn chain_catalogs_match_brute_force() {
    for n in 2..=5 {
        let part = brute_catalog_count(n, |l| PropertySubset::k_partitionability(l).unwrap());
        let prod = brute_catalog_count(n, |l| PropertySubset::k_producibility(l).unwrap());
        assert_eq!(part, n);
        assert_eq!(prod, n);
        assert_eq!(k_partitionability_catalog(n).unwrap().class_count(), n);
        assert_eq!(k_producibility_catalog(n).unwrap().class_count(), n);
    }
}
