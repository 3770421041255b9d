//! Brute-force reference implementations on raw bitmasks. Nothing here goes
//! through the library's order, closure or classification code.

#![allow(dead_code)]

use std::collections::BTreeSet;

use corrlattice::partitions::SubsystemMask;
use corrlattice::{Partition, PartitionLattice};

/// A partition as its sorted block masks.
pub type Blocks = Vec<u32>;

/// Bell numbers from the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// All partitions of `n` parties, found by labeling every party with a block
/// number in `0..n` in every possible way and deduplicating.
pub fn all_partitions(n: usize) -> Vec<Blocks> {
    let mut seen = BTreeSet::new();
    let total = (n as u64).pow(n as u32);
    for code in 0..total.max(1) {
        let mut blocks = vec![0u32; n];
        let mut c = code;
        for party in 0..n {
            blocks[(c % n as u64) as usize] |= 1 << party;
            c /= n as u64;
        }
        let mut b: Blocks = blocks.into_iter().filter(|&m| m != 0).collect();
        b.sort_unstable();
        seen.insert(b);
    }
    seen.into_iter().collect()
}

pub fn refines(a: &Blocks, b: &Blocks) -> bool {
    a.iter().all(|&x| b.iter().any(|&y| x & y == x))
}

/// Maps oracle partitions to library indices.
pub fn index_map(lattice: &PartitionLattice, parts: &[Blocks]) -> Vec<usize> {
    parts
        .iter()
        .map(|b| {
            let blocks = b.iter().map(|&m| SubsystemMask::from_bits(m)).collect();
            let p = Partition::from_blocks(lattice.n(), blocks).unwrap();
            lattice.index_of(&p).unwrap()
        })
        .collect()
}

/// Nonempty down-sets of `parts` under refinement, as bitmasks over `parts`.
pub fn all_ideals(parts: &[Blocks]) -> Vec<u64> {
    let m = parts.len();
    assert!(m <= 20);
    (1u64..(1 << m))
        .filter(|&bits| {
            (0..m).all(|j| bits >> j & 1 == 0 || (0..m).all(|i| !refines(&parts[i], &parts[j]) || bits >> i & 1 == 1))
        })
        .collect()
}

/// Nonempty up-sets of the inclusion order on `sets`.
pub fn all_up_sets(sets: &[u64]) -> Vec<u64> {
    let k = sets.len();
    assert!(k <= 24);
    (1u64..(1 << k))
        .filter(|&bits| {
            (0..k).all(|j| bits >> j & 1 == 0 || (0..k).all(|i| sets[j] & sets[i] != sets[j] || bits >> i & 1 == 1))
        })
        .collect()
}

/// Types whose signature over `context` (the ideals containing them) is
/// exactly `filter`.
pub fn class_types(context: &[u64], universe: usize, filter: u64) -> u64 {
    (0..universe)
        .filter(|&z| (0..context.len()).all(|i| (context[i] >> z & 1 == 1) == (filter >> i & 1 == 1)))
        .fold(0, |acc, z| acc | 1 << z)
}

/// Number of distinct nonempty signatures, i.e. nonempty classes over the
/// whole filter set of `context`.
pub fn distinct_signatures(context: &[u64], universe: usize) -> usize {
    let sigs: BTreeSet<u64> = (0..universe)
        .map(|z| (0..context.len()).filter(|&i| context[i] >> z & 1 == 1).fold(0u64, |acc, i| acc | 1 << i))
        .filter(|&s| s != 0)
        .collect();
    sigs.len()
}

/// Principal ideal of `parts[j]` as a mask over `parts`.
pub fn principal(parts: &[Blocks], j: usize) -> u64 {
    (0..parts.len()).filter(|&i| refines(&parts[i], &parts[j])).fold(0, |acc, i| acc | 1 << i)
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
