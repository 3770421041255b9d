//! Subsystems and set partitions of the party set `L = {1, …, n}`, ordered by
//! refinement.
//!
//! Parties are 0-based internally and 1-based in every textual form. The bar
//! notation `12|3` and the set notation `{{1,2},{3}}` both parse; display uses
//! bar notation for `n ≤ 9`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::poset::{ElementSet, Poset, PosetError};

/// Hard limit on the number of parties a mask can hold.
pub const MAX_PARTIES: usize = 32;

/// Default cap on `n` for building a full partition lattice.
pub const DEFAULT_MAX_N: usize = 8;

/// Meet/join tables are precomputed only up to this many parties.
pub const TABLE_MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("number of parties {n} outside 1..={max}")]
    PartiesOutOfRange { n: usize, max: usize },
    #[error("partitions over {0} and {1} parties cannot be combined")]
    MismatchedParties(usize, usize),
    #[error("blocks do not form a partition of {n} parties: {reason}")]
    InvalidBlocks { n: usize, reason: &'static str },
    #[error("cannot parse partition {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("partition {0} does not belong to this lattice")]
    NotInLattice(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A subsystem `X ⊆ L`, one bit per party.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsystemMask(u32);

impl SubsystemMask {
    pub const EMPTY: SubsystemMask = SubsystemMask(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsystemMask(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            SubsystemMask(u32::MAX)
        } else {
            SubsystemMask((1u32 << n) - 1)
        }
    }

    pub fn singleton(party: usize) -> Self {
        SubsystemMask(1 << party)
    }

    pub fn from_parties<I: IntoIterator<Item = usize>>(parties: I) -> Self {
        SubsystemMask(parties.into_iter().fold(0, |acc, p| acc | (1 << p)))
    }

    pub fn contains(self, party: usize) -> bool {
        self.0 >> party & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Smallest party, if any.
    pub fn least(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn is_subset(self, other: SubsystemMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: SubsystemMask) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: SubsystemMask) -> Self {
        SubsystemMask(self.0 | other.0)
    }

    pub fn intersection(self, other: SubsystemMask) -> Self {
        SubsystemMask(self.0 & other.0)
    }

    pub fn parties(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |p| bits >> p & 1 == 1)
    }
}

impl fmt::Debug for SubsystemMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.parties().map(|p| p + 1)).finish()
    }
}

/// A set partition of `n` parties in canonical form: blocks sorted by their
/// least party.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    n: usize,
    blocks: Vec<SubsystemMask>,
}

impl Partition {
    /// Validates and canonicalizes a list of blocks.
    pub fn from_blocks(n: usize, mut blocks: Vec<SubsystemMask>) -> Result<Self, PartitionError> {
        check_parties(n, MAX_PARTIES)?;
        let mut seen = SubsystemMask::EMPTY;
        for &block in &blocks {
            if block.is_empty() {
                return Err(PartitionError::InvalidBlocks { n, reason: "empty block" });
            }
            if !block.is_subset(SubsystemMask::full(n)) {
                return Err(PartitionError::InvalidBlocks { n, reason: "party out of range" });
            }
            if block.intersects(seen) {
                return Err(PartitionError::InvalidBlocks { n, reason: "blocks overlap" });
            }
            seen = seen.union(block);
        }
        if seen != SubsystemMask::full(n) {
            return Err(PartitionError::InvalidBlocks { n, reason: "blocks do not cover all parties" });
        }
        blocks.sort_by_key(|b| b.least());
        Ok(Partition { n, blocks })
    }

    /// Builds the partition of a restricted-growth string: party `i` goes to
    /// block `rgs[i]`.
    pub fn from_rgs(rgs: &[usize]) -> Self {
        let parts = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![SubsystemMask::EMPTY; parts];
        for (party, &b) in rgs.iter().enumerate() {
            blocks[b] = blocks[b].union(SubsystemMask::singleton(party));
        }
        Partition { n: rgs.len(), blocks }
    }

    /// `⊥ = 1|2|…|n`, the finest partition.
    pub fn finest(n: usize) -> Self {
        Partition { n, blocks: (0..n).map(SubsystemMask::singleton).collect() }
    }

    /// `{L}`, the coarsest partition.
    pub fn coarsest(n: usize) -> Self {
        Partition { n, blocks: vec![SubsystemMask::full(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[SubsystemMask] {
        &self.blocks
    }

    pub fn parts_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn max_part_size(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    /// Restricted-growth string of this partition.
    pub fn rgs(&self) -> Vec<usize> {
        let mut rgs = vec![0; self.n];
        for (i, block) in self.blocks.iter().enumerate() {
            for p in block.parties() {
                rgs[p] = i;
            }
        }
        rgs
    }

    fn same_n(&self, other: &Partition) -> Result<(), PartitionError> {
        if self.n != other.n {
            return Err(PartitionError::MismatchedParties(self.n, other.n));
        }
        Ok(())
    }

    /// `self ⪯ other`: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> Result<bool, PartitionError> {
        self.same_n(other)?;
        Ok(self.refines_unchecked(other))
    }

    pub(crate) fn refines_unchecked(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|y| other.blocks.iter().any(|x| y.is_subset(*x)))
    }

    /// Greatest common refinement: all nonempty pairwise block intersections.
    pub fn meet(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.same_n(other)?;
        let mut blocks: Vec<SubsystemMask> = self
            .blocks
            .iter()
            .flat_map(|x| other.blocks.iter().map(move |y| x.intersection(*y)))
            .filter(|b| !b.is_empty())
            .collect();
        blocks.sort_by_key(|b| b.least());
        Ok(Partition { n: self.n, blocks })
    }

    /// Finest common coarsening: connected components of the block overlap
    /// graph.
    pub fn join(&self, other: &Partition) -> Result<Partition, PartitionError> {
        self.same_n(other)?;
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for block in self.blocks.iter().chain(other.blocks.iter()) {
            let mut parties = block.parties();
            if let Some(first) = parties.next() {
                for p in parties {
                    let (a, b) = (root(&mut parent, first), root(&mut parent, p));
                    parent[b] = a;
                }
            }
        }
        let mut components: HashMap<usize, SubsystemMask> = HashMap::new();
        for p in 0..self.n {
            let r = root(&mut parent, p);
            let entry = components.entry(r).or_default();
            *entry = entry.union(SubsystemMask::singleton(p));
        }
        let mut merged: Vec<SubsystemMask> = components.into_values().collect();
        merged.sort_by_key(|b| b.least());
        Ok(Partition { n: self.n, blocks: merged })
    }

    /// Bar notation with letters, blocks ordered by decreasing size:
    /// `12|3` and `13|2` both become `ab|c`.
    pub fn shape(&self) -> String {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        let mut next = 0u8;
        let parts: Vec<String> = sizes
            .into_iter()
            .map(|size| {
                (0..size)
                    .map(|_| {
                        let c = letter(next);
                        next += 1;
                        c
                    })
                    .collect()
            })
            .collect();
        parts.join("|")
    }

    /// Product-state form of the shape, e.g. `ρ_ab⊗ρ_c`.
    pub fn state_shape(&self) -> String {
        self.shape().split('|').map(|b| format!("ρ_{b}")).collect::<Vec<_>>().join("⊗")
    }

    /// Set notation `{{1,2},{3}}`.
    pub fn set_notation(&self) -> String {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let parties: Vec<String> = b.parties().map(|p| (p + 1).to_string()).collect();
                format!("{{{}}}", parties.join(","))
            })
            .collect();
        format!("{{{}}}", blocks.join(","))
    }

    /// Parses bar or set notation for a partition of exactly `n` parties.
    pub fn parse(input: &str, n: usize) -> Result<Self, PartitionError> {
        let p: Partition = input.parse()?;
        if p.n != n {
            return Err(PartitionError::Parse {
                input: input.to_string(),
                reason: format!("covers {} parties, expected {n}", p.n),
            });
        }
        Ok(p)
    }
}

fn letter(i: u8) -> char {
    (b'a' + i % 26) as char
}

fn check_parties(n: usize, max: usize) -> Result<(), PartitionError> {
    if n == 0 || n > max.min(MAX_PARTIES) {
        return Err(PartitionError::PartiesOutOfRange { n, max: max.min(MAX_PARTIES) });
    }
    Ok(())
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n > 9 {
            return f.write_str(&self.set_notation());
        }
        let blocks: Vec<String> =
            self.blocks.iter().map(|b| b.parties().map(|p| char::from(b'1' + p as u8)).collect()).collect();
        f.write_str(&blocks.join("|"))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = PartitionError;

    /// The number of parties is inferred as the largest label present.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| PartitionError::Parse { input: s.to_string(), reason: reason.to_string() };
        let trimmed = s.trim();
        let blocks: Vec<Vec<usize>> = if trimmed.starts_with('{') {
            let inner = trimmed
                .strip_prefix('{')
                .and_then(|t| t.strip_suffix('}'))
                .ok_or_else(|| err("unbalanced braces"))?
                .trim();
            let mut blocks = Vec::new();
            let mut rest = inner;
            while !rest.is_empty() {
                let rest_trim = rest.trim_start_matches([',', ' ']);
                if rest_trim.is_empty() {
                    break;
                }
                let body = rest_trim.strip_prefix('{').ok_or_else(|| err("expected '{'"))?;
                let close = body.find('}').ok_or_else(|| err("unbalanced braces"))?;
                let labels = body[..close]
                    .split(',')
                    .map(|t| t.trim().parse::<usize>().map_err(|_| err("bad party label")))
                    .collect::<Result<Vec<_>, _>>()?;
                blocks.push(labels);
                rest = &body[close + 1..];
            }
            blocks
        } else {
            trimmed
                .split('|')
                .map(|block| {
                    block
                        .trim()
                        .chars()
                        .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| err("bad party label")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        let n = blocks.iter().flatten().copied().max().ok_or_else(|| err("no parties"))?;
        if blocks.iter().flatten().any(|&p| p == 0) {
            return Err(err("party labels start at 1"));
        }
        let mut masks = Vec::with_capacity(blocks.len());
        for block in &blocks {
            let mut mask = SubsystemMask::EMPTY;
            for &p in block {
                if p > MAX_PARTIES {
                    return Err(err("party label too large"));
                }
                if mask.contains(p - 1) {
                    return Err(err("repeated party"));
                }
                mask = mask.union(SubsystemMask::singleton(p - 1));
            }
            masks.push(mask);
        }
        Partition::from_blocks(n, masks).map_err(|e| err(&e.to_string()))
    }
}

/// Restricted-growth strings of length `n` in lexicographic order.
pub struct RestrictedGrowth {
    current: Vec<usize>,
    // prefix_max[i] = max(current[..=i])
    prefix_max: Vec<usize>,
    first: bool,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        RestrictedGrowth { current: vec![0; n], prefix_max: vec![0; n], first: true, done: n == 0 }
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.current.clone());
        }
        let n = self.current.len();
        for i in (1..n).rev() {
            if self.current[i] <= self.prefix_max[i - 1] {
                self.current[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.current[i]);
                for j in i + 1..n {
                    self.current[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return Some(self.current.clone());
            }
        }
        self.done = true;
        None
    }
}

/// All partitions of `n` parties with the refinement order.
///
/// Indices follow a fixed linear extension of refinement: partitions are
/// sorted by decreasing number of parts, then by restricted-growth string.
/// Index 0 is always `⊥` and the last index is `{L}`.
pub struct PartitionLattice {
    n: usize,
    partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    order: Poset,
    meet_table: Option<Vec<u32>>,
    join_table: Option<Vec<u32>>,
}

impl fmt::Debug for PartitionLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartitionLattice").field("n", &self.n).field("len", &self.len()).finish()
    }
}

impl PartitionLattice {
    /// Builds the lattice with the default cap on `n`.
    pub fn new(n: usize) -> Result<Self, PartitionError> {
        Self::with_cap(n, DEFAULT_MAX_N)
    }

    pub fn with_cap(n: usize, max_n: usize) -> Result<Self, PartitionError> {
        check_parties(n, max_n)?;
        let mut partitions: Vec<Partition> = RestrictedGrowth::new(n).map(|rgs| Partition::from_rgs(&rgs)).collect();
        // Stable sort keeps restricted-growth order within a rank.
        partitions.sort_by_key(|p| std::cmp::Reverse(p.parts_count()));
        let index = partitions.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let below: Vec<ElementSet> = partitions
            .par_iter()
            .map(|upper| {
                ElementSet::from_indices(
                    partitions.len(),
                    partitions.iter().enumerate().filter(|(_, lower)| lower.refines_unchecked(upper)).map(|(j, _)| j),
                )
            })
            .collect();
        let order = Poset::from_predecessor_sets(below)?;
        let mut lattice = PartitionLattice { n, partitions, index, order, meet_table: None, join_table: None };
        if n <= TABLE_MAX_N {
            lattice.meet_table = Some(lattice.table(|a, b| a.meet(b)));
            lattice.join_table = Some(lattice.table(|a, b| a.join(b)));
        }
        Ok(lattice)
    }

    fn table<F>(&self, op: F) -> Vec<u32>
    where
        F: Fn(&Partition, &Partition) -> Result<Partition, PartitionError> + Sync,
    {
        let m = self.len();
        (0..m)
            .into_par_iter()
            .flat_map_iter(|a| {
                let op = &op;
                (0..m).map(move |b| {
                    let p = op(&self.partitions[a], &self.partitions[b]).expect("same n");
                    self.index[&p] as u32
                })
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition(&self, index: usize) -> &Partition {
        &self.partitions[index]
    }

    pub fn index_of(&self, p: &Partition) -> Result<usize, PartitionError> {
        self.index.get(p).copied().ok_or_else(|| PartitionError::NotInLattice(p.to_string()))
    }

    /// Parses a partition in either notation and returns its index.
    pub fn parse_index(&self, text: &str) -> Result<usize, PartitionError> {
        let p = Partition::parse(text, self.n)?;
        self.index_of(&p)
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.len() - 1
    }

    pub fn refines(&self, a: usize, b: usize) -> bool {
        self.order.le(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        match &self.meet_table {
            Some(t) => t[a * self.len() + b] as usize,
            None => self.index[&self.partitions[a].meet(&self.partitions[b]).expect("same n")],
        }
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        match &self.join_table {
            Some(t) => t[a * self.len() + b] as usize,
            None => self.index[&self.partitions[a].join(&self.partitions[b]).expect("same n")],
        }
    }

    pub fn has_tables(&self) -> bool {
        self.meet_table.is_some()
    }

    /// Set of all partition indices, the domain every ideal lives in.
    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn set_of<I: IntoIterator<Item = usize>>(&self, indices: I) -> ElementSet {
        ElementSet::from_indices(self.len(), indices)
    }

    /// Renders a set of partition indices as `{12|3, 13|2}`.
    pub fn format_set(&self, set: &ElementSet) -> String {
        let items: Vec<String> = set.iter().map(|i| self.partitions[i].to_string()).collect();
        format!("{{{}}}", items.join(", "))
    }
}
