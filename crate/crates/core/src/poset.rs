//! Finite posets over the index set `0..m`.
//!
//! The order relation is stored densely: for every element we keep the set of
//! its predecessors (`j ⪯ i`) and the set of its successors (`i ⪯ j`). All set
//! arguments and results are [`ElementSet`]s over the same index space.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("element index {index} out of range for poset of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("element set has domain {got}, expected {expected}")]
    DomainMismatch { expected: usize, got: usize },
    #[error("relation is not reflexive at element {0}")]
    NotReflexive(usize),
    #[error("relation is not antisymmetric: {0} and {1} are mutually related")]
    NotAntisymmetric(usize, usize),
    #[error("relation is not transitive: {low} ⪯ {mid} ⪯ {high} but not {low} ⪯ {high}")]
    NotTransitive { low: usize, mid: usize, high: usize },
    #[error("poset has no bottom element")]
    NoBottom,
    #[error("poset has no top element")]
    NoTop,
    #[error("enumeration cap of {0} sets exceeded")]
    CapExceeded(usize),
}

/// A subset of the elements of a poset, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(FixedBitSet);

impl ElementSet {
    pub fn empty(domain: usize) -> Self {
        ElementSet(FixedBitSet::with_capacity(domain))
    }

    pub fn full(domain: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(domain);
        bits.insert_range(..);
        ElementSet(bits)
    }

    pub fn singleton(domain: usize, element: usize) -> Self {
        let mut set = Self::empty(domain);
        set.insert(element);
        set
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(domain: usize, indices: I) -> Self {
        let mut set = Self::empty(domain);
        for i in indices {
            set.insert(i);
        }
        set
    }

    pub fn from_bits(bits: FixedBitSet) -> Self {
        ElementSet(bits)
    }

    pub fn as_bits(&self) -> &FixedBitSet {
        &self.0
    }

    /// Size of the index space this set lives in.
    pub fn domain(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, element: usize) -> bool {
        self.0.contains(element)
    }

    /// Panics if `element` is outside the domain.
    pub fn insert(&mut self, element: usize) {
        self.0.insert(element);
    }

    pub fn remove(&mut self, element: usize) {
        self.0.set(element, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.ones().next()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.0.union_with(&other.0);
        out
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.0.intersect_with(&other.0);
        out
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.0.difference_with(&other.0);
        out
    }

    pub fn complement(&self) -> ElementSet {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite partially ordered set on the indices `0..len()`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    below: Vec<ElementSet>,
    above: Vec<ElementSet>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset").field("len", &self.len()).field("covers", &self.covers()).finish()
    }
}

impl Poset {
    /// Builds a poset from an arbitrary relation given as `(lower, upper)`
    /// pairs. The relation is reflexively and transitively closed; the result
    /// must be antisymmetric.
    pub fn from_relation<I>(len: usize, pairs: I) -> Result<Self, PosetError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut below: Vec<ElementSet> = (0..len).map(|i| ElementSet::singleton(len, i)).collect();
        for (lo, hi) in pairs {
            check_index(lo, len)?;
            check_index(hi, len)?;
            below[hi].insert(lo);
        }
        // Warshall on bitsets: after step k, paths through 0..=k are closed.
        for k in 0..len {
            let below_k = below[k].clone();
            for set in below.iter_mut() {
                if set.contains(k) {
                    set.union_with(&below_k);
                }
            }
        }
        Self::validated(below)
    }

    /// Builds a poset from a predicate `leq(a, b)`, checking all three axioms.
    pub fn from_predicate<F>(len: usize, mut leq: F) -> Result<Self, PosetError>
    where
        F: FnMut(usize, usize) -> bool,
    {
        let below = (0..len).map(|i| ElementSet::from_indices(len, (0..len).filter(|&j| leq(j, i)))).collect();
        Self::validated(below)
    }

    /// Builds a poset from predecessor sets (`below[i]` = all `j ⪯ i`),
    /// checking all three axioms.
    pub fn from_predecessor_sets(below: Vec<ElementSet>) -> Result<Self, PosetError> {
        let len = below.len();
        for set in &below {
            if set.domain() != len {
                return Err(PosetError::DomainMismatch { expected: len, got: set.domain() });
            }
        }
        Self::validated(below)
    }

    fn validated(below: Vec<ElementSet>) -> Result<Self, PosetError> {
        let len = below.len();
        for (i, set) in below.iter().enumerate() {
            if !set.contains(i) {
                return Err(PosetError::NotReflexive(i));
            }
        }
        for (i, set) in below.iter().enumerate() {
            for j in set.iter() {
                if j != i && below[j].contains(i) {
                    return Err(PosetError::NotAntisymmetric(j.min(i), j.max(i)));
                }
                if !below[j].is_subset(set) {
                    let low = below[j].difference(set).first().unwrap_or(j);
                    return Err(PosetError::NotTransitive { low, mid: j, high: i });
                }
            }
        }
        let mut above: Vec<ElementSet> = (0..len).map(|_| ElementSet::empty(len)).collect();
        for (i, set) in below.iter().enumerate() {
            for j in set.iter() {
                above[j].insert(i);
            }
        }
        Ok(Poset { below, above })
    }

    /// The `m`-element antichain.
    pub fn antichain(len: usize) -> Self {
        Self::from_relation(len, std::iter::empty()).expect("discrete order is valid")
    }

    /// The chain `0 ⪯ 1 ⪯ … ⪯ m-1`.
    pub fn chain(len: usize) -> Self {
        Self::from_relation(len, (1..len).map(|i| (i - 1, i))).expect("chain is valid")
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    /// The order-dual poset (same indices, reversed relation).
    pub fn dual(&self) -> Poset {
        Poset { below: self.above.clone(), above: self.below.clone() }
    }

    pub fn check_index(&self, index: usize) -> Result<(), PosetError> {
        check_index(index, self.len())
    }

    pub fn check_set(&self, set: &ElementSet) -> Result<(), PosetError> {
        if set.domain() != self.len() {
            return Err(PosetError::DomainMismatch { expected: self.len(), got: set.domain() });
        }
        Ok(())
    }

    pub fn leq(&self, a: usize, b: usize) -> Result<bool, PosetError> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(self.below[b].contains(a))
    }

    /// Unchecked `a ⪯ b`; panics on out-of-range indices.
    #[inline]
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    /// `↓{x}`, including `x`.
    pub fn predecessors(&self, x: usize) -> &ElementSet {
        &self.below[x]
    }

    /// `↑{x}`, including `x`.
    pub fn successors(&self, x: usize) -> &ElementSet {
        &self.above[x]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    pub fn down_closure(&self, set: &ElementSet) -> Result<ElementSet, PosetError> {
        self.check_set(set)?;
        Ok(closure(&self.below, set))
    }

    pub fn up_closure(&self, set: &ElementSet) -> Result<ElementSet, PosetError> {
        self.check_set(set)?;
        Ok(closure(&self.above, set))
    }

    pub fn is_down_set(&self, set: &ElementSet) -> bool {
        set.domain() == self.len() && set.iter().all(|x| self.below[x].is_subset(set))
    }

    pub fn is_up_set(&self, set: &ElementSet) -> bool {
        set.domain() == self.len() && set.iter().all(|x| self.above[x].is_subset(set))
    }

    pub fn minimal(&self, set: &ElementSet) -> Result<ElementSet, PosetError> {
        self.check_set(set)?;
        Ok(extremal(&self.below, set))
    }

    pub fn maximal(&self, set: &ElementSet) -> Result<ElementSet, PosetError> {
        self.check_set(set)?;
        Ok(extremal(&self.above, set))
    }

    /// Greatest lower bound of `a` and `b`, if one exists.
    pub fn meet(&self, a: usize, b: usize) -> Result<Option<usize>, PosetError> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(bound(&self.below, a, b))
    }

    /// Least upper bound of `a` and `b`, if one exists.
    pub fn join(&self, a: usize, b: usize) -> Result<Option<usize>, PosetError> {
        self.check_index(a)?;
        self.check_index(b)?;
        Ok(bound(&self.above, a, b))
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.above[i].len() == self.len())
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.below[i].len() == self.len())
    }

    /// Elements whose only strict predecessor is the bottom.
    pub fn atoms(&self) -> Result<ElementSet, PosetError> {
        let bottom = self.bottom().ok_or(PosetError::NoBottom)?;
        Ok(ElementSet::from_indices(self.len(), (0..self.len()).filter(|&x| x != bottom && self.below[x].len() == 2)))
    }

    /// Elements whose only strict successor is the top.
    pub fn coatoms(&self) -> Result<ElementSet, PosetError> {
        let top = self.top().ok_or(PosetError::NoTop)?;
        Ok(ElementSet::from_indices(self.len(), (0..self.len()).filter(|&x| x != top && self.above[x].len() == 2)))
    }

    pub fn is_chain(&self, set: &ElementSet) -> Result<bool, PosetError> {
        self.check_set(set)?;
        let members = set.to_vec();
        let all_comparable = pairs(&members).all(|(a, b)| self.comparable(a, b));
        Ok(all_comparable)
    }

    pub fn is_antichain(&self, set: &ElementSet) -> Result<bool, PosetError> {
        self.check_set(set)?;
        let members = set.to_vec();
        let none_comparable = pairs(&members).all(|(a, b)| !self.comparable(a, b));
        Ok(none_comparable)
    }

    /// Covering pairs `(lower, upper)`: `lower ≺ upper` with nothing strictly
    /// in between. These are the edges of the Hasse diagram.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for upper in 0..self.len() {
            let mut strict = self.below[upper].clone();
            strict.remove(upper);
            let lower_covers = extremal(&self.above, &strict);
            edges.extend(lower_covers.iter().map(|lower| (lower, upper)));
        }
        edges.sort_unstable();
        edges
    }

    /// A fixed linear extension: elements sorted by the size of their
    /// principal down-set, ties broken by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| (self.below[i].len(), i));
        order
    }

    /// Streams every down-set in lexicographic order of the linear extension
    /// (exclusion before inclusion), so the empty set comes first when
    /// `include_empty` is set. At most `cap` sets are yielded; asking for one
    /// more yields [`PosetError::CapExceeded`] and ends the stream.
    pub fn down_sets(&self, include_empty: bool, cap: usize) -> DownSets<'_> {
        DownSets::new(&self.below, self.linear_extension(), include_empty, cap)
    }

    /// Streams every up-set; the dual of [`Poset::down_sets`].
    pub fn up_sets(&self, include_empty: bool, cap: usize) -> DownSets<'_> {
        let mut order = self.linear_extension();
        order.reverse();
        DownSets::new(&self.above, order, include_empty, cap)
    }
}

fn check_index(index: usize, size: usize) -> Result<(), PosetError> {
    if index >= size {
        Err(PosetError::IndexOutOfRange { index, size })
    } else {
        Ok(())
    }
}

fn pairs(items: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    items.iter().enumerate().flat_map(move |(i, &a)| items[i + 1..].iter().map(move |&b| (a, b)))
}

fn closure(relation: &[ElementSet], set: &ElementSet) -> ElementSet {
    let mut out = set.clone();
    for x in set.iter() {
        out.union_with(&relation[x]);
    }
    out
}

// Elements of `set` with no other member of `set` in `relation[x]`.
fn extremal(relation: &[ElementSet], set: &ElementSet) -> ElementSet {
    ElementSet::from_indices(set.domain(), set.iter().filter(|&x| relation[x].intersection(set).len() == 1))
}

fn bound(relation: &[ElementSet], a: usize, b: usize) -> Option<usize> {
    let common = relation[a].intersection(&relation[b]);
    // The bound is the member of `common` that dominates all of `common`.
    let dominates = |x: usize| -> bool { common.iter().all(|y| relation[x].contains(y)) };
    let found = common.iter().find(|&x| dominates(x));
    found
}

/// Streaming enumerator returned by [`Poset::down_sets`] and [`Poset::up_sets`].
///
/// Walks the binary decision tree over a linear extension. Including an
/// element requires its strict predecessors to be included already; every
/// partial assignment extends to a valid set, so no branch is dead.
pub struct DownSets<'a> {
    relation: &'a [ElementSet],
    order: Vec<usize>,
    included: Vec<bool>,
    current: ElementSet,
    emitted: usize,
    cap: usize,
    started: bool,
    include_empty: bool,
    done: bool,
}

impl<'a> DownSets<'a> {
    fn new(relation: &'a [ElementSet], order: Vec<usize>, include_empty: bool, cap: usize) -> Self {
        let len = order.len();
        DownSets {
            relation,
            order,
            included: vec![false; len],
            current: ElementSet::empty(len),
            emitted: 0,
            cap,
            started: false,
            include_empty,
            done: false,
        }
    }

    fn advance(&mut self) -> bool {
        for pos in (0..self.order.len()).rev() {
            let x = self.order[pos];
            if self.included[pos] {
                self.included[pos] = false;
                self.current.remove(x);
                continue;
            }
            let allowed = self.relation[x].iter().all(|y| y == x || self.current.contains(y));
            if allowed {
                self.included[pos] = true;
                self.current.insert(x);
                return true;
            }
        }
        false
    }
}

impl Iterator for DownSets<'_> {
    type Item = Result<ElementSet, PosetError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let has_next = if !self.started {
            self.started = true;
            self.include_empty || self.advance()
        } else {
            self.advance()
        };
        if !has_next {
            self.done = true;
            return None;
        }
        if self.emitted == self.cap {
            self.done = true;
            return Some(Err(PosetError::CapExceeded(self.cap)));
        }
        self.emitted += 1;
        Some(Ok(self.current.clone()))
    }
}
