//! Nonempty down-sets of the partition lattice and selected families of them.
//!
//! An [`Ideal`] is a set of partition indices closed downwards under
//! refinement. Ideals are ordered by inclusion, with intersection as meet and
//! union as join. A [`PropertySubset`] is any chosen family of distinct ideals
//! with the inherited inclusion order; it need not be a lattice.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::partitions::{PartitionError, PartitionLattice};
use crate::poset::{ElementSet, Poset, PosetError};

/// Full materialization of all ideals is supported up to this many parties.
pub const MAX_MATERIALIZED_N: usize = 4;

/// Default cap on the number of ideals a single enumeration may produce.
pub const DEFAULT_IDEAL_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdealError {
    #[error("ideal is empty")]
    Empty,
    #[error("set is not closed downwards: contains {present} but not {missing}")]
    NotDownClosed { present: String, missing: String },
    #[error("ideal lives over {got} partitions, expected {expected}")]
    DomainMismatch { expected: usize, got: usize },
    #[error("parameter {name}={value} outside 1..={n}")]
    ParameterOutOfRange { name: &'static str, value: usize, n: usize },
    #[error("full ideal enumeration supports n ≤ {max}, got n = {n}")]
    TooManyParties { n: usize, max: usize },
    #[error("property subset contains a repeated ideal {0}")]
    Duplicate(String),
    #[error("property subset is empty")]
    EmptyFamily,
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A nonempty down-closed set of partitions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    members: ElementSet,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}", self.members)
    }
}

impl Ideal {
    /// Validates that `members` is a nonempty down-set of `lattice`.
    pub fn new(lattice: &PartitionLattice, members: ElementSet) -> Result<Self, IdealError> {
        if members.domain() != lattice.len() {
            return Err(IdealError::DomainMismatch { expected: lattice.len(), got: members.domain() });
        }
        if members.is_empty() {
            return Err(IdealError::Empty);
        }
        for x in members.iter() {
            if let Some(y) = lattice.order().predecessors(x).difference(&members).first() {
                return Err(IdealError::NotDownClosed {
                    present: lattice.partition(x).to_string(),
                    missing: lattice.partition(y).to_string(),
                });
            }
        }
        Ok(Ideal { members })
    }

    /// The down-closure of the given partitions.
    pub fn generated<I>(lattice: &PartitionLattice, generators: I) -> Result<Self, IdealError>
    where
        I: IntoIterator<Item = usize>,
    {
        let gens = lattice.set_of(generators);
        let members = lattice.order().down_closure(&gens)?;
        Ideal::new(lattice, members)
    }

    /// `↓{ξ}`.
    pub fn principal(lattice: &PartitionLattice, partition: usize) -> Self {
        Ideal { members: lattice.order().predecessors(partition).clone() }
    }

    /// Parses a comma-separated list of generating partitions, e.g.
    /// `12|3, 13|2`, and returns their down-closure.
    pub fn parse(lattice: &PartitionLattice, text: &str) -> Result<Self, IdealError> {
        let gens = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| lattice.parse_index(t))
            .collect::<Result<Vec<_>, _>>()?;
        Ideal::generated(lattice, gens)
    }

    /// `μ_k`: partitions with at least `k` parts.
    pub fn k_partitionable(lattice: &PartitionLattice, k: usize) -> Result<Self, IdealError> {
        check_param("k", k, lattice.n())?;
        let members = lattice.set_of((0..lattice.len()).filter(|&i| lattice.partition(i).parts_count() >= k));
        Ideal::new(lattice, members)
    }

    /// `ν_k'`: partitions whose parts have at most `k'` parties each.
    pub fn k_producible(lattice: &PartitionLattice, k: usize) -> Result<Self, IdealError> {
        check_param("k'", k, lattice.n())?;
        let members = lattice.set_of((0..lattice.len()).filter(|&i| lattice.partition(i).max_part_size() <= k));
        Ideal::new(lattice, members)
    }

    pub fn members(&self) -> &ElementSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, partition: usize) -> bool {
        self.members.contains(partition)
    }

    pub fn is_subset(&self, other: &Ideal) -> bool {
        self.members.is_subset(&other.members)
    }

    /// Intersection; never empty since both sides contain `⊥`.
    pub fn meet(&self, other: &Ideal) -> Ideal {
        Ideal { members: self.members.intersection(&other.members) }
    }

    pub fn join(&self, other: &Ideal) -> Ideal {
        Ideal { members: self.members.union(&other.members) }
    }

    /// Maximal elements; the ideal is their down-closure.
    pub fn generators(&self, lattice: &PartitionLattice) -> ElementSet {
        lattice.order().maximal(&self.members).expect("ideal domain checked at construction")
    }

    /// `↓{12|3, 13|2}` style label.
    pub fn label(&self, lattice: &PartitionLattice) -> String {
        format!("↓{}", lattice.format_set(&self.generators(lattice)))
    }

    /// Plain generator list `12|3, 13|2`, the custom-context file syntax.
    pub fn generator_list(&self, lattice: &PartitionLattice) -> String {
        self.generators(lattice).iter().map(|i| lattice.partition(i).to_string()).collect::<Vec<_>>().join(", ")
    }
}

fn check_param(name: &'static str, value: usize, n: usize) -> Result<(), IdealError> {
    if value == 0 || value > n {
        return Err(IdealError::ParameterOutOfRange { name, value, n });
    }
    Ok(())
}

/// Outcome of checking the partitionability and producibility chains.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub n: usize,
    pub pairs_checked: usize,
    pub violations: Vec<String>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `μ_l ⊆ μ_k ⇔ l ≥ k` and `ν_l ⊆ ν_k ⇔ l ≤ k` for all `k, l` in
/// `1..=n`, plus the shared endpoints `μ_1 = ν_n = P_I` and `μ_n = ν_1 = {⊥}`.
pub fn chain_check_part_prod(lattice: &PartitionLattice) -> ChainReport {
    let n = lattice.n();
    let mu: Vec<Ideal> = (1..=n).map(|k| Ideal::k_partitionable(lattice, k).expect("k in range")).collect();
    let nu: Vec<Ideal> = (1..=n).map(|k| Ideal::k_producible(lattice, k).expect("k in range")).collect();
    let mut report = ChainReport { n, ..Default::default() };
    for k in 1..=n {
        for l in 1..=n {
            report.pairs_checked += 2;
            if mu[l - 1].is_subset(&mu[k - 1]) != (l >= k) {
                report.violations.push(format!("μ_{l} ⊆ μ_{k} should be {}", l >= k));
            }
            if nu[l - 1].is_subset(&nu[k - 1]) != (l <= k) {
                report.violations.push(format!("ν_{l} ⊆ ν_{k} should be {}", l <= k));
            }
        }
    }
    let everything = lattice.full_set();
    let bottom = lattice.set_of([lattice.bottom()]);
    if *mu[0].members() != everything || *nu[n - 1].members() != everything {
        report.violations.push("μ_1 and ν_n must both equal P_I".to_string());
    }
    if *mu[n - 1].members() != bottom || *nu[0].members() != bottom {
        report.violations.push("μ_n and ν_1 must both equal {⊥}".to_string());
    }
    report
}

/// A chosen family of distinct ideals ordered by inclusion.
#[derive(Clone)]
pub struct PropertySubset {
    lattice: Arc<PartitionLattice>,
    ideals: Vec<Ideal>,
    order: Poset,
    name: String,
}

impl fmt::Debug for PropertySubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PropertySubset")
            .field("name", &self.name)
            .field("n", &self.lattice.n())
            .field("len", &self.ideals.len())
            .finish()
    }
}

impl PartialEq for PropertySubset {
    fn eq(&self, other: &Self) -> bool {
        self.lattice.n() == other.lattice.n() && self.ideals == other.ideals
    }
}

impl Eq for PropertySubset {}

impl PropertySubset {
    pub fn new(
        lattice: Arc<PartitionLattice>,
        ideals: Vec<Ideal>,
        name: impl Into<String>,
    ) -> Result<Self, IdealError> {
        if ideals.is_empty() {
            return Err(IdealError::EmptyFamily);
        }
        for (i, a) in ideals.iter().enumerate() {
            if a.members.domain() != lattice.len() {
                return Err(IdealError::DomainMismatch { expected: lattice.len(), got: a.members.domain() });
            }
            if ideals[..i].contains(a) {
                return Err(IdealError::Duplicate(a.label(&lattice)));
            }
        }
        let order = Poset::from_predicate(ideals.len(), |a, b| ideals[a].is_subset(&ideals[b]))?;
        Ok(PropertySubset { lattice, ideals, order, name: name.into() })
    }

    /// `P_II` itself: every nonempty down-set of `P_I`.
    pub fn full(lattice: Arc<PartitionLattice>) -> Result<Self, IdealError> {
        let ideals = enumerate_ideals(&lattice, DEFAULT_IDEAL_CAP)?;
        Self::new(lattice, ideals, "full")
    }

    /// `{μ_1, …, μ_n}`, listed from `μ_1 = P_I` down to `μ_n = {⊥}`.
    pub fn k_partitionability(lattice: Arc<PartitionLattice>) -> Result<Self, IdealError> {
        let ideals = (1..=lattice.n()).map(|k| Ideal::k_partitionable(&lattice, k)).collect::<Result<_, _>>()?;
        Self::new(lattice, ideals, "k_part")
    }

    /// `{ν_1, …, ν_n}`, listed from `ν_1 = {⊥}` up to `ν_n = P_I`.
    pub fn k_producibility(lattice: Arc<PartitionLattice>) -> Result<Self, IdealError> {
        let ideals = (1..=lattice.n()).map(|k| Ideal::k_producible(&lattice, k)).collect::<Result<_, _>>()?;
        Self::new(lattice, ideals, "k_prod")
    }

    /// Principal ideals of the atoms of `P_I` (the `(n−1)`-part partitions).
    pub fn atoms(lattice: Arc<PartitionLattice>) -> Result<Self, IdealError> {
        let atoms = lattice.order().atoms()?;
        let ideals = atoms.iter().map(|i| Ideal::principal(&lattice, i)).collect();
        Self::new(lattice, ideals, "atoms")
    }

    /// Principal ideals of the coatoms of `P_I` (the bipartitions).
    pub fn coatoms(lattice: Arc<PartitionLattice>) -> Result<Self, IdealError> {
        let coatoms = lattice.order().coatoms()?;
        let ideals = coatoms.iter().map(|i| Ideal::principal(&lattice, i)).collect();
        Self::new(lattice, ideals, "coatoms")
    }

    /// Custom family, one ideal per nonblank line given by its generators
    /// (`12|3, 13|2`). Lines starting with `#` are ignored.
    pub fn parse(lattice: Arc<PartitionLattice>, text: &str) -> Result<Self, IdealError> {
        let ideals = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| Ideal::parse(&lattice, l))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(lattice, ideals, "custom")
    }

    /// Selects a sub-family by index.
    pub fn subset(&self, indices: &[usize], name: impl Into<String>) -> Result<Self, IdealError> {
        let ideals = indices.iter().map(|&i| self.ideals[i].clone()).collect();
        Self::new(self.lattice.clone(), ideals, name)
    }

    pub fn lattice(&self) -> &Arc<PartitionLattice> {
        &self.lattice
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn ideal(&self, index: usize) -> &Ideal {
        &self.ideals[index]
    }

    pub fn position(&self, ideal: &Ideal) -> Option<usize> {
        self.ideals.iter().position(|i| i == ideal)
    }

    pub fn order(&self) -> &Poset {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_chain(&self) -> bool {
        self.order.is_chain(&ElementSet::full(self.len())).expect("own domain")
    }

    pub fn is_antichain(&self) -> bool {
        self.order.is_antichain(&ElementSet::full(self.len())).expect("own domain")
    }

    /// Union of all member ideals: the partitions some property covers.
    pub fn covered(&self) -> ElementSet {
        let mut out = ElementSet::empty(self.lattice.len());
        for ideal in &self.ideals {
            out.union_with(ideal.members());
        }
        out
    }

    pub fn export(&self) -> PosetExport {
        let nodes = self
            .ideals
            .iter()
            .enumerate()
            .map(|(id, ideal)| ExportNode {
                id,
                label: ideal.label(&self.lattice),
                generators: ideal
                    .generators(&self.lattice)
                    .iter()
                    .map(|i| self.lattice.partition(i).to_string())
                    .collect(),
                size: ideal.len(),
            })
            .collect();
        PosetExport { n: self.lattice.n(), context: self.name.clone(), nodes, edges: self.order.covers() }
    }
}

/// JSON shape of an exported ideal poset. Edges are covering pairs
/// `[lower, upper]` of inclusion.
#[derive(Debug, Clone, Serialize)]
pub struct PosetExport {
    pub n: usize,
    pub context: String,
    pub nodes: Vec<ExportNode>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExportNode {
    pub id: usize,
    pub label: String,
    pub generators: Vec<String>,
    pub size: usize,
}

/// Streams every nonempty ideal of `P_I`, in the deterministic down-set
/// order of [`Poset::down_sets`]. Works for any `n`; the stream ends with
/// [`PosetError::CapExceeded`] once `cap` ideals have been produced.
pub fn stream_ideals(lattice: &PartitionLattice, cap: usize) -> impl Iterator<Item = Result<Ideal, IdealError>> + '_ {
    lattice.order().down_sets(false, cap).map(|r| r.map(|members| Ideal { members }).map_err(IdealError::from))
}

/// Materializes all of `P_II`. Restricted to `n ≤ 4`.
pub fn enumerate_ideals(lattice: &PartitionLattice, cap: usize) -> Result<Vec<Ideal>, IdealError> {
    if lattice.n() > MAX_MATERIALIZED_N {
        return Err(IdealError::TooManyParties { n: lattice.n(), max: MAX_MATERIALIZED_N });
    }
    stream_ideals(lattice, cap).collect()
}

/// `P_II` together with its inclusion order.
pub fn ideal_poset(lattice: Arc<PartitionLattice>) -> Result<PropertySubset, IdealError> {
    PropertySubset::full(lattice)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lattice(n: usize) -> Arc<PartitionLattice> {
        Arc::new(PartitionLattice::new(n).unwrap())
    }

    fn names(lat: &PartitionLattice, ideal: &Ideal) -> Vec<String> {
        ideal.members().iter().map(|i| lat.partition(i).to_string()).collect()
    }

    #[test]
    fn principal_ideals() {
        let lat = lattice(3);
        assert_eq!(names(&lat, &Ideal::principal(&lat, 0)), vec!["1|2|3"]);
        assert_eq!(Ideal::principal(&lat, lat.top()).len(), 5);
        let i = lat.parse_index("12|3").unwrap();
        assert_eq!(names(&lat, &Ideal::principal(&lat, i)), vec!["1|2|3", "12|3"]);
    }

    #[test]
    fn meet_and_join() {
        let lat = lattice(3);
        let a = Ideal::parse(&lat, "12|3").unwrap();
        let b = Ideal::parse(&lat, "13|2").unwrap();
        assert_eq!(a.meet(&a), a);
        assert_eq!(a.meet(&b), Ideal::principal(&lat, 0));
        assert_eq!(names(&lat, &a.join(&b)), vec!["1|2|3", "12|3", "13|2"]);
        assert_eq!(a.join(&b).label(&lat), "↓{12|3, 13|2}");
    }

    #[test]
    fn validation() {
        let lat = lattice(3);
        assert_eq!(Ideal::new(&lat, lat.set_of([])), Err(IdealError::Empty));
        assert!(matches!(Ideal::new(&lat, lat.set_of([1])), Err(IdealError::NotDownClosed { .. })));
        assert!(matches!(
            Ideal::new(&lat, ElementSet::full(4)),
            Err(IdealError::DomainMismatch { expected: 5, got: 4 })
        ));
    }

    #[test]
    fn partitionability_and_producibility() {
        let lat = lattice(3);
        assert_eq!(Ideal::k_partitionable(&lat, 1).unwrap().len(), 5);
        assert_eq!(names(&lat, &Ideal::k_partitionable(&lat, 2).unwrap()), vec!["1|2|3", "12|3", "13|2", "1|23"]);
        assert_eq!(Ideal::k_partitionable(&lat, 3).unwrap(), Ideal::principal(&lat, 0));
        assert_eq!(Ideal::k_producible(&lat, 3).unwrap().len(), 5);
        assert_eq!(Ideal::k_producible(&lat, 1).unwrap(), Ideal::principal(&lat, 0));
        assert!(Ideal::k_partitionable(&lat, 0).is_err());
        assert!(Ideal::k_producible(&lat, 4).is_err());

        let lat4 = lattice(4);
        let nu2 = Ideal::k_producible(&lat4, 2).unwrap();
        assert_eq!(nu2.len(), 10);
        assert!(nu2.members().iter().all(|i| lat4.partition(i).max_part_size() <= 2));
    }

    #[test]
    fn chains_hold() {
        for n in 1..=5 {
            let report = chain_check_part_prod(&lattice(n));
            assert!(report.passed(), "{report:?}");
        }
        // μ_2 and ν_3 are incomparable for n = 4.
        let lat = lattice(4);
        let mu2 = Ideal::k_partitionable(&lat, 2).unwrap();
        let nu3 = Ideal::k_producible(&lat, 3).unwrap();
        assert!(mu2.contains(lat.parse_index("12|34").unwrap()));
        assert!(nu3.contains(lat.parse_index("123|4").unwrap()));
        assert!(!nu3.contains(lat.top()));
        assert!(nu3.is_subset(&mu2) || !mu2.is_subset(&nu3));
    }

    #[test]
    fn small_ideal_counts() {
        assert_eq!(enumerate_ideals(&lattice(1), 100).unwrap().len(), 1);
        assert_eq!(enumerate_ideals(&lattice(2), 100).unwrap().len(), 2);
        assert_eq!(enumerate_ideals(&lattice(3), 100).unwrap().len(), 9);
        assert!(matches!(enumerate_ideals(&lattice(5), 100), Err(IdealError::TooManyParties { .. })));
        assert!(matches!(enumerate_ideals(&lattice(3), 4), Err(IdealError::Poset(PosetError::CapExceeded(4)))));
    }

    #[test]
    fn property_subsets() {
        let lat = lattice(4);
        let chain = PropertySubset::k_partitionability(lat.clone()).unwrap();
        assert!(chain.is_chain());
        assert_eq!(chain.len(), 4);
        let atoms = PropertySubset::atoms(lat.clone()).unwrap();
        assert!(atoms.is_antichain());
        assert_eq!(atoms.len(), 6);
        let coatoms = PropertySubset::coatoms(lat.clone()).unwrap();
        assert_eq!(coatoms.len(), 7);
        assert!(coatoms.is_antichain());
        let custom = PropertySubset::parse(lat.clone(), "# comment\n12|3|4, 1|2|34\n\n123|4\n").unwrap();
        assert_eq!(custom.len(), 2);
        assert!(matches!(PropertySubset::parse(lat.clone(), "12|3|4\n12|3|4"), Err(IdealError::Duplicate(_))));
        assert!(matches!(PropertySubset::parse(lat, ""), Err(IdealError::EmptyFamily)));
    }

    #[test]
    fn export_n3() {
        let full = PropertySubset::full(lattice(3)).unwrap();
        let export = full.export();
        assert_eq!(export.nodes.len(), 9);
        assert_eq!(export.nodes[0].label, "↓{1|2|3}");
        assert_eq!(export.edges, full.order().covers());
    }
}
