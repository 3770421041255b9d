//! Complete classifications for the standard choices of property subset:
//! the finest one (all of `P_II`), chains (k-partitionability,
//! k-producibility), and the antichains of atoms and of bipartitions.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classifier::{
    class_exists, classes_equal, enumerate_filters, oracle_cross_check, principal_filters, ClassDescriptor,
    ClassRecord, ClassifierError, CrossCheckReport, Filter, PairCheck, MAX_EXHAUSTIVE_CONTEXT,
};
use crate::ideals::{IdealError, PropertySubset, MAX_MATERIALIZED_N};
use crate::partitions::{PartitionError, PartitionLattice};
use crate::poset::ElementSet;

/// Default cap on the number of filters one catalog may enumerate.
pub const DEFAULT_MAX_FILTERS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("context {0:?} is not a chain")]
    NotAChain(String),
    #[error("the finest classification needs the full ideal lattice, available for n ≤ {max}; got n = {n}")]
    TooManyParties { n: usize, max: usize },
    #[error("atom and coatom classifications need n ≥ 2")]
    TooFewParties,
    #[error("context {name:?} has {filters_bound} candidate filters, above the cap {cap}")]
    CapExceeded { name: String, filters_bound: u128, cap: usize },
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Which filters a catalog examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Every nonempty up-set of the context.
    AllFilters,
    /// Only the principal filters `↑{ξ̱} ∩ P_II*`.
    PrincipalFilters,
}

/// A nonempty class and every filter that labels it.
#[derive(Debug, Clone)]
pub struct CatalogClass {
    pub descriptor: ClassDescriptor,
    /// Further filters found equal to `descriptor.label`.
    pub aliases: Vec<Filter>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub context: Arc<PropertySubset>,
    pub scope: Scope,
    pub classes: Vec<CatalogClass>,
    pub empties: Vec<Filter>,
}

impl Catalog {
    /// Classifies `filters` over `context`: nonempty classes are grouped with
    /// the lattice-route equality test, empty ones listed.
    pub fn build(context: Arc<PropertySubset>, filters: Vec<Filter>, scope: Scope) -> Result<Self, CatalogError> {
        let verdicts: Vec<bool> = filters.par_iter().map(|f| class_exists(f).exists).collect();
        let mut classes: Vec<CatalogClass> = Vec::new();
        let mut empties = Vec::new();
        for (f, exists) in filters.into_iter().zip(verdicts) {
            if !exists {
                empties.push(f);
                continue;
            }
            let mut merged = false;
            for class in classes.iter_mut() {
                if classes_equal(&class.descriptor.label, &f)? {
                    class.aliases.push(f.clone());
                    merged = true;
                    break;
                }
            }
            if !merged {
                classes.push(CatalogClass { descriptor: ClassDescriptor::describe(&f), aliases: Vec::new() });
            }
        }
        Ok(Catalog { context, scope, classes, empties })
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn filters_examined(&self) -> usize {
        self.empties.len() + self.classes.iter().map(|c| 1 + c.aliases.len()).sum::<usize>()
    }

    /// Finds the class whose label is the given filter.
    pub fn class_of(&self, label: &Filter) -> Option<&CatalogClass> {
        self.classes.iter().find(|c| c.descriptor.label == *label || c.aliases.contains(label))
    }

    /// Re-checks every examined filter against the oracle; equality is tested
    /// between all pairs of class labels and against a sample of the rest.
    pub fn cross_check(&self) -> CrossCheckReport {
        let labels: Vec<Filter> = self.classes.iter().map(|c| c.descriptor.label.clone()).collect();
        let mut report = oracle_cross_check(&labels, PairCheck::Exhaustive);
        let rest: Vec<Filter> =
            self.classes.iter().flat_map(|c| c.aliases.iter().cloned()).chain(self.empties.iter().cloned()).collect();
        let mut tail = oracle_cross_check(&rest, PairCheck::Sampled { count: rest.len().min(10_000), seed: 0 });
        tail.nonempty_classes = 0;
        report.merge(tail);
        report
    }

    pub fn records(&self) -> Vec<ClassRecord> {
        self.classes
            .iter()
            .map(|c| c.descriptor.record())
            .chain(self.empties.iter().map(|f| ClassDescriptor::describe(f).record()))
            .collect()
    }

    pub fn to_json(&self, letters: bool) -> CatalogJson {
        let lattice = self.context.lattice();
        let render = |i: usize| render_partition(lattice, i, letters);
        CatalogJson {
            n: lattice.n(),
            context: self.context.name().to_string(),
            scope: self.scope,
            class_count: self.classes.len(),
            filters_examined: self.filters_examined(),
            classes: self
                .classes
                .iter()
                .map(|c| {
                    let d = &c.descriptor;
                    CatalogClassJson {
                        label: d.label.label(),
                        aliases: c.aliases.iter().map(Filter::label).collect(),
                        witness: d.witness.map(render),
                        type_set: dedup(d.type_set.iter().map(render)),
                        state_shape: state_shape(lattice, &d.type_set),
                    }
                })
                .collect(),
            empties: self.empties.iter().map(Filter::label).collect(),
        }
    }

    /// Aligned text table with columns label / witness / type_set / shape.
    pub fn to_text(&self, letters: bool) -> String {
        let json = self.to_json(letters);
        let rows: Vec<[String; 4]> = json
            .classes
            .iter()
            .map(|c| {
                [
                    c.label.clone(),
                    c.witness.clone().unwrap_or_default(),
                    format!("{{{}}}", c.type_set.join(", ")),
                    c.state_shape.clone(),
                ]
            })
            .collect();
        let header = ["label", "witness", "type_set", "state_shape"];
        let mut widths = header.map(|h| h.chars().count());
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row.iter()) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# n={} context={} scope={:?} classes={} empty_labels={}",
            json.n,
            json.context,
            json.scope,
            json.class_count,
            json.empties.len()
        );
        let line = |cells: &[String]| -> String {
            let padded: Vec<String> = cells
                .iter()
                .zip(widths.iter())
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let _ = writeln!(out, "{}", line(&header.map(String::from)));
        for row in &rows {
            let _ = writeln!(out, "{}", line(row));
        }
        for empty in &json.empties {
            let _ = writeln!(out, "empty: {empty}");
        }
        out
    }
}

fn dedup<I: Iterator<Item = String>>(items: I) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for item in items {
        if !out.contains(&item) {
            out.push(item);
        }
    }
    out
}

fn render_partition(lattice: &PartitionLattice, index: usize, letters: bool) -> String {
    let p = lattice.partition(index);
    if letters {
        p.shape()
    } else {
        p.to_string()
    }
}

/// `ρ_ab⊗ρ_c, ρ_abc⊗ρ_d` for the distinct shapes of the maximal types.
fn state_shape(lattice: &PartitionLattice, types: &ElementSet) -> String {
    let maximal = lattice.order().maximal(types).expect("lattice domain");
    dedup(maximal.iter().map(|i| lattice.partition(i).state_shape())).join(", ")
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogJson {
    pub n: usize,
    pub context: String,
    pub scope: Scope,
    pub class_count: usize,
    pub filters_examined: usize,
    pub classes: Vec<CatalogClassJson>,
    pub empties: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogClassJson {
    pub label: String,
    pub aliases: Vec<String>,
    pub witness: Option<String>,
    pub type_set: Vec<String>,
    pub state_shape: String,
}

fn filter_bound(len: usize) -> u128 {
    if len >= 127 {
        u128::MAX
    } else {
        (1u128 << len) - 1
    }
}

/// Enumerates all filters when the context is small enough, otherwise
/// refuses with [`CatalogError::CapExceeded`].
fn all_filters(context: &Arc<PropertySubset>, max_filters: usize) -> Result<Vec<Filter>, CatalogError> {
    let cap_error = || CatalogError::CapExceeded {
        name: context.name().to_string(),
        filters_bound: filter_bound(context.len()),
        cap: max_filters,
    };
    if context.len() > MAX_EXHAUSTIVE_CONTEXT {
        return Err(cap_error());
    }
    enumerate_filters(context, max_filters).map_err(|e| match e {
        ClassifierError::Poset(_) => cap_error(),
        other => other.into(),
    })
}

/// The finest classification, `P_II* = P_II`.
///
/// For `n ≤ 3` every filter is examined; for `n = 4` the filter count is out
/// of reach and the principal filters `↑{ξ̱}` of all ideals are examined
/// instead, which covers every nonempty class.
pub fn finest_catalog(n: usize) -> Result<Catalog, CatalogError> {
    if n > MAX_MATERIALIZED_N {
        return Err(CatalogError::TooManyParties { n, max: MAX_MATERIALIZED_N });
    }
    let lattice = Arc::new(PartitionLattice::new(n)?);
    let context = Arc::new(PropertySubset::full(lattice)?);
    if context.len() <= MAX_EXHAUSTIVE_CONTEXT {
        let filters = all_filters(&context, DEFAULT_MAX_FILTERS)?;
        Catalog::build(context, filters, Scope::AllFilters)
    } else {
        let filters = principal_filters(&context);
        Catalog::build(context, filters, Scope::PrincipalFilters)
    }
}

/// Classification over a chain of properties. Every filter of a chain is
/// principal, so the filters are exactly the `|context|` principal ones;
/// class `i` is labeled `↑{context[i]}`.
pub fn chain_catalog(context: Arc<PropertySubset>) -> Result<Catalog, CatalogError> {
    if !context.is_chain() {
        return Err(CatalogError::NotAChain(context.name().to_string()));
    }
    let filters = principal_filters(&context);
    Catalog::build(context, filters, Scope::AllFilters)
}

pub fn k_partitionability_catalog(n: usize) -> Result<Catalog, CatalogError> {
    let lattice = Arc::new(PartitionLattice::new(n)?);
    chain_catalog(Arc::new(PropertySubset::k_partitionability(lattice)?))
}

pub fn k_producibility_catalog(n: usize) -> Result<Catalog, CatalogError> {
    let lattice = Arc::new(PartitionLattice::new(n)?);
    chain_catalog(Arc::new(PropertySubset::k_producibility(lattice)?))
}

/// Classification over the antichain of atoms `{↓{ξ} : |ξ| = n−1}`.
pub fn atom_antichain_catalog(n: usize) -> Result<Catalog, CatalogError> {
    atom_antichain_catalog_capped(n, DEFAULT_MAX_FILTERS)
}

pub fn atom_antichain_catalog_capped(n: usize, max_filters: usize) -> Result<Catalog, CatalogError> {
    if n < 2 {
        return Err(CatalogError::TooFewParties);
    }
    let lattice = Arc::new(PartitionLattice::new(n)?);
    let context = Arc::new(PropertySubset::atoms(lattice)?);
    let filters = all_filters(&context, max_filters)?;
    Catalog::build(context, filters, Scope::AllFilters)
}

/// Classification over the antichain of bipartitions `{↓{ξ} : |ξ| = 2}`,
/// decided filter by filter.
pub fn coatom_antichain_catalog(n: usize) -> Result<Catalog, CatalogError> {
    coatom_antichain_catalog_capped(n, DEFAULT_MAX_FILTERS)
}

pub fn coatom_antichain_catalog_capped(n: usize, max_filters: usize) -> Result<Catalog, CatalogError> {
    if n < 2 {
        return Err(CatalogError::TooFewParties);
    }
    let lattice = Arc::new(PartitionLattice::new(n)?);
    let context = Arc::new(PropertySubset::coatoms(lattice)?);
    let filters = all_filters(&context, max_filters)?;
    Catalog::build(context, filters, Scope::AllFilters)
}

/// Classification over an arbitrary context, exhaustively.
pub fn generic_catalog(context: Arc<PropertySubset>, max_filters: usize) -> Result<Catalog, CatalogError> {
    let filters = all_filters(&context, max_filters)?;
    Catalog::build(context, filters, Scope::AllFilters)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub total_types: usize,
    pub covered_types: usize,
    pub uncovered: Vec<String>,
}

impl CoverReport {
    pub fn covers_all(&self) -> bool {
        self.uncovered.is_empty()
    }
}

/// Compares the union of the catalog's type sets with all of `P_I`.
pub fn catalog_cover_check(catalog: &Catalog) -> CoverReport {
    let lattice = catalog.context.lattice();
    let mut covered = ElementSet::empty(lattice.len());
    for class in &catalog.classes {
        covered.union_with(&class.descriptor.type_set);
    }
    CoverReport {
        total_types: lattice.len(),
        covered_types: covered.len(),
        uncovered: covered.complement().iter().map(|i| lattice.partition(i).to_string()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn type_names(class: &CatalogClass) -> Vec<String> {
        let lattice = class.descriptor.label.context().lattice().clone();
        class.descriptor.type_set.iter().map(|i| lattice.partition(i).to_string()).collect()
    }

    #[test]
    fn finest_n3() {
        let cat = finest_catalog(3).unwrap();
        assert_eq!(cat.scope, Scope::AllFilters);
        assert_eq!(cat.class_count(), 5);
        assert!(cat.classes.iter().all(|c| c.aliases.is_empty() && c.descriptor.type_set.len() == 1));
        assert!(cat.cross_check().passed());
        assert!(catalog_cover_check(&cat).covers_all());
    }

    #[test]
    fn chain_n3_classes() {
        let cat = k_partitionability_catalog(3).unwrap();
        assert_eq!(cat.class_count(), 3);
        assert_eq!(type_names(&cat.classes[0]), vec!["123"]);
        assert_eq!(type_names(&cat.classes[1]), vec!["12|3", "13|2", "1|23"]);
        assert_eq!(type_names(&cat.classes[2]), vec!["1|2|3"]);
        assert!(catalog_cover_check(&cat).covers_all());
    }

    #[test]
    fn chain_requires_chain() {
        let lattice = Arc::new(PartitionLattice::new(3).unwrap());
        let atoms = Arc::new(PropertySubset::atoms(lattice).unwrap());
        assert!(matches!(chain_catalog(atoms), Err(CatalogError::NotAChain(_))));
    }

    #[test]
    fn atoms_n4() {
        let cat = atom_antichain_catalog(4).unwrap();
        // Six singleton labels plus the full filter, whose class is {⊥}.
        assert_eq!(cat.class_count(), 7);
        let full = cat.classes.iter().find(|c| c.descriptor.label.len() == 6).unwrap();
        assert_eq!(type_names(full), vec!["1|2|3|4"]);
        assert_eq!(cat.classes.iter().filter(|c| c.descriptor.label.len() == 1).count(), 6);
        assert_eq!(cat.empties.len(), 63 - 7);
        assert!(cat.empties.iter().all(|f| f.len() >= 2));
        let cover = catalog_cover_check(&cat);
        assert!(!cover.covers_all());
        assert!(cover.uncovered.contains(&"12|34".to_string()));
    }

    #[test]
    fn degenerate_n2() {
        let atoms = atom_antichain_catalog(2).unwrap();
        let coatoms = coatom_antichain_catalog(2).unwrap();
        assert_eq!(atoms.class_count(), 1);
        assert_eq!(coatoms.class_count(), 1);
        assert!(matches!(atom_antichain_catalog(1), Err(CatalogError::TooFewParties)));
    }

    #[test]
    fn caps_are_enforced() {
        assert!(matches!(coatom_antichain_catalog_capped(4, 10), Err(CatalogError::CapExceeded { .. })));
        assert!(matches!(finest_catalog(5), Err(CatalogError::TooManyParties { .. })));
    }

    #[test]
    fn text_and_json_rendering() {
        let cat = k_partitionability_catalog(3).unwrap();
        let json = cat.to_json(true);
        assert_eq!(json.classes[1].type_set, vec!["ab|c"]);
        assert_eq!(json.classes[1].state_shape, "ρ_ab⊗ρ_c");
        let text = cat.to_text(false);
        assert!(text.starts_with("# n=3 context=k_part"));
        assert!(text.lines().nth(1).unwrap().starts_with("label"));
        assert_eq!(cat.records().len(), 3);
    }
}
