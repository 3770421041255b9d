//! Class labels (filters over a property subset) and their correlation
//! classes.
//!
//! A [`Filter`] is a nonempty up-closed set of ideals of a context
//! [`PropertySubset`]. Its class consists of the states that have exactly the
//! properties in the filter and none of the others. States are modeled by
//! their correlation type: the finest partition they factorize over. A type
//! `ζ` has property `ξ̱` iff `ζ ∈ ξ̱`, so a class is a set of partitions.
//!
//! Two routes decide each question:
//!
//! * the lattice route works only with `∧f` (intersection of the filter's
//!   ideals) and `∨f̄` (union of the complement's ideals) as partition sets:
//!   [`class_exists`] and [`classes_equal`];
//! * the semantic route, [`type_set`], inspects each partition's property
//!   signature directly and is used as the oracle.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ideals::{Ideal, IdealError, PropertySubset};
use crate::poset::{ElementSet, PosetError};
use crate::venn::LabeledFamily;

/// Exhaustive filter enumeration is refused above this context size.
pub const MAX_EXHAUSTIVE_CONTEXT: usize = 25;

/// Default cap on the number of filters produced by one enumeration.
pub const DEFAULT_FILTER_CAP: usize = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifierError {
    #[error("filters belong to different contexts")]
    ContextMismatch,
    #[error("ideal {0} is not part of the context")]
    NotInContext(String),
    #[error("filter is empty")]
    EmptyFilter,
    #[error("set is not closed upwards within the context")]
    NotUpClosed,
    #[error("context has {len} properties; exhaustive filter enumeration allows at most {max}")]
    ContextTooLarge { len: usize, max: usize },
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// A class label: a nonempty up-set of the context.
#[derive(Clone)]
pub struct Filter {
    context: Arc<PropertySubset>,
    members: ElementSet,
}

impl PartialEq for Filter {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.context, &other.context) && self.members == other.members
    }
}

impl Eq for Filter {}

impl fmt::Debug for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Filter({})", self.label())
    }
}

fn same_context(a: &Arc<PropertySubset>, b: &Arc<PropertySubset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Filter {
    /// Validates that `members` (indices into the context) is a nonempty
    /// up-set.
    pub fn new(context: Arc<PropertySubset>, members: ElementSet) -> Result<Self, ClassifierError> {
        context.order().check_set(&members)?;
        if members.is_empty() {
            return Err(ClassifierError::EmptyFilter);
        }
        if !context.order().is_up_set(&members) {
            return Err(ClassifierError::NotUpClosed);
        }
        Ok(Filter { context, members })
    }

    /// Up-closure of context indices.
    pub fn generated<I>(context: Arc<PropertySubset>, generators: I) -> Result<Self, ClassifierError>
    where
        I: IntoIterator<Item = usize>,
    {
        let gens = ElementSet::from_indices(context.len(), generators);
        let members = context.order().up_closure(&gens)?;
        Filter::new(context, members)
    }

    /// The principal filter `↑{ξ̱} ∩ P_II*` of one context element.
    pub fn principal(context: Arc<PropertySubset>, index: usize) -> Self {
        let members = context.order().successors(index).clone();
        Filter { context, members }
    }

    /// The filter containing every property of the context.
    pub fn full(context: Arc<PropertySubset>) -> Self {
        let members = ElementSet::full(context.len());
        Filter { context, members }
    }

    pub fn context(&self) -> &Arc<PropertySubset> {
        &self.context
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

    /// Context indices not in the filter.
    pub fn complement(&self) -> ElementSet {
        self.members.complement()
    }

    /// Minimal members; the filter is their up-closure.
    pub fn generators(&self) -> ElementSet {
        self.context.order().minimal(&self.members).expect("own domain")
    }

    /// `↑{↓{12|3}, ↓{13|2}}` style label listing the minimal members.
    pub fn label(&self) -> String {
        let lattice = self.context.lattice();
        let gens: Vec<String> = self.generators().iter().map(|i| self.context.ideal(i).label(lattice)).collect();
        format!("↑{{{}}}", gens.join(", "))
    }

    /// `∧f`: intersection of the member ideals. Never empty.
    pub fn meet_of_filter(&self) -> ElementSet {
        let mut out = self.context.lattice().full_set();
        for i in self.members.iter() {
            out.intersect_with(self.context.ideal(i).members());
        }
        out
    }

    /// `∨f̄`: union of the complement's ideals; empty when the complement is.
    pub fn join_of_complement(&self) -> ElementSet {
        let mut out = ElementSet::empty(self.context.lattice().len());
        for i in self.complement().iter() {
            out.union_with(self.context.ideal(i).members());
        }
        out
    }
}

/// Builds the up-closure of the given ideals inside `context`.
pub fn make_filter(context: Arc<PropertySubset>, generators: &[Ideal]) -> Result<Filter, ClassifierError> {
    let indices = generators
        .iter()
        .map(|g| context.position(g).ok_or_else(|| ClassifierError::NotInContext(g.label(context.lattice()))))
        .collect::<Result<Vec<_>, _>>()?;
    Filter::generated(context, indices)
}

/// Existence verdict with the refinement-minimal witnessing type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Existence {
    pub exists: bool,
    pub witness: Option<usize>,
}

/// Decides nonemptiness of the class from `∧f ⊄ ∨f̄`.
///
/// The witness is the least-indexed partition of `∧f \ ∨f̄`; partition indices
/// follow a linear extension of refinement, so it is refinement-minimal.
pub fn class_exists(f: &Filter) -> Existence {
    let witness = f.meet_of_filter().difference(&f.join_of_complement()).first();
    Existence { exists: witness.is_some(), witness }
}

/// Decides equality of two classes from the four inclusion conditions on
/// `∧f`, `∨f̄`, `∧g`, `∨ḡ`.
pub fn classes_equal(f: &Filter, g: &Filter) -> Result<bool, ClassifierError> {
    if !same_context(&f.context, &g.context) {
        return Err(ClassifierError::ContextMismatch);
    }
    let (meet_f, join_f) = (f.meet_of_filter(), f.join_of_complement());
    let (meet_g, join_g) = (g.meet_of_filter(), g.join_of_complement());
    let one_way = |meet_a: &ElementSet, join_a: &ElementSet, meet_b: &ElementSet, join_b: &ElementSet| {
        meet_a.intersection(join_b).is_subset(join_a) && meet_a.is_subset(&join_a.union(meet_b))
    };
    Ok(one_way(&meet_f, &join_f, &meet_g, &join_g) && one_way(&meet_g, &join_g, &meet_f, &join_f))
}

/// Property signature of a partition: the context ideals containing it.
pub fn signature(context: &PropertySubset, partition: usize) -> ElementSet {
    ElementSet::from_indices(context.len(), (0..context.len()).filter(|&i| context.ideal(i).contains(partition)))
}

/// Semantic oracle: the correlation types whose signature is exactly `f`.
pub fn type_set(f: &Filter) -> ElementSet {
    let context = &f.context;
    let lattice = context.lattice();
    ElementSet::from_indices(
        lattice.len(),
        (0..lattice.len())
            .filter(|&zeta| (0..context.len()).all(|i| context.ideal(i).contains(zeta) == f.members.contains(i))),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassOrdering {
    Less,
    Equal,
    Greater,
    Incomparable,
}

/// Level III comparison: inclusion of filters.
pub fn class_order(f: &Filter, g: &Filter) -> Result<ClassOrdering, ClassifierError> {
    if !same_context(&f.context, &g.context) {
        return Err(ClassifierError::ContextMismatch);
    }
    Ok(match (f.members.is_subset(&g.members), g.members.is_subset(&f.members)) {
        (true, true) => ClassOrdering::Equal,
        (true, false) => ClassOrdering::Less,
        (false, true) => ClassOrdering::Greater,
        (false, false) => ClassOrdering::Incomparable,
    })
}

impl ClassOrdering {
    pub fn to_ordering(self) -> Option<Ordering> {
        match self {
            ClassOrdering::Less => Some(Ordering::Less),
            ClassOrdering::Equal => Some(Ordering::Equal),
            ClassOrdering::Greater => Some(Ordering::Greater),
            ClassOrdering::Incomparable => None,
        }
    }
}

/// A filter together with everything the classification says about it.
#[derive(Debug, Clone)]
pub struct ClassDescriptor {
    pub label: Filter,
    pub meet_of_filter: ElementSet,
    pub join_of_complement: ElementSet,
    pub exists: bool,
    pub witness: Option<usize>,
    pub type_set: ElementSet,
}

impl ClassDescriptor {
    pub fn describe(f: &Filter) -> Self {
        let meet_of_filter = f.meet_of_filter();
        let join_of_complement = f.join_of_complement();
        let existence = class_exists(f);
        ClassDescriptor {
            label: f.clone(),
            meet_of_filter,
            join_of_complement,
            exists: existence.exists,
            witness: existence.witness,
            type_set: type_set(f),
        }
    }

    /// The lattice route and the oracle agree on this class.
    pub fn is_consistent(&self) -> bool {
        self.exists == !self.type_set.is_empty()
            && self.type_set == self.meet_of_filter.difference(&self.join_of_complement)
    }

    /// JSON-lines record for this class.
    pub fn record(&self) -> ClassRecord {
        let context = self.label.context();
        let lattice = context.lattice();
        let names = |set: &ElementSet| set.iter().map(|i| lattice.partition(i).to_string()).collect::<Vec<_>>();
        let canonical_generator = if self.exists {
            Ideal::new(lattice, self.meet_of_filter.clone()).ok().map(|ideal| ideal.label(lattice))
        } else {
            None
        };
        ClassRecord {
            label: self.label.generators().iter().map(|i| context.ideal(i).label(lattice)).collect(),
            exists: self.exists,
            witness: self.witness.map(|w| lattice.partition(w).to_string()),
            type_set: names(&self.type_set),
            canonical_generator,
        }
    }
}

/// One line of the class report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassRecord {
    pub label: Vec<String>,
    pub exists: bool,
    pub witness: Option<String>,
    pub type_set: Vec<String>,
    pub canonical_generator: Option<String>,
}

/// Streams every filter of `context` (nonempty up-sets), refusing contexts
/// larger than [`MAX_EXHAUSTIVE_CONTEXT`].
pub fn stream_filters(
    context: &Arc<PropertySubset>,
    cap: usize,
) -> Result<impl Iterator<Item = Result<Filter, ClassifierError>> + '_, ClassifierError> {
    if context.len() > MAX_EXHAUSTIVE_CONTEXT {
        return Err(ClassifierError::ContextTooLarge { len: context.len(), max: MAX_EXHAUSTIVE_CONTEXT });
    }
    Ok(context
        .order()
        .up_sets(false, cap)
        .map(move |r| r.map(|members| Filter { context: context.clone(), members }).map_err(ClassifierError::from)))
}

pub fn enumerate_filters(context: &Arc<PropertySubset>, cap: usize) -> Result<Vec<Filter>, ClassifierError> {
    stream_filters(context, cap)?.collect()
}

/// Every principal filter `↑{ξ̱} ∩ P_II*`, one per context element.
pub fn principal_filters(context: &Arc<PropertySubset>) -> Vec<Filter> {
    (0..context.len()).map(|i| Filter::principal(context.clone(), i)).collect()
}

/// Draws a uniformly random subset of context indices and returns its
/// up-closure; retries until nonempty.
pub fn random_filter<R: Rng>(context: &Arc<PropertySubset>, rng: &mut R) -> Filter {
    loop {
        let gens = ElementSet::from_indices(context.len(), (0..context.len()).filter(|_| rng.gen_bool(0.5)));
        if gens.is_empty() {
            continue;
        }
        let members = context.order().up_closure(&gens).expect("own domain");
        return Filter { context: context.clone(), members };
    }
}

/// `count` random filters of `context` from a seeded generator.
pub fn sample_filters(context: &Arc<PropertySubset>, count: usize, seed: u64) -> Vec<Filter> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_filter(context, &mut rng)).collect()
}

/// A random sub-family of `universe` with between 1 and `max_len` elements.
pub fn random_context<R: Rng>(
    universe: &PropertySubset,
    max_len: usize,
    rng: &mut R,
) -> Result<Arc<PropertySubset>, ClassifierError> {
    let len = rng.gen_range(1..=max_len.min(universe.len()).max(1));
    let mut picked = sample(rng, universe.len(), len).into_vec();
    picked.sort_unstable();
    Ok(Arc::new(universe.subset(&picked, "random")?))
}

/// How [`oracle_cross_check`] chooses filter pairs for the equality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCheck {
    None,
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub filters: Vec<String>,
    pub lattice_route: bool,
    pub oracle: bool,
    pub check: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CrossCheckReport {
    pub filters_checked: usize,
    pub pairs_checked: usize,
    pub nonempty_classes: usize,
    pub discrepancies: Vec<Discrepancy>,
}

impl CrossCheckReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }

    pub fn merge(&mut self, other: CrossCheckReport) {
        self.filters_checked += other.filters_checked;
        self.pairs_checked += other.pairs_checked;
        self.nonempty_classes += other.nonempty_classes;
        self.discrepancies.extend(other.discrepancies);
    }
}

/// Compares the lattice route against the oracle: existence for every filter,
/// equality for the selected pairs.
pub fn oracle_cross_check(filters: &[Filter], pairs: PairCheck) -> CrossCheckReport {
    let types: Vec<ElementSet> = filters.par_iter().map(type_set).collect();
    let mut report = CrossCheckReport { filters_checked: filters.len(), ..Default::default() };
    let existence: Vec<Discrepancy> = filters
        .par_iter()
        .zip(types.par_iter())
        .filter_map(|(f, types)| {
            let exists = class_exists(f).exists;
            (exists == types.is_empty()).then(|| Discrepancy {
                filters: vec![f.label()],
                lattice_route: exists,
                oracle: !types.is_empty(),
                check: "existence",
            })
        })
        .collect();
    report.nonempty_classes = types.iter().filter(|t| !t.is_empty()).count();
    report.discrepancies.extend(existence);

    let check_pair = |a: usize, b: usize| -> Option<Discrepancy> {
        let equal = match classes_equal(&filters[a], &filters[b]) {
            Ok(equal) => equal,
            Err(_) => {
                return Some(Discrepancy {
                    filters: vec![filters[a].label(), filters[b].label()],
                    lattice_route: false,
                    oracle: false,
                    check: "context",
                })
            }
        };
        let oracle = types[a] == types[b];
        (equal != oracle).then(|| Discrepancy {
            filters: vec![filters[a].label(), filters[b].label()],
            lattice_route: equal,
            oracle,
            check: "equality",
        })
    };
    let m = filters.len();
    match pairs {
        PairCheck::None => {}
        PairCheck::Exhaustive => {
            let found: Vec<Discrepancy> =
                (0..m).into_par_iter().flat_map_iter(|a| (a..m).filter_map(move |b| check_pair(a, b))).collect();
            report.pairs_checked = m * (m + 1) / 2;
            report.discrepancies.extend(found);
        }
        PairCheck::Sampled { count, seed } if m > 0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let chosen: Vec<(usize, usize)> = (0..count).map(|_| (rng.gen_range(0..m), rng.gen_range(0..m))).collect();
            let found: Vec<Discrepancy> = chosen.par_iter().filter_map(|&(a, b)| check_pair(a, b)).collect();
            report.pairs_checked = count;
            report.discrepancies.extend(found);
        }
        PairCheck::Sampled { .. } => {}
    }
    report
}

/// Result of checking the principal-label lemmas on one filter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub label: String,
    pub class_exists: bool,
    /// `↑{∧f} ∩ P_II* = f`.
    pub upper_principal: bool,
    /// `↓{∨f̄} ∩ P_II* = f̄`.
    pub lower_principal: bool,
    /// `(∧f ⊄ ∨f̄) ⇔ ↑{∧f} ∩ ↓{∨f̄} = ∅` in the full ideal universe; `None`
    /// when no universe was supplied.
    pub separation_equivalence: Option<bool>,
}

impl LemmaReport {
    /// The lemmas only constrain nonempty classes; the separation
    /// equivalence holds for every filter.
    pub fn passed(&self) -> bool {
        let principal_ok = !self.class_exists || (self.upper_principal && self.lower_principal);
        principal_ok && self.separation_equivalence.unwrap_or(true)
    }
}

/// Checks that a nonempty class is labeled by principal filters and ideals.
///
/// `universe`, when given, must be the full `P_II` over the same lattice; it
/// is used for the separation test, where `↑{∧f}` and `↓{∨f̄}` range over all
/// ideals and not only the context.
pub fn lemma_principal_check(f: &Filter, universe: Option<&PropertySubset>) -> LemmaReport {
    let context = &f.context;
    let meet = f.meet_of_filter();
    let join = f.join_of_complement();
    let upper = ElementSet::from_indices(
        context.len(),
        (0..context.len()).filter(|&i| meet.is_subset(context.ideal(i).members())),
    );
    let lower = ElementSet::from_indices(
        context.len(),
        (0..context.len()).filter(|&i| context.ideal(i).members().is_subset(&join)),
    );
    let exists = class_exists(f).exists;
    let separation_equivalence = universe.map(|all| {
        let separated = !all.ideals().iter().any(|z| meet.is_subset(z.members()) && z.members().is_subset(&join));
        separated == exists
    });
    LemmaReport {
        label: f.label(),
        class_exists: exists,
        upper_principal: upper == f.members,
        lower_principal: lower == f.complement(),
        separation_equivalence,
    }
}

/// The context viewed as a labeled family of sets: labels are the context's
/// ideals, the universe is `P_I`, and each label is assigned its member set.
pub fn as_labeled_family(context: &PropertySubset) -> LabeledFamily {
    let assign = context.ideals().iter().map(|i| i.members().clone()).collect();
    LabeledFamily::new(context.lattice().len(), context.order().clone(), assign)
        .expect("inclusion order embeds by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::PartitionLattice;

    fn lattice(n: usize) -> Arc<PartitionLattice> {
        Arc::new(PartitionLattice::new(n).unwrap())
    }

    fn full(n: usize) -> Arc<PropertySubset> {
        Arc::new(PropertySubset::full(lattice(n)).unwrap())
    }

    fn ideal(ctx: &PropertySubset, text: &str) -> Ideal {
        Ideal::parse(ctx.lattice(), text).unwrap()
    }

    fn names(ctx: &PropertySubset, set: &ElementSet) -> Vec<String> {
        set.iter().map(|i| ctx.lattice().partition(i).to_string()).collect()
    }

    #[test]
    fn make_filter_examples() {
        let ctx = full(3);
        let all = make_filter(ctx.clone(), ctx.ideals()).unwrap();
        assert_eq!(all, Filter::full(ctx.clone()));
        // ↓{12|3}, ↓{12|3, 13|2}, ↓{12|3, 1|23}, ↓{12|3, 13|2, 1|23} and P_I.
        let f = make_filter(ctx.clone(), &[ideal(&ctx, "12|3")]).unwrap();
        assert_eq!(f.len(), 5);
        let twelve = ctx.lattice().parse_index("12|3").unwrap();
        for i in 0..ctx.len() {
            assert_eq!(f.members().contains(i), ctx.ideal(i).contains(twelve));
        }
        assert_eq!(f.label(), "↑{↓{12|3}}");

        let atoms = Arc::new(PropertySubset::atoms(lattice(3)).unwrap());
        let single = make_filter(atoms.clone(), &[ideal(&atoms, "12|3")]).unwrap();
        assert_eq!(single.len(), 1);

        let outside = ideal(&atoms, "123");
        assert!(matches!(make_filter(atoms.clone(), &[outside]), Err(ClassifierError::NotInContext(_))));
        assert_eq!(make_filter(atoms, &[]), Err(ClassifierError::EmptyFilter));
    }

    #[test]
    fn filter_validation() {
        let ctx = full(3);
        let bottom_ideal = ctx.position(&ideal(&ctx, "1|2|3")).unwrap();
        let lone_bottom = ElementSet::singleton(ctx.len(), bottom_ideal);
        assert_eq!(Filter::new(ctx.clone(), lone_bottom), Err(ClassifierError::NotUpClosed));
        assert_eq!(Filter::new(ctx.clone(), ElementSet::empty(ctx.len())), Err(ClassifierError::EmptyFilter));
    }

    #[test]
    fn existence_examples() {
        let ctx = full(3);
        let all = Filter::full(ctx.clone());
        assert_eq!(class_exists(&all), Existence { exists: true, witness: Some(0) });
        let f = make_filter(ctx.clone(), &[ideal(&ctx, "12|3")]).unwrap();
        assert!(class_exists(&f).exists);

        let atoms = Arc::new(PropertySubset::atoms(lattice(3)).unwrap());
        let two = make_filter(atoms.clone(), &[ideal(&atoms, "12|3"), ideal(&atoms, "13|2")]).unwrap();
        assert!(!class_exists(&two).exists);
        assert!(type_set(&two).is_empty());
    }

    #[test]
    fn type_set_examples() {
        let ctx = full(3);
        assert_eq!(names(&ctx, &type_set(&Filter::full(ctx.clone()))), vec!["1|2|3"]);
        let top = make_filter(ctx.clone(), &[ideal(&ctx, "123")]).unwrap();
        assert_eq!(names(&ctx, &type_set(&top)), vec!["123"]);
    }

    #[test]
    fn equality_examples() {
        let ctx = full(3);
        let f = make_filter(ctx.clone(), &[ideal(&ctx, "12|3")]).unwrap();
        let g = make_filter(ctx.clone(), &[ideal(&ctx, "13|2")]).unwrap();
        assert!(classes_equal(&f, &f).unwrap());
        assert!(!classes_equal(&f, &g).unwrap());

        let atoms = Arc::new(PropertySubset::atoms(lattice(4)).unwrap());
        let a = Filter::generated(atoms.clone(), [0, 1]).unwrap();
        let b = Filter::generated(atoms.clone(), [2, 3, 4]).unwrap();
        assert!(!class_exists(&a).exists && !class_exists(&b).exists);
        assert!(classes_equal(&a, &b).unwrap());

        let other = Filter::full(full(2));
        assert_eq!(classes_equal(&f, &other), Err(ClassifierError::ContextMismatch));
    }

    #[test]
    fn order_examples() {
        let ctx = full(3);
        let f = make_filter(ctx.clone(), &[ideal(&ctx, "12|3")]).unwrap();
        let g = make_filter(ctx.clone(), &[ideal(&ctx, "13|2")]).unwrap();
        let all = Filter::full(ctx.clone());
        assert_eq!(class_order(&f, &g).unwrap(), ClassOrdering::Incomparable);
        assert_eq!(class_order(&f, &all).unwrap(), ClassOrdering::Less);
        assert_eq!(class_order(&all, &g).unwrap(), ClassOrdering::Greater);
        assert_eq!(class_order(&f, &f).unwrap(), ClassOrdering::Equal);
    }

    #[test]
    fn lemmas_on_full_context() {
        let ctx = full(3);
        let filters = enumerate_filters(&ctx, 1 << 16).unwrap();
        for f in &filters {
            let report = lemma_principal_check(f, Some(&ctx));
            assert!(report.passed(), "{report:?}");
        }
        let all = lemma_principal_check(&Filter::full(ctx.clone()), Some(&ctx));
        assert!(all.class_exists && all.upper_principal && all.lower_principal);
        // Some empty class violates the principal form.
        assert!(filters.iter().any(|f| {
            let r = lemma_principal_check(f, None);
            !r.class_exists && !r.upper_principal
        }));
    }

    #[test]
    fn cross_check_small_contexts() {
        let ctx = full(3);
        let filters = enumerate_filters(&ctx, 1 << 16).unwrap();
        let report = oracle_cross_check(&filters, PairCheck::Exhaustive);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.nonempty_classes, 5);

        let chain = Arc::new(PropertySubset::k_partitionability(lattice(4)).unwrap());
        let report = oracle_cross_check(&enumerate_filters(&chain, 100).unwrap(), PairCheck::Exhaustive);
        assert!(report.passed());
        assert_eq!(report.filters_checked, 4);
    }

    #[test]
    fn too_large_context_is_refused() {
        let ctx = full(4);
        assert!(ctx.len() > MAX_EXHAUSTIVE_CONTEXT);
        assert!(matches!(stream_filters(&ctx, 10), Err(ClassifierError::ContextTooLarge { .. })));
    }

    #[test]
    fn record_shape() {
        let ctx = full(3);
        let f = make_filter(ctx.clone(), &[ideal(&ctx, "12|3")]).unwrap();
        let rec = ClassDescriptor::describe(&f).record();
        assert_eq!(rec.label, vec!["↓{12|3}"]);
        assert!(rec.exists);
        assert_eq!(rec.witness.as_deref(), Some("12|3"));
        assert_eq!(rec.type_set, vec!["12|3"]);
        assert_eq!(rec.canonical_generator.as_deref(), Some("↓{12|3}"));
    }
}
