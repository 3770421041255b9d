//! Labeled set families and their intersection classes.
//!
//! A [`LabeledFamily`] assigns a subset `A_x` of a finite universe to every
//! element `x` of a label poset such that `y ⪯ x ⇔ A_y ⊆ A_x`. For a set of
//! labels `S` the intersection class is the set of points lying in exactly the
//! `A_x` with `x ∈ S`. Such a class can only be nonempty when `S` is an
//! up-set; [`generic_family`] realizes every up-set, while
//! [`non_sufficiency_family`] shows an up-set whose class is empty anyway.
//!
//! Nothing here knows about partitions: points and labels are plain indices.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{ElementSet, Poset, PosetError};

/// Exhaustive label enumeration is limited to this many labels.
pub const MAX_LABELS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VennError {
    #[error("family has {labels} labels but {sets} assigned sets")]
    LabelCount { labels: usize, sets: usize },
    #[error("assigned set of label {label} lives over {got} points, expected {expected}")]
    UniverseMismatch { label: usize, expected: usize, got: usize },
    #[error("order embedding fails for labels {lower} and {upper}: order says {ordered}, inclusion says {included}")]
    NotEmbedding { lower: usize, upper: usize, ordered: bool, included: bool },
    #[error("label set refers to {got} labels, family has {expected}")]
    UnknownLabel { expected: usize, got: usize },
    #[error("family has {0} labels; exhaustive checks allow at most {MAX_LABELS}")]
    TooManyLabels(usize),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Subsets of a point universe indexed by the elements of a label poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledFamily {
    universe: usize,
    labels: Poset,
    assign: Vec<ElementSet>,
}

impl LabeledFamily {
    /// Validates the order embedding `y ⪯ x ⇔ A_y ⊆ A_x`.
    pub fn new(universe: usize, labels: Poset, assign: Vec<ElementSet>) -> Result<Self, VennError> {
        if labels.len() != assign.len() {
            return Err(VennError::LabelCount { labels: labels.len(), sets: assign.len() });
        }
        for (label, set) in assign.iter().enumerate() {
            if set.domain() != universe {
                return Err(VennError::UniverseMismatch { label, expected: universe, got: set.domain() });
            }
        }
        for lower in 0..labels.len() {
            for upper in 0..labels.len() {
                let ordered = labels.le(lower, upper);
                let included = assign[lower].is_subset(&assign[upper]);
                if ordered != included {
                    return Err(VennError::NotEmbedding { lower, upper, ordered, included });
                }
            }
        }
        Ok(LabeledFamily { universe, labels, assign })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn labels(&self) -> &Poset {
        &self.labels
    }

    pub fn assigned(&self, label: usize) -> &ElementSet {
        &self.assign[label]
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    /// `⋃ A_x` is the whole universe.
    pub fn is_covering(&self) -> bool {
        let mut union = ElementSet::empty(self.universe);
        for set in &self.assign {
            union.union_with(set);
        }
        union.len() == self.universe
    }

    /// Points lying in every `A_x` with `x ∈ label` and in no other `A_x`.
    /// The empty intersection is the whole universe.
    pub fn intersection_class(&self, label: &ElementSet) -> Result<IntersectionClass, VennError> {
        if label.domain() != self.labels.len() {
            return Err(VennError::UnknownLabel { expected: self.labels.len(), got: label.domain() });
        }
        let mut points = ElementSet::full(self.universe);
        for (x, set) in self.assign.iter().enumerate() {
            if label.contains(x) {
                points.intersect_with(set);
            } else {
                points = points.difference(set);
            }
        }
        Ok(IntersectionClass { label: label.clone(), points })
    }

    /// Enumerates all label sets and checks that nonempty classes carry
    /// up-set labels (and nonempty ones, when the family covers the
    /// universe).
    pub fn check_lemma_upset(&self) -> Result<UpsetReport, VennError> {
        let m = self.labels.len();
        if m > MAX_LABELS {
            return Err(VennError::TooManyLabels(m));
        }
        let covering = self.is_covering();
        let mut report = UpsetReport { labels_checked: 1 << m, covering, ..Default::default() };
        for bits in 0u32..(1u32 << m) {
            let label = ElementSet::from_indices(m, (0..m).filter(|i| bits >> i & 1 == 1));
            let class = self.intersection_class(&label)?;
            let is_up = self.labels.is_up_set(&label);
            if is_up {
                report.up_sets += 1;
            }
            if class.points.is_empty() {
                if is_up && !label.is_empty() {
                    report.empty_up_sets.push(label.to_vec());
                }
                continue;
            }
            report.nonempty_labels.push(label.to_vec());
            if !is_up {
                report
                    .violations
                    .push(format!("label {:?} is not an up-set but its class is nonempty", label.to_vec()));
            }
            if covering && label.is_empty() {
                report.violations.push("covering family has a nonempty class for the empty label".to_string());
            }
        }
        Ok(report)
    }

    /// DOT drawing of the up-set labels ordered by inclusion, with labels
    /// whose class is nonempty filled.
    pub fn to_dot(&self) -> Result<String, VennError> {
        let m = self.labels.len();
        if m > MAX_LABELS {
            return Err(VennError::TooManyLabels(m));
        }
        let up_sets: Vec<ElementSet> = self.labels.up_sets(true, usize::MAX).collect::<Result<_, _>>()?;
        let order = Poset::from_predicate(up_sets.len(), |a, b| up_sets[a].is_subset(&up_sets[b]))?;
        let mut dot = String::from("digraph labels {\n  rankdir=BT;\n  node [shape=box];\n");
        for (i, label) in up_sets.iter().enumerate() {
            let nonempty = !self.intersection_class(label)?.points.is_empty();
            let style = if nonempty { ", style=filled, fillcolor=lightblue" } else { "" };
            let _ = writeln!(dot, "  n{i} [label=\"{}\"{style}];", label_name(label));
        }
        for (lo, hi) in order.covers() {
            let _ = writeln!(dot, "  n{lo} -> n{hi};");
        }
        dot.push_str("}\n");
        Ok(dot)
    }

    pub fn to_json(&self) -> FamilyJson {
        FamilyJson {
            universe: self.universe,
            labels: (0..self.labels.len()).map(letter_name).collect(),
            order: self.labels.covers(),
            incidence: self.assign.iter().map(ElementSet::to_vec).collect(),
        }
    }

    pub fn from_json(json: &FamilyJson) -> Result<Self, VennError> {
        let labels = Poset::from_relation(json.labels.len(), json.order.iter().copied())?;
        let mut assign = Vec::with_capacity(json.incidence.len());
        for (label, points) in json.incidence.iter().enumerate() {
            if let Some(&bad) = points.iter().find(|&&p| p >= json.universe) {
                return Err(VennError::UniverseMismatch { label, expected: json.universe, got: bad + 1 });
            }
            assign.push(ElementSet::from_indices(json.universe, points.iter().copied()));
        }
        LabeledFamily::new(json.universe, labels, assign)
    }
}

fn letter_name(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("x{i}")
    }
}

fn label_name(label: &ElementSet) -> String {
    let names: Vec<String> = label.iter().map(letter_name).collect();
    format!("{{{}}}", names.join(","))
}

/// Serialized family: label covers as `[lower, upper]` pairs and, per label,
/// the list of points it contains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub universe: usize,
    pub labels: Vec<String>,
    pub order: Vec<(usize, usize)>,
    pub incidence: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionClass {
    pub label: ElementSet,
    pub points: ElementSet,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct UpsetReport {
    pub labels_checked: usize,
    pub up_sets: usize,
    pub covering: bool,
    pub nonempty_labels: Vec<Vec<usize>>,
    /// Nonempty up-set labels whose class is empty anyway.
    pub empty_up_sets: Vec<Vec<usize>>,
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl UpsetReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// One point per up-set `U` of `labels` (the empty up-set included), placed in
/// `A_x` exactly for `x ∈ U`. Every up-set label then has a nonempty class.
pub fn generic_family(labels: &Poset) -> Result<LabeledFamily, VennError> {
    let up_sets: Vec<ElementSet> = labels.up_sets(true, usize::MAX).collect::<Result<_, _>>()?;
    let mut assign = vec![ElementSet::empty(up_sets.len()); labels.len()];
    for (point, up_set) in up_sets.iter().enumerate() {
        for x in up_set.iter() {
            assign[x].insert(point);
        }
    }
    LabeledFamily::new(up_sets.len(), labels.clone(), assign)
}

/// Three pairwise incomparable labels `a, b, c` with `A_a ⊆ A_b ∪ A_c` but
/// `A_a ⊄ A_b` and `A_a ⊄ A_c`. The label `{a}` is an up-set whose class is
/// empty.
pub fn non_sufficiency_family() -> LabeledFamily {
    // Points: 0 ∈ a∩b, 1 ∈ a∩c, 2 ∈ b only, 3 ∈ c only, 4 ∈ b∩c, 5 outside.
    let sets = [vec![0, 1], vec![0, 2, 4], vec![1, 3, 4]];
    let assign = sets.iter().map(|s| ElementSet::from_indices(6, s.iter().copied())).collect();
    LabeledFamily::new(6, Poset::antichain(3), assign).expect("antichain embedding")
}

type Relation = Vec<(usize, usize)>;

/// All posets on `size` labels up to relabeling, in a deterministic order
/// (fewest relations first).
pub fn posets_up_to_isomorphism(size: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> =
        (0..size).flat_map(|a| (0..size).map(move |b| (a, b))).filter(|(a, b)| a != b).collect();
    let mut seen: BTreeSet<Vec<(usize, usize)>> = BTreeSet::new();
    let mut out: Vec<(usize, Relation, Poset)> = Vec::new();
    for bits in 0u64..(1u64 << pairs.len()) {
        let relation: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &p)| p).collect();
        let Ok(poset) = Poset::from_relation(size, relation.iter().copied()) else {
            continue;
        };
        let strict: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(a, b)| poset.le(a, b)).collect();
        if strict.len() != relation.len() {
            // Only closed relations are taken, so each poset is visited once.
            continue;
        }
        let canonical = permutations(size)
            .into_iter()
            .map(|perm| {
                let mut rel: Vec<(usize, usize)> = strict.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
                rel.sort_unstable();
                rel
            })
            .min()
            .unwrap_or_default();
        if seen.insert(canonical.clone()) {
            out.push((canonical.len(), canonical, poset));
        }
    }
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, rel, _)| Poset::from_relation(size, rel).expect("closed relation")).collect()
}

fn permutations(size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for perm in permutations(size - 1) {
        for pos in 0..=perm.len() {
            let mut p = perm.clone();
            p.insert(pos, size - 1);
            out.push(p);
        }
    }
    out
}

/// A random poset on `labels` elements: each pair `i < j` is related with
/// probability `density`, then closed transitively.
pub fn random_poset<R: Rng>(labels: usize, density: f64, rng: &mut R) -> Poset {
    let relation: Vec<(usize, usize)> =
        (0..labels).flat_map(|i| (i + 1..labels).map(move |j| (i, j))).filter(|_| rng.gen_bool(density)).collect();
    Poset::from_relation(labels, relation).expect("pairs i < j are acyclic")
}

/// A random family over `labels`: one point per principal up-set (which
/// forces the embedding), plus `extra_points` points whose membership
/// pattern is the up-closure of a random label set, or nothing.
pub fn random_family<R: Rng>(labels: &Poset, extra_points: usize, rng: &mut R) -> LabeledFamily {
    let m = labels.len();
    let mut patterns: Vec<ElementSet> = (0..m).map(|x| labels.successors(x).clone()).collect();
    for _ in 0..extra_points {
        let seed = ElementSet::from_indices(m, (0..m).filter(|_| rng.gen_bool(0.3)));
        patterns.push(labels.up_closure(&seed).expect("own domain"));
    }
    let universe = patterns.len();
    let mut assign = vec![ElementSet::empty(universe); m];
    for (point, pattern) in patterns.iter().enumerate() {
        for x in pattern.iter() {
            assign[x].insert(point);
        }
    }
    LabeledFamily::new(universe, labels.clone(), assign).expect("up-set patterns embed the order")
}

/// `count` random families from one seed: up to 8 labels, random order
/// density, up to 15 extra points each.
pub fn seeded_families(count: usize, seed: u64) -> Vec<LabeledFamily> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let labels = rng.gen_range(1..=8);
            let density = rng.gen_range(0.0..0.6);
            let poset = random_poset(labels, density, &mut rng);
            let extra = rng.gen_range(0..16);
            random_family(&poset, extra, &mut rng)
        })
        .collect()
}
