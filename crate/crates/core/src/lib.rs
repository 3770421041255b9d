//! Classification of multipartite partial-correlation properties.
//!
//! The crate builds three nested lattices over `n` parties:
//!
//! 1. [`partitions`]: set partitions of the parties under refinement,
//! 2. [`ideals`]: nonempty down-sets of partitions (correlation properties),
//! 3. [`classifier`]: nonempty up-sets of a chosen family of properties
//!    (class labels),
//!
//! and decides which class labels are realized and which coincide.
//! [`catalogs`] produces the standard classifications, [`venn`] checks the
//! underlying set-theoretic lemmas on abstract families, and [`dot`] renders
//! Hasse diagrams.

pub mod catalogs;
pub mod classifier;
pub mod dot;
pub mod ideals;
pub mod partitions;
pub mod poset;
pub mod venn;

pub use catalogs::{Catalog, CatalogError};
pub use classifier::{class_exists, classes_equal, type_set, ClassDescriptor, Filter};
pub use ideals::{Ideal, PropertySubset};
pub use partitions::{Partition, PartitionLattice};
pub use poset::{ElementSet, Poset};
