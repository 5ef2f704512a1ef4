//! Latin squares, their autotopisms, and the 1-(v,k,r) incidence structures
//! formed by squares and the autotopisms that fix them.

pub mod autotopism;
pub mod classify;
pub mod design;
pub mod error;
pub mod fixed;
pub mod invariants;
pub mod io;
pub mod latin;
pub mod perm;
pub mod tables;

pub use autotopism::{autotopism_group, find_isotopism, group_order, AutotopismGroup};
pub use error::{Error, Result};
pub use fixed::{cell_orbits, delta, delta_of_structure, enumerate_fixed, CellOrbit, FixedSet, SearchLimits};
pub use latin::{Isotopism, IsotopismCycleStructure, LatinSquare, TripleSet};
pub use perm::{count_with_structure, CycleStructure, Permutation};
pub use classify::{are_isotopic, bind_labels, partition_classes, partition_squares, IsotopyClass, LabelCatalog};
pub use design::{
    block_multiplicity, cycle_structure_catalog, k_of, multiplicity, regularity_check, structure_report,
    structure_report_from_set, CatalogEntry, ReportOptions, Status, StructureReport,
};
pub use invariants::{count_intercalates, count_subrect, count_subsquares3, count_transversals, invariant_vector, InvariantVector};
pub use io::{enumerate_cached, Cache, Format, RunConfig};
pub use tables::{verify_table, TableRow, Verification, VerifyOptions};
