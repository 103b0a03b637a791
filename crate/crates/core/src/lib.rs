//! Analysis toolkit for nested canalyzing Boolean functions (NCFs).
//!
//! A Boolean function is nested canalyzing when fixing one variable to a
//! canalyzing input forces the output, and the restriction to the other
//! input is again nested canalyzing. Every such function has a unique
//! layered normal form; this crate decomposes functions into that form
//! ([`canalyze`]), counts and enumerates all NCFs through it
//! ([`formulas`], [`enumerate`]), evaluates the exact weight, activity
//! and sensitivity formulas the form induces, and cross-checks everything
//! against brute-force oracles ([`oracle`], [`selftest`]).
//!
//! All arithmetic is exact: big integers for counts and dyadic rationals
//! (denominator a power of two) for activities and sensitivities.

pub mod anf;
pub mod canalyze;
pub mod dyadic;
pub mod enumerate;
pub mod error;
pub mod formulas;
pub mod oracle;
pub mod selftest;
pub mod table;

pub use anf::AnfPoly;
pub use canalyze::{
    canalyzing_triples, factor_layer, ncf_decompose, CanalyzingTriple, DecomposeVerdict,
    ExtendedMonomial, LayerStructure, NotNcfReason,
};
pub use dyadic::Dyadic;
pub use enumerate::{compositions, enumerate_ncf, sample_ncf, NcfSampler, StructureIterator};
pub use formulas::{
    average_sensitivity, conjecture_scan, count_ncf, count_ncf_total, count_recursive,
    sensitivity_bounds, weight_from_composition, BigCount, Composition, MaxFamily, ScanReport,
};
pub use oracle::{activity_bruteforce, classify_all, is_ncf_by_definition, sensitivity_profile};
pub use table::{Point, TruthTable, MAX_VARS};
