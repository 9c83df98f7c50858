//! Heegaard Floer correction terms of lens spaces and trefoil-exterior
//! fillings in exact arithmetic, and the obstruction search for integral
//! T-, O- and I-type surgeries on knots in S^3.

pub mod catalog;
pub mod correction_terms;
pub mod error;
pub mod knot_invariants;
pub mod output;
pub mod rational;
pub mod search;
pub mod verify;

pub use catalog::{catalog_lookup, match_candidate, verify_tables, Catalog, KnotLabel, MatchResult};
pub use correction_terms::{conjugate_index, d_lens, d_lens_table, d_trefoil_filling, DTable, LensCache, LensSpec};
pub use error::{Error, Result};
pub use knot_invariants::{
    alexander_from_t, cable_alexander, d_integral_surgery, d_rational_surgery, genus, t_from_alexander,
    torus_alexander, AlexanderPoly, TSequence,
};
pub use rational::Rational;
pub use search::{search, Candidate, SearchConfig, SearchMode, Sign, SlopeFamily};
