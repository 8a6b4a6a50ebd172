//! Exact three-distance and three-gap decompositions of circle rotations.
//!
//! The points `{i*alpha}` for `0 <= i <= n` cut the unit circle into
//! intervals of at most three distinct lengths (three distance theorem);
//! dually, the indices `i` with `{i*alpha} < beta` recur with at most three
//! distinct gaps (three gap theorem). This crate computes both structures
//! in exact rational arithmetic, verifies them against brute-force oracles,
//! reproduces the Pythagorean temperament ladder they generate, and renders
//! the associated pictures as deterministic SVG.

#![forbid(unsafe_code)]

pub mod error;
pub mod farey;
pub mod oracle;
pub mod rational;
pub mod real_value;
pub mod render;
pub mod temperament;
pub mod three_distance;
pub mod three_gap;

pub use error::{Error, Result};
pub use farey::{
    continued_fraction, convergents, farey_iter, farey_neighbors, farey_sequence, mediant,
    FareyPair, Neighbors, FAREY_SEQUENCE_CAP,
};
pub use oracle::{brute_gaps, brute_lengths, LengthCensus};
pub use rational::Rational;
pub use real_value::{NamedConstant, Origin, RealValue, DEFAULT_PRECISION_BITS};
pub use render::{render_partition_strip, render_un_map, UnMapSpec};
pub use temperament::{temperament_report, two_length_orders, TemperamentReport, TemperamentRow};
pub use three_distance::{
    decompose, interval_sequence, DistancePartition, GeneralPartition, IntervalEntry, LengthClass,
    UniformPartition,
};
pub use three_gap::{
    empirical_frequencies, gap_structure, hits, minimal_return_indices, GapStructure, NarrowGaps,
    WideGaps, DEFAULT_SCAN_CAP,
};
