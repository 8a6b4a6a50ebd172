//! The Pythagorean-temperament ladder: divide an octave (log scale, base 2)
//! by fractional parts of multiples of log2 3, i.e. run the three-distance
//! machinery with generator `log2(3/2)`.
//!
//! The division counts with exactly two interval sizes are the orders where
//! the Farey pair satisfies `b + d = n + 1`; for the Pythagorean generator
//! these give the classical 2, 3, 5, 7, 12, 17 note scales.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{continued_fraction, convergents};
use crate::rational::Rational;
use crate::real_value::RealValue;
use crate::three_distance::{decompose, interval_sequence, DistancePartition};

/// One ladder row: an `m`-note division of the octave.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemperamentRow {
    /// number of notes, = n + 1
    pub notes: u64,
    /// tick indices in increasing pitch order (rank numbers of Figure-style
    /// ladders); starts at 0
    pub ranks_in_position_order: Vec<u64>,
    /// interval length multiset as (length, multiplicity), ascending
    pub lengths: Vec<(Rational, u64)>,
    /// true iff exactly two distinct interval lengths occur
    pub two_length: bool,
}

/// Ladder report for a generator and a list of note counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemperamentReport {
    pub generator: Rational,
    pub rows: Vec<TemperamentRow>,
    /// denominators of the generator's continued-fraction convergents, for
    /// comparison with the two-length note counts (which also include
    /// semiconvergent denominators)
    pub convergent_denominators: Vec<u64>,
}

/// All orders `n <= n_max` whose partition has exactly two distinct
/// interval lengths. Note counts are these values plus one.
pub fn two_length_orders(alpha: &RealValue, n_max: u64) -> Result<Vec<u64>> {
    let mut orders = Vec::new();
    for n in 1..=n_max {
        if decompose(alpha, n)?.distinct_length_count() == 2 {
            orders.push(n);
        }
    }
    Ok(orders)
}

/// Builds the ladder rows for the requested note counts (each >= 2).
pub fn temperament_report(
    generator: &RealValue,
    note_counts: &[u64],
) -> Result<TemperamentReport> {
    if note_counts.is_empty() {
        return Err(Error::InvalidArgument("note count list is empty".into()));
    }
    let mut rows = Vec::with_capacity(note_counts.len());
    for &notes in note_counts {
        if notes < 2 {
            return Err(Error::InvalidArgument(format!(
                "a division needs at least 2 notes, got {notes}"
            )));
        }
        let n = notes - 1;
        let partition = decompose(generator, n)?;
        let sequence = interval_sequence(generator, n)?;
        let lengths: Vec<(Rational, u64)> = partition
            .census()
            .entries()
            .map(|(len, mult)| (len.clone(), mult))
            .collect();
        rows.push(TemperamentRow {
            notes,
            ranks_in_position_order: sequence.iter().map(|e| e.index).collect(),
            lengths,
            two_length: matches!(partition, DistancePartition::General(_))
                && partition.distinct_length_count() == 2,
        });
    }
    let convergent_denominators = convergents(&continued_fraction(generator.approx())?)
        .iter()
        .map(|c| u64::try_from(c.denom().clone()).unwrap_or(u64::MAX))
        .take_while(|&d| d < u64::MAX)
        .collect();
    Ok(TemperamentReport {
        generator: generator.approx().clone(),
        rows,
        convergent_denominators,
    })
}
