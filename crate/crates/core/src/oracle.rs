//! Brute-force ground truth for both theorems.
//!
//! These routines compute the interval census and the gap census directly
//! from the definitions (evaluate every point, sort, difference), sharing no
//! code path with the Farey-pair engines they check. They accept exact
//! rationals only: an approximate input would make "ground truth" circular.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::real_value::RealValue;

/// Multiset of interval lengths with multiplicities. Lengths are distinct
/// keys; multiplicities are >= 1; the weighted total is exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthCensus {
    entries: BTreeMap<Rational, u64>,
}

impl LengthCensus {
    pub(crate) fn from_entries(entries: BTreeMap<Rational, u64>) -> Self {
        let census = LengthCensus { entries };
        debug_assert!(census.total() == Rational::one(), "census must tile the circle");
        debug_assert!(census.entries.values().all(|&m| m >= 1));
        census
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Rational, u64)> {
        self.entries.iter().map(|(len, &mult)| (len, mult))
    }

    pub fn distinct_lengths(&self) -> usize {
        self.entries.len()
    }

    pub fn multiplicity(&self, length: &Rational) -> u64 {
        self.entries.get(length).copied().unwrap_or(0)
    }

    pub fn total(&self) -> Rational {
        self.entries
            .iter()
            .fold(Rational::zero(), |acc, (len, &mult)| {
                &acc + &(len * &Rational::from(mult))
            })
    }

    pub fn interval_count(&self) -> u64 {
        self.entries.values().sum()
    }
}

fn require_exact(alpha: &RealValue) -> Result<(&BigInt, &BigInt)> {
    if !alpha.is_exact() {
        return Err(Error::ApproximateInputRefused);
    }
    Ok((alpha.approx().numer(), alpha.approx().denom()))
}

/// Sort-and-diff census of the circle partition by `{i*alpha}`,
/// `0 <= i <= n`: evaluate every point, deduplicate, sort, difference,
/// close the wrap interval back to the point 0.
pub fn brute_lengths(alpha: &RealValue, n: u64) -> Result<LengthCensus> {
    let (p, q) = require_exact(alpha)?;
    if n == 0 {
        return Err(Error::InvalidArgument("order must be >= 1".into()));
    }
    // all points share denominator q: track numerators of {i*p/q}
    let mut numerators = Vec::with_capacity(n as usize + 1);
    let mut cur = BigInt::zero();
    for _ in 0..=n {
        numerators.push(cur.clone());
        cur += p;
        if &cur >= q {
            cur -= q;
        }
    }
    numerators.sort();
    numerators.dedup();

    let mut entries: BTreeMap<Rational, u64> = BTreeMap::new();
    let mut bump = |num: BigInt| {
        let len = Rational::new(num, q.clone()).expect("q > 0");
        *entries.entry(len).or_insert(0) += 1;
    };
    for w in numerators.windows(2) {
        bump(&w[1] - &w[0]);
    }
    bump(q - numerators.last().expect("nonempty"));
    Ok(LengthCensus::from_entries(entries))
}

/// Hit enumeration census for the gap structure: indices `i < horizon` with
/// `{i*alpha} < beta`, returned as consecutive differences with counts.
pub fn brute_gaps(
    alpha: &RealValue,
    beta: &Rational,
    horizon: u64,
) -> Result<BTreeMap<u64, u64>> {
    let (p, q) = require_exact(alpha)?;
    if !beta.is_proper() {
        return Err(Error::InvalidArgument(format!("beta must be in (0,1), got {beta}")));
    }
    // {i*alpha} = 0 for i = q, so the orbit closes inside the horizon when
    // q < horizon. That is fatal only if no genuine return exists at all,
    // i.e. beta <= 1/q: the sole hits are then the orbit closures
    // themselves, which the gap structure's minimal indices cannot
    // describe. A closure with beta > 1/q merely replays the start.
    if q < &BigInt::from(horizon.max(1))
        && beta * &Rational::from_integer(q.clone()) <= Rational::one()
    {
        return Err(Error::RationalAlphaDegenerate);
    }
    let threshold = beta * &Rational::from_reduced(q.clone(), BigInt::one());
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    let mut cur = BigInt::zero();
    let mut last_hit: Option<u64> = None;
    for i in 0..horizon {
        if Rational::from_integer(cur.clone()) < threshold {
            if let Some(prev) = last_hit {
                *counts.entry(i - prev).or_insert(0) += 1;
            }
            last_hit = Some(i);
        }
        cur += p;
        if &cur >= q {
            cur -= q;
        }
    }
    Ok(counts)
}
