//! The three gap theorem: the gaps between successive integers `i` with
//! `{i*alpha} < beta` take at most three values, one the sum of the other
//! two.
//!
//! When `beta >= max(alpha, 1-alpha)` the gaps are 1 (frequency `2b-1`) and
//! 2 (frequency `1-b`). Otherwise, with `b` and `d` the least positive
//! integers satisfying `{b*alpha} < beta` and `{d*alpha} > 1-beta`, the
//! gaps are `b`, `d`, `b+d` with frequencies `beta-s`, `beta-t`, `s+t-beta`
//! where `s = {b*alpha}` and `t = 1 - {d*alpha}`. Frequencies are natural
//! densities over all indices, so they sum to `beta`.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::real_value::RealValue;
use crate::three_distance::{decompose, DistancePartition};

/// Default cap on the minimal-return-index search.
pub const DEFAULT_SCAN_CAP: u64 = 1_000_000;

/// `beta >= max(alpha, 1-alpha)`: gaps 1 and 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WideGaps {
    beta: Rational,
    freq_1: Rational,
    freq_2: Rational,
}

impl WideGaps {
    fn new(beta: Rational) -> Self {
        let freq_1 = &(&beta + &beta) - &Rational::one();
        let freq_2 = &Rational::one() - &beta;
        debug_assert!(!freq_1.is_negative() && !freq_2.is_negative());
        // frequency identity: (2b - 1) + (1 - b) = b
        debug_assert_eq!(&freq_1 + &freq_2, beta);
        WideGaps { beta, freq_1, freq_2 }
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn freq_1(&self) -> &Rational {
        &self.freq_1
    }

    pub fn freq_2(&self) -> &Rational {
        &self.freq_2
    }

    pub fn gap_set(&self) -> Vec<u64> {
        vec![1, 2]
    }
}

/// `beta < max(alpha, 1-alpha)`: gaps `b`, `d`, and (unless `beta = s+t`)
/// `b+d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NarrowGaps {
    b: u64,
    d: u64,
    s: Rational,
    t: Rational,
    beta: Rational,
    freq_b: Rational,
    freq_d: Rational,
    freq_bd: Rational,
}

impl NarrowGaps {
    fn new(b: u64, d: u64, s: Rational, t: Rational, beta: Rational) -> Self {
        let freq_b = &beta - &s;
        let freq_d = &beta - &t;
        let freq_bd = &(&s + &t) - &beta;
        let gaps = NarrowGaps { b, d, s, t, beta, freq_b, freq_d, freq_bd };
        gaps.assert_invariants();
        gaps
    }

    fn assert_invariants(&self) {
        assert_ne!(self.b, self.d, "minimal return indices must differ");
        assert!(self.s < self.beta && self.t < self.beta, "beta > max(s,t)");
        assert!(
            !self.freq_bd.is_negative(),
            "beta <= s + t must hold for minimal b, d"
        );
        let sum_st = &self.s + &self.t;
        assert!(sum_st < Rational::one(), "s + t < 1");
        // frequency identity: (beta-s) + (beta-t) + (s+t-beta) = beta
        assert_eq!(
            &(&self.freq_b + &self.freq_d) + &self.freq_bd,
            self.beta
        );
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    pub fn freq_b(&self) -> &Rational {
        &self.freq_b
    }

    pub fn freq_d(&self) -> &Rational {
        &self.freq_d
    }

    pub fn freq_bd(&self) -> &Rational {
        &self.freq_bd
    }

    /// Gaps that occur with positive frequency, ascending; `b+d` drops out
    /// exactly when `beta = s+t`.
    pub fn gap_set(&self) -> Vec<u64> {
        let mut gaps = if self.freq_bd.is_zero() {
            vec![self.b, self.d]
        } else {
            vec![self.b, self.d, self.b + self.d]
        };
        gaps.sort_unstable();
        gaps
    }

    /// Classifies the gap after a hit at position `{i*alpha}`:
    /// `b` on `[0, beta-s)`, `b+d` on `[beta-s, t)`, `d` on `[t, beta)`.
    pub fn gap_after(&self, position: &Rational) -> Result<u64> {
        if position.is_negative() || position >= &self.beta {
            return Err(Error::NotAHit(position.to_string()));
        }
        Ok(if position < &self.freq_b {
            self.b
        } else if position < &self.t {
            self.b + self.d
        } else {
            self.d
        })
    }
}

/// Output of [`gap_structure`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum GapStructure {
    Wide(WideGaps),
    Narrow(NarrowGaps),
}

impl GapStructure {
    pub fn beta(&self) -> &Rational {
        match self {
            GapStructure::Wide(w) => w.beta(),
            GapStructure::Narrow(n) => n.beta(),
        }
    }

    pub fn gap_set(&self) -> Vec<u64> {
        match self {
            GapStructure::Wide(w) => w.gap_set(),
            GapStructure::Narrow(n) => n.gap_set(),
        }
    }

    /// Theoretical frequency (density over all indices) of each gap value.
    pub fn frequencies(&self) -> BTreeMap<u64, Rational> {
        match self {
            GapStructure::Wide(w) => {
                [(1, w.freq_1.clone()), (2, w.freq_2.clone())].into_iter().collect()
            }
            GapStructure::Narrow(n) => {
                let mut map = BTreeMap::new();
                map.insert(n.b, n.freq_b.clone());
                map.insert(n.d, n.freq_d.clone());
                if !n.freq_bd.is_zero() {
                    map.insert(n.b + n.d, n.freq_bd.clone());
                }
                map
            }
        }
    }
}

/// The least positive integers `b` and `d` with `{b*alpha} < beta` and
/// `{d*alpha} > 1 - beta`.
///
/// Search strategy: the minimum of `{i*alpha}` over `i <= m` is the `s`
/// value of `decompose(alpha, m)` and is nonincreasing in `m`, so `b` is
/// the least `m` whose `s(m)` drops below `beta`, found by doubling and
/// then bisecting on `m`, each probe one Farey descent. Symmetrically `d`
/// uses `t(m)`. A linear scan oracle cross-checks this in the tests.
pub fn minimal_return_indices(
    alpha: &RealValue,
    beta: &Rational,
    cap: u64,
) -> Result<(u64, u64)> {
    if !beta.is_proper() {
        return Err(Error::InvalidArgument(format!("beta must be in (0,1), got {beta}")));
    }
    let b = least_order_below(alpha, beta, cap, Side::Min)?;
    // the found index must be a genuine return, not an orbit closure
    let (pos_b, _) = alpha.frac_multiple(b)?;
    if pos_b.is_zero() {
        return Err(Error::RationalAlphaDegenerate);
    }
    let d = least_order_below(alpha, beta, cap, Side::Max)?;
    Ok((b, d))
}

#[derive(Clone, Copy)]
enum Side {
    /// track s(m) = min {i*alpha}
    Min,
    /// track t(m) = 1 - max {i*alpha}
    Max,
}

/// Extremal record `s(m)` or `t(m)` from one Farey descent at order `m`.
/// `Uniform{q}` at order `m` means the orbit closed at `q <= m`: the record
/// is 0 on the min side (point {q*alpha} = 0) and `1/q` on the max side.
fn record_value(alpha: &RealValue, m: u64, side: Side) -> Result<Rational> {
    match decompose(alpha, m)? {
        DistancePartition::General(g) => Ok(match side {
            Side::Min => g.s().clone(),
            Side::Max => g.t().clone(),
        }),
        DistancePartition::Uniform(u) => Ok(match side {
            Side::Min => Rational::zero(),
            Side::Max => u.length(),
        }),
    }
}

fn least_order_below(
    alpha: &RealValue,
    beta: &Rational,
    cap: u64,
    side: Side,
) -> Result<u64> {
    // certified strict comparison record < beta, with the record's own
    // error inflation m * err
    let below = |m: u64| -> Result<bool> {
        let value = record_value(alpha, m, side)?;
        if alpha.is_exact() {
            return Ok(&value < beta);
        }
        let radius = alpha.err() * &Rational::from(m);
        if &(&value + &radius) < beta {
            Ok(true)
        } else if &(&value - &radius) >= beta {
            Ok(false)
        } else {
            Err(Error::PrecisionInsufficient(format!(
                "cannot compare extremal point at order {m} with beta = {beta}"
            )))
        }
    };

    // doubling phase; lo tracks the largest order probed false
    let mut lo = 0u64;
    let mut hi = 1u64;
    loop {
        if below(hi)? {
            break;
        }
        if hi >= cap {
            return Err(Error::GapSearchCapExceeded(cap));
        }
        lo = hi;
        hi = (hi * 2).min(cap);
    }
    // bisect for the least order where the record dips below beta; that
    // order is itself the minimal index (the record was set by it)
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if below(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Computes the full three-gap structure for `(alpha, beta)`.
pub fn gap_structure(alpha: &RealValue, beta: &Rational, cap: u64) -> Result<GapStructure> {
    if !beta.is_proper() {
        return Err(Error::InvalidArgument(format!("beta must be in (0,1), got {beta}")));
    }
    // wide iff beta >= alpha AND beta >= 1-alpha; either side certifying
    // Greater already decides narrow, so only the wide claim needs both
    // comparisons to succeed
    let cmp_alpha = alpha.cmp_rational(beta);
    let cmp_comp = alpha.complement().cmp_rational(beta);
    let narrow = matches!(cmp_alpha, Ok(std::cmp::Ordering::Greater))
        || matches!(cmp_comp, Ok(std::cmp::Ordering::Greater));
    if !narrow {
        cmp_alpha?;
        cmp_comp?;
        return Ok(GapStructure::Wide(WideGaps::new(beta.clone())));
    }
    let (b, d) = minimal_return_indices(alpha, beta, cap)?;
    let (s, s_radius) = alpha.frac_multiple(b)?;
    let (max_pos, t_radius) = alpha.frac_multiple(d)?;
    let t = &Rational::one() - &max_pos;
    // beta <= s + t is a theorem for true alpha; make sure the approximate
    // s, t cannot misrepresent the sign of s + t - beta
    if !alpha.is_exact() {
        let slack = &s_radius + &t_radius;
        let margin = (&(&s + &t) - beta).abs();
        if !margin.is_zero() && margin <= slack {
            return Err(Error::PrecisionInsufficient(format!(
                "s + t is within the error bound of beta = {beta}"
            )));
        }
    }
    Ok(GapStructure::Narrow(NarrowGaps::new(b, d, s, t, beta.clone())))
}

/// All indices `0 <= i <= i_max` with `{i*alpha} < beta`, ascending.
/// Every comparison is certified against the input's error bound.
pub fn hits(alpha: &RealValue, beta: &Rational, i_max: u64) -> Result<Vec<u64>> {
    if !beta.is_proper() {
        return Err(Error::InvalidArgument(format!("beta must be in (0,1), got {beta}")));
    }
    let x = alpha.approx();
    let q = x.denom().clone();
    let p = x.numer().clone();
    // integer threshold: numerator/q < beta  <=>  numerator <= bound
    let scaled = beta * &Rational::from_integer(q.clone());
    let bound = if scaled.denom().is_one() {
        scaled.numer() - BigInt::one()
    } else {
        scaled.floor()
    };

    let radius_unit = alpha.err(); // per-index error is i * radius_unit
    // Conservative integer bands around 0, beta, and 1 in numerator space,
    // sized for the worst radius i_max * err. A numerator clear of every
    // band is decidable for any index; only band entries need the exact
    // per-index certification.
    let bands = if radius_unit.is_zero() {
        None
    } else {
        let worst = &(radius_unit * &Rational::from(i_max)) * &Rational::from_integer(q.clone());
        let margin = worst.floor() + BigInt::one();
        let beta_scaled = beta * &Rational::from_integer(q.clone());
        Some(Bands {
            low: margin.clone(),
            high: &q - &margin,
            beta_lo: beta_scaled.floor() - &margin,
            beta_hi: beta_scaled.floor() + BigInt::one() + &margin,
        })
    };

    let mut out = Vec::new();
    let mut numerator = BigInt::zero();
    for i in 0..=i_max {
        if let Some(bands) = &bands {
            if i > 0 && !bands.clearly_decidable(&numerator) {
                certify_hit_decidable(&numerator, &q, beta, radius_unit, i)?;
            }
        }
        if numerator <= bound {
            out.push(i);
        }
        numerator += &p;
        if numerator >= q {
            numerator -= &q;
        }
    }
    Ok(out)
}

struct Bands {
    low: BigInt,
    high: BigInt,
    beta_lo: BigInt,
    beta_hi: BigInt,
}

impl Bands {
    fn clearly_decidable(&self, numerator: &BigInt) -> bool {
        numerator > &self.low
            && numerator < &self.high
            && (numerator < &self.beta_lo || numerator > &self.beta_hi)
    }
}

/// For approximate alpha, the hit test at index `i` is sound only if the
/// true position cannot be on the other side of beta, and cannot have
/// wrapped past 0 or 1.
fn certify_hit_decidable(
    numerator: &BigInt,
    q: &BigInt,
    beta: &Rational,
    radius_unit: &Rational,
    i: u64,
) -> Result<()> {
    let pos = Rational::new(numerator.clone(), q.clone()).expect("q > 0");
    let radius = radius_unit * &Rational::from(i);
    let one = Rational::one();
    let decidable = pos >= radius
        && (&pos + &radius) < one
        && ((&pos + &radius) < *beta || &(&pos - &radius) >= beta);
    if decidable {
        Ok(())
    } else {
        Err(Error::PrecisionInsufficient(format!(
            "hit test at index {i} undecidable within the error bound"
        )))
    }
}

/// Gap census among hits with index below `horizon`, as exact densities
/// `count / horizon`. These converge to the structure's theoretical
/// frequencies by equidistribution.
pub fn empirical_frequencies(
    alpha: &RealValue,
    beta: &Rational,
    horizon: u64,
) -> Result<BTreeMap<u64, Rational>> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be >= 1".into()));
    }
    let indices = hits(alpha, beta, horizon - 1)?;
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for w in indices.windows(2) {
        *counts.entry(w[1] - w[0]).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .map(|(gap, count)| {
            (gap, Rational::new(count, horizon).expect("horizon > 0"))
        })
        .collect())
}

impl Serialize for GapStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        // freqs keyed by the literal gap value
        let freqs: BTreeMap<String, Rational> = self
            .frequencies()
            .into_iter()
            .map(|(gap, freq)| (gap.to_string(), freq))
            .collect();
        match self {
            GapStructure::Wide(w) => {
                let mut st = serializer.serialize_struct("GapStructure", 3)?;
                st.serialize_field("case", "wide")?;
                st.serialize_field("beta", w.beta())?;
                st.serialize_field("freqs", &freqs)?;
                st.end()
            }
            GapStructure::Narrow(n) => {
                let mut st = serializer.serialize_struct("GapStructure", 7)?;
                st.serialize_field("case", "narrow")?;
                st.serialize_field("b", &n.b)?;
                st.serialize_field("d", &n.d)?;
                st.serialize_field("s", &n.s)?;
                st.serialize_field("t", &n.t)?;
                st.serialize_field("beta", &n.beta)?;
                st.serialize_field("freqs", &freqs)?;
                st.end()
            }
        }
    }
}

#[derive(Deserialize)]
struct GapJson {
    case: String,
    b: Option<u64>,
    d: Option<u64>,
    s: Option<Rational>,
    t: Option<Rational>,
    beta: Rational,
    freqs: BTreeMap<String, Rational>,
}

impl<'de> Deserialize<'de> for GapStructure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = GapJson::deserialize(deserializer)?;
        if !raw.beta.is_proper() {
            return Err(de::Error::custom("beta must lie in (0,1)"));
        }
        let rebuilt = match raw.case.as_str() {
            "wide" => {
                if raw.beta < Rational::new(1, 2).expect("const") {
                    return Err(de::Error::custom("wide case needs beta >= 1/2"));
                }
                GapStructure::Wide(WideGaps::new(raw.beta))
            }
            "narrow" => {
                let b = raw.b.ok_or_else(|| de::Error::missing_field("b"))?;
                let d = raw.d.ok_or_else(|| de::Error::missing_field("d"))?;
                let s = raw.s.ok_or_else(|| de::Error::missing_field("s"))?;
                let t = raw.t.ok_or_else(|| de::Error::missing_field("t"))?;
                // pre-validate everything the constructor asserts
                if b == d || b == 0 || d == 0 {
                    return Err(de::Error::custom("return indices must be distinct and positive"));
                }
                if s.is_zero() || s.is_negative() || t.is_zero() || t.is_negative() {
                    return Err(de::Error::custom("s and t must be positive"));
                }
                if s >= raw.beta || t >= raw.beta {
                    return Err(de::Error::custom("beta must exceed s and t"));
                }
                let sum = &s + &t;
                if sum < raw.beta || sum >= Rational::one() {
                    return Err(de::Error::custom("s + t must lie in [beta, 1)"));
                }
                GapStructure::Narrow(NarrowGaps::new(b, d, s, t, raw.beta))
            }
            other => return Err(de::Error::custom(format!("unknown case {other:?}"))),
        };
        let expected: BTreeMap<String, Rational> = rebuilt
            .frequencies()
            .into_iter()
            .map(|(gap, freq)| (gap.to_string(), freq))
            .collect();
        if expected != raw.freqs {
            return Err(de::Error::custom("freqs do not match the structure"));
        }
        Ok(rebuilt)
    }
}
