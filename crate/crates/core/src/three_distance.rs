//! The three distance theorem: the points `{i*alpha}`, `0 <= i <= n`,
//! partition the circle into intervals of at most three distinct lengths,
//! the largest being the sum of the other two.
//!
//! With `a/b < alpha < c/d` the Farey pair of `F_n` around `alpha`:
//!
//! * `n+1-b` intervals of length `s = b*alpha - a`,
//! * `n+1-d` intervals of length `t = c - d*alpha`,
//! * `b+d-(n+1)` intervals of length `s + t`.
//!
//! If `alpha` is itself a member `p/q` of `F_n` the points collapse to `q`
//! equal intervals. Intervals are half-open `[left, right)`; the final one
//! wraps from the maximum point back to 0.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::Integer;
use serde::de;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::farey::{farey_neighbors, FareyPair, Neighbors};
use crate::oracle::LengthCensus;
use crate::rational::Rational;
use crate::real_value::RealValue;

/// `alpha = p/q` was a member of `F_n`: `q` equal intervals of `1/q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformPartition {
    q: u64,
    n: u64,
}

impl UniformPartition {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn length(&self) -> Rational {
        Rational::new(1, self.q).expect("q > 0")
    }
}

/// The generic case of the theorem, fully determined by the Farey pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralPartition {
    pair: FareyPair,
    s: Rational,
    t: Rational,
    count_s: u64,
    count_t: u64,
    count_st: u64,
}

/// Which of the three structural classes an interval belongs to.
/// `Uniform` stands apart for the collapsed rational case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LengthClass {
    S,
    T,
    St,
    Uniform,
}

/// One circle interval in position order: the index whose point opens the
/// interval, its structural class, and its exact length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalEntry {
    pub index: u64,
    pub class: LengthClass,
    pub length: Rational,
}

/// Output of [`decompose`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistancePartition {
    Uniform(UniformPartition),
    General(GeneralPartition),
}

impl GeneralPartition {
    fn new(pair: FareyPair, alpha: &Rational) -> Self {
        let n = pair.order_n();
        let (a, b, c, d) = (pair.a(), pair.b(), pair.c(), pair.d());
        let s = &(alpha * &Rational::from(b)) - &Rational::from(a);
        let t = &Rational::from(c) - &(alpha * &Rational::from(d));
        let part = GeneralPartition {
            pair,
            s,
            t,
            count_s: n + 1 - b,
            count_t: n + 1 - d,
            count_st: (b + d) - (n + 1),
        };
        debug_assert!(part.s.is_proper() && part.t.is_proper());
        debug_assert!(part.count_s >= 1 && part.count_t >= 1);
        part
    }

    pub fn pair(&self) -> &FareyPair {
        &self.pair
    }

    pub fn n(&self) -> u64 {
        self.pair.order_n()
    }

    /// The minimal point `{b*alpha}`.
    pub fn s(&self) -> &Rational {
        &self.s
    }

    /// One minus the maximal point `{d*alpha}`.
    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn s_plus_t(&self) -> Rational {
        &self.s + &self.t
    }

    pub fn count_s(&self) -> u64 {
        self.count_s
    }

    pub fn count_t(&self) -> u64 {
        self.count_t
    }

    pub fn count_st(&self) -> u64 {
        self.count_st
    }

    /// Diagnostic bounds from the theorem's remark: `n >= max(b, d)` and
    /// `n + 1 <= b + d`. Both always hold; the test suite asserts them.
    pub fn remark_bounds(&self) -> (bool, bool) {
        let n = self.n();
        (
            n >= self.pair.b().max(self.pair.d()),
            n < self.pair.b() + self.pair.d(),
        )
    }

    /// The structural class of the interval that starts at `{i*alpha}`.
    pub fn length_class(&self, i: u64) -> Result<LengthClass> {
        let n = self.n();
        if i > n {
            return Err(Error::IndexOutOfRange { i, n });
        }
        let (b, d) = (self.pair.b(), self.pair.d());
        Ok(if i + b <= n {
            LengthClass::S
        } else if i >= d {
            LengthClass::T
        } else {
            LengthClass::St
        })
    }

    pub fn class_length(&self, class: LengthClass) -> Rational {
        match class {
            LengthClass::S => self.s.clone(),
            LengthClass::T => self.t.clone(),
            LengthClass::St => self.s_plus_t(),
            LengthClass::Uniform => unreachable!("general partition has no uniform class"),
        }
    }

    /// The index whose point immediately follows `{i*alpha}` around the
    /// circle: `i+b` for `0 <= i <= n-b`, `i-d` for `d <= i <= n`, and
    /// `i+b-d` in between. The maximum point is `{d*alpha}`, whose
    /// successor interval wraps to the point 0 = index 0.
    pub fn successor(&self, i: u64) -> Result<u64> {
        let n = self.n();
        if i > n {
            return Err(Error::IndexOutOfRange { i, n });
        }
        let (b, d) = (self.pair.b(), self.pair.d());
        Ok(if i + b <= n {
            i + b
        } else if i >= d {
            i - d
        } else {
            i + b - d
        })
    }

    /// Interval-length multiset; equal rational values merge, so the mediant
    /// degeneracy (`s = t`) is represented faithfully.
    pub fn census(&self) -> LengthCensus {
        let mut entries: BTreeMap<Rational, u64> = BTreeMap::new();
        for (len, count) in [
            (self.s.clone(), self.count_s),
            (self.t.clone(), self.count_t),
            (self.s_plus_t(), self.count_st),
        ] {
            if count > 0 {
                *entries.entry(len).or_insert(0) += count;
            }
        }
        LengthCensus::from_entries(entries)
    }
}

impl DistancePartition {
    pub fn n(&self) -> u64 {
        match self {
            DistancePartition::Uniform(u) => u.n(),
            DistancePartition::General(g) => g.n(),
        }
    }

    /// Number of circle intervals: `q` in the uniform case, `n + 1`
    /// otherwise.
    pub fn interval_count(&self) -> u64 {
        match self {
            DistancePartition::Uniform(u) => u.q(),
            DistancePartition::General(g) => g.count_s + g.count_t + g.count_st,
        }
    }

    /// Number of distinct interval lengths as rational values (not
    /// structural classes): 1 for uniform, 2 when only `s` and `t` occur or
    /// when the mediant degeneracy `s = t` merges values, else 3.
    pub fn distinct_length_count(&self) -> usize {
        self.census().distinct_lengths()
    }

    pub fn census(&self) -> LengthCensus {
        match self {
            DistancePartition::Uniform(u) => {
                let mut entries = BTreeMap::new();
                entries.insert(u.length(), u.q());
                LengthCensus::from_entries(entries)
            }
            DistancePartition::General(g) => g.census(),
        }
    }
}

/// Computes the full partition description for `alpha` at order `n`.
pub fn decompose(alpha: &RealValue, n: u64) -> Result<DistancePartition> {
    match farey_neighbors(alpha, n)? {
        Neighbors::ExactMember(member) => {
            let q = u64::try_from(member.denom().clone())
                .expect("member of F_n has denominator <= n");
            Ok(DistancePartition::Uniform(UniformPartition { q, n }))
        }
        Neighbors::Pair(pair) => Ok(DistancePartition::General(GeneralPartition::new(
            pair,
            alpha.approx(),
        ))),
    }
}

/// The `n + 1` circle intervals in increasing position order (`q` intervals
/// in the uniform case), each tagged with the index opening it. Entry 0
/// always starts at the point 0.
pub fn interval_sequence(alpha: &RealValue, n: u64) -> Result<Vec<IntervalEntry>> {
    match decompose(alpha, n)? {
        DistancePartition::Uniform(u) => {
            // position k/q is {i*alpha} for i = k * p^{-1} mod q, the
            // smallest index landing there
            let q = u.q();
            let p = alpha.approx().numer();
            let q_big = BigInt::from(q);
            let inv = p
                .extended_gcd(&q_big)
                .x
                .mod_floor(&q_big);
            let inv = u64::try_from(inv).expect("inverse reduced mod q");
            let length = u.length();
            Ok((0..q)
                .map(|k| IntervalEntry {
                    index: (k as u128 * inv as u128 % q as u128) as u64,
                    class: LengthClass::Uniform,
                    length: length.clone(),
                })
                .collect())
        }
        DistancePartition::General(g) => {
            let mut entries = Vec::with_capacity(n as usize + 1);
            let mut i = 0u64;
            for _ in 0..=n {
                let class = g.length_class(i)?;
                entries.push(IntervalEntry {
                    index: i,
                    class,
                    length: g.class_length(class),
                });
                i = g.successor(i)?;
            }
            debug_assert_eq!(i, 0, "successor chain must close at index 0");
            Ok(entries)
        }
    }
}

impl Serialize for DistancePartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DistancePartition::Uniform(u) => {
                let mut st = serializer.serialize_struct("DistancePartition", 3)?;
                st.serialize_field("case", "uniform")?;
                st.serialize_field("q", &u.q())?;
                st.serialize_field("n", &u.n())?;
                st.end()
            }
            DistancePartition::General(g) => {
                let mut st = serializer.serialize_struct("DistancePartition", 6)?;
                st.serialize_field("case", "general")?;
                st.serialize_field(
                    "pair",
                    &PairJson {
                        a: g.pair.a(),
                        b: g.pair.b(),
                        c: g.pair.c(),
                        d: g.pair.d(),
                    },
                )?;
                st.serialize_field("s", &g.s)?;
                st.serialize_field("t", &g.t)?;
                st.serialize_field("counts", &[g.count_s, g.count_t, g.count_st])?;
                st.serialize_field("n", &g.n())?;
                st.end()
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

#[derive(Deserialize)]
struct PartitionJson {
    case: String,
    q: Option<u64>,
    pair: Option<PairJson>,
    s: Option<Rational>,
    t: Option<Rational>,
    counts: Option<[u64; 3]>,
    n: u64,
}

impl<'de> Deserialize<'de> for DistancePartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = PartitionJson::deserialize(deserializer)?;
        match raw.case.as_str() {
            "uniform" => {
                let q = raw.q.ok_or_else(|| de::Error::missing_field("q"))?;
                if q == 0 || raw.n == 0 || q > raw.n {
                    return Err(de::Error::custom(
                        "uniform partition needs 1 <= q <= n (membership in F_n)",
                    ));
                }
                Ok(DistancePartition::Uniform(UniformPartition { q, n: raw.n }))
            }
            "general" => {
                let pair = raw.pair.ok_or_else(|| de::Error::missing_field("pair"))?;
                let s = raw.s.ok_or_else(|| de::Error::missing_field("s"))?;
                let t = raw.t.ok_or_else(|| de::Error::missing_field("t"))?;
                let counts = raw.counts.ok_or_else(|| de::Error::missing_field("counts"))?;
                let fp = FareyPair::try_new(pair.a, pair.b, pair.c, pair.d, raw.n)
                    .map_err(de::Error::custom)?;
                // recover alpha = (s + a)/b and revalidate everything
                let alpha =
                    &(&s + &Rational::from(pair.a)) / &Rational::from(pair.b);
                if !alpha.is_proper() || alpha <= fp.left() || alpha >= fp.right() {
                    return Err(de::Error::custom("pair and s are inconsistent"));
                }
                let rebuilt = GeneralPartition::new(fp, &alpha);
                if rebuilt.t != t
                    || [rebuilt.count_s, rebuilt.count_t, rebuilt.count_st] != counts
                {
                    return Err(de::Error::custom("inconsistent general partition fields"));
                }
                Ok(DistancePartition::General(rebuilt))
            }
            other => Err(de::Error::custom(format!("unknown case {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_lengths;
    use crate::real_value::NamedConstant;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    fn rv(s: &str) -> RealValue {
        RealValue::parse(s, 128).unwrap()
    }

    fn log23() -> RealValue {
        RealValue::named(NamedConstant::Log2_3Frac, 128).unwrap()
    }

    fn phi() -> RealValue {
        RealValue::named(NamedConstant::PhiFrac, 128).unwrap()
    }

    fn general(alpha: &RealValue, n: u64) -> GeneralPartition {
        match decompose(alpha, n).unwrap() {
            DistancePartition::General(g) => g,
            other => panic!("expected general, got {other:?}"),
        }
    }

    #[test]
    fn order_one_splits_at_alpha() {
        let g = general(&log23(), 1);
        assert_eq!((g.pair().a(), g.pair().b(), g.pair().c(), g.pair().d()), (0, 1, 1, 1));
        assert_eq!(g.s(), log23().approx());
        assert_eq!(g.t(), &(&Rational::one() - log23().approx()));
        assert_eq!((g.count_s(), g.count_t(), g.count_st()), (1, 1, 0));
        assert_eq!(g.s().round_decimals(3), r("0.585"));
        assert_eq!(g.t().round_decimals(3), r("0.415"));
    }

    #[test]
    fn twelve_notes_row() {
        let g = general(&log23(), 11);
        assert_eq!((g.pair().a(), g.pair().b(), g.pair().c(), g.pair().d()), (4, 7, 3, 5));
        assert_eq!((g.count_s(), g.count_t(), g.count_st()), (5, 7, 0));
        assert_eq!(g.s().round_decimals(3), r("0.095"));
        assert_eq!(g.t().round_decimals(3), r("0.075"));
    }

    #[test]
    fn member_goes_uniform() {
        match decompose(&rv("1/2"), 3).unwrap() {
            DistancePartition::Uniform(u) => {
                assert_eq!(u.q(), 2);
                assert_eq!(u.n(), 3);
            }
            other => panic!("expected uniform, got {other:?}"),
        }
    }

    #[test]
    fn golden_ratio_three_lengths() {
        let g = general(&phi(), 3);
        assert_eq!((g.pair().a(), g.pair().b(), g.pair().c(), g.pair().d()), (1, 2, 2, 3));
        assert_eq!((g.count_s(), g.count_t(), g.count_st()), (2, 1, 1));
        let census = DistancePartition::General(g).census();
        let brute = brute_lengths(&rv("0.6180339887498948482"), 3).unwrap();
        // same structure, slightly different alpha: compare shape only
        assert_eq!(census.distinct_lengths(), 3);
        assert_eq!(brute.distinct_lengths(), 3);
    }

    #[test]
    fn mediant_alpha_degenerates_to_equal_lengths() {
        // 3/5 is the mediant of its F_4 pair (1/2, 2/3): s = t = 1/5 and
        // the census merges to a single value even though the structural
        // counts stay (3, 2, 0).
        let part = decompose(&rv("3/5"), 4).unwrap();
        let g = match &part {
            DistancePartition::General(g) => g,
            other => panic!("expected general, got {other:?}"),
        };
        assert_eq!(g.s(), &r("1/5"));
        assert_eq!(g.t(), &r("1/5"));
        assert_eq!((g.count_s(), g.count_t(), g.count_st()), (3, 2, 0));
        assert_eq!(part.distinct_length_count(), 1);
        assert_eq!(part.census(), brute_lengths(&rv("3/5"), 4).unwrap());
    }

    #[test]
    fn mediant_alpha_with_st_intervals_has_two_values() {
        // 3/5 seen at order 3: pair is still (1/2, 2/3) but count_st = 1,
        // so lengths are {s, s, 2s} = two distinct values.
        let part = decompose(&rv("3/5"), 3).unwrap();
        let g = match &part {
            DistancePartition::General(g) => g,
            other => panic!("expected general, got {other:?}"),
        };
        assert_eq!((g.count_s(), g.count_t(), g.count_st()), (2, 1, 1));
        assert_eq!(g.s(), g.t());
        assert_eq!(part.distinct_length_count(), 2);
        assert_eq!(part.census(), brute_lengths(&rv("3/5"), 3).unwrap());
    }

    #[test]
    fn distinct_counts_by_case() {
        assert_eq!(decompose(&log23(), 11).unwrap().distinct_length_count(), 2);
        assert_eq!(decompose(&phi(), 3).unwrap().distinct_length_count(), 3);
        assert_eq!(decompose(&rv("1/2"), 3).unwrap().distinct_length_count(), 1);
    }

    #[test]
    fn successor_examples() {
        let g = general(&log23(), 11);
        assert_eq!(g.successor(0).unwrap(), 7);
        assert_eq!(g.length_class(0).unwrap(), LengthClass::S);
        // index 5 owns the maximum point {5*alpha}; its interval wraps to 0
        assert_eq!(g.successor(5).unwrap(), 0);
        assert_eq!(g.length_class(5).unwrap(), LengthClass::T);
        assert!(matches!(
            g.successor(12),
            Err(Error::IndexOutOfRange { i: 12, n: 11 })
        ));

        let g = general(&phi(), 3);
        assert_eq!(g.successor(3).unwrap(), 0);
    }

    #[test]
    fn successor_is_a_cyclic_permutation() {
        for (alpha, n) in [(log23(), 11u64), (phi(), 7), (rv("117/200"), 30)] {
            let g = general(&alpha, n);
            let mut seen = vec![false; n as usize + 1];
            let mut i = 0u64;
            for _ in 0..=n {
                assert!(!seen[i as usize], "revisited index {i}");
                seen[i as usize] = true;
                i = g.successor(i).unwrap();
            }
            assert_eq!(i, 0);
            assert!(seen.iter().all(|&s| s));
        }
    }

    #[test]
    fn interval_sequence_three_notes() {
        let seq = interval_sequence(&log23(), 2).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq[0].index, 0);
        assert_eq!(seq[0].class, LengthClass::S);
        assert_eq!(seq[0].length.round_decimals(3), r("0.170"));
        assert_eq!(seq[1].index, 2);
        assert_eq!(seq[1].length.round_decimals(3), r("0.415"));
        assert_eq!(seq[2].index, 1);
        assert_eq!(seq[2].length.round_decimals(3), r("0.415"));
    }

    #[test]
    fn interval_sequence_uniform() {
        let seq = interval_sequence(&rv("1/2"), 3).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!((seq[0].index, seq[1].index), (0, 1));
        assert!(seq.iter().all(|e| e.class == LengthClass::Uniform && e.length == r("1/2")));

        // alpha = 2/5: position k/5 belongs to index k * 3 mod 5
        let seq = interval_sequence(&rv("2/5"), 7).unwrap();
        let indices: Vec<u64> = seq.iter().map(|e| e.index).collect();
        assert_eq!(indices, vec![0, 3, 1, 4, 2]);
    }

    #[test]
    fn interval_sequence_position_order_golden_ratio() {
        let seq = interval_sequence(&phi(), 3).unwrap();
        let rounded: Vec<Rational> =
            seq.iter().map(|e| e.length.round_decimals(3)).collect();
        assert_eq!(rounded, vec![r("0.236"), r("0.382"), r("0.236"), r("0.146")]);
        let indices: Vec<u64> = seq.iter().map(|e| e.index).collect();
        assert_eq!(indices, vec![0, 2, 1, 3]);
        let total = seq
            .iter()
            .fold(Rational::zero(), |acc, e| &acc + &e.length);
        assert_eq!(total, Rational::one());
    }

    #[test]
    fn remark_bounds_hold() {
        assert_eq!(general(&log23(), 11).remark_bounds(), (true, true));
        assert_eq!(general(&log23(), 1).remark_bounds(), (true, true));
    }

    #[test]
    fn propagates_precision_errors() {
        let coarse = RealValue::named(NamedConstant::PhiFrac, 2).unwrap();
        assert!(matches!(
            decompose(&coarse, 100),
            Err(Error::PrecisionInsufficient(_))
        ));
    }

    #[test]
    fn serialization_shape() {
        let json = serde_json::to_value(decompose(&rv("1/2"), 3).unwrap()).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"case": "uniform", "q": 2, "n": 3})
        );

        let part = decompose(&rv("117/200"), 4).unwrap();
        let json = serde_json::to_value(&part).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "case": "general",
                "pair": {"a": 1, "b": 2, "c": 2, "d": 3},
                "s": "17/100",
                "t": "49/200",
                "counts": [3, 2, 0],
                "n": 4
            })
        );
        let back: DistancePartition = serde_json::from_value(json.clone()).unwrap();
        assert_eq!(back, part);
        assert_eq!(serde_json::to_value(&back).unwrap(), json);
    }

    /// Reduced proper fraction and an order strictly below its denominator,
    /// built rejection-free from free seeds.
    fn fraction_and_order(p_seed: u64, q: u64, n_seed: u64, n_cap: u64) -> (u64, u64, u64) {
        let p = 1 + p_seed % (q - 1);
        let g = num::integer::gcd(p, q);
        let (p, q) = (p / g, q / g);
        (p, q, 1 + n_seed % n_cap.min(q - 1))
    }

    proptest! {
        // Oracle equality on random rational alpha with q > n (all points
        // distinct). The acceptance suite runs the full-size version.
        #[test]
        fn census_matches_oracle(p_seed: u64, q in 2u64..=500, n_seed: u64) {
            let (p, q, n) = fraction_and_order(p_seed, q, n_seed, 60);
            let alpha = rv(&format!("{p}/{q}"));
            let part = decompose(&alpha, n).unwrap();
            prop_assert_eq!(part.census(), brute_lengths(&alpha, n).unwrap());
        }

        // Structural identities from the theorem.
        #[test]
        fn general_identities(p_seed: u64, q in 2u64..=2000, n_seed: u64) {
            let (p, q, n) = fraction_and_order(p_seed, q, n_seed, 100);
            let alpha = rv(&format!("{p}/{q}"));
            let part = match decompose(&alpha, n).unwrap() {
                DistancePartition::General(gp) => gp,
                DistancePartition::Uniform(_) => unreachable!("q > n"),
            };
            prop_assert_eq!(part.count_s() + part.count_t() + part.count_st(), n + 1);
            let total = &(&(part.s() * &Rational::from(part.count_s()))
                + &(part.t() * &Rational::from(part.count_t())))
                + &(&part.s_plus_t() * &Rational::from(part.count_st()));
            prop_assert_eq!(total, Rational::one());
            prop_assert_eq!(part.remark_bounds(), (true, true));
        }
    }
}
