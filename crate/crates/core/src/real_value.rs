//! Real numbers as exact rationals with rigorous error bounds.
//!
//! A `RealValue` is a rational approximation `approx` together with a
//! nonnegative rational `err` certifying `|true - approx| <= err`, plus a
//! provenance tag. Exact inputs (fractions, decimal literals) carry
//! `err = 0`; the three named constants carry `err <= 2^-bits` produced by
//! integer-only methods: floor square roots for the algebraic constants and
//! an interval-bounded artanh series for the logarithm.

use std::fmt;

use num::bigint::BigInt;
use num::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Default precision for named constants: comfortably supports Farey orders
/// up to ~10^9, where neighbor gaps shrink like 1/(n(n-1)).
pub const DEFAULT_PRECISION_BITS: u32 = 128;

/// The named constants the library knows how to approximate rigorously.
/// Each is the fractional part of a familiar irrational.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConstant {
    /// `phi - 1 = (sqrt 5 - 1)/2`
    PhiFrac,
    /// `sqrt 2 - 1`
    Sqrt2Frac,
    /// `log2 3 - 1 = log2(3/2)`
    Log2_3Frac,
}

impl NamedConstant {
    pub fn name(self) -> &'static str {
        match self {
            NamedConstant::PhiFrac => "phi_frac",
            NamedConstant::Sqrt2Frac => "sqrt2_frac",
            NamedConstant::Log2_3Frac => "log2_3_frac",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "phi_frac" => Some(NamedConstant::PhiFrac),
            "sqrt2_frac" => Some(NamedConstant::Sqrt2Frac),
            "log2_3_frac" => Some(NamedConstant::Log2_3Frac),
            _ => None,
        }
    }
}

/// Provenance of a `RealValue`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    ExactRational,
    DecimalLiteral,
    NamedConstant { constant: NamedConstant, bits: u32 },
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::ExactRational => write!(f, "exact-rational"),
            Origin::DecimalLiteral => write!(f, "decimal-literal"),
            Origin::NamedConstant { constant, bits } => {
                write!(f, "named-constant:{}:{}", constant.name(), bits)
            }
        }
    }
}

impl std::str::FromStr for Origin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-rational" => return Ok(Origin::ExactRational),
            "decimal-literal" => return Ok(Origin::DecimalLiteral),
            _ => {}
        }
        let mut parts = s.split(':');
        if let (Some("named-constant"), Some(name), Some(bits), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        {
            let constant = NamedConstant::from_name(name)
                .ok_or_else(|| Error::Parse(format!("unknown constant {name:?}")))?;
            let bits = bits
                .parse()
                .map_err(|_| Error::Parse(format!("bad precision in {s:?}")))?;
            return Ok(Origin::NamedConstant { constant, bits });
        }
        Err(Error::Parse(format!("unknown origin {s:?}")))
    }
}

/// A point of `(0, 1)` known to within a rigorous error bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealValue {
    approx: Rational,
    err: Rational,
    origin: Origin,
}

impl RealValue {
    /// Exact rational input, reduced modulo 1. Errors if the reduction
    /// lands on 0 (an integer has no fractional rotation).
    pub fn exact(value: Rational) -> Result<Self> {
        Self::build(value, Rational::zero(), Origin::ExactRational)
    }

    /// A named constant at the given precision; `err <= 2^-bits`.
    pub fn named(constant: NamedConstant, bits: u32) -> Result<Self> {
        if bits == 0 || bits > 1 << 20 {
            return Err(Error::InvalidArgument(format!(
                "precision bits must be in 1..=2^20, got {bits}"
            )));
        }
        let (approx, err) = match constant {
            NamedConstant::PhiFrac => phi_frac(bits),
            NamedConstant::Sqrt2Frac => sqrt2_frac(bits),
            NamedConstant::Log2_3Frac => log2_3_frac(bits),
        };
        debug_assert!(err <= Rational::pow2_inv(bits));
        Self::build(approx, err, Origin::NamedConstant { constant, bits })
    }

    /// Parses the input grammar shared with the CLI: `p/q`, a decimal
    /// literal, or a named constant. Values reduce modulo 1.
    pub fn parse(spec: &str, bits: u32) -> Result<Self> {
        let spec = spec.trim();
        if let Some(constant) = NamedConstant::from_name(spec) {
            return Self::named(constant, bits);
        }
        let value = Rational::parse(spec)?;
        let origin = if spec.contains('.') {
            Origin::DecimalLiteral
        } else {
            Origin::ExactRational
        };
        Self::build(value, Rational::zero(), origin)
    }

    fn build(value: Rational, err: Rational, origin: Origin) -> Result<Self> {
        debug_assert!(!err.is_negative());
        let approx = value.fract();
        if approx.is_zero() {
            return Err(Error::AlphaOutOfRange);
        }
        // Domain invariant: the whole uncertainty interval sits strictly
        // inside (0, 1), so later wrap-free reasoning is sound.
        if !(&approx - &err).is_proper() && !err.is_zero() || !(&approx + &err).is_proper() {
            return Err(Error::PrecisionInsufficient(format!(
                "interval around {approx} of radius {err} leaves (0,1)"
            )));
        }
        Ok(RealValue { approx, err, origin })
    }

    pub fn approx(&self) -> &Rational {
        &self.approx
    }

    pub fn err(&self) -> &Rational {
        &self.err
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    /// Certified three-way comparison of the true value against a rational.
    /// `Equal` is only decidable for exact values; straddles are a
    /// `PrecisionInsufficient` error.
    pub fn cmp_rational(&self, r: &Rational) -> Result<std::cmp::Ordering> {
        if self.is_exact() {
            return Ok(self.approx.cmp(r));
        }
        if &(&self.approx + &self.err) < r {
            Ok(std::cmp::Ordering::Less)
        } else if &(&self.approx - &self.err) > r {
            Ok(std::cmp::Ordering::Greater)
        } else {
            Err(Error::PrecisionInsufficient(format!(
                "cannot place value within {} of {} against {}",
                self.err, self.approx, r
            )))
        }
    }

    /// `{i * value}` as an exact rational computed from the approximation,
    /// together with the inflated radius `i * err`. Errors when the
    /// uncertainty interval of `i * value` spans an integer, because the
    /// fractional part would then be ambiguous (wrap).
    pub fn frac_multiple(&self, i: u64) -> Result<(Rational, Rational)> {
        let scaled = &self.approx * &Rational::from(i);
        let radius = &self.err * &Rational::from(i);
        if !self.err.is_zero() {
            let lo = &scaled - &radius;
            let hi = &scaled + &radius;
            if lo.floor() != hi.floor() {
                return Err(Error::PrecisionInsufficient(format!(
                    "fractional part of {i} * alpha wraps within the error bound"
                )));
            }
        }
        Ok((scaled.fract(), radius))
    }

    /// `1 - value` with the same error bound and origin; the reflection
    /// stays inside (0, 1) so all invariants carry over.
    pub fn complement(&self) -> RealValue {
        RealValue {
            approx: &Rational::one() - &self.approx,
            err: self.err.clone(),
            origin: self.origin,
        }
    }
}

impl serde::Serialize for RealValue {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("RealValue", 3)?;
        st.serialize_field("approx", &self.approx)?;
        st.serialize_field("err", &self.err)?;
        st.serialize_field("origin", &self.origin.to_string())?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for RealValue {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de;

        #[derive(serde::Deserialize)]
        struct Raw {
            approx: Rational,
            err: Rational,
            origin: String,
        }

        let raw = Raw::deserialize(deserializer)?;
        let origin: Origin = raw.origin.parse().map_err(de::Error::custom)?;
        if raw.err.is_negative() {
            return Err(de::Error::custom("err must be nonnegative"));
        }
        let exact_origin = !matches!(origin, Origin::NamedConstant { .. });
        if raw.err.is_zero() != exact_origin {
            return Err(de::Error::custom(
                "err must be zero exactly for exact origins",
            ));
        }
        Self::build(raw.approx, raw.err, origin).map_err(de::Error::custom)
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "{}", self.approx)
        } else {
            write!(f, "{} ± {}", self.approx, self.err)
        }
    }
}

/// Floor square root scaled by `2^bits`: returns `m = floor(sqrt(k) * 2^bits)`,
/// so `sqrt(k) ∈ [m, m+1) / 2^bits`.
fn scaled_isqrt(k: u32, bits: u32) -> BigInt {
    let scaled = BigInt::from(k) << (2 * bits);
    scaled.sqrt()
}

/// `phi - 1 = (sqrt 5 - 1)/2` with error `< 2^-(bits+1)`.
fn phi_frac(bits: u32) -> (Rational, Rational) {
    let m = scaled_isqrt(5, bits);
    let num = m - (BigInt::one() << bits);
    let den = BigInt::one() << (bits + 1);
    (
        Rational::new(num, den).expect("positive power of two"),
        Rational::pow2_inv(bits + 1),
    )
}

/// `sqrt 2 - 1` with error `< 2^-bits`.
fn sqrt2_frac(bits: u32) -> (Rational, Rational) {
    let m = scaled_isqrt(2, bits);
    let num = m - (BigInt::one() << bits);
    let den = BigInt::one() << bits;
    (
        Rational::new(num, den).expect("positive power of two"),
        Rational::pow2_inv(bits),
    )
}

/// Interval enclosure of `artanh(1/x) = sum_{k>=0} (1/x)^(2k+1) / (2k+1)`
/// for integer `x >= 2`. Sums terms until the geometric tail bound drops
/// below `2^-target_bits`; returns `(lo, hi)` with the true value inside.
fn artanh_recip_interval(x: u64, target_bits: u32) -> (Rational, Rational) {
    let x = Rational::from(x);
    let x2 = &x * &x;
    let threshold = Rational::pow2_inv(target_bits);
    // tail after term k is bounded by term_{k+1} / (1 - x^-2)
    let tail_factor = (&x2 / &(&x2 - &Rational::one())).clone();

    let mut sum = Rational::zero();
    let mut power = x.recip().expect("x >= 2"); // (1/x)^(2k+1)
    let mut k: u64 = 0;
    loop {
        sum = &sum + &(&power / &Rational::from(2 * k + 1));
        power = &power / &x2;
        let next_term = &power / &Rational::from(2 * k + 3);
        let tail = &next_term * &tail_factor;
        if tail <= threshold {
            return (sum.clone(), &sum + &tail);
        }
        k += 1;
    }
}

/// `log2(3/2) = artanh(1/5) / artanh(1/3)` (both halves of the ln ratio
/// carry the same factor 2, which cancels). Interval division keeps the
/// bound rigorous; the midpoint is snapped to a dyadic rational so the
/// stored approximation stays compact, and the snap distance is folded
/// into the error.
fn log2_3_frac(bits: u32) -> (Rational, Rational) {
    // Guard bits: the quotient roughly doubles interval widths relative to
    // ln 2 ≈ 0.69, so a few extra bits in the series are plenty.
    let target = bits + 6;
    let (ln32_lo, ln32_hi) = artanh_recip_interval(5, target);
    let (ln2_lo, ln2_hi) = artanh_recip_interval(3, target);
    let lo = &ln32_lo / &ln2_hi;
    let hi = &ln32_hi / &ln2_lo;
    let half = Rational::new(1, 2).unwrap();
    let mid = &(&lo + &hi) * &half;
    let half_width = &(&hi - &lo) * &half;

    let scale_bits = bits + 2;
    let scaled = &mid * &Rational::from_reduced(BigInt::one() << scale_bits, BigInt::one());
    let snapped = (&scaled + &half).floor();
    let approx = Rational::new(snapped, BigInt::one() << scale_bits).expect("power of two");
    let err = &half_width + &Rational::pow2_inv(scale_bits + 1);
    assert!(
        err <= Rational::pow2_inv(bits),
        "series enclosure missed the target precision"
    );
    (approx, err)
}
