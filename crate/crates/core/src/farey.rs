//! Farey sequences, mediants, Stern-Brocot descent, and continued
//! fractions.
//!
//! The central operation is [`farey_neighbors`]: given a target value and an
//! order `n`, find the consecutive pair `a/b < c/d` of the Farey sequence
//! `F_n` that surrounds it (or detect exact membership). The descent walks
//! the Stern-Brocot tree from `(0/1, 1/1)` taking mediants, with whole runs
//! of same-direction steps collapsed into one arithmetic jump, so the cost
//! is logarithmic per continued-fraction block.

use num::bigint::BigInt;
use num::{Integer, One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::real_value::RealValue;

/// Default refusal threshold for full Farey enumeration; `|F_n|` grows like
/// `3n^2/pi^2`, so this is a memory guard, not a correctness limit.
pub const FAREY_SEQUENCE_CAP: u64 = 10_000;

/// Consecutive fractions `a/b < c/d` of `F_n` surrounding a target.
///
/// Invariants enforced at construction: `b*c - a*d = 1` (unimodularity),
/// `b <= n`, `d <= n`, and `b + d > n` (the neighbor condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FareyPair {
    a: u64,
    b: u64,
    c: u64,
    d: u64,
    order_n: u64,
}

impl FareyPair {
    pub(crate) fn new(a: u64, b: u64, c: u64, d: u64, order_n: u64) -> Self {
        Self::try_new(a, b, c, d, order_n).expect("descent produces valid pairs")
    }

    /// Validating constructor; used when a pair arrives from outside
    /// (deserialization) rather than from the descent.
    pub fn try_new(a: u64, b: u64, c: u64, d: u64, order_n: u64) -> Result<Self> {
        let pair = FareyPair { a, b, c, d, order_n };
        pair.check()?;
        Ok(pair)
    }

    fn check(&self) -> Result<()> {
        let (a, b, c, d, n) = (
            self.a as u128,
            self.b as u128,
            self.c as u128,
            self.d as u128,
            self.order_n as u128,
        );
        if b == 0 || d == 0 || n == 0 {
            return Err(Error::InvalidArgument("zero denominator or order".into()));
        }
        if b * c != a * d + 1 {
            return Err(Error::InvalidArgument("pair is not unimodular".into()));
        }
        if b > n || d > n || b + d <= n {
            return Err(Error::InvalidArgument("pair violates neighbor bounds".into()));
        }
        Ok(())
    }

    pub fn a(&self) -> u64 {
        self.a
    }
    pub fn b(&self) -> u64 {
        self.b
    }
    pub fn c(&self) -> u64 {
        self.c
    }
    pub fn d(&self) -> u64 {
        self.d
    }
    pub fn order_n(&self) -> u64 {
        self.order_n
    }

    pub fn left(&self) -> Rational {
        Rational::new(self.a, self.b).expect("b > 0")
    }

    pub fn right(&self) -> Rational {
        Rational::new(self.c, self.d).expect("d > 0")
    }

    pub fn mediant(&self) -> Rational {
        mediant(&self.left(), &self.right())
    }
}

/// Outcome of a neighbor search: either the target is itself a member of
/// `F_n`, or it sits strictly between a unique consecutive pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Neighbors {
    ExactMember(Rational),
    Pair(FareyPair),
}

/// `(a+c)/(b+d)`, reduced. For a Farey pair the result is already in
/// lowest terms.
pub fn mediant(x: &Rational, y: &Rational) -> Rational {
    Rational::new(
        x.numer() + y.numer(),
        x.denom() + y.denom(),
    )
    .expect("mediant denominator positive")
}

/// The Farey sequence `F_n` in increasing order, from `0/1` to `1/1`.
/// Refuses orders above `cap` (see [`FAREY_SEQUENCE_CAP`]).
pub fn farey_sequence(n: u64, cap: u64) -> Result<Vec<Rational>> {
    Ok(farey_iter(n, cap)?.collect())
}

/// Streaming variant of [`farey_sequence`]; the CLI uses this to print
/// large sequences without materializing them.
pub fn farey_iter(n: u64, cap: u64) -> Result<impl Iterator<Item = Rational>> {
    if n == 0 {
        return Err(Error::InvalidArgument("farey order must be >= 1".into()));
    }
    if n > cap {
        return Err(Error::FareySizeCap { n, cap });
    }
    // Standard next-term recurrence: from consecutive (p0/q0, p1/q1) the
    // next term is (k*p1 - p0)/(k*q1 - q0) with k = (n + q0) / q1.
    let mut cur = Some((0u64, 1u64));
    let mut next = (1u64, n);
    Ok(std::iter::from_fn(move || {
        let (p, q) = cur?;
        let out = Rational::from_reduced(BigInt::from(p), BigInt::from(q));
        if (p, q) == (1, 1) {
            cur = None;
        } else {
            let k = (n + q) / next.1;
            let after = (k * next.0 - p, k * next.1 - q);
            cur = Some(next);
            next = after;
        }
        Some(out)
    }))
}

/// Finds the Farey pair of `F_n` surrounding `alpha`, or the exact member
/// it equals (decidable only for exact inputs).
///
/// Stern-Brocot descent with run-length acceleration: each loop iteration
/// consumes one maximal run of same-direction mediant steps. When the input
/// carries an error bound, every side decision is certified against the
/// whole uncertainty interval; a fraction of denominator `<= n` falling
/// inside that interval is reported as `PrecisionInsufficient`.
pub fn farey_neighbors(alpha: &RealValue, n: u64) -> Result<Neighbors> {
    if n == 0 {
        return Err(Error::InvalidArgument("farey order must be >= 1".into()));
    }
    // keeps b + d and run-step products inside u64
    if n > u64::MAX / 4 {
        return Err(Error::InvalidArgument(format!("farey order {n} too large")));
    }
    let lo = alpha.approx() - alpha.err();
    let hi = alpha.approx() + alpha.err();
    let exact = alpha.is_exact();

    // (a/b, c/d) enclose the target; invariant a/b < lo <= hi < c/d.
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, 1u64);

    loop {
        if b + d > n {
            return Ok(Neighbors::Pair(FareyPair::new(a, b, c, d, n)));
        }
        let m = Rational::from_reduced(BigInt::from(a + c), BigInt::from(b + d));
        if hi < m {
            // Left run: mediants (j*a + c)/(j*b + d) stay above the target
            // for j < (c - y*d)/(y*b - a).
            let k1 = left_run(&hi, a, b, c, d, RunBound::Exclusive);
            let k2 = left_run(&lo, a, b, c, d, RunBound::Inclusive);
            let k_cap = (n - d) / b;
            let k1c = k1.clone().min(BigInt::from(k_cap));
            let k2c = k2.clone().min(BigInt::from(k_cap));
            if k1c != k2c {
                if exact {
                    // lo == hi: k1 < k2 means the target equals mediant k2.
                    let j = to_u64(&k2);
                    return Ok(Neighbors::ExactMember(Rational::from_reduced(
                        BigInt::from(j * a + c),
                        BigInt::from(j * b + d),
                    )));
                }
                return Err(Error::PrecisionInsufficient(format!(
                    "a fraction of F_{n} lies inside the error interval of {}",
                    alpha.approx()
                )));
            }
            let k = to_u64(&k1c);
            debug_assert!(k >= 1);
            c += k * a;
            d += k * b;
        } else if lo > m {
            // Right run, mirror image.
            let k1 = right_run(&lo, a, b, c, d, RunBound::Exclusive);
            let k2 = right_run(&hi, a, b, c, d, RunBound::Inclusive);
            let k_cap = (n - b) / d;
            let k1c = k1.clone().min(BigInt::from(k_cap));
            let k2c = k2.clone().min(BigInt::from(k_cap));
            if k1c != k2c {
                if exact {
                    let j = to_u64(&k2);
                    return Ok(Neighbors::ExactMember(Rational::from_reduced(
                        BigInt::from(a + j * c),
                        BigInt::from(b + j * d),
                    )));
                }
                return Err(Error::PrecisionInsufficient(format!(
                    "a fraction of F_{n} lies inside the error interval of {}",
                    alpha.approx()
                )));
            }
            let k = to_u64(&k1c);
            debug_assert!(k >= 1);
            a += k * c;
            b += k * d;
        } else if exact {
            return Ok(Neighbors::ExactMember(m));
        } else {
            return Err(Error::PrecisionInsufficient(format!(
                "mediant {m} of F_{n} lies inside the error interval of {}",
                alpha.approx()
            )));
        }
    }
}

enum RunBound {
    /// count mediants strictly beyond `y`
    Exclusive,
    /// count mediants at or beyond `y`
    Inclusive,
}

/// Number of left-step mediants `(j*a + c)/(j*b + d)`, `j >= 1`, lying
/// strictly above (`Exclusive`) or at-or-above (`Inclusive`) `y`.
/// Requires `a/b < y < c/d`.
fn left_run(y: &Rational, a: u64, b: u64, c: u64, d: u64, bound: RunBound) -> BigInt {
    // m_j > y  <=>  j < (c - y*d) / (y*b - a)
    let num = &Rational::from(c) - &(y * &Rational::from(d));
    let den = &(y * &Rational::from(b)) - &Rational::from(a);
    run_count(&num, &den, bound)
}

/// Number of right-step mediants `(a + j*c)/(b + j*d)`, `j >= 1`, lying
/// strictly below (`Exclusive`) or at-or-below (`Inclusive`) `y`.
fn right_run(y: &Rational, a: u64, b: u64, c: u64, d: u64, bound: RunBound) -> BigInt {
    // m_j < y  <=>  j < (y*b - a) / (c - y*d)
    let num = &(y * &Rational::from(b)) - &Rational::from(a);
    let den = &Rational::from(c) - &(y * &Rational::from(d));
    run_count(&num, &den, bound)
}

fn run_count(num: &Rational, den: &Rational, bound: RunBound) -> BigInt {
    debug_assert!(!num.is_negative() && !num.is_zero());
    debug_assert!(!den.is_negative() && !den.is_zero());
    let q = num / den;
    let floor = q.floor();
    let is_integer = q.denom().is_one();
    match bound {
        // #{ j >= 1 : j < q } = ceil(q) - 1
        RunBound::Exclusive => {
            if is_integer {
                floor - BigInt::one()
            } else {
                floor
            }
        }
        // #{ j >= 1 : j <= q } = floor(q)
        RunBound::Inclusive => floor,
    }
}

fn to_u64(k: &BigInt) -> u64 {
    u64::try_from(k.clone()).expect("run length fits u64 by the order cap")
}

/// Continued-fraction expansion `[0; a1, a2, ...]` of `x` in `(0, 1)` via
/// the Euclidean algorithm. The remainders strictly decrease, so the last
/// quotient is automatically >= 2: the expansion is canonical.
pub fn continued_fraction(x: &Rational) -> Result<Vec<BigInt>> {
    if !x.is_proper() {
        return Err(Error::InvalidArgument(format!(
            "continued fraction input must be in (0,1), got {x}"
        )));
    }
    let mut quotients = vec![BigInt::zero()];
    let mut p = x.numer().clone();
    let mut q = x.denom().clone();
    // expand q/p: a1 = floor(q/p), then recurse on the remainder
    while !p.is_zero() {
        let (quot, rem) = q.div_rem(&p);
        quotients.push(quot);
        q = p;
        p = rem;
    }
    debug_assert!(quotients.last().map(|a| a >= &BigInt::from(2)).unwrap_or(false));
    Ok(quotients)
}

/// Convergents `h_k / k_k` from a partial-quotient list `[a0; a1, ...]`,
/// skipping the trivial zeroth convergent `0/1`.
pub fn convergents(cf: &[BigInt]) -> Vec<Rational> {
    let mut out = Vec::new();
    // seeds h_{-2}/h_{-1} = 0/1 and k_{-2}/k_{-1} = 1/0
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    for (idx, quot) in cf.iter().enumerate() {
        let h_next = quot * &h + &h_prev;
        let k_next = quot * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        if idx > 0 {
            out.push(Rational::from_reduced(h.clone(), k.clone()));
        }
    }
    out
}
