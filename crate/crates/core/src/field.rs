//! Coefficient fields: the rationals (with a machine-word fast path) and
//! prime fields of odd characteristic.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which coefficient field a ring is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    PrimeField { p: u64 },
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::PrimeField { p } => {
                if p <= 2 || p >= (1 << 31) || !is_prime(p) {
                    Err(Error::InvalidField(format!(
                        "GF {p}: characteristic must be an odd prime below 2^31"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField { p } => write!(f, "GF {p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A field together with the arithmetic on its elements.
///
/// Elements carry no context; the field value does (e.g. the characteristic).
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    /// Canonical textual form: an integer or `p/q`.
    fn format(&self, a: &Self::Elem) -> String;
    /// Size measure used in engine statistics.
    fn bits(&self, a: &Self::Elem) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// Rank of a dense matrix given as rows.
    fn rank(&self, rows: Vec<Vec<Self::Elem>>) -> usize {
        crate::linalg::echelon(self, rows).len()
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// An exact rational number. Values whose numerator and denominator fit in an
/// `i64` are kept inline; everything else spills to a `BigRational`.
///
/// Invariant: `Small(n, d)` has `d > 0` and `gcd(n, d) = 1`, and a value is
/// `Big` only if it does not fit `Small`. This keeps `Eq` and `Hash` structural.
#[derive(Clone)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_int(v: i64) -> Self {
        Rational::Small(v, 1)
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(v))
    }

    pub fn from_bigs(num: BigInt, den: BigInt) -> Self {
        Self::from_big(BigRational::new(num, den))
    }

    fn from_i128(mut n: i128, mut d: i128) -> Self {
        if d < 0 {
            n = -n;
            d = -d;
        }
        let g = gcd_u128(n.unsigned_abs(), d as u128) as i128;
        if g > 1 {
            n /= g;
            d /= g;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(r),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rational::Small(_, d) => *d == 1,
            Rational::Big(r) => r.is_integer(),
        }
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numer())
    }

    pub fn add(&self, o: &Self) -> Self {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return Self::from_i128(*a as i128 + *c as i128, 1);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128(a * d + c * b, b * d)
            }
            _ => Self::from_big(self.to_big() + o.to_big()),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(a, b) => Self::from_i128(-(*a as i128), *b as i128),
            Rational::Big(r) => Self::from_big(-r),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        match (self, o) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::from_big(self.to_big() * o.to_big()),
        }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Rational::Small(a, b) => Self::from_i128(*b as i128, *a as i128),
            Rational::Big(r) => Self::from_big(r.recip()),
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }

    pub fn signum(&self) -> i32 {
        match self {
            Rational::Small(a, _) => a.signum() as i32,
            Rational::Big(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn floor(&self) -> BigInt {
        self.to_big().floor().to_integer()
    }

    pub fn bits(&self) -> u64 {
        match self {
            Rational::Small(a, b) => {
                (64 - a.unsigned_abs().leading_zeros()) as u64 + (64 - b.leading_zeros()) as u64
            }
            Rational::Big(r) => r.numer().bits() + r.denom().bits(),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(x), Rational::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rational::Small(a, b) => {
                0u8.hash(state);
                a.hash(state);
                b.hash(state);
            }
            Rational::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(a, 1) => write!(f, "{a}"),
            Rational::Small(a, b) => write!(f, "{a}/{b}"),
            Rational::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl std::str::FromStr for Rational {
    type Err = Error;

    /// Accepts `a` or `a/b` with integer `a`, `b`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            pos: 0,
            msg: format!("not a rational number: {s:?}"),
        };
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_bigs(n, d))
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_int(v)
    }
    fn from_bigint(&self, v: &BigInt) -> Rational {
        Rational::from_bigint(v.clone())
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a.add(b)
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a.sub(b)
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a.mul(b)
    }
    fn neg(&self, a: &Rational) -> Rational {
        a.neg()
    }
    fn inv(&self, a: &Rational) -> Rational {
        a.inv()
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &Rational) -> bool {
        matches!(a, Rational::Small(1, 1))
    }
    fn format(&self, a: &Rational) -> String {
        a.to_string()
    }
    fn bits(&self, a: &Rational) -> u64 {
        a.bits()
    }

    /// Fraction-free (Bareiss) elimination over the integers after clearing
    /// row denominators.
    fn rank(&self, rows: Vec<Vec<Rational>>) -> usize {
        let int_rows = rows
            .into_iter()
            .map(|row| {
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |acc, x| acc.lcm(&x.denom()));
                row.iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect::<Vec<_>>()
            })
            .collect();
        crate::linalg::bareiss_rank(int_rows)
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// GF(p) for an odd prime p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldSpec::PrimeField { p }.validate()?;
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::PrimeField { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        v.mod_floor(&BigInt::from(self.p)).to_u64().unwrap()
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn format(&self, a: &u64) -> String {
        // Symmetric representative reads better for small negatives.
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
    fn bits(&self, a: &u64) -> u64 {
        (64 - a.leading_zeros()) as u64
    }
}
