//! Exact scalar arithmetic over Z, Q, F_p and Z_q.
//!
//! Every [`RingElement`] carries its [`RingSpec`] so mixed-domain arithmetic
//! is detected instead of silently producing garbage. Values are kept in a
//! canonical form: fractions in lowest terms with a positive denominator and
//! residues in `[0, modulus)`, so structural equality is value equality.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// One of the four supported coefficient domains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u64),
    ModularRing(u64),
}

impl RingSpec {
    /// F_p, checking primality by trial division.
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(RingSpec::PrimeField(p))
        } else {
            Err(Error::InvalidModulus(p))
        }
    }

    /// Z_q for any q >= 2.
    pub fn modular(q: u64) -> Result<Self> {
        if q >= 2 {
            Ok(RingSpec::ModularRing(q))
        } else {
            Err(Error::InvalidModulus(q))
        }
    }

    /// Re-checks the modulus invariant for specs built directly from variants.
    pub fn validate(self) -> Result<Self> {
        match self {
            RingSpec::PrimeField(p) => Self::prime_field(p),
            RingSpec::ModularRing(q) => Self::modular(q),
            other => Ok(other),
        }
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            RingSpec::PrimeField(m) | RingSpec::ModularRing(m) => Some(m),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        self.modulus().is_some()
    }

    pub fn is_field(self) -> bool {
        match self {
            RingSpec::Integers => false,
            RingSpec::Rationals | RingSpec::PrimeField(_) => true,
            RingSpec::ModularRing(q) => is_prime(q),
        }
    }

    /// No zero divisors.
    pub fn is_integral_domain(self) -> bool {
        match self {
            RingSpec::Integers | RingSpec::Rationals | RingSpec::PrimeField(_) => true,
            RingSpec::ModularRing(q) => is_prime(q),
        }
    }

    /// All elements in canonical order, for finite rings.
    pub fn elements(self) -> Option<impl Iterator<Item = RingElement> + Clone> {
        let m = self.modulus()?;
        Some((0..m).map(move |v| RingElement { ring: self, value: Value::Res(v) }))
    }

    pub fn zero(self) -> RingElement {
        RingElement::from_i64(self, 0)
    }

    pub fn one(self) -> RingElement {
        RingElement::from_i64(self, 1)
    }

    pub(crate) fn check_same(self, other: RingSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DomainMismatch { left: self, right: other })
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => f.write_str("Z"),
            RingSpec::Rationals => f.write_str("Q"),
            RingSpec::PrimeField(p) => write!(f, "Fp {p}"),
            RingSpec::ModularRing(q) => write!(f, "Zq {q}"),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// Parses the `Z`, `Q`, `Fp <p>`, `Zq <q>` spellings used by the file formats.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let kind = parts.next().ok_or_else(|| Error::parse("ring", s))?;
        let modulus = parts.next();
        if parts.next().is_some() {
            return Err(Error::parse("ring", s));
        }
        let parse_mod = || -> Result<u64> {
            let m = modulus.ok_or_else(|| Error::parse("ring modulus", s))?;
            if !m.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse("ring modulus", s));
            }
            m.parse().map_err(|_| Error::parse("ring modulus", s))
        };
        match kind {
            "Z" if modulus.is_none() => Ok(RingSpec::Integers),
            "Q" if modulus.is_none() => Ok(RingSpec::Rationals),
            "Fp" => RingSpec::prime_field(parse_mod()?),
            "Zq" => RingSpec::modular(parse_mod()?),
            _ => Err(Error::parse("ring", s)),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Int(BigInt),
    Rat(BigRational),
    Res(u64),
}

/// A canonical element of some [`RingSpec`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingSpec,
    value: Value,
}

fn reduce_big(v: &BigInt, m: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(m));
    r.to_u64().expect("residue fits in u64")
}

impl RingElement {
    pub fn from_i64(ring: RingSpec, v: i64) -> Self {
        match ring {
            RingSpec::Integers => RingElement { ring, value: Value::Int(BigInt::from(v)) },
            RingSpec::Rationals => {
                RingElement { ring, value: Value::Rat(BigRational::from_integer(BigInt::from(v))) }
            }
            RingSpec::PrimeField(m) | RingSpec::ModularRing(m) => {
                let r = (v as i128).rem_euclid(m as i128) as u64;
                RingElement { ring, value: Value::Res(r) }
            }
        }
    }

    pub fn from_bigint(ring: RingSpec, v: &BigInt) -> Self {
        match ring {
            RingSpec::Integers => RingElement { ring, value: Value::Int(v.clone()) },
            RingSpec::Rationals => {
                RingElement { ring, value: Value::Rat(BigRational::from_integer(v.clone())) }
            }
            RingSpec::PrimeField(m) | RingSpec::ModularRing(m) => {
                RingElement { ring, value: Value::Res(reduce_big(v, m)) }
            }
        }
    }

    /// A rational number `num/den`; only meaningful over Q.
    pub fn from_ratio(ring: RingSpec, num: &BigInt, den: &BigInt) -> Result<Self> {
        if ring != RingSpec::Rationals {
            return Err(Error::DomainMismatch { left: ring, right: RingSpec::Rationals });
        }
        if den.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        Ok(RingElement { ring, value: Value::Rat(BigRational::new(num.clone(), den.clone())) })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(v) => v.is_zero(),
            Value::Rat(v) => v.is_zero(),
            Value::Res(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Int(v) => v.is_one(),
            Value::Rat(v) => v.is_one(),
            Value::Res(v) => *v == 1,
        }
    }

    /// Whether some `b` in the ring satisfies `self * b = 1`.
    pub fn is_unit(&self) -> bool {
        match (&self.value, self.ring) {
            (Value::Int(v), _) => v.abs().is_one(),
            (Value::Rat(v), _) => !v.is_zero(),
            (Value::Res(v), RingSpec::ModularRing(q)) => v.gcd(&q) == 1,
            (Value::Res(v), _) => *v != 0,
        }
    }

    /// The multiplicative inverse, when it exists.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let value = match &self.value {
            Value::Int(v) => Value::Int(v.clone()),
            Value::Rat(v) => Value::Rat(v.recip()),
            Value::Res(v) => {
                let m = self.ring.modulus().expect("finite ring");
                let e = (*v as i128).extended_gcd(&(m as i128));
                Value::Res(e.x.rem_euclid(m as i128) as u64)
            }
        };
        Some(RingElement { ring: self.ring, value })
    }

    /// The integer value over Z, or the representative in `[0, m)` over a finite ring.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match &self.value {
            Value::Int(v) => Some(v.clone()),
            Value::Rat(v) if v.is_integer() => Some(v.to_integer()),
            Value::Rat(_) => None,
            Value::Res(v) => Some(BigInt::from(*v)),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match &self.value {
            Value::Int(v) => BigRational::from_integer(v.clone()),
            Value::Rat(v) => v.clone(),
            Value::Res(v) => BigRational::from_integer(BigInt::from(*v)),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.ring.check_same(rhs.ring)?;
        Ok(self.add_unchecked(rhs))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.ring.check_same(rhs.ring)?;
        Ok(self.add_unchecked(&rhs.neg_ref()))
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        self.ring.check_same(rhs.ring)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn add_unchecked(&self, rhs: &Self) -> Self {
        let value = match (&self.value, &rhs.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a + b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a + b),
            (Value::Res(a), Value::Res(b)) => {
                let m = self.ring.modulus().expect("finite ring") as u128;
                Value::Res(((*a as u128 + *b as u128) % m) as u64)
            }
            _ => panic!("ring mismatch: {} vs {}", self.ring, rhs.ring),
        };
        RingElement { ring: self.ring, value }
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let value = match (&self.value, &rhs.value) {
            (Value::Int(a), Value::Int(b)) => Value::Int(a * b),
            (Value::Rat(a), Value::Rat(b)) => Value::Rat(a * b),
            (Value::Res(a), Value::Res(b)) => {
                let m = self.ring.modulus().expect("finite ring") as u128;
                Value::Res(((*a as u128 * *b as u128) % m) as u64)
            }
            _ => panic!("ring mismatch: {} vs {}", self.ring, rhs.ring),
        };
        RingElement { ring: self.ring, value }
    }

    fn neg_ref(&self) -> Self {
        let value = match &self.value {
            Value::Int(a) => Value::Int(-a),
            Value::Rat(a) => Value::Rat(-a),
            Value::Res(a) => {
                let m = self.ring.modulus().expect("finite ring");
                Value::Res(if *a == 0 { 0 } else { m - a })
            }
        };
        RingElement { ring: self.ring, value }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Parses the textual coefficient encoding for `ring`.
    ///
    /// Integers accept an optional sign. Rationals accept `a` or `a/b` with
    /// `b != 0` and are reduced. Residues accept any signed integer and are
    /// reduced into `[0, modulus)`.
    pub fn parse(ring: RingSpec, s: &str) -> Result<Self> {
        match ring {
            RingSpec::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (s, None),
                };
                let num = parse_signed(num).ok_or_else(|| Error::parse("rational", s))?;
                let den = match den {
                    Some(d) if !d.starts_with(['+', '-']) => {
                        parse_signed(d).ok_or_else(|| Error::parse("rational", s))?
                    }
                    Some(_) => return Err(Error::parse("rational", s)),
                    None => BigInt::one(),
                };
                if den.is_zero() {
                    return Err(Error::parse("rational", s));
                }
                RingElement::from_ratio(ring, &num, &den)
            }
            _ => {
                let v = parse_signed(s).ok_or_else(|| Error::parse("integer", s))?;
                Ok(RingElement::from_bigint(ring, &v))
            }
        }
    }
}

fn parse_signed(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::parse_bytes(s.as_bytes(), 10)
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Int(v) => write!(f, "{v}"),
            Value::Rat(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Value::Rat(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Value::Res(v) => write!(f, "{v}"),
        }
    }
}

/// Canonical ordering: integers and rationals by value, residues by
/// representative. Elements of different rings order by ring first.
impl Ord for RingElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ring.cmp(&other.ring).then_with(|| match (&self.value, &other.value) {
            (Value::Int(a), Value::Int(b)) => a.cmp(b),
            (Value::Rat(a), Value::Rat(b)) => a.cmp(b),
            (Value::Res(a), Value::Res(b)) => a.cmp(b),
            _ => unreachable!("same ring implies same representation"),
        })
    }
}

impl PartialOrd for RingElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

// Operator impls panic on mixed rings; use the `try_*` methods when the
// operands come from untrusted input.
impl Add for &RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        self.add_unchecked(rhs)
    }
}

impl Sub for &RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        self.add_unchecked(&rhs.neg_ref())
    }
}

impl Mul for &RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.mul_unchecked(rhs)
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        self.neg_ref()
    }
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
