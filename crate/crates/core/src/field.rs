//! Exact coefficient fields: the rationals and prime fields `F_p` with `p < 2^63`.
//!
//! Every computation in the crate is generic over [`Field`], so the same
//! matrix-building code runs over `Q` (slow, certain) or over a large random
//! prime (fast, exact modulo the prime).

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Arithmetic context for a field. Elements are plain values; the context
/// carries the modulus where there is one.
pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    /// `None` when the denominator vanishes in the field.
    fn from_rational(&self, q: &Rational) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Whether `a = b^n` for some `b` in the field.
    fn is_nth_power(&self, a: &Self::Elem, n: u64) -> bool;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// `F_p` for a prime `p < 2^63`, elements stored reduced in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..1 << 63).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^63")));
        }
        Ok(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    fn from_rational(&self, q: &Rational) -> Option<u64> {
        let num = self.reduce_bigint(q.numer());
        let den = self.reduce_bigint(q.denom());
        self.inv(&den).map(|d| self.mul(&num, &d))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = *a as u128 + *b as u128;
        (s % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_nth_power(&self, a: &u64, n: u64) -> bool {
        if *a == 0 || n <= 1 {
            return true;
        }
        let g = n.gcd(&(self.p - 1));
        self.pow(a, (self.p - 1) / g) == 1
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// The field of rational numbers with arbitrary-precision entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, v: i64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_u64(&self, v: u64) -> Rational {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, q: &Rational) -> Option<Rational> {
        Some(q.clone())
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn neg(&self, a: &Rational) -> Rational {
        -a
    }
    fn inv(&self, a: &Rational) -> Option<Rational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &Rational) -> bool {
        a.is_zero()
    }
    fn is_nth_power(&self, a: &Rational, n: u64) -> bool {
        if a.is_zero() || n <= 1 {
            return true;
        }
        if a.is_negative() && n.is_multiple_of(2) {
            return false;
        }
        let n = match u32::try_from(n) {
            Ok(n) => n,
            Err(_) => return a.abs().is_one(),
        };
        is_perfect_power(a.numer(), n) && is_perfect_power(a.denom(), n)
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

fn is_perfect_power(v: &BigInt, n: u32) -> bool {
    let mag = BigInt::from_biguint(Sign::Plus, v.magnitude().clone());
    let root = mag.nth_root(n);
    num_traits::pow(root, n as usize) == mag
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut a: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, a);
            }
            a = mulmod(a, a);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &BASES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub const RANDOM_PRIME_MIN: u64 = 1 << 50;
pub const RANDOM_PRIME_MAX: u64 = 1 << 62;

/// Uniform random prime in `[2^50, 2^62]` avoiding `excluded`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R, excluded: &[u64]) -> u64 {
    loop {
        let candidate = rng.gen_range(RANDOM_PRIME_MIN..=RANDOM_PRIME_MAX) | 1;
        if is_prime(candidate) && !excluded.contains(&candidate) {
            return candidate;
        }
    }
}

/// Which field a computation runs over, before any randomness is resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "prime")]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    /// A prime drawn from the run seed.
    #[default]
    RandomPrime,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
            FieldSpec::RandomPrime => write!(f, "random"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" | "q" | "Q" => Ok(FieldSpec::Rational),
            "random" => Ok(FieldSpec::RandomPrime),
            _ => {
                let digits = s.strip_prefix("prime:").unwrap_or(s);
                digits
                    .parse::<u64>()
                    .map(FieldSpec::Prime)
                    .map_err(|_| Error::InvalidField(format!("cannot parse field spec `{s}`")))
            }
        }
    }
}

/// A field after the random prime (if any) has been drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "prime")]
pub enum ResolvedField {
    Rational,
    Prime(u64),
}

impl ResolvedField {
    pub fn prime(&self) -> Option<u64> {
        match self {
            ResolvedField::Rational => None,
            ResolvedField::Prime(p) => Some(*p),
        }
    }
}

impl fmt::Display for ResolvedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResolvedField::Rational => write!(f, "rational"),
            ResolvedField::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}
