//! Exact coefficient fields: a prime field F_p or the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 2^61 - 1, a Mersenne prime.
pub const DEFAULT_PRIME: u64 = 2_305_843_009_213_693_951;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldConfig {
    Prime(u64),
    Rationals,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::Prime(DEFAULT_PRIME)
    }
}

impl FieldConfig {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldConfig::Prime(p))
        } else {
            Err(Error::InvalidArgument(format!("{p} is not prime")))
        }
    }

    pub fn is_ordered(&self) -> bool {
        matches!(self, FieldConfig::Rationals)
    }

    /// Number of elements, `None` for the rationals.
    pub fn size(&self) -> Option<u64> {
        match self {
            FieldConfig::Prime(p) => Some(*p),
            FieldConfig::Rationals => None,
        }
    }
}

impl fmt::Display for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldConfig::Prime(p) => write!(f, "Fp:{p}"),
            FieldConfig::Rationals => write!(f, "Q"),
        }
    }
}

impl FromStr for FieldConfig {
    type Err = Error;

    /// Accepts `Q`, `q`, `Fp:<p>` and `fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(FieldConfig::Rationals);
        }
        let lower = s.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad prime {rest:?}")))?;
            return FieldConfig::prime(p);
        }
        Err(Error::InvalidArgument(format!("unknown field {s:?}")))
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, valid for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of the configured field. Residues live in `[0, p)`,
/// fractions are kept reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod { value: u64, modulus: u64 },
    Rat(BigRational),
}

impl Scalar {
    pub fn zero(field: FieldConfig) -> Self {
        Scalar::from_i64(field, 0)
    }

    pub fn one(field: FieldConfig) -> Self {
        Scalar::from_i64(field, 1)
    }

    pub fn from_i64(field: FieldConfig, v: i64) -> Self {
        match field {
            FieldConfig::Prime(p) => Scalar::Mod {
                value: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
            FieldConfig::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// `num/den` mapped into the field.
    pub fn from_ratio(field: FieldConfig, num: &BigInt, den: &BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::NotInField(format!("{num}/{den}")));
        }
        match field {
            FieldConfig::Prime(p) => {
                let pb = BigInt::from(p);
                let n = num.mod_floor(&pb).to_u64().unwrap();
                let d = den.mod_floor(&pb).to_u64().unwrap();
                if d == 0 {
                    return Err(Error::NotInField(format!("{num}/{den} mod {p}")));
                }
                let n = Scalar::Mod { value: n, modulus: p };
                let d = Scalar::Mod { value: d, modulus: p };
                Ok(n.mul(&d.inv().unwrap()))
            }
            FieldConfig::Rationals => Ok(Scalar::Rat(BigRational::new(num.clone(), den.clone()))),
        }
    }

    pub fn field(&self) -> FieldConfig {
        match self {
            Scalar::Mod { modulus, .. } => FieldConfig::Prime(*modulus),
            Scalar::Rat(_) => FieldConfig::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod { value, .. } => *value == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                debug_assert_eq!(p, q);
                let s = *a as u128 + *b as u128;
                Scalar::Mod {
                    value: (s % *p as u128) as u64,
                    modulus: *p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => panic!("scalar field mismatch"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod { value: a, modulus: p }, Scalar::Mod { value: b, modulus: q }) => {
                debug_assert_eq!(p, q);
                Scalar::Mod {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => panic!("scalar field mismatch"),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Mod { value, modulus } => Scalar::Mod {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
        })
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.inv().map(|i| self.mul(&i))
    }

    /// Sign of a rational; errors over a prime field.
    pub fn signum(&self) -> Result<i32> {
        match self {
            Scalar::Rat(r) => Ok(if r.is_zero() {
                0
            } else if r.is_positive() {
                1
            } else {
                -1
            }),
            Scalar::Mod { .. } => Err(Error::FieldNotOrdered),
        }
    }

    /// Uniform over F_p; over Q a small integer in [-9, 9].
    pub fn random<R: Rng + ?Sized>(field: FieldConfig, rng: &mut R) -> Scalar {
        match field {
            FieldConfig::Prime(p) => Scalar::Mod {
                value: rng.gen_range(0..p),
                modulus: p,
            },
            FieldConfig::Rationals => Scalar::from_i64(field, rng.gen_range(-9..=9)),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(field: FieldConfig, rng: &mut R) -> Scalar {
        loop {
            let s = Scalar::random(field, rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Residue as a plain integer (prime fields only).
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rat(_) => None,
        }
    }
}

impl fmt::Display for Scalar {
    /// Residues above p/2 print as negatives so that `-1` survives a round trip
    /// without a 19-digit detour.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod { value, modulus } => {
                if *value > modulus / 2 {
                    write!(f, "-{}", modulus - value)
                } else {
                    write!(f, "{value}")
                }
            }
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}
