//! Exact scalars: prime fields of machine-word characteristic and the rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default characteristic used when none is requested.
pub const DEFAULT_CHARACTERISTIC: u64 = 32003;

/// A coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    /// `F_q` with `q` prime and `q < 2^31`.
    Prime(u32),
    /// The rational numbers.
    Rational,
}

/// An element of a [`Field`]. Prime-field values are kept in `[0, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coeff {
    Fp(u32),
    Q(BigRational),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Build the field of characteristic `q`; `0` means the rationals.
    pub fn with_characteristic(q: u64) -> Result<Field> {
        if q == 0 {
            return Ok(Field::Rational);
        }
        if q >= 1 << 31 {
            return Err(Error::CharacteristicTooLarge(q));
        }
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(Field::Prime(q as u32))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Prime(q) => *q as u64,
            Field::Rational => 0,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Prime(_) => Coeff::Fp(0),
            Field::Rational => Coeff::Q(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Coeff {
        match self {
            Field::Prime(_) => Coeff::Fp(1),
            Field::Rational => Coeff::Q(BigRational::one()),
        }
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self {
            Field::Prime(q) => Coeff::Fp(v.rem_euclid(*q as i64) as u32),
            Field::Rational => Coeff::Q(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Map an arbitrary-precision rational into the field. Fails in positive
    /// characteristic when the denominator vanishes.
    pub fn from_rational(&self, r: &BigRational) -> Option<Coeff> {
        match self {
            Field::Rational => Some(Coeff::Q(r.clone())),
            Field::Prime(q) => {
                let qb = BigInt::from(*q);
                let reduce = |b: &BigInt| -> u32 {
                    let m = ((b % &qb) + &qb) % &qb;
                    m.to_u32().expect("residue fits")
                };
                let num = Coeff::Fp(reduce(r.numer()));
                let den = reduce(r.denom());
                if den == 0 {
                    return None;
                }
                Some(self.mul(&num, &self.inv(&Coeff::Fp(den))))
            }
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Fp(v) => *v == 0,
            Coeff::Q(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Fp(v) => *v == 1,
            Coeff::Q(r) => r.is_one(),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(q), Coeff::Fp(x), Coeff::Fp(y)) => {
                Coeff::Fp(((*x as u64 + *y as u64) % *q as u64) as u32)
            }
            (Field::Rational, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x + y),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Prime(q), Coeff::Fp(x)) => Coeff::Fp(if *x == 0 { 0 } else { q - x }),
            (Field::Rational, Coeff::Q(x)) => Coeff::Q(-x),
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(q), Coeff::Fp(x), Coeff::Fp(y)) => {
                Coeff::Fp(((*x as u64 * *y as u64) % *q as u64) as u32)
            }
            (Field::Rational, Coeff::Q(x), Coeff::Q(y)) => Coeff::Q(x * y),
            _ => panic!("coefficient from a different field"),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Prime(q), Coeff::Fp(x)) => {
                assert!(*x != 0, "inverse of zero");
                // Fermat: x^(q-2)
                let m = *q as u64;
                let mut base = *x as u64;
                let mut e = m - 2;
                let mut acc = 1u64;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Coeff::Fp(acc as u32)
            }
            (Field::Rational, Coeff::Q(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Coeff::Q(x.recip())
            }
            _ => panic!("coefficient from a different field"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b))
    }

    /// Symmetric integer representative used for printing (`q - 1` prints as `-1`).
    pub(crate) fn signed_repr(&self, a: &Coeff) -> (bool, String) {
        match (self, a) {
            (Field::Prime(q), Coeff::Fp(x)) => {
                if *x as u64 * 2 > *q as u64 {
                    (true, (q - x).to_string())
                } else {
                    (false, x.to_string())
                }
            }
            (Field::Rational, Coeff::Q(r)) => (r.is_negative(), r.abs().to_string()),
            _ => panic!("coefficient from a different field"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(q) => write!(f, "{q}"),
            Field::Rational => write!(f, "Q"),
        }
    }
}
