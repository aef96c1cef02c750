use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};
use std::fmt;

/// Scalars are arbitrary-precision rationals. Each [`Ring`] keeps its
/// elements in a canonical sub-form: integers have denominator one, prime
/// field elements are integers in `[0, p)`, rationals are in lowest terms
/// (automatic for `BigRational`).
pub type Scalar = BigRational;

/// The coefficient rings the engine computes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    PrimeField(u64),
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

impl Ring {
    pub fn is_field(&self) -> bool {
        !matches!(self, Ring::Integers)
    }

    /// Whether `p` is accepted as a prime field characteristic.
    pub fn valid_characteristic(p: u64) -> bool {
        if p < 2 {
            return false;
        }
        let mut d = 2u64;
        while d.saturating_mul(d) <= p {
            if p.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    /// Canonical form of a scalar as an element of this ring.
    /// Returns `None` if the value does not lie in the ring (a non-integer
    /// over `Z` or `F_p`).
    pub fn normalize(&self, x: &Scalar) -> Option<Scalar> {
        match self {
            Ring::Rationals => Some(x.clone()),
            Ring::Integers => x.is_integer().then(|| x.clone()),
            Ring::PrimeField(p) => {
                let p = BigInt::from(*p);
                if x.is_integer() {
                    Some(Scalar::from(x.numer().mod_floor(&p)))
                } else {
                    // A fraction a/b with gcd(b, p) = 1 still names a field
                    // element; reduce through the inverse of b.
                    let denom = x.denom().mod_floor(&p);
                    let inv = mod_inverse(&denom, &p)?;
                    Some(Scalar::from((x.numer().mod_floor(&p) * inv).mod_floor(&p)))
                }
            }
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(&(a + b)).expect("sum stays in ring")
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(&(a - b)).expect("difference stays in ring")
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(&(a * b)).expect("product stays in ring")
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.normalize(&(-a)).expect("negation stays in ring")
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match self {
            Ring::Integers => a.abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        match self {
            Ring::Integers => self.is_unit(a).then(|| a.clone()),
            Ring::Rationals => Some(a.recip()),
            Ring::PrimeField(p) => {
                let a = self.normalize(a)?;
                let inv = mod_inverse(a.numer(), &BigInt::from(*p))?;
                Some(Scalar::from(inv))
            }
        }
    }

    /// Exact division `a / b` when it exists in the ring.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        if b.is_zero() {
            return a.is_zero().then(Scalar::zero);
        }
        match self {
            Ring::Integers => {
                let q = a / b;
                q.is_integer().then_some(q)
            }
            Ring::Rationals => Some(a / b),
            Ring::PrimeField(_) => Some(self.mul(a, &self.inv(b)?)),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return None;
    }
    let e = a.extended_gcd(p);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(p))
    } else {
        None
    }
}

/// Parse a scalar from a decimal integer or `a/b` fraction string.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Scalar::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Scalar::from(n))
    }
}

/// Render a scalar as the string form `parse_scalar` accepts.
pub fn scalar_to_string(x: &Scalar) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}
