//! Exact scalars: arbitrary-precision rationals and prime fields `F_p`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::FieldError;

/// The coefficient field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    /// Exact rationals (characteristic 0).
    Rational,
    /// Integers modulo a prime `p`.
    Prime(u64),
}

impl Field {
    /// Builds `F_p`, rejecting composite or too-small moduli.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> FieldValue {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldValue {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldValue {
        match self {
            Field::Rational => FieldValue::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldValue::Mod {
                p,
                r: n.rem_euclid(p as i64) as u64,
            },
        }
    }

    /// Interprets an integer of any size as a field element.
    pub fn from_bigint(self, n: &BigInt) -> FieldValue {
        match self {
            Field::Rational => FieldValue::Rat(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let r = ((n % &m) + &m) % &m;
                FieldValue::Mod {
                    p,
                    r: r.to_u64().expect("residue fits in u64"),
                }
            }
        }
    }

    /// The value `num/den`; fails when `den` is zero in this field.
    pub fn from_ratio(self, num: &BigInt, den: &BigInt) -> Result<FieldValue, FieldError> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(FieldError::NonInvertible {
                value: den.to_string(),
                field: self,
            });
        }
        Ok(self.from_bigint(num) * d.inverse()?)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = FieldError;

    /// Accepts `q` or `fp:<prime>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "q" || s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(rest) = s.strip_prefix("fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| FieldError::BadSpec(s.to_string()))?;
            return Field::prime(p);
        }
        Err(FieldError::BadSpec(s.to_string()))
    }
}

/// A scalar tagged with its field. Operations on values of different fields
/// panic; public entry points check field tags before combining.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldValue {
    Rat(BigRational),
    Mod { p: u64, r: u64 },
}

impl FieldValue {
    pub fn field(&self) -> Field {
        match self {
            FieldValue::Rat(_) => Field::Rational,
            FieldValue::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldValue::Rat(q) => q.is_zero(),
            FieldValue::Mod { r, .. } => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldValue::Rat(q) => q.is_one(),
            FieldValue::Mod { r, .. } => *r == 1,
        }
    }

    pub fn inverse(&self) -> Result<FieldValue, FieldError> {
        if self.is_zero() {
            return Err(FieldError::NonInvertible {
                value: self.to_string(),
                field: self.field(),
            });
        }
        Ok(match self {
            FieldValue::Rat(q) => FieldValue::Rat(q.recip()),
            FieldValue::Mod { p, r } => FieldValue::Mod {
                p: *p,
                r: pow_mod(*r, *p - 2, *p),
            },
        })
    }

    fn assert_same(&self, other: &FieldValue) {
        assert_eq!(
            self.field(),
            other.field(),
            "mixed-field arithmetic must be rejected before reaching FieldValue"
        );
    }
}

impl fmt::Display for FieldValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldValue::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            FieldValue::Mod { r, .. } => write!(f, "{r}"),
        }
    }
}

impl PartialOrd for FieldValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but total order, used only for deterministic containers.
impl Ord for FieldValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (FieldValue::Rat(a), FieldValue::Rat(b)) => a.cmp(b),
            (FieldValue::Mod { p: p1, r: r1 }, FieldValue::Mod { p: p2, r: r2 }) => {
                (p1, r1).cmp(&(p2, r2))
            }
            (FieldValue::Rat(_), FieldValue::Mod { .. }) => Ordering::Less,
            (FieldValue::Mod { .. }, FieldValue::Rat(_)) => Ordering::Greater,
        }
    }
}

impl Add for FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: FieldValue) -> FieldValue {
        &self + &rhs
    }
}

impl<'a> Add<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn add(self, rhs: &FieldValue) -> FieldValue {
        self.assert_same(rhs);
        match (self, rhs) {
            (FieldValue::Rat(a), FieldValue::Rat(b)) => FieldValue::Rat(a + b),
            (FieldValue::Mod { p, r: a }, FieldValue::Mod { r: b, .. }) => FieldValue::Mod {
                p: *p,
                r: ((*a as u128 + *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for FieldValue {
    type Output = FieldValue;
    fn neg(self) -> FieldValue {
        match self {
            FieldValue::Rat(a) => FieldValue::Rat(-a),
            FieldValue::Mod { p, r } => FieldValue::Mod {
                p,
                r: (p - r) % p,
            },
        }
    }
}

impl Sub for FieldValue {
    type Output = FieldValue;
    fn sub(self, rhs: FieldValue) -> FieldValue {
        self + (-rhs)
    }
}

impl Mul for FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: FieldValue) -> FieldValue {
        &self * &rhs
    }
}

impl<'a> Mul<&'a FieldValue> for &'a FieldValue {
    type Output = FieldValue;
    fn mul(self, rhs: &FieldValue) -> FieldValue {
        self.assert_same(rhs);
        match (self, rhs) {
            (FieldValue::Rat(a), FieldValue::Rat(b)) => FieldValue::Rat(a * b),
            (FieldValue::Mod { p, r: a }, FieldValue::Mod { r: b, .. }) => FieldValue::Mod {
                p: *p,
                r: ((*a as u128 * *b as u128) % *p as u128) as u64,
            },
            _ => unreachable!(),
        }
    }
}

/// Reduces a rational modulo `p`; `None` if `p` divides the denominator.
pub fn reduce_mod(q: &BigRational, p: u64) -> Option<FieldValue> {
    let field = Field::Prime(p);
    field.from_ratio(q.numer(), q.denom()).ok()
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    acc as u64
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_field_specs() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("fp:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("fp:8".parse::<Field>().is_err());
        assert!("z".parse::<Field>().is_err());
    }

    #[test]
    fn half_is_not_in_f2() {
        let f2 = Field::Prime(2);
        assert!(f2.from_ratio(&BigInt::from(1), &BigInt::from(2)).is_err());
        // 3 is 1 in F_2, so 1/3 is fine there
        let v = f2.from_ratio(&BigInt::from(1), &BigInt::from(3)).unwrap();
        assert!(v.is_one());
    }

    #[test]
    fn prime_inverse() {
        let f = Field::Prime(13);
        for n in 1..13 {
            let x = f.from_i64(n);
            assert!((x.clone() * x.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn rational_display() {
        let q = Field::Rational
            .from_ratio(&BigInt::from(-2), &BigInt::from(6))
            .unwrap();
        assert_eq!(q.to_string(), "-1/3");
        assert_eq!(Field::Rational.from_i64(4).to_string(), "4");
    }
}
