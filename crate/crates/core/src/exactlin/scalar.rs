//! Exact scalars over ℚ and prime fields.
//!
//! Rationals are kept as `Ratio<i64>` while they fit and promoted to
//! `BigRational` on overflow. Demotion happens eagerly, so every value has a
//! single representation and the derived `Eq`/`Hash` are value comparisons.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::Error;

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    /// `F_p`; the modulus is always prime and below 2^31.
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self, Error> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `Q` or `Fp:<p>` (also accepts `F<p>`).
    pub fn parse(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rationals") {
            return Ok(Field::Rationals);
        }
        let digits = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("fp:"))
            .or_else(|| t.strip_prefix('F'))
            .ok_or_else(|| Error::InvalidField(format!("unknown field `{s}`")))?;
        let p: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidField(format!("bad prime in `{s}`")))?;
        Field::prime(p)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Q(Rational::from_i64(n)),
            Field::Prime(p) => Scalar::Fp {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// `num / den`; fails when `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, Error> {
        if den.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        match *self {
            Field::Rationals => Ok(Scalar::Q(Rational::from_big(BigRational::new(
                num.clone(),
                den.clone(),
            )))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = ((num % &pb) + &pb) % &pb;
                let d = ((den % &pb) + &pb) % &pb;
                if d.is_zero() {
                    return Err(Error::Parse(format!("denominator divisible by {p}")));
                }
                let n = n.to_u64().unwrap();
                let d = d.to_u64().unwrap();
                Ok(Scalar::Fp {
                    value: mul_mod(n, inv_mod(d, p), p),
                    modulus: p,
                })
            }
        }
    }

    /// Parses `"3"`, `"-1/2"` or a JSON integer rendered as text.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, Error> {
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
        let den: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad scalar `{s}`")))?;
        self.from_fraction(&num, &den)
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        match (self, s) {
            (Field::Rationals, Scalar::Q(_)) => true,
            (Field::Prime(p), Scalar::Fp { modulus, .. }) => p == modulus,
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// A rational number in lowest terms with positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn from_i64(n: i64) -> Self {
        Rational::Small(Ratio::from_integer(n))
    }

    pub fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => {
                Rational::Small(Ratio::new_raw(n, d))
            }
            _ => Rational::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rational::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_zero(),
            Rational::Big(b) => b.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_one(),
            Rational::Big(b) => b.is_one(),
        }
    }

    fn binop(
        &self,
        other: &Self,
        small: impl Fn(&Ratio<i64>, &Ratio<i64>) -> Option<Ratio<i64>>,
        big: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Self {
        if let (Rational::Small(a), Rational::Small(b)) = (self, other) {
            if let Some(r) = small(a, b) {
                if *r.numer() != i64::MIN && *r.denom() != i64::MIN {
                    return Rational::Small(r);
                }
            }
        }
        Rational::from_big(big(self.to_big(), other.to_big()))
    }

    pub fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.checked_add(b), |a, b| a + b)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.checked_sub(b), |a, b| a - b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.checked_mul(b), |a, b| a * b)
    }

    pub fn div(&self, o: &Self) -> Self {
        assert!(!o.is_zero(), "division by zero");
        self.binop(o, |a, b| a.checked_div(b), |a, b| a / b)
    }

    pub fn neg(&self) -> Self {
        match self {
            Rational::Small(r) => Rational::Small(-r),
            Rational::Big(b) => Rational::from_big(-(**b).clone()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(r) => r.is_negative(),
            Rational::Big(b) => b.is_negative(),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(r) => write!(f, "{r}"),
            Rational::Big(b) => write!(f, "{b}"),
        }
    }
}

/// An element of a [`Field`], always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(Rational::from_i64(1).div(r)),
            Scalar::Fp { value, modulus } => {
                assert!(*value != 0, "inverse of zero");
                Scalar::Fp {
                    value: inv_mod(*value, *modulus),
                    modulus: *modulus,
                }
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

fn rat_op(a: &Scalar, b: &Scalar, op: impl Fn(&Rational, &Rational) -> Rational) -> Scalar {
    match (a, b) {
        (Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(op(x, y)),
        _ => panic!("mixed fields in scalar arithmetic"),
    }
}

impl<'a> Add for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        if let (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) = (self, rhs) {
            debug_assert_eq!(p, q);
            let s = a + b;
            return Scalar::Fp { value: if s >= *p { s - p } else { s }, modulus: *p };
        }
        rat_op(self, rhs, Rational::add)
    }
}

impl<'a> Sub for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        if let (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) = (self, rhs) {
            debug_assert_eq!(p, q);
            return Scalar::Fp { value: if a >= b { a - b } else { a + p - b }, modulus: *p };
        }
        rat_op(self, rhs, Rational::sub)
    }
}

impl<'a> Mul for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if let (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) = (self, rhs) {
            debug_assert_eq!(p, q);
            return Scalar::Fp { value: mul_mod(*a, *b, *p), modulus: *p };
        }
        rat_op(self, rhs, Rational::mul)
    }
}

impl<'a> Div for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(r.neg()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}
