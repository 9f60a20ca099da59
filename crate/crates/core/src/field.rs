//! Exact scalars over ℚ and prime fields.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Small(n, 1),
            Field::Prime(p) => Scalar::Mod(n.rem_euclid(p as i64) as u64, p),
        }
    }

    /// `num / den`; fails when `den` vanishes in the field.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        Ok(self.from_i64(num) * d.inv()?)
    }

    /// All elements of a prime field, `None` over ℚ.
    pub fn elements(self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..p).map(|v| Scalar::Mod(v, p)).collect()),
        }
    }

    pub fn label(self) -> String {
        match self {
            Field::Rationals => "Q".to_string(),
            Field::Prime(p) => format!("F{p}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn is_prime(p: u64) -> bool {
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

/// A field element. Rationals are kept reduced, in the small form whenever
/// numerator and denominator fit in an `i64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(i64, i64),
    Big(Box<BigRational>),
    Mod(u64, u64),
}

fn from_i128(num: i128, den: i128) -> Scalar {
    debug_assert!(den != 0);
    let g = num.gcd(&den);
    let (mut n, mut d) = (num / g, den / g);
    if d < 0 {
        n = -n;
        d = -d;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Scalar::Small(a, b),
        _ => Scalar::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
    }
}

fn from_big(r: BigRational) -> Scalar {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(a), Some(b)) => Scalar::Small(a, b),
        _ => Scalar::Big(Box::new(r)),
    }
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod(_, p) => Field::Prime(*p),
            _ => Field::Rationals,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n == 0,
            Scalar::Big(r) => r.is_zero(),
            Scalar::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Small(n, d) => *n == 1 && *d == 1,
            Scalar::Big(r) => r.is_one(),
            Scalar::Mod(v, _) => *v == 1,
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Scalar::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(r) => (**r).clone(),
            Scalar::Mod(v, _) => BigRational::from_integer(BigInt::from(*v)),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Small(n, d) => from_i128(*d as i128, *n as i128),
            Scalar::Big(r) => from_big(r.recip()),
            Scalar::Mod(v, p) => Scalar::Mod(pow_mod(*v, p - 2, *p), *p),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar> {
        if self.field() != o.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(self + o)
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar> {
        if self.field() != o.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(self * o)
    }
}

fn pow_mod(b: u64, mut e: u64, p: u64) -> u64 {
    let m = p as u128;
    let mut acc = 1u128;
    let mut base = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(n, 1) => write!(f, "{n}"),
            Scalar::Small(n, d) => write!(f, "{n}/{d}"),
            Scalar::Big(r) => write!(f, "{r}"),
            Scalar::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                assert_eq!(p, q, "scalars from different prime fields");
                let s = a + b;
                Scalar::Mod(if s >= *p { s - p } else { s }, *p)
            }
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Scalar::Small(s, 1);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                from_i128(a * d + c * b, b * d)
            }
            (Scalar::Mod(..), _) | (_, Scalar::Mod(..)) => panic!("scalars from different fields"),
            _ => from_big(self.to_big() + o.to_big()),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) => {
                assert_eq!(p, q, "scalars from different prime fields");
                Scalar::Mod(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_mul(*c) {
                        return Scalar::Small(s, 1);
                    }
                }
                from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            (Scalar::Mod(..), _) | (_, Scalar::Mod(..)) => panic!("scalars from different fields"),
            _ => from_big(self.to_big() * o.to_big()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod(0, p) => Scalar::Mod(0, *p),
            Scalar::Mod(v, p) => Scalar::Mod(p - v, *p),
            Scalar::Small(n, d) => match n.checked_neg() {
                Some(m) => Scalar::Small(m, *d),
                None => from_big(-self.to_big()),
            },
            Scalar::Big(r) => from_big(-(**r).clone()),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

macro_rules! by_value {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
by_value!(Add, add);
by_value!(Sub, sub);
by_value!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

/// Sign `(-1)^k` as a field element.
pub fn sign(field: Field, k: usize) -> Scalar {
    if k.is_multiple_of(2) {
        field.one()
    } else {
        -field.one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_axioms_exhaustive() {
        for p in [2u64, 3, 5, 7] {
            let f = Field::Prime(p);
            let els = f.elements().unwrap();
            for a in &els {
                assert_eq!(a + &f.zero(), *a);
                assert_eq!(a * &f.one(), *a);
                assert!((a + &(-a)).is_zero());
                if !a.is_zero() {
                    assert!((a * &a.inv().unwrap()).is_one());
                }
                for b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for c in &els {
                        assert_eq!(&(a + b) + c, a + &(b + c));
                        assert_eq!(&(a * b) * c, a * &(b * c));
                        assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert_eq!(Field::prime(4), Err(Error::NotPrime(4)));
        assert_eq!(Field::prime(1), Err(Error::NotPrime(1)));
        assert!(Field::prime(13).is_ok());
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(Field::Rationals.zero().inv(), Err(Error::DivisionByZero));
        assert_eq!(Field::Prime(5).zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Field::Prime(3).one();
        let b = Field::Prime(5).one();
        assert_eq!(a.checked_add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.checked_mul(&Field::Rationals.one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let q = Field::Rationals;
        let big = q.from_i64(i64::MAX);
        let s = &big + &big;
        assert!(matches!(s, Scalar::Big(_)));
        let back = &s - &big;
        assert_eq!(back, big);
        assert!(matches!(back, Scalar::Small(..)));
        let m = q.from_i64(i64::MIN);
        assert_eq!(-(-m.clone()), m);
    }

    proptest! {
        #[test]
        fn rational_ops_match_bigrational(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let q = Field::Rationals;
            let x = q.ratio(a, b).unwrap();
            let y = q.ratio(c, d).unwrap();
            let bx = BigRational::new(a.into(), b.into());
            let by = BigRational::new(c.into(), d.into());
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            if c != 0 {
                prop_assert_eq!((&x * &y.inv().unwrap()).to_big(), bx / by);
            }
        }

        #[test]
        fn small_form_is_canonical(a in -50i64..50, b in 1i64..50) {
            let x = Field::Rationals.ratio(a * 3, b * 3).unwrap();
            prop_assert_eq!(x, Field::Rationals.ratio(a, b).unwrap());
        }
    }
}
