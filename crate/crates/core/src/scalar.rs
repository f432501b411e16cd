//! Scalar abstractions.
//!
//! Exact integer work is generic over [`Coefficient`], a ring of integers
//! with Euclidean division. [`num_bigint::BigInt`] is the default carrier
//! (see the aliases at the crate root); fixed-width types are accepted for
//! callers who can bound their coefficients.
//!
//! Field-coefficient rank computations go through the [`Field`] trait, which
//! is implemented by [`Rationals`] (characteristic 0) and [`PrimeField`].

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Integer scalar usable as a chain coefficient.
pub trait Coefficient:
    Integer + Signed + Clone + Debug + Display + Hash + Send + Sync + From<i32> + 'static
{
    /// `None` when out of `i64` range.
    fn to_i64_checked(&self) -> Option<i64>;

    fn to_bigint(&self) -> BigInt;

    /// `None` when `v` does not fit.
    fn from_bigint(v: &BigInt) -> Option<Self>;

    /// `self += other * factor`, the workhorse of every elimination loop.
    fn add_mul_assign(&mut self, other: &Self, factor: &Self) {
        let prod = other.clone() * factor.clone();
        *self = std::mem::replace(self, Self::zero()) + prod;
    }

    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}

impl Coefficient for BigInt {
    fn to_i64_checked(&self) -> Option<i64> {
        self.to_i64()
    }

    fn to_bigint(&self) -> BigInt {
        self.clone()
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn add_mul_assign(&mut self, other: &Self, factor: &Self) {
        *self += other * factor;
    }
}

impl Coefficient for i64 {
    fn to_i64_checked(&self) -> Option<i64> {
        Some(*self)
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
}

impl Coefficient for i128 {
    fn to_i64_checked(&self) -> Option<i64> {
        i64::try_from(*self).ok()
    }

    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
}

/// A field used for rank computations.
///
/// Elements are plain values; the field object carries any context (the
/// modulus for prime fields).
pub trait Field: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn embed<T: Coefficient>(&self, v: &T) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; callers never pass zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
}

/// The rational numbers, exact.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn embed<T: Coefficient>(&self, v: &T) -> BigRational {
        BigRational::from_integer(v.to_bigint())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// The prime field `Z/p`.
#[derive(Clone, Copy, Debug)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    /// Returns `None` when `p` is not prime.
    pub fn new(p: u64) -> Option<Self> {
        is_prime(p).then_some(Self { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn embed<T: Coefficient>(&self, v: &T) -> u64 {
        let r = v.to_bigint().mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> u64 {
        // Fermat: a^(p-2)
        let mut base = *a as u128 % self.p as u128;
        let mut exp = self.p - 2;
        let mut acc: u128 = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p as u128;
            }
            base = base * base % self.p as u128;
            exp >>= 1;
        }
        acc as u64
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.inv(&3), 5);
        assert_eq!(f.embed(&BigInt::from(-1)), 6);
        assert_eq!(f.embed(&-15i64), 6);
        assert_eq!(f.sub(&2, &5), 4);
    }

    #[test]
    fn composite_modulus_rejected() {
        assert!(PrimeField::new(4).is_none());
        assert!(PrimeField::new(1).is_none());
        assert!(PrimeField::new(2).is_some());
    }

    #[test]
    fn rationals_embed_integers() {
        let q = Rationals;
        let x = q.embed(&BigInt::from(-12));
        assert_eq!(x, BigRational::from_integer(BigInt::from(-12)));
        assert_eq!(q.mul(&x, &q.inv(&x)), q.one());
    }
}
