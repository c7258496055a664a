//! Exact arithmetic in the quadratic field Q(sqrt 3).
//!
//! Every value is a pair `(rat, sqrt3)` of reduced rationals representing
//! `rat + sqrt3 * √3`. The field is closed under the four arithmetic
//! operations and is totally ordered as a subfield of the reals, so exact
//! sign tests and comparisons are available.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An element `rat + sqrt3·√3` of Q(√3).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    rat: BigRational,
    sqrt3: BigRational,
}

impl Scalar {
    pub fn new(rat: BigRational, sqrt3: BigRational) -> Self {
        Scalar { rat, sqrt3 }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// The rational `n/d`. Panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::new(BigRational::new(n.into(), d.into()), BigRational::zero())
    }

    /// The pure multiple `(n/d)·√3`.
    pub fn sqrt3_ratio(n: i64, d: i64) -> Self {
        Scalar::new(BigRational::zero(), BigRational::new(n.into(), d.into()))
    }

    pub fn sqrt3() -> Self {
        Scalar::sqrt3_ratio(1, 1)
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::new(r, BigRational::zero())
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn sqrt3_part(&self) -> &BigRational {
        &self.sqrt3
    }

    pub fn is_rational(&self) -> bool {
        self.sqrt3.is_zero()
    }

    /// Galois conjugate `rat − sqrt3·√3`.
    pub fn conjugate(&self) -> Self {
        Scalar::new(self.rat.clone(), -self.sqrt3.clone())
    }

    /// Field norm `rat² − 3·sqrt3²`; zero iff the value is zero.
    pub fn field_norm(&self) -> BigRational {
        &self.rat * &self.rat - BigRational::from_integer(BigInt::from(3)) * &self.sqrt3 * &self.sqrt3
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = self.field_norm();
        Some(Scalar::new(&self.rat / &norm, -&self.sqrt3 / &norm))
    }

    /// Exact integer power of √3 (negative exponents allowed).
    pub fn sqrt3_pow(k: i32) -> Self {
        let a = k.unsigned_abs();
        let three = BigInt::from(3);
        let pow3 = |e: u32| BigRational::from_integer(three.pow(e));
        let positive = if a.is_multiple_of(2) {
            Scalar::from_rational(pow3(a / 2))
        } else {
            Scalar::new(BigRational::zero(), pow3(a / 2))
        };
        if k >= 0 {
            positive
        } else {
            positive.inv().expect("powers of sqrt 3 are nonzero")
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc *= self;
        }
        acc
    }

    /// Sign of the real value (`Less`/`Equal`/`Greater` vs zero).
    pub fn sign(&self) -> Ordering {
        let (ra, sa) = (self.rat.is_positive(), self.sqrt3.is_positive());
        if self.rat.is_zero() {
            return if self.sqrt3.is_zero() {
                Ordering::Equal
            } else if sa {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        if self.sqrt3.is_zero() || ra == sa {
            return if ra { Ordering::Greater } else { Ordering::Less };
        }
        // Mixed signs: compare rat² against 3·sqrt3².
        match self.field_norm().cmp(&BigRational::zero()) {
            Ordering::Greater => {
                if ra {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            _ => {
                if sa {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.rat.to_f64().unwrap_or(f64::NAN);
        let s = self.sqrt3.to_f64().unwrap_or(f64::NAN);
        r + s * 3f64.sqrt()
    }

    /// Total bit size of the four stored integers; used by harnesses to
    /// track coefficient growth.
    pub fn bit_size(&self) -> u64 {
        self.rat.numer().bits()
            + self.rat.denom().bits()
            + self.sqrt3.numer().bits()
            + self.sqrt3.denom().bits()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt3.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.rat, -self.sqrt3)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.rat.clone(), -self.sqrt3.clone())
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.rat + &rhs.rat, &self.sqrt3 + &rhs.sqrt3)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.rat - &rhs.rat, &self.sqrt3 - &rhs.sqrt3)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let three = BigRational::from_integer(BigInt::from(3));
        Scalar::new(
            &self.rat * &rhs.rat + &three * &self.sqrt3 * &rhs.sqrt3,
            &self.rat * &rhs.sqrt3 + &self.sqrt3 * &rhs.rat,
        )
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero Scalar");
        self * &inv
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.rat += &rhs.rat;
        self.sqrt3 += &rhs.sqrt3;
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self += &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.rat -= &rhs.rat;
        self.sqrt3 -= &rhs.sqrt3;
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        *self -= &rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl MulAssign<Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: Scalar) {
        *self *= &rhs;
    }
}

impl DivAssign<&Scalar> for Scalar {
    fn div_assign(&mut self, rhs: &Scalar) {
        *self = &*self / rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sqrt3.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return write!(f, "{}*sqrt3", self.sqrt3);
        }
        if self.sqrt3.is_negative() {
            write!(f, "{}{}*sqrt3", self.rat, self.sqrt3)
        } else {
            write!(f, "{}+{}*sqrt3", self.rat, self.sqrt3)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    rat: String,
    sqrt3: String,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScalarRepr {
            rat: self.rat.to_string(),
            sqrt3: self.sqrt3.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = ScalarRepr::deserialize(deserializer)?;
        let rat = BigRational::from_str(&repr.rat)
            .map_err(|e| D::Error::custom(format!("bad rational {:?}: {}", repr.rat, e)))?;
        let sqrt3 = BigRational::from_str(&repr.sqrt3)
            .map_err(|e| D::Error::custom(format!("bad rational {:?}: {}", repr.sqrt3, e)))?;
        Ok(Scalar::new(rat, sqrt3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
        Scalar::new(
            BigRational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=9).into()),
            BigRational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=9).into()),
        )
    }

    #[test]
    fn ring_axioms_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let a = random_scalar(&mut rng);
            let b = random_scalar(&mut rng);
            let c = random_scalar(&mut rng);
            assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
            assert_eq!(&a * &b, &b * &a);
            assert_eq!((&a * &b) * &c, &a * (&b * &c));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let a = random_scalar(&mut rng);
            if a.is_zero() {
                continue;
            }
            assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn sqrt3_squares_to_three() {
        assert_eq!(Scalar::sqrt3() * Scalar::sqrt3(), Scalar::from_int(3));
        assert_eq!(Scalar::sqrt3_pow(-1), Scalar::sqrt3_ratio(1, 3));
        assert_eq!(Scalar::sqrt3_pow(2), Scalar::from_int(3));
        assert_eq!(Scalar::sqrt3_pow(-2), Scalar::ratio(1, 3));
        assert_eq!(
            Scalar::sqrt3_pow(-1) * Scalar::sqrt3_pow(3),
            Scalar::from_int(3)
        );
    }

    #[test]
    fn ordering_agrees_with_reals() {
        let a = Scalar::new(BigRational::new(7.into(), 4.into()), BigRational::zero());
        let b = Scalar::sqrt3();
        // 7/4 = 1.75 > sqrt(3) = 1.732...
        assert!(a > b);
        assert!(Scalar::ratio(-5, 3) < Scalar::zero());
        let c = Scalar::new(BigRational::new((-12).into(), 7.into()), BigRational::one());
        // -12/7 + sqrt(3) = 0.0177... > 0
        assert!(c.is_positive());
        assert!((c.to_f64() - 0.017_72).abs() < 1e-4);
    }

    #[test]
    fn serde_string_round_trip() {
        let a = Scalar::new(
            BigRational::new(22.into(), 7.into()),
            BigRational::new((-1).into(), 3.into()),
        );
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"rat":"22/7","sqrt3":"-1/3"}"#);
        let back: Scalar = serde_json::from_str(&json).unwrap();
        assert_eq!(a, back);
    }
}
