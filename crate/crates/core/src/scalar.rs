//! Exact scalar types shared by the symbolic and matrix layers.
//!
//! Nothing in this crate touches floating point. L-factor arguments live in
//! `Ratio<I>` for an exact integer type `I`, and Weyl matrices are built over
//! any exact ring.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer type usable as the numerator/denominator of exact rationals.
pub trait ExactInt:
    Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> ExactInt for T where
    T: Integer
        + Signed
        + Clone
        + Hash
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Exact ring scalar for matrix arithmetic. Division is only ever used where
/// it is known to be exact (fraction-free elimination).
pub trait ExactRing:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
}

impl<T> ExactRing for T where
    T: Clone
        + PartialEq
        + Debug
        + Display
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Div<Output = T>
        + Send
        + Sync
        + 'static
{
}

/// Builds `num/den` in `Ratio<I>` from machine integers.
///
/// Panics if `I` cannot represent the inputs or `den == 0`.
pub fn ratio<I: ExactInt>(num: i64, den: i64) -> Ratio<I> {
    let n = I::from_i64(num).expect("numerator out of range");
    let d = I::from_i64(den).expect("denominator out of range");
    Ratio::new(n, d)
}

/// Lifts a machine integer into `Ratio<I>`.
pub fn int<I: ExactInt>(n: i64) -> Ratio<I> {
    Ratio::from_integer(I::from_i64(n).expect("integer out of range"))
}

/// Renders a rational without a denominator when it is an integer.
pub fn fmt_ratio<I: ExactInt>(r: &Ratio<I>) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Wire form of a rational: `{"num": .., "den": ..}` with `den > 0` and
/// `gcd(num, den) = 1`.
#[derive(Serialize, Deserialize)]
struct RatRepr<I> {
    num: I,
    den: I,
}

/// Serde adapter for `Ratio<I>` fields (`#[serde(with = "crate::scalar::rational")]`).
pub mod rational {
    use super::*;

    pub fn serialize<I, S>(r: &Ratio<I>, s: S) -> Result<S::Ok, S::Error>
    where
        I: ExactInt + Serialize,
        S: Serializer,
    {
        RatRepr { num: r.numer().clone(), den: r.denom().clone() }.serialize(s)
    }

    pub fn deserialize<'de, I, D>(d: D) -> Result<Ratio<I>, D::Error>
    where
        I: ExactInt + Deserialize<'de>,
        D: Deserializer<'de>,
    {
        let repr = RatRepr::<I>::deserialize(d)?;
        if !repr.den.is_positive() {
            return Err(serde::de::Error::custom("rational denominator must be positive"));
        }
        if !repr.num.gcd(&repr.den).is_one() {
            return Err(serde::de::Error::custom("rational must be in lowest terms"));
        }
        Ok(Ratio::new_raw(repr.num, repr.den))
    }
}

/// Serde adapter for `Vec<Ratio<I>>`.
pub mod rational_vec {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(transparent)]
    struct Wrapped<I: ExactInt + Serialize + for<'a> Deserialize<'a>>(
        #[serde(with = "super::rational")] Ratio<I>,
    );

    pub fn serialize<I, S>(v: &[Ratio<I>], s: S) -> Result<S::Ok, S::Error>
    where
        I: ExactInt + Serialize + for<'a> Deserialize<'a>,
        S: Serializer,
    {
        s.collect_seq(v.iter().map(|r| Wrapped(r.clone())))
    }

    pub fn deserialize<'de, I, D>(d: D) -> Result<Vec<Ratio<I>>, D::Error>
    where
        I: ExactInt + Serialize + for<'a> Deserialize<'a>,
        D: Deserializer<'de>,
    {
        let v = Vec::<Wrapped<I>>::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}
