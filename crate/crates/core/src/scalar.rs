//! Numeric backends for curvature arithmetic.
//!
//! Everything downstream of a seed quadruple is a chain of nonnegative
//! multiply-adds, so three backends cover all uses: arbitrary-precision
//! integers (always exact), 128-bit integers (exact until they loudly
//! overflow), and `f64` for non-integral seeds.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Selects the arithmetic used by counting and matrix operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Arbitrary-precision integers. Requires an integral quadruple.
    ExactInt,
    /// 128-bit integers with overflow detection. Requires an integral quadruple.
    WideInt,
    /// Double-precision floats.
    Float64,
}

impl Backend {
    /// `WideInt` when the vector has an exact integer representation,
    /// `Float64` otherwise.
    pub fn auto_for(v: &crate::curvature::CurvatureVector) -> Backend {
        if v.exact().is_some() {
            Backend::WideInt
        } else {
            Backend::Float64
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-int" | "big" => Ok(Backend::ExactInt),
            "wide" | "wide-int" | "i128" | "u128" => Ok(Backend::WideInt),
            "float" | "float64" | "f64" => Ok(Backend::Float64),
            other => Err(Error::InvalidArgument(format!(
                "unknown backend {other:?}; expected exact, wide or float"
            ))),
        }
    }
}

/// Scalar arithmetic required by the curvature recursion.
///
/// Additions and multiplications are checked: integer backends surface
/// overflow instead of wrapping, floats never fail. `sum3` is a
/// permutation-invariant three-term sum so that relabeling the members of a
/// triple relabels every derived value bit-for-bit, even for floats.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug + Send + Sync + 'static {
    const BACKEND: Backend;

    fn from_u32(v: u32) -> Self;
    fn from_u128(v: u128) -> Self;
    /// Conversion from a float; integer backends truncate. Callers are
    /// responsible for only passing integral values to integer backends.
    fn from_f64_lossy(x: f64) -> Self;
    fn checked_add(&self, rhs: &Self, context: &'static str) -> Result<Self>;
    fn checked_mul(&self, rhs: &Self, context: &'static str) -> Result<Self>;
    fn total_cmp(&self, rhs: &Self) -> Ordering;
    /// Whether `self <= bound`, exact for integer backends.
    fn le_bound(&self, bound: f64) -> bool;
    fn to_f64(&self) -> f64;

    /// Sum of three terms, invariant under any permutation of the arguments.
    fn sum3(a: &Self, b: &Self, c: &Self) -> Result<Self>;

    fn is_zero(&self) -> bool;
}

impl Scalar for u128 {
    const BACKEND: Backend = Backend::WideInt;

    fn from_u32(v: u32) -> Self {
        v as u128
    }

    fn from_u128(v: u128) -> Self {
        v
    }

    fn from_f64_lossy(x: f64) -> Self {
        debug_assert!(x >= 0.0 && x.fract() == 0.0);
        x as u128
    }

    fn checked_add(&self, rhs: &Self, context: &'static str) -> Result<Self> {
        u128::checked_add(*self, *rhs).ok_or(Error::Overflow { context })
    }

    fn checked_mul(&self, rhs: &Self, context: &'static str) -> Result<Self> {
        u128::checked_mul(*self, *rhs).ok_or(Error::Overflow { context })
    }

    fn total_cmp(&self, rhs: &Self) -> Ordering {
        self.cmp(rhs)
    }

    fn le_bound(&self, bound: f64) -> bool {
        if bound.is_nan() || bound < 0.0 {
            return false;
        }
        if bound >= 3.402_823_669_209_385e38 {
            return true;
        }
        // casting a positive float truncates toward zero, so this compares
        // against floor(bound), which is exact for integer self
        *self <= bound as u128
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn sum3(a: &Self, b: &Self, c: &Self) -> Result<Self> {
        let ab = Scalar::checked_add(a, b, "sum3")?;
        Scalar::checked_add(&ab, c, "sum3")
    }

    fn is_zero(&self) -> bool {
        *self == 0
    }
}

impl Scalar for BigUint {
    const BACKEND: Backend = Backend::ExactInt;

    fn from_u32(v: u32) -> Self {
        BigUint::from(v)
    }

    fn from_u128(v: u128) -> Self {
        BigUint::from(v)
    }

    fn from_f64_lossy(x: f64) -> Self {
        debug_assert!(x >= 0.0 && x.fract() == 0.0);
        BigUint::from_f64(x).unwrap_or_default()
    }

    fn checked_add(&self, rhs: &Self, _context: &'static str) -> Result<Self> {
        Ok(self + rhs)
    }

    fn checked_mul(&self, rhs: &Self, _context: &'static str) -> Result<Self> {
        Ok(self * rhs)
    }

    fn total_cmp(&self, rhs: &Self) -> Ordering {
        self.cmp(rhs)
    }

    fn le_bound(&self, bound: f64) -> bool {
        if bound.is_nan() || bound < 0.0 {
            return false;
        }
        if bound.is_infinite() {
            return true;
        }
        match BigUint::from_f64(bound.floor()) {
            Some(b) => *self <= b,
            None => false,
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::INFINITY)
    }

    fn sum3(a: &Self, b: &Self, c: &Self) -> Result<Self> {
        Ok(a + b + c)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float64;

    fn from_u32(v: u32) -> Self {
        v as f64
    }

    fn from_u128(v: u128) -> Self {
        v as f64
    }

    fn from_f64_lossy(x: f64) -> Self {
        x
    }

    fn checked_add(&self, rhs: &Self, _context: &'static str) -> Result<Self> {
        Ok(self + rhs)
    }

    fn checked_mul(&self, rhs: &Self, _context: &'static str) -> Result<Self> {
        Ok(self * rhs)
    }

    fn total_cmp(&self, rhs: &Self) -> Ordering {
        f64::total_cmp(self, rhs)
    }

    fn le_bound(&self, bound: f64) -> bool {
        *self <= bound
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sum3(a: &Self, b: &Self, c: &Self) -> Result<Self> {
        // sort before summing; float addition commutes but does not
        // associate, and the sorted order is permutation-invariant
        let mut t = [*a, *b, *c];
        t.sort_by(f64::total_cmp);
        Ok(t[0] + t[1] + t[2])
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// Integer square root of a u128, rounded down.
pub(crate) fn isqrt_u128(n: u128) -> u128 {
    n.isqrt()
}
