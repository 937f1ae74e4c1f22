//! Scalar abstraction shared by the exact and the floating point paths.
//!
//! Everything in [`crate::exactalg`] is written against [`Field`]. The exact
//! instances are [`Rational`] and [`crate::exactalg::tower::Alg`]; `f64` and
//! [`Complex64`] are provided so the same elimination code can run on
//! floats, with magnitude-based pivoting.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactalg::tower::NonInvertible;

pub type Rational = BigRational;

/// Absolute threshold below which a float is treated as zero by elimination.
pub const FLOAT_ZERO: f64 = 1e-12;

pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    /// Multiplicative inverse. On dynamically evaluated algebraic numbers a
    /// zero divisor surfaces as [`NonInvertible::Split`].
    fn try_inv(&self) -> Result<Self, NonInvertible>;

    fn try_div(&self, rhs: &Self) -> Result<Self, NonInvertible> {
        Ok(self.clone() * rhs.try_inv()?)
    }

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    /// Pivot weight for inexact fields; `None` means any nonzero pivot is exact.
    fn magnitude(&self) -> Option<f64> {
        None
    }

    /// Zero test used by elimination; floats use [`FLOAT_ZERO`].
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// `self^e` for any integer exponent.
    fn try_powi(&self, e: i64) -> Result<Self, NonInvertible> {
        let base = if e < 0 { self.try_inv()? } else { self.clone() };
        let mut acc = Self::one();
        let mut sq = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * sq.clone();
            }
            sq = sq.clone() * sq;
            k >>= 1;
        }
        Ok(acc)
    }
}

impl Field for Rational {
    fn try_inv(&self) -> Result<Self, NonInvertible> {
        if self.is_zero() {
            Err(NonInvertible::Zero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
}

impl Field for f64 {
    fn try_inv(&self) -> Result<Self, NonInvertible> {
        if *self == 0.0 {
            Err(NonInvertible::Zero)
        } else {
            Ok(1.0 / self)
        }
    }

    fn from_rational(q: &Rational) -> Self {
        rational_to_f64(q)
    }

    fn magnitude(&self) -> Option<f64> {
        Some(self.abs())
    }

    fn is_negligible(&self) -> bool {
        self.abs() < FLOAT_ZERO
    }
}

impl Field for Complex64 {
    fn try_inv(&self) -> Result<Self, NonInvertible> {
        if self.is_zero() {
            Err(NonInvertible::Zero)
        } else {
            Ok(self.inv())
        }
    }

    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }

    fn magnitude(&self) -> Option<f64> {
        Some(self.norm())
    }

    fn is_negligible(&self) -> bool {
        self.norm() < FLOAT_ZERO
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerators/denominators: scale down before dividing
        _ => {
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900) as usize;
            let n = (q.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::MAX);
            if q.is_negative() {
                -n / d
            } else {
                n / d
            }
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Generalized binomial coefficient `C(m, k)` for any integer `m` and `k >= 0`.
pub fn binomial(m: i64, k: u32) -> Rational {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc *= BigInt::from(m - i);
    }
    let mut fact = BigInt::one();
    for i in 1..=k as i64 {
        fact *= BigInt::from(i);
    }
    Rational::new(acc, fact)
}
