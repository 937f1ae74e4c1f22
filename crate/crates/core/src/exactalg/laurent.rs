//! Laurent polynomials `F[t, t^-1]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactalg::poly::{write_poly, Poly};
use crate::exactalg::tower::NonInvertible;
use crate::scalar::{Field, Rational};

/// `t^offset * body` where `body` has nonzero constant term (or is zero,
/// in which case `offset` is 0). Stored support therefore equals the true
/// support.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<F> {
    offset: i64,
    body: Poly<F>,
}

impl<F: Field> Laurent<F> {
    pub fn from_poly(p: Poly<F>) -> Self {
        Self::with_offset(p, 0)
    }

    pub fn with_offset(p: Poly<F>, offset: i64) -> Self {
        if p.is_zero() {
            return Self::zero();
        }
        let tz = p.trailing_zeros();
        Laurent { offset: offset + tz as i64, body: p.unshift(tz) }
    }

    /// `c * t^k`
    pub fn monomial(c: F, k: i64) -> Self {
        Self::with_offset(Poly::constant(c), k)
    }

    pub fn t_pow(k: i64) -> Self {
        Self::monomial(F::one(), k)
    }

    pub fn constant(c: F) -> Self {
        Self::monomial(c, 0)
    }

    /// Lowest exponent with nonzero coefficient (0 for zero).
    pub fn low_exponent(&self) -> i64 {
        self.offset
    }

    pub fn high_exponent(&self) -> i64 {
        self.offset + self.body.degree().unwrap_or(0) as i64
    }

    pub fn coeff(&self, e: i64) -> F {
        if e < self.offset {
            F::zero()
        } else {
            self.body.coeff((e - self.offset) as usize)
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        self.body
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (k as i64 + self.offset, c))
    }

    /// The polynomial part after multiplying by `t^-low_exponent`.
    pub fn body(&self) -> &Poly<F> {
        &self.body
    }

    /// Ordinary polynomial `t^k * self`, requiring `k + low_exponent >= 0`.
    pub fn to_poly_shifted(&self, k: i64) -> Poly<F> {
        let e = self.offset + k;
        assert!(e >= 0 || self.is_zero(), "negative exponent after shift");
        self.body.shift(e.max(0) as usize)
    }

    /// Is this `c t^k` with `c` invertible?
    pub fn is_unit(&self) -> bool {
        self.body.degree() == Some(0)
    }

    /// Substitute `t -> t^-1`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let deg = self.body.degree().unwrap() as i64;
        Self::with_offset(self.body.reciprocal(), -(self.offset + deg))
    }

    pub fn eval(&self, x: &F) -> Result<F, NonInvertible> {
        Ok(self.body.eval(x) * x.try_powi(self.offset)?)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Laurent<G> {
        Laurent::with_offset(self.body.map(f), self.offset)
    }
}

impl Laurent<Rational> {
    /// Canonical representative of the associate class: no negative or
    /// spurious powers of `t`, primitive integer coefficients and positive
    /// leading coefficient.
    pub fn canonical(&self) -> Poly<Rational> {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = BigInt::one();
        for c in self.body.coeffs() {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .body
            .coeffs()
            .iter()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            g = -g;
        }
        Poly::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect())
    }
}

impl<F: Field> Zero for Laurent<F> {
    fn zero() -> Self {
        Laurent { offset: 0, body: Poly::zero() }
    }

    fn is_zero(&self) -> bool {
        self.body.is_zero()
    }
}

impl<F: Field> One for Laurent<F> {
    fn one() -> Self {
        Self::constant(F::one())
    }
}

impl<F: Field> Add for Laurent<F> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let low = self.offset.min(rhs.offset);
        let a = self.body.shift((self.offset - low) as usize);
        let b = rhs.body.shift((rhs.offset - low) as usize);
        Self::with_offset(a + b, low)
    }
}

impl<F: Field> Neg for Laurent<F> {
    type Output = Self;

    fn neg(self) -> Self {
        Laurent { offset: self.offset, body: -self.body }
    }
}

impl<F: Field> Sub for Laurent<F> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for Laurent<F> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::with_offset(self.body * rhs.body, self.offset + rhs.offset)
    }
}

impl<F: Field + fmt::Display> fmt::Display for Laurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.body.coeffs(), self.offset, "t")
    }
}
