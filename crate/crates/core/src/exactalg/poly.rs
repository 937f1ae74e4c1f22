//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::exactalg::tower::NonInvertible;
use crate::scalar::Field;

/// Coefficients are stored low degree first with no trailing zeros, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn x() -> Self {
        Poly { coeffs: vec![F::zero(), F::one()] }
    }

    /// `c * t^k`
    pub fn monomial(c: F, k: usize) -> Self {
        let mut coeffs = vec![F::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| F::from_i64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F> {
        self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Monic associate; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> Result<Self, NonInvertible> {
        match self.lead() {
            None => Ok(self.clone()),
            Some(l) => Ok(self.scale(&l.try_inv()?)),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![F::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Largest `k` with `t^k` dividing `self` (0 for the zero polynomial).
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Division by `t^k`, dropping any lower terms.
    pub fn unshift(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    /// `t^deg * p(1/t)`.
    pub fn reciprocal(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc * self.clone())
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self), NonInvertible> {
        let dd = d.degree().ok_or(NonInvertible::Zero)?;
        let lead_inv = d.lead().unwrap().try_inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![F::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                rem[idx] = rem[idx].clone() - c.clone() * di.clone();
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self, NonInvertible> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Option<Self>, NonInvertible> {
        let (q, r) = self.div_rem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    /// Monic gcd; `gcd(a, 0) = monic(a)` and `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Result<Self, NonInvertible> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, u)` with `s*self + u*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Self) -> Result<(Self, Self, Self), NonInvertible> {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut u0, mut u1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            r0 = std::mem::replace(&mut r1, r);
            let s = s0 - q.clone() * s1.clone();
            s0 = std::mem::replace(&mut s1, s);
            let u = u0 - q * u1.clone();
            u0 = std::mem::replace(&mut u1, u);
        }
        match r0.lead() {
            None => Ok((r0, s0, u0)),
            Some(l) => {
                let li = l.try_inv()?;
                Ok((r0.scale(&li), s0.scale(&li), u0.scale(&li)))
            }
        }
    }

    pub fn is_squarefree(&self) -> Result<bool, NonInvertible> {
        Ok(self.gcd(&self.derivative())?.is_constant())
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<F: Field> Zero for Poly<F> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Field> One for Poly<F> {
    fn one() -> Self {
        Poly { coeffs: vec![F::one()] }
    }
}

impl<F: Field> Add for Poly<F> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Self::new(long)
    }
}

impl<F: Field> Neg for Poly<F> {
    type Output = Self;

    fn neg(self) -> Self {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<F: Field> Sub for Poly<F> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> Mul for Poly<F> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

/// Polynomials over a field form a ring; only the [`Field`] operations that
/// Smith normal form needs are meaningful here, inversion succeeds on
/// nonzero constants only.
impl<F: Field> Poly<F> {
    pub fn try_inv_unit(&self) -> Result<Self, NonInvertible> {
        match self.degree() {
            Some(0) => Ok(Self::constant(self.coeffs[0].try_inv()?)),
            _ => Err(NonInvertible::Zero),
        }
    }
}

impl<F: Field + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, 0, "t")
    }
}

pub(crate) fn write_poly<F: Field + fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[F],
    offset: i64,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = k as i64 + offset;
        let s = c.to_string();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        };
        let compound = body.contains(['+', ' ']) || body[1..].contains('-');
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let body = if compound { format!("({body})") } else { body };
        match e {
            0 => write!(f, "{body}")?,
            _ => {
                if body != "1" {
                    write!(f, "{body}*")?;
                }
                if e == 1 {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{e}")?;
                }
            }
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    type Q = Poly<Rational>;

    fn p(cs: &[i64]) -> Q {
        Q::from_i64s(cs)
    }

    #[test]
    fn gcd_common_factor() {
        // gcd(t^2 - 1, t - 1) = t - 1
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])).unwrap(), p(&[-1, 1]));
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let a = p(&[2, 4, 6]);
        assert_eq!(a.gcd(&Q::zero()).unwrap(), a.monic().unwrap());
        assert_eq!(a.monic().unwrap().lead().cloned(), Some(int(1)));
    }

    #[test]
    fn gcd_coprime_pair() {
        // t^2 - t + 1 and t^2 - 3t + 1 differ by 2t, and t does not divide either
        assert_eq!(p(&[1, -1, 1]).gcd(&p(&[1, -3, 1])).unwrap(), Q::one());
    }

    #[test]
    fn xgcd_bezout() {
        let a = p(&[1, -1, 1]);
        let b = p(&[3, 0, 0, 1]);
        let (g, s, u) = a.xgcd(&b).unwrap();
        assert_eq!(s * a + u * b, g);
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = p(&[5, -3, 0, 2, 7]);
        let d = p(&[1, 2, 3]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q * d + r, a);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, 1]).to_string(), "t^2 - t + 1");
        assert_eq!(p(&[2, -3, 2]).to_string(), "2*t^2 - 3*t + 2");
        assert_eq!(Q::zero().to_string(), "0");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
    }

    #[test]
    fn squarefree() {
        assert!(p(&[1, -1, 1]).is_squarefree().unwrap());
        assert!(!(p(&[1, -1, 1]) * p(&[1, -1, 1])).is_squarefree().unwrap());
    }
}
