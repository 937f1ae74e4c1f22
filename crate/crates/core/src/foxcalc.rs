//! Fox calculus, the Alexander matrix and the structure of the Alexander
//! module.

use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cochain::ActionModule;
use crate::error::{Error, Result};
use crate::exactalg::factor::{gcd_free_basis, multiplicity};
use crate::exactalg::snf::smith_normal_form_laurent;
use crate::exactalg::{Laurent, Matrix};
use crate::knotio::{Presentation, Word};
use crate::scalar::{Field, Rational};
use crate::{QLaurent, QPoly};

/// One term `sign * prefix` of a Fox derivative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoxTerm {
    pub sign: i8,
    pub prefix: Word,
}

/// `d w / d x_j` as a formal sum of signed prefixes of `w`.
pub fn fox_derivative(w: &Word, j: usize) -> Vec<FoxTerm> {
    let letters = w.letters();
    let mut out = Vec::new();
    for (k, l) in letters.iter().enumerate() {
        if l.gen != j {
            continue;
        }
        if l.exp > 0 {
            out.push(FoxTerm { sign: 1, prefix: Word::from_letters(letters[..k].iter().copied()) });
        } else {
            out.push(FoxTerm { sign: -1, prefix: Word::from_letters(letters[..=k].iter().copied()) });
        }
    }
    out
}

/// All Fox derivatives of `w` pushed through a ring map, in one pass:
/// entry `j` is the image of `d w / d x_j`. `images[j]` and `inverses[j]`
/// are the images of `x_j` and `x_j^-1`.
pub fn fox_row<T>(w: &Word, images: &[T], inverses: &[T], one: &T, zero: &T) -> Vec<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let mut d = vec![zero.clone(); images.len()];
    let mut current = one.clone();
    for l in w.letters() {
        let j = l.gen;
        if l.exp > 0 {
            d[j] = d[j].clone() + current.clone();
            current = current * images[j].clone();
        } else {
            current = current * inverses[j].clone();
            d[j] = d[j].clone() - current.clone();
        }
    }
    d
}

/// Fox Jacobian of the relators through a module action: block `(r, j)`
/// (of size `dim x dim`) is the action of `d W_r / d S_j`. Its kernel is the
/// space of 1-cocycles, written as stacked generator values.
pub fn fox_jacobian<F: Field>(p: &Presentation, module: &ActionModule<F>) -> Matrix<F> {
    let m = module.dim;
    let g = p.num_generators();
    let one = Matrix::identity(m);
    let zero = Matrix::zeros(m, m);
    let mut out = Matrix::zeros(p.num_relators() * m, g * m);
    for (r, w) in p.relators.iter().enumerate() {
        let row = fox_row(w, &module.gens, &module.invs, &one, &zero);
        for (j, block) in row.iter().enumerate() {
            for a in 0..m {
                for b in 0..m {
                    out[(r * m + a, j * m + b)] = block[(a, b)].clone();
                }
            }
        }
    }
    out
}

/// Abelianized Fox matrix: entry `(r, j)` is `d W_r / d S_j` under
/// `S_j -> t^{h(S_j)}`.
pub fn alexander_matrix(p: &Presentation) -> Matrix<QLaurent> {
    let images: Vec<QLaurent> = p.h.iter().map(|&e| Laurent::t_pow(e)).collect();
    let inverses: Vec<QLaurent> = p.h.iter().map(|&e| Laurent::t_pow(-e)).collect();
    let rows: Vec<Vec<QLaurent>> = p
        .relators
        .iter()
        .map(|w| fox_row(w, &images, &inverses, &QLaurent::one(), &QLaurent::zero()))
        .collect();
    if rows.is_empty() {
        return Matrix::zeros(0, p.num_generators());
    }
    Matrix::from_rows(rows)
}

/// The Alexander matrix with the meridian column deleted.
pub fn reduced_alexander_matrix(p: &Presentation) -> Matrix<QLaurent> {
    let a = alexander_matrix(p);
    let rows: Vec<usize> = (0..a.rows()).collect();
    let cols: Vec<usize> = (0..a.cols()).filter(|&j| j != p.meridian).collect();
    a.submatrix(&rows, &cols)
}

/// Nonunit invariant factors of the Alexander module (monic, increasing
/// in the divisibility order).
pub fn alexander_divisors(p: &Presentation) -> Result<Vec<QPoly>> {
    let m = reduced_alexander_matrix(p);
    let s = smith_normal_form_laurent(&m)?;
    if s.rank() < m.cols() {
        return Err(Error::NotAKnotGroup(format!(
            "reduced Alexander matrix has rank {} < {}; the Alexander module is not torsion",
            s.rank(),
            m.cols()
        )));
    }
    Ok(s.nontrivial_divisors())
}

/// Canonical Alexander polynomial: integer, primitive, no negative powers,
/// positive leading coefficient.
pub fn alexander_polynomial(p: &Presentation) -> Result<QPoly> {
    let divisors = alexander_divisors(p)?;
    canonical_from_divisors(&divisors)
}

fn canonical_from_divisors(divisors: &[QPoly]) -> Result<QPoly> {
    let prod = divisors.iter().fold(QPoly::one(), |acc, d| acc * d.clone());
    let delta = Laurent::from_poly(prod).canonical();
    let at_one = delta.eval(&Rational::one());
    if at_one != Rational::one() && at_one != -Rational::one() {
        return Err(Error::NotAKnotGroup(format!("Alexander polynomial {delta} has value {at_one} at t = 1")));
    }
    Ok(delta)
}

/// Elementary divisor structure grouped by a coprime basis of factors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionFactor {
    /// Monic, squarefree; every complex root of it has the same exponents.
    #[serde(serialize_with = "ser_poly")]
    pub factor: QPoly,
    /// Positive exponents of `factor` in the invariant factors that contain
    /// it, in divisibility order.
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionDecomposition {
    #[serde(serialize_with = "ser_polys")]
    pub divisors: Vec<QPoly>,
    pub factors: Vec<TorsionFactor>,
    /// `delta = unit * prod factor^(sum exponents)`
    #[serde(serialize_with = "ser_rational")]
    pub unit: Rational,
    #[serde(serialize_with = "ser_poly")]
    pub delta: QPoly,
}

fn ser_poly<S: serde::Serializer>(p: &QPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

fn ser_polys<S: serde::Serializer>(ps: &[QPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(|p| p.to_string()))
}

fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl TorsionDecomposition {
    pub fn from_divisors(divisors: Vec<QPoly>) -> Result<Self> {
        let delta = canonical_from_divisors(&divisors)?;
        let basis = gcd_free_basis(&divisors)?;
        let mut factors = Vec::with_capacity(basis.len());
        for b in basis {
            let exponents = divisors
                .iter()
                .map(|d| multiplicity(d, &b))
                .collect::<std::result::Result<Vec<u32>, _>>()?
                .into_iter()
                .filter(|&e| e > 0)
                .collect();
            factors.push(TorsionFactor { factor: b, exponents });
        }
        let unit = delta.lead().cloned().unwrap_or_else(Rational::one);
        Ok(TorsionDecomposition { divisors, factors, unit, delta })
    }

    /// Exponents of the invariant factors at the roots of a squarefree
    /// polynomial `p`, one list per coprime piece of `p`; a piece not
    /// dividing the Alexander polynomial gets an empty list.
    pub fn exponents_at(&self, p: &QPoly) -> Result<Vec<(QPoly, Vec<u32>)>> {
        let mut inputs = self.divisors.clone();
        inputs.push(p.clone());
        let basis = gcd_free_basis(&inputs)?;
        let mut out = Vec::new();
        for b in basis {
            if p.div_exact(&b)?.is_none() {
                continue;
            }
            let mut ex = Vec::new();
            for d in &self.divisors {
                let e = multiplicity(d, &b)?;
                if e > 0 {
                    ex.push(e);
                }
            }
            out.push((b, ex));
        }
        Ok(out)
    }

    /// Is the torsion at every root of `p` cyclic of order `(t - alpha)^(n-1)`?
    pub fn check_hypothesis(&self, p: &QPoly, n: usize) -> Result<bool> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("representation size must be at least 2, got {n}")));
        }
        if p.degree().is_none_or(|d| d == 0) || !p.is_squarefree()? {
            return Err(Error::InvalidArgument(format!("{p} is not a squarefree nonconstant polynomial")));
        }
        if !p.eval(&Rational::one()).is_zero() {
            let pieces = self.exponents_at(p)?;
            return Ok(pieces.iter().all(|(_, ex)| ex.len() == 1 && ex[0] as usize == n - 1));
        }
        Ok(false)
    }

    /// Factors paired with their reciprocals carry the same exponents.
    pub fn blanchfield_symmetric(&self) -> Result<bool> {
        for f in &self.factors {
            let recip = f.factor.reciprocal().monic()?;
            for g in &self.factors {
                if !g.factor.gcd(&recip)?.is_constant() && g.exponents != f.exponents {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn torsion_decomposition(p: &Presentation) -> Result<TorsionDecomposition> {
    TorsionDecomposition::from_divisors(alexander_divisors(p)?)
}

pub fn check_hypothesis(p: &Presentation, factor: &QPoly, n: usize) -> Result<bool> {
    torsion_decomposition(p)?.check_hypothesis(factor, n)
}

pub fn blanchfield_symmetry_check(p: &Presentation) -> Result<bool> {
    torsion_decomposition(p)?.blanchfield_symmetric()
}

/// `Delta(t) = unit * t^k * Delta(t^-1)` for some unit.
pub fn is_symmetric(delta: &QPoly) -> bool {
    let r = delta.reciprocal();
    r == *delta || r == -delta.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::parse_presentation;

    fn trefoil() -> Presentation {
        parse_presentation(r#"{"name": "3_1", "generators": ["a", "b"], "relators": ["a b a B A B"], "meridian": "a"}"#)
            .unwrap()
    }

    fn p(cs: &[i64]) -> QPoly {
        QPoly::from_i64s(cs)
    }

    #[test]
    fn fox_basics() {
        let ab = Word::from_powers(&[(0, 1), (1, 1)]);
        assert_eq!(fox_derivative(&ab, 0), vec![FoxTerm { sign: 1, prefix: Word::identity() }]);
        let ainv = Word::from_powers(&[(0, -1)]);
        assert_eq!(fox_derivative(&ainv, 0), vec![FoxTerm { sign: -1, prefix: ainv.clone() }]);
    }

    #[test]
    fn trefoil_matrix() {
        let a = alexander_matrix(&trefoil());
        assert_eq!(a.shape(), (1, 2));
        // d/da (a b a B A B) = 1 + ab - abaB^-1A^-1 -> 1 + t^2 - t
        assert_eq!(a[(0, 0)], Laurent::from_poly(p(&[1, -1, 1])));
        assert_eq!(a[(0, 0)].clone() + a[(0, 1)].clone(), QLaurent::zero());
    }

    #[test]
    fn trefoil_delta_and_hypothesis() {
        let d = torsion_decomposition(&trefoil()).unwrap();
        assert_eq!(d.delta, p(&[1, -1, 1]));
        assert_eq!(d.factors, vec![TorsionFactor { factor: p(&[1, -1, 1]), exponents: vec![1] }]);
        assert!(d.check_hypothesis(&p(&[1, -1, 1]), 2).unwrap());
        assert!(!d.check_hypothesis(&p(&[1, -1, 1]), 3).unwrap());
        assert!(d.blanchfield_symmetric().unwrap());
    }

    #[test]
    fn unknot() {
        let u = parse_presentation(r#"{"name": "0_1", "generators": ["a"], "relators": [], "meridian": "a"}"#).unwrap();
        assert_eq!(alexander_matrix(&u).shape(), (0, 1));
        let d = torsion_decomposition(&u).unwrap();
        assert_eq!(d.delta, p(&[1]));
        assert!(!d.check_hypothesis(&p(&[1, -1, 1]), 2).unwrap());
    }

    #[test]
    fn symmetry_helper() {
        assert!(is_symmetric(&p(&[2, -3, 2])));
        assert!(!is_symmetric(&p(&[1, 2])));
    }
}
