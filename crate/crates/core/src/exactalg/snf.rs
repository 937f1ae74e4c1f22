//! Smith normal form over `F[t]` and `F[t, t^-1]`.

use num_traits::{One, Zero};

use crate::exactalg::laurent::Laurent;
use crate::exactalg::matrix::Matrix;
use crate::exactalg::poly::Poly;
use crate::exactalg::tower::NonInvertible;
use crate::scalar::Field;

/// `u * m * v = diag(divisors, 0, ...)` with `divisors[i] | divisors[i+1]`,
/// every divisor monic and `u`, `v` invertible over the ring.
#[derive(Clone, Debug)]
pub struct SmithForm<F, R = Poly<F>> {
    pub divisors: Vec<Poly<F>>,
    pub u: Matrix<R>,
    pub v: Matrix<R>,
}

impl<F: Field, R> SmithForm<F, R> {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Divisors that are not units.
    pub fn nontrivial_divisors(&self) -> Vec<Poly<F>> {
        self.divisors.iter().filter(|d| !d.is_constant()).cloned().collect()
    }
}

/// Pivot rule: nonzero entry of least degree, then least column index,
/// then least row index.
pub fn smith_normal_form<F: Field>(m: &Matrix<Poly<F>>) -> Result<SmithForm<F>, NonInvertible> {
    let (r, c) = m.shape();
    let mut a = m.clone();
    let mut u = Matrix::<Poly<F>>::identity(r);
    let mut v = Matrix::<Poly<F>>::identity(c);
    let mut divisors = Vec::new();

    'diag: for k in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for j in k..c {
                for i in k..r {
                    if let Some(d) = a[(i, j)].degree() {
                        if best.is_none_or(|(bd, _, _)| d < bd) {
                            best = Some((d, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break 'diag };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = a[(k, k)].clone();
            let mut clean = true;
            for i in k + 1..r {
                if a[(i, k)].is_zero() {
                    continue;
                }
                let (q, rem) = a[(i, k)].div_rem(&pivot)?;
                row_axpy(&mut a, i, k, &q);
                row_axpy(&mut u, i, k, &q);
                clean &= rem.is_zero();
            }
            for j in k + 1..c {
                if a[(k, j)].is_zero() {
                    continue;
                }
                let (q, rem) = a[(k, j)].div_rem(&pivot)?;
                col_axpy(&mut a, j, k, &q);
                col_axpy(&mut v, j, k, &q);
                clean &= rem.is_zero();
            }
            if !clean {
                continue;
            }
            let mut offender = None;
            'search: for i in k + 1..r {
                for j in k + 1..c {
                    if !a[(i, j)].rem(&pivot)?.is_zero() {
                        offender = Some(i);
                        break 'search;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let minus_one = -Poly::<F>::one();
                    row_axpy(&mut a, k, i, &minus_one);
                    row_axpy(&mut u, k, i, &minus_one);
                }
                None => break,
            }
        }
        let li = a[(k, k)].lead().unwrap().try_inv()?;
        let scale = Poly::constant(li);
        for j in 0..c {
            a[(k, j)] = a[(k, j)].clone() * scale.clone();
        }
        for j in 0..r {
            u[(k, j)] = u[(k, j)].clone() * scale.clone();
        }
        divisors.push(a[(k, k)].clone());
    }
    Ok(SmithForm { divisors, u, v })
}

/// `row[dst] -= q * row[src]`
fn row_axpy<F: Field>(m: &mut Matrix<Poly<F>>, dst: usize, src: usize, q: &Poly<F>) {
    for j in 0..m.cols() {
        if m[(src, j)].is_zero() {
            continue;
        }
        m[(dst, j)] = m[(dst, j)].clone() - q.clone() * m[(src, j)].clone();
    }
}

/// `col[dst] -= q * col[src]`
fn col_axpy<F: Field>(m: &mut Matrix<Poly<F>>, dst: usize, src: usize, q: &Poly<F>) {
    for i in 0..m.rows() {
        if m[(i, src)].is_zero() {
            continue;
        }
        m[(i, dst)] = m[(i, dst)].clone() - m[(i, src)].clone() * q.clone();
    }
}

/// Smith form of a Laurent polynomial matrix: each row is first multiplied
/// by the power of `t` that clears negative exponents, and that unit row
/// scaling is folded into `u`. Divisors carry no factor of `t`.
pub fn smith_normal_form_laurent<F: Field>(
    m: &Matrix<Laurent<F>>,
) -> Result<SmithForm<F, Laurent<F>>, NonInvertible> {
    let (r, c) = m.shape();
    let shifts: Vec<i64> = (0..r)
        .map(|i| {
            m.row(i)
                .iter()
                .filter(|x| !x.is_zero())
                .map(|x| x.low_exponent())
                .min()
                .map_or(0, |e| -e)
        })
        .collect();
    let poly = Matrix::from_fn(r, c, |i, j| m[(i, j)].to_poly_shifted(shifts[i]));
    let s = smith_normal_form(&poly)?;
    let shift_diag = Matrix::diagonal(&shifts.iter().map(|&k| Laurent::t_pow(k)).collect::<Vec<_>>());
    let mut u = &s.u.map(|p| Laurent::from_poly(p.clone())) * &shift_diag;
    let v = s.v.map(|p| Laurent::from_poly(p.clone()));
    // powers of t are units here: strip them from the divisors
    let mut divisors = s.divisors;
    for (k, d) in divisors.iter_mut().enumerate() {
        let tz = d.trailing_zeros();
        if tz > 0 {
            *d = d.unshift(tz);
            let inv = Laurent::t_pow(-(tz as i64));
            for j in 0..r {
                u[(k, j)] = u[(k, j)].clone() * inv.clone();
            }
        }
    }
    Ok(SmithForm { divisors, u, v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    type Q = Poly<Rational>;

    fn p(cs: &[i64]) -> Q {
        Q::from_i64s(cs)
    }

    fn check(m: &Matrix<Q>, s: &SmithForm<Rational>) {
        let d = &(&s.u * m) * &s.v;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j && i < s.divisors.len() { s.divisors[i].clone() } else { Q::zero() };
                assert_eq!(d[(i, j)], want, "entry ({i},{j})");
            }
        }
        assert!(s.u.det_expand().degree() == Some(0));
        assert!(s.v.det_expand().degree() == Some(0));
    }

    #[test]
    fn already_diagonal() {
        let m = Matrix::from_rows(vec![vec![p(&[-1, 1]), Q::zero()], vec![Q::zero(), p(&[1, -2, 1])]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.divisors, vec![p(&[-1, 1]), p(&[1, -2, 1])]);
        check(&m, &s);
    }

    #[test]
    fn jordan_block_like() {
        // [[t, 1], [0, t]]: gcd of entries 1, determinant t^2
        let m = Matrix::from_rows(vec![vec![p(&[0, 1]), p(&[1])], vec![Q::zero(), p(&[0, 1])]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.divisors, vec![p(&[1]), p(&[0, 0, 1])]);
        check(&m, &s);
    }

    #[test]
    fn rank_deficient() {
        let m = Matrix::from_rows(vec![vec![p(&[1, 1]), p(&[2, 2])], vec![p(&[3, 3]), p(&[6, 6])]]);
        let s = smith_normal_form(&m).unwrap();
        assert_eq!(s.divisors, vec![p(&[1, 1])]);
        check(&m, &s);
    }

    #[test]
    fn laurent_rows_shifted() {
        let l = |k: i64| Laurent::<Rational>::t_pow(k);
        let m = Matrix::from_rows(vec![vec![l(-1) - Laurent::one() + l(1), -(l(-1) - Laurent::one() + l(1))]]);
        let s = smith_normal_form_laurent(&m).unwrap();
        assert_eq!(s.divisors, vec![p(&[1, -1, 1])]);
        let d = &(&s.u * &m) * &s.v;
        assert_eq!(d[(0, 0)], Laurent::from_poly(p(&[1, -1, 1])));
        assert!(d[(0, 1)].is_zero());
        let _ = int(0);
    }
}
