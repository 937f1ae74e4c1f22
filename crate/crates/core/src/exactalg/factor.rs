//! Squarefree decomposition and coprime bases over a field of
//! characteristic zero.

use num_traits::Zero;

use crate::exactalg::poly::Poly;
use crate::exactalg::tower::NonInvertible;
use crate::scalar::Field;

/// Yun's algorithm: `p = c * prod f_i^i` with `f_i` monic, squarefree and
/// pairwise coprime. Returns the nonconstant `(f_i, i)` in increasing `i`.
pub fn squarefree_decomposition<F: Field>(p: &Poly<F>) -> Result<Vec<(Poly<F>, u32)>, NonInvertible> {
    let mut out = Vec::new();
    if p.degree().is_none_or(|d| d == 0) {
        return Ok(out);
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp)?;
    let mut b = p.div_exact(&a0)?.expect("gcd divides");
    let mut c = dp.div_exact(&a0)?.expect("gcd divides");
    let mut d = c - b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = b.gcd(&d)?;
        if !a.is_constant() {
            out.push((a.monic()?, i));
        }
        b = b.div_exact(&a)?.expect("gcd divides");
        c = d.div_exact(&a)?.expect("gcd divides");
        d = c - b.derivative();
        i += 1;
    }
    Ok(out)
}

/// Monic squarefree part.
pub fn squarefree_part<F: Field>(p: &Poly<F>) -> Result<Poly<F>, NonInvertible> {
    let mut acc = Poly::constant(F::one());
    for (f, _) in squarefree_decomposition(p)? {
        acc = acc * f;
    }
    Ok(acc)
}

/// A list of monic, squarefree, pairwise coprime polynomials such that every
/// input is a unit times a product of powers of them. Order follows first
/// appearance.
pub fn gcd_free_basis<F: Field>(polys: &[Poly<F>]) -> Result<Vec<Poly<F>>, NonInvertible> {
    let mut basis: Vec<Poly<F>> = Vec::new();
    for p in polys {
        for (f, _) in squarefree_decomposition(p)? {
            let mut f = f;
            let mut next = Vec::with_capacity(basis.len() + 2);
            for b in basis {
                if f.is_constant() {
                    next.push(b);
                    continue;
                }
                let g = f.gcd(&b)?;
                if g.is_constant() {
                    next.push(b);
                    continue;
                }
                let rest = b.div_exact(&g)?.expect("gcd divides");
                f = f.div_exact(&g)?.expect("gcd divides");
                next.push(g);
                if !rest.is_constant() {
                    next.push(rest.monic()?);
                }
            }
            if !f.is_constant() {
                next.push(f.monic()?);
            }
            basis = next;
        }
    }
    Ok(basis)
}

/// Largest `e` with `b^e | p` (`b` nonconstant, `p` nonzero).
pub fn multiplicity<F: Field>(p: &Poly<F>, b: &Poly<F>) -> Result<u32, NonInvertible> {
    assert!(!b.is_constant() && !p.is_zero());
    let mut e = 0;
    let mut q = p.clone();
    while let Some(next) = q.div_exact(b)? {
        q = next;
        e += 1;
    }
    Ok(e)
}
