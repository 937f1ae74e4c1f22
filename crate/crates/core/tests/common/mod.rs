#![allow(dead_code)]

use knotrep::exactalg::{Matrix, Poly};
use knotrep::knotio::Presentation;
use knotrep::{QPoly, Rational};
use num_traits::{One, Zero};

/// Alexander polynomial as the gcd of all maximal minors of the full
/// abelianized Fox matrix, computed by cofactor expansion. Shares no code
/// with the Smith form path beyond the Fox matrix entries themselves,
/// which are recomputed here from prefix sums.
pub fn minor_gcd_delta(p: &Presentation) -> QPoly {
    if p.num_relators() == 0 {
        return QPoly::one();
    }
    let k = p.num_relators().min(p.num_generators() - 1);
    minor_gcd(p, k)
}

/// Monic gcd of all `k x k` minors of the Fox matrix, with every entry
/// shifted into `Q[t]` by a common power of `t`. Cofactor expansion only.
pub fn minor_gcd(p: &Presentation, k: usize) -> QPoly {
    let g = p.num_generators();
    let r = p.num_relators();
    if k == 0 {
        return QPoly::one();
    }
    // entry (i, j) as a polynomial after shifting by t^shift
    let shift: i64 = p.relators.iter().map(|w| w.len() as i64).max().unwrap();
    let mut rows = Vec::new();
    for w in &p.relators {
        let mut row = vec![vec![0i64; (2 * shift + 1) as usize]; g];
        let mut deg = 0i64;
        for l in w.letters() {
            if l.exp > 0 {
                row[l.gen][(deg + shift) as usize] += 1;
                deg += p.h[l.gen];
            } else {
                deg -= p.h[l.gen];
                row[l.gen][(deg + shift) as usize] -= 1;
            }
        }
        rows.push(row.into_iter().map(|c| QPoly::from_i64s(&c)).collect::<Vec<_>>());
    }
    let m = Matrix::from_rows(rows);
    let mut acc = QPoly::zero();
    for rs in subsets(r, k) {
        for cs in subsets(g, k) {
            let d = m.submatrix(&rs, &cs).det_expand();
            acc = if acc.is_zero() { d } else { acc.gcd(&d).unwrap() };
        }
    }
    canonical(&acc)
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Primitive integer multiple without powers of t and positive lead.
pub fn canonical(p: &QPoly) -> QPoly {
    let tz = p.trailing_zeros();
    let body = p.unshift(tz);
    let mut den = num_bigint::BigInt::one();
    for c in body.coeffs() {
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    let ints: Vec<num_bigint::BigInt> =
        body.coeffs().iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let mut g = num_bigint::BigInt::zero();
    for c in &ints {
        g = num_integer::Integer::gcd(&g, c);
    }
    if num_traits::Signed::is_negative(ints.last().unwrap()) {
        g = -g;
    }
    Poly::new(ints.into_iter().map(|c| Rational::from_integer(c / &g)).collect())
}

pub fn qpoly(cs: &[i64]) -> QPoly {
    QPoly::from_i64s(cs)
}
