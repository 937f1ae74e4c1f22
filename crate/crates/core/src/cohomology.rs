//! Twisted cohomology of a presentation 2-complex with coefficients in a
//! finite-dimensional module: dimensions, cocycle bases and the modules
//! built from a representation (adjoint, cyclic, filtration pieces).

use num_complex::Complex64;
use serde::Serialize;

use crate::cochain::ActionModule;
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Solution};
use crate::foxcalc::fox_jacobian;
use crate::knotio::Presentation;
use crate::repbuilder::jordan_power;
use crate::scalar::Field;
use crate::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AdKind {
    Gl,
    Sl,
}

/// Index of `E_i^j` (row `i`, column `j`) in the `gl(n)` coordinates.
pub fn gl_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// Adjoint action `X -> A X A^-1` on `gl(n)` (basis `E_i^j` in row-major
/// order) or on `sl(n)` (basis: off-diagonal `E_i^j` in row-major order,
/// then `E_k^k - E_{k+1}^{k+1}`).
pub fn module_ad<F: Field>(gens: &[Matrix<F>], kind: AdKind) -> Result<ActionModule<F>> {
    let n = gens.first().map_or(0, |m| m.rows());
    let sl = sl_basis::<F>(n);
    let mats = gens
        .iter()
        .map(|a| {
            let ainv = a.inverse()?;
            let image = |x: &Matrix<F>| &(a * x) * &ainv;
            Ok(match kind {
                AdKind::Gl => {
                    let cols: Vec<Vec<F>> = (0..n * n)
                        .map(|k| {
                            let e = Matrix::from_fn(n, n, |r, c| unit::<F>(gl_index(n, r, c) == k));
                            image(&e).entries().cloned().collect()
                        })
                        .collect();
                    Matrix::from_cols(&cols, n * n)
                }
                AdKind::Sl => {
                    let cols: Vec<Vec<F>> = sl.iter().map(|e| sl_coordinates(&image(e))).collect();
                    Matrix::from_cols(&cols, n * n - 1)
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ActionModule::new(mats)
}

fn unit<F: Field>(b: bool) -> F {
    if b {
        F::one()
    } else {
        F::zero()
    }
}

/// The basis of `sl(n)` used by [`module_ad`].
pub fn sl_basis<F: Field>(n: usize) -> Vec<Matrix<F>> {
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(Matrix::from_fn(n, n, |r, c| unit::<F>(r == i && c == j)));
            }
        }
    }
    for k in 0..n - 1 {
        out.push(Matrix::from_fn(n, n, |r, c| {
            if r != c {
                F::zero()
            } else if r == k {
                F::one()
            } else if r == k + 1 {
                -F::one()
            } else {
                F::zero()
            }
        }));
    }
    out
}

/// Coordinates of a trace-zero matrix in [`sl_basis`].
pub fn sl_coordinates<F: Field>(x: &Matrix<F>) -> Vec<F> {
    let n = x.rows();
    let mut out = Vec::with_capacity(n * n - 1);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push(x[(i, j)].clone());
            }
        }
    }
    let mut acc = F::zero();
    for k in 0..n - 1 {
        acc = acc + x[(k, k)].clone();
        out.push(acc.clone());
    }
    out
}

/// Matrix with the given [`sl_basis`] coordinates.
pub fn sl_matrix<F: Field>(n: usize, coords: &[F]) -> Matrix<F> {
    sl_basis::<F>(n)
        .iter()
        .zip(coords)
        .fold(Matrix::zeros(n, n), |acc, (e, c)| acc + e.scale(c))
}

/// `C[t^{+-1}]/(t - alpha)^k`: generator `S` acts by `(alpha J_k)^{h(S)}`.
pub fn module_cyclic<F: Field>(h: &[i64], alpha: &F, k: usize) -> Result<ActionModule<F>> {
    let gens = h
        .iter()
        .map(|&e| Ok(jordan_power::<F>(k, e).scale(&alpha.try_powi(e)?)))
        .collect::<Result<Vec<_>>>()?;
    ActionModule::new(gens)
}

/// Restriction of the action to the span of `basis` (linearly independent
/// vectors); fails if the span is not invariant.
pub fn submodule<F: Field>(module: &ActionModule<F>, basis: &[Vec<F>]) -> Result<ActionModule<F>> {
    let d = basis.len();
    let b = Matrix::from_cols(basis, module.dim);
    let gens = module
        .gens
        .iter()
        .map(|g| {
            let cols = basis
                .iter()
                .map(|v| match b.solve(&g.mul_vec(v))? {
                    Solution::Affine { particular, .. } => Ok(particular),
                    Solution::Infeasible => Err(Error::InternalConsistency("span is not invariant".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_cols(&cols, d))
        })
        .collect::<Result<Vec<_>>>()?;
    ActionModule::new(gens)
}

/// Action on `module / span(basis)`, in the coordinates of the standard
/// vectors completing `basis` (taken in increasing index order).
pub fn quotient<F: Field>(module: &ActionModule<F>, basis: &[Vec<F>]) -> Result<ActionModule<F>> {
    let m = module.dim;
    submodule(module, basis)?;
    let mut cols: Vec<Vec<F>> = basis.to_vec();
    let mut rank = Matrix::from_cols(&cols, m).rank()?;
    for k in 0..m {
        let e: Vec<F> = (0..m).map(|i| unit::<F>(i == k)).collect();
        cols.push(e);
        let r = Matrix::from_cols(&cols, m).rank()?;
        if r == rank {
            cols.pop();
        } else {
            rank = r;
        }
    }
    let t = Matrix::from_cols(&cols, m);
    let tinv = t.inverse()?;
    let d = basis.len();
    let q = m - d;
    let gens = module
        .gens
        .iter()
        .map(|g| {
            let c = &(&tinv * g) * &t;
            Matrix::from_fn(q, q, |i, j| c[(d + i, d + j)].clone())
        })
        .collect();
    ActionModule::new(gens)
}

/// `C(i)`: matrices supported on the last `i + 1` columns, in `gl(n)`
/// coordinates.
pub fn filtration_basis<F: Field>(n: usize, i: usize) -> Vec<Vec<F>> {
    assert!(i < n);
    let mut out = Vec::new();
    for row in 0..n {
        for col in n - 1 - i..n {
            out.push((0..n * n).map(|k| unit::<F>(k == gl_index(n, row, col))).collect());
        }
    }
    out
}

/// `C(i)` as a submodule of `gl(n)` under the adjoint action of `gens`.
pub fn filtration_c<F: Field>(gens: &[Matrix<F>], i: usize) -> Result<ActionModule<F>> {
    let n = gens[0].rows();
    let gl = module_ad(gens, AdKind::Gl)?;
    submodule(&gl, &filtration_basis(n, i))
}

/// `gl(n) / (C(n-2) + C I_n)`, spanned by the classes of `E_k^1`, `k >= 2`.
pub fn last_column_quotient<F: Field>(gens: &[Matrix<F>]) -> Result<ActionModule<F>> {
    let n = gens[0].rows();
    assert!(n >= 2);
    let gl = module_ad(gens, AdKind::Gl)?;
    let mut basis = filtration_basis::<F>(n, n - 2);
    basis.push((0..n * n).map(|k| unit::<F>(k % (n + 1) == 0)).collect());
    quotient(&gl, &basis)
}

/// Dimensions and bases of the cohomology of the presentation complex.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyReport<F> {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub z1: usize,
    pub b1: usize,
    pub module_dim: usize,
    /// Basis of `Z^1`; vector `k` stacks the values on the generators.
    pub z1_basis: Vec<Vec<F>>,
    /// Indices into `z1_basis` of the vectors completing `B^1` to `Z^1`.
    pub h1_representatives: Vec<usize>,
}

/// Serializable summary of a [`CohomologyReport`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub z1: usize,
    pub b1: usize,
    pub euler_ok: bool,
}

impl<F> CohomologyReport<F> {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.h0, self.h1, self.h2)
    }

    pub fn euler_ok(&self) -> bool {
        self.h0 + self.h2 == self.h1
    }

    pub fn summary(&self) -> Dims {
        Dims { h0: self.h0, h1: self.h1, h2: self.h2, z1: self.z1, b1: self.b1, euler_ok: self.euler_ok() }
    }
}

/// Coboundaries `delta x (S_j) = S_j x - x` of the standard basis vectors,
/// stacked over the generators.
pub fn coboundary_matrix<F: Field>(module: &ActionModule<F>) -> Matrix<F> {
    let m = module.dim;
    let g = module.num_generators();
    Matrix::from_fn(g * m, m, |row, k| {
        let (j, a) = (row / m, row % m);
        let x = module.gens[j][(a, k)].clone();
        if a == k {
            x - F::one()
        } else {
            x
        }
    })
}

/// Exact cohomology dimensions (ranks over `F`).
pub fn cohomology_dims<F: Field>(p: &Presentation, module: &ActionModule<F>) -> Result<CohomologyReport<F>> {
    if !module.is_action_of(p) {
        return Err(Error::InvalidArgument("module matrices do not satisfy the relators".into()));
    }
    let m = module.dim;
    let g = p.num_generators();
    let jac = fox_jacobian(p, module);
    let z1_basis = jac.kernel_basis()?;
    let rank_j = g * m - z1_basis.len();
    let cob = coboundary_matrix(module);
    let b1 = cob.rank()?;
    let h0 = m - b1;
    let z1 = z1_basis.len();
    // column-pivot complement of B^1 inside Z^1
    let h1_representatives = if z1 == 0 {
        Vec::new()
    } else {
        let stacked = cob.hstack(&Matrix::from_cols(&z1_basis, g * m));
        stacked.rref()?.pivots.into_iter().filter(|&c| c >= m).map(|c| c - m).collect()
    };
    Ok(CohomologyReport {
        h0,
        h1: z1 - b1,
        h2: p.num_relators() * m - rank_j,
        z1,
        b1,
        module_dim: m,
        z1_basis,
        h1_representatives,
    })
}

/// Numerical rank: singular values above `rel_tol` times the largest.
pub fn numerical_rank(m: &CMatrix, rel_tol: f64) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let s = m.clone().svd(false, false).singular_values;
    let max = s.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * max).count()
}

pub fn to_cmatrix(m: &Matrix<Complex64>) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn from_cmatrix(m: &CMatrix) -> Matrix<Complex64> {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Float cohomology dimensions via singular values; no bases.
pub fn cohomology_dims_float(p: &Presentation, module: &ActionModule<Complex64>, rel_tol: f64) -> Dims {
    let m = module.dim;
    let g = p.num_generators();
    let rank_j = numerical_rank(&to_cmatrix(&fox_jacobian(p, module)), rel_tol);
    let b1 = numerical_rank(&to_cmatrix(&coboundary_matrix(module)), rel_tol);
    let (z1, h0, h2) = (g * m - rank_j, m - b1, p.num_relators() * m - rank_j);
    let h1 = z1 - b1;
    Dims { h0, h1, h2, z1, b1, euler_ok: h0 + h2 == h1 }
}

/// Split stacked generator values into one vector per generator.
pub fn per_generator<F: Clone>(v: &[F], m: usize) -> Vec<Vec<F>> {
    v.chunks(m).map(|c| c.to_vec()).collect()
}

/// Is the function `S_j -> c_j` a coboundary in `F_beta`, i.e. is there an
/// `x` with `(beta^{h_j} - 1) x = c_j` for all `j`?
pub fn is_scalar_coboundary<F: Field>(h: &[i64], beta: &F, values: &[F]) -> Result<bool> {
    let col = h.iter().map(|&e| Ok(beta.try_powi(e)? - F::one())).collect::<Result<Vec<F>>>()?;
    let a = Matrix::from_cols(&[col], h.len());
    Ok(!matches!(a.solve(values)?, Solution::Infeasible))
}

/// For a representation in the upper triangular form, an `sl(n)`-cocycle
/// whose lower-left entry is a non-principal derivation into
/// `F_{alpha^-1}`, with that entry made to vanish on `gauge_gen` by adding
/// the coboundary of a multiple of `E_n^1`. Returns the values on
/// generators as matrices.
pub fn lower_left_direction<F: Field>(
    p: &Presentation,
    gens: &[Matrix<F>],
    alpha: &F,
    gauge_gen: usize,
) -> Result<Option<Vec<Matrix<F>>>> {
    let n = gens[0].rows();
    let module = module_ad(gens, AdKind::Sl)?;
    let report = cohomology_dims(p, &module)?;
    let m = module.dim;
    let beta = alpha.try_inv()?;
    let order = report
        .h1_representatives
        .iter()
        .copied()
        .chain((0..report.z1_basis.len()).filter(|k| !report.h1_representatives.contains(k)));
    for k in order {
        let mats: Vec<Matrix<F>> =
            per_generator(&report.z1_basis[k], m).iter().map(|c| sl_matrix(n, c)).collect();
        let corner: Vec<F> = mats.iter().map(|x| x[(n - 1, 0)].clone()).collect();
        if corner.iter().all(|x| x.is_zero()) || is_scalar_coboundary(&p.h, &beta, &corner)? {
            continue;
        }
        // add delta(c E_n^1) with (beta^{h} - 1) c = -corner(gauge)
        let denom = beta.try_powi(p.h[gauge_gen])? - F::one();
        let c = -(corner[gauge_gen].clone() * denom.try_inv()?);
        let x = Matrix::from_fn(n, n, |r, col| if r == n - 1 && col == 0 { c.clone() } else { F::zero() });
        let out = gens
            .iter()
            .zip(mats)
            .map(|(a, v)| Ok(v + (&(a * &x) * &a.inverse()?) - x.clone()))
            .collect::<Result<Vec<_>>>()?;
        return Ok(Some(out));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knotio::{corpus_entry, parse_presentation};
    use crate::scalar::int;
    use crate::Rational;

    fn trefoil() -> Presentation {
        parse_presentation(corpus_entry("3_1").unwrap().json).unwrap()
    }

    #[test]
    fn sl_coordinates_roundtrip() {
        let x = Matrix::from_rows(vec![
            vec![int(1), int(2), int(3)],
            vec![int(4), int(5), int(6)],
            vec![int(7), int(8), int(-6)],
        ]);
        assert_eq!(sl_matrix(3, &sl_coordinates(&x)), x);
    }

    #[test]
    fn trivial_coefficients() {
        let p = trefoil();
        let r = cohomology_dims(&p, &ActionModule::<Rational>::trivial(p.num_generators())).unwrap();
        assert_eq!(r.dims(), (1, 1, 0));
        assert_eq!(r.z1, 1);
        assert_eq!(r.h1_representatives.len(), 1);
    }

    #[test]
    fn ad_fixes_identity_line() {
        let a = Matrix::from_rows(vec![vec![int(2), int(1)], vec![int(1), int(1)]]);
        let gl = module_ad(&[a], AdKind::Gl).unwrap();
        let id = vec![int(1), int(0), int(0), int(1)];
        assert_eq!(gl.gens[0].mul_vec(&id), id);
    }

    #[test]
    fn quotient_of_jordan_block() {
        // span(e1) is invariant under J_2; the quotient is trivial
        let m = ActionModule::new(vec![jordan_power::<Rational>(2, 1)]).unwrap();
        let q = quotient(&m, &[vec![int(1), int(0)]]).unwrap();
        assert_eq!(q.gens[0], Matrix::identity(1));
        assert!(submodule(&m, &[vec![int(0), int(1)]]).is_err());
    }

    #[test]
    fn float_matches_exact_on_trivial() {
        let p = trefoil();
        let d = cohomology_dims_float(&p, &ActionModule::<Complex64>::trivial(p.num_generators()), 1e-8);
        assert_eq!((d.h0, d.h1, d.h2), (1, 1, 0));
    }
}
