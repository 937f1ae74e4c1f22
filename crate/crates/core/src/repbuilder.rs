//! Reducible metabelian representations attached to cyclic Alexander
//! torsion: the cocycle system, the block forms `tilde rho` and `rho`, the
//! special linear normalization and the upgrade obstruction.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{on_branches, Alg, Branches, Matrix, Solution, Tower};
use crate::knotio::{Presentation, Word};
use crate::scalar::{binomial, Field};
use crate::{AlgMatrix, QMatrix, QPoly};

/// `J_m^e = sum_i C(e, i) N^i` for any integer `e`.
pub fn jordan_power<F: Field>(m: usize, e: i64) -> Matrix<F> {
    Matrix::from_fn(m, m, |r, c| if c >= r { F::from_rational(&binomial(e, (c - r) as u32)) } else { F::zero() })
}

/// `P_n` with entries `(-1)^j C(j, i)` (1-based); it is an involution
/// conjugating `J_n` to its inverse.
pub fn conjugator_p(n: usize) -> QMatrix {
    Matrix::from_fn(n, n, |i, j| {
        let (i, j) = (i as i64 + 1, j as i64 + 1);
        let sign = if j % 2 == 0 { 1 } else { -1 };
        if i > j {
            crate::scalar::int(0)
        } else {
            binomial(j, i as u32) * crate::scalar::int(sign)
        }
    })
}

/// Generator values of the cocycle in the block form `tilde rho`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleData {
    pub n: usize,
    pub alpha: Alg,
    /// `values[j]` is the row `tilde z(S_j)` of length `n - 1`.
    pub values: Vec<Vec<Alg>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepForm {
    /// `[[alpha^h, tilde z J^-h], [0, J^-h]]`
    Tilde,
    /// `[[alpha^h, z], [0, J^h]]`
    Upper,
    /// `lambda^-h` times the upper form.
    Special,
}

/// A representation over a number tower, given on generators.
#[derive(Clone, Debug)]
pub struct ExactRep {
    pub n: usize,
    pub form: RepForm,
    pub alpha: Alg,
    pub lambda: Option<Alg>,
    pub gens: Vec<AlgMatrix>,
    pub invs: Vec<AlgMatrix>,
    /// Cocycle row per generator in this form's convention (`tilde z` or `z`).
    pub z: Vec<Vec<Alg>>,
}

impl ExactRep {
    fn assemble(
        p: &Presentation,
        n: usize,
        form: RepForm,
        alpha: Alg,
        lambda: Option<Alg>,
        gens: Vec<AlgMatrix>,
        z: Vec<Vec<Alg>>,
    ) -> Result<Self> {
        let invs = gens.iter().map(|m| m.inverse()).collect::<std::result::Result<Vec<_>, _>>()?;
        let rep = ExactRep { n, form, alpha, lambda, gens, invs, z };
        if let Some(r) = rep.failing_relator(p) {
            return Err(Error::InternalConsistency(format!("relator {r} does not map to the identity")));
        }
        Ok(rep)
    }

    pub fn image(&self, w: &Word) -> AlgMatrix {
        w.eval(&self.gens, &self.invs, Matrix::identity(self.n), |a, b| a * b)
    }

    /// Index of the first relator whose image is not the identity.
    pub fn failing_relator(&self, p: &Presentation) -> Option<usize> {
        let id = Matrix::identity(self.n);
        p.relators.iter().position(|r| self.image(r) != id)
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.lambda.as_ref().and_then(|l| l.tower()).or(self.alpha.tower())
    }
}

fn tilde_matrix(n: usize, alpha: &Alg, h: i64, zt: &[Alg]) -> Result<AlgMatrix> {
    let m = n - 1;
    let jinv = jordan_power::<Alg>(m, -h);
    let top: Vec<Alg> = (0..m)
        .map(|c| (0..m).fold(Alg::zero(), |acc, k| acc + zt[k].clone() * jinv[(k, c)].clone()))
        .collect();
    let a = alpha.try_powi(h)?;
    Ok(Matrix::from_fn(n, n, |r, c| match (r, c) {
        (0, 0) => a.clone(),
        (0, c) => top[c - 1].clone(),
        (_, 0) => Alg::zero(),
        (r, c) => jinv[(r - 1, c - 1)].clone(),
    }))
}

fn upper_matrix(n: usize, alpha: &Alg, h: i64, z: &[Alg]) -> Result<AlgMatrix> {
    let j = jordan_power::<Alg>(n - 1, h);
    let a = alpha.try_powi(h)?;
    Ok(Matrix::from_fn(n, n, |r, c| match (r, c) {
        (0, 0) => a.clone(),
        (0, c) => z[c - 1].clone(),
        (_, 0) => Alg::zero(),
        (r, c) => j[(r - 1, c - 1)].clone(),
    }))
}

/// Linear conditions on unknowns `u` for `build(u)` to define a
/// representation, assuming every relator image is affine in `u`. Returns
/// `(A, b)` with `A u = b` collecting all entries of `rho(W_r) = I`.
fn affine_relator_system<F: Field>(
    p: &Presentation,
    nunk: usize,
    size: usize,
    build: impl Fn(&[F]) -> Result<Vec<Matrix<F>>>,
) -> Result<(Matrix<F>, Vec<F>)> {
    let eval_all = |u: &[F]| -> Result<Vec<Matrix<F>>> {
        let gens = build(u)?;
        let invs = gens.iter().map(|m| m.inverse()).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(p.relators.iter().map(|w| w.eval(&gens, &invs, Matrix::identity(size), |a, b| a * b)).collect())
    };
    let zero = vec![F::zero(); nunk];
    let base = eval_all(&zero)?;
    let mut cols = Vec::with_capacity(nunk);
    for j in 0..nunk {
        let mut u = zero.clone();
        u[j] = F::one();
        cols.push(eval_all(&u)?);
    }
    let rows = p.num_relators() * size * size;
    let mut a = Matrix::zeros(rows, nunk);
    let mut b = vec![F::zero(); rows];
    for (r, c0) in base.iter().enumerate() {
        for x in 0..size {
            for y in 0..size {
                let row = (r * size + x) * size + y;
                let id = if x == y { F::one() } else { F::zero() };
                b[row] = id - c0[(x, y)].clone();
                for (j, cj) in cols.iter().enumerate() {
                    a[(row, j)] = cj[r][(x, y)].clone() - c0[(x, y)].clone();
                }
            }
        }
    }
    Ok((a, b))
}

/// Basis of the gauge-fixed solutions `tilde z` (with `tilde z(S_1) = 0`
/// at the meridian) of the relator equations of `tilde rho`, each as one
/// row of length `n - 1` per generator.
pub fn cocycle_solutions(p: &Presentation, alpha: &Alg, n: usize) -> Result<Vec<Vec<Vec<Alg>>>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("representation size must be at least 2, got {n}")));
    }
    let m = n - 1;
    let g = p.num_generators();
    let (a, b) = affine_relator_system(p, g * m, n, |u| {
        (0..g).map(|j| tilde_matrix(n, alpha, p.h[j], &u[j * m..(j + 1) * m])).collect()
    })?;
    debug_assert!(b.iter().all(|x| x.is_zero()));
    // gauge rows
    let mut gauge = Matrix::zeros(m, g * m);
    for k in 0..m {
        gauge[(k, p.meridian * m + k)] = Alg::one();
    }
    let kernel = a.vstack(&gauge).kernel_basis()?;
    Ok(kernel.into_iter().map(|v| v.chunks(m).map(|c| c.to_vec()).collect()).collect())
}

/// Solve for `tilde z` with non-principal first component, gauge-fixed at
/// the meridian and scaled so that its first nonzero value of `tilde z_1`
/// is 1.
pub fn solve_cocycle_tower(p: &Presentation, alpha: &Alg, n: usize) -> Result<CocycleData> {
    let sols = cocycle_solutions(p, alpha, n)?;
    if sols.is_empty() {
        return Err(Error::Infeasible(format!(
            "no nonzero cocycle for n = {n}: the Alexander module has no torsion at alpha"
        )));
    }
    let pick = sols.iter().find(|s| s.iter().any(|row| !row[0].is_zero())).ok_or_else(|| {
        Error::InternalConsistency("every gauge-fixed solution has principal first component".into())
    })?;
    let lead = pick.iter().map(|row| &row[0]).find(|x| !x.is_zero()).unwrap().try_inv()?;
    let values: Vec<Vec<Alg>> =
        pick.iter().map(|row| row.iter().map(|x| x.clone() * lead.clone()).collect()).collect();
    let data = CocycleData { n, alpha: alpha.clone(), values };
    if is_principal_first(p, &data)? {
        return Err(Error::InternalConsistency("first cocycle component is a coboundary".into()));
    }
    Ok(data)
}

/// Is `tilde z_1 = delta c` for some scalar `c` (in `C_alpha`)?
pub fn is_principal_first(p: &Presentation, data: &CocycleData) -> Result<bool> {
    let g = p.num_generators();
    let coeffs = Matrix::from_fn(g, 1, |j, _| data.alpha.try_powi(p.h[j]).unwrap() - Alg::one());
    let rhs: Vec<Alg> = data.values.iter().map(|row| row[0].clone()).collect();
    Ok(!matches!(coeffs.solve(&rhs)?, Solution::Infeasible))
}

/// The coboundary `tilde z = -delta c`, i.e. the cocycle of the abelian
/// representation conjugated by `[[1, c], [0, I]]`.
pub fn principal_cocycle(p: &Presentation, alpha: &Alg, n: usize, c: &[Alg]) -> Result<CocycleData> {
    let m = n - 1;
    assert_eq!(c.len(), m);
    let mut values = Vec::with_capacity(p.num_generators());
    for &h in &p.h {
        let j = jordan_power::<Alg>(m, h);
        let a = alpha.try_powi(h)?;
        // -(alpha^h c J^h - c)
        let row = (0..m)
            .map(|col| {
                let cj = (0..m).fold(Alg::zero(), |acc, k| acc + c[k].clone() * j[(k, col)].clone());
                c[col].clone() - a.clone() * cj
            })
            .collect();
        values.push(row);
    }
    Ok(CocycleData { n, alpha: alpha.clone(), values })
}

/// Add the coboundary making every component vanish on `gen`. Returns the
/// new data and the vector `c` such that the new `tilde rho` is the old
/// one conjugated by `[[1, c], [0, I]]`.
pub fn normalize_cocycle_at(p: &Presentation, data: &CocycleData, gen: usize) -> Result<(CocycleData, Vec<Alg>)> {
    let m = data.n - 1;
    let h = p.h[gen];
    let a = data.alpha.try_powi(h)?;
    let j = jordan_power::<Alg>(m, h);
    // c (alpha^h J^h - I) = tilde z(S_gen), solved as a column system
    let mat = Matrix::from_fn(m, m, |r, col| {
        let x = a.clone() * j[(col, r)].clone();
        if r == col {
            x - Alg::one()
        } else {
            x
        }
    });
    let c = match mat.solve(&data.values[gen])? {
        Solution::Affine { particular, .. } => particular,
        Solution::Infeasible => {
            return Err(Error::Infeasible("cannot normalize: alpha^h J^h - I is singular".into()));
        }
    };
    let shift = principal_cocycle(p, &data.alpha, data.n, &c)?;
    let values = data
        .values
        .iter()
        .zip(&shift.values)
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect())
        .collect();
    Ok((CocycleData { n: data.n, alpha: data.alpha.clone(), values }, c))
}

pub fn build_tilde_rho(p: &Presentation, data: &CocycleData) -> Result<ExactRep> {
    let gens = (0..p.num_generators())
        .map(|j| tilde_matrix(data.n, &data.alpha, p.h[j], &data.values[j]))
        .collect::<Result<Vec<_>>>()?;
    ExactRep::assemble(p, data.n, RepForm::Tilde, data.alpha.clone(), None, gens, data.values.clone())
}

/// Conjugate by `diag(1, P_{n-1})` into the upper triangular form.
pub fn to_upper_form(p: &Presentation, tilde: &ExactRep) -> Result<ExactRep> {
    assert_eq!(tilde.form, RepForm::Tilde);
    let n = tilde.n;
    let pm = conjugator_p(n - 1).map(|x| Alg::rational(x.clone()));
    let q = Matrix::from_fn(n, n, |r, c| match (r, c) {
        (0, 0) => Alg::one(),
        (0, _) | (_, 0) => Alg::zero(),
        (r, c) => pm[(r - 1, c - 1)].clone(),
    });
    let gens: Vec<AlgMatrix> = tilde.gens.iter().map(|g| &(&q * g) * &q).collect();
    let z: Vec<Vec<Alg>> = gens.iter().map(|g| (1..n).map(|c| g[(0, c)].clone()).collect()).collect();
    for (j, (zj, zt)) in z.iter().zip(&tilde.z).enumerate() {
        // z = tilde z P J^h
        let pj = &pm * &jordan_power::<Alg>(n - 1, p.h[j]);
        let want: Vec<Alg> = (0..n - 1)
            .map(|c| (0..n - 1).fold(Alg::zero(), |acc, k| acc + zt[k].clone() * pj[(k, c)].clone()))
            .collect();
        if *zj != want || zj[0] != -zt[0].clone() {
            return Err(Error::InternalConsistency(format!("upper form cocycle mismatch on generator {j}")));
        }
        if gens[j] != upper_matrix(n, &tilde.alpha, p.h[j], zj)? {
            return Err(Error::InternalConsistency(format!("upper form shape mismatch on generator {j}")));
        }
    }
    ExactRep::assemble(p, n, RepForm::Upper, tilde.alpha.clone(), None, gens, z)
}

/// `rho_lambda(gamma) = lambda^{-h(gamma)} rho(gamma)`; requires
/// `lambda^n = alpha`.
pub fn normalize_sl(p: &Presentation, upper: &ExactRep, lambda: &Alg) -> Result<ExactRep> {
    assert_eq!(upper.form, RepForm::Upper);
    let n = upper.n;
    if lambda.try_powi(n as i64)? != upper.alpha {
        return Err(Error::InvalidArgument("lambda^n differs from alpha".into()));
    }
    let gens = upper
        .gens
        .iter()
        .zip(&p.h)
        .map(|(g, &h)| Ok(g.scale(&lambda.try_powi(-h)?)))
        .collect::<Result<Vec<_>>>()?;
    for (j, g) in gens.iter().enumerate() {
        if !g.det()?.is_one() {
            return Err(Error::InternalConsistency(format!("determinant of generator {j} is not 1")));
        }
    }
    ExactRep::assemble(p, n, RepForm::Special, upper.alpha.clone(), Some(lambda.clone()), gens, upper.z.clone())
}

/// `lambda^{-1} (lambda^n + n - 1)`
pub fn meridian_trace_formula(lambda: &Alg, n: usize) -> Result<Alg> {
    Ok(lambda.try_inv()? * (lambda.try_powi(n as i64)? + Alg::from_i64(n as i64 - 1)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Upgrade {
    Obstructed,
    /// Values of the extra cocycle component on the generators.
    Upgradable(Vec<Alg>),
}

/// Can the representation be extended by one more row and column (with
/// one new cocycle component) to a representation of size `n + 1`?
pub fn upgrade_obstruction(p: &Presentation, rep: &ExactRep) -> Result<Upgrade> {
    let n = rep.n;
    let g = p.num_generators();
    let build = |u: &[Alg]| -> Result<Vec<AlgMatrix>> {
        (0..g)
            .map(|j| {
                let mut row = rep.z[j].clone();
                row.push(u[j].clone());
                match rep.form {
                    RepForm::Tilde => tilde_matrix(n + 1, &rep.alpha, p.h[j], &row),
                    RepForm::Upper => upper_matrix(n + 1, &rep.alpha, p.h[j], &row),
                    RepForm::Special => Err(Error::InvalidArgument(
                        "upgrade is defined for the general linear forms".into(),
                    )),
                }
            })
            .collect()
    };
    let (a, b) = affine_relator_system(p, g, n + 1, build)?;
    Ok(match a.solve(&b)? {
        Solution::Infeasible => Upgrade::Obstructed,
        Solution::Affine { particular, .. } => Upgrade::Upgradable(particular),
    })
}

/// Everything built for one branch of the number tower.
#[derive(Clone, Debug)]
pub struct Metabelian {
    pub tower: Arc<Tower>,
    pub data: CocycleData,
    pub tilde: ExactRep,
    pub upper: ExactRep,
    pub special: ExactRep,
}

impl Metabelian {
    pub fn lambda(&self) -> &Alg {
        self.special.lambda.as_ref().unwrap()
    }
}

/// Tower `Q[a]/(factor)[l]/(l^n - a)`.
pub fn lambda_tower(factor: &QPoly, n: usize) -> Result<Arc<Tower>> {
    let modulus = factor.map(|c| Alg::rational(c.clone()));
    let alpha_tower = Tower::adjoin_root(None, &modulus, "a")?;
    Ok(Tower::adjoin_nth_root(&alpha_tower.generator(), n, "l")?)
}

/// Build `rho_lambda` for a root of `factor`, where `alpha` is the level-0
/// generator and `lambda` the level-1 generator of [`lambda_tower`].
pub fn build_in_tower(p: &Presentation, tower: &Arc<Tower>, n: usize) -> Result<Metabelian> {
    let alpha = tower.level_generator(0);
    let lambda = tower.level_generator(1);
    let data = solve_cocycle_tower(p, &alpha, n)?;
    let tilde = build_tilde_rho(p, &data)?;
    let upper = to_upper_form(p, &tilde)?;
    let special = normalize_sl(p, &upper, &lambda)?;
    Ok(Metabelian { tower: tower.clone(), data, tilde, upper, special })
}

/// Full construction with dynamic evaluation over the roots of `factor`.
pub fn build_metabelian(p: &Presentation, factor: &QPoly, n: usize, policy: Branches) -> Result<Vec<Metabelian>> {
    let tower = lambda_tower(factor, n)?;
    let out = on_branches(tower, policy, |t| build_in_tower(p, t, n))?;
    Ok(out.into_iter().map(|(_, m)| m).collect())
}
