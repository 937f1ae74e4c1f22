//! Numerical deformation of representations: complex embedding, first
//! order perturbation along a cocycle, Gauss-Newton projection back onto
//! the relator variety, and irreducibility / non-metabelian tests.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactalg::{Alg, Matrix};
use crate::knotio::{random_word, Presentation, Word};
use crate::CMatrix;

/// Every float threshold used by the numerical paths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Residual allowed after embedding an exact representation.
    pub embed_residual: f64,
    /// Newton stops once the residual drops below this.
    pub newton_residual: f64,
    pub newton_max_iter: usize,
    /// Steps without residual decrease before divergence is declared.
    pub divergence_window: usize,
    /// Largest starting residual accepted by Newton.
    pub newton_start_residual: f64,
    /// Relative singular value cutoff of the Newton pseudo-inverse.
    pub pinv_rel: f64,
    /// Relative singular value cutoff in the algebra span closure.
    pub burnside_rel: f64,
    /// Relative singular value cutoff for cohomology ranks.
    pub rank_rel: f64,
    pub cocycle_residual: f64,
    pub trace_test: f64,
    pub commutator: f64,
    pub eigen_gap: f64,
    pub det: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            embed_residual: 1e-12,
            newton_residual: 1e-10,
            newton_max_iter: 50,
            divergence_window: 5,
            newton_start_residual: 0.1,
            pinv_rel: 1e-10,
            burnside_rel: 1e-9,
            rank_rel: 1e-8,
            cocycle_residual: 1e-8,
            trace_test: 1e-6,
            commutator: 1e-6,
            eigen_gap: 1e-8,
            det: 1e-10,
        }
    }
}

pub const TOLERANCE_ENV: &str = "KNOTREP_TOL";

impl Tolerances {
    /// Defaults overridden by the JSON object in `KNOTREP_TOL`, if set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(s) if !s.trim().is_empty() => Self::from_json(&s),
            _ => Ok(Self::default()),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("{TOLERANCE_ENV}: {e}")))
    }
}

/// A representation with complex float entries.
#[derive(Clone, Debug)]
pub struct FloatRep {
    pub gens: Vec<CMatrix>,
    pub residual: f64,
}

impl FloatRep {
    pub fn new(p: &Presentation, gens: Vec<CMatrix>) -> Result<Self> {
        let residual = residual(p, &gens)?;
        Ok(FloatRep { gens, residual })
    }

    pub fn n(&self) -> usize {
        self.gens[0].nrows()
    }

    pub fn image(&self, w: &Word) -> Result<CMatrix> {
        let invs = inverses(&self.gens)?;
        Ok(word_image(w, &self.gens, &invs))
    }

    pub fn conjugate(&self, p: &Presentation, c: &CMatrix) -> Result<Self> {
        let ci = invert(c)?;
        FloatRep::new(p, self.gens.iter().map(|g| c * g * &ci).collect())
    }

    /// Largest `|det - 1|` over the generators.
    pub fn det_deviation(&self) -> f64 {
        self.gens.iter().map(|g| (g.determinant() - 1.0).norm()).fold(0.0, f64::max)
    }
}

fn invert(m: &CMatrix) -> Result<CMatrix> {
    m.clone().try_inverse().ok_or_else(|| Error::Numerical("singular generator matrix".into()))
}

fn inverses(gens: &[CMatrix]) -> Result<Vec<CMatrix>> {
    gens.iter().map(invert).collect()
}

fn word_image(w: &Word, gens: &[CMatrix], invs: &[CMatrix]) -> CMatrix {
    let n = gens[0].nrows();
    w.eval(gens, invs, CMatrix::identity(n, n), |a, b| a * b)
}

/// Largest entry modulus.
pub fn cmax(m: &CMatrix) -> f64 {
    m.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Maximum row-sum norm.
pub fn inf_norm(m: &CMatrix) -> f64 {
    m.row_iter().map(|r| r.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `max_r ||rho(W_r) - I||_inf`
pub fn residual(p: &Presentation, gens: &[CMatrix]) -> Result<f64> {
    let invs = inverses(gens)?;
    let n = gens[0].nrows();
    let id = CMatrix::identity(n, n);
    Ok(p.relators.iter().map(|w| inf_norm(&(word_image(w, gens, &invs) - &id))).fold(0.0, f64::max))
}

pub fn to_complex_matrix(m: &Matrix<Alg>, embedding: &[Complex64]) -> CMatrix {
    CMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].to_complex(embedding))
}

/// Evaluate an exact representation under the complex embedding with the
/// given index (see [`crate::exactalg::Tower::embeddings`]).
pub fn embed_float(
    p: &Presentation,
    gens: &[Matrix<Alg>],
    embedding: &[Complex64],
    tol: &Tolerances,
) -> Result<FloatRep> {
    let rep = FloatRep::new(p, gens.iter().map(|m| to_complex_matrix(m, embedding)).collect())?;
    if rep.residual >= tol.embed_residual {
        return Err(Error::Numerical(format!("embedded residual {:.3e} is too large", rep.residual)));
    }
    Ok(rep)
}

/// Derivative of `(rho(W_r))_{r}` in the generator entries (row-major per
/// generator), stacked by relator and then row-major entry.
fn relator_jacobian(p: &Presentation, gens: &[CMatrix], invs: &[CMatrix]) -> CMatrix {
    let n = gens[0].nrows();
    let nn = n * n;
    let mut jac = CMatrix::zeros(p.num_relators() * nn, p.num_generators() * nn);
    let id = CMatrix::identity(n, n);
    for (r, w) in p.relators.iter().enumerate() {
        let letters = w.letters();
        let mats: Vec<&CMatrix> =
            letters.iter().map(|l| if l.exp > 0 { &gens[l.gen] } else { &invs[l.gen] }).collect();
        let mut suffix = vec![id.clone(); letters.len() + 1];
        for k in (0..letters.len()).rev() {
            suffix[k] = mats[k] * &suffix[k + 1];
        }
        let mut prefix = id.clone();
        for (k, l) in letters.iter().enumerate() {
            let (left, right) = if l.exp > 0 {
                (prefix.clone(), suffix[k + 1].clone())
            } else {
                (-(&prefix * &invs[l.gen]), &invs[l.gen] * &suffix[k + 1])
            };
            for x in 0..n {
                for y in 0..n {
                    let row = r * nn + x * n + y;
                    for a in 0..n {
                        for b in 0..n {
                            jac[(row, l.gen * nn + a * n + b)] += left[(x, a)] * right[(b, y)];
                        }
                    }
                }
            }
            prefix = &prefix * mats[k];
        }
    }
    jac
}

/// Largest first-order relator defect of the tangent vector
/// `d rho(S_j) = v_j rho(S_j)`, relative to `max |v_j|`.
pub fn cocycle_defect(p: &Presentation, rho: &FloatRep, v: &[CMatrix]) -> Result<f64> {
    let invs = inverses(&rho.gens)?;
    let jac = relator_jacobian(p, &rho.gens, &invs);
    let n = rho.n();
    let dx = CMatrix::from_fn(p.num_generators() * n * n, 1, |k, _| {
        let (j, e) = (k / (n * n), k % (n * n));
        (&v[j] * &rho.gens[j])[(e / n, e % n)]
    });
    let scale = v.iter().map(cmax).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    Ok(cmax(&(jac * dx)) / scale)
}

/// `rho_t(S_j) = (I + t v(S_j)) rho(S_j)`.
pub fn first_order(p: &Presentation, rho: &FloatRep, v: &[CMatrix], t: f64, tol: &Tolerances) -> Result<FloatRep> {
    if cocycle_defect(p, rho, v)? >= tol.cocycle_residual {
        return Err(Error::InvalidArgument("direction is not a cocycle".into()));
    }
    let n = rho.n();
    let id = CMatrix::identity(n, n);
    FloatRep::new(p, rho.gens.iter().zip(v).map(|(g, vj)| (&id + vj * Complex64::new(t, 0.0)) * g).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NewtonStatus {
    Converged,
    Diverged,
    MaxIterations,
    StartTooFar,
}

#[derive(Clone, Debug)]
pub struct NewtonOutcome {
    pub rep: FloatRep,
    pub status: NewtonStatus,
    pub iterations: usize,
    pub history: Vec<f64>,
    /// Numerical rank of the last Jacobian.
    pub jacobian_rank: usize,
}

/// Gauss-Newton with minimum-norm steps on the relator equations, the
/// determinant conditions and the gauge rows holding the first column of
/// `rho(S_gauge)` at its starting value.
pub fn newton_project(p: &Presentation, start: &FloatRep, gauge: usize, tol: &Tolerances) -> Result<NewtonOutcome> {
    let n = start.n();
    let nn = n * n;
    let g = p.num_generators();
    let rels = p.num_relators();
    let pinned: Vec<Complex64> = (0..n).map(|i| start.gens[gauge][(i, 0)]).collect();
    let mut gens = start.gens.clone();
    let mut history = vec![start.residual];
    let mut status = NewtonStatus::MaxIterations;
    let mut iterations = 0;
    let mut best = start.residual;
    let mut stalled = 0;
    let mut jacobian_rank = 0;
    if start.residual >= tol.newton_start_residual {
        status = NewtonStatus::StartTooFar;
    } else if start.residual < tol.newton_residual {
        status = NewtonStatus::Converged;
    } else {
        while iterations < tol.newton_max_iter {
            let invs = inverses(&gens)?;
            let rows = rels * nn + g + n;
            let mut jac = CMatrix::zeros(rows, g * nn);
            let mut f = CMatrix::zeros(rows, 1);
            jac.rows_mut(0, rels * nn).copy_from(&relator_jacobian(p, &gens, &invs));
            for (r, w) in p.relators.iter().enumerate() {
                let img = word_image(w, &gens, &invs);
                for x in 0..n {
                    for y in 0..n {
                        let id = if x == y { 1.0 } else { 0.0 };
                        f[(r * nn + x * n + y, 0)] = img[(x, y)] - id;
                    }
                }
            }
            for j in 0..g {
                let det = gens[j].determinant();
                let row = rels * nn + j;
                f[(row, 0)] = det - 1.0;
                for a in 0..n {
                    for b in 0..n {
                        jac[(row, j * nn + a * n + b)] = det * invs[j][(b, a)];
                    }
                }
            }
            for (i, v) in pinned.iter().enumerate() {
                let row = rels * nn + g + i;
                f[(row, 0)] = gens[gauge][(i, 0)] - v;
                jac[(row, gauge * nn + i * n)] = Complex64::new(1.0, 0.0);
            }
            let svd = jac.svd(true, true);
            let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
            let cut = tol.pinv_rel * smax;
            jacobian_rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
            let (u, vt) = (svd.u.as_ref().unwrap(), svd.v_t.as_ref().unwrap());
            let mut coef = u.adjoint() * &f;
            for (k, s) in svd.singular_values.iter().enumerate() {
                coef[(k, 0)] = if *s > cut { coef[(k, 0)] / *s } else { Complex64::new(0.0, 0.0) };
            }
            let step = vt.adjoint() * coef;
            for j in 0..g {
                for a in 0..n {
                    for b in 0..n {
                        gens[j][(a, b)] -= step[(j * nn + a * n + b, 0)];
                    }
                }
            }
            iterations += 1;
            let res = residual(p, &gens)?;
            history.push(res);
            if res < tol.newton_residual {
                status = NewtonStatus::Converged;
                break;
            }
            if res < best {
                best = res;
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= tol.divergence_window {
                    status = NewtonStatus::Diverged;
                    break;
                }
            }
        }
    }
    let rep = FloatRep::new(p, gens)?;
    Ok(NewtonOutcome { rep, status, iterations, history, jacobian_rank })
}

/// Dimension of the unital algebra generated by `mats`, with the number of
/// singular values that fell within a factor 10 of the cutoff.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraSpan {
    pub dim: usize,
    pub borderline: usize,
}

pub fn algebra_span(mats: &[CMatrix], rel_tol: f64) -> AlgebraSpan {
    let n = mats.first().map_or(0, |m| m.nrows());
    let vec_of = |m: &CMatrix| -> Vec<Complex64> { m.transpose().iter().cloned().collect() };
    let unvec = |v: &[Complex64]| CMatrix::from_row_slice(n, n, v);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let mut borderline;
    let mut candidates: Vec<Vec<Complex64>> = std::iter::once(CMatrix::identity(n, n))
        .chain(mats.iter().cloned())
        .map(|m| vec_of(&m))
        .collect();
    loop {
        let cols: Vec<Vec<Complex64>> = basis
            .iter()
            .cloned()
            .chain(candidates.iter().map(|c| {
                let nrm = c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
                if nrm > 0.0 {
                    c.iter().map(|x| x / nrm).collect()
                } else {
                    c.clone()
                }
            }))
            .collect();
        let a = CMatrix::from_fn(n * n, cols.len(), |i, j| cols[j][i]);
        let svd = a.svd(true, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        let cut = rel_tol * smax;
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
        let rank = order.iter().filter(|&&k| svd.singular_values[k] > cut).count();
        borderline = svd.singular_values.iter().filter(|&&s| s > cut / 10.0 && s < cut * 10.0).count();
        let u = svd.u.unwrap();
        let grew = rank > basis.len();
        basis = order[..rank].iter().map(|&k| u.column(k).iter().cloned().collect()).collect();
        if !grew || rank == n * n {
            break;
        }
        candidates = basis
            .iter()
            .flat_map(|b| {
                let bm = unvec(b);
                mats.iter().map(move |m| vec_of(&(&bm * m))).collect::<Vec<_>>()
            })
            .collect();
    }
    AlgebraSpan { dim: basis.len(), borderline }
}

/// Dimension of the unital algebra generated by `mats`.
pub fn burnside_dim(mats: &[CMatrix], rel_tol: f64) -> usize {
    algebra_span(mats, rel_tol).dim
}

/// `Some(true)` iff the generator images span the full matrix algebra;
/// `None` when a singular value sits within a factor 10 of the cutoff.
pub fn is_irreducible(rho: &FloatRep, tol: &Tolerances) -> (AlgebraSpan, Option<bool>) {
    let s = algebra_span(&rho.gens, tol.burnside_rel);
    let n = rho.n();
    (s, if s.borderline > 0 { None } else { Some(s.dim == n * n) })
}

/// True when `|tr rho(meridian)|` exceeds the threshold, which rules out
/// an irreducible metabelian representation.
pub fn metabelian_trace_test(rho: &FloatRep, meridian: usize, tol: &Tolerances) -> bool {
    rho.gens[meridian].trace().norm() > tol.trace_test
}

/// Largest `||rho([[a, b], [c, d]]) - I||_inf` over random words.
pub fn double_commutator_deviation(p: &Presentation, rho: &FloatRep, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = p.num_generators();
    let invs = inverses(&rho.gens)?;
    let n = rho.n();
    let id = CMatrix::identity(n, n);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let w: Vec<Word> = (0..4).map(|_| random_word(&mut rng, g, 6.0)).collect();
        let c = Word::commutator(&Word::commutator(&w[0], &w[1]), &Word::commutator(&w[2], &w[3]));
        worst = worst.max(inf_norm(&(word_image(&c, &rho.gens, &invs) - &id)));
    }
    Ok(worst)
}

/// Conjugate so that `rho(S_gen)` is block diagonal with a `1 x 1` block
/// holding its eigenvalue closest to `target`.
pub fn eigen_gauge(p: &Presentation, rho: &FloatRep, gen: usize, target: Complex64, tol: &Tolerances) -> Result<FloatRep> {
    let a = &rho.gens[gen];
    let n = a.nrows();
    let eig = a
        .clone()
        .schur()
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("eigenvalues did not converge".into()))?;
    let (k, mu) = eig
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 - target).norm().total_cmp(&(y.1 - target).norm()))
        .map(|(k, m)| (k, *m))
        .unwrap();
    let gap = eig.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, e)| (e - mu).norm()).fold(f64::INFINITY, f64::min);
    if gap < tol.eigen_gap {
        return Err(Error::Numerical(format!("eigenvalue gap {gap:.3e} too small for the gauge")));
    }
    let shifted = a - CMatrix::identity(n, n) * mu;
    let v = null_vector(&shifted);
    let w = null_vector(&shifted.transpose());
    // v scaled so that its largest coordinate is e_1-like when possible
    let v = if v[0].norm() > 1e-8 { &v / v[0] } else { v };
    let wv = (w.transpose() * &v)[(0, 0)];
    let mut x = CMatrix::identity(n, n);
    x.set_column(0, &v);
    for c in 1..n {
        // e_c - v (w^T e_c)/(w^T v)
        let coeff = w[c] / wv;
        for r in 0..n {
            x[(r, c)] -= v[r] * coeff;
        }
    }
    rho.conjugate(p, &invert(&x)?)
}

fn null_vector(m: &CMatrix) -> nalgebra::DVector<Complex64> {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.unwrap();
    let k = (0..svd.singular_values.len()).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).unwrap();
    vt.row(k).adjoint()
}

/// Result of one deformation run.
#[derive(Clone, Debug, Serialize)]
pub struct DeformReport {
    pub t: f64,
    pub seed: u64,
    pub converged: bool,
    pub status: NewtonStatus,
    pub iterations: usize,
    pub start_residual: f64,
    pub residual: f64,
    pub det_deviation: f64,
    pub burnside_dim: usize,
    /// `None` when the rank decision was borderline.
    pub irreducible: Option<bool>,
    pub trace_of_meridian: [f64; 2],
    pub metabelian_trace_test: bool,
    pub double_commutator_deviation: f64,
    pub non_metabelian: bool,
    /// Largest off-block entry of the gauged meridian image.
    pub eigen_gauge_offdiag: Option<f64>,
    /// Lower-left entry of the second generator after the gauge.
    pub corner_entry: Option<[f64; 2]>,
}

/// Deform along `direction` by `t`, project with Newton and test the
/// outcome.
#[allow(clippy::too_many_arguments)]
pub fn deform(
    p: &Presentation,
    base: &FloatRep,
    direction: &[CMatrix],
    t: f64,
    seed: u64,
    eigen_target: Complex64,
    tol: &Tolerances,
) -> Result<(DeformReport, FloatRep)> {
    let start = first_order(p, base, direction, t, tol)?;
    deform_from(p, start, t, seed, eigen_target, tol)
}

fn deform_from(
    p: &Presentation,
    start: FloatRep,
    t: f64,
    seed: u64,
    eigen_target: Complex64,
    tol: &Tolerances,
) -> Result<(DeformReport, FloatRep)> {
    let out = newton_project(p, &start, p.meridian, tol)?;
    let rep = out.rep;
    let (span, irreducible) = is_irreducible(&rep, tol);
    let tr = rep.gens[p.meridian].trace();
    let dev = double_commutator_deviation(p, &rep, 200, seed)?;
    let n = rep.n();
    let (offdiag, corner) = match eigen_gauge(p, &rep, p.meridian, eigen_target, tol) {
        Ok(gauged) => {
            let a = &gauged.gens[p.meridian];
            let off = (1..n).map(|k| a[(0, k)].norm().max(a[(k, 0)].norm())).fold(0.0, f64::max);
            let other = (0..p.num_generators()).find(|&j| j != p.meridian);
            (Some(off), other.map(|j| [gauged.gens[j][(n - 1, 0)].re, gauged.gens[j][(n - 1, 0)].im]))
        }
        Err(_) => (None, None),
    };
    let report = DeformReport {
        t,
        seed,
        converged: out.status == NewtonStatus::Converged,
        status: out.status,
        iterations: out.iterations,
        start_residual: start.residual,
        residual: rep.residual,
        det_deviation: rep.det_deviation(),
        burnside_dim: span.dim,
        irreducible,
        trace_of_meridian: [tr.re, tr.im],
        metabelian_trace_test: metabelian_trace_test(&rep, p.meridian, tol),
        double_commutator_deviation: dev,
        non_metabelian: dev > tol.commutator,
        eigen_gauge_offdiag: offdiag,
        corner_entry: corner,
    };
    Ok((report, rep))
}

/// Continuation over increasing `t`: each converged solution, pushed a
/// further `(t_k - t_{k-1})` along the direction, seeds the next step.
pub fn ladder(
    p: &Presentation,
    base: &FloatRep,
    direction: &[CMatrix],
    steps: &[f64],
    seed: u64,
    eigen_target: Complex64,
    tol: &Tolerances,
) -> Result<Vec<DeformReport>> {
    let mut out = Vec::new();
    let mut current = base.clone();
    let mut prev_t = 0.0;
    let n = base.n();
    let id = CMatrix::identity(n, n);
    for &t in steps {
        let dt = Complex64::new(t - prev_t, 0.0);
        let start = FloatRep::new(
            p,
            current.gens.iter().zip(direction).map(|(g, v)| (&id + v * dt) * g).collect(),
        )?;
        let (report, rep) = deform_from(p, start, t, seed, eigen_target, tol)?;
        let ok = report.converged;
        out.push(report);
        if !ok {
            break;
        }
        current = rep;
        prev_t = t;
    }
    Ok(out)
}

/// The default continuation steps.
pub const LADDER: [f64; 3] = [1e-3, 1e-2, 5e-2];

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn m2(a: f64, b: f64, cc: f64, d: f64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(a), c(b), c(cc), c(d)])
    }

    #[test]
    fn burnside_examples() {
        let tol = 1e-9;
        assert_eq!(burnside_dim(&[m2(1.0, 1.0, 0.0, 1.0), m2(1.0, 0.0, 1.0, 1.0)], tol), 4);
        assert_eq!(burnside_dim(&[CMatrix::identity(3, 3)], tol), 1);
        assert_eq!(burnside_dim(&[m2(2.0, 1.0, 0.0, 3.0), m2(-1.0, 5.0, 0.0, 0.5)], tol), 3);
    }

    #[test]
    fn tolerance_override() {
        let t = Tolerances::from_json(r#"{"newton_residual": 1e-8}"#).unwrap();
        assert_eq!(t.newton_residual, 1e-8);
        assert_eq!(t.burnside_rel, Tolerances::default().burnside_rel);
        assert!(Tolerances::from_json(r#"{"bogus": 1}"#).is_err());
    }
}
