//! End-to-end helpers: exact construction per branch of the number tower
//! followed by the float deformation setup.

use num_complex::Complex64;

use crate::cohomology::lower_left_direction;
use crate::deform::{cmax, embed_float, to_complex_matrix, FloatRep, Tolerances};
use crate::error::{Error, Result};
use crate::exactalg::{on_branches, Branches};
use crate::knotio::Presentation;
use crate::repbuilder::{build_in_tower, lambda_tower, Metabelian};
use crate::{AlgMatrix, CMatrix, QPoly};

/// Exact data for one branch: the representation and a deformation
/// direction in `Z^1(sl(n))` with non-principal lower-left entry.
#[derive(Clone, Debug)]
pub struct Branch {
    pub meta: Metabelian,
    pub direction: Option<Vec<AlgMatrix>>,
}

pub fn build_branches(p: &Presentation, factor: &QPoly, n: usize, policy: Branches) -> Result<Vec<Branch>> {
    Ok(build_branches_with(p, factor, n, policy, |_| Ok(()))?.into_iter().map(|(b, _)| b).collect())
}

/// As [`build_branches`], running `extra` on each branch inside the same
/// dynamic evaluation, so that zero divisors met by `extra` also split.
pub fn build_branches_with<T>(
    p: &Presentation,
    factor: &QPoly,
    n: usize,
    policy: Branches,
    mut extra: impl FnMut(&Branch) -> Result<T>,
) -> Result<Vec<(Branch, T)>> {
    let tower = lambda_tower(factor, n)?;
    let out = on_branches(tower, policy, |t| {
        let meta = build_in_tower(p, t, n)?;
        let direction = lower_left_direction(p, &meta.special.gens, &meta.data.alpha, p.meridian)?;
        let branch = Branch { meta, direction };
        let x = extra(&branch)?;
        Ok::<_, Error>((branch, x))
    })?;
    Ok(out.into_iter().map(|(_, b)| b).collect())
}

/// Float data for one complex embedding of the branch's tower.
#[derive(Clone, Debug)]
pub struct FloatSetup {
    pub embedding: Vec<Complex64>,
    pub base: FloatRep,
    pub direction: Option<Vec<CMatrix>>,
    /// Image of `lambda^{n-1}`, the isolated eigenvalue of the meridian.
    pub eigen_target: Complex64,
    pub lambda: Complex64,
    pub alpha: Complex64,
}

pub fn float_setup(p: &Presentation, branch: &Branch, embedding_index: usize, tol: &Tolerances) -> Result<FloatSetup> {
    let embs = branch.meta.tower.embeddings();
    let embedding = embs.get(embedding_index).cloned().ok_or_else(|| {
        Error::InvalidArgument(format!("embedding index {embedding_index} out of range (0..{})", embs.len()))
    })?;
    let base = embed_float(p, &branch.meta.special.gens, &embedding, tol)?;
    // scaled so that the largest entry has modulus one
    let direction = branch.direction.as_ref().map(|v| {
        let v: Vec<CMatrix> = v.iter().map(|m| to_complex_matrix(m, &embedding)).collect();
        let s = v.iter().map(cmax).fold(0.0, f64::max);
        v.into_iter().map(|m| m.unscale(s)).collect()
    });
    let lambda = branch.meta.lambda().to_complex(&embedding);
    let alpha = branch.meta.data.alpha.to_complex(&embedding);
    let n = branch.meta.special.n as i32;
    Ok(FloatSetup { eigen_target: lambda.powi(n - 1), lambda, alpha, embedding, base, direction })
}
