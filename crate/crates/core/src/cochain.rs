//! Inhomogeneous cochains of degree at most 3 on a finitely presented group,
//! evaluated on words: the binomial cochains `h_k`, cup products and the
//! coboundary.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactalg::Matrix;
use crate::knotio::{random_word, Presentation, Word};
use crate::scalar::{binomial, Field};

/// Highest cochain degree that can be built. Degree-3 cochains only arise
/// as coboundaries of degree-2 ones, for checking the product rule.
pub const MAX_DEGREE: usize = 3;

/// A group action on `F^dim` given by one matrix per generator.
#[derive(Clone, Debug, PartialEq)]
pub struct ActionModule<F> {
    pub dim: usize,
    pub gens: Vec<Matrix<F>>,
    pub invs: Vec<Matrix<F>>,
}

impl<F: Field> ActionModule<F> {
    pub fn new(gens: Vec<Matrix<F>>) -> Result<Self> {
        let dim = gens.first().map_or(0, |m| m.rows());
        let invs = gens.iter().map(|m| m.inverse()).collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(ActionModule { dim, gens, invs })
    }

    /// `F` with every generator acting trivially.
    pub fn trivial(num_generators: usize) -> Self {
        let one = Matrix::identity(1);
        ActionModule { dim: 1, gens: vec![one.clone(); num_generators], invs: vec![one; num_generators] }
    }

    /// `F_alpha`: generator `S` acts by `alpha^{h(S)}`.
    pub fn scalar(h: &[i64], alpha: &F) -> Result<Self> {
        let gens = h
            .iter()
            .map(|&e| Ok(Matrix::from_rows(vec![vec![alpha.try_powi(e)?]])))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Matrix of a word.
    pub fn word_matrix(&self, w: &Word) -> Matrix<F> {
        w.eval(&self.gens, &self.invs, Matrix::identity(self.dim), |a, b| a * b)
    }

    /// `w . v`
    pub fn act(&self, w: &Word, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for l in w.letters().iter().rev() {
            let m = if l.exp > 0 { &self.gens[l.gen] } else { &self.invs[l.gen] };
            out = m.mul_vec(&out);
        }
        out
    }

    /// Every relator acts as the identity.
    pub fn is_action_of(&self, p: &Presentation) -> bool {
        self.gens.len() == p.num_generators()
            && p.relators.iter().all(|r| self.word_matrix(r) == Matrix::identity(self.dim))
    }
}

type Evaluator<F> = dyn Fn(&[Word]) -> Vec<F> + Send + Sync;

/// A `q`-cochain with values in an [`ActionModule`].
#[derive(Clone)]
pub struct Cochain<F> {
    degree: usize,
    module: Arc<ActionModule<F>>,
    eval: Arc<Evaluator<F>>,
}

impl<F: Field + Send + Sync + 'static> Cochain<F> {
    pub fn new(
        degree: usize,
        module: Arc<ActionModule<F>>,
        f: impl Fn(&[Word]) -> Vec<F> + Send + Sync + 'static,
    ) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("cochain degree {degree} exceeds {MAX_DEGREE}")));
        }
        Ok(Cochain { degree, module, eval: Arc::new(f) })
    }

    pub fn zero(degree: usize, module: Arc<ActionModule<F>>) -> Result<Self> {
        let m = module.dim;
        Self::new(degree, module, move |_| vec![F::zero(); m])
    }

    /// The 0-cochain with value `x`.
    pub fn constant(module: Arc<ActionModule<F>>, x: Vec<F>) -> Result<Self> {
        assert_eq!(x.len(), module.dim);
        Self::new(0, module, move |_| x.clone())
    }

    /// The 1-cochain `gamma -> C(h(gamma), k)` with trivial coefficients.
    pub fn h_k(h: &[i64], k: u32) -> Self {
        let h = h.to_vec();
        let module = Arc::new(ActionModule::trivial(h.len()));
        Self::new(1, module, move |args| vec![F::from_rational(&binomial(args[0].degree(&h), k))]).unwrap()
    }

    /// The derivation determined by its values on generators, extended by
    /// `z(ab) = z(a) + a.z(b)`. Well defined on the group iff it is a cocycle.
    pub fn derivation(module: Arc<ActionModule<F>>, values: Vec<Vec<F>>) -> Result<Self> {
        if values.len() != module.num_generators() || values.iter().any(|v| v.len() != module.dim) {
            return Err(Error::InvalidArgument("derivation needs one module vector per generator".into()));
        }
        let m = module.clone();
        Self::new(1, module, move |args| {
            let w = &args[0];
            let letters = w.letters();
            let mut acc = vec![F::zero(); m.dim];
            for (k, l) in letters.iter().enumerate() {
                // x^{-1} contributes -(prefix x^{-1}).z(x)
                let upto = if l.exp > 0 { k } else { k + 1 };
                let prefix = Word::from_letters(letters[..upto].iter().copied());
                let term = m.act(&prefix, &values[l.gen]);
                for (a, t) in acc.iter_mut().zip(term) {
                    *a = if l.exp > 0 { a.clone() + t } else { a.clone() - t };
                }
            }
            acc
        })
    }

    /// A cochain on words that is generally not a cocycle: a seeded
    /// integer weight for each (argument, position mod 4, letter), summed.
    pub fn pseudo_random(degree: usize, module: Arc<ActionModule<F>>, seed: u64) -> Result<Self> {
        use rand::Rng;
        let g = module.num_generators();
        let m = module.dim;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<i64> = (0..degree.max(1) * 4 * 2 * g * m).map(|_| rng.gen_range(-3..=3)).collect();
        Self::new(degree, module, move |args| {
            let mut acc = vec![0i64; m];
            for (i, w) in args.iter().enumerate() {
                for (k, l) in w.letters().iter().enumerate() {
                    let e = if l.exp > 0 { 0 } else { 1 };
                    let base = (((i * 4 + k % 4) * 2 + e) * g + l.gen) * m;
                    for (c, a) in acc.iter_mut().enumerate() {
                        *a += weights[base + c] * (k as i64 + 1);
                    }
                }
            }
            acc.into_iter().map(F::from_i64).collect()
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> &Arc<ActionModule<F>> {
        &self.module
    }

    pub fn eval(&self, args: &[Word]) -> Vec<F> {
        assert_eq!(args.len(), self.degree, "cochain of degree {} evaluated on {} arguments", self.degree, args.len());
        (self.eval)(args)
    }

    /// Scalar-valued evaluation for one-dimensional modules.
    pub fn eval1(&self, args: &[Word]) -> F {
        let v = self.eval(args);
        assert_eq!(v.len(), 1);
        v.into_iter().next().unwrap()
    }

    fn combine(&self, other: &Self, sign: F) -> Result<Self> {
        if self.degree != other.degree || self.module.dim != other.module.dim {
            return Err(Error::InvalidArgument("adding cochains of different type".into()));
        }
        let (a, b) = (self.clone(), other.clone());
        Self::new(self.degree, self.module.clone(), move |args| {
            a.eval(args).into_iter().zip(b.eval(args)).map(|(x, y)| x + sign.clone() * y).collect()
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, F::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -F::one())
    }

    pub fn scale(&self, c: F) -> Self {
        let a = self.clone();
        Self::new(self.degree, self.module.clone(), move |args| {
            a.eval(args).into_iter().map(|x| c.clone() * x).collect()
        })
        .unwrap()
    }

    /// `u ⌣ v (g_1..g_{p+q}) = pair(u(g_1..g_p), (g_1...g_p).v(g_{p+1}..))`
    /// followed by a bilinear `pair` into `target`.
    pub fn cup_with(
        &self,
        v: &Self,
        target: Arc<ActionModule<F>>,
        pair: impl Fn(&[F], &[F]) -> Vec<F> + Send + Sync + 'static,
    ) -> Result<Self> {
        let p = self.degree;
        let (u, v) = (self.clone(), v.clone());
        Self::new(p + v.degree, target, move |args| {
            let left = u.eval(&args[..p]);
            let g = args[..p].iter().fold(Word::identity(), |acc, w| acc.mul(w));
            let right = v.module.act(&g, &v.eval(&args[p..]));
            pair(&left, &right)
        })
    }

    /// Cup product with the scalar pairing: one factor must be
    /// one-dimensional with trivial action; the result lives in the other
    /// factor's module.
    pub fn cup(&self, v: &Self) -> Result<Self> {
        let trivial = |c: &Self| c.module.dim == 1 && c.module.gens.iter().all(|m| m[(0, 0)] == F::one());
        if trivial(self) {
            self.cup_with(v, v.module.clone(), |a, b| b.iter().map(|x| a[0].clone() * x.clone()).collect())
        } else if trivial(v) {
            self.cup_with(v, self.module.clone(), |a, b| a.iter().map(|x| x.clone() * b[0].clone()).collect())
        } else if self.module.dim == 1 && v.module.dim == 1 {
            // F_a (x) F_b = F_ab
            let gens = (0..self.module.num_generators())
                .map(|j| &self.module.gens[j] * &v.module.gens[j])
                .collect();
            let target = Arc::new(ActionModule::new(gens)?);
            self.cup_with(v, target, |a, b| vec![a[0].clone() * b[0].clone()])
        } else {
            Err(Error::InvalidArgument("cup needs an explicit pairing for these modules".into()))
        }
    }

    /// `df(g_1..g_{q+1}) = g_1.f(g_2..) + sum_i (-1)^i f(.., g_i g_{i+1}, ..) + (-1)^{q+1} f(g_1..g_q)`
    pub fn coboundary(&self) -> Result<Self> {
        let q = self.degree;
        let f = self.clone();
        Self::new(q + 1, self.module.clone(), move |args| {
            let mut acc = f.module.act(&args[0], &f.eval(&args[1..]));
            for i in 1..=q {
                let mut merged: Vec<Word> = args[..i - 1].to_vec();
                merged.push(args[i - 1].mul(&args[i]));
                merged.extend_from_slice(&args[i + 1..]);
                let val = f.eval(&merged);
                for (a, x) in acc.iter_mut().zip(val) {
                    *a = if i % 2 == 1 { a.clone() - x } else { a.clone() + x };
                }
            }
            let last = f.eval(&args[..q]);
            for (a, x) in acc.iter_mut().zip(last) {
                *a = if q.is_multiple_of(2) { a.clone() - x } else { a.clone() + x };
            }
            acc
        })
    }
}

/// Check `d h_k + sum_{i=1}^{k-1} h_i ⌣ h_{k-i} = 0` on random word pairs
/// in the generators of `p` (mean word length 12).
pub fn verify_hk_identity(p: &Presentation, k: u32, samples: usize, seed: u64) -> Result<bool> {
    use crate::scalar::Rational;
    let lhs = hk_identity_cochain(&p.h, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let a = random_word(&mut rng, p.num_generators(), 12.0);
        let b = random_word(&mut rng, p.num_generators(), 12.0);
        let v: Rational = lhs.eval1(&[a, b]);
        if v != Rational::from_integer(0.into()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of comparing `d(u ⌣ v)` with the two candidate product rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignRuleCheck {
    pub samples: usize,
    /// Samples where `d(u⌣v) != (-1)^q du⌣v + u⌣dv`.
    pub stated_form_failures: usize,
    /// Samples where `d(u⌣v) != du⌣v + (-1)^p u⌣dv`.
    pub leibniz_failures: usize,
}

/// Evaluate both product rules for `u ⌣ v` on random word tuples.
pub fn check_sign_rule<F: Field + Send + Sync + 'static>(
    u: &Cochain<F>,
    v: &Cochain<F>,
    samples: usize,
    seed: u64,
) -> Result<SignRuleCheck> {
    let (p, q) = (u.degree(), v.degree());
    let lhs = u.cup(v)?.coboundary()?;
    let du_v = u.coboundary()?.cup(v)?;
    let u_dv = u.cup(&v.coboundary()?)?;
    let sign = |e: usize| if e.is_multiple_of(2) { F::one() } else { -F::one() };
    let stated = du_v.scale(sign(q)).add(&u_dv)?;
    let leibniz = du_v.add(&u_dv.scale(sign(p)))?;
    let gens = u.module().num_generators();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SignRuleCheck { samples, stated_form_failures: 0, leibniz_failures: 0 };
    for _ in 0..samples {
        let args: Vec<Word> = (0..p + q + 1).map(|_| random_word(&mut rng, gens, 12.0)).collect();
        let l = lhs.eval(&args);
        if stated.eval(&args) != l {
            out.stated_form_failures += 1;
        }
        if leibniz.eval(&args) != l {
            out.leibniz_failures += 1;
        }
    }
    Ok(out)
}

/// `d h_k + sum_{i=1}^{k-1} h_i ⌣ h_{k-i}` as a 2-cochain.
pub fn hk_identity_cochain<F: Field + Send + Sync + 'static>(h: &[i64], k: u32) -> Result<Cochain<F>> {
    let mut acc = Cochain::<F>::h_k(h, k).coboundary()?;
    for i in 1..k {
        acc = acc.add(&Cochain::h_k(h, i).cup(&Cochain::h_k(h, k - i))?)?;
    }
    Ok(acc)
}
