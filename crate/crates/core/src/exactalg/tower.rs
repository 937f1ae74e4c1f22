//! Towers of simple algebraic extensions `Q[x1]/(m1)[x2]/(m2)...` with
//! dynamic evaluation.
//!
//! Every modulus is monic and squarefree over the level below but it need
//! not be irreducible. Arithmetic is therefore that of a product of fields;
//! when an inversion hits a zero divisor the extended gcd exposes a
//! factorization `m = g * (m / g)` and the operation fails with
//! [`NonInvertible::Split`]. The caller then restarts on each of the two
//! towers returned by [`Tower::split`]; [`on_branches`] packages that loop.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::exactalg::poly::Poly;
use crate::numeric::poly_roots;
use crate::scalar::{rational_to_f64, Field, Rational};

/// Nested coefficient representation. An element of depth `d > 0` is a
/// polynomial in the level-`d-1` generator with coefficients of depth `d-1`,
/// reduced modulo that level's modulus and with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Elem {
    Q(Rational),
    P(Vec<Elem>),
}

#[derive(Debug, Clone, PartialEq)]
struct Level {
    /// Monic, coefficients of depth equal to this level's index.
    modulus: Vec<Elem>,
    symbol: String,
}

#[derive(Debug)]
pub struct Tower {
    levels: Vec<Level>,
    parent: Option<Arc<Tower>>,
}

/// Evidence that a modulus factors: `modulus = factor * cofactor`.
#[derive(Clone, Debug)]
pub struct Splitting {
    level: usize,
    factor: Vec<Elem>,
    cofactor: Vec<Elem>,
}

impl Splitting {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degrees(&self) -> (usize, usize) {
        (self.factor.len() - 1, self.cofactor.len() - 1)
    }
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum NonInvertible {
    #[error("division by zero")]
    Zero,
    #[error("zero divisor: level {} modulus splits into degrees {:?}", .0.level, .0.degrees())]
    Split(Box<Splitting>),
}

#[derive(Clone, Debug, thiserror::Error)]
pub enum TowerError {
    #[error("modulus must have positive degree")]
    Constant,
    #[error("modulus {0} is not squarefree over the base field")]
    NotSquarefree(String),
    #[error("cannot adjoin a root of zero")]
    ZeroRadicand,
    #[error(transparent)]
    Arith(#[from] NonInvertible),
}

impl Tower {
    fn from_levels(levels: Vec<Level>) -> Arc<Tower> {
        let parent = if levels.is_empty() {
            None
        } else {
            Some(Tower::from_levels(levels[..levels.len() - 1].to_vec()))
        };
        Arc::new(Tower { levels, parent })
    }

    /// Number of adjoined levels.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn parent(&self) -> Option<&Arc<Tower>> {
        self.parent.as_ref()
    }

    /// Degree of the tower over `Q`.
    pub fn degree(&self) -> usize {
        self.levels.iter().map(|l| l.modulus.len() - 1).product()
    }

    pub fn symbols(&self) -> Vec<&str> {
        self.levels.iter().map(|l| l.symbol.as_str()).collect()
    }

    /// Defining polynomial of level `i` with coefficients lifted to the top.
    pub fn modulus(self: &Arc<Self>, i: usize) -> Poly<Alg> {
        Poly::new(
            self.levels[i]
                .modulus
                .iter()
                .map(|c| self.wrap(lift(c.clone(), i, self.depth())))
                .collect(),
        )
    }

    fn wrap(self: &Arc<Self>, elem: Elem) -> Alg {
        Alg { tower: Some(self.clone()), elem }
    }

    /// Generator of the top level.
    pub fn generator(self: &Arc<Self>) -> Alg {
        self.level_generator(self.depth() - 1)
    }

    /// Generator of level `i`, as an element of the whole tower.
    pub fn level_generator(self: &Arc<Self>, i: usize) -> Alg {
        let x = vec![self.zero(i), self.one(i)];
        let g = self.reduce(x, i + 1);
        self.wrap(lift(g, i + 1, self.depth()))
    }

    pub fn from_rational(self: &Arc<Self>, q: &Rational) -> Alg {
        self.wrap(self.elem_of_q(q.clone(), self.depth()))
    }

    /// Reinterpret `a` in this tower. `a` must come from a prefix of this
    /// tower or from a tower this one was split from; elements are lifted
    /// and reduced modulo the (possibly refined) moduli.
    pub fn coerce(self: &Arc<Self>, a: &Alg) -> Alg {
        let from = a.tower.as_ref().map_or(0, |t| t.depth());
        assert!(from <= self.depth(), "cannot coerce into a shallower tower");
        let e = lift(a.elem.clone(), from, self.depth());
        self.wrap(self.normalize_deep(e, self.depth()))
    }

    /// Build the tower obtained by adjoining a root of `modulus`, whose
    /// coefficients live in `base` (or in `Q` when `base` is `None`).
    pub fn adjoin_root(
        base: Option<&Arc<Tower>>,
        modulus: &Poly<Alg>,
        symbol: &str,
    ) -> Result<Arc<Tower>, TowerError> {
        if modulus.degree().unwrap_or(0) == 0 {
            return Err(TowerError::Constant);
        }
        let m = modulus.monic()?;
        if !m.gcd(&m.derivative())?.is_constant() {
            return Err(TowerError::NotSquarefree(m.to_string()));
        }
        let depth = base.map_or(0, |b| b.depth());
        let coeffs = m
            .coeffs()
            .iter()
            .map(|c| match base {
                Some(b) => b.coerce(c).elem,
                None => match &c.tower {
                    None => c.elem.clone(),
                    Some(_) => panic!("modulus coefficient outside the base field"),
                },
            })
            .collect::<Vec<_>>();
        debug_assert!(coeffs.iter().all(|c| elem_depth_ok(c, depth)));
        let mut levels = base.map(|b| b.levels.clone()).unwrap_or_default();
        levels.push(Level { modulus: coeffs, symbol: symbol.to_string() });
        Ok(Tower::from_levels(levels))
    }

    /// Tower in which the new symbol `lambda` satisfies `lambda^n = alpha`.
    pub fn adjoin_nth_root(alpha: &Alg, n: usize, symbol: &str) -> Result<Arc<Tower>, TowerError> {
        if alpha.is_zero() {
            return Err(TowerError::ZeroRadicand);
        }
        let mut coeffs = vec![Alg::zero(); n + 1];
        coeffs[0] = -alpha.clone();
        coeffs[n] = Alg::one();
        Tower::adjoin_root(alpha.tower.as_ref(), &Poly::new(coeffs), symbol)
    }

    /// The two towers obtained by replacing the split modulus by its factor
    /// and by its cofactor. Levels above are reduced accordingly.
    pub fn split(&self, s: &Splitting) -> [Arc<Tower>; 2] {
        assert!(s.level < self.depth(), "splitting refers to a missing level");
        [&s.factor, &s.cofactor].map(|m| {
            let mut levels = self.levels.clone();
            levels[s.level].modulus = m.clone();
            let mut t = Tower { levels, parent: None };
            for i in s.level + 1..t.levels.len() {
                let m = std::mem::take(&mut t.levels[i].modulus);
                t.levels[i].modulus = m.into_iter().map(|c| t.normalize_deep(c, i)).collect();
            }
            Tower::from_levels(t.levels)
        })
    }

    /// All complex embeddings, as the tuple of images of the level
    /// generators. Ordering is deterministic: level by level, roots sorted
    /// by real part and then imaginary part.
    pub fn embeddings(&self) -> Vec<Vec<Complex64>> {
        let mut partial: Vec<Vec<Complex64>> = vec![Vec::new()];
        for (i, level) in self.levels.iter().enumerate() {
            let mut next = Vec::new();
            for roots in &partial {
                let coeffs: Vec<Complex64> =
                    level.modulus.iter().map(|c| self.eval_elem(c, i, roots)).collect();
                for r in poly_roots(&coeffs) {
                    let mut v = roots.clone();
                    v.push(r);
                    next.push(v);
                }
            }
            partial = next;
        }
        partial
    }

    fn eval_elem(&self, e: &Elem, depth: usize, roots: &[Complex64]) -> Complex64 {
        match e {
            Elem::Q(q) => Complex64::new(rational_to_f64(q), 0.0),
            Elem::P(cs) => {
                let x = roots[depth - 1];
                cs.iter()
                    .rev()
                    .fold(Complex64::zero(), |acc, c| acc * x + self.eval_elem(c, depth - 1, roots))
            }
        }
    }

    // ---- element arithmetic at a given depth -------------------------------

    fn zero(&self, d: usize) -> Elem {
        if d == 0 {
            Elem::Q(Rational::zero())
        } else {
            Elem::P(Vec::new())
        }
    }

    fn one(&self, d: usize) -> Elem {
        self.elem_of_q(Rational::one(), d)
    }

    fn elem_of_q(&self, q: Rational, d: usize) -> Elem {
        lift(Elem::Q(q), 0, d)
    }

    fn add(&self, a: &Elem, b: &Elem, d: usize) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (Elem::P(x), Elem::P(y)) => Elem::P(self.padd(x, y, d - 1)),
            _ => unreachable!("depth mismatch"),
        }
    }

    fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Q(x) => Elem::Q(-x),
            Elem::P(x) => Elem::P(x.iter().map(|c| self.neg(c)).collect()),
        }
    }

    fn sub(&self, a: &Elem, b: &Elem, d: usize) -> Elem {
        self.add(a, &self.neg(b), d)
    }

    fn mul(&self, a: &Elem, b: &Elem, d: usize) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (Elem::P(x), Elem::P(y)) => self.reduce(self.pmul(x, y, d - 1), d),
            _ => unreachable!("depth mismatch"),
        }
    }

    fn inv(&self, a: &Elem, d: usize) -> Result<Elem, NonInvertible> {
        match a {
            Elem::Q(x) => x.try_inv().map(Elem::Q),
            Elem::P(x) => {
                if x.is_empty() {
                    return Err(NonInvertible::Zero);
                }
                let k = d - 1;
                let m = &self.levels[k].modulus;
                let (g, s) = self.pxgcd(x, m, k)?;
                if g.len() > 1 {
                    let (cof, r) = self.pdivrem(m, &g, k)?;
                    debug_assert!(r.is_empty());
                    return Err(NonInvertible::Split(Box::new(Splitting {
                        level: k,
                        factor: g,
                        cofactor: cof,
                    })));
                }
                Ok(self.reduce(s, d))
            }
        }
    }

    fn is_zero_elem(e: &Elem) -> bool {
        match e {
            Elem::Q(q) => q.is_zero(),
            Elem::P(v) => v.is_empty(),
        }
    }

    /// Reduce a coefficient vector (depth `d-1` entries) modulo level `d-1`.
    fn reduce(&self, mut cs: Vec<Elem>, d: usize) -> Elem {
        let k = d - 1;
        let m = &self.levels[k].modulus;
        let dm = m.len() - 1;
        while cs.len() > dm {
            let top = cs.pop().unwrap();
            if Self::is_zero_elem(&top) {
                continue;
            }
            let base = cs.len() - dm;
            for (i, mi) in m[..dm].iter().enumerate() {
                let t = self.mul(&top, mi, k);
                cs[base + i] = self.sub(&cs[base + i], &t, k);
            }
        }
        trim(&mut cs);
        Elem::P(cs)
    }

    fn normalize_deep(&self, e: Elem, d: usize) -> Elem {
        match e {
            Elem::Q(_) => e,
            Elem::P(cs) => {
                let cs = cs.into_iter().map(|c| self.normalize_deep(c, d - 1)).collect();
                self.reduce(cs, d)
            }
        }
    }

    // ---- polynomials over the depth-k field ---------------------------------

    fn padd(&self, a: &[Elem], b: &[Elem], k: usize) -> Vec<Elem> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => self.add(x, y, k),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            });
        }
        trim(&mut out);
        out
    }

    fn pmul(&self, a: &[Elem], b: &[Elem], k: usize) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(k); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if Self::is_zero_elem(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = self.mul(x, y, k);
                out[i + j] = self.add(&out[i + j], &t, k);
            }
        }
        trim(&mut out);
        out
    }

    fn pscale(&self, a: &[Elem], c: &Elem, k: usize) -> Vec<Elem> {
        let mut out: Vec<Elem> = a.iter().map(|x| self.mul(x, c, k)).collect();
        trim(&mut out);
        out
    }

    fn pdivrem(&self, a: &[Elem], b: &[Elem], k: usize) -> Result<(Vec<Elem>, Vec<Elem>), NonInvertible> {
        let db = b.len().checked_sub(1).ok_or(NonInvertible::Zero)?;
        let li = self.inv(b.last().unwrap(), k)?;
        let mut rem = a.to_vec();
        if rem.len() <= db {
            return Ok((Vec::new(), rem));
        }
        let mut quot = vec![self.zero(k); rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = self.mul(&rem[top], &li, k);
            if Self::is_zero_elem(&c) {
                continue;
            }
            for (i, bi) in b.iter().enumerate() {
                let t = self.mul(&c, bi, k);
                rem[top - db + i] = self.sub(&rem[top - db + i], &t, k);
            }
            quot[top - db] = c;
        }
        rem.truncate(db);
        trim(&mut rem);
        trim(&mut quot);
        Ok((quot, rem))
    }

    /// Monic `g = gcd(a, m)` and `s` with `s*a = g (mod m)`.
    fn pxgcd(&self, a: &[Elem], m: &[Elem], k: usize) -> Result<(Vec<Elem>, Vec<Elem>), NonInvertible> {
        let (mut r0, mut r1) = (a.to_vec(), m.to_vec());
        let (mut s0, mut s1) = (vec![self.one(k)], Vec::new());
        while !r1.is_empty() {
            let (q, r) = self.pdivrem(&r0, &r1, k)?;
            r0 = std::mem::replace(&mut r1, r);
            let qs = self.pmul(&q, &s1, k);
            let neg: Vec<Elem> = qs.iter().map(|c| self.neg(c)).collect();
            let s = self.padd(&s0, &neg, k);
            s0 = std::mem::replace(&mut s1, s);
        }
        let li = self.inv(r0.last().ok_or(NonInvertible::Zero)?, k)?;
        Ok((self.pscale(&r0, &li, k), self.pscale(&s0, &li, k)))
    }

    fn format_elem(&self, e: &Elem, d: usize) -> String {
        match e {
            Elem::Q(q) => q.to_string(),
            Elem::P(cs) => {
                let sym = &self.levels[d - 1].symbol;
                let mut parts = Vec::new();
                for (i, c) in cs.iter().enumerate().rev() {
                    if Self::is_zero_elem(c) {
                        continue;
                    }
                    let mut s = self.format_elem(c, d - 1);
                    let compound = s.contains(' ');
                    if i > 0 {
                        let mono = if i == 1 { sym.clone() } else { format!("{sym}^{i}") };
                        s = match s.as_str() {
                            "1" => mono,
                            "-1" => format!("-{mono}"),
                            _ if compound => format!("({s})*{mono}"),
                            _ => format!("{s}*{mono}"),
                        };
                    } else if compound && cs.len() > 1 {
                        s = format!("({s})");
                    }
                    parts.push(s);
                }
                if parts.is_empty() {
                    return "0".into();
                }
                let mut out = parts[0].clone();
                for p in &parts[1..] {
                    match p.strip_prefix('-') {
                        Some(rest) => out += &format!(" - {rest}"),
                        None => out += &format!(" + {p}"),
                    }
                }
                out
            }
        }
    }
}

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels
    }
}

fn trim(v: &mut Vec<Elem>) {
    while v.last().is_some_and(Tower::is_zero_elem) {
        v.pop();
    }
}

fn lift(mut e: Elem, from: usize, to: usize) -> Elem {
    for _ in from..to {
        e = if Tower::is_zero_elem(&e) { Elem::P(Vec::new()) } else { Elem::P(vec![e]) };
    }
    e
}

fn elem_depth_ok(e: &Elem, d: usize) -> bool {
    match e {
        Elem::Q(_) => d == 0,
        Elem::P(cs) => d > 0 && cs.iter().all(|c| elem_depth_ok(c, d - 1)),
    }
}

/// An element of a number tower. Elements without a tower are rationals and
/// coerce into any tower on contact.
#[derive(Clone, Debug)]
pub struct Alg {
    tower: Option<Arc<Tower>>,
    elem: Elem,
}

impl Alg {
    pub fn rational(q: Rational) -> Self {
        Alg { tower: None, elem: Elem::Q(q) }
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.tower.as_ref()
    }

    /// The rational value, if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        let mut e = &self.elem;
        loop {
            match e {
                Elem::Q(q) => return Some(q.clone()),
                Elem::P(cs) if cs.is_empty() => return Some(Rational::zero()),
                Elem::P(cs) if cs.len() == 1 => e = &cs[0],
                Elem::P(_) => return None,
            }
        }
    }

    /// Image under a complex embedding from [`Tower::embeddings`].
    pub fn to_complex(&self, embedding: &[Complex64]) -> Complex64 {
        match &self.tower {
            None => match &self.elem {
                Elem::Q(q) => Complex64::new(rational_to_f64(q), 0.0),
                Elem::P(_) => unreachable!(),
            },
            Some(t) => t.eval_elem(&self.elem, t.depth(), embedding),
        }
    }

    fn depth(&self) -> usize {
        self.tower.as_ref().map_or(0, |t| t.depth())
    }

    /// Bring two elements into a common tower.
    fn unify(a: &Alg, b: &Alg) -> (Option<Arc<Tower>>, Elem, Elem) {
        match (&a.tower, &b.tower) {
            (None, None) => (None, a.elem.clone(), b.elem.clone()),
            (Some(t), Some(u)) if Arc::ptr_eq(t, u) => (Some(t.clone()), a.elem.clone(), b.elem.clone()),
            _ => {
                let (da, db) = (a.depth(), b.depth());
                let top = if da >= db { a.tower.clone().unwrap() } else { b.tower.clone().unwrap() };
                let other = if da >= db { &b.tower } else { &a.tower };
                if let Some(o) = other {
                    assert!(is_prefix(o, &top), "elements from unrelated number towers");
                }
                let d = top.depth();
                (Some(top), lift(a.elem.clone(), da, d), lift(b.elem.clone(), db, d))
            }
        }
    }

    fn binop(&self, rhs: &Alg, f: impl Fn(&Tower, &Elem, &Elem, usize) -> Elem) -> Alg {
        match Alg::unify(self, rhs) {
            (None, Elem::Q(x), Elem::Q(y)) => {
                let dummy = Tower { levels: Vec::new(), parent: None };
                Alg { tower: None, elem: f(&dummy, &Elem::Q(x), &Elem::Q(y), 0) }
            }
            (Some(t), x, y) => {
                let d = t.depth();
                let elem = f(&t, &x, &y, d);
                Alg { tower: Some(t), elem }
            }
            _ => unreachable!(),
        }
    }
}

fn is_prefix(short: &Arc<Tower>, long: &Arc<Tower>) -> bool {
    let mut cur = Some(long);
    while let Some(t) = cur {
        if Arc::ptr_eq(t, short) || (t.depth() == short.depth() && **t == **short) {
            return true;
        }
        if t.depth() < short.depth() {
            return false;
        }
        cur = t.parent.as_ref();
    }
    false
}

impl PartialEq for Alg {
    fn eq(&self, other: &Self) -> bool {
        let (_, a, b) = Alg::unify(self, other);
        a == b
    }
}

impl Zero for Alg {
    fn zero() -> Self {
        Alg::rational(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        Tower::is_zero_elem(&self.elem)
    }
}

impl One for Alg {
    fn one() -> Self {
        Alg::rational(Rational::one())
    }
}

impl std::ops::Add for Alg {
    type Output = Alg;

    fn add(self, rhs: Alg) -> Alg {
        self.binop(&rhs, |t, x, y, d| t.add(x, y, d))
    }
}

impl std::ops::Sub for Alg {
    type Output = Alg;

    fn sub(self, rhs: Alg) -> Alg {
        self.binop(&rhs, |t, x, y, d| t.sub(x, y, d))
    }
}

impl std::ops::Mul for Alg {
    type Output = Alg;

    fn mul(self, rhs: Alg) -> Alg {
        self.binop(&rhs, |t, x, y, d| t.mul(x, y, d))
    }
}

impl std::ops::Neg for Alg {
    type Output = Alg;

    fn neg(self) -> Alg {
        let elem = match &self.tower {
            Some(t) => t.neg(&self.elem),
            None => match self.elem {
                Elem::Q(q) => Elem::Q(-q),
                Elem::P(_) => unreachable!(),
            },
        };
        Alg { tower: self.tower, elem }
    }
}

impl Field for Alg {
    fn try_inv(&self) -> Result<Self, NonInvertible> {
        match &self.tower {
            None => match &self.elem {
                Elem::Q(q) => Ok(Alg::rational(q.try_inv()?)),
                Elem::P(_) => unreachable!(),
            },
            Some(t) => Ok(Alg { tower: Some(t.clone()), elem: t.inv(&self.elem, t.depth())? }),
        }
    }

    fn from_rational(q: &Rational) -> Self {
        Alg::rational(q.clone())
    }
}

impl fmt::Display for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tower {
            None => match &self.elem {
                Elem::Q(q) => write!(f, "{q}"),
                Elem::P(_) => unreachable!(),
            },
            Some(t) => write!(f, "{}", t.format_elem(&self.elem, t.depth())),
        }
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        for (i, l) in self.levels.iter().enumerate() {
            let mut parts = Vec::new();
            for (k, c) in l.modulus.iter().enumerate().rev() {
                if Tower::is_zero_elem(c) {
                    continue;
                }
                let cs = if i == 0 { self.format_q(c) } else { self.format_elem(c, i) };
                let mono = match k {
                    0 => String::new(),
                    1 => l.symbol.clone(),
                    _ => format!("{}^{k}", l.symbol),
                };
                parts.push(match (cs.as_str(), k) {
                    (_, 0) => cs.clone(),
                    ("1", _) => mono,
                    ("-1", _) => format!("-{mono}"),
                    _ if cs.contains(' ') => format!("({cs})*{mono}"),
                    _ => format!("{cs}*{mono}"),
                });
            }
            write!(f, "[{}]/({})", l.symbol, parts.join(" + ").replace("+ -", "- "))?;
        }
        Ok(())
    }
}

impl Tower {
    fn format_q(&self, e: &Elem) -> String {
        match e {
            Elem::Q(q) => q.to_string(),
            Elem::P(_) => unreachable!(),
        }
    }
}

/// Which branches of a dynamic-evaluation computation to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branches {
    /// Stop at the first branch that completes.
    First,
    /// Explore every branch produced by splitting.
    All,
}

/// Run `f` on `tower`, restarting on both halves whenever a zero divisor
/// splits a modulus. Returns the successful `(tower, value)` pairs in
/// depth-first order (factor before cofactor).
pub fn on_branches<T, E>(
    tower: Arc<Tower>,
    policy: Branches,
    mut f: impl FnMut(&Arc<Tower>) -> Result<T, E>,
) -> Result<Vec<(Arc<Tower>, T)>, E>
where
    E: AsSplit,
{
    let mut stack = vec![tower];
    let mut out = Vec::new();
    while let Some(t) = stack.pop() {
        match f(&t) {
            Ok(v) => {
                out.push((t, v));
                if policy == Branches::First {
                    break;
                }
            }
            Err(e) => match e.as_split() {
                Some(s) => {
                    let [a, b] = t.split(s);
                    stack.push(b);
                    stack.push(a);
                }
                None => return Err(e),
            },
        }
    }
    Ok(out)
}

/// Errors that may carry a modulus splitting.
pub trait AsSplit {
    fn as_split(&self) -> Option<&Splitting>;
}

impl AsSplit for NonInvertible {
    fn as_split(&self) -> Option<&Splitting> {
        match self {
            NonInvertible::Split(s) => Some(s),
            NonInvertible::Zero => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn q(n: i64) -> Alg {
        Alg::rational(int(n))
    }

    fn poly(cs: &[i64]) -> Poly<Alg> {
        Poly::new(cs.iter().map(|&c| q(c)).collect())
    }

    fn cyclotomic6() -> Arc<Tower> {
        Tower::adjoin_root(None, &poly(&[1, -1, 1]), "a").unwrap()
    }

    #[test]
    fn defining_relation() {
        let t = cyclotomic6();
        let a = t.generator();
        assert_eq!(t.degree(), 2);
        assert_eq!(a.clone() * a.clone(), a - q(1));
    }

    #[test]
    fn nth_root_over_alpha() {
        let t = cyclotomic6();
        let a = t.generator();
        let s = Tower::adjoin_nth_root(&a, 2, "l").unwrap();
        let l = s.generator();
        assert_eq!(l.clone() * l.clone(), s.coerce(&a));
        let l4 = l.try_powi(4).unwrap();
        assert_eq!(l4, l.clone() * l.clone() - q(1));
        assert_eq!(s.degree(), 4);
    }

    #[test]
    fn trivial_root() {
        let s = Tower::adjoin_nth_root(&q(1), 1, "l").unwrap();
        assert_eq!(s.generator(), q(1));
    }

    #[test]
    fn rejects_non_squarefree() {
        let e = Tower::adjoin_root(None, &poly(&[1, -2, 1]), "a").unwrap_err();
        assert!(matches!(e, TowerError::NotSquarefree(_)));
    }

    #[test]
    fn inverse_roundtrip() {
        let s = Tower::adjoin_nth_root(&cyclotomic6().generator(), 3, "l").unwrap();
        let l = s.generator();
        let x = l.clone() * l.clone() + q(3) * l.clone() - q(2);
        let xi = x.try_inv().unwrap();
        assert_eq!(x * xi, q(1));
    }

    #[test]
    fn zero_divisor_splits() {
        // Q[x]/(x^2 - 3x + 2) = Q x Q; x - 1 is a zero divisor
        let t = Tower::adjoin_root(None, &poly(&[2, -3, 1]), "a").unwrap();
        let zd = t.generator() - q(1);
        let err = zd.try_inv().unwrap_err();
        let NonInvertible::Split(s) = err else { panic!("expected split") };
        assert_eq!(s.degrees(), (1, 1));
        let [a, b] = t.split(&s);
        assert_eq!(a.generator(), q(1));
        assert_eq!(b.generator(), q(2));
    }

    #[test]
    fn branches_driver() {
        let t = Tower::adjoin_root(None, &poly(&[2, -3, 1]), "a").unwrap();
        let res = on_branches(t, Branches::All, |t| {
            let x = t.generator() - q(1);
            if x.is_zero() {
                return Ok(None);
            }
            x.try_inv().map(|_| t.generator().as_rational())
        })
        .unwrap();
        let vals: Vec<_> = res.into_iter().map(|(_, v)| v).collect();
        assert_eq!(vals, vec![None, Some(int(2))]);
    }

    #[test]
    fn split_below_extension() {
        // a^2 = 1 split into a = 1 and a = -1, with l^2 = a above it
        let t = Tower::adjoin_root(None, &poly(&[-1, 0, 1]), "a").unwrap();
        let s = Tower::adjoin_nth_root(&t.generator(), 2, "l").unwrap();
        let a = s.level_generator(0);
        let err = (a - q(1)).try_inv().unwrap_err();
        let NonInvertible::Split(sp) = err else { panic!() };
        let [u, v] = s.split(&sp);
        let (lu, lv) = (u.generator(), v.generator());
        assert_eq!(lu.clone() * lu, u.level_generator(0));
        assert_eq!(lv.clone() * lv, v.level_generator(0));
    }

    #[test]
    fn embeddings_are_roots() {
        let t = cyclotomic6();
        let s = Tower::adjoin_nth_root(&t.generator(), 2, "l").unwrap();
        let embs = s.embeddings();
        assert_eq!(embs.len(), 4);
        for e in &embs {
            let l = s.generator().to_complex(e);
            let a = s.level_generator(0).to_complex(e);
            assert!((l * l - a).norm() < 1e-12);
            assert!((a * a - a + 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn display() {
        let t = cyclotomic6();
        let a = t.generator();
        assert_eq!(a.try_inv().unwrap().to_string(), "-a + 1");
        assert_eq!(t.to_string(), "Q[a]/(a^2 - a + 1)");
    }
}
