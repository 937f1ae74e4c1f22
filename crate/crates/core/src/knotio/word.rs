//! Freely reduced words in a finitely generated free group.

use std::fmt;

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    /// `+1` or `-1`.
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Self {
        assert!(exp == 1 || exp == -1, "letter exponent must be +-1");
        Letter { gen, exp }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, exp: -self.exp }
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(gen: usize) -> Self {
        Word(vec![Letter::new(gen, 1)])
    }

    /// Build from arbitrary letters, applying free reduction.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// From `(generator, exponent)` pairs where exponents may be any integer.
    pub fn from_powers(powers: &[(usize, i64)]) -> Self {
        Self::from_letters(powers.iter().flat_map(|&(g, e)| {
            let l = Letter::new(g, if e < 0 { -1 } else { 1 });
            std::iter::repeat_n(l, e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Self {
        Self::from_letters(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// `self * other * self^-1`
    pub fn conjugate_by(&self, by: &Word) -> Self {
        by.mul(self).mul(&by.inverse())
    }

    /// `[a, b] = a b a^-1 b^-1`
    pub fn commutator(a: &Word, b: &Word) -> Self {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// Strip letters that cancel cyclically between the two ends.
    pub fn cyclically_reduced(&self) -> Self {
        let mut lo = 0;
        let mut hi = self.0.len();
        while hi >= lo + 2 && self.0[lo] == self.0[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word(self.0[lo..hi].to_vec())
    }

    /// Rotate: letters `k..` followed by `..k`, then reduce.
    pub fn rotate(&self, k: usize) -> Self {
        if self.0.is_empty() {
            return self.clone();
        }
        let k = k % self.0.len();
        Self::from_letters(self.0[k..].iter().chain(self.0[..k].iter()).copied())
    }

    /// `sum of exp * degree[gen]`
    pub fn degree(&self, degrees: &[i64]) -> i64 {
        self.0.iter().map(|l| l.exp as i64 * degrees[l.gen]).sum()
    }

    /// Exponent sum of one generator.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.exp as i64).sum()
    }

    /// Product of images, left to right. `images[g]` and `inverses[g]` are
    /// the images of generator `g` and of its inverse.
    pub fn eval<T: Clone>(&self, images: &[T], inverses: &[T], one: T, mul: impl Fn(&T, &T) -> T) -> T {
        self.0.iter().fold(one, |acc, l| {
            let x = if l.exp > 0 { &images[l.gen] } else { &inverses[l.gen] };
            mul(&acc, x)
        })
    }

    /// Render with generator names, inverse letters upper-cased.
    pub fn display_with(&self, names: &[String]) -> String {
        self.0
            .iter()
            .map(|l| if l.exp > 0 { names[l.gen].clone() } else { names[l.gen].to_uppercase() })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|l| format!("x{}^{}", l.gen, l.exp)).collect();
        write!(f, "{}", if parts.is_empty() { "1".to_string() } else { parts.join(" ") })
    }
}

/// Random word: uniformly chosen letters, geometric length with the given
/// mean, freely reduced afterwards.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, gens: usize, mean_len: f64) -> Word {
    let stop = 1.0 / (mean_len + 1.0);
    let mut letters = Vec::new();
    while rng.gen::<f64>() >= stop {
        let g = rng.gen_range(0..gens);
        let e = if rng.gen::<bool>() { 1 } else { -1 };
        letters.push(Letter::new(g, e));
    }
    Word::from_letters(letters)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(p: &[(usize, i64)]) -> Word {
        Word::from_powers(p)
    }

    #[test]
    fn free_reduction() {
        let x = w(&[(0, 1), (1, 1), (1, -1), (0, 1)]);
        assert_eq!(x, w(&[(0, 2)]));
        assert!(x.mul(&x.inverse()).is_empty());
    }

    #[test]
    fn cyclic_reduction() {
        // a b A A -> b A
        let x = w(&[(0, 1), (1, 1), (0, -2)]);
        assert_eq!(x.len(), 4);
        assert_eq!(x.cyclically_reduced(), w(&[(1, 1), (0, -1)]));
        assert_eq!(w(&[(0, 1), (1, 1), (0, -1)]).cyclically_reduced(), w(&[(1, 1)]));
    }

    #[test]
    fn rotation_and_degree() {
        let x = w(&[(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)]);
        let deg = [1, 1];
        for k in 0..6 {
            assert_eq!(x.rotate(k).degree(&deg), 0);
        }
        assert_eq!(x.rotate(1), w(&[(1, 1), (0, 1), (1, -1), (0, -1), (1, -1), (0, 1)]));
    }

    #[test]
    fn eval_matches_integers() {
        // additive group Z^2 as a check of the fold order
        let x = w(&[(0, 2), (1, -1)]);
        let v = x.eval(&[(1, 0), (0, 1)], &[(-1, 0), (0, -1)], (0i64, 0i64), |a, b| (a.0 + b.0, a.1 + b.1));
        assert_eq!(v, (2, -1));
    }

    #[test]
    fn sampler_is_seeded() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        let wa: Vec<Word> = (0..20).map(|_| random_word(&mut a, 3, 12.0)).collect();
        let wb: Vec<Word> = (0..20).map(|_| random_word(&mut b, 3, 12.0)).collect();
        assert_eq!(wa, wb);
        assert!(wa.iter().any(|x| x.len() > 3));
    }
}
