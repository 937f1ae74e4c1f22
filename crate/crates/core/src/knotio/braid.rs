//! Presentations of closed braids.

use crate::error::{Error, Result};
use crate::knotio::presentation::Presentation;
use crate::knotio::word::{Letter, Word};

/// A braid word on `strands` strands; entry `+i` is `sigma_i`, `-i` its
/// inverse (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Braid {
    pub strands: usize,
    pub word: Vec<i32>,
}

impl Braid {
    pub fn new(strands: usize, word: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::Parse("braid needs at least one strand".into()));
        }
        for &s in &word {
            if s == 0 || s.unsigned_abs() as usize >= strands {
                return Err(Error::Parse(format!("braid letter {s} out of range for {strands} strands")));
            }
        }
        Ok(Braid { strands, word })
    }

    /// Parse a space-separated list of signed generator indices.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let word = text
            .split_whitespace()
            .map(|t| t.parse::<i32>().map_err(|e| Error::Parse(format!("braid letter `{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, word)
    }

    /// `perm[p]` is the bottom position reached by the strand starting at
    /// top position `p`.
    pub fn permutation(&self) -> Vec<usize> {
        let mut at: Vec<usize> = (0..self.strands).collect();
        for &s in &self.word {
            let i = s.unsigned_abs() as usize - 1;
            at.swap(i, i + 1);
        }
        let mut perm = vec![0; self.strands];
        for (pos, &strand) in at.iter().enumerate() {
            perm[strand] = pos;
        }
        perm
    }

    /// Number of components of the closure (cycles of the permutation).
    pub fn components(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; self.strands];
        let mut count = 0;
        for start in 0..self.strands {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut p = start;
            while !seen[p] {
                seen[p] = true;
                p = perm[p];
            }
        }
        count
    }

    fn require_knot(&self) -> Result<()> {
        match self.components() {
            1 => Ok(()),
            k => Err(Error::MultiComponent(k)),
        }
    }
}

fn generator_names(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("x{i}") })
        .collect()
}

/// Artin presentation of the closure: one generator per strand and
/// relators `beta(x_i) x_i^-1` for all strands but the last, where the
/// braid acts on the free group by `sigma_i: x_i -> x_i x_{i+1} x_i^-1,
/// x_{i+1} -> x_i`.
pub fn presentation_from_braid(name: &str, braid: &Braid) -> Result<Presentation> {
    braid.require_knot()?;
    let s = braid.strands;
    let mut images: Vec<Word> = (0..s).map(Word::generator).collect();
    for &g in &braid.word {
        let i = g.unsigned_abs() as usize - 1;
        let (a, b) = (images[i].clone(), images[i + 1].clone());
        if g > 0 {
            images[i] = a.mul(&b).mul(&a.inverse());
            images[i + 1] = a;
        } else {
            images[i + 1] = b.inverse().mul(&a).mul(&b);
            images[i] = b;
        }
    }
    let relators = (0..s.saturating_sub(1))
        .map(|i| images[i].mul(&Word::generator(i).inverse()))
        .collect();
    Presentation::new(name, generator_names(s), relators, 0, None)
}

/// Wirtinger presentation read off the standard closed-braid diagram: one
/// generator per arc, one relator per crossing (the last one dropped).
pub fn wirtinger_from_braid(name: &str, braid: &Braid) -> Result<Presentation> {
    braid.require_knot()?;
    let s = braid.strands;
    if braid.word.is_empty() {
        return Presentation::new(name, generator_names(1), vec![], 0, None);
    }
    // arcs 0..s are the top arcs; each crossing starts a new arc
    let mut at: Vec<usize> = (0..s).collect();
    let mut next = s;
    let mut crossings = Vec::new(); // (over, under_in, under_out, sign)
    for &g in &braid.word {
        let i = g.unsigned_abs() as usize - 1;
        let (left, right) = (at[i], at[i + 1]);
        let out = next;
        next += 1;
        if g > 0 {
            // left strand passes over to the right
            crossings.push((left, right, out, 1i8));
            at[i] = out;
            at[i + 1] = left;
        } else {
            // right strand passes over to the left
            crossings.push((right, left, out, -1i8));
            at[i] = right;
            at[i + 1] = out;
        }
    }
    let mut parent: Vec<usize> = (0..next).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    for (pos, &arc) in at.iter().enumerate() {
        let (a, b) = (find(&mut parent, arc), find(&mut parent, pos));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; next];
    let mut count = 0;
    for arc in 0..next {
        let r = find(&mut parent, arc);
        if label[r] == usize::MAX {
            label[r] = count;
            count += 1;
        }
        label[arc] = label[r];
    }
    let mut relators: Vec<Word> = crossings
        .iter()
        .map(|&(o, u, y, sign)| {
            let (o, u, y) = (label[o], label[u], label[y]);
            // sign +1: y = o u o^-1, sign -1: y = o^-1 u o
            let e = sign;
            Word::from_letters([
                Letter::new(y, -1),
                Letter::new(o, e),
                Letter::new(u, 1),
                Letter::new(o, -e),
            ])
        })
        .collect();
    relators.pop();
    Presentation::new(name, generator_names(count), relators, 0, None)
}
