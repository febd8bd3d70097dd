//! Words and integer-coefficient noncommutative polynomials: the free
//! algebra over Z generated by the letters {e_p | p in F}.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Zero};

use crate::ratfield::RatFun;

/// A monomial: a finite (possibly empty) sequence of letters. The empty
/// word is the unit 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<RatFun>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(letter: RatFun) -> Self {
        Word(vec![letter])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[RatFun] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// The word with the letter at `i` (0-based) removed.
    pub fn delete(&self, i: usize) -> Word {
        let mut letters = self.0.clone();
        letters.remove(i);
        Word(letters)
    }
}

// Graded order: by length, then lexicographic on the letters.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for letter in &self.0 {
            write!(f, "e[{}]", letter)?;
        }
        Ok(())
    }
}

/// An element of the free algebra: a finite Z-linear combination of words.
/// No zero coefficients are stored; the term map order is the canonical
/// display order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, BigInt>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly::default()
    }

    pub fn one() -> Self {
        NcPoly::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        NcPoly { terms }
    }

    pub fn from_term(w: Word, coeff: BigInt) -> Self {
        let mut p = NcPoly::zero();
        p.add_term(w, coeff);
        p
    }

    pub fn letter(l: RatFun) -> Self {
        NcPoly::from_word(Word::single(l))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, w: Word, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, n: &BigInt) -> NcPoly {
        if n.is_zero() {
            return NcPoly::zero();
        }
        NcPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * n))
                .collect(),
        }
    }

    pub fn scale_i64(&self, n: i64) -> NcPoly {
        self.scale(&BigInt::from(n))
    }
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

// Bilinear extension of word concatenation.
impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        out
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parse::format_expr(self))
    }
}

/// Membership in A^0_{(s,t)}: the word is empty, or a single letter not in
/// {s, t}, or starts with a letter != s and ends with a letter != t.
pub fn is_admissible(w: &Word, s: &RatFun, t: &RatFun) -> bool {
    match w.letters() {
        [] => true,
        [a] => a != s && a != t,
        [first, .., last] => first != s && last != t,
    }
}

/// Membership in A^1 = Z (+) sum over a != 0 of e_a A_F.
pub fn in_a1(w: &Word) -> bool {
    match w.letters().first() {
        None => true,
        Some(a) => !a.is_zero(),
    }
}

/// All words of exactly `len` letters over the given alphabet, in a
/// deterministic order.
pub fn words_of_length(alphabet: &[RatFun], len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * alphabet.len());
        for w in &out {
            for l in alphabet {
                let mut letters = w.0.clone();
                letters.push(l.clone());
                next.push(Word(letters));
            }
        }
        out = next;
    }
    out
}

/// All words of length `min_len..=max_len` over the alphabet.
pub fn words_up_to(alphabet: &[RatFun], min_len: usize, max_len: usize) -> Vec<Word> {
    (min_len..=max_len)
        .flat_map(|n| words_of_length(alphabet, n))
        .collect()
}

/// The standard alphabet {0, 1, z}.
pub fn alphabet_01z() -> Vec<RatFun> {
    vec![RatFun::from_int(0), RatFun::from_int(1), RatFun::var()]
}
