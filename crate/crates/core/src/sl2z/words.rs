//! Reduced words over the free generating pair and their evaluation.

use std::fmt;
use std::str::FromStr;

use super::matrix::Mat2Z;
use super::Sl2zError;

/// A generator of the free pair or its inverse. The derived order
/// `g1 < g1⁻¹ < g2 < g2⁻¹` is the lexicographic order used by searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    G1,
    G1Inv,
    G2,
    G2Inv,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::G1, Letter::G1Inv, Letter::G2, Letter::G2Inv];

    pub fn inverse(self) -> Letter {
        match self {
            Letter::G1 => Letter::G1Inv,
            Letter::G1Inv => Letter::G1,
            Letter::G2 => Letter::G2Inv,
            Letter::G2Inv => Letter::G2,
        }
    }

    /// Which generator (0 or 1) this letter belongs to.
    pub fn generator(self) -> usize {
        match self {
            Letter::G1 | Letter::G1Inv => 0,
            Letter::G2 | Letter::G2Inv => 1,
        }
    }

    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::G1Inv | Letter::G2Inv)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Compact spelling: `a`, `A`, `b`, `B`.
    pub fn symbol(self) -> char {
        match self {
            Letter::G1 => 'a',
            Letter::G1Inv => 'A',
            Letter::G2 => 'b',
            Letter::G2Inv => 'B',
        }
    }

    pub fn from_symbol(c: char) -> Option<Letter> {
        match c {
            'a' => Some(Letter::G1),
            'A' => Some(Letter::G1Inv),
            'b' => Some(Letter::G2),
            'B' => Some(Letter::G2Inv),
            _ => None,
        }
    }

    pub fn matrix(self, gens: &(Mat2Z, Mat2Z)) -> Mat2Z {
        let g = if self.generator() == 0 { &gens.0 } else { &gens.1 };
        if self.is_inverse() {
            g.invert()
        } else {
            g.clone()
        }
    }
}

/// The Sanov pair `[[1,2],[0,1]]`, `[[1,0],[2,1]]`.
pub fn sanov_generators() -> (Mat2Z, Mat2Z) {
    (
        Mat2Z::new(1, 2, 0, 1).expect("unimodular"),
        Mat2Z::new(1, 0, 2, 1).expect("unimodular"),
    )
}

/// A freely reduced word, written left to right; as a map it applies its
/// rightmost letter first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push_right(l);
        }
        w
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

    /// `self · l`, freely reduced.
    pub fn push_right(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    /// `l · self`, freely reduced.
    pub fn prepend(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        if v.first() == Some(&l.inverse()) {
            v.remove(0);
        } else {
            v.insert(0, l);
        }
        Word(v)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push_right(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn power(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        (0..n.unsigned_abs()).fold(Word::identity(), |acc, _| acc.concat(&base))
    }

    pub fn to_matrix(&self, gens: &(Mat2Z, Mat2Z)) -> Mat2Z {
        word_to_matrix(self, gens)
    }
}

/// Left-to-right product of the letters' matrices.
pub fn word_to_matrix(w: &Word, gens: &(Mat2Z, Mat2Z)) -> Mat2Z {
    w.0.iter().fold(Mat2Z::identity(), |acc, l| acc.compose(&l.matrix(gens)))
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for l in &self.0 {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Sl2zError;

    /// Compact `aAbB` spelling or spaced tokens `g1 g2^-1`; `e` is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "id" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            rest = rest.trim_start();
            if let Some(after) = rest.strip_prefix("g1^-1") {
                letters.push(Letter::G1Inv);
                rest = after;
            } else if let Some(after) = rest.strip_prefix("g2^-1") {
                letters.push(Letter::G2Inv);
                rest = after;
            } else if let Some(after) = rest.strip_prefix("g1") {
                letters.push(Letter::G1);
                rest = after;
            } else if let Some(after) = rest.strip_prefix("g2") {
                letters.push(Letter::G2);
                rest = after;
            } else {
                let c = rest.chars().next().expect("nonempty");
                let l = Letter::from_symbol(c).ok_or_else(|| Sl2zError::BadWord(s.to_string()))?;
                letters.push(l);
                rest = &rest[c.len_utf8()..];
            }
        }
        Ok(Word::from_letters(letters))
    }
}

/// All reduced words of exactly `len` letters, in lexicographic order.
pub fn reduced_words(len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 3);
        for w in &out {
            for l in Letter::ALL {
                if w.0.last() != Some(&l.inverse()) {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        out = next;
    }
    out
}

/// Number of reduced words of length `n` over four letters.
pub fn reduced_word_count(n: usize) -> u64 {
    if n == 0 {
        1
    } else {
        4 * 3u64.pow(n as u32 - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sanov_words() {
        let gens = sanov_generators();
        let w: Word = "ab".parse().unwrap();
        assert_eq!(w.to_matrix(&gens), Mat2Z::new(5, 2, 2, 1).unwrap());
        let w: Word = "g1 g1^-1".parse().unwrap();
        assert!(w.is_empty());
        assert_eq!(w.to_matrix(&gens), Mat2Z::identity());
        let w: Word = "bbb".parse().unwrap();
        assert_eq!(w.to_matrix(&gens), Mat2Z::new(1, 0, 6, 1).unwrap());
        assert!("abx".parse::<Word>().is_err());
    }

    #[test]
    fn enumeration_counts_and_order() {
        for n in 0..6 {
            assert_eq!(reduced_words(n).len() as u64, reduced_word_count(n));
        }
        let w2 = reduced_words(2);
        assert_eq!(w2[0].to_string(), "aa");
        assert_eq!(w2[1].to_string(), "ab");
        assert!(w2.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn inverse_and_power() {
        let gens = sanov_generators();
        let w: Word = "abB A".parse().unwrap();
        assert!(w.is_empty());
        let w: Word = "aBa".parse().unwrap();
        assert!(w.concat(&w.inverse()).is_empty());
        assert_eq!(w.power(3).to_matrix(&gens), w.to_matrix(&gens).power(3));
        assert_eq!(w.power(-2).to_matrix(&gens), w.to_matrix(&gens).power(-2));
        assert_eq!(w.prepend(Letter::G1Inv).to_string(), "Ba");
    }
}
