//! Words in the semidirect product: matrix letters of the free pair and the
//! translation letters `h₁^{±1}`, `h₂^{±1}`.

use std::fmt;
use std::str::FromStr;

use crate::sl2z::{IntVec2, Letter, Mat2Z, Word};

use super::ModelError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GLetter {
    M(Letter),
    H1,
    H1Inv,
    H2,
    H2Inv,
}

impl GLetter {
    pub const ALL: [GLetter; 8] = [
        GLetter::M(Letter::G1),
        GLetter::M(Letter::G1Inv),
        GLetter::M(Letter::G2),
        GLetter::M(Letter::G2Inv),
        GLetter::H1,
        GLetter::H1Inv,
        GLetter::H2,
        GLetter::H2Inv,
    ];

    pub fn inverse(self) -> GLetter {
        match self {
            GLetter::M(l) => GLetter::M(l.inverse()),
            GLetter::H1 => GLetter::H1Inv,
            GLetter::H1Inv => GLetter::H1,
            GLetter::H2 => GLetter::H2Inv,
            GLetter::H2Inv => GLetter::H2,
        }
    }

    /// The `Z²` vector of a translation letter.
    pub fn translation(self) -> Option<(i64, i64)> {
        match self {
            GLetter::M(_) => None,
            GLetter::H1 => Some((1, 0)),
            GLetter::H1Inv => Some((-1, 0)),
            GLetter::H2 => Some((0, 1)),
            GLetter::H2Inv => Some((0, -1)),
        }
    }

    /// Compact spelling: `aAbB` for matrix letters, `xXyY` for `h₁, h₁⁻¹, h₂, h₂⁻¹`.
    pub fn symbol(self) -> char {
        match self {
            GLetter::M(l) => l.symbol(),
            GLetter::H1 => 'x',
            GLetter::H1Inv => 'X',
            GLetter::H2 => 'y',
            GLetter::H2Inv => 'Y',
        }
    }

    pub fn from_symbol(c: char) -> Option<GLetter> {
        match c {
            'x' => Some(GLetter::H1),
            'X' => Some(GLetter::H1Inv),
            'y' => Some(GLetter::H2),
            'Y' => Some(GLetter::H2Inv),
            _ => Letter::from_symbol(c).map(GLetter::M),
        }
    }
}

/// A freely reduced word; evaluation applies the rightmost letter first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupElement(Vec<GLetter>);

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = GLetter>) -> Self {
        let mut g = GroupElement::identity();
        for l in letters {
            g.push(l);
        }
        g
    }

    pub fn from_word(w: &Word) -> Self {
        GroupElement(w.letters().iter().map(|&l| GLetter::M(l)).collect())
    }

    /// `h₁^m h₂^n`.
    pub fn translation(v: &IntVec2) -> Self {
        use num_traits::{Signed, ToPrimitive};
        let count = |n: &num_bigint::BigInt| n.abs().to_usize().expect("small translation");
        let (l1, l2) = (
            if v.m.is_negative() { GLetter::H1Inv } else { GLetter::H1 },
            if v.n.is_negative() { GLetter::H2Inv } else { GLetter::H2 },
        );
        let mut letters = vec![l1; count(&v.m)];
        letters.extend(std::iter::repeat_n(l2, count(&v.n)));
        GroupElement(letters)
    }

    pub fn letters(&self) -> &[GLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: GLetter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn concat(&self, other: &GroupElement) -> GroupElement {
        let mut g = self.clone();
        for &l in &other.0 {
            g.push(l);
        }
        g
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Writes the element as `h_v ∘ w` with `w` in the free group.
    pub fn normal_form(&self, gens: &(Mat2Z, Mat2Z)) -> (Word, IntVec2) {
        let mut w = Word::identity();
        let mut m = Mat2Z::identity();
        let mut v = IntVec2::zero();
        for &l in &self.0 {
            match l {
                GLetter::M(x) => {
                    w.push_right(x);
                    m = m.compose(&x.matrix(gens));
                }
                h => {
                    let (a, b) = h.translation().expect("translation letter");
                    v = v.add(&m.apply(&IntVec2::new(a, b)));
                }
            }
        }
        (w, v)
    }

    /// All freely reduced words of exactly `len` letters over the eight-letter alphabet.
    pub fn reduced_words(len: usize) -> Vec<GroupElement> {
        let mut out = vec![GroupElement::identity()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * 7);
            for g in &out {
                for l in GLetter::ALL {
                    if g.0.last() != Some(&l.inverse()) {
                        let mut v = g.0.clone();
                        v.push(l);
                        next.push(GroupElement(v));
                    }
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for GroupElement {
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

impl FromStr for GroupElement {
    type Err = ModelError;

    /// Compact `abXy` spelling, or tokens `g1 h2^-1 h1^3` separated by spaces.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ModelError::BadElement(s.to_string());
        if s.is_empty() || s == "e" {
            return Ok(GroupElement::identity());
        }
        let mut out = GroupElement::identity();
        for token in s.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => (n, e.parse::<i64>().map_err(|_| bad())?),
                None => (token, 1),
            };
            let base = match name {
                "g1" => Some(GLetter::M(Letter::G1)),
                "g2" => Some(GLetter::M(Letter::G2)),
                "h1" => Some(GLetter::H1),
                "h2" => Some(GLetter::H2),
                _ => None,
            };
            match base {
                Some(l) => {
                    let l = if exp < 0 { l.inverse() } else { l };
                    for _ in 0..exp.unsigned_abs() {
                        out.push(l);
                    }
                }
                None if exp == 1 => {
                    for c in name.chars() {
                        out.push(GLetter::from_symbol(c).ok_or_else(bad)?);
                    }
                }
                None => return Err(bad()),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2z::sanov_generators;

    #[test]
    fn parse_and_reduce() {
        let g: GroupElement = "g1 h1^2 h1^-1 g2^-1".parse().unwrap();
        assert_eq!(g.to_string(), "axB");
        let g: GroupElement = "xX".parse().unwrap();
        assert!(g.is_empty());
        assert!("h3".parse::<GroupElement>().is_err());
    }

    #[test]
    fn normal_form_moves_translations_left() {
        let gens = sanov_generators();
        // ab·h₁ = h_{(5,2)}·ab
        let g: GroupElement = "abx".parse().unwrap();
        let (w, v) = g.normal_form(&gens);
        assert_eq!(w.to_string(), "ab");
        assert_eq!(v, IntVec2::new(5, 2));
        // commutator of the translations is trivial in the group
        let c: GroupElement = "xyXY".parse().unwrap();
        let (w, v) = c.normal_form(&gens);
        assert!(w.is_empty() && v.is_zero());
    }

    #[test]
    fn enumeration_count() {
        assert_eq!(GroupElement::reduced_words(2).len(), 8 * 7);
    }
}
