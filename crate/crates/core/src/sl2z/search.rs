use super::eigen::{conditions_check, QuadVec};
use super::matrix::Mat2Z;
use super::words::{reduced_words, sanov_generators, Word};
use super::Sl2zError;

/// Something that can locate an interior fixed point of the matrix word `w`.
pub trait InteriorFixedPoint {
    fn interior_fixed_point(&self, w: &Word) -> Option<f64>;
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub word: Word,
    pub matrix: Mat2Z,
    /// Location of an interior fixed point when one was required.
    pub fixed_point: Option<f64>,
}

/// First reduced word over the Sanov pair (by length, then lexicographic)
/// whose matrix is hyperbolic and satisfies the generic-position conditions; with
/// `model` given it must also have an interior fixed point there.
pub fn search_candidate(
    rs: &QuadVec,
    max_word_len: usize,
    model: Option<&dyn InteriorFixedPoint>,
) -> Result<Candidate, Sl2zError> {
    let gens = sanov_generators();
    for len in 1..=max_word_len {
        for word in reduced_words(len) {
            let f = word.to_matrix(&gens);
            if !f.is_hyperbolic() || !conditions_check(&f, rs)?.all() {
                continue;
            }
            let fixed_point = match model {
                Some(m) => match m.interior_fixed_point(&word) {
                    Some(x) => Some(x),
                    None => continue,
                },
                None => None,
            };
            return Ok(Candidate { word, matrix: f, fixed_point });
        }
    }
    Err(Sl2zError::NotFound(max_word_len))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::QuadVal;

    fn rs(s: &str) -> QuadVec {
        (QuadVal::one(2), s.parse().unwrap())
    }

    #[test]
    fn default_search_finds_g1g2() {
        let c = search_candidate(&rs("√2"), 2, None).unwrap();
        assert_eq!(c.word.to_string(), "ab");
        assert_eq!(c.matrix, Mat2Z::new(5, 2, 2, 1).unwrap());
        assert!(c.fixed_point.is_none());
    }

    #[test]
    fn exhaustion_is_not_found() {
        assert_eq!(search_candidate(&rs("√2"), 0, None), Err(Sl2zError::NotFound(0)));
        // every length-one word is parabolic
        assert_eq!(search_candidate(&rs("√2"), 1, None), Err(Sl2zError::NotFound(1)));
    }

    #[test]
    fn eigenvector_choice_skips_words() {
        // (1, √2−1) is an eigenvector of ab = (ab)ᵀ, so the search moves on to AB
        let c = search_candidate(&rs("-1+1√2"), 2, None).unwrap();
        assert_eq!(c.word.to_string(), "AB");
    }

    struct Never;
    impl InteriorFixedPoint for Never {
        fn interior_fixed_point(&self, _: &Word) -> Option<f64> {
            None
        }
    }

    struct OnlyLong;
    impl InteriorFixedPoint for OnlyLong {
        fn interior_fixed_point(&self, w: &Word) -> Option<f64> {
            (w.len() >= 3).then_some(0.5)
        }
    }

    #[test]
    fn fixed_point_requirement_filters() {
        assert!(search_candidate(&rs("√2"), 3, Some(&Never)).is_err());
        let c = search_candidate(&rs("√2"), 3, Some(&OnlyLong)).unwrap();
        assert_eq!(c.word.len(), 3);
        assert_eq!(c.fixed_point, Some(0.5));
    }
}
