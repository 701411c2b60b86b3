//! Substitutions (non-erasing morphisms letter -> word), their incidence
//! matrices, and the realization of a step matrix as a substitution.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{Int, IntVector, Letter, StepMatrix, Word};

/// A non-erasing map from each letter of `{1, ..., d}` to a nonempty word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Substitution {
    d: usize,
    images: Vec<Word>,
}

impl Substitution {
    pub fn new(images: Vec<Word>) -> Result<Self> {
        let d = images.len();
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        for (j, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::ZeroColumn { column: j + 1 });
            }
            if img.alphabet_size() != d {
                return Err(Error::DimensionMismatch { expected: d, found: img.alphabet_size() });
            }
        }
        Ok(Substitution { d, images })
    }

    pub fn identity(d: usize) -> Result<Self> {
        let images = (1..=d)
            .map(|i| Word::single(d, Letter::new(i)?))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(images)
    }

    /// Realize `m` as a substitution: the image of letter `j` is the multiset
    /// `{ i with multiplicity m[i][j] }` with the most frequent letter first,
    /// frequencies read from `order_ref` (the vector in force before the
    /// step). Copies of a letter stay grouped; equal frequencies put the
    /// higher letter index first.
    pub fn from_matrix(m: &StepMatrix, order_ref: &IntVector) -> Result<Self> {
        if order_ref.dim() != m.dim() {
            return Err(Error::DimensionMismatch { expected: m.dim(), found: order_ref.dim() });
        }
        Self::from_matrix_ranked(m, &frequency_rank(order_ref.entries()))
    }

    /// As [`Substitution::from_matrix`] with a precomputed letter ranking
    /// (0-based positions, most frequent first).
    pub(crate) fn from_matrix_ranked(m: &StepMatrix, rank: &[usize]) -> Result<Self> {
        let d = m.dim();
        let mut images = Vec::with_capacity(d);
        for j in 0..d {
            if m.column_is_zero(j) {
                return Err(Error::ZeroColumn { column: j + 1 });
            }
            let mut letters = Vec::new();
            for &i in rank {
                for _ in 0..m.get(i, j) {
                    letters.push(Letter::new(i + 1)?);
                }
            }
            images.push(Word::new(d, letters)?);
        }
        Substitution::new(images)
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn image(&self, l: Letter) -> &Word {
        &self.images[l.pos()]
    }

    /// Incidence matrix: entry `(i, j)` counts letter `i` in the image of `j`.
    pub fn incidence(&self) -> StepMatrix {
        let mut m = StepMatrix::identity(self.d);
        for j in 0..self.d {
            let counts = self.images[j].parikh();
            for i in 0..self.d {
                m.set(i, j, counts.get(i));
            }
        }
        m
    }

    /// Apply to a word by concatenating letter images.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.alphabet_size() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: w.alphabet_size() });
        }
        let total: usize = w.letters().iter().map(|&l| self.image(l).len()).sum();
        let mut letters = Vec::with_capacity(total);
        for &l in w.letters() {
            letters.extend_from_slice(self.image(l).letters());
        }
        Word::new(self.d, letters)
    }

    /// Composition `self . inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &Substitution) -> Result<Substitution> {
        if inner.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: inner.d });
        }
        let images = inner
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(images)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, img) in self.images.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", j + 1, img)?;
        }
        Ok(())
    }
}

/// Letter positions ordered most-frequent-first: value descending, ties by
/// descending position.
pub(crate) fn frequency_rank(keys: &[Int]) -> Vec<usize> {
    let mut rank: Vec<usize> = (0..keys.len()).collect();
    rank.sort_by(|&a, &b| keys[b].cmp(&keys[a]).then(b.cmp(&a)));
    rank
}

/// Float-keyed variant of [`frequency_rank`] for the float expansion path.
pub(crate) fn frequency_rank_f64(keys: &[f64]) -> Vec<usize> {
    let mut rank: Vec<usize> = (0..keys.len()).collect();
    rank.sort_by(|&a, &b| {
        keys[b].partial_cmp(&keys[a]).expect("finite keys").then(b.cmp(&a))
    });
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntVector;

    fn iv(entries: &[Int]) -> IntVector {
        IntVector::new(entries.to_vec()).unwrap()
    }

    fn e_matrix(row: usize, col: usize) -> StepMatrix {
        let mut m = StepMatrix::identity(3);
        m.add_to(row, col, 1);
        m
    }

    #[test]
    fn incidence_counts_image_letters() {
        let id = Substitution::identity(3).unwrap();
        assert!(id.incidence().is_identity());

        let s = Substitution::new(vec![
            Word::from_digits(3, "1").unwrap(),
            Word::from_digits(3, "32").unwrap(),
            Word::from_digits(3, "3").unwrap(),
        ])
        .unwrap();
        assert_eq!(s.incidence(), e_matrix(2, 1));

        let s = Substitution::new(vec![
            Word::from_digits(3, "1").unwrap(),
            Word::from_digits(3, "2").unwrap(),
            Word::from_digits(3, "122333").unwrap(),
        ])
        .unwrap();
        let m = s.incidence();
        assert_eq!((m.get(0, 2), m.get(1, 2), m.get(2, 2)), (1, 2, 3));
    }

    #[test]
    fn from_matrix_orders_by_frequency() {
        let m = e_matrix(2, 1); // I + E_{3,2}
        let s = Substitution::from_matrix(&m, &iv(&[1, 2, 4])).unwrap();
        assert_eq!(s.to_string(), "1->1, 2->32, 3->3");
        assert_eq!(s.incidence(), m);

        let s = Substitution::from_matrix(&m, &iv(&[1, 4, 2])).unwrap();
        assert_eq!(s.to_string(), "1->1, 2->23, 3->3");
        assert_eq!(s.incidence(), m);

        let id = Substitution::from_matrix(&StepMatrix::identity(3), &iv(&[5, 1, 2])).unwrap();
        assert_eq!(id, Substitution::identity(3).unwrap());
    }

    #[test]
    fn from_matrix_breaks_frequency_ties_downward() {
        let m = e_matrix(2, 1);
        let s = Substitution::from_matrix(&m, &iv(&[0, 1, 1])).unwrap();
        assert_eq!(s.image(Letter::new(2).unwrap()).to_string(), "32");
    }

    #[test]
    fn from_matrix_groups_repeated_letters() {
        let mut m = StepMatrix::identity(3);
        m.add_to(2, 1, 3); // I + 3 E_{3,2}
        let s = Substitution::from_matrix(&m, &iv(&[1, 4, 2])).unwrap();
        assert_eq!(s.image(Letter::new(2).unwrap()).to_string(), "2333");
        assert_eq!(s.incidence(), m);
    }

    #[test]
    fn from_matrix_rejects_zero_columns() {
        let mut m = StepMatrix::identity(3);
        m.set(1, 1, 0);
        assert!(matches!(
            Substitution::from_matrix(&m, &iv(&[1, 1, 1])),
            Err(Error::ZeroColumn { column: 2 })
        ));
    }

    #[test]
    fn apply_concatenates_images() {
        let id = Substitution::identity(3).unwrap();
        let w = Word::from_digits(3, "123").unwrap();
        assert_eq!(id.apply(&w).unwrap(), w);

        let s = Substitution::new(vec![
            Word::from_digits(3, "1").unwrap(),
            Word::from_digits(3, "32").unwrap(),
            Word::from_digits(3, "3").unwrap(),
        ])
        .unwrap();
        let w = Word::from_digits(3, "12").unwrap();
        assert_eq!(s.apply(&w).unwrap().to_string(), "132");
    }

    #[test]
    fn apply_commutes_with_parikh_through_incidence() {
        let s = Substitution::new(vec![
            Word::from_digits(3, "13").unwrap(),
            Word::from_digits(3, "322").unwrap(),
            Word::from_digits(3, "31").unwrap(),
        ])
        .unwrap();
        let w = Word::from_digits(3, "12332").unwrap();
        let image = s.apply(&w).unwrap();
        assert_eq!(image.parikh(), s.incidence().mul_vec(&w.parikh()).unwrap());
    }

    #[test]
    fn compose_matches_incidence_product() {
        let s = Substitution::new(vec![
            Word::from_digits(3, "12").unwrap(),
            Word::from_digits(3, "2").unwrap(),
            Word::from_digits(3, "31").unwrap(),
        ])
        .unwrap();
        let t = Substitution::new(vec![
            Word::from_digits(3, "3").unwrap(),
            Word::from_digits(3, "21").unwrap(),
            Word::from_digits(3, "1").unwrap(),
        ])
        .unwrap();
        let st = s.compose(&t).unwrap();
        assert_eq!(st.incidence(), s.incidence().mul_mat(&t.incidence()).unwrap());

        let id = Substitution::identity(3).unwrap();
        assert_eq!(id.compose(&s).unwrap(), s);
        assert_eq!(s.compose(&id).unwrap(), s);

        let w = Word::from_digits(3, "1231").unwrap();
        assert_eq!(st.apply(&w).unwrap(), s.apply(&t.apply(&w).unwrap()).unwrap());
    }
}
