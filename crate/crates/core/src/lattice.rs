//! Exact integer vectors and matrices, letters and words, and the Parikh map.
//!
//! Everything here is exact: vectors and matrices hold `i128` entries and the
//! growth-prone products go through checked arithmetic, so a sweep is
//! bit-reproducible or fails loudly.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Scalar type for all exact integer arithmetic.
pub type Int = i128;

/// Exact rational scalar.
pub type Rational = num_rational::Ratio<i128>;

/// A letter of the alphabet `{1, ..., d}`, stored 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Letter(usize);

impl Letter {
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidLetter { letter: 0, d: 0 });
        }
        Ok(Letter(index))
    }

    /// 1-based index as written in words.
    pub fn index(self) -> usize {
        self.0
    }

    /// 0-based position for array access.
    pub fn pos(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite word over the alphabet `{1, ..., d}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    d: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(d: usize, letters: Vec<Letter>) -> Result<Self> {
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        for &l in &letters {
            if l.index() > d {
                return Err(Error::InvalidLetter { letter: l.index(), d });
            }
        }
        Ok(Word { d, letters })
    }

    pub fn empty(d: usize) -> Result<Self> {
        Word::new(d, Vec::new())
    }

    pub fn single(d: usize, letter: Letter) -> Result<Self> {
        Word::new(d, vec![letter])
    }

    /// Parse a digit string such as `"3121121"`. Only valid for `d <= 9`.
    pub fn from_digits(d: usize, s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let v = ch.to_digit(10).ok_or(Error::InvalidLetter { letter: 0, d })? as usize;
            if v == 0 || v > d {
                return Err(Error::InvalidLetter { letter: v, d });
            }
            letters.push(Letter(v));
        }
        Word::new(d, letters)
    }

    pub fn alphabet_size(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word { d: self.d, letters })
    }

    /// Parikh vector: entry `i` counts the occurrences of letter `i + 1`.
    pub fn parikh(&self) -> ParikhVector {
        let mut counts = vec![0; self.d];
        for l in &self.letters {
            counts[l.pos()] += 1;
        }
        IntVector { entries: counts }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Vector of letter counts; same shape as [`IntVector`].
pub type ParikhVector = IntVector;

/// A nonnegative integer vector of dimension `d >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntVector {
    entries: Vec<Int>,
}

impl IntVector {
    pub fn new(entries: Vec<Int>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::BadDimension(entries.len()));
        }
        if entries.iter().any(|&x| x < 0) {
            return Err(Error::NegativeEntry);
        }
        Ok(IntVector { entries })
    }

    pub fn zeros(d: usize) -> Result<Self> {
        IntVector::new(vec![0; d])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Int] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Int {
        self.entries[i]
    }

    pub fn sum(&self) -> Int {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|&&x| x != 0).count()
    }

    /// Gcd of the entries; 0 for the zero vector.
    pub fn gcd(&self) -> Int {
        self.entries.iter().fold(0, |g, &x| g.gcd(&x))
    }

    pub fn add(&self, other: &IntVector) -> Result<IntVector> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| a.checked_add(b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        IntVector::new(entries)
    }

    pub fn scale(&self, k: Int) -> Result<IntVector> {
        let entries = self
            .entries
            .iter()
            .map(|&a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        IntVector::new(entries)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Positions of `v` ordered by (value descending, index ascending).
///
/// The fixed tie rule makes every "largest / second largest / smallest
/// positive" selection deterministic. Errors on the zero vector.
pub fn argsort_with_ties(v: &IntVector) -> Result<Vec<usize>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut idx: Vec<usize> = (0..v.dim()).collect();
    idx.sort_by_key(|&i| (-v.get(i), i));
    Ok(idx)
}

/// A `d x d` nonnegative integer matrix, row-major.
///
/// Matrices produced by a single continued-fraction step are elementary or
/// permutation-composed-with-elementary and have determinant +1 or -1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StepMatrix {
    d: usize,
    entries: Vec<Int>,
}

impl StepMatrix {
    pub fn identity(d: usize) -> Self {
        let mut entries = vec![0; d * d];
        for i in 0..d {
            entries[i * d + i] = 1;
        }
        StepMatrix { d, entries }
    }

    pub fn from_rows(rows: &[Vec<Int>]) -> Result<Self> {
        let d = rows.len();
        if d < 2 {
            return Err(Error::BadDimension(d));
        }
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            if row.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: row.len() });
            }
            if row.iter().any(|&x| x < 0) {
                return Err(Error::NegativeEntry);
            }
            entries.extend_from_slice(row);
        }
        Ok(StepMatrix { d, entries })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, row: usize, col: usize) -> Int {
        self.entries[row * self.d + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Int) {
        self.entries[row * self.d + col] = value;
    }

    pub(crate) fn add_to(&mut self, row: usize, col: usize, value: Int) {
        self.entries[row * self.d + col] += value;
    }

    pub fn is_identity(&self) -> bool {
        *self == StepMatrix::identity(self.d)
    }

    pub fn column_is_zero(&self, col: usize) -> bool {
        (0..self.d).all(|i| self.get(i, col) == 0)
    }

    /// Exact matrix-vector product, checked for overflow.
    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        if v.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: v.dim() });
        }
        let mut out = vec![0; self.d];
        for i in 0..self.d {
            let mut acc: Int = 0;
            for j in 0..self.d {
                let term = self.get(i, j).checked_mul(v.get(j)).ok_or(Error::Overflow)?;
                acc = acc.checked_add(term).ok_or(Error::Overflow)?;
            }
            out[i] = acc;
        }
        IntVector::new(out)
    }

    /// Exact matrix product, checked for overflow.
    pub fn mul_mat(&self, other: &StepMatrix) -> Result<StepMatrix> {
        if other.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        let d = self.d;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc: Int = 0;
                for k in 0..d {
                    let term = self.get(i, k).checked_mul(other.get(k, j)).ok_or(Error::Overflow)?;
                    acc = acc.checked_add(term).ok_or(Error::Overflow)?;
                }
                entries[i * d + j] = acc;
            }
        }
        Ok(StepMatrix { d, entries })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Int> {
        let d = self.d;
        let mut m = self.entries.clone();
        let mut sign: Int = 1;
        let mut prev: Int = 1;
        for k in 0..d - 1 {
            if m[k * d + k] == 0 {
                let pivot = (k + 1..d).find(|&r| m[r * d + k] != 0);
                match pivot {
                    Some(r) => {
                        for c in 0..d {
                            m.swap(k * d + c, r * d + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let a = m[i * d + j].checked_mul(m[k * d + k]).ok_or(Error::Overflow)?;
                    let b = m[i * d + k].checked_mul(m[k * d + j]).ok_or(Error::Overflow)?;
                    m[i * d + j] = a.checked_sub(b).ok_or(Error::Overflow)? / prev;
                }
                m[i * d + k] = 0;
            }
            prev = m[k * d + k];
        }
        Ok(sign * m[(d - 1) * d + (d - 1)])
    }
}

impl fmt::Display for StepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.d {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.d {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// An exact frequency vector: nonnegative rationals summing to 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FreqVector {
    components: Vec<Rational>,
}

impl FreqVector {
    pub fn new(components: Vec<Rational>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::BadDimension(components.len()));
        }
        if components.iter().any(|c| c < &Rational::new(0, 1)) {
            return Err(Error::InvalidFrequency);
        }
        let sum: Rational = components.iter().sum();
        if sum != Rational::new(1, 1) {
            return Err(Error::InvalidFrequency);
        }
        Ok(FreqVector { components })
    }

    /// Normalize a nonzero count vector to frequencies `v_i / sum`.
    pub fn from_counts(v: &IntVector) -> Result<Self> {
        let total = v.sum();
        if total == 0 {
            return Err(Error::ZeroVector);
        }
        let components = v.entries().iter().map(|&x| Rational::new(x, total)).collect();
        FreqVector::new(components)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Rational] {
        &self.components
    }

    pub fn get(&self, i: usize) -> Rational {
        self.components[i]
    }
}

impl fmt::Display for FreqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
