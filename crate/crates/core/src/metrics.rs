//! Discrepancy, balance, factor complexity and empirical frequency, all in
//! exact arithmetic. Decimal rendering happens only at the reporting boundary.

use std::collections::HashSet;

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{FreqVector, Int, Rational, Word};

/// How prefix lengths pair with expected counts in the discrepancy maximum.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum DiscrepancyConvention {
    /// Compare `f_i * l` with the letter count of the length-`l` prefix,
    /// `l = 1..=|w|`. This is the convention whose values can drop below 1.
    #[default]
    PrefixLength,
    /// Compare `f_i * k` with the count of the length-`k+1` prefix,
    /// `k = 0..=|w|-1`; always at least 1, kept for sensitivity checks.
    LiteralIndex,
}

/// Max over letters and prefixes of the deviation between expected and actual
/// letter counts, under the default prefix-length convention.
pub fn discrepancy(w: &Word, f: &FreqVector) -> Result<Rational> {
    discrepancy_with(w, f, DiscrepancyConvention::PrefixLength)
}

pub fn discrepancy_with(
    w: &Word,
    f: &FreqVector,
    convention: DiscrepancyConvention,
) -> Result<Rational> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let d = w.alphabet_size();
    if f.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: f.dim() });
    }
    // Put every component over one denominator so the scan is pure integer
    // arithmetic: |p_i * l - den * count_i| / den.
    let mut den: Int = 1;
    for c in f.components() {
        den = den.checked_mul(*c.denom() / den.gcd(c.denom())).ok_or(Error::Overflow)?;
    }
    let numerators = f
        .components()
        .iter()
        .map(|c| c.numer().checked_mul(den / c.denom()).ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0 as Int; d];
    let mut best: Int = 0;
    for (pos, &letter) in w.letters().iter().enumerate() {
        counts[letter.pos()] += 1;
        let weight = match convention {
            DiscrepancyConvention::PrefixLength => pos as Int + 1,
            DiscrepancyConvention::LiteralIndex => pos as Int,
        };
        for i in 0..d {
            let expected = numerators[i].checked_mul(weight).ok_or(Error::Overflow)?;
            let actual = counts[i].checked_mul(den).ok_or(Error::Overflow)?;
            best = best.max((expected - actual).abs());
        }
    }
    Ok(Rational::new(best, den))
}

/// Max over letters and window lengths of the spread of letter counts across
/// equal-length factors, by incremental sliding windows.
pub fn balance(w: &Word) -> Result<Int> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let d = w.alphabet_size();
    let n = w.len();
    let letters: Vec<usize> = w.letters().iter().map(|l| l.pos()).collect();
    let mut best: Int = 0;
    let mut counts = vec![0 as Int; d];
    for window in 1..=n {
        counts.iter_mut().for_each(|c| *c = 0);
        for &l in &letters[..window] {
            counts[l] += 1;
        }
        let mut min = counts.clone();
        let mut max = counts.clone();
        for start in 1..=n - window {
            counts[letters[start - 1]] -= 1;
            counts[letters[start + window - 1]] += 1;
            for &l in &[letters[start - 1], letters[start + window - 1]] {
                min[l] = min[l].min(counts[l]);
                max[l] = max[l].max(counts[l]);
            }
        }
        for i in 0..d {
            best = best.max(max[i] - min[i]);
        }
    }
    Ok(best)
}

/// Number of distinct factors of each length `1..=n_max`.
pub fn factor_complexity(w: &Word, n_max: usize) -> Result<Vec<usize>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    if n_max > w.len() {
        return Err(Error::FactorLengthTooLarge { n_max, len: w.len() });
    }
    let letters = w.letters();
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let distinct: HashSet<&[_]> = letters.windows(n).collect();
        out.push(distinct.len());
    }
    Ok(out)
}

/// Letter frequencies of a finite word, as exact rationals.
pub fn empirical_frequency(w: &Word) -> Result<FreqVector> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    FreqVector::from_counts(&w.parikh())
}

/// Discrepancy bound `1 - 1/(2d - 2)` of the chairman-assignment scheme,
/// used as a reference line in sweep reports; `3/4` for `d = 3`.
pub fn tijdeman_bound(d: usize) -> Rational {
    Rational::new(1, 1) - Rational::new(1, 2 * (d as Int) - 2)
}

/// The measured quantities for one word.
#[derive(Clone, Debug)]
pub struct MetricReport {
    pub discrepancy: Rational,
    pub balance: Int,
    /// Max over `n` of `p(n) / n`.
    pub max_complexity_ratio: Rational,
    pub empirical_freq: FreqVector,
}

/// Measure a word against a frequency vector.
pub fn report(w: &Word, f: &FreqVector) -> Result<MetricReport> {
    let complexity = factor_complexity(w, w.len())?;
    let max_complexity_ratio = complexity
        .iter()
        .enumerate()
        .map(|(i, &p)| Rational::new(p as Int, i as Int + 1))
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(MetricReport {
        discrepancy: discrepancy(w, f)?,
        balance: balance(w)?,
        max_complexity_ratio,
        empirical_freq: empirical_frequency(w)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Word {
        Word::from_digits(3, s).unwrap()
    }

    fn freq(counts: &[Int]) -> FreqVector {
        FreqVector::from_counts(&crate::lattice::IntVector::new(counts.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn discrepancy_examples() {
        assert_eq!(discrepancy(&word("3"), &freq(&[0, 0, 1])).unwrap(), Rational::new(0, 1));
        assert_eq!(discrepancy(&word("123"), &freq(&[1, 1, 1])).unwrap(), Rational::new(2, 3));
        assert_eq!(discrepancy(&word("12"), &freq(&[1, 1, 0])).unwrap(), Rational::new(1, 2));
    }

    #[test]
    fn discrepancy_literal_index_is_at_least_one() {
        let w = word("123");
        let f = freq(&[1, 1, 1]);
        let lit = discrepancy_with(&w, &f, DiscrepancyConvention::LiteralIndex).unwrap();
        assert!(lit >= Rational::new(1, 1));
        // first letter contributes |f * 0 - 1| = 1
        assert_eq!(lit, Rational::new(1, 1));
    }

    #[test]
    fn discrepancy_rejects_empty_and_mismatched() {
        assert!(matches!(
            discrepancy(&Word::empty(3).unwrap(), &freq(&[1, 1, 1])),
            Err(Error::EmptyWord)
        ));
        let f2 =
            FreqVector::new(vec![Rational::new(1, 2), Rational::new(1, 2)]).unwrap();
        assert!(matches!(
            discrepancy(&word("123"), &f2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn balance_examples() {
        assert_eq!(balance(&word("111")).unwrap(), 0);
        assert_eq!(balance(&word("1213121")).unwrap(), 1);
        assert_eq!(balance(&word("1122")).unwrap(), 2);
    }

    #[test]
    fn factor_complexity_examples() {
        assert_eq!(factor_complexity(&word("1111"), 3).unwrap(), vec![1, 1, 1]);
        // distinct windows of 1213121: {1,2,3}, {12,21,13,31}, {121,213,131,312}
        assert_eq!(factor_complexity(&word("1213121"), 3).unwrap(), vec![3, 4, 4]);
        assert_eq!(factor_complexity(&word("123123"), 2).unwrap(), vec![3, 3]);
        assert!(matches!(
            factor_complexity(&word("12"), 3),
            Err(Error::FactorLengthTooLarge { .. })
        ));
    }

    #[test]
    fn empirical_frequency_examples() {
        let f = empirical_frequency(&word("123")).unwrap();
        assert_eq!(f.components(), freq(&[1, 1, 1]).components());
        let f = empirical_frequency(&word("1121")).unwrap();
        assert_eq!(f.components(), freq(&[3, 1, 0]).components());
    }

    #[test]
    fn tijdeman_bound_for_three_letters_is_three_quarters() {
        assert_eq!(tijdeman_bound(3), Rational::new(3, 4));
        assert_eq!(tijdeman_bound(2), Rational::new(1, 2));
    }

    #[test]
    fn report_bundles_the_metrics() {
        let w = word("1213121");
        let r = report(&w, &empirical_frequency(&w).unwrap()).unwrap();
        assert_eq!(r.balance, 1);
        assert!(r.discrepancy < Rational::new(1, 1));
        assert_eq!(r.max_complexity_ratio, Rational::new(3, 1)); // p(1)/1 = 3
    }
}
