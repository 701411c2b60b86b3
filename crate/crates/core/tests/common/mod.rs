//! Shared naive reference implementations and fuzz helpers. The oracles here
//! recompute everything from scratch and stay independent of the library's
//! optimized paths.
#![allow(dead_code)] // each test target uses a subset

use mcfword::{FreqVector, Int, Letter, Rational, Word};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Quadratic discrepancy reference: recount every prefix from scratch and
/// work in plain rational arithmetic.
pub fn naive_discrepancy(w: &Word, f: &FreqVector) -> Rational {
    let d = w.alphabet_size();
    let n = w.len();
    let mut best = Rational::new(0, 1);
    for l in 1..=n {
        let prefix = &w.letters()[..l];
        for i in 0..d {
            let count = prefix.iter().filter(|x| x.pos() == i).count() as Int;
            let dev = f.get(i) * Rational::new(l as Int, 1) - Rational::new(count, 1);
            let dev = if dev < Rational::new(0, 1) { -dev } else { dev };
            if dev > best {
                best = dev;
            }
        }
    }
    best
}

/// Cubic balance reference: recount every window of every length.
pub fn naive_balance(w: &Word) -> Int {
    let d = w.alphabet_size();
    let n = w.len();
    let mut best: Int = 0;
    for len in 1..=n {
        for i in 0..d {
            let mut min = Int::MAX;
            let mut max = Int::MIN;
            for start in 0..=n - len {
                let count =
                    w.letters()[start..start + len].iter().filter(|x| x.pos() == i).count() as Int;
                min = min.min(count);
                max = max.max(count);
            }
            best = best.max(max - min);
        }
    }
    best
}

/// Deterministic word fuzzer: length in `1..=max_len`, letters uniform.
pub fn fuzz_word(rng: &mut ChaCha8Rng, d: usize, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    let letters = (0..len)
        .map(|_| Letter::new(rng.gen_range(1..=d)).unwrap())
        .collect();
    Word::new(d, letters).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
