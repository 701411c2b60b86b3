//! Turn an expansion trace into a finite word with the prescribed rational
//! letter frequencies, and run float expansions for irrational directions.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::{Int, IntVector, Letter, StepMatrix, Word};
use crate::steps::{expand, ExpansionStatus, ExpansionTrace, RuleTag};
use crate::subst::{frequency_rank_f64, Substitution};

/// Default zero threshold for float expansions.
pub const FLOAT_EPS_DEFAULT: f64 = 1e-12;
/// Default step cap for float expansions.
pub const FLOAT_DEPTH_DEFAULT: usize = 50;

/// A finite word together with the expansion that produced it.
///
/// Invariants: `parikh(word) * gcd = input` entrywise, and
/// `|word| * gcd = sum(input)`.
#[derive(Clone, Debug)]
pub struct GeneratedWord {
    pub word: Word,
    pub input: IntVector,
    pub trace: ExpansionTrace,
    pub gcd: Int,
}

/// Expand `v`, realize each step matrix as a substitution ordered by the
/// vector entering that step, and rebuild the word from the terminal letter
/// (outermost substitution first, matching `f = M_1 ... M_n f_n`).
pub fn generate_word(v: &IntVector, algo: RuleTag, seed: u64) -> Result<GeneratedWord> {
    let trace = expand(v, algo, seed)?;
    word_from_trace(trace)
}

/// Build the word for an already-computed completed trace.
pub fn word_from_trace(trace: ExpansionTrace) -> Result<GeneratedWord> {
    if trace.status == ExpansionStatus::StoppedEarly {
        return Err(Error::ExpansionIncomplete);
    }
    let letter = trace.terminal_letter.expect("completed trace has a terminal letter");
    let gcd = trace.gcd().expect("completed trace has a terminal value");
    let d = trace.input.dim();
    let mut word = Word::single(d, letter)?;
    for k in (0..trace.steps.len()).rev() {
        let sigma = Substitution::from_matrix(&trace.steps[k].matrix, trace.vector_entering(k))?;
        word = sigma.apply(&word)?;
    }
    debug_assert_eq!(word.parikh().scale(gcd).unwrap(), trace.input);
    Ok(GeneratedWord { word, input: trace.input.clone(), trace, gcd })
}

/// Index of the largest residual entry (ties to the smaller index); the seed
/// from which a float expansion's prefix is rebuilt.
pub fn seed_letter(residual: &[f64]) -> Result<Letter> {
    if residual.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    if residual.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroResidual);
    }
    let mut best = 0;
    for (i, &x) in residual.iter().enumerate() {
        if x > residual[best] {
            best = i;
        }
    }
    Letter::new(best + 1)
}

/// A float expansion: the same step rules applied in double precision, with
/// entries below `eps` treated as zero.
#[derive(Clone, Debug)]
pub struct FloatExpansion {
    pub direction: Vec<f64>,
    /// Number of steps actually performed.
    pub depth: usize,
    pub steps: Vec<(RuleTag, StepMatrix)>,
    pub prefix: Word,
    pub residual: Vec<f64>,
}

impl FloatExpansion {
    /// Letter frequencies of the prefix as floats, for convergence diagnostics.
    pub fn prefix_frequencies(&self) -> Vec<f64> {
        let counts = self.prefix.parikh();
        let len = self.prefix.len() as f64;
        counts.entries().iter().map(|&c| c as f64 / len).collect()
    }

    /// Max absolute difference between prefix frequencies and the direction
    /// normalized to sum 1.
    pub fn frequency_error(&self) -> f64 {
        let total: f64 = self.direction.iter().sum();
        self.prefix_frequencies()
            .iter()
            .zip(&self.direction)
            .map(|(p, &f)| (p - f / total).abs())
            .fold(0.0, f64::max)
    }
}

/// Run up to `depth` float steps of `algo` on `direction`, stopping early when
/// fewer than two entries remain at or above `eps`. The prefix is rebuilt from
/// [`seed_letter`] of the residual through the same substitution convention as
/// the integer pipeline. Only `RandomReduction` consumes the seed.
pub fn expand_float(
    direction: &[f64],
    algo: RuleTag,
    depth: usize,
    eps: f64,
    seed: u64,
) -> Result<FloatExpansion> {
    if direction.len() < 2 {
        return Err(Error::BadDimension(direction.len()));
    }
    if direction.iter().any(|x| !x.is_finite() || *x < 0.0) || !eps.is_finite() || eps <= 0.0 {
        return Err(Error::NonFiniteInput);
    }
    if direction.iter().all(|&x| x < eps) {
        return Err(Error::ZeroVector);
    }
    if algo == RuleTag::JacobiPerron && direction.len() != 3 {
        return Err(Error::JacobiPerronDimension(direction.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = direction.to_vec();
    let mut steps: Vec<(RuleTag, StepMatrix)> = Vec::new();
    let mut entering: Vec<Vec<f64>> = Vec::new();
    while steps.len() < depth {
        match float_step(&current, algo, eps, &mut rng) {
            Some((tag, matrix, successor)) => {
                entering.push(current.clone());
                steps.push((tag, matrix));
                current = successor;
            }
            None => break,
        }
    }
    let seed_l = seed_letter(&current)?;
    let d = direction.len();
    let mut prefix = Word::single(d, seed_l)?;
    for k in (0..steps.len()).rev() {
        let rank = frequency_rank_f64(&entering[k]);
        let sigma = Substitution::from_matrix_ranked(&steps[k].1, &rank)?;
        prefix = sigma.apply(&prefix)?;
    }
    Ok(FloatExpansion {
        direction: direction.to_vec(),
        depth: steps.len(),
        steps,
        prefix,
        residual: current,
    })
}

/// Ascending arrangement of a float vector under the integer tie rule.
fn float_sorted(v: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let mut desc: Vec<usize> = (0..v.len()).collect();
    desc.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).expect("finite entries").then(a.cmp(&b)));
    let order: Vec<usize> = desc.into_iter().rev().collect();
    let u = order.iter().map(|&i| v[i]).collect();
    (order, u)
}

fn float_assemble(
    order: &[usize],
    b: &StepMatrix,
    succ: Vec<f64>,
    tag: RuleTag,
) -> (RuleTag, StepMatrix, Vec<f64>) {
    let d = order.len();
    let mut m = StepMatrix::identity(d);
    for slot in 0..d {
        let orig = order[slot];
        for j in 0..d {
            m.set(orig, j, b.get(slot, j));
        }
    }
    (tag, m, succ)
}

/// One float step; `None` when the expansion should stop (terminal residual
/// or a failed Arnoux-Rauzy guard).
fn float_step<R: Rng>(
    v: &[f64],
    algo: RuleTag,
    eps: f64,
    rng: &mut R,
) -> Option<(RuleTag, StepMatrix, Vec<f64>)> {
    let d = v.len();
    if v.iter().filter(|&&x| x >= eps).count() <= 1 {
        return None;
    }
    if algo == RuleTag::JacobiPerron {
        return float_jacobi_perron(v, eps);
    }
    let (order, u) = float_sorted(v);
    let rest: f64 = u[..d - 1].iter().sum();
    let ar_ok = u[d - 1] >= rest;
    let effective = match algo {
        RuleTag::ArnouxRauzy => {
            if !ar_ok {
                return None;
            }
            RuleTag::ArnouxRauzy
        }
        RuleTag::Fusion(fb) => {
            if ar_ok {
                RuleTag::ArnouxRauzy
            } else {
                fb.as_rule()
            }
        }
        RuleTag::RandomReduction => {
            let mut pool = vec![
                RuleTag::Brun,
                RuleTag::Selmer,
                RuleTag::FullySubtractive,
                RuleTag::Poincare,
            ];
            if ar_ok {
                pool.push(RuleTag::ArnouxRauzy);
            }
            pool[rng.gen_range(0..pool.len())]
        }
        RuleTag::FullySubtractiveAsPossible => {
            if u[0] >= eps {
                RuleTag::FullySubtractive
            } else {
                RuleTag::Brun
            }
        }
        other => other,
    };
    let mut b = StepMatrix::identity(d);
    let mut succ = u.clone();
    match effective {
        RuleTag::Brun => {
            b.add_to(d - 1, d - 2, 1);
            succ[d - 1] -= u[d - 2];
        }
        RuleTag::BrunMultiplicative => {
            let q = (u[d - 1] / u[d - 2]).floor();
            b.add_to(d - 1, d - 2, q as Int);
            succ[d - 1] -= q * u[d - 2];
        }
        RuleTag::Selmer => {
            let s = u.iter().position(|&x| x >= eps).expect("two entries at least eps");
            b.add_to(d - 1, s, 1);
            succ[d - 1] -= u[s];
        }
        RuleTag::FullySubtractive => {
            let s = u.iter().position(|&x| x >= eps).expect("two entries at least eps");
            for j in s + 1..d {
                b.add_to(j, s, 1);
                succ[j] -= u[s];
            }
        }
        RuleTag::Poincare => {
            for i in 0..d {
                for j in 0..i {
                    b.set(i, j, 1);
                }
            }
            for k in (1..d).rev() {
                succ[k] = u[k] - u[k - 1];
            }
        }
        RuleTag::ArnouxRauzy => {
            for j in 0..d - 1 {
                b.add_to(d - 1, j, 1);
            }
            succ[d - 1] -= rest;
        }
        _ => unreachable!("dispatch covers the remaining tags"),
    }
    for x in &mut succ {
        if *x < 0.0 {
            *x = 0.0; // round-off guard for subtractions that are exact in theory
        }
    }
    Some(float_assemble(&order, &b, succ, effective))
}

fn float_jacobi_perron(v: &[f64], eps: f64) -> Option<(RuleTag, StepMatrix, Vec<f64>)> {
    if v[0] < eps {
        let matrix = StepMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]])
            .expect("static rotation matrix");
        return Some((RuleTag::JacobiPerron, matrix, vec![v[1], v[2], v[0]]));
    }
    let q1 = (v[1] / v[0]).floor();
    let q2 = (v[2] / v[0]).floor();
    let matrix =
        StepMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, q1 as Int], vec![0, 1, q2 as Int]])
            .expect("jacobi-perron float matrix");
    let succ = vec![(v[1] - q1 * v[0]).max(0.0), (v[2] - q2 * v[0]).max(0.0), v[0]];
    Some((RuleTag::JacobiPerron, matrix, succ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::steps::FallbackRule;

    fn iv(entries: &[Int]) -> IntVector {
        IntVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn terminal_input_gives_single_letter_word() {
        let g = generate_word(&iv(&[0, 0, 5]), RuleTag::Brun, 0).unwrap();
        assert_eq!(g.word.to_string(), "3");
        assert_eq!(g.gcd, 5);
        assert_eq!(g.word.parikh().scale(5).unwrap(), iv(&[0, 0, 5]));
    }

    #[test]
    fn arnoux_rauzy_can_stop_early() {
        assert!(matches!(
            generate_word(&iv(&[1, 1, 1]), RuleTag::ArnouxRauzy, 0),
            Err(Error::ExpansionIncomplete)
        ));
    }

    #[test]
    fn brun_word_for_1_2_4() {
        let g = generate_word(&iv(&[1, 2, 4]), RuleTag::Brun, 0).unwrap();
        assert_eq!(g.word.to_string(), "3323321");
        assert_eq!(g.word.parikh(), iv(&[1, 2, 4]));
        assert_eq!(g.gcd, 1);
    }

    #[test]
    fn fusion_word_has_exact_parikh_vector() {
        let g =
            generate_word(&iv(&[2, 3, 5]), RuleTag::Fusion(FallbackRule::Poincare), 0).unwrap();
        assert_eq!(g.word.len(), 10);
        assert_eq!(g.word.parikh(), iv(&[2, 3, 5]));
        let again =
            generate_word(&iv(&[2, 3, 5]), RuleTag::Fusion(FallbackRule::Poincare), 0).unwrap();
        assert_eq!(g.word, again.word);
    }

    #[test]
    fn gcd_scales_word_length() {
        let g = generate_word(&iv(&[4, 6, 10]), RuleTag::Brun, 0).unwrap();
        assert_eq!(g.gcd, 2);
        assert_eq!(g.word.len(), 10);
        assert_eq!(g.word.parikh().scale(2).unwrap(), iv(&[4, 6, 10]));
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert!(matches!(
            generate_word(&IntVector::zeros(3).unwrap(), RuleTag::Brun, 0),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn seed_letter_takes_largest_residual() {
        assert_eq!(seed_letter(&[0.1, 0.2, 0.7]).unwrap().index(), 3);
        assert_eq!(seed_letter(&[0.5, 0.5, 0.0]).unwrap().index(), 1);
        assert!(matches!(seed_letter(&[0.0, 0.0, 0.0]), Err(Error::ZeroResidual)));
        assert!(matches!(seed_letter(&[f64::NAN, 0.0, 0.0]), Err(Error::NonFiniteInput)));
    }

    #[test]
    fn float_expansion_of_a_corner_is_trivial() {
        let fx = expand_float(&[0.0, 0.0, 1.0], RuleTag::Brun, 10, FLOAT_EPS_DEFAULT, 0).unwrap();
        assert_eq!(fx.depth, 0);
        assert_eq!(fx.prefix.to_string(), "3");
    }

    #[test]
    fn float_expansion_rejects_bad_input() {
        assert!(expand_float(&[f64::NAN, 0.5, 0.5], RuleTag::Brun, 5, 1e-12, 0).is_err());
        assert!(expand_float(&[-0.1, 0.5, 0.6], RuleTag::Brun, 5, 1e-12, 0).is_err());
        assert!(expand_float(&[0.0, 0.0, 0.0], RuleTag::Brun, 5, 1e-12, 0).is_err());
    }

    #[test]
    fn dyadic_floats_match_the_integer_pipeline() {
        // (0.25, 0.25, 0.5) is (1, 1, 2) scaled by 1/4; subtractions stay exact.
        let fx = expand_float(&[0.25, 0.25, 0.5], RuleTag::Brun, 16, 1e-12, 0).unwrap();
        let t = expand(&iv(&[1, 1, 2]), RuleTag::Brun, 0).unwrap();
        assert_eq!(fx.depth, t.steps.len());
        for (f, s) in fx.steps.iter().zip(&t.steps) {
            assert_eq!(f.1, s.matrix);
        }
        assert_eq!(
            fx.prefix,
            word_from_trace(t).unwrap().word,
            "same matrices and referents give the same word"
        );
    }

    #[test]
    fn arnoux_rauzy_fixed_direction_converges() {
        // beta is the real root of x^3 = x^2 + x + 1; the direction
        // (1/b^3, 1/b^2, 1/b) keeps the guard satisfied at every depth.
        let mut beta: f64 = 2.0;
        for _ in 0..64 {
            let f = beta * beta * beta - beta * beta - beta - 1.0;
            let fp = 3.0 * beta * beta - 2.0 * beta - 1.0;
            beta -= f / fp;
        }
        let dir = [beta.powi(-3), beta.powi(-2), beta.powi(-1)];
        let shallow = expand_float(&dir, RuleTag::ArnouxRauzy, 5, 1e-12, 0).unwrap();
        let deep = expand_float(&dir, RuleTag::ArnouxRauzy, 20, 1e-12, 0).unwrap();
        assert_eq!(deep.depth, 20);
        assert!(deep.steps.iter().all(|(tag, _)| *tag == RuleTag::ArnouxRauzy));
        assert!(deep.frequency_error() < shallow.frequency_error());
        assert!(deep.prefix.len() > shallow.prefix.len());
    }
}
