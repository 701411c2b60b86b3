//! One-step transformations for each continued-fraction algorithm, fusion and
//! random combinators, and the full expansion loop.
//!
//! Every step factors its input exactly: `v = M * v'` with `M` nonnegative and
//! unimodular. All rules except Jacobi-Perron act through a sorted view of the
//! vector: the entries are ranked with [`argsort_with_ties`], the classical
//! rule is applied to the ascending arrangement `u` (so "largest" is the last
//! slot), and the recorded matrix is the ranking permutation composed with the
//! elementary matrix of the rule. Jacobi-Perron keeps its own coordinate
//! convention and repairs a zero leading entry with a cyclic rotation step.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result, StepError};
use crate::lattice::{argsort_with_ties, Int, IntVector, Letter, StepMatrix};

/// Fallback rule of a fusion algorithm; never Arnoux-Rauzy itself.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FallbackRule {
    Brun,
    BrunMultiplicative,
    Selmer,
    FullySubtractive,
    Poincare,
}

impl FallbackRule {
    pub fn as_rule(self) -> RuleTag {
        match self {
            FallbackRule::Brun => RuleTag::Brun,
            FallbackRule::BrunMultiplicative => RuleTag::BrunMultiplicative,
            FallbackRule::Selmer => RuleTag::Selmer,
            FallbackRule::FullySubtractive => RuleTag::FullySubtractive,
            FallbackRule::Poincare => RuleTag::Poincare,
        }
    }
}

/// Algorithm selector for steps, expansions and sweeps.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RuleTag {
    Brun,
    BrunMultiplicative,
    Selmer,
    FullySubtractive,
    FullySubtractiveAsPossible,
    Poincare,
    JacobiPerron,
    ArnouxRauzy,
    RandomReduction,
    Fusion(FallbackRule),
}

impl RuleTag {
    pub fn slug(self) -> &'static str {
        match self {
            RuleTag::Brun => "brun",
            RuleTag::BrunMultiplicative => "brun-mult",
            RuleTag::Selmer => "selmer",
            RuleTag::FullySubtractive => "fully",
            RuleTag::FullySubtractiveAsPossible => "fully-possible",
            RuleTag::Poincare => "poincare",
            RuleTag::JacobiPerron => "jacobi-perron",
            RuleTag::ArnouxRauzy => "arnoux-rauzy",
            RuleTag::RandomReduction => "random",
            RuleTag::Fusion(FallbackRule::Brun) => "fusion-ar-brun",
            RuleTag::Fusion(FallbackRule::BrunMultiplicative) => "fusion-ar-brun-mult",
            RuleTag::Fusion(FallbackRule::Selmer) => "fusion-ar-selmer",
            RuleTag::Fusion(FallbackRule::FullySubtractive) => "fusion-ar-fully",
            RuleTag::Fusion(FallbackRule::Poincare) => "fusion-ar-poincare",
        }
    }

    pub fn from_slug(slug: &str) -> Option<RuleTag> {
        Some(match slug {
            "brun" => RuleTag::Brun,
            "brun-mult" => RuleTag::BrunMultiplicative,
            "selmer" => RuleTag::Selmer,
            "fully" => RuleTag::FullySubtractive,
            "fully-possible" => RuleTag::FullySubtractiveAsPossible,
            "poincare" => RuleTag::Poincare,
            "jacobi-perron" => RuleTag::JacobiPerron,
            "arnoux-rauzy" => RuleTag::ArnouxRauzy,
            "random" => RuleTag::RandomReduction,
            "fusion-ar-brun" => RuleTag::Fusion(FallbackRule::Brun),
            "fusion-ar-brun-mult" => RuleTag::Fusion(FallbackRule::BrunMultiplicative),
            "fusion-ar-selmer" => RuleTag::Fusion(FallbackRule::Selmer),
            "fusion-ar-fully" => RuleTag::Fusion(FallbackRule::FullySubtractive),
            "fusion-ar-poincare" => RuleTag::Fusion(FallbackRule::Poincare),
            _ => return None,
        })
    }

    /// The 13 configurations of the reference table, in its row order.
    pub fn table_configs() -> Vec<RuleTag> {
        vec![
            RuleTag::ArnouxRauzy,
            RuleTag::FullySubtractive,
            RuleTag::FullySubtractiveAsPossible,
            RuleTag::Selmer,
            RuleTag::Brun,
            RuleTag::BrunMultiplicative,
            RuleTag::Poincare,
            RuleTag::JacobiPerron,
            RuleTag::RandomReduction,
            RuleTag::Fusion(FallbackRule::FullySubtractive),
            RuleTag::Fusion(FallbackRule::Selmer),
            RuleTag::Fusion(FallbackRule::BrunMultiplicative),
            RuleTag::Fusion(FallbackRule::Poincare),
        ]
    }

    /// True for the two rule reconstructions that have no standard definition.
    pub fn is_reconstruction(self) -> bool {
        matches!(self, RuleTag::FullySubtractiveAsPossible | RuleTag::RandomReduction)
    }
}

impl std::fmt::Display for RuleTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.slug())
    }
}

/// Result of one step: `mat_vec(matrix, successor)` equals the input exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepOutcome {
    pub rule_applied: RuleTag,
    pub matrix: StepMatrix,
    pub successor: IntVector,
}

/// Ascending arrangement of a vector: `order[j]` is the original index whose
/// entry occupies slot `j`, so slot `d-1` holds the largest entry and ties
/// follow the [`argsort_with_ties`] rule.
struct SortedView {
    order: Vec<usize>,
    u: Vec<Int>,
}

fn sorted_view(v: &IntVector) -> SortedView {
    let desc = argsort_with_ties(v).expect("caller checked nonzero");
    let order: Vec<usize> = desc.into_iter().rev().collect();
    let u = order.iter().map(|&i| v.get(i)).collect();
    SortedView { order, u }
}

/// Assemble the outcome in original coordinates: the matrix is `P * B` where
/// `P` is the slot permutation (`v = P u`) and `B` the elementary matrix of
/// the rule in slot coordinates (`u = B u'`).
fn assemble(view: &SortedView, b: &StepMatrix, succ: Vec<Int>, tag: RuleTag) -> StepOutcome {
    let d = view.order.len();
    let mut m = StepMatrix::identity(d);
    for slot in 0..d {
        let orig = view.order[slot];
        for j in 0..d {
            m.set(orig, j, b.get(slot, j));
        }
    }
    StepOutcome {
        rule_applied: tag,
        matrix: m,
        successor: IntVector::new(succ).expect("step successors stay nonnegative"),
    }
}

fn check_nonterminal(v: &IntVector) -> Result<(), StepError> {
    if v.nonzero_count() <= 1 {
        return Err(StepError::Terminal);
    }
    Ok(())
}

/// Smallest positive slot of an ascending arrangement.
fn first_positive_slot(u: &[Int]) -> usize {
    u.iter().position(|&x| x > 0).expect("nonterminal vector has a positive entry")
}

/// Subtract the second largest entry from the largest one.
pub fn step_brun(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let view = sorted_view(v);
    let d = view.u.len();
    let mut b = StepMatrix::identity(d);
    b.add_to(d - 1, d - 2, 1);
    let mut succ = view.u.clone();
    succ[d - 1] -= view.u[d - 2];
    Ok(assemble(&view, &b, succ, RuleTag::Brun))
}

/// Subtract the largest integer multiple of the second largest entry that
/// keeps the largest nonnegative.
pub fn step_brun_mult(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let view = sorted_view(v);
    let d = view.u.len();
    let q = view.u[d - 1] / view.u[d - 2];
    let mut b = StepMatrix::identity(d);
    b.add_to(d - 1, d - 2, q);
    let mut succ = view.u.clone();
    succ[d - 1] -= q * view.u[d - 2];
    Ok(assemble(&view, &b, succ, RuleTag::BrunMultiplicative))
}

/// Subtract the smallest positive entry from the largest one.
pub fn step_selmer(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let view = sorted_view(v);
    let d = view.u.len();
    let s = first_positive_slot(&view.u);
    let mut b = StepMatrix::identity(d);
    b.add_to(d - 1, s, 1);
    let mut succ = view.u.clone();
    succ[d - 1] -= view.u[s];
    Ok(assemble(&view, &b, succ, RuleTag::Selmer))
}

/// Subtract the smallest positive entry from all larger slots.
pub fn step_fully(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let view = sorted_view(v);
    fully_on_view(&view)
}

fn fully_on_view(view: &SortedView) -> Result<StepOutcome, StepError> {
    let d = view.u.len();
    let s = first_positive_slot(&view.u);
    let mut b = StepMatrix::identity(d);
    let mut succ = view.u.clone();
    for j in s + 1..d {
        b.add_to(j, s, 1);
        succ[j] -= view.u[s];
    }
    Ok(assemble(view, &b, succ, RuleTag::FullySubtractive))
}

/// Fully subtractive while every entry is positive, Brun once a zero appears.
///
/// The subtract-from-all-others step needs every coordinate in play; with a
/// zero present it degenerates, so the pairwise rule takes over.
pub fn step_fully_as_possible(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let view = sorted_view(v);
    if view.u[0] > 0 {
        fully_on_view(&view)
    } else {
        step_brun(v)
    }
}

/// Subtract each next-smaller entry from its predecessor down the ranking.
pub fn step_poincare(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let view = sorted_view(v);
    let d = view.u.len();
    let mut b = StepMatrix::identity(d);
    for i in 0..d {
        for j in 0..i {
            b.set(i, j, 1);
        }
    }
    let mut succ = Vec::with_capacity(d);
    succ.push(view.u[0]);
    for k in 1..d {
        succ.push(view.u[k] - view.u[k - 1]);
    }
    Ok(assemble(&view, &b, succ, RuleTag::Poincare))
}

/// Arnoux-Rauzy guard: largest entry at least the sum of the others.
pub fn arnoux_rauzy_applicable(v: &IntVector) -> bool {
    if v.nonzero_count() <= 1 {
        return false;
    }
    let view = sorted_view(v);
    let d = view.u.len();
    let rest: Int = view.u[..d - 1].iter().sum();
    view.u[d - 1] >= rest
}

/// Subtract all other entries from the largest one; stops when the guard fails.
pub fn step_arnoux_rauzy(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let view = sorted_view(v);
    let d = view.u.len();
    let rest: Int = view.u[..d - 1].iter().sum();
    if view.u[d - 1] < rest {
        return Err(StepError::NotApplicable);
    }
    let mut b = StepMatrix::identity(d);
    for j in 0..d - 1 {
        b.add_to(d - 1, j, 1);
    }
    let mut succ = view.u.clone();
    succ[d - 1] -= rest;
    Ok(assemble(&view, &b, succ, RuleTag::ArnouxRauzy))
}

/// Jacobi-Perron in dimension 3, in original coordinates.
///
/// With `v1 > 0` the map reduces the other entries modulo `v1` and rotates;
/// with `v1 = 0` and two nonzero entries it emits a cyclic rotation step to
/// bring a positive entry into the leading coordinate.
pub fn step_jacobi_perron(v: &IntVector) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    if v.dim() != 3 {
        return Err(StepError::UnsupportedDimension);
    }
    let (v1, v2, v3) = (v.get(0), v.get(1), v.get(2));
    if v1 == 0 {
        let matrix = StepMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]])
            .expect("static rotation matrix");
        let successor = IntVector::new(vec![v2, v3, v1]).expect("rotation keeps entries");
        return Ok(StepOutcome { rule_applied: RuleTag::JacobiPerron, matrix, successor });
    }
    let q1 = v2 / v1;
    let q2 = v3 / v1;
    let matrix = StepMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, q1], vec![0, 1, q2]])
        .expect("jacobi-perron matrix entries are nonnegative");
    let successor =
        IntVector::new(vec![v2 - q1 * v1, v3 - q2 * v1, v1]).expect("mod step stays nonnegative");
    Ok(StepOutcome { rule_applied: RuleTag::JacobiPerron, matrix, successor })
}

/// Apply a uniformly chosen applicable rule; Arnoux-Rauzy joins the pool only
/// when its guard holds. Records which rule was drawn.
pub fn step_random<R: Rng>(v: &IntVector, rng: &mut R) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    let mut pool = vec![
        RuleTag::Brun,
        RuleTag::Selmer,
        RuleTag::FullySubtractive,
        RuleTag::Poincare,
    ];
    if arnoux_rauzy_applicable(v) {
        pool.push(RuleTag::ArnouxRauzy);
    }
    let pick = pool[rng.gen_range(0..pool.len())];
    match pick {
        RuleTag::Brun => step_brun(v),
        RuleTag::Selmer => step_selmer(v),
        RuleTag::FullySubtractive => step_fully(v),
        RuleTag::Poincare => step_poincare(v),
        RuleTag::ArnouxRauzy => step_arnoux_rauzy(v),
        _ => unreachable!(),
    }
}

/// Arnoux-Rauzy when its guard holds, otherwise the fixed fallback rule.
pub fn step_fusion(v: &IntVector, fallback: FallbackRule) -> Result<StepOutcome, StepError> {
    check_nonterminal(v)?;
    if arnoux_rauzy_applicable(v) {
        step_arnoux_rauzy(v)
    } else {
        match fallback {
            FallbackRule::Brun => step_brun(v),
            FallbackRule::BrunMultiplicative => step_brun_mult(v),
            FallbackRule::Selmer => step_selmer(v),
            FallbackRule::FullySubtractive => step_fully(v),
            FallbackRule::Poincare => step_poincare(v),
        }
    }
}

/// Dispatch one step of `algo`; only `RandomReduction` consumes the rng.
pub fn apply_step<R: Rng>(
    v: &IntVector,
    algo: RuleTag,
    rng: &mut R,
) -> Result<StepOutcome, StepError> {
    match algo {
        RuleTag::Brun => step_brun(v),
        RuleTag::BrunMultiplicative => step_brun_mult(v),
        RuleTag::Selmer => step_selmer(v),
        RuleTag::FullySubtractive => step_fully(v),
        RuleTag::FullySubtractiveAsPossible => step_fully_as_possible(v),
        RuleTag::Poincare => step_poincare(v),
        RuleTag::JacobiPerron => step_jacobi_perron(v),
        RuleTag::ArnouxRauzy => step_arnoux_rauzy(v),
        RuleTag::RandomReduction => step_random(v, rng),
        RuleTag::Fusion(fb) => step_fusion(v, fb),
    }
}

/// Whether the expansion reached a terminal vector.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpansionStatus {
    Completed,
    StoppedEarly,
}

/// Full record of an expansion: `input = M_1 ... M_n * terminal` exactly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpansionTrace {
    pub input: IntVector,
    pub steps: Vec<StepOutcome>,
    pub terminal: IntVector,
    /// Index of the unique nonzero terminal coordinate; `None` when stopped early.
    pub terminal_letter: Option<Letter>,
    pub status: ExpansionStatus,
}

impl ExpansionTrace {
    /// Terminal coordinate value, which equals the gcd of the input entries.
    pub fn gcd(&self) -> Option<Int> {
        self.terminal_letter.map(|l| self.terminal.get(l.pos()))
    }

    /// Vector entering step `k` (0-based): the input for `k = 0`, otherwise
    /// the previous step's successor.
    pub fn vector_entering(&self, k: usize) -> &IntVector {
        if k == 0 {
            &self.input
        } else {
            &self.steps[k - 1].successor
        }
    }

    /// Product `M_1 * ... * M_n`, the identity for an empty trace.
    pub fn matrix_product(&self) -> Result<StepMatrix> {
        let mut prod = StepMatrix::identity(self.input.dim());
        for step in &self.steps {
            prod = prod.mul_mat(&step.matrix)?;
        }
        Ok(prod)
    }
}

/// Repeatedly apply `algo` until the vector is terminal, or until a pure
/// Arnoux-Rauzy expansion hits its guard (status `StoppedEarly`).
pub fn expand(v: &IntVector, algo: RuleTag, seed: u64) -> Result<ExpansionTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    expand_with_rng(v, algo, &mut rng)
}

/// As [`expand`], with a caller-managed rng (used by sweeps for per-record streams).
pub fn expand_with_rng<R: Rng>(v: &IntVector, algo: RuleTag, rng: &mut R) -> Result<ExpansionTrace> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    // Additive rules shrink the entry sum every step; Jacobi-Perron inserts at
    // most two non-decreasing steps between shrinking ones.
    let limit = (v.sum().min(1 << 40) as usize) * 4 + 16;
    let mut current = v.clone();
    let mut steps = Vec::new();
    let status = loop {

        if current.nonzero_count() <= 1 {
            break ExpansionStatus::Completed;
        }
        if steps.len() >= limit {
            return Err(Error::StepLimit(limit));
        }
        match apply_step(&current, algo, rng) {
            Ok(out) => {
                debug_assert_eq!(out.matrix.mul_vec(&out.successor).unwrap(), current);
                current = out.successor.clone();
                steps.push(out);
            }
            Err(StepError::Terminal) => break ExpansionStatus::Completed,
            Err(StepError::NotApplicable) => break ExpansionStatus::StoppedEarly,
            Err(StepError::UnsupportedDimension) => {
                return Err(Error::JacobiPerronDimension(v.dim()))
            }
        }
    };
    let terminal_letter = match status {
        ExpansionStatus::Completed => {
            let pos = current
                .entries()
                .iter()
                .position(|&x| x != 0)
                .expect("completed expansion keeps the input nonzero");
            Some(Letter::new(pos + 1).expect("position is in range"))
        }
        ExpansionStatus::StoppedEarly => None,
    };
    Ok(ExpansionTrace { input: v.clone(), steps, terminal: current, terminal_letter, status })
}
