//! Bounded certification of `⟨u_k, z_k⟩ ≅ C_s ⋆ C_s` and of the Hydra relations
//! of `⟨u_k, w⟩`.
//!
//! Words are alternating products `t_1^{e_1} ⋯ t_r^{e_r}` with `t_i ∈ {u_k, z_k}`.
//! A freeness sweep walks them depth first, so each word costs one
//! multiplication of a running product by a memoized syllable power.
//! Commutators follow `(x, y) = x⁻¹y⁻¹xy`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::UnitError;
use crate::group::GroupTable;
use crate::ring::{CoeffRing, GroupRing, RingElement};
use crate::units::{
    classify_order, commutator, commutator_closed_form, PredictedOrder, UnitFamily,
};

pub const DEFAULT_MAX_SYLLABLES: usize = 8;
pub const DEFAULT_EXP_BOUND: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    U,
    Z,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::U => Letter::Z,
            Letter::Z => Letter::U,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syllable {
    pub letter: Letter,
    pub exponent: i64,
}

/// A nonempty alternating word in `u_k`, `z_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordSpec {
    pub syllables: Vec<Syllable>,
}

impl WordSpec {
    pub fn is_alternating(&self) -> bool {
        self.syllables
            .windows(2)
            .all(|p| p[0].letter != p[1].letter)
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let l = match s.letter {
                Letter::U => "u",
                Letter::Z => "z",
            };
            if s.exponent == 1 {
                f.write_str(l)?;
            } else {
                write!(f, "{l}^{}", s.exponent)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum LetterOrder {
    Finite(usize),
    Infinite,
}

impl From<PredictedOrder> for LetterOrder {
    fn from(p: PredictedOrder) -> Self {
        match p {
            PredictedOrder::Finite(s) => LetterOrder::Finite(s),
            PredictedOrder::Infinite => LetterOrder::Infinite,
        }
    }
}

/// Canonical exponents: `1..s` for order `s`, `±1..±E` when infinite.
pub fn exponent_range(order: LetterOrder, exp_bound: i64) -> Vec<i64> {
    match order {
        LetterOrder::Finite(s) => (1..s as i64).collect(),
        LetterOrder::Infinite => (-exp_bound..=exp_bound).filter(|&e| e != 0).collect(),
    }
}

/// Pre-order walk over all alternating words with at most `max_syllables` syllables.
#[derive(Clone, Debug)]
pub struct WordIter {
    exps: [Vec<i64>; 2],
    max_syllables: usize,
    stack: Vec<(Letter, usize)>,
    started: bool,
}

/// Every admissible alternating word exactly once, starting with `u` words.
pub fn enumerate_words(
    orders: (LetterOrder, LetterOrder),
    max_syllables: usize,
    exp_bound: i64,
) -> WordIter {
    WordIter {
        exps: [
            exponent_range(orders.0, exp_bound),
            exponent_range(orders.1, exp_bound),
        ],
        max_syllables,
        stack: Vec::new(),
        started: false,
    }
}

impl WordIter {
    fn current(&self) -> WordSpec {
        WordSpec {
            syllables: self
                .stack
                .iter()
                .map(|&(letter, i)| Syllable {
                    letter,
                    exponent: self.exps[letter.index()][i],
                })
                .collect(),
        }
    }

    fn first_letter_from(&self, letter: Letter) -> Option<Letter> {
        [Letter::U, Letter::Z]
            .into_iter()
            .filter(|&l| l >= letter)
            .find(|l| !self.exps[l.index()].is_empty())
    }
}

impl Iterator for WordIter {
    type Item = WordSpec;

    fn next(&mut self) -> Option<WordSpec> {
        if self.max_syllables == 0 {
            return None;
        }
        if !self.started {
            self.started = true;
            let l = self.first_letter_from(Letter::U)?;
            self.stack.push((l, 0));
            return Some(self.current());
        }
        if self.stack.is_empty() {
            return None;
        }
        if self.stack.len() < self.max_syllables {
            let next = self.stack.last().expect("nonempty").0.other();
            if !self.exps[next.index()].is_empty() {
                self.stack.push((next, 0));
                return Some(self.current());
            }
        }
        while let Some((letter, i)) = self.stack.pop() {
            if i + 1 < self.exps[letter.index()].len() {
                self.stack.push((letter, i + 1));
                return Some(self.current());
            }
            if self.stack.is_empty() && letter == Letter::U {
                if let Some(l) = self.first_letter_from(Letter::Z) {
                    self.stack.push((l, 0));
                    return Some(self.current());
                }
            }
        }
        None
    }
}

/// Number of words [`enumerate_words`] yields.
pub fn word_count(orders: (LetterOrder, LetterOrder), max_syllables: usize, exp_bound: i64) -> u64 {
    let c = [
        exponent_range(orders.0, exp_bound).len() as u64,
        exponent_range(orders.1, exp_bound).len() as u64,
    ];
    let mut total = 0;
    // ending[l] = words of the current length ending in letter l
    let mut ending = c;
    for _ in 0..max_syllables {
        total += ending[0] + ending[1];
        ending = [ending[1] * c[0], ending[0] * c[1]];
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "order", rename_all = "snake_case")]
pub enum ClaimedStructure {
    /// `C_s ⋆ C_s`
    FiniteCyclic(usize),
    /// `C_∞ ⋆ C_∞`
    InfiniteCyclic,
}

impl fmt::Display for ClaimedStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimedStructure::FiniteCyclic(s) => write!(f, "C{s}*C{s}"),
            ClaimedStructure::InfiniteCyclic => f.write_str("Cinf*Cinf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub claimed: ClaimedStructure,
    pub max_syllables: usize,
    pub exp_bound: i64,
    pub words_checked: u64,
    /// A shortest word equal to 1, earliest in enumeration order among those.
    pub counterexample: Option<WordSpec>,
    /// Re-check of `b ∉ N_G(⟨a^k⟩)`, to localize blame for a counterexample.
    pub hypotheses_hold: bool,
}

impl FreenessReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug)]
struct Overflow;

/// Right multiplication of a running product by a memoized syllable power.
trait WordKernel: Sync {
    type Elem: Clone + Send;

    fn one(&self) -> Self::Elem;
    fn mul_syllable(
        &self,
        acc: &Self::Elem,
        letter: Letter,
        idx: usize,
        out: &mut Self::Elem,
    ) -> Result<(), Overflow>;
    fn is_one(&self, x: &Self::Elem) -> bool;
}

type SparsePowers<C> = [Vec<Vec<(u32, C)>>; 2];

fn sparse_powers<C>(
    powers: &[Vec<RingElement>; 2],
    conv: impl Fn(&num_bigint::BigInt) -> Option<C>,
) -> Option<SparsePowers<C>> {
    let conv_one = |x: &RingElement| -> Option<Vec<(u32, C)>> {
        x.terms()
            .iter()
            .map(|(&g, c)| conv(c).map(|c| (g as u32, c)))
            .collect()
    };
    Some([
        powers[0].iter().map(conv_one).collect::<Option<_>>()?,
        powers[1].iter().map(conv_one).collect::<Option<_>>()?,
    ])
}

fn dense_is_one<C: PartialEq + Default>(x: &[C], one: C) -> bool {
    x[0] == one && x[1..].iter().all(|c| *c == C::default())
}

struct DenseInt<'g> {
    group: &'g GroupTable,
    powers: SparsePowers<i128>,
}

impl WordKernel for DenseInt<'_> {
    type Elem = Vec<i128>;

    fn one(&self) -> Vec<i128> {
        let mut v = vec![0; self.group.order()];
        v[0] = 1;
        v
    }

    fn mul_syllable(
        &self,
        acc: &Vec<i128>,
        letter: Letter,
        idx: usize,
        out: &mut Vec<i128>,
    ) -> Result<(), Overflow> {
        out.iter_mut().for_each(|c| *c = 0);
        let syl = &self.powers[letter.index()][idx];
        for (g, &c) in acc.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = self.group.mul_row(g);
            for &(h, d) in syl {
                let slot = &mut out[row[h as usize] as usize];
                *slot = c
                    .checked_mul(d)
                    .and_then(|p| slot.checked_add(p))
                    .ok_or(Overflow)?;
            }
        }
        Ok(())
    }

    fn is_one(&self, x: &Vec<i128>) -> bool {
        dense_is_one(x, 1)
    }
}

struct DenseModP<'g> {
    group: &'g GroupTable,
    p: u128,
    powers: SparsePowers<u128>,
}

impl WordKernel for DenseModP<'_> {
    type Elem = Vec<u128>;

    fn one(&self) -> Vec<u128> {
        let mut v = vec![0; self.group.order()];
        v[0] = 1;
        v
    }

    fn mul_syllable(
        &self,
        acc: &Vec<u128>,
        letter: Letter,
        idx: usize,
        out: &mut Vec<u128>,
    ) -> Result<(), Overflow> {
        out.iter_mut().for_each(|c| *c = 0);
        let syl = &self.powers[letter.index()][idx];
        for (g, &c) in acc.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = self.group.mul_row(g);
            for &(h, d) in syl {
                let slot = &mut out[row[h as usize] as usize];
                *slot = (*slot + c * d) % self.p;
            }
        }
        Ok(())
    }

    fn is_one(&self, x: &Vec<u128>) -> bool {
        dense_is_one(x, 1)
    }
}

struct Exact<'g> {
    ring: GroupRing<'g>,
    powers: [Vec<RingElement>; 2],
}

impl WordKernel for Exact<'_> {
    type Elem = RingElement;

    fn one(&self) -> RingElement {
        self.ring.one()
    }

    fn mul_syllable(
        &self,
        acc: &RingElement,
        letter: Letter,
        idx: usize,
        out: &mut RingElement,
    ) -> Result<(), Overflow> {
        *out = self
            .ring
            .mul(acc, &self.powers[letter.index()][idx])
            .expect("syllable powers share the ring");
        Ok(())
    }

    fn is_one(&self, x: &RingElement) -> bool {
        self.ring.is_one(x)
    }
}

#[derive(Clone, Debug, Default)]
struct PartitionResult {
    words: u64,
    counterexample: Option<WordSpec>,
}

/// Depth-first sweep of all words whose first syllable is `first`.
fn sweep_partition<K: WordKernel>(
    kernel: &K,
    exps: &[Vec<i64>; 2],
    max_syllables: usize,
    first: (Letter, usize),
) -> Result<PartitionResult, Overflow> {
    let mut products: Vec<K::Elem> = vec![kernel.one(); max_syllables + 1];
    let mut stack: Vec<(Letter, usize)> = vec![first];
    let mut result = PartitionResult::default();
    let word_of = |stack: &[(Letter, usize)]| WordSpec {
        syllables: stack
            .iter()
            .map(|&(letter, i)| Syllable {
                letter,
                exponent: exps[letter.index()][i],
            })
            .collect(),
    };
    loop {
        let depth = stack.len();
        let (letter, idx) = stack[depth - 1];
        let (done, rest) = products.split_at_mut(depth);
        kernel.mul_syllable(&done[depth - 1], letter, idx, &mut rest[0])?;
        result.words += 1;
        let shorter = result
            .counterexample
            .as_ref()
            .is_none_or(|c| c.syllables.len() > depth);
        if shorter && kernel.is_one(&rest[0]) {
            result.counterexample = Some(word_of(&stack));
        }

        let next = letter.other();
        if depth < max_syllables && !exps[next.index()].is_empty() {
            stack.push((next, 0));
            continue;
        }
        loop {
            let (letter, idx) = stack.pop().expect("stack is nonempty here");
            if stack.is_empty() {
                return Ok(result);
            }
            if idx + 1 < exps[letter.index()].len() {
                stack.push((letter, idx + 1));
                break;
            }
        }
    }
}

fn syllable_powers(
    fam: &UnitFamily<'_>,
    exps: &[Vec<i64>; 2],
) -> Result<[Vec<RingElement>; 2], UnitError> {
    let ring = &fam.ring;
    let u_power = |e: i64| -> Result<RingElement, UnitError> {
        if e >= 0 {
            fam.pow_u_closed(e as u64)
        } else {
            Ok(ring.pow(&fam.u_inv, e.unsigned_abs())?)
        }
    };
    let z_power = |e: i64| -> Result<RingElement, UnitError> {
        let inner = u_power(e)?;
        Ok(ring.mul(&ring.mul(&fam.w_inv, &inner)?, &fam.w)?)
    };
    Ok([
        exps[0]
            .iter()
            .map(|&e| u_power(e))
            .collect::<Result<_, _>>()?,
        exps[1]
            .iter()
            .map(|&e| z_power(e))
            .collect::<Result<_, _>>()?,
    ])
}

/// Which arithmetic the sweep uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelChoice {
    /// Dense machine-word kernel, falling back to big integers on overflow.
    Fast,
    /// Sparse big-integer arithmetic throughout.
    Exact,
}

/// Evaluates every alternating word in `u_k`, `z_k` up to the bounds and
/// reports a shortest one equal to 1 (first in enumeration order), if any.
pub fn certify_freeness(
    fam: &UnitFamily<'_>,
    max_syllables: usize,
    exp_bound: i64,
) -> Result<FreenessReport, UnitError> {
    certify_freeness_with(fam, max_syllables, exp_bound, KernelChoice::Fast)
}

pub fn certify_freeness_with(
    fam: &UnitFamily<'_>,
    max_syllables: usize,
    exp_bound: i64,
    choice: KernelChoice,
) -> Result<FreenessReport, UnitError> {
    let w = &fam.witness;
    let predicted = classify_order(w.order_a, fam.k, w.m)?.order;
    let letter_order = LetterOrder::from(predicted);
    let claimed = match predicted {
        PredictedOrder::Finite(s) => ClaimedStructure::FiniteCyclic(s),
        PredictedOrder::Infinite => ClaimedStructure::InfiniteCyclic,
    };
    let exps = [
        exponent_range(letter_order, exp_bound),
        exponent_range(letter_order, exp_bound),
    ];
    let powers = syllable_powers(fam, &exps)?;
    let firsts: Vec<(Letter, usize)> = [Letter::U, Letter::Z]
        .into_iter()
        .flat_map(|l| (0..exps[l.index()].len()).map(move |i| (l, i)))
        .collect();

    let group = fam.ring.group();
    let exact = Exact {
        ring: fam.ring,
        powers: powers.clone(),
    };
    let run_exact = |first| {
        sweep_partition(&exact, &exps, max_syllables, first).expect("exact kernel cannot overflow")
    };
    let results: Vec<PartitionResult> = if max_syllables == 0 {
        vec![]
    } else {
        match (choice, fam.ring.coeffs()) {
            (KernelChoice::Exact, _) => firsts.par_iter().map(|&f| run_exact(f)).collect(),
            (KernelChoice::Fast, CoeffRing::Integers) => {
                let kernel = sparse_powers(&powers, |c| i128::try_from(c).ok())
                    .map(|powers| DenseInt { group, powers });
                firsts
                    .par_iter()
                    .map(|&f| match &kernel {
                        Some(k) => sweep_partition(k, &exps, max_syllables, f)
                            .unwrap_or_else(|Overflow| run_exact(f)),
                        None => run_exact(f),
                    })
                    .collect()
            }
            (KernelChoice::Fast, CoeffRing::PrimeField(p)) => {
                let kernel = DenseModP {
                    group,
                    p: p as u128,
                    powers: sparse_powers(&powers, |c| u128::try_from(c).ok())
                        .expect("prime field coefficients are reduced"),
                };
                firsts
                    .par_iter()
                    .map(|&f| {
                        sweep_partition(&kernel, &exps, max_syllables, f)
                            .unwrap_or_else(|_| run_exact(f))
                    })
                    .collect()
            }
        }
    };

    Ok(FreenessReport {
        a: w.a,
        b: w.b,
        k: fam.k,
        claimed,
        max_syllables,
        exp_bound,
        words_checked: results.iter().map(|r| r.words).sum(),
        counterexample: results
            .into_iter()
            .filter_map(|r| r.counterexample)
            .min_by_key(|w| w.syllables.len()),
        hypotheses_hold: fam.hypotheses_hold(),
    })
}

/// Exact value of a word, syllable by syllable.
pub fn evaluate_word(fam: &UnitFamily<'_>, word: &WordSpec) -> Result<RingElement, UnitError> {
    let ring = &fam.ring;
    let mut acc = ring.one();
    for s in &word.syllables {
        let (base, inv) = match s.letter {
            Letter::U => (&fam.u, &fam.u_inv),
            Letter::Z => (&fam.z, &fam.z_inv),
        };
        let p = if s.exponent >= 0 {
            ring.pow(base, s.exponent as u64)?
        } else {
            ring.pow(inv, s.exponent.unsigned_abs())?
        };
        acc = ring.mul(&acc, &p)?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HydraReport {
    /// `(u_k, w) ≠ 1`
    pub comm_nontrivial: bool,
    /// `(u_k, w) = 1 + (a^{−k} − a^{1−k} + a − 1)bâ`
    pub comm_formula_match: bool,
    /// `((u_k, w), w) = 1`
    pub second_comm_trivial: bool,
}

impl HydraReport {
    pub fn passed(&self) -> bool {
        self.comm_nontrivial && self.comm_formula_match && self.second_comm_trivial
    }
}

/// Checks the commutator relations that make `⟨u_k, w⟩` a quotient of the Hydra group.
pub fn certify_hydra(fam: &UnitFamily<'_>) -> Result<HydraReport, UnitError> {
    let ring = &fam.ring;
    let c = commutator(ring, &fam.u, &fam.w, &fam.u_inv, &fam.w_inv)?;
    // (x, y)⁻¹ = (y, x)
    let c_inv = commutator(ring, &fam.w, &fam.u, &fam.w_inv, &fam.u_inv)?;
    let second = commutator(ring, &c, &fam.w, &c_inv, &fam.w_inv)?;
    Ok(HydraReport {
        comm_nontrivial: !ring.is_one(&c),
        comm_formula_match: c == commutator_closed_form(fam)?,
        second_comm_trivial: ring.is_one(&second),
    })
}

/// Verifies `z_1 = w⁻¹ u_1 w`, so `z_1` lies in the normal closure of `u_1` in `⟨u_1, w⟩`.
pub fn certify_normal_generation(fam: &UnitFamily<'_>) -> Result<bool, UnitError> {
    if fam.k != 1 {
        return Err(UnitError::KOutOfRange { k: fam.k, order: 1 });
    }
    let ring = &fam.ring;
    let conj = ring.mul(&ring.mul(&fam.w_inv, &fam.u)?, &fam.w)?;
    Ok(conj == fam.z)
}
