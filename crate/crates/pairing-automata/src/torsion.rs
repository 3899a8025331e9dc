//! Certified finite-order witnesses in the pairing group `Γ_C`.
//!
//! Constant-label cycles in `A_C` force torsion: a cycle of `k` arrows all
//! labeled `x|y` chains the relations `a_s b_x = a_s' b_y` into
//! `(b_y b_x^{-1})^k = e`, and dually a cycle of the restricted letter map at
//! a state pair `(s, t)` gives `(a_t^{-1} a_s)^k = e`. Power automata extend
//! both searches from letters to words. For three-row invertible matrices a
//! constructive pipeline always produces a witness: normalize the matrix to
//! its bipartite column form, read off the permutations behind
//! `t_1 = s_1^{-1}s_2`, `t_2 = s_2^{-1}s_3`, `t_3 = s_3^{-1}s_1`, and extract
//! a cycle; the same engine runs on any automaton with a cyclic-bipartite
//! structure (a state cycle `s_1..s_q` and a letter bipartition `A ⊔ B` with
//! `A`-inputs advancing and `B`-inputs retreating).
//!
//! Every witness carries a replayable [`Certificate`] proving
//! `word^exponent = e`; [`verify_witness`] re-checks it from scratch.
//!
//! # Example
//!
//! ```
//! use pairing_automata::matrix::validate_pairing;
//! use pairing_automata::torsion::{find_letter_cycles, verify_witness};
//!
//! let c = validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap();
//! let witnesses = find_letter_cycles(&c);
//! assert_eq!(witnesses[0].word.to_string(), "b2*B1");
//! assert_eq!(witnesses[0].exponent, 2);
//! assert_eq!(verify_witness(&c, &witnesses[0]), Ok(true));
//! ```

use crate::automata::{
    build_a_automaton, check_bireversible, dual_automaton, power_automaton_with_budget,
    AutomataError, MealyAutomaton, DEFAULT_POWER_BUDGET,
};
use crate::certify::{
    relations_from_matrix, replay_certificate, verify_certificate, CertStep, Certificate,
    CertifyError, Generator, GroupKind, GroupWord, Relation, WordLetter,
};
use crate::matrix::{Cell, MatrixEquivalence, PairingMatrix};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// Default alphabet ceiling for the cyclic-bipartite structure search.
pub const DEFAULT_DETECT_ALPHABET_BUDGET: usize = 8;
/// Default state ceiling for the cyclic-bipartite structure search.
pub const DEFAULT_DETECT_STATE_BUDGET: usize = 6;

/// Failures of the torsion searches.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TorsionError {
    /// The three-row pipeline applied to a matrix with another row count.
    #[error("NotThreeRows")]
    NotThreeRows,
    /// The three-row pipeline applied to a non-invertible pairing.
    #[error("NotInvertible")]
    NotInvertible,
    /// Defensive: an odd column count (impossible for valid three-row
    /// matrices, which always have an even cell count).
    #[error("OddColumns")]
    OddColumns,
    /// Word-cycle search on an automaton without a dual.
    #[error("NotBireversible")]
    NotBireversible,
    /// No cyclic-bipartite structure exists for the automaton.
    #[error("NoStructureFound")]
    NoStructureFound,
    /// A claimed structure that the automaton's arrows contradict.
    #[error("StructureMismatch")]
    StructureMismatch,
    /// A search size beyond its configured budget.
    #[error("BudgetExceeded({size},{budget})")]
    BudgetExceeded { size: usize, budget: usize },
}

/// Which search family produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Provenance {
    LetterCycle,
    DualLetterCycle,
    WordCycle,
    #[serde(rename = "Theorem4")]
    ThreeRow,
    CyclicBipartite,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Provenance::LetterCycle => "LetterCycle",
            Provenance::DualLetterCycle => "DualLetterCycle",
            Provenance::WordCycle => "WordCycle",
            Provenance::ThreeRow => "Theorem4",
            Provenance::CyclicBipartite => "CyclicBipartite",
        })
    }
}

/// A certified finite-order element: `word^exponent = e` in `Γ_C`, proven by
/// `certificate`. When `nontrivial_guaranteed`, the word is a quotient of two
/// distinct generators of one family, so the distinct-generators hypothesis
/// forces `word ≠ e`; `justification` names the pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionWitness {
    pub word: GroupWord,
    pub exponent: usize,
    pub provenance: Provenance,
    pub nontrivial_guaranteed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub justification: Option<String>,
    pub certificate: Certificate,
}

/// Checks a witness against its matrix: the certificate's start word must be
/// the reduced form of `word^exponent`, and its replay must reach the empty
/// word.
pub fn verify_witness(c: &PairingMatrix, w: &TorsionWitness) -> Result<bool, CertifyError> {
    if w.certificate.start.reduced() != w.word.repeat(w.exponent).reduced() {
        return Ok(false);
    }
    verify_certificate(c, &w.certificate)
}

fn a_pos(i: usize) -> WordLetter {
    WordLetter::new(Generator::A(i), false)
}

fn a_neg(i: usize) -> WordLetter {
    WordLetter::new(Generator::A(i), true)
}

fn b_pos(j: usize) -> WordLetter {
    WordLetter::new(Generator::B(j), false)
}

fn b_neg(j: usize) -> WordLetter {
    WordLetter::new(Generator::B(j), true)
}

/// 0-based relation id of the value at (state, letter) — matrix cell
/// `(state+1, letter+1)` — matching the by-value relation order.
fn rel_id_at(c: &PairingMatrix, state: usize, letter: usize) -> usize {
    (c.entry(Cell { row: state + 1, col: letter + 1 }) - 1) as usize
}

/// Incrementally builds a certificate: each insertion names the exact word
/// `omega` to splice in, and the builder recovers the (inverted, shift)
/// encoding against the cited relator.
struct CertBuilder<'a> {
    relations: &'a [Relation],
    start: GroupWord,
    current: GroupWord,
    steps: Vec<CertStep>,
}

impl<'a> CertBuilder<'a> {
    fn new(relations: &'a [Relation], start: GroupWord) -> Self {
        let current = start.reduced();
        CertBuilder {
            relations,
            start,
            current,
            steps: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.current.len()
    }

    fn insert(&mut self, pos: usize, rel: usize, omega: &GroupWord) {
        let relator = self.relations[rel].relator();
        let mut encoding = None;
        'search: for inv in [false, true] {
            let oriented = if inv { relator.inverse() } else { relator.clone() };
            for shift in 0..4u8 {
                if oriented.rotate_left(shift as usize) == *omega {
                    encoding = Some((inv, shift));
                    break 'search;
                }
            }
        }
        let (inv, shift) =
            encoding.expect("inserted words are always oriented rotations of their relator");
        assert!(pos <= self.current.len(), "insertion position out of range");
        self.steps.push(CertStep { pos, rel, inv, shift });
        let mut letters = self.current.letters()[..pos].to_vec();
        letters.extend_from_slice(omega.letters());
        letters.extend_from_slice(&self.current.letters()[pos..]);
        self.current = GroupWord::from_letters(letters).reduced();
    }

    fn finish(self) -> Certificate {
        assert!(
            self.current.is_empty(),
            "certificate construction must end at the empty word"
        );
        let cert = Certificate {
            group_kind: GroupKind::GammaC,
            start: self.start.reduced(),
            steps: self.steps,
        };
        debug_assert_eq!(replay_certificate(self.relations, &cert), Ok(true));
        cert
    }
}

/// Nontriviality under the distinct-generators hypothesis: a reduced
/// two-letter quotient of distinct same-family generators cannot be `e`.
fn assess_nontriviality(word: &GroupWord) -> (bool, Option<String>) {
    let l = word.letters();
    if l.len() == 2 && l[0].inverse != l[1].inverse {
        let same_family = matches!(
            (l[0].generator, l[1].generator),
            (Generator::A(_), Generator::A(_)) | (Generator::B(_), Generator::B(_))
        );
        if same_family && l[0].generator != l[1].generator {
            let mut names = [l[0].generator.token(), l[1].generator.token()];
            names.sort();
            return (
                true,
                Some(format!("distinct generators {}, {}", names[0], names[1])),
            );
        }
    }
    (false, None)
}

fn make_witness(
    c: &PairingMatrix,
    word: GroupWord,
    exponent: usize,
    provenance: Provenance,
    certificate: Certificate,
) -> TorsionWitness {
    let (nontrivial_guaranteed, justification) = assess_nontriviality(&word);
    let w = TorsionWitness {
        word,
        exponent,
        provenance,
        nontrivial_guaranteed,
        justification,
        certificate,
    };
    debug_assert_eq!(verify_witness(c, &w), Ok(true));
    w
}

/// All monochromatic cycles of `a`: triples (input letter, output letter,
/// cycle states) where following only `x|y`-labeled arrows from the first
/// state returns to it. Ordered by (x, y, least state); each cycle starts at
/// its least state.
fn monochromatic_cycles(a: &MealyAutomaton) -> Vec<(usize, usize, Vec<usize>)> {
    let mut groups: BTreeMap<(usize, usize), BTreeMap<usize, usize>> = BTreeMap::new();
    for s in 0..a.n_states() {
        for x in 0..a.n_letters() {
            groups
                .entry((x, a.output(s, x)))
                .or_default()
                .insert(s, a.transition(s, x));
        }
    }
    let mut out = Vec::new();
    for ((x, y), f) in groups {
        for &start in f.keys() {
            let mut cycle = vec![start];
            let mut cur = start;
            loop {
                match f.get(&cur) {
                    Some(&next) if next == start => break,
                    Some(&next) if cycle.len() < f.len() => {
                        cycle.push(next);
                        cur = next;
                    }
                    _ => {
                        cycle.clear();
                        break;
                    }
                }
            }
            if !cycle.is_empty() && cycle.iter().min() == Some(&start) {
                out.push((x, y, cycle));
            }
        }
    }
    out
}

/// Certificate for an input-side cycle: base arrows `p[t] —alpha[t]|beta[t]→
/// p[t+1]` with `p` closing into a cycle. Converts the start word
/// (the product of per-arrow quotients) arrow by arrow.
fn input_cycle_certificate(
    c: &PairingMatrix,
    relations: &[Relation],
    p: &[usize],
    alphas: &[usize],
    betas: &[usize],
    start: GroupWord,
) -> Certificate {
    let mut b = CertBuilder::new(relations, start);
    for t in 0..alphas.len() {
        let (pc, pn) = (p[t], p[t + 1]);
        let rel = rel_id_at(c, pc, alphas[t]);
        let (omega, pos) = if pc == p[0] {
            (
                GroupWord::from_letters(vec![
                    b_pos(alphas[t]),
                    b_neg(betas[t]),
                    a_neg(pn),
                    a_pos(pc),
                ]),
                b.len(),
            )
        } else {
            (
                GroupWord::from_letters(vec![
                    a_pos(pc),
                    b_pos(alphas[t]),
                    b_neg(betas[t]),
                    a_neg(pn),
                ]),
                b.len() - 1,
            )
        };
        b.insert(pos, rel, &omega);
    }
    b.finish()
}

/// Certificate for a dual-side cycle: threads each cycle letter through the
/// state word `u` (with forced intermediate states `t`), consuming one copy
/// of the witness word per thread.
fn dual_cycle_certificate(
    c: &PairingMatrix,
    relations: &[Relation],
    a: &MealyAutomaton,
    u: &[usize],
    t: &[usize],
    cycle: &[usize],
    start: GroupWord,
) -> Certificate {
    let x1 = cycle[0];
    let mut b = CertBuilder::new(relations, start);
    for (i, &first) in cycle.iter().enumerate() {
        let mut z = first;
        for (j, &uj) in u.iter().enumerate() {
            let zj = a.output(uj, z);
            debug_assert_eq!(a.transition(uj, z), t[j]);
            let rel = rel_id_at(c, uj, z);
            let (omega, pos) = if z == x1 {
                (
                    GroupWord::from_letters(vec![a_neg(uj), a_pos(t[j]), b_pos(zj), b_neg(z)]),
                    b.len(),
                )
            } else {
                (
                    GroupWord::from_letters(vec![b_neg(z), a_neg(uj), a_pos(t[j]), b_pos(zj)]),
                    b.len() - 1,
                )
            };
            b.insert(pos, rel, &omega);
            z = zj;
        }
        debug_assert_eq!(z, cycle[(i + 1) % cycle.len()]);
    }
    b.finish()
}

/// Finds all monochromatic letter cycles of `A_C`: a cycle of `k` arrows all
/// labeled `x|y` yields the witness `(b_y·b_x^{-1})^k = e`. Results are
/// ordered by (x, y, first state).
pub fn find_letter_cycles(c: &PairingMatrix) -> Vec<TorsionWitness> {
    let a = build_a_automaton(c);
    let relations = relations_from_matrix(c, GroupKind::GammaC).expect("gamma relations");
    letter_cycle_witnesses(c, &relations, &a, 1, Provenance::LetterCycle)
}

/// Input-side witnesses on the `l`-th power of `A_C`. The power alphabet
/// letter decodes back into base letters for both the witness word and the
/// certificate.
fn letter_cycle_witnesses(
    c: &PairingMatrix,
    relations: &[Relation],
    power: &MealyAutomaton,
    l: usize,
    provenance: Provenance,
) -> Vec<TorsionWitness> {
    let base = build_a_automaton(c);
    let m = base.n_letters();
    let mut out = Vec::new();
    for (x, y, cycle) in monochromatic_cycles(power) {
        let xs = crate::automata::power_word_digits(m, l, x);
        let ys = crate::automata::power_word_digits(m, l, y);
        let mut letters = Vec::with_capacity(2 * l);
        for i in (0..l).rev() {
            letters.push(b_pos(ys[i]));
            letters.push(b_neg(xs[i]));
        }
        let unreduced = GroupWord::from_letters(letters);
        let word = unreduced.reduced();
        if word.is_empty() {
            continue;
        }
        let k = cycle.len();
        // Unroll the power cycle into base arrows.
        let mut p = Vec::with_capacity(k * l + 1);
        let mut alphas = Vec::with_capacity(k * l);
        let mut betas = Vec::with_capacity(k * l);
        let mut state = cycle[0];
        p.push(state);
        for _ in 0..k {
            for &alpha in &xs {
                alphas.push(alpha);
                betas.push(base.output(state, alpha));
                state = base.transition(state, alpha);
                p.push(state);
            }
        }
        debug_assert_eq!(state, cycle[0]);
        let start = unreduced.repeat(k).reduced();
        let cert = input_cycle_certificate(c, relations, &p, &alphas, &betas, start);
        out.push(make_witness(c, word, k, provenance, cert));
    }
    out
}

/// Finds all dual letter cycles of `A_C`: for each state pair `(s, t)`, the
/// letter map `x ↦ ν(s, x)` restricted to letters with `μ(s, x) = t`; a
/// cycle of length `k` yields `(a_t^{-1}·a_s)^k = e`. Results are ordered by
/// (s, t, first letter).
pub fn find_dual_letter_cycles(c: &PairingMatrix) -> Vec<TorsionWitness> {
    let a = build_a_automaton(c);
    let dual = crate::automata::dual_table(&a);
    let relations = relations_from_matrix(c, GroupKind::GammaC).expect("gamma relations");
    dual_cycle_witnesses(c, &relations, &a, &dual, 1, Provenance::DualLetterCycle)
}

/// Dual-side witnesses on the `m_len`-th power of the dual automaton.
/// `dual_power`'s states are the base letters; its alphabet encodes state
/// words of length `m_len`.
fn dual_cycle_witnesses(
    c: &PairingMatrix,
    relations: &[Relation],
    base: &MealyAutomaton,
    dual_power: &MealyAutomaton,
    m_len: usize,
    provenance: Provenance,
) -> Vec<TorsionWitness> {
    let n = base.n_states();
    let mut out = Vec::new();
    for (uw, tw, cycle) in monochromatic_cycles(dual_power) {
        let u = crate::automata::power_word_digits(n, m_len, uw);
        let t = crate::automata::power_word_digits(n, m_len, tw);
        let mut letters = Vec::with_capacity(2 * m_len);
        for j in (0..m_len).rev() {
            letters.push(a_neg(t[j]));
            letters.push(a_pos(u[j]));
        }
        let unreduced = GroupWord::from_letters(letters);
        let word = unreduced.reduced();
        if word.is_empty() {
            continue;
        }
        let k = cycle.len();
        let start = unreduced.repeat(k).reduced();
        let cert = dual_cycle_certificate(c, relations, base, &u, &t, &cycle, start);
        out.push(make_witness(c, word, k, provenance, cert));
    }
    out
}

/// Runs the letter-cycle search on powers of `A_C` up to `max_input_len`
/// and the dual-letter-cycle search on powers of the dual automaton up to
/// `max_state_len`, deduplicating by (reduced word, exponent) keeping the
/// first find. Requires bireversibility (the dual must exist); power
/// alphabets are capped by the standard budget.
pub fn find_word_cycles(
    c: &PairingMatrix,
    max_input_len: usize,
    max_state_len: usize,
) -> Result<Vec<TorsionWitness>, TorsionError> {
    let a = build_a_automaton(c);
    if !check_bireversible(&a) {
        return Err(TorsionError::NotBireversible);
    }
    let relations = relations_from_matrix(c, GroupKind::GammaC).expect("gamma relations");
    let budget_err = |e: AutomataError| match e {
        AutomataError::BudgetExceeded { size, budget } => {
            TorsionError::BudgetExceeded { size, budget }
        }
        other => unreachable!("power construction can only exceed its budget: {other}"),
    };
    let mut found = Vec::new();
    for l in 1..=max_input_len {
        let power = power_automaton_with_budget(&a, l, DEFAULT_POWER_BUDGET).map_err(budget_err)?;
        found.extend(letter_cycle_witnesses(
            c,
            &relations,
            &power,
            l,
            Provenance::WordCycle,
        ));
    }
    let dual = dual_automaton(&a).expect("bireversible automata have duals");
    for m_len in 1..=max_state_len {
        let dual_power =
            power_automaton_with_budget(&dual, m_len, DEFAULT_POWER_BUDGET).map_err(budget_err)?;
        found.extend(dual_cycle_witnesses(
            c,
            &relations,
            &a,
            &dual_power,
            m_len,
            Provenance::WordCycle,
        ));
    }
    let mut seen: Vec<(GroupWord, usize)> = Vec::new();
    found.retain(|w| {
        let key = (w.word.clone(), w.exponent);
        if seen.contains(&key) {
            false
        } else {
            seen.push(key);
            true
        }
    });
    Ok(found)
}

/// The bipartite column normalization of a three-row invertible pairing
/// matrix: applying (`row_order`, `col_perm`, `value_relabel`) yields row 1
/// = `(1..2n)`, fresh values `(2n+1..3n)` on the first half of row 2, and
/// the permutations `perm_i`, `perm_j`, `perm_k` (0-based maps on `0..n`)
/// encoding `t_1 = s_1^{-1}s_2`, `t_2 = s_2^{-1}s_3`, `t_3 = s_3^{-1}s_1` as
/// `x·y^{-1}` quotients over the column halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteNormalForm {
    pub row_order: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub value_relabel: Vec<u32>,
    pub perm_i: Vec<usize>,
    pub perm_j: Vec<usize>,
    pub perm_k: Vec<usize>,
}

impl BipartiteNormalForm {
    /// The normalization as a reusable matrix equivalence.
    pub fn equivalence(&self) -> MatrixEquivalence {
        MatrixEquivalence {
            row_perm: self.row_order.clone(),
            col_perm: self.col_perm.clone(),
            value_relabel: self.value_relabel.clone(),
        }
    }

    /// Applies the normalization to its source matrix.
    pub fn normalize(&self, c: &PairingMatrix) -> PairingMatrix {
        self.equivalence()
            .apply(c)
            .expect("normalization components are permutations")
    }
}

/// Columns of a three-row matrix whose row-1 value pairs into row 2
/// (`x`-columns) versus row 3 (`y`-columns), each sorted ascending
/// (0-based).
fn column_split(c: &PairingMatrix) -> (Vec<usize>, Vec<usize>) {
    let mut x_cols = Vec::new();
    let mut y_cols = Vec::new();
    for j in 1..=c.n_cols() {
        let partner = c.partner_cell(Cell { row: 1, col: j });
        if partner.row == 2 {
            x_cols.push(j - 1);
        } else {
            y_cols.push(j - 1);
        }
    }
    (x_cols, y_cols)
}

/// Normalizes a three-row invertible pairing matrix to its bipartite column
/// form. The chosen column permutation (sorted `x`-columns, then sorted
/// `y`-columns) is the lexicographically least valid one; values are
/// relabeled by first occurrence.
pub fn normal_form_3x2n(c: &PairingMatrix) -> Result<BipartiteNormalForm, TorsionError> {
    if c.n_rows() != 3 {
        return Err(TorsionError::NotThreeRows);
    }
    if !c.is_invertible_pairing() {
        return Err(TorsionError::NotInvertible);
    }
    if c.n_cols() % 2 != 0 {
        return Err(TorsionError::OddColumns);
    }
    let n = c.n_cols() / 2;
    let (x_cols, y_cols) = column_split(c);
    debug_assert_eq!(x_cols.len(), n);
    let mut col_perm = x_cols;
    col_perm.extend_from_slice(&y_cols);
    let row_order: Vec<usize> = vec![0, 1, 2];
    // First-occurrence relabeling over the permuted matrix.
    let mut value_relabel = vec![0u32; c.value_count()];
    let mut next = 0u32;
    for r in &row_order {
        for j in &col_perm {
            let v = c.entry(Cell { row: r + 1, col: j + 1 }) as usize;
            if value_relabel[v - 1] == 0 {
                next += 1;
                value_relabel[v - 1] = next;
            }
        }
    }
    let nf = BipartiteNormalForm {
        row_order,
        col_perm,
        value_relabel,
        perm_i: vec![0; n],
        perm_j: vec![0; n],
        perm_k: vec![0; n],
    };
    let normalized = nf.normalize(c);
    let entry = |r: usize, j: usize| normalized.entry(Cell { row: r, col: j }) as usize;
    let mut nf = nf;
    for s in 0..n {
        // perm_i: the value v = c_{2,n+s+1} in 1..n pairs x_v with y_{s+1}.
        nf.perm_i[entry(2, n + s + 1) - 1] = s;
        // perm_j: c_{3,n+s'+1} = 2n+s+1 pairs x_{s+1} with y_{s'+1}.
        nf.perm_j[entry(3, n + s + 1) - 2 * n - 1] = s;
        // perm_k: c_{3,s+1} = n + k pairs x_{s+1} with y_k.
        nf.perm_k[s] = entry(3, s + 1) - n - 1;
    }
    Ok(nf)
}

/// A cyclic-bipartite structure on an automaton: all states arranged in a
/// cycle and the alphabet split into equal parts `A` and `B`, with every
/// `A`-input advancing one step and outputting in `B`, and every `B`-input
/// retreating one step and outputting in `A`. Indices are 0-based state and
/// letter positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicBipartiteStructure {
    pub state_cycle: Vec<usize>,
    pub letter_part_a: Vec<usize>,
    pub letter_part_b: Vec<usize>,
}

fn structure_holds(a: &MealyAutomaton, s: &CyclicBipartiteStructure) -> bool {
    let q = a.n_states();
    let m = a.n_letters();
    if s.state_cycle.len() != q
        || s.letter_part_a.len() * 2 != m
        || s.letter_part_b.len() * 2 != m
    {
        return false;
    }
    let mut state_seen = vec![false; q];
    for &st in &s.state_cycle {
        if st >= q || std::mem::replace(&mut state_seen[st], true) {
            return false;
        }
    }
    let mut part = vec![0u8; m];
    for &x in &s.letter_part_a {
        if x >= m || part[x] != 0 {
            return false;
        }
        part[x] = 1;
    }
    for &x in &s.letter_part_b {
        if x >= m || part[x] != 0 {
            return false;
        }
        part[x] = 2;
    }
    for i in 0..q {
        let st = s.state_cycle[i];
        let advance = s.state_cycle[(i + 1) % q];
        let retreat = s.state_cycle[(i + q - 1) % q];
        for x in 0..m {
            let (target, out_part) = if part[x] == 1 {
                (advance, 2)
            } else {
                (retreat, 1)
            };
            if a.transition(st, x) != target || part[a.output(st, x)] != out_part {
                return false;
            }
        }
    }
    true
}

/// Searches for a cyclic-bipartite structure on `a`: orderings of all states
/// starting at state 0, crossed with equal letter bipartitions, both in
/// lexicographic order; the first structure satisfying the arrow rules is
/// returned. Budgeted (alphabet ≤ 8, states ≤ 6 by default).
pub fn detect_cyclic_bipartite(
    a: &MealyAutomaton,
) -> Result<CyclicBipartiteStructure, TorsionError> {
    let (q, m) = (a.n_states(), a.n_letters());
    if m > DEFAULT_DETECT_ALPHABET_BUDGET {
        return Err(TorsionError::BudgetExceeded {
            size: m,
            budget: DEFAULT_DETECT_ALPHABET_BUDGET,
        });
    }
    if q > DEFAULT_DETECT_STATE_BUDGET {
        return Err(TorsionError::BudgetExceeded {
            size: q,
            budget: DEFAULT_DETECT_STATE_BUDGET,
        });
    }
    if m % 2 != 0 {
        return Err(TorsionError::NoStructureFound);
    }
    for rest in permutations_of(1, q) {
        let mut state_cycle = vec![0];
        state_cycle.extend(rest);
        for part_a in subsets_of_size(m, m / 2) {
            let letter_part_b: Vec<usize> =
                (0..m).filter(|x| !part_a.contains(x)).collect();
            let candidate = CyclicBipartiteStructure {
                state_cycle: state_cycle.clone(),
                letter_part_a: part_a,
                letter_part_b,
            };
            if structure_holds(a, &candidate) {
                return Ok(candidate);
            }
        }
    }
    Err(TorsionError::NoStructureFound)
}

/// All permutations of `lo..hi` in lexicographic order.
fn permutations_of(lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut used = vec![false; hi];
    fn rec(
        lo: usize,
        hi: usize,
        current: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == hi - lo {
            out.push(current.clone());
            return;
        }
        for v in lo..hi {
            if !used[v] {
                used[v] = true;
                current.push(v);
                rec(lo, hi, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(lo, hi, &mut current, &mut used, &mut out);
    out
}

/// All size-`k` subsets of `0..m` as ascending index vectors, in
/// lexicographic order.
fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(m: usize, k: usize, from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for v in from..m {
            current.push(v);
            rec(m, k, v + 1, current, out);
            current.pop();
        }
    }
    rec(m, k, 0, &mut current, &mut out);
    out
}

/// The shared cycle-extraction engine behind [`three_row_witness`] and
/// [`cyclic_bipartite_witness`]. Works entirely in the source matrix's
/// coordinates so certificates cite its relation ids directly.
///
/// Each cycle step carries a permutation `p_c : A → B`, `p_c(x) = ν(s_c, x)`,
/// representing `t_c = s_c^{-1} s_{c+1} = b_x·b_{p_c(x)}^{-1}`. If two
/// consecutive permutations differ, the first differing pair and its least
/// differing point `x₀` give the witness `b_{x₀}·b_{π(x₀)}^{-1}` with
/// exponent the `π`-orbit length of `x₀`, `π = p_b^{-1}∘p_a`. If all
/// permutations agree, the witness is `b_{x₀}·b_{p(x₀)}^{-1}` with exponent
/// the cycle length.
fn cyclic_engine(
    c: &PairingMatrix,
    a: &MealyAutomaton,
    relations: &[Relation],
    state_cycle: &[usize],
    part_a: &[usize],
    provenance: Provenance,
) -> TorsionWitness {
    let q = state_cycle.len();
    let p = |cyc_pos: usize, x: usize| a.output(state_cycle[cyc_pos], x);
    let mut branch = None;
    for cpos in 0..q {
        let npos = (cpos + 1) % q;
        if part_a.iter().any(|&x| p(cpos, x) != p(npos, x)) {
            branch = Some(cpos);
            break;
        }
    }
    match branch {
        Some(cpos) => {
            let npos = (cpos + 1) % q;
            let wpos = (cpos + 2) % q;
            let (s_u, s_v, s_w) = (state_cycle[cpos], state_cycle[npos], state_cycle[wpos]);
            let x0 = *part_a
                .iter()
                .find(|&&x| p(cpos, x) != p(npos, x))
                .expect("a differing point exists");
            // π = p_b^{-1} ∘ p_a on the A part.
            let pb_inv: BTreeMap<usize, usize> =
                part_a.iter().map(|&x| (p(npos, x), x)).collect();
            let pi = |x: usize| pb_inv[&p(cpos, x)];
            let mut orbit = vec![x0];
            let mut cur = pi(x0);
            while cur != x0 {
                orbit.push(cur);
                cur = pi(cur);
            }
            let m_exp = orbit.len();
            let word = GroupWord::from_letters(vec![b_pos(x0), b_neg(orbit[1])]);
            let start = word.repeat(m_exp);
            let mut b = CertBuilder::new(relations, start);
            let pa_x0 = p(cpos, x0);
            let pi_x0 = orbit[1];
            for gb in (1..m_exp).rev() {
                let y = orbit[gb];
                let pi_y = orbit[(gb + 1) % m_exp];
                let pa_y = p(cpos, y);
                let beta = 2 * gb;
                b.insert(
                    beta + 1,
                    rel_id_at(c, s_u, x0),
                    &GroupWord::from_letters(vec![b_neg(x0), a_neg(s_u), a_pos(s_v), b_pos(pa_x0)]),
                );
                b.insert(
                    beta + 3,
                    rel_id_at(c, s_v, pi_x0),
                    &GroupWord::from_letters(vec![
                        b_neg(pa_x0),
                        a_neg(s_w),
                        a_pos(s_v),
                        b_pos(pi_x0),
                    ]),
                );
                b.insert(
                    beta + 4,
                    rel_id_at(c, s_v, pi_y),
                    &GroupWord::from_letters(vec![a_neg(s_v), a_pos(s_w), b_pos(pa_y), b_neg(pi_y)]),
                );
                b.insert(
                    beta,
                    rel_id_at(c, s_u, y),
                    &GroupWord::from_letters(vec![b_pos(y), b_neg(pa_y), a_neg(s_v), a_pos(s_u)]),
                );
            }
            make_witness(c, word, m_exp, provenance, b.finish())
        }
        None => {
            // All permutations equal: the common quotient has order q.
            let x0 = part_a[0];
            let y0 = p(0, x0);
            let word = GroupWord::from_letters(vec![b_pos(x0), b_neg(y0)]);
            let start = word.repeat(q);
            let mut b = CertBuilder::new(relations, start);
            for f in 0..q {
                let s_f = state_cycle[f];
                let s_next = state_cycle[(f + 1) % q];
                let pos = if f == 0 { 0 } else { 2 };
                b.insert(
                    pos,
                    rel_id_at(c, s_f, x0),
                    &GroupWord::from_letters(vec![a_neg(s_f), a_pos(s_next), b_pos(y0), b_neg(x0)]),
                );
            }
            make_witness(c, word, q, provenance, b.finish())
        }
    }
}

/// The constructive witness for three-row invertible pairing matrices:
/// normalizes the columns, compares the permutations behind `t_1, t_2, t_3`,
/// and extracts a cycle. Always succeeds on valid inputs, with exponent in
/// `2..=n` when two permutations differ and exactly 3 when all agree.
pub fn three_row_witness(c: &PairingMatrix) -> Result<TorsionWitness, TorsionError> {
    normal_form_3x2n(c)?;
    let a = build_a_automaton(c);
    let relations = relations_from_matrix(c, GroupKind::GammaC).expect("gamma relations");
    let (x_cols, _) = column_split(c);
    Ok(cyclic_engine(
        c,
        &a,
        &relations,
        &[0, 1, 2],
        &x_cols,
        Provenance::ThreeRow,
    ))
}

/// Runs the cycle extraction on an arbitrary cyclic-bipartite structure of
/// `A_C`. The structure is validated against the automaton's arrows and
/// rotated to start at the least state, so results are representative-
/// independent; for three-row matrices this agrees with
/// [`three_row_witness`].
pub fn cyclic_bipartite_witness(
    c: &PairingMatrix,
    s: &CyclicBipartiteStructure,
) -> Result<TorsionWitness, TorsionError> {
    let a = build_a_automaton(c);
    if !structure_holds(&a, s) {
        return Err(TorsionError::StructureMismatch);
    }
    let least = s
        .state_cycle
        .iter()
        .position(|&st| st == 0)
        .expect("state cycles cover all states");
    let rotated: Vec<usize> = (0..s.state_cycle.len())
        .map(|i| s.state_cycle[(least + i) % s.state_cycle.len()])
        .collect();
    let mut part_a = s.letter_part_a.clone();
    part_a.sort_unstable();
    let relations = relations_from_matrix(c, GroupKind::GammaC).expect("gamma relations");
    Ok(cyclic_engine(
        c,
        &a,
        &relations,
        &rotated,
        &part_a,
        Provenance::CyclicBipartite,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::validate_pairing;

    fn m3x4() -> PairingMatrix {
        validate_pairing(&[vec![1, 2, 3, 4], vec![5, 6, 2, 1], vec![3, 4, 5, 6]]).unwrap()
    }

    fn m2x2() -> PairingMatrix {
        validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap()
    }

    fn m3x2() -> PairingMatrix {
        validate_pairing(&[vec![1, 2], vec![3, 1], vec![2, 3]]).unwrap()
    }

    fn words(ws: &[TorsionWitness]) -> Vec<(String, usize)> {
        ws.iter()
            .map(|w| (w.word.to_string(), w.exponent))
            .collect()
    }

    #[test]
    fn letter_cycles_of_3x2() {
        let ws = find_letter_cycles(&m3x2());
        assert_eq!(words(&ws), [("b2*B1".into(), 3), ("b1*B2".into(), 3)]);
        for w in &ws {
            assert_eq!(w.provenance, Provenance::LetterCycle);
            assert!(w.nontrivial_guaranteed);
            assert_eq!(verify_witness(&m3x2(), w), Ok(true));
        }
    }

    #[test]
    fn letter_cycles_of_2x2() {
        let ws = find_letter_cycles(&m2x2());
        assert_eq!(words(&ws), [("b2*B1".into(), 2), ("b1*B2".into(), 2)]);
        assert_eq!(
            ws[0].justification.as_deref(),
            Some("distinct generators b1, b2")
        );
    }

    #[test]
    fn letter_cycles_of_3x4_are_empty() {
        assert!(find_letter_cycles(&m3x4()).is_empty());
    }

    #[test]
    fn dual_letter_cycles_of_2x2() {
        let c = m2x2();
        let ws = find_dual_letter_cycles(&c);
        assert_eq!(words(&ws), [("A2*a1".into(), 2), ("A1*a2".into(), 2)]);
        for w in &ws {
            assert_eq!(w.provenance, Provenance::DualLetterCycle);
            assert!(w.nontrivial_guaranteed);
            assert_eq!(
                w.justification.as_deref(),
                Some("distinct generators a1, a2")
            );
            assert_eq!(verify_witness(&c, w), Ok(true));
        }
    }

    #[test]
    fn dual_letter_cycles_empty_cases() {
        assert!(find_dual_letter_cycles(&m3x4()).is_empty());
        assert!(find_dual_letter_cycles(&m3x2()).is_empty());
    }

    #[test]
    fn word_cycles_small_budgets() {
        assert!(find_word_cycles(&m3x4(), 1, 1).unwrap().is_empty());
        let ws = find_word_cycles(&m2x2(), 1, 1).unwrap();
        let listed = words(&ws);
        assert!(listed.contains(&("b2*B1".into(), 2)));
        assert!(listed.contains(&("A2*a1".into(), 2)));
        for w in &ws {
            assert_eq!(w.provenance, Provenance::WordCycle);
        }
    }

    #[test]
    fn word_cycles_grow_monotonically() {
        for c in [m2x2(), m3x2(), m3x4()] {
            let small = find_word_cycles(&c, 1, 1).unwrap();
            let large = find_word_cycles(&c, 2, 2).unwrap();
            let large_keys = words(&large);
            for key in words(&small) {
                assert!(large_keys.contains(&key));
            }
            for w in &large {
                assert_eq!(verify_witness(&c, w), Ok(true));
            }
        }
    }

    #[test]
    fn word_cycles_find_certified_identities_on_3x4() {
        // The a_1 → a_1 length-2 loop reading b1b3 and writing b4b2 yields a
        // trivial but certified relation consequence with exponent 1.
        let ws = find_word_cycles(&m3x4(), 2, 2).unwrap();
        let listed = words(&ws);
        assert!(listed.contains(&("b2*B3*b4*B1".into(), 1)));
        let w = ws
            .iter()
            .find(|w| w.word.to_string() == "b2*B3*b4*B1")
            .unwrap();
        assert!(!w.nontrivial_guaranteed);
        assert_eq!(verify_witness(&m3x4(), w), Ok(true));
    }

    #[test]
    fn word_cycles_demand_bireversibility() {
        let c = validate_pairing(&[
            vec![1, 2, 3, 4],
            vec![3, 4, 5, 6],
            vec![2, 1, 7, 8],
            vec![5, 6, 8, 7],
        ])
        .unwrap();
        assert!(!c.is_invertible_pairing());
        assert_eq!(
            find_word_cycles(&c, 1, 1),
            Err(TorsionError::NotBireversible)
        );
    }

    #[test]
    fn normal_form_of_3x4() {
        let nf = normal_form_3x2n(&m3x4()).unwrap();
        assert_eq!(nf.row_order, [0, 1, 2]);
        assert_eq!(nf.col_perm, [0, 1, 2, 3]);
        assert_eq!(nf.value_relabel, [1, 2, 3, 4, 5, 6]);
        assert_eq!(nf.perm_i, [1, 0]);
        assert_eq!(nf.perm_j, [0, 1]);
        assert_eq!(nf.perm_k, [0, 1]);
        assert_eq!(nf.normalize(&m3x4()), m3x4());
    }

    #[test]
    fn normal_form_of_3x2() {
        let nf = normal_form_3x2n(&m3x2()).unwrap();
        assert_eq!(nf.col_perm, [0, 1]);
        assert_eq!(nf.perm_i, [0]);
        assert_eq!(nf.perm_j, [0]);
        assert_eq!(nf.perm_k, [0]);
    }

    #[test]
    fn normal_form_rejections() {
        assert_eq!(normal_form_3x2n(&m2x2()), Err(TorsionError::NotThreeRows));
    }

    #[test]
    fn three_row_witness_of_3x4() {
        let w = three_row_witness(&m3x4()).unwrap();
        assert_eq!(w.word.to_string(), "b1*B2");
        assert_eq!(w.exponent, 2);
        assert_eq!(w.provenance, Provenance::ThreeRow);
        assert!(w.nontrivial_guaranteed);
        assert_eq!(
            w.justification.as_deref(),
            Some("distinct generators b1, b2")
        );
        assert_eq!(verify_witness(&m3x4(), &w), Ok(true));
    }

    #[test]
    fn three_row_witness_of_3x2_uses_the_equal_branch() {
        let w = three_row_witness(&m3x2()).unwrap();
        assert_eq!(w.word.to_string(), "b1*B2");
        assert_eq!(w.exponent, 3);
        assert_eq!(verify_witness(&m3x2(), &w), Ok(true));
    }

    #[test]
    fn cross_method_agreement_on_3x2() {
        let letter = find_letter_cycles(&m3x2());
        let pipeline = three_row_witness(&m3x2()).unwrap();
        assert!(letter.iter().any(|w| {
            w.exponent == pipeline.exponent
                && (w.word == pipeline.word || w.word == pipeline.word.inverse())
        }));
    }

    #[test]
    fn detects_structure_on_3x4() {
        let a = build_a_automaton(&m3x4());
        let s = detect_cyclic_bipartite(&a).unwrap();
        assert_eq!(s.state_cycle, [0, 1, 2]);
        assert_eq!(s.letter_part_a, [0, 1]);
        assert_eq!(s.letter_part_b, [2, 3]);
    }

    #[test]
    fn detects_structure_on_2x2() {
        let a = build_a_automaton(&m2x2());
        let s = detect_cyclic_bipartite(&a).unwrap();
        assert_eq!(s.state_cycle, [0, 1]);
        assert_eq!(s.letter_part_a, [0]);
        assert_eq!(s.letter_part_b, [1]);
    }

    #[test]
    fn detection_rejects_the_identity_automaton() {
        let a = MealyAutomaton::from_arrows(
            vec!["s".into()],
            vec!["x".into()],
            &[crate::automata::Arrow {
                from: "s".into(),
                input: "x".into(),
                output: "x".into(),
                to: "s".into(),
            }],
        )
        .unwrap();
        assert_eq!(
            detect_cyclic_bipartite(&a),
            Err(TorsionError::NoStructureFound)
        );
    }

    #[test]
    fn detection_respects_budgets() {
        let a = build_a_automaton(&m3x4());
        let p = crate::automata::power_automaton(&a, 2).unwrap();
        assert_eq!(
            detect_cyclic_bipartite(&p),
            Err(TorsionError::BudgetExceeded { size: 16, budget: 8 })
        );
    }

    #[test]
    fn cyclic_witness_agrees_with_the_pipeline_on_3x4() {
        let c = m3x4();
        let s = detect_cyclic_bipartite(&build_a_automaton(&c)).unwrap();
        let w = cyclic_bipartite_witness(&c, &s).unwrap();
        let t = three_row_witness(&c).unwrap();
        assert_eq!(w.word, t.word);
        assert_eq!(w.exponent, t.exponent);
        assert_eq!(w.provenance, Provenance::CyclicBipartite);
        assert_eq!(verify_witness(&c, &w), Ok(true));
    }

    #[test]
    fn cyclic_witness_on_2x2() {
        let c = m2x2();
        let s = detect_cyclic_bipartite(&build_a_automaton(&c)).unwrap();
        let w = cyclic_bipartite_witness(&c, &s).unwrap();
        assert_eq!(w.word.to_string(), "b1*B2");
        assert_eq!(w.exponent, 2);
        assert_eq!(verify_witness(&c, &w), Ok(true));
    }

    #[test]
    fn cyclic_witness_rejects_mismatched_structures() {
        let c = m3x4();
        let swapped = CyclicBipartiteStructure {
            state_cycle: vec![0, 1, 2],
            letter_part_a: vec![2, 3],
            letter_part_b: vec![0, 1],
        };
        assert_eq!(
            cyclic_bipartite_witness(&c, &swapped),
            Err(TorsionError::StructureMismatch)
        );
    }

    #[test]
    fn cyclic_witness_is_rotation_invariant() {
        let c = m3x4();
        let rotated = CyclicBipartiteStructure {
            state_cycle: vec![1, 2, 0],
            letter_part_a: vec![0, 1],
            letter_part_b: vec![2, 3],
        };
        let w = cyclic_bipartite_witness(&c, &rotated).unwrap();
        let t = three_row_witness(&c).unwrap();
        assert_eq!(w.word, t.word);
        assert_eq!(w.exponent, t.exponent);
    }

    #[test]
    fn witness_json_shape() {
        let w = three_row_witness(&m3x4()).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        assert!(json.starts_with(
            "{\"word\":[\"b1\",\"B2\"],\"exponent\":2,\"provenance\":\"Theorem4\",\
             \"nontrivial_guaranteed\":true,\"justification\":"
        ));
        let back: TorsionWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn three_row_totality_at_desk_scale() {
        for m in [2, 4] {
            for c in crate::matrix::enumerate_pairings(3, m, true).unwrap() {
                let w = three_row_witness(&c).unwrap();
                assert!(w.nontrivial_guaranteed);
                assert!(w.exponent == 3 || (2..=m / 2).contains(&w.exponent));
                assert_eq!(verify_witness(&c, &w), Ok(true));
            }
        }
    }
}
