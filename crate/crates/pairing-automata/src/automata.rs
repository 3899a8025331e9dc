//! Mealy automata, their helix graphs, and the pairing constructions.
//!
//! A Mealy automaton is a complete deterministic letter-by-letter transducer
//! `(S, X, μ, ν)`: from state `s` on input letter `x` it moves to `μ(s, x)`
//! and emits `ν(s, x)`. A pairing matrix `C` induces two such machines:
//!
//! * `A_C`, with states `a_1..a_n` and alphabet `b_1..b_m`, carrying an
//!   arrow `a_i —b_j|b_j'→ a_i'` for every cell `(i,j)` with partner
//!   `(i',j')`;
//! * `B_C` (square matrices only), with states and alphabet `a_1..a_n`,
//!   carrying `a_i —a_j|a_i'→ a_j'` for the same pairs. `B_C` is never
//!   invertible for `n ≥ 2`.
//!
//! The *helix graph* of an automaton lives on (state, letter) pairs with an
//! edge `(s,x) → (μ(s,x), ν(s,x))` per arrow; an automaton arises as some
//! `A_C` exactly when it is bireversible, loop-free, never outputs its
//! input, and its helix graph is a disjoint union of 2-cycles —
//! [`recognize_pairing`] rebuilds the matrix from those 2-cycles.
//!
//! # Example
//!
//! ```
//! use pairing_automata::automata::{build_a_automaton, check_bireversible, recognize_pairing};
//! use pairing_automata::matrix::validate_pairing;
//!
//! let c = validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap();
//! let a = build_a_automaton(&c);
//! assert!(check_bireversible(&a));
//! assert_eq!(recognize_pairing(&a).unwrap(), c);
//! ```

use crate::matrix::{validate_pairing, Cell, PairingMatrix};
use serde::Serialize;
use thiserror::Error;

/// Default ceiling on the alphabet size of a power automaton.
pub const DEFAULT_POWER_BUDGET: usize = 4096;

/// Failures of the automaton constructors and analyses.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    /// No states or no letters.
    #[error("EmptyAutomaton")]
    EmptyAutomaton,
    /// A state or letter label used twice.
    #[error("DuplicateLabel({0})")]
    DuplicateLabel(String),
    /// An arrow referring to a label outside the declared lists.
    #[error("UnknownLabel({0})")]
    UnknownLabel(String),
    /// Two arrows leaving one state on one input letter.
    #[error("DuplicateArrow({0},{1})")]
    DuplicateArrow(String, String),
    /// No arrow leaving some state on some input letter.
    #[error("MissingArrow({0},{1})")]
    MissingArrow(String, String),
    /// `B_C` requested for a non-square matrix.
    #[error("NotSquare")]
    NotSquare,
    /// An operation requiring bireversibility applied to an automaton
    /// without it.
    #[error("NotBireversible")]
    NotBireversible,
    /// A transition `μ(s, x) = s` (state label, letter label).
    #[error("HasLoop({0},{1})")]
    HasLoop(String, String),
    /// An output `ν(s, x) = x` (state label, letter label).
    #[error("HasIdentityOutput({0},{1})")]
    HasIdentityOutput(String, String),
    /// A helix vertex not on a cycle of length two (vertex labels).
    #[error("HelixCycleTooLong({0},{1})")]
    HelixCycleTooLong(String, String),
    /// A power alphabet larger than the configured budget.
    #[error("BudgetExceeded({size},{budget})")]
    BudgetExceeded { size: usize, budget: usize },
}

/// One transition `from —in|out→ to`, by label. Serializes as
/// `{"from", "in", "out", "to"}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub from: String,
    #[serde(rename = "in")]
    pub input: String,
    #[serde(rename = "out")]
    pub output: String,
    pub to: String,
}

impl std::fmt::Display for Arrow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} --{}|{}--> {}", self.from, self.input, self.output, self.to)
    }
}

/// A complete deterministic Mealy automaton. States and letters are
/// addressed by 0-based index; labels are kept for display and export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    /// `transition[s * |X| + x]` = next state index.
    transition: Vec<usize>,
    /// `output[s * |X| + x]` = output letter index.
    output: Vec<usize>,
}

impl MealyAutomaton {
    /// Builds an automaton from flattened transition and output tables
    /// (`[s * |X| + x]` layout), checking shape and label uniqueness.
    pub fn from_maps(
        states: Vec<String>,
        alphabet: Vec<String>,
        transition: Vec<usize>,
        output: Vec<usize>,
    ) -> Result<Self, AutomataError> {
        if states.is_empty() || alphabet.is_empty() {
            return Err(AutomataError::EmptyAutomaton);
        }
        for (labels, other) in [(&states, &alphabet), (&alphabet, &states)] {
            for (i, l) in labels.iter().enumerate() {
                if labels[..i].contains(l) {
                    return Err(AutomataError::DuplicateLabel(l.clone()));
                }
                // A shared state/letter label is fine (B_C uses one list for
                // both roles) only when the lists are identical.
                if other != labels && other.contains(l) {
                    return Err(AutomataError::DuplicateLabel(l.clone()));
                }
            }
        }
        let size = states.len() * alphabet.len();
        if transition.len() != size
            || output.len() != size
            || transition.iter().any(|&t| t >= states.len())
            || output.iter().any(|&y| y >= alphabet.len())
        {
            return Err(AutomataError::EmptyAutomaton);
        }
        Ok(MealyAutomaton {
            states,
            alphabet,
            transition,
            output,
        })
    }

    /// Builds an automaton from labeled arrows, requiring exactly one arrow
    /// per (state, letter) pair.
    pub fn from_arrows(
        states: Vec<String>,
        alphabet: Vec<String>,
        arrows: &[Arrow],
    ) -> Result<Self, AutomataError> {
        if states.is_empty() || alphabet.is_empty() {
            return Err(AutomataError::EmptyAutomaton);
        }
        let find = |labels: &[String], l: &str| -> Result<usize, AutomataError> {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| AutomataError::UnknownLabel(l.to_string()))
        };
        let m = alphabet.len();
        let mut transition = vec![usize::MAX; states.len() * m];
        let mut output = vec![usize::MAX; states.len() * m];
        for arrow in arrows {
            let s = find(&states, &arrow.from)?;
            let x = find(&alphabet, &arrow.input)?;
            let y = find(&alphabet, &arrow.output)?;
            let t = find(&states, &arrow.to)?;
            if transition[s * m + x] != usize::MAX {
                return Err(AutomataError::DuplicateArrow(
                    arrow.from.clone(),
                    arrow.input.clone(),
                ));
            }
            transition[s * m + x] = t;
            output[s * m + x] = y;
        }
        for s in 0..states.len() {
            for x in 0..m {
                if transition[s * m + x] == usize::MAX {
                    return Err(AutomataError::MissingArrow(
                        states[s].clone(),
                        alphabet[x].clone(),
                    ));
                }
            }
        }
        MealyAutomaton::from_maps(states, alphabet, transition, output)
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn n_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// Next state from state `s` on letter `x` (0-based indices).
    pub fn transition(&self, s: usize, x: usize) -> usize {
        self.transition[s * self.alphabet.len() + x]
    }

    /// Output letter from state `s` on letter `x` (0-based indices).
    pub fn output(&self, s: usize, x: usize) -> usize {
        self.output[s * self.alphabet.len() + x]
    }

    /// Feeds `word` through the automaton from `start`; returns the final
    /// state and the output word.
    pub fn run(&self, start: usize, word: &[usize]) -> (usize, Vec<usize>) {
        let mut s = start;
        let mut out = Vec::with_capacity(word.len());
        for &x in word {
            out.push(self.output(s, x));
            s = self.transition(s, x);
        }
        (s, out)
    }

    /// All arrows ordered by (state index, letter index).
    pub fn arrows(&self) -> Vec<Arrow> {
        let mut out = Vec::with_capacity(self.states.len() * self.alphabet.len());
        for s in 0..self.states.len() {
            for x in 0..self.alphabet.len() {
                out.push(Arrow {
                    from: self.states[s].clone(),
                    input: self.alphabet[x].clone(),
                    output: self.alphabet[self.output(s, x)].clone(),
                    to: self.states[self.transition(s, x)].clone(),
                });
            }
        }
        out
    }

    /// GraphViz DOT rendering: one node per state, one edge per arrow
    /// labeled `x|y`, ordered by (state index, letter index).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph mealy {\n  rankdir=LR;\n");
        for s in &self.states {
            out.push_str(&format!("  \"{s}\";\n"));
        }
        for a in self.arrows() {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}|{}\"];\n",
                a.from, a.to, a.input, a.output
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// JSON mirror: `{"states": [..], "alphabet": [..], "arrows": [{"from","in","out","to"}, ..]}`.
impl Serialize for MealyAutomaton {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            states: &'a [String],
            alphabet: &'a [String],
            arrows: Vec<Arrow>,
        }
        Dto {
            states: &self.states,
            alphabet: &self.alphabet,
            arrows: self.arrows(),
        }
        .serialize(serializer)
    }
}

/// Standard state labels `a1..an`.
pub(crate) fn state_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

/// Standard letter labels `b1..bm`.
pub(crate) fn letter_labels(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("b{j}")).collect()
}

/// The automaton `A_C`: states `a_1..a_n`, alphabet `b_1..b_m`, and for
/// every cell `(i,j)` with partner `(i',j')` the arrow
/// `a_i —b_j|b_j'→ a_i'`. Valid matrices make this total, so construction
/// cannot fail.
pub fn build_a_automaton(c: &PairingMatrix) -> MealyAutomaton {
    let (n, m) = (c.n_rows(), c.n_cols());
    let mut transition = vec![0; n * m];
    let mut output = vec![0; n * m];
    for i in 1..=n {
        for j in 1..=m {
            let p = c.partner_cell(Cell { row: i, col: j });
            transition[(i - 1) * m + (j - 1)] = p.row - 1;
            output[(i - 1) * m + (j - 1)] = p.col - 1;
        }
    }
    MealyAutomaton {
        states: state_labels(n),
        alphabet: letter_labels(m),
        transition,
        output,
    }
}

/// The automaton `B_C` for square `C`: states and alphabet `a_1..a_n`, and
/// for every cell `(i,j)` with partner `(i',j')` the arrow
/// `a_i —a_j|a_i'→ a_j'`.
pub fn build_b_automaton(c: &PairingMatrix) -> Result<MealyAutomaton, AutomataError> {
    let n = c.n_rows();
    if n != c.n_cols() {
        return Err(AutomataError::NotSquare);
    }
    let mut transition = vec![0; n * n];
    let mut output = vec![0; n * n];
    for i in 1..=n {
        for j in 1..=n {
            let p = c.partner_cell(Cell { row: i, col: j });
            transition[(i - 1) * n + (j - 1)] = p.col - 1;
            output[(i - 1) * n + (j - 1)] = p.row - 1;
        }
    }
    Ok(MealyAutomaton {
        states: state_labels(n),
        alphabet: state_labels(n),
        transition,
        output,
    })
}

/// Invertibility: at every state, the output map `x ↦ ν(s, x)` permutes the
/// alphabet.
pub fn check_invertible(a: &MealyAutomaton) -> bool {
    (0..a.n_states()).all(|s| {
        let mut seen = vec![false; a.n_letters()];
        (0..a.n_letters()).all(|x| !std::mem::replace(&mut seen[a.output(s, x)], true))
    })
}

/// Bireversibility: the automaton is invertible, the joint map
/// `(s,x) ↦ (μ(s,x), ν(s,x))` permutes state×letter pairs, and each letter's
/// transition map `s ↦ μ(s, x)` permutes the states (so the inverse
/// automaton's transitions are again deterministic and complete).
pub fn check_bireversible(a: &MealyAutomaton) -> bool {
    if !check_invertible(a) {
        return false;
    }
    let (n, m) = (a.n_states(), a.n_letters());
    let mut seen_joint = vec![false; n * m];
    for s in 0..n {
        for x in 0..m {
            let slot = a.transition(s, x) * m + a.output(s, x);
            if std::mem::replace(&mut seen_joint[slot], true) {
                return false;
            }
        }
    }
    (0..m).all(|x| {
        let mut seen = vec![false; n];
        (0..n).all(|s| !std::mem::replace(&mut seen[a.transition(s, x)], true))
    })
}

/// The helix graph: vertices are (state, letter) pairs, and each automaton
/// arrow `s —x|y→ t` contributes the edge `(s,x) → (t,y)`, so every vertex
/// has out-degree one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HelixGraph {
    state_labels: Vec<String>,
    letter_labels: Vec<String>,
    /// `successor[s * |X| + x]` = flattened successor vertex.
    successor: Vec<usize>,
}

impl HelixGraph {
    pub fn n_states(&self) -> usize {
        self.state_labels.len()
    }

    pub fn n_letters(&self) -> usize {
        self.letter_labels.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.successor.len()
    }

    /// The unique successor of vertex `(s, x)` (0-based indices).
    pub fn successor(&self, s: usize, x: usize) -> (usize, usize) {
        let v = self.successor[s * self.letter_labels.len() + x];
        (v / self.letter_labels.len(), v % self.letter_labels.len())
    }

    /// Whether every vertex lies on a cycle of length exactly two.
    pub fn is_union_of_two_cycles(&self) -> bool {
        (0..self.successor.len()).all(|v| {
            let w = self.successor[v];
            w != v && self.successor[w] == v
        })
    }

    /// The cycle decomposition of the vertices that lie on cycles, each
    /// cycle starting from its least vertex, cycles ordered by least vertex.
    /// Vertices are (state, letter) index pairs.
    pub fn cycles(&self) -> Vec<Vec<(usize, usize)>> {
        let m = self.letter_labels.len();
        let n = self.successor.len();
        let mut on_cycle = vec![false; n];
        for start in 0..n {
            // Out-degree one: the walk from any vertex ends in a cycle;
            // tortoise-free detection at this scale by step counting.
            let mut seen = vec![false; n];
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                v = self.successor[v];
            }
            // v now lies on a cycle: mark it.
            let entry = v;
            loop {
                on_cycle[v] = true;
                v = self.successor[v];
                if v == entry {
                    break;
                }
            }
        }
        let mut out = Vec::new();
        let mut emitted = vec![false; n];
        for start in 0..n {
            if !on_cycle[start] || emitted[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            loop {
                emitted[v] = true;
                cycle.push((v / m, v % m));
                v = self.successor[v];
                if v == start {
                    break;
                }
            }
            out.push(cycle);
        }
        out
    }

    /// Display label of a helix vertex, `(s,x)` by label.
    pub fn vertex_label(&self, s: usize, x: usize) -> String {
        format!("({},{})", self.state_labels[s], self.letter_labels[x])
    }

    /// GraphViz DOT rendering with one node per (state, letter) vertex and
    /// one edge per arrow, ordered by (state index, letter index).
    pub fn to_dot(&self) -> String {
        let m = self.letter_labels.len();
        let mut out = String::from("digraph helix {\n");
        for s in 0..self.state_labels.len() {
            for x in 0..m {
                out.push_str(&format!("  \"{}\";\n", self.vertex_label(s, x)));
            }
        }
        for s in 0..self.state_labels.len() {
            for x in 0..m {
                let (t, y) = self.successor(s, x);
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\";\n",
                    self.vertex_label(s, x),
                    self.vertex_label(t, y)
                ));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the helix graph of `a`.
pub fn build_helix(a: &MealyAutomaton) -> HelixGraph {
    let m = a.n_letters();
    let mut successor = vec![0; a.n_states() * m];
    for s in 0..a.n_states() {
        for x in 0..m {
            successor[s * m + x] = a.transition(s, x) * m + a.output(s, x);
        }
    }
    HelixGraph {
        state_labels: a.states().to_vec(),
        letter_labels: a.alphabet().to_vec(),
        successor,
    }
}

/// Decides whether `a` is the automaton of some pairing matrix and rebuilds
/// that matrix. Succeeds iff `a` is bireversible, has no loop
/// (`μ(s,x) ≠ s`), never outputs its input (`ν(s,x) ≠ x`), and every helix
/// vertex lies on a 2-cycle. Rows are indexed by states, columns by
/// letters, and each helix 2-cycle `{(s,x), (t,y)}` becomes one value,
/// assigned in row-major first-occurrence order — so
/// `recognize_pairing(build_a_automaton(C))` equals `C` up to the matrix
/// equivalence (and exactly when `C`'s values are first-occurrence
/// ordered).
///
/// Failures report the first offender in (state, letter) order, checked in
/// the order: bireversibility, loops, identity outputs, helix cycle length.
pub fn recognize_pairing(a: &MealyAutomaton) -> Result<PairingMatrix, AutomataError> {
    if !check_bireversible(a) {
        return Err(AutomataError::NotBireversible);
    }
    let (n, m) = (a.n_states(), a.n_letters());
    for s in 0..n {
        for x in 0..m {
            if a.transition(s, x) == s {
                return Err(AutomataError::HasLoop(
                    a.states()[s].clone(),
                    a.alphabet()[x].clone(),
                ));
            }
        }
    }
    for s in 0..n {
        for x in 0..m {
            if a.output(s, x) == x {
                return Err(AutomataError::HasIdentityOutput(
                    a.states()[s].clone(),
                    a.alphabet()[x].clone(),
                ));
            }
        }
    }
    let helix = build_helix(a);
    for s in 0..n {
        for x in 0..m {
            let (t, y) = helix.successor(s, x);
            if helix.successor(t, y) != (s, x) {
                return Err(AutomataError::HelixCycleTooLong(
                    a.states()[s].clone(),
                    a.alphabet()[x].clone(),
                ));
            }
        }
    }
    let mut raw = vec![vec![0i64; m]; n];
    let mut next = 0i64;
    for s in 0..n {
        for x in 0..m {
            if raw[s][x] == 0 {
                next += 1;
                raw[s][x] = next;
                let (t, y) = helix.successor(s, x);
                raw[t][y] = next;
            }
        }
    }
    // The 2-cycle structure forbids loops within a row (that would need
    // μ(s,x) = s) or a column (that would need ν(s,x) = x), so this cannot
    // fail after the checks above.
    Ok(validate_pairing(&raw).expect("helix 2-cycles always pair the grid"))
}

/// The dual arrow table of `a` (states and alphabet exchanged) without any
/// bireversibility check; always total, but only a faithful dual when `a`
/// is bireversible.
pub(crate) fn dual_table(a: &MealyAutomaton) -> MealyAutomaton {
    let (n, m) = (a.n_states(), a.n_letters());
    let mut transition = vec![0; m * n];
    let mut output = vec![0; m * n];
    for s in 0..n {
        for x in 0..m {
            transition[x * n + s] = a.output(s, x);
            output[x * n + s] = a.transition(s, x);
        }
    }
    MealyAutomaton::from_maps(a.alphabet().to_vec(), a.states().to_vec(), transition, output)
        .expect("the dual table is total over the exchanged grid")
}

/// The dual automaton of a bireversible `a`: states and alphabet exchange
/// roles, and each arrow `s —x|y→ t` becomes `x —s|t→ y`.
pub fn dual_automaton(a: &MealyAutomaton) -> Result<MealyAutomaton, AutomataError> {
    if !check_bireversible(a) {
        return Err(AutomataError::NotBireversible);
    }
    Ok(dual_table(a))
}

/// [`power_automaton`] with an explicit alphabet budget.
pub fn power_automaton_with_budget(
    a: &MealyAutomaton,
    l: usize,
    budget: usize,
) -> Result<MealyAutomaton, AutomataError> {
    assert!(l >= 1, "power automaton needs a positive word length");
    let m = a.n_letters();
    let size = m
        .checked_pow(l as u32)
        .filter(|&s| s <= budget)
        .ok_or(AutomataError::BudgetExceeded {
            size: m.checked_pow(l as u32).unwrap_or(usize::MAX),
            budget,
        })?;
    let n = a.n_states();
    let mut alphabet = Vec::with_capacity(size);
    for w in 0..size {
        let word = power_word_digits(m, l, w);
        let label: String = word.iter().map(|&x| a.alphabet()[x].as_str()).collect();
        alphabet.push(label);
    }
    let mut transition = vec![0; n * size];
    let mut output = vec![0; n * size];
    for s in 0..n {
        for w in 0..size {
            let word = power_word_digits(m, l, w);
            let (t, out) = a.run(s, &word);
            transition[s * size + w] = t;
            output[s * size + w] = power_word_index(m, &out);
        }
    }
    Ok(MealyAutomaton {
        states: a.states().to_vec(),
        alphabet,
        transition,
        output,
    })
}

/// The automaton `A*` restricted to input words of length exactly `l`: same
/// states, alphabet `X^l` in lexicographic order, transition and output by
/// feeding words through `a` letter by letter.
pub fn power_automaton(a: &MealyAutomaton, l: usize) -> Result<MealyAutomaton, AutomataError> {
    power_automaton_with_budget(a, l, DEFAULT_POWER_BUDGET)
}

/// Decodes a power-alphabet index into its length-`l` letter word
/// (most-significant digit first, matching lexicographic order).
pub(crate) fn power_word_digits(m: usize, l: usize, index: usize) -> Vec<usize> {
    let mut digits = vec![0; l];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % m;
        rest /= m;
    }
    digits
}

/// Encodes a letter word as its power-alphabet index.
pub(crate) fn power_word_index(m: usize, word: &[usize]) -> usize {
    word.iter().fold(0, |acc, &x| acc * m + x)
}
