//! Group words, relation sets, presentations, and replayable triviality
//! certificates.
//!
//! A pairing matrix `C` presents two groups. The main one,
//! `Γ_C = ⟨ a_1..a_n, b_1..b_m | a_i b_j = a_i' b_j' whenever c_ij = c_i'j' ⟩`,
//! has one relation per value of the matrix; for square matrices the variant
//! `G_C = ⟨ a_1..a_n | a_i a_j = a_i' a_j' ⟩` uses the same pairs on a single
//! generator family. Claims of the form `w^k = e` are packaged as
//! *certificates*: a start word plus a sequence of relator insertions
//! (position, relation id, orientation, cyclic shift) whose replay — insert,
//! then freely reduce — must end at the empty word. Replay is the sole
//! judge; nothing about how a certificate was found matters to
//! [`verify_certificate`].
//!
//! # Example
//!
//! ```
//! use pairing_automata::certify::{free_reduce, GroupWord};
//!
//! let w = GroupWord::parse("b1*B4*b4*B2").unwrap();
//! assert_eq!(free_reduce(&w).to_string(), "b1*B2");
//! ```

use crate::matrix::{Cell, PairingMatrix};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failures of word parsing, relation derivation, and certificate replay.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    /// A token not of the `a2`/`A2`/`b3`/`B3` form.
    #[error("BadToken({0})")]
    BadToken(String),
    /// A step citing a relation id outside the relation list.
    #[error("BadRelationId({0})")]
    BadRelationId(usize),
    /// A step inserting beyond the end of the current word.
    #[error("BadPosition({pos},{len})")]
    BadPosition { pos: usize, len: usize },
    /// A step with a cyclic shift outside `0..=3`.
    #[error("BadShift({0})")]
    BadShift(u8),
    /// `G_C` requested for a non-square matrix.
    #[error("NotSquare")]
    NotSquare,
    /// A presentation that does not decode to a relation list.
    #[error("BadPresentation({0})")]
    BadPresentation(String),
}

/// A generator of `Γ_C` or `G_C`: family `a` (states) or family `b`
/// (letters), with 0-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    A(usize),
    B(usize),
}

impl Generator {
    /// 1-based display index.
    pub fn number(self) -> usize {
        match self {
            Generator::A(i) | Generator::B(i) => i + 1,
        }
    }

    /// The lowercase token of the plain generator, e.g. `a2` or `b3`.
    pub fn token(self) -> String {
        match self {
            Generator::A(i) => format!("a{}", i + 1),
            Generator::B(j) => format!("b{}", j + 1),
        }
    }
}

/// One signed generator occurrence inside a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordLetter {
    pub generator: Generator,
    pub inverse: bool,
}

impl WordLetter {
    pub fn new(generator: Generator, inverse: bool) -> Self {
        WordLetter { generator, inverse }
    }

    pub fn inverted(self) -> Self {
        WordLetter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Token encoding: lowercase = generator, uppercase = inverse
    /// (`a2`/`A2`, `b3`/`B3`).
    pub fn token(self) -> String {
        let t = self.generator.token();
        if self.inverse {
            t.to_uppercase()
        } else {
            t
        }
    }

    /// Parses one token of the `a2`/`A2`/`b3`/`B3` form.
    pub fn parse_token(token: &str) -> Result<Self, CertifyError> {
        let bad = || CertifyError::BadToken(token.to_string());
        let mut chars = token.chars();
        let head = chars.next().ok_or_else(bad)?;
        let index: usize = chars.as_str().parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        let (family_a, inverse) = match head {
            'a' => (true, false),
            'A' => (true, true),
            'b' => (false, false),
            'B' => (false, true),
            _ => return Err(bad()),
        };
        let generator = if family_a {
            Generator::A(index - 1)
        } else {
            Generator::B(index - 1)
        };
        Ok(WordLetter { generator, inverse })
    }
}

impl std::fmt::Display for WordLetter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.token())
    }
}

/// A word over the signed generators. Not automatically reduced; call
/// [`free_reduce`] (or [`GroupWord::reduced`]) where reduction matters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GroupWord(Vec<WordLetter>);

impl GroupWord {
    /// The empty word `e`.
    pub fn empty() -> Self {
        GroupWord(Vec::new())
    }

    pub fn from_letters(letters: Vec<WordLetter>) -> Self {
        GroupWord(letters)
    }

    pub fn letters(&self) -> &[WordLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The freely reduced form: adjacent `g·g^{-1}` pairs cancelled until
    /// none remain. Unique and idempotent.
    pub fn reduced(&self) -> GroupWord {
        let mut stack: Vec<WordLetter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if stack
                .last()
                .is_some_and(|&top| top.generator == l.generator && top.inverse != l.inverse)
            {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        GroupWord(stack)
    }

    /// `true` when no adjacent cancelling pair exists.
    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| {
            !(w[0].generator == w[1].generator && w[0].inverse != w[1].inverse)
        })
    }

    /// The formal inverse: letters reversed, signs flipped.
    pub fn inverse(&self) -> GroupWord {
        GroupWord(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// Concatenation, unreduced.
    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        GroupWord(letters)
    }

    /// `k`-fold concatenation of `self`, unreduced.
    pub fn repeat(&self, k: usize) -> GroupWord {
        let mut letters = Vec::with_capacity(self.0.len() * k);
        for _ in 0..k {
            letters.extend_from_slice(&self.0);
        }
        GroupWord(letters)
    }

    /// Left-rotation by `shift` positions (cyclic conjugation for cyclically
    /// reduced words).
    pub fn rotate_left(&self, shift: usize) -> GroupWord {
        if self.0.is_empty() {
            return self.clone();
        }
        let s = shift % self.0.len();
        let mut letters = self.0[s..].to_vec();
        letters.extend_from_slice(&self.0[..s]);
        GroupWord(letters)
    }

    /// The token list, e.g. `["b1", "B2"]`.
    pub fn tokens(&self) -> Vec<String> {
        self.0.iter().map(|l| l.token()).collect()
    }

    pub fn from_tokens<S: AsRef<str>>(tokens: &[S]) -> Result<GroupWord, CertifyError> {
        tokens
            .iter()
            .map(|t| WordLetter::parse_token(t.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(GroupWord)
    }

    /// Parses the `*`-joined rendering; `e` (or an empty string) is the
    /// empty word.
    pub fn parse(text: &str) -> Result<GroupWord, CertifyError> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(GroupWord::empty());
        }
        let tokens: Vec<&str> = text.split('*').collect();
        GroupWord::from_tokens(&tokens)
    }
}

impl std::fmt::Display for GroupWord {
    /// `*`-joined tokens; the empty word prints as `e`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            f.write_str("e")
        } else {
            f.write_str(&self.tokens().join("*"))
        }
    }
}

impl Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.tokens().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GroupWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let tokens = Vec::<String>::deserialize(deserializer)?;
        GroupWord::from_tokens(&tokens).map_err(D::Error::custom)
    }
}

/// Freely reduces a word; the free-standing spelling of
/// [`GroupWord::reduced`].
pub fn free_reduce(w: &GroupWord) -> GroupWord {
    w.reduced()
}

/// Which presented group a relation set or certificate lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupKind {
    #[serde(rename = "gamma_c")]
    GammaC,
    #[serde(rename = "g_c")]
    GC,
}

impl std::fmt::Display for GroupKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GroupKind::GammaC => "gamma_c",
            GroupKind::GC => "g_c",
        })
    }
}

/// One defining relation `left = right`, with the partner cells that induce
/// it. Relation ids order relations by matrix value, so relation `v - 1`
/// comes from value `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    /// For `Γ_C`: `a_i·b_j` at the row-major-first cell; for `G_C`: `a_i·a_j`.
    pub left: GroupWord,
    /// The same shape read at the partner cell.
    pub right: GroupWord,
    /// The inducing cells, row-major-first.
    pub source_cells: (Cell, Cell),
}

impl Relation {
    /// The relator `left·right^{-1}`, freely reduced. Always length 4 and
    /// cyclically reduced: partner cells share neither row nor column, so no
    /// end can cancel.
    pub fn relator(&self) -> GroupWord {
        self.left.concat(&self.right.inverse()).reduced()
    }
}

fn cell_word(kind: GroupKind, cell: Cell) -> GroupWord {
    let second = match kind {
        GroupKind::GammaC => Generator::B(cell.col - 1),
        GroupKind::GC => Generator::A(cell.col - 1),
    };
    GroupWord::from_letters(vec![
        WordLetter::new(Generator::A(cell.row - 1), false),
        WordLetter::new(second, false),
    ])
}

/// The defining relations of `Γ_C` (any valid matrix) or `G_C` (square
/// matrices), one per value, ordered by value.
pub fn relations_from_matrix(
    c: &PairingMatrix,
    kind: GroupKind,
) -> Result<Vec<Relation>, CertifyError> {
    if kind == GroupKind::GC && c.n_rows() != c.n_cols() {
        return Err(CertifyError::NotSquare);
    }
    let mut out = Vec::with_capacity(c.value_count());
    for v in 1..=c.value_count() as u32 {
        let (first, second) = c.cells_of_value(v);
        out.push(Relation {
            left: cell_word(kind, first),
            right: cell_word(kind, second),
            source_cells: (first, second),
        });
    }
    Ok(out)
}

/// One certificate step: insert the `shift`-rotated, possibly inverted
/// relator `rel` at position `pos` of the current word, then freely reduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStep {
    pub pos: usize,
    pub rel: usize,
    pub inv: bool,
    pub shift: u8,
}

/// A replayable proof that `start` is trivial in the presented group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(rename = "group")]
    pub group_kind: GroupKind,
    pub start: GroupWord,
    pub steps: Vec<CertStep>,
}

/// Replays `cert` against the relation list: `Ok(true)` when the replay
/// ends at the empty word, `Ok(false)` when it ends elsewhere, and an error
/// when a step is malformed (unknown relation id, position beyond the
/// current word, shift outside `0..=3`).
pub fn replay_certificate(
    relations: &[Relation],
    cert: &Certificate,
) -> Result<bool, CertifyError> {
    let mut current = cert.start.reduced();
    for step in &cert.steps {
        if step.rel >= relations.len() {
            return Err(CertifyError::BadRelationId(step.rel));
        }
        if step.shift > 3 {
            return Err(CertifyError::BadShift(step.shift));
        }
        if step.pos > current.len() {
            return Err(CertifyError::BadPosition {
                pos: step.pos,
                len: current.len(),
            });
        }
        let relator = relations[step.rel].relator();
        let oriented = if step.inv { relator.inverse() } else { relator };
        let omega = oriented.rotate_left(step.shift as usize);
        let mut letters = current.letters()[..step.pos].to_vec();
        letters.extend_from_slice(omega.letters());
        letters.extend_from_slice(&current.letters()[step.pos..]);
        current = GroupWord::from_letters(letters).reduced();
    }
    Ok(current.is_empty())
}

/// Derives the relation set of `cert.group_kind` from `c` and replays the
/// certificate against it.
pub fn verify_certificate(c: &PairingMatrix, cert: &Certificate) -> Result<bool, CertifyError> {
    let relations = relations_from_matrix(c, cert.group_kind)?;
    replay_certificate(&relations, cert)
}

/// A finite presentation of `Γ_C` or `G_C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub group_kind: GroupKind,
    /// `a1..an` then (for `Γ_C`) `b1..bm`.
    pub generators: Vec<String>,
    /// Length-4 relators `left·right^{-1}`, ordered by value.
    pub relators: Vec<GroupWord>,
    /// Whether the listed generators are assumed pairwise distinct as group
    /// elements; nontriviality claims lean on this hypothesis.
    pub distinct_generators: bool,
}

impl Presentation {
    /// Rebuilds the relation list (left/right words with source cells) from
    /// the relators.
    pub fn relations(&self) -> Result<Vec<Relation>, CertifyError> {
        self.relators.iter().map(|r| relation_from_relator(self.group_kind, r)).collect()
    }

    /// Generator counts as matrix dimensions: (rows, columns) for `Γ_C`,
    /// (n, n) for `G_C`.
    pub fn dims(&self) -> (usize, usize) {
        let a = self
            .generators
            .iter()
            .filter(|g| g.starts_with('a'))
            .count();
        match self.group_kind {
            GroupKind::GammaC => (a, self.generators.len() - a),
            GroupKind::GC => (a, a),
        }
    }

    /// The bit-exact CAS text form: header `gamma_c n m` or `g_c n`, one
    /// `gen <token>` line per generator, one `rel <relator>` line per
    /// relator, LF endings.
    pub fn to_cas_text(&self) -> String {
        let (n, m) = self.dims();
        let mut out = match self.group_kind {
            GroupKind::GammaC => format!("gamma_c {n} {m}\n"),
            GroupKind::GC => format!("g_c {n}\n"),
        };
        for g in &self.generators {
            out.push_str(&format!("gen {g}\n"));
        }
        for r in &self.relators {
            out.push_str(&format!("rel {r}\n"));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationDto {
    group: GroupKind,
    generators: Vec<String>,
    relators: Vec<String>,
    #[serde(default = "default_true")]
    distinct_generators: bool,
}

fn default_true() -> bool {
    true
}

impl Serialize for Presentation {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PresentationDto {
            group: self.group_kind,
            generators: self.generators.clone(),
            relators: self.relators.iter().map(GroupWord::to_string).collect(),
            distinct_generators: self.distinct_generators,
        }
        .serialize(serializer)
    }
}

/// Parses the JSON presentation export back into a [`Presentation`].
pub fn parse_presentation_json(input: &str) -> Result<Presentation, CertifyError> {
    let dto: PresentationDto = serde_json::from_str(input)
        .map_err(|e| CertifyError::BadPresentation(e.to_string()))?;
    let relators = dto
        .relators
        .iter()
        .map(|r| GroupWord::parse(r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Presentation {
        group_kind: dto.group,
        generators: dto.generators,
        relators,
        distinct_generators: dto.distinct_generators,
    })
}

fn relation_from_relator(kind: GroupKind, relator: &GroupWord) -> Result<Relation, CertifyError> {
    let bad = |msg: &str| CertifyError::BadPresentation(format!("{msg}: {relator}"));
    let l = relator.letters();
    if l.len() != 4 {
        return Err(bad("relator is not length 4"));
    }
    let row = |letter: WordLetter, want_inverse: bool| -> Result<usize, CertifyError> {
        match (letter.generator, letter.inverse == want_inverse) {
            (Generator::A(i), true) => Ok(i + 1),
            _ => Err(bad("unexpected token family or sign")),
        }
    };
    let col = |letter: WordLetter, want_inverse: bool| -> Result<usize, CertifyError> {
        let ok = letter.inverse == want_inverse;
        match (kind, letter.generator, ok) {
            (GroupKind::GammaC, Generator::B(j), true) => Ok(j + 1),
            (GroupKind::GC, Generator::A(j), true) => Ok(j + 1),
            _ => Err(bad("unexpected token family or sign")),
        }
    };
    let first = Cell {
        row: row(l[0], false)?,
        col: col(l[1], false)?,
    };
    let second = Cell {
        row: row(l[3], true)?,
        col: col(l[2], true)?,
    };
    Ok(Relation {
        left: cell_word(kind, first),
        right: cell_word(kind, second),
        source_cells: (first, second),
    })
}

/// Builds the presentation of `Γ_C` or `G_C` for `c`, under the
/// distinct-generators hypothesis.
pub fn presentation_from_matrix(
    c: &PairingMatrix,
    kind: GroupKind,
) -> Result<Presentation, CertifyError> {
    let relations = relations_from_matrix(c, kind)?;
    let mut generators: Vec<String> = (1..=c.n_rows()).map(|i| format!("a{i}")).collect();
    if kind == GroupKind::GammaC {
        generators.extend((1..=c.n_cols()).map(|j| format!("b{j}")));
    }
    Ok(Presentation {
        group_kind: kind,
        generators,
        relators: relations.iter().map(Relation::relator).collect(),
        distinct_generators: true,
    })
}

/// Output encodings of [`export_presentation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PresentationFormat {
    CasText,
    Json,
}

/// Serializes the presentation of `c`: CAS text (bit-exact, line-oriented)
/// or JSON (`{"group", "generators", "relators", "distinct_generators"}`).
pub fn export_presentation(
    c: &PairingMatrix,
    kind: GroupKind,
    format: PresentationFormat,
) -> Result<String, CertifyError> {
    let p = presentation_from_matrix(c, kind)?;
    Ok(match format {
        PresentationFormat::CasText => p.to_cas_text(),
        PresentationFormat::Json => {
            serde_json::to_string_pretty(&p).expect("presentations always serialize") + "\n"
        }
    })
}
