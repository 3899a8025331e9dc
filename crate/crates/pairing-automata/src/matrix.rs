//! Pairing matrices and their equivalence classes.
//!
//! A *pairing matrix* is an `n × m` integer matrix whose `n·m` cells are
//! perfectly paired: every value in `1..=n·m/2` occurs exactly twice, and no
//! value repeats within a row or within a column. The two cells holding a
//! common value are *partners*, and the partner map is a fixed-point-free
//! involution on the cells.
//!
//! This module validates raw integer matrices, computes the partner
//! involution, decides the *invertible pairing* condition (every row/column
//! pair shares exactly one value besides its intersection entry), reduces
//! matrices to a canonical form under row permutations × column permutations
//! with first-occurrence value relabeling, and enumerates one canonical
//! representative per equivalence class at desk scales.
//!
//! # Example
//!
//! ```
//! use pairing_automata::matrix::{validate_pairing, Cell};
//!
//! let c = validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap();
//! assert!(c.is_invertible_pairing());
//! assert_eq!(c.partner_cell(Cell { row: 1, col: 1 }), Cell { row: 2, col: 2 });
//! ```

use serde::Serialize;
use thiserror::Error;

/// Default ceiling on `n·m` for enumeration; keeps exhaustive searches at
/// desk scale.
pub const DEFAULT_CELL_BUDGET: usize = 24;

/// A 1-based cell address into a pairing matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Why a raw matrix is not a pairing matrix, or why a request is out of
/// bounds. Validation reports the first offender in row-major scan order.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    /// No rows, or no columns.
    #[error("EmptyMatrix")]
    EmptyMatrix,
    /// Rows of differing lengths.
    #[error("NotRectangular")]
    NotRectangular,
    /// `n·m` odd, so no perfect pairing of cells exists.
    #[error("OddCellCount")]
    OddCellCount,
    /// An entry outside `1..=n·m/2`.
    #[error("ValueOutOfRange({0})")]
    ValueOutOfRange(i64),
    /// A value that does not occur exactly twice.
    #[error("BadMultiplicity({0})")]
    BadMultiplicity(u32),
    /// A value repeated within one row (1-based row index, value).
    #[error("RowRepeat({0},{1})")]
    RowRepeat(usize, u32),
    /// A value repeated within one column (1-based column index, value).
    #[error("ColRepeat({0},{1})")]
    ColRepeat(usize, u32),
    /// A requested size beyond the configured cell budget.
    #[error("BudgetExceeded({cells},{budget})")]
    BudgetExceeded { cells: usize, budget: usize },
}

/// A parse failure in the textual or JSON matrix formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct FormatError(pub String);

/// A validated pairing matrix. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairingMatrix {
    n_rows: usize,
    n_cols: usize,
    /// Row-major entries, each in `1..=n_rows*n_cols/2`.
    entries: Vec<u32>,
}

/// An element of the equivalence group acting on pairing matrices: permute
/// rows, permute columns, then relabel values. All components are 0-based;
/// `value_relabel[v - 1]` is the new name of value `v`.
///
/// Applying the equivalence yields `new[r][c] = relabel(old[row_perm[r]][col_perm[c]])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixEquivalence {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub value_relabel: Vec<u32>,
}

impl MatrixEquivalence {
    /// The identity equivalence for an `n × m` matrix.
    pub fn identity(n_rows: usize, n_cols: usize) -> Self {
        MatrixEquivalence {
            row_perm: (0..n_rows).collect(),
            col_perm: (0..n_cols).collect(),
            value_relabel: (1..=(n_rows * n_cols / 2) as u32).collect(),
        }
    }

    /// Applies the equivalence to `c`. Fails if any component is not a
    /// bijection on the matching index set; the result is revalidated.
    pub fn apply(&self, c: &PairingMatrix) -> Result<PairingMatrix, MatrixError> {
        let (n, m, k) = (c.n_rows, c.n_cols, c.value_count());
        if !is_permutation(&self.row_perm, n) || !is_permutation(&self.col_perm, m) {
            return Err(MatrixError::NotRectangular);
        }
        let relabel_ok = self.value_relabel.len() == k && {
            let mut seen = vec![false; k];
            self.value_relabel.iter().all(|&v| {
                (1..=k as u32).contains(&v) && !std::mem::replace(&mut seen[v as usize - 1], true)
            })
        };
        if !relabel_ok {
            return Err(MatrixError::BadMultiplicity(0));
        }
        let mut raw = vec![vec![0i64; m]; n];
        for (r, row) in raw.iter_mut().enumerate() {
            for (c2, slot) in row.iter_mut().enumerate() {
                let old = c.at(self.row_perm[r], self.col_perm[c2]);
                *slot = i64::from(self.value_relabel[old as usize - 1]);
            }
        }
        validate_pairing(&raw)
    }
}

fn is_permutation(p: &[usize], len: usize) -> bool {
    if p.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    p.iter().all(|&i| i < len && !std::mem::replace(&mut seen[i], true))
}

/// Checks the four pairing invariants on a raw integer matrix and wraps it.
///
/// The scan visits cells in row-major order and reports the first offense:
/// value out of `1..=n·m/2`, a repeat within the current row, a repeat within
/// the current column, or a third occurrence of a value.
pub fn validate_pairing(raw: &[Vec<i64>]) -> Result<PairingMatrix, MatrixError> {
    let n = raw.len();
    if n == 0 {
        return Err(MatrixError::EmptyMatrix);
    }
    let m = raw[0].len();
    if raw.iter().any(|row| row.len() != m) {
        return Err(MatrixError::NotRectangular);
    }
    if m == 0 {
        return Err(MatrixError::EmptyMatrix);
    }
    if (n * m) % 2 != 0 {
        return Err(MatrixError::OddCellCount);
    }
    let k = n * m / 2;
    let mut counts = vec![0u8; k + 1];
    let mut in_row = vec![vec![false; k + 1]; n];
    let mut in_col = vec![vec![false; k + 1]; m];
    let mut entries = Vec::with_capacity(n * m);
    for (i, row) in raw.iter().enumerate() {
        for (j, &value) in row.iter().enumerate() {
            if value < 1 || value > k as i64 {
                return Err(MatrixError::ValueOutOfRange(value));
            }
            let v = value as u32;
            let vi = v as usize;
            if in_row[i][vi] {
                return Err(MatrixError::RowRepeat(i + 1, v));
            }
            if in_col[j][vi] {
                return Err(MatrixError::ColRepeat(j + 1, v));
            }
            if counts[vi] >= 2 {
                return Err(MatrixError::BadMultiplicity(v));
            }
            counts[vi] += 1;
            in_row[i][vi] = true;
            in_col[j][vi] = true;
            entries.push(v);
        }
    }
    // With every cell in range and no value beyond two occurrences, the
    // counts must all be exactly two; kept as a defensive sweep.
    if let Some(v) = (1..=k).find(|&v| counts[v] != 2) {
        return Err(MatrixError::BadMultiplicity(v as u32));
    }
    Ok(PairingMatrix {
        n_rows: n,
        n_cols: m,
        entries,
    })
}

impl PairingMatrix {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of distinct values, `n·m/2`.
    pub fn value_count(&self) -> usize {
        self.n_rows * self.n_cols / 2
    }

    /// Entry at a 0-based (row, column) position.
    pub(crate) fn at(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.n_cols + c]
    }

    /// Entry at a 1-based cell address.
    ///
    /// # Panics
    /// If the cell does not address this matrix.
    pub fn entry(&self, cell: Cell) -> u32 {
        assert!(
            (1..=self.n_rows).contains(&cell.row) && (1..=self.n_cols).contains(&cell.col),
            "cell {cell} outside a {}x{} matrix",
            self.n_rows,
            self.n_cols
        );
        self.at(cell.row - 1, cell.col - 1)
    }

    /// The rows as owned vectors, for serialization and display.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.entries
            .chunks(self.n_cols)
            .map(|chunk| chunk.to_vec())
            .collect()
    }

    /// The unique other cell holding the same value as `cell`.
    ///
    /// # Panics
    /// If the cell does not address this matrix.
    pub fn partner_cell(&self, cell: Cell) -> Cell {
        let v = self.entry(cell);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                if self.at(r, c) == v && (r + 1, c + 1) != (cell.row, cell.col) {
                    return Cell { row: r + 1, col: c + 1 };
                }
            }
        }
        unreachable!("validated matrices hold every value exactly twice")
    }

    /// Both cells holding `value`, in row-major order.
    ///
    /// # Panics
    /// If `value` is not one of the matrix values.
    pub fn cells_of_value(&self, value: u32) -> (Cell, Cell) {
        let mut found = Vec::with_capacity(2);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                if self.at(r, c) == value {
                    found.push(Cell { row: r + 1, col: c + 1 });
                }
            }
        }
        assert_eq!(found.len(), 2, "value {value} outside this matrix");
        (found[0], found[1])
    }

    /// The invertible-pairing condition: for every row `i` and column `j`,
    /// the set of values occurring in both row `i` and column `j`, excluding
    /// the intersection entry itself, has exactly one element.
    pub fn is_invertible_pairing(&self) -> bool {
        let k = self.value_count();
        let mut in_row = vec![vec![false; k + 1]; self.n_rows];
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                in_row[r][self.at(r, c) as usize] = true;
            }
        }
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let own = self.at(i, j);
                let shared = (0..self.n_rows)
                    .filter(|&r| {
                        let v = self.at(r, j);
                        v != own && in_row[i][v as usize]
                    })
                    .count();
                if shared != 1 {
                    return false;
                }
            }
        }
        true
    }

    /// The matrix with rows and columns exchanged; pairing invariants are
    /// symmetric, so the result is again valid.
    pub fn transpose(&self) -> PairingMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.n_cols {
            for r in 0..self.n_rows {
                entries.push(self.at(r, c));
            }
        }
        PairingMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            entries,
        }
    }

    /// The lexicographically least matrix (row-major entry order) in the
    /// orbit of `self` under row permutations × column permutations, with
    /// values relabeled by first occurrence after each candidate
    /// permutation. Idempotent and constant on orbits.
    pub fn canonical_form(&self) -> PairingMatrix {
        let row_perms = permutations_lex(self.n_rows);
        let col_perms = permutations_lex(self.n_cols);
        let mut best = relabeled_image(self, &row_perms[0], &col_perms[0]);
        for sigma in &row_perms {
            for tau in &col_perms {
                if relabeled_cmp(self, sigma, tau, &best) == std::cmp::Ordering::Less {
                    best = relabeled_image(self, sigma, tau);
                }
            }
        }
        PairingMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: best,
        }
    }

    /// Matrix text format: first line `n m`, then `n` lines of `m`
    /// space-separated entries. Trailing newline included.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n_rows, self.n_cols);
        for row in self.entries.chunks(self.n_cols) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// One-line rendering with rows separated by ` / `, e.g. `1 2 / 2 1`.
    pub fn to_compact(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .chunks(self.n_cols)
            .map(|row| {
                row.iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        rows.join(" / ")
    }
}

/// JSON mirror of the matrix formats: `{"rows": n, "cols": m, "entries": [[..], ..]}`.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct MatrixDto {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<i64>>,
}

impl Serialize for PairingMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let dto = MatrixDto {
            rows: self.n_rows,
            cols: self.n_cols,
            entries: self
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(i64::from).collect())
                .collect(),
        };
        dto.serialize(serializer)
    }
}

/// Parses the matrix text format: line 1 is `n m`; then `n` lines of `m`
/// space-separated integers; lines whose first non-blank character is `#`
/// are comments. Returns raw rows for [`validate_pairing`].
pub fn parse_text(input: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    let mut lines = input
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| FormatError("empty input".into()))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(FormatError(format!(
            "expected header line \"n m\", found {header:?}"
        )));
    }
    let n: usize = dims[0]
        .parse()
        .map_err(|_| FormatError(format!("bad row count {:?}", dims[0])))?;
    let m: usize = dims[1]
        .parse()
        .map_err(|_| FormatError(format!("bad column count {:?}", dims[1])))?;
    let mut rows = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| FormatError(format!("expected {n} rows")))?;
        let row: Result<Vec<i64>, _> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<i64>()
                    .map_err(|_| FormatError(format!("bad entry {tok:?}")))
            })
            .collect();
        let row = row?;
        if row.len() != m {
            return Err(FormatError(format!(
                "expected {m} entries per row, found {}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if let Some(extra) = lines.next() {
        return Err(FormatError(format!("unexpected trailing line {extra:?}")));
    }
    Ok(rows)
}

/// Parses the JSON mirror `{"rows", "cols", "entries"}` into raw rows.
pub fn parse_json(input: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    let dto: MatrixDto =
        serde_json::from_str(input).map_err(|e| FormatError(format!("bad matrix JSON: {e}")))?;
    if dto.entries.len() != dto.rows || dto.entries.iter().any(|r| r.len() != dto.cols) {
        return Err(FormatError(
            "entries shape disagrees with rows/cols".into(),
        ));
    }
    Ok(dto.entries)
}

/// Parses either supported matrix encoding, sniffing JSON by a leading `{`.
pub fn parse_any(input: &str) -> Result<Vec<Vec<i64>>, FormatError> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

/// Enumerates one canonical representative per equivalence class of valid
/// `n × m` pairing matrices, in ascending lexicographic order, under the
/// default cell budget. With `invertible_only`, keeps only invertible
/// pairings.
pub fn enumerate_pairings(
    n: usize,
    m: usize,
    invertible_only: bool,
) -> Result<Vec<PairingMatrix>, MatrixError> {
    enumerate_pairings_with_budget(n, m, invertible_only, DEFAULT_CELL_BUDGET)
}

/// [`enumerate_pairings`] with an explicit cell budget.
pub fn enumerate_pairings_with_budget(
    n: usize,
    m: usize,
    invertible_only: bool,
    budget: usize,
) -> Result<Vec<PairingMatrix>, MatrixError> {
    if n == 0 || m == 0 {
        return Err(MatrixError::EmptyMatrix);
    }
    if (n * m) % 2 != 0 {
        return Err(MatrixError::OddCellCount);
    }
    if n * m > budget {
        return Err(MatrixError::BudgetExceeded {
            cells: n * m,
            budget,
        });
    }
    // A single row or column forces both occurrences of a value into the
    // same line, so no valid pairing exists.
    if n == 1 || m == 1 {
        return Ok(Vec::new());
    }
    let mut search = Search {
        n,
        m,
        k: n * m / 2,
        entries: vec![0; n * m],
        counts: vec![0; n * m / 2 + 1],
        max_used: 0,
        open_count: 0,
        invertible_only,
        row_perms_by_len: (0..=n).map(permutations_lex).collect(),
        col_perms: permutations_lex(m),
        out: Vec::new(),
    };
    search.fill(0);
    Ok(search.out)
}

/// Backtracking enumerator. Cells are filled in row-major order; a cell may
/// either pair an *open* value (one prior occurrence, not blocked by its row
/// or column) or introduce the smallest fresh value. Canonical
/// representatives have first occurrences in increasing value order, so the
/// single fresh candidate loses nothing. Each completed row is checked for
/// prefix-canonicity: if some row/column permutation of the filled rows
/// relabels to something lexicographically smaller, no completion can be
/// canonical and the branch is cut.
struct Search {
    n: usize,
    m: usize,
    k: usize,
    entries: Vec<u32>,
    counts: Vec<u8>,
    max_used: u32,
    open_count: usize,
    invertible_only: bool,
    row_perms_by_len: Vec<Vec<Vec<usize>>>,
    col_perms: Vec<Vec<usize>>,
    out: Vec<PairingMatrix>,
}

impl Search {
    fn blocked(&self, idx: usize, v: u32) -> bool {
        let (r, c) = (idx / self.m, idx % self.m);
        (0..c).any(|j| self.entries[r * self.m + j] == v)
            || (0..r).any(|i| self.entries[i * self.m + c] == v)
    }

    fn fill(&mut self, idx: usize) {
        if idx == self.n * self.m {
            if self.open_count == 0 {
                self.emit();
            }
            return;
        }
        let remaining = self.n * self.m - idx;
        if self.open_count > remaining {
            return;
        }
        for v in 1..=self.max_used {
            if self.counts[v as usize] == 1 && !self.blocked(idx, v) {
                self.place(idx, v);
            }
        }
        if self.max_used < self.k as u32 {
            let fresh = self.max_used + 1;
            self.max_used = fresh;
            self.place(idx, fresh);
            self.max_used = fresh - 1;
        }
    }

    fn place(&mut self, idx: usize, v: u32) {
        self.entries[idx] = v;
        self.counts[v as usize] += 1;
        let opened = self.counts[v as usize] == 1;
        if opened {
            self.open_count += 1;
        } else {
            self.open_count -= 1;
        }
        let row_done = (idx + 1) % self.m == 0;
        if !row_done || self.prefix_canonical((idx + 1) / self.m) {
            self.fill(idx + 1);
        }
        if opened {
            self.open_count -= 1;
        } else {
            self.open_count += 1;
        }
        self.counts[v as usize] -= 1;
        self.entries[idx] = 0;
    }

    /// No permutation of the first `rows` rows and of the columns relabels
    /// to a lexicographically smaller prefix.
    fn prefix_canonical(&self, rows: usize) -> bool {
        if rows <= 1 {
            return true;
        }
        let prefix = &self.entries[..rows * self.m];
        for sigma in &self.row_perms_by_len[rows] {
            for tau in &self.col_perms {
                if cmp_prefix_relabeled(prefix, self.m, sigma, tau) == std::cmp::Ordering::Less {
                    return false;
                }
            }
        }
        true
    }

    fn emit(&mut self) {
        let c = PairingMatrix {
            n_rows: self.n,
            n_cols: self.m,
            entries: self.entries.clone(),
        };
        debug_assert_eq!(c.canonical_form(), c);
        if !self.invertible_only || c.is_invertible_pairing() {
            self.out.push(c);
        }
    }
}

/// All permutations of `0..k` in lexicographic order.
fn permutations_lex(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    let mut used = vec![false; k];
    fn rec(
        k: usize,
        depth: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == k {
            out.push(current.clone());
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                current[depth] = i;
                rec(k, depth + 1, current, used, out);
                used[i] = false;
            }
        }
    }
    rec(k, 0, &mut current, &mut used, &mut out);
    out
}

/// Compares the first-occurrence relabeling of `reference` permuted by
/// (`sigma`, `tau`) against `reference` itself, cell by cell.
fn cmp_prefix_relabeled(
    reference: &[u32],
    m: usize,
    sigma: &[usize],
    tau: &[usize],
) -> std::cmp::Ordering {
    let k = reference.len();
    let mut relabel = vec![0u32; k + 1];
    let mut next = 0u32;
    for i in 0..sigma.len() {
        for j in 0..m {
            let v = reference[sigma[i] * m + tau[j]] as usize;
            if relabel[v] == 0 {
                next += 1;
                relabel[v] = next;
            }
            match relabel[v].cmp(&reference[i * m + j]) {
                std::cmp::Ordering::Equal => {}
                other => return other,
            }
        }
    }
    std::cmp::Ordering::Equal
}

/// Compares the relabeled (`sigma`, `tau`)-image of `c` against `best`.
fn relabeled_cmp(
    c: &PairingMatrix,
    sigma: &[usize],
    tau: &[usize],
    best: &[u32],
) -> std::cmp::Ordering {
    let mut relabel = vec![0u32; c.value_count() + 1];
    let mut next = 0u32;
    let mut pos = 0;
    for i in sigma {
        for j in tau {
            let v = c.at(*i, *j) as usize;
            if relabel[v] == 0 {
                next += 1;
                relabel[v] = next;
            }
            match relabel[v].cmp(&best[pos]) {
                std::cmp::Ordering::Equal => {}
                other => return other,
            }
            pos += 1;
        }
    }
    std::cmp::Ordering::Equal
}

/// Materializes the relabeled (`sigma`, `tau`)-image of `c`.
fn relabeled_image(c: &PairingMatrix, sigma: &[usize], tau: &[usize]) -> Vec<u32> {
    let mut relabel = vec![0u32; c.value_count() + 1];
    let mut next = 0u32;
    let mut out = Vec::with_capacity(c.entries.len());
    for i in sigma {
        for j in tau {
            let v = c.at(*i, *j) as usize;
            if relabel[v] == 0 {
                next += 1;
                relabel[v] = next;
            }
            out.push(relabel[v]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw_3x4() -> Vec<Vec<i64>> {
        vec![vec![1, 2, 3, 4], vec![5, 6, 2, 1], vec![3, 4, 5, 6]]
    }

    fn m3x4() -> PairingMatrix {
        validate_pairing(&raw_3x4()).unwrap()
    }

    fn m2x2() -> PairingMatrix {
        validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap()
    }

    #[test]
    fn validates_the_3x4_example() {
        let c = m3x4();
        assert_eq!(c.n_rows(), 3);
        assert_eq!(c.n_cols(), 4);
        assert_eq!(c.value_count(), 6);
    }

    #[test]
    fn rejects_row_repeat() {
        assert_eq!(
            validate_pairing(&[vec![1, 1], vec![2, 2]]),
            Err(MatrixError::RowRepeat(1, 1))
        );
    }

    #[test]
    fn rejects_col_repeat() {
        assert_eq!(
            validate_pairing(&[vec![1, 2], vec![1, 2]]),
            Err(MatrixError::ColRepeat(1, 1))
        );
    }

    #[test]
    fn accepts_2x2() {
        assert!(validate_pairing(&[vec![1, 2], vec![2, 1]]).is_ok());
    }

    #[test]
    fn rejects_degenerate_shapes() {
        assert_eq!(validate_pairing(&[]), Err(MatrixError::EmptyMatrix));
        assert_eq!(
            validate_pairing(&[vec![], vec![]]),
            Err(MatrixError::EmptyMatrix)
        );
        assert_eq!(
            validate_pairing(&[vec![1, 2], vec![1]]),
            Err(MatrixError::NotRectangular)
        );
        assert_eq!(
            validate_pairing(&[vec![1], vec![1], vec![1]]),
            Err(MatrixError::OddCellCount)
        );
    }

    #[test]
    fn rejects_out_of_range_and_third_occurrence() {
        assert_eq!(
            validate_pairing(&[vec![0, 1], vec![1, 2]]),
            Err(MatrixError::ValueOutOfRange(0))
        );
        assert_eq!(
            validate_pairing(&[vec![7, 1], vec![1, 2]]),
            Err(MatrixError::ValueOutOfRange(7))
        );
        // Three occurrences of 2 spread over distinct rows and columns.
        assert_eq!(
            validate_pairing(&[
                vec![1, 2, 3, 4],
                vec![5, 1, 6, 2],
                vec![2, 4, 5, 3]
            ]),
            Err(MatrixError::BadMultiplicity(2))
        );
    }

    #[test]
    fn error_rendering_is_stable() {
        assert_eq!(MatrixError::RowRepeat(1, 1).to_string(), "RowRepeat(1,1)");
        assert_eq!(MatrixError::ColRepeat(2, 5).to_string(), "ColRepeat(2,5)");
        assert_eq!(
            MatrixError::BudgetExceeded { cells: 32, budget: 24 }.to_string(),
            "BudgetExceeded(32,24)"
        );
    }

    #[test]
    fn partner_cells_on_the_3x4_example() {
        let c = m3x4();
        assert_eq!(c.partner_cell(Cell { row: 1, col: 1 }), Cell { row: 2, col: 4 });
        assert_eq!(c.partner_cell(Cell { row: 2, col: 4 }), Cell { row: 1, col: 1 });
        assert_eq!(m2x2().partner_cell(Cell { row: 1, col: 2 }), Cell { row: 2, col: 1 });
    }

    #[test]
    fn partner_is_a_fixed_point_free_involution() {
        for c in [m3x4(), m2x2()] {
            for row in 1..=c.n_rows() {
                for col in 1..=c.n_cols() {
                    let cell = Cell { row, col };
                    let p = c.partner_cell(cell);
                    assert_ne!(p, cell);
                    assert_eq!(c.partner_cell(p), cell);
                    assert_eq!(c.entry(p), c.entry(cell));
                }
            }
        }
    }

    #[test]
    fn invertibility_condition() {
        assert!(m3x4().is_invertible_pairing());
        assert!(m2x2().is_invertible_pairing());
        // Two-row pairing matrices carry every value once per row, so each
        // column shares exactly its other entry with the opposite row.
        let c = validate_pairing(&[vec![1, 2, 3], vec![3, 1, 2]]).unwrap();
        assert!(c.is_invertible_pairing());
    }

    #[test]
    fn non_invertible_example_exists() {
        // Row 1 shares {2, 3} with column 1 beyond its own entry, so the
        // pairing cannot be invertible at cell (1,1).
        let c = validate_pairing(&[
            vec![1, 2, 3, 4],
            vec![3, 4, 5, 6],
            vec![2, 1, 7, 8],
            vec![5, 6, 8, 7],
        ])
        .unwrap();
        assert!(!c.is_invertible_pairing());
    }

    #[test]
    fn canonical_form_is_idempotent_and_orbit_invariant() {
        let c = m3x4();
        let canon = c.canonical_form();
        assert_eq!(canon.canonical_form(), canon);
        let swapped = validate_pairing(&[
            vec![5, 6, 2, 1],
            vec![1, 2, 3, 4],
            vec![3, 4, 5, 6],
        ])
        .unwrap();
        assert_eq!(swapped.canonical_form(), canon);
    }

    #[test]
    fn canonical_form_of_small_matrix() {
        let c = validate_pairing(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(c.canonical_form(), m2x2());
    }

    #[test]
    fn transpose_roundtrip() {
        let c = m3x4();
        assert_eq!(c.transpose().transpose(), c);
        assert_eq!(m2x2().transpose(), m2x2());
        assert!(c.transpose().is_invertible_pairing());
    }

    #[test]
    fn enumerates_2x2() {
        let all = enumerate_pairings(2, 2, false).unwrap();
        assert_eq!(all, vec![m2x2()]);
        assert_eq!(enumerate_pairings(2, 2, true).unwrap(), vec![m2x2()]);
    }

    #[test]
    fn enumerates_1x2_empty() {
        assert!(enumerate_pairings(1, 2, false).unwrap().is_empty());
    }

    #[test]
    fn enumerate_rejects_bad_requests() {
        assert_eq!(
            enumerate_pairings(0, 2, false),
            Err(MatrixError::EmptyMatrix)
        );
        assert_eq!(
            enumerate_pairings(3, 3, false),
            Err(MatrixError::OddCellCount)
        );
        assert_eq!(
            enumerate_pairings(4, 8, false),
            Err(MatrixError::BudgetExceeded { cells: 32, budget: 24 })
        );
        // An explicit budget lifts the default cap. A single row can never
        // pair values, so this oversized search finishes immediately.
        assert_eq!(enumerate_pairings_with_budget(1, 26, false, 26), Ok(vec![]));
    }

    #[test]
    fn enumeration_is_sorted_canonical_and_duplicate_free() {
        for (n, m) in [(2, 2), (2, 3), (3, 2), (2, 4), (3, 4)] {
            let all = enumerate_pairings(n, m, false).unwrap();
            for c in &all {
                assert_eq!(&c.canonical_form(), c);
            }
            for w in all.windows(2) {
                assert!(w[0] < w[1]);
            }
        }
    }

    #[test]
    fn equivalence_application_roundtrips() {
        let c = m3x4();
        let e = MatrixEquivalence::identity(3, 4);
        assert_eq!(e.apply(&c).unwrap(), c);
        let shuffled = MatrixEquivalence {
            row_perm: vec![2, 0, 1],
            col_perm: vec![3, 1, 0, 2],
            value_relabel: vec![6, 5, 4, 3, 2, 1],
        };
        let image = shuffled.apply(&c).unwrap();
        assert_eq!(image.canonical_form(), c.canonical_form());
    }

    #[test]
    fn text_format_roundtrip() {
        let c = m3x4();
        let text = c.to_text();
        let reparsed = validate_pairing(&parse_text(&text).unwrap()).unwrap();
        assert_eq!(reparsed, c);
        let with_comment = format!("# sample\n{text}");
        assert_eq!(
            validate_pairing(&parse_text(&with_comment).unwrap()).unwrap(),
            c
        );
        assert!(parse_text("2 2\n1 2\n").is_err());
        assert!(parse_text("").is_err());
    }

    #[test]
    fn json_format_roundtrip() {
        let c = m3x4();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with("{\"rows\":3,\"cols\":4,\"entries\":"));
        let reparsed = validate_pairing(&parse_json(&json).unwrap()).unwrap();
        assert_eq!(reparsed, c);
        assert_eq!(
            validate_pairing(&parse_any(&json).unwrap()).unwrap(),
            validate_pairing(&parse_any(&c.to_text()).unwrap()).unwrap()
        );
    }

    #[test]
    fn compact_rendering() {
        assert_eq!(m2x2().to_compact(), "1 2 / 2 1");
    }
}
