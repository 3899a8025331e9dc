//! Command-line front end: validation, enumeration, automaton and helix
//! export, torsion search, certificate verification, and presentation
//! export, with deterministic text/JSON/DOT output.
//!
//! Exit codes: `0` success; `1` failed matrix validation or failed witness
//! verification; `2` I/O, parse, usage, or budget errors; `3` a torsion
//! search that completed without finding a witness — an inconclusive
//! outcome, never a claim of torsion-freeness. All JSON output carries a
//! top-level `"schema_version": 1`. The `PAIRING_CELL_BUDGET` environment
//! variable overrides the enumeration cell budget.

use crate::automata::{build_a_automaton, build_b_automaton, build_helix, check_bireversible};
use crate::certify::{presentation_from_matrix, GroupKind, Presentation};
use crate::matrix::{
    enumerate_pairings_with_budget, parse_any, validate_pairing, PairingMatrix,
    DEFAULT_CELL_BUDGET,
};
use crate::torsion::{
    find_dual_letter_cycles, find_letter_cycles, find_word_cycles, three_row_witness,
    verify_witness, TorsionWitness,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::{Path, PathBuf};

const SCHEMA_VERSION: u32 = 1;

/// Parses `std::env::args` and runs the requested command against the real
/// standard streams, returning the process exit code.
pub fn run() -> u8 {
    let args: Vec<String> = std::env::args().collect();
    run_from(&args, &mut std::io::stdout(), &mut std::io::stderr())
}

/// Testable entry point: runs the CLI on explicit arguments and streams.
/// `args[0]` is the program name.
pub fn run_from(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return 2;
            }
            // --help and --version land here.
            let _ = write!(out, "{rendered}");
            return 0;
        }
    };
    match cli.command {
        Command::Validate(a) => cmd_validate(&a, out, err),
        Command::Enumerate(a) => cmd_enumerate(&a, out, err),
        Command::Torsion(a) => cmd_torsion(&a, out, err),
        Command::Automaton(a) => cmd_automaton(&a, out, err),
        Command::Helix(a) => cmd_helix(&a, out, err),
        Command::Canon(a) => cmd_canon(&a, out, err),
        Command::Certify(a) => cmd_certify(&a, out, err),
        Command::Export(a) => cmd_export(&a, out, err),
    }
}

#[derive(Parser)]
#[command(
    name = "pairing-automata",
    version,
    about = "Pairing matrices, their Mealy automata, and certified finite-order witnesses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a matrix file and report its pairing properties.
    Validate(ValidateArgs),
    /// Stream canonical pairing matrices of a given shape.
    Enumerate(EnumerateArgs),
    /// Search a matrix for certified finite-order witnesses.
    Torsion(TorsionArgs),
    /// Export the Mealy automaton of a matrix (DOT or JSON).
    Automaton(AutomatonArgs),
    /// Export the helix graph of the A automaton as DOT.
    Helix(HelixArgs),
    /// Print the canonical form of a matrix.
    Canon(CanonArgs),
    /// Verify finite-order witnesses against a matrix.
    Certify(CertifyArgs),
    /// Export a finitely presented group presentation.
    Export(ExportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AutomatonKind {
    /// States a_i, alphabet b_j.
    #[value(name = "A", alias = "a")]
    A,
    /// The square-matrix variant on the a_i alone.
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupChoice {
    /// The pairing group on a_1..a_n, b_1..b_m.
    Gamma,
    /// The square-matrix group on a_1..a_n.
    G,
}

#[derive(Args)]
struct ValidateArgs {
    /// Matrix file: text (`n m` header then rows) or JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    rows: usize,
    #[arg(long)]
    cols: usize,
    /// Keep only invertible pairings.
    #[arg(long)]
    invertible_only: bool,
    /// Append each matrix's first torsion witness.
    #[arg(long)]
    with_torsion: bool,
    /// Longest input word for the power-automaton search.
    #[arg(long, default_value_t = 2)]
    max_input_len: usize,
    /// Longest state word for the dual power search.
    #[arg(long, default_value_t = 2)]
    max_state_len: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct TorsionArgs {
    /// Matrix file: text (`n m` header then rows) or JSON.
    #[arg(long)]
    input: PathBuf,
    /// Longest input word for the power-automaton search.
    #[arg(long, default_value_t = 2)]
    max_input_len: usize,
    /// Longest state word for the dual power search.
    #[arg(long, default_value_t = 2)]
    max_state_len: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct AutomatonArgs {
    /// Matrix file: text (`n m` header then rows) or JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = AutomatonKind::A)]
    kind: AutomatonKind,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    format: GraphFormat,
}

#[derive(Args)]
struct HelixArgs {
    /// Matrix file: text (`n m` header then rows) or JSON.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct CanonArgs {
    /// Matrix file: text (`n m` header then rows) or JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct CertifyArgs {
    /// Matrix file the witnesses refer to.
    #[arg(long)]
    input: PathBuf,
    /// Witness JSON: a single witness object or `{"witnesses": [...]}`.
    #[arg(long)]
    witness: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct ExportArgs {
    /// Matrix file: text (`n m` header then rows) or JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = GroupChoice::Gamma)]
    group: GroupChoice,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

fn read_input(path: &Path, err: &mut dyn Write) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
        2
    })
}

/// Loads and validates a matrix, mapping every failure to exit code 2 (for
/// commands where an unusable matrix is an input error, not a verdict).
fn load_matrix(path: &Path, err: &mut dyn Write) -> Result<PairingMatrix, u8> {
    let text = read_input(path, err)?;
    let rows = parse_any(&text).map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        2
    })?;
    validate_pairing(&rows).map_err(|e| {
        let _ = writeln!(err, "error: invalid matrix: {e}");
        2
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("reports always serialize")
}

#[derive(Serialize)]
struct ValidReport {
    schema_version: u32,
    rows: usize,
    cols: usize,
    values: usize,
    valid: bool,
    invertible: bool,
    bireversible: bool,
}

#[derive(Serialize)]
struct InvalidReport {
    schema_version: u32,
    valid: bool,
    error: String,
}

fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let text = match read_input(&a.input, err) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let rows = match parse_any(&text) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match validate_pairing(&rows) {
        Ok(c) => {
            let report = ValidReport {
                schema_version: SCHEMA_VERSION,
                rows: c.n_rows(),
                cols: c.n_cols(),
                values: c.value_count(),
                valid: true,
                invertible: c.is_invertible_pairing(),
                bireversible: check_bireversible(&build_a_automaton(&c)),
            };
            match a.format {
                ReportFormat::Text => {
                    let _ = writeln!(out, "rows: {}", report.rows);
                    let _ = writeln!(out, "cols: {}", report.cols);
                    let _ = writeln!(out, "values: {}", report.values);
                    let _ = writeln!(out, "valid: true");
                    let _ = writeln!(out, "invertible: {}", report.invertible);
                    let _ = writeln!(out, "bireversible: {}", report.bireversible);
                }
                ReportFormat::Json => {
                    let _ = writeln!(out, "{}", to_json(&report));
                }
            }
            0
        }
        Err(e) => {
            match a.format {
                ReportFormat::Text => {
                    let _ = writeln!(out, "valid: false");
                    let _ = writeln!(out, "error: {e}");
                }
                ReportFormat::Json => {
                    let report = InvalidReport {
                        schema_version: SCHEMA_VERSION,
                        valid: false,
                        error: e.to_string(),
                    };
                    let _ = writeln!(out, "{}", to_json(&report));
                }
            }
            1
        }
    }
}

/// The fixed search order behind `torsion` and `enumerate --with-torsion`:
/// letter cycles, dual letter cycles, word cycles (budgeted), and — for
/// three-row invertible matrices — the constructive pipeline. Witnesses are
/// deduplicated by (word, exponent), re-verified, and never printed when
/// verification fails.
fn torsion_pipeline(
    c: &PairingMatrix,
    max_input_len: usize,
    max_state_len: usize,
) -> (Vec<TorsionWitness>, Vec<String>) {
    let mut witnesses = find_letter_cycles(c);
    let mut notes = Vec::new();
    witnesses.extend(find_dual_letter_cycles(c));
    match find_word_cycles(c, max_input_len, max_state_len) {
        Ok(ws) => witnesses.extend(ws),
        Err(e) => notes.push(format!("word-cycle search skipped: {e}")),
    }
    if c.n_rows() == 3 && c.is_invertible_pairing() {
        match three_row_witness(c) {
            Ok(w) => witnesses.push(w),
            Err(e) => notes.push(format!("three-row pipeline failed: {e}")),
        }
    }
    let mut seen: Vec<(crate::certify::GroupWord, usize)> = Vec::new();
    witnesses.retain(|w| {
        let key = (w.word.clone(), w.exponent);
        if seen.contains(&key) {
            false
        } else {
            seen.push(key);
            true
        }
    });
    witnesses.retain(|w| verify_witness(c, w) == Ok(true));
    (witnesses, notes)
}

#[derive(Serialize)]
struct TorsionReport<'a> {
    schema_version: u32,
    witnesses: &'a [TorsionWitness],
    notes: &'a [String],
}

fn positive_budgets(a_len: usize, b_len: usize, err: &mut dyn Write) -> Result<(), u8> {
    if a_len == 0 || b_len == 0 {
        let _ = writeln!(err, "error: search budgets must be positive");
        return Err(2);
    }
    Ok(())
}

fn cmd_torsion(a: &TorsionArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Err(code) = positive_budgets(a.max_input_len, a.max_state_len, err) {
        return code;
    }
    let c = match load_matrix(&a.input, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let (witnesses, notes) = torsion_pipeline(&c, a.max_input_len, a.max_state_len);
    match a.format {
        ReportFormat::Text => {
            for w in &witnesses {
                let nontrivial = if w.nontrivial_guaranteed {
                    "guaranteed"
                } else {
                    "unknown"
                };
                let justification = w
                    .justification
                    .as_ref()
                    .map(|j| format!(" ({j})"))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "witness: {} exponent={} provenance={} nontrivial={}{}",
                    w.word, w.exponent, w.provenance, nontrivial, justification
                );
            }
            for note in &notes {
                let _ = writeln!(out, "note: {note}");
            }
            let _ = writeln!(out, "witnesses: {}", witnesses.len());
        }
        ReportFormat::Json => {
            let report = TorsionReport {
                schema_version: SCHEMA_VERSION,
                witnesses: &witnesses,
                notes: &notes,
            };
            let _ = writeln!(out, "{}", to_json(&report));
        }
    }
    if witnesses.is_empty() {
        3
    } else {
        0
    }
}

fn cell_budget(err: &mut dyn Write) -> Result<usize, u8> {
    match std::env::var("PAIRING_CELL_BUDGET") {
        Ok(raw) => match raw.trim().parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => {
                let _ = writeln!(
                    err,
                    "error: PAIRING_CELL_BUDGET must be a positive integer, found {raw:?}"
                );
                Err(2)
            }
        },
        Err(_) => Ok(DEFAULT_CELL_BUDGET),
    }
}

#[derive(Serialize)]
struct EnumerateEntry {
    matrix: PairingMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    torsion: Option<Option<TorsionWitness>>,
}

#[derive(Serialize)]
struct EnumerateReport {
    schema_version: u32,
    matrices: Vec<EnumerateEntry>,
}

fn cmd_enumerate(a: &EnumerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if let Err(code) = positive_budgets(a.max_input_len, a.max_state_len, err) {
        return code;
    }
    let budget = match cell_budget(err) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let matrices = match enumerate_pairings_with_budget(a.rows, a.cols, a.invertible_only, budget)
    {
        Ok(ms) => ms,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let first_witness = |c: &PairingMatrix| -> Option<TorsionWitness> {
        let (witnesses, _) = torsion_pipeline(c, a.max_input_len, a.max_state_len);
        witnesses.into_iter().next()
    };
    match a.format {
        ReportFormat::Text => {
            for c in &matrices {
                let mut line = c.to_compact();
                if a.with_torsion {
                    match first_witness(c) {
                        Some(w) => {
                            line.push_str(&format!(
                                " | torsion: {}^{} {}",
                                w.word, w.exponent, w.provenance
                            ));
                        }
                        None => line.push_str(" | torsion: none"),
                    }
                }
                let _ = writeln!(out, "{line}");
            }
        }
        ReportFormat::Json => {
            let entries: Vec<EnumerateEntry> = matrices
                .into_iter()
                .map(|c| {
                    let torsion = a.with_torsion.then(|| first_witness(&c));
                    EnumerateEntry { matrix: c, torsion }
                })
                .collect();
            let report = EnumerateReport {
                schema_version: SCHEMA_VERSION,
                matrices: entries,
            };
            let _ = writeln!(out, "{}", to_json(&report));
        }
    }
    0
}

#[derive(Serialize)]
struct AutomatonReport<'a> {
    schema_version: u32,
    automaton: &'a crate::automata::MealyAutomaton,
}

fn cmd_automaton(a: &AutomatonArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let c = match load_matrix(&a.input, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let automaton = match a.kind {
        AutomatonKind::A => build_a_automaton(&c),
        AutomatonKind::B => match build_b_automaton(&c) {
            Ok(b) => b,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return 2;
            }
        },
    };
    match a.format {
        GraphFormat::Dot => {
            let _ = write!(out, "{}", automaton.to_dot());
        }
        GraphFormat::Json => {
            let report = AutomatonReport {
                schema_version: SCHEMA_VERSION,
                automaton: &automaton,
            };
            let _ = writeln!(out, "{}", to_json(&report));
        }
    }
    0
}

fn cmd_helix(a: &HelixArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let c = match load_matrix(&a.input, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let helix = build_helix(&build_a_automaton(&c));
    let _ = write!(out, "{}", helix.to_dot());
    0
}

#[derive(Serialize)]
struct CanonReport {
    schema_version: u32,
    matrix: PairingMatrix,
}

fn cmd_canon(a: &CanonArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let c = match load_matrix(&a.input, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let canon = c.canonical_form();
    match a.format {
        ReportFormat::Text => {
            let _ = write!(out, "{}", canon.to_text());
        }
        ReportFormat::Json => {
            let report = CanonReport {
                schema_version: SCHEMA_VERSION,
                matrix: canon,
            };
            let _ = writeln!(out, "{}", to_json(&report));
        }
    }
    0
}

#[derive(Deserialize)]
struct WitnessFile {
    witnesses: Vec<TorsionWitness>,
}

#[derive(Serialize)]
struct CertifyResult {
    word: String,
    exponent: usize,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct CertifyReport {
    schema_version: u32,
    results: Vec<CertifyResult>,
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let c = match load_matrix(&a.input, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let text = match read_input(&a.witness, err) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let witnesses = match serde_json::from_str::<WitnessFile>(&text) {
        Ok(file) => file.witnesses,
        Err(_) => match serde_json::from_str::<TorsionWitness>(&text) {
            Ok(w) => vec![w],
            Err(e) => {
                let _ = writeln!(err, "error: cannot parse witness file: {e}");
                return 2;
            }
        },
    };
    let mut results = Vec::with_capacity(witnesses.len());
    for w in &witnesses {
        let (verified, reason) = match verify_witness(&c, w) {
            Ok(true) => (true, None),
            Ok(false) => (false, Some("replay did not erase the word".to_string())),
            Err(e) => (false, Some(e.to_string())),
        };
        results.push(CertifyResult {
            word: w.word.to_string(),
            exponent: w.exponent,
            verified,
            reason,
        });
    }
    let all_ok = results.iter().all(|r| r.verified);
    match a.format {
        ReportFormat::Text => {
            for r in &results {
                match &r.reason {
                    None => {
                        let _ = writeln!(out, "witness {}^{}: verified", r.word, r.exponent);
                    }
                    Some(reason) => {
                        let _ = writeln!(
                            out,
                            "witness {}^{}: FAILED ({reason})",
                            r.word, r.exponent
                        );
                    }
                }
            }
            let _ = writeln!(
                out,
                "verified: {}/{}",
                results.iter().filter(|r| r.verified).count(),
                results.len()
            );
        }
        ReportFormat::Json => {
            let report = CertifyReport {
                schema_version: SCHEMA_VERSION,
                results,
            };
            let _ = writeln!(out, "{}", to_json(&report));
        }
    }
    if all_ok {
        0
    } else {
        1
    }
}

#[derive(Serialize)]
struct ExportReport<'a> {
    schema_version: u32,
    presentation: &'a Presentation,
}

fn cmd_export(a: &ExportArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let c = match load_matrix(&a.input, err) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let kind = match a.group {
        GroupChoice::Gamma => GroupKind::GammaC,
        GroupChoice::G => GroupKind::GC,
    };
    let presentation = match presentation_from_matrix(&c, kind) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    match a.format {
        ReportFormat::Text => {
            let _ = write!(out, "{}", presentation.to_cas_text());
        }
        ReportFormat::Json => {
            let report = ExportReport {
                schema_version: SCHEMA_VERSION,
                presentation: &presentation,
            };
            let _ = writeln!(out, "{}", to_json(&report));
        }
    }
    0
}
