//! Pairing matrices, the Mealy automata they induce, and certified
//! finite-order witnesses.
//!
//! A pairing matrix `C` perfectly pairs the cells of an `n × m` grid: every
//! value occurs exactly twice, never twice in a row or column. Reading each
//! pair of partner cells `(i,j) ~ (i',j')` as a rewriting rule
//! `a_i · b_j = a_{i'} · b_{j'}` turns `C` into a letter-by-letter
//! transducer: a Mealy automaton over states `a_1..a_n` and alphabet
//! `b_1..b_m`. This crate validates and enumerates pairing matrices
//! ([`matrix`]), builds and analyzes the induced automata ([`automata`]),
//! searches for certified finite-order elements of the associated groups
//! ([`torsion`]), emits machine-checkable rewriting certificates
//! ([`certify`]), and exposes everything through a command-line toolkit
//! ([`cli`]).
//!
//! # Example
//!
//! ```
//! use pairing_automata::matrix::validate_pairing;
//!
//! let c = validate_pairing(&[
//!     vec![1, 2, 3, 4],
//!     vec![5, 6, 2, 1],
//!     vec![3, 4, 5, 6],
//! ])
//! .unwrap();
//! assert!(c.is_invertible_pairing());
//! assert_eq!(c.canonical_form().to_compact(), "1 2 3 4 / 2 5 4 6 / 5 3 6 1");
//! ```

pub mod automata;
pub mod certify;
pub mod cli;
pub mod matrix;
pub mod torsion;

pub use certify::{
    export_presentation, free_reduce, relations_from_matrix, replay_certificate,
    verify_certificate, CertStep, Certificate, CertifyError, Generator, GroupKind, GroupWord,
    Presentation, PresentationFormat, Relation, WordLetter,
};

pub use automata::{
    build_a_automaton, build_b_automaton, build_helix, check_bireversible, check_invertible,
    dual_automaton, power_automaton, recognize_pairing, Arrow, AutomataError, HelixGraph,
    MealyAutomaton, DEFAULT_POWER_BUDGET,
};
pub use matrix::{
    enumerate_pairings, enumerate_pairings_with_budget, validate_pairing, Cell, MatrixEquivalence,
    MatrixError, PairingMatrix, DEFAULT_CELL_BUDGET,
};
pub use torsion::{
    cyclic_bipartite_witness, detect_cyclic_bipartite, find_dual_letter_cycles,
    find_letter_cycles, find_word_cycles, normal_form_3x2n, three_row_witness, verify_witness,
    BipartiteNormalForm, CyclicBipartiteStructure, Provenance, TorsionError, TorsionWitness,
};
