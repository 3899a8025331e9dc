//! Search the group of a pairing matrix for certified finite-order
//! elements: monochromatic letter cycles, their dual counterparts, and the
//! budgeted word-cycle generalization on power automata. Every witness
//! carries a replayable certificate and is re-verified here.
//!
//! Run with `cargo run --example torsion_search`.

use pairing_automata::{
    find_dual_letter_cycles, find_letter_cycles, find_word_cycles, validate_pairing,
    verify_witness, PairingMatrix, TorsionWitness,
};

fn show(c: &PairingMatrix, witnesses: &[TorsionWitness]) {
    for w in witnesses {
        println!(
            "  ({})^{} = e   [{}; nontrivial: {}{}]",
            w.word,
            w.exponent,
            w.provenance,
            if w.nontrivial_guaranteed { "yes" } else { "unknown" },
            w.justification
                .as_deref()
                .map(|j| format!(", {j}"))
                .unwrap_or_default(),
        );
        assert_eq!(verify_witness(c, w), Ok(true), "every witness re-verifies");
    }
    if witnesses.is_empty() {
        println!("  (none)");
    }
}

fn main() {
    // A 3 x 2 matrix whose induced letter permutations rotate a 3-cycle:
    // the quotient b2 * b1^{-1} has order three.
    let tall = validate_pairing(&[vec![1, 2], vec![3, 1], vec![2, 3]]).unwrap();
    println!("letter cycles of {}:", tall.to_compact());
    show(&tall, &find_letter_cycles(&tall));
    println!();

    // The symmetric 2 x 2 matrix carries both letter-side witnesses (words
    // in the b generators) and dual-side witnesses (words in the a
    // generators).
    let square = validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap();
    println!("letter cycles of {}:", square.to_compact());
    show(&square, &find_letter_cycles(&square));
    println!("dual letter cycles of {}:", square.to_compact());
    show(&square, &find_dual_letter_cycles(&square));
    println!();

    // Word cycles scan powers of the automaton (inputs of length <= L) and
    // of its dual (state words of length <= M); single letters appear again
    // at L = M = 1, so the searches below strictly extend the ones above.
    let figure = validate_pairing(&[
        vec![1, 2, 3, 4],
        vec![5, 6, 2, 1],
        vec![3, 4, 5, 6],
    ])
    .unwrap();
    println!("word cycles of {} (L <= 2, M <= 2):", figure.to_compact());
    show(&figure, &find_word_cycles(&figure, 2, 2).unwrap());
    println!();

    // Some matrices stay silent at small budgets; absence of a witness is
    // never evidence of torsion-freeness. This one is not even bireversible,
    // so the word-cycle pass refuses to run.
    let silent = validate_pairing(&[
        vec![1, 2, 3, 4],
        vec![2, 3, 4, 5],
        vec![5, 6, 7, 8],
        vec![6, 8, 1, 7],
    ])
    .unwrap();
    println!("searches on {}:", silent.to_compact());
    show(&silent, &find_letter_cycles(&silent));
    show(&silent, &find_dual_letter_cycles(&silent));
    println!("  word cycles: {}", find_word_cycles(&silent, 2, 2).unwrap_err());
}
