//! The helix graph pairs up `(state, letter)` vertices; an automaton is the
//! transducer of some pairing matrix exactly when it is bireversible, free
//! of loops and identity outputs, and its helix decomposes into 2-cycles.
//! `recognize_pairing` checks those conditions in order and reconstructs the
//! matrix on success.
//!
//! Run with `cargo run --example helix_recognition`.

use pairing_automata::{build_a_automaton, build_helix, recognize_pairing, validate_pairing, Arrow, MealyAutomaton};

fn arrow(from: &str, input: &str, output: &str, to: &str) -> Arrow {
    Arrow {
        from: from.into(),
        input: input.into(),
        output: output.into(),
        to: to.into(),
    }
}

fn main() {
    let c = validate_pairing(&[
        vec![1, 2, 3, 4],
        vec![5, 6, 2, 1],
        vec![3, 4, 5, 6],
    ])
    .unwrap();
    let a = build_a_automaton(&c);

    let helix = build_helix(&a);
    println!(
        "helix of A: {} vertices, union of 2-cycles: {}",
        helix.n_vertices(),
        helix.is_union_of_two_cycles()
    );
    for cycle in helix.cycles() {
        let labels: Vec<String> = cycle
            .iter()
            .map(|&(s, x)| helix.vertex_label(s, x))
            .collect();
        println!("  cycle: {}", labels.join(" -> "));
    }
    println!();

    // Round trip: the reconstructed matrix pairs the same cells.
    let recovered = recognize_pairing(&a).expect("A came from a pairing matrix");
    println!("recognized matrix: {}", recovered.to_compact());
    assert_eq!(recovered.canonical_form(), c.canonical_form());
    println!();

    // Rejections name the first offending (state, letter) pair. This
    // automaton is bireversible with no loops or identity outputs, yet its
    // helix walk (p,0) -> (q,1) -> (p,3) -> (q,2) -> (p,0) is a 4-cycle.
    let twisted = MealyAutomaton::from_arrows(
        vec!["p".into(), "q".into()],
        vec!["0".into(), "1".into(), "2".into(), "3".into()],
        &[
            arrow("p", "0", "1", "q"),
            arrow("p", "1", "0", "q"),
            arrow("p", "2", "3", "q"),
            arrow("p", "3", "2", "q"),
            arrow("q", "0", "2", "p"),
            arrow("q", "1", "3", "p"),
            arrow("q", "2", "0", "p"),
            arrow("q", "3", "1", "p"),
        ],
    )
    .unwrap();
    println!("twisted automaton rejected: {}", recognize_pairing(&twisted).unwrap_err());

    // Identity outputs are caught before the helix is even built.
    let echo = MealyAutomaton::from_arrows(
        vec!["p".into(), "q".into()],
        vec!["0".into(), "1".into()],
        &[
            arrow("p", "0", "1", "q"),
            arrow("p", "1", "0", "q"),
            arrow("q", "0", "0", "p"),
            arrow("q", "1", "1", "p"),
        ],
    )
    .unwrap();
    println!("echoing automaton rejected: {}", recognize_pairing(&echo).unwrap_err());
}
