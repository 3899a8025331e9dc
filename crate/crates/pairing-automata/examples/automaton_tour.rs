//! Build the Mealy automata induced by a pairing matrix: the transducer
//! `A` (states `a_i`, alphabet `b_j`) for any matrix, and the square-only
//! variant `B` with both roles played by indices. Shows arrows, word runs,
//! powers, duals, and DOT export.
//!
//! Run with `cargo run --example automaton_tour`.

use pairing_automata::{
    build_a_automaton, build_b_automaton, check_invertible, dual_automaton, power_automaton,
    validate_pairing,
};

fn main() {
    let c = validate_pairing(&[
        vec![1, 2, 3, 4],
        vec![5, 6, 2, 1],
        vec![3, 4, 5, 6],
    ])
    .unwrap();
    let a = build_a_automaton(&c);

    println!("A: {} states over {} letters", a.n_states(), a.n_letters());
    for arrow in a.arrows() {
        println!("  {arrow}");
    }
    println!();

    // Feed the input word b1 b2 b3 b4 through state a1: the automaton
    // rewrites it letter by letter while moving through states.
    let word = [0, 1, 2, 3];
    let (end, outputs) = a.run(0, &word);
    let rendered: Vec<&str> = outputs.iter().map(|&y| a.alphabet()[y].as_str()).collect();
    println!("a1 reads b1 b2 b3 b4  ->  writes {}  ends in {}", rendered.join(" "), a.states()[end]);
    println!("invertible: {}", check_invertible(&a));
    println!();

    // The second power reads length-2 blocks; its alphabet is all two-letter
    // words in lexicographic order.
    let squared = power_automaton(&a, 2).unwrap();
    println!(
        "A^2: {} states over {} letters (first letters: {} {} {})",
        squared.n_states(),
        squared.n_letters(),
        squared.alphabet()[0],
        squared.alphabet()[1],
        squared.alphabet()[2],
    );

    // Bireversible automata admit a dual with states and letters exchanged.
    let dual = dual_automaton(&a).expect("this automaton is bireversible");
    println!("dual: {} states over {} letters", dual.n_states(), dual.n_letters());
    println!();

    // The B automaton needs a square matrix; its transitions and outputs
    // are never jointly invertible.
    let square = validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap();
    let b = build_b_automaton(&square).unwrap();
    println!("B of {}:", square.to_compact());
    for arrow in b.arrows() {
        println!("  {arrow}");
    }
    println!("B invertible: {} (square B automata never are)", check_invertible(&b));
    assert!(build_b_automaton(&c).is_err(), "non-square matrices have no B automaton");
    println!();

    println!("DOT export of A (for graphviz):");
    print!("{}", a.to_dot());
}
