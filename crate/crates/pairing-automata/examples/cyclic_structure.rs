//! Cyclic-bipartite structures: states arranged in a cycle and the alphabet
//! split into two equal halves, with one half advancing along the cycle and
//! the other retreating, outputs always crossing sides. Automata with this
//! shape yield finite-order witnesses for any number of states — the
//! three-row pipeline is the special case of a 3-cycle.
//!
//! Run with `cargo run --example cyclic_structure`.

use pairing_automata::{
    build_a_automaton, cyclic_bipartite_witness, detect_cyclic_bipartite, three_row_witness,
    validate_pairing, verify_witness,
};

fn main() {
    // The search tries state orderings and alphabet bipartitions in
    // lexicographic order and returns the first structure the arrows accept.
    let c = validate_pairing(&[
        vec![1, 2, 3, 4],
        vec![5, 6, 2, 1],
        vec![3, 4, 5, 6],
    ])
    .unwrap();
    let a = build_a_automaton(&c);
    let s = detect_cyclic_bipartite(&a).unwrap();
    println!("matrix: {}", c.to_compact());
    println!("state cycle (0-based): {:?}", s.state_cycle);
    println!(
        "advancing letters: {:?}, retreating letters: {:?}",
        s.letter_part_a, s.letter_part_b
    );

    // The structure feeds the same cycle-extraction engine as the three-row
    // pipeline, so on three-row matrices both routes certify torsion.
    let w = cyclic_bipartite_witness(&c, &s).unwrap();
    println!("witness: ({})^{} = e   [{}]", w.word, w.exponent, w.provenance);
    assert_eq!(verify_witness(&c, &w), Ok(true));
    let t = three_row_witness(&c).unwrap();
    println!("three-row route: ({})^{} = e   [{}]", t.word, t.exponent, t.provenance);
    assert_eq!(verify_witness(&c, &t), Ok(true));
    assert_eq!((w.word.clone(), w.exponent), (t.word.clone(), t.exponent));
    println!();

    // Two states also qualify: a 2-cycle with singleton alphabet halves.
    let square = validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap();
    let s2 = detect_cyclic_bipartite(&build_a_automaton(&square)).unwrap();
    let w2 = cyclic_bipartite_witness(&square, &s2).unwrap();
    println!("matrix: {}", square.to_compact());
    println!("state cycle: {:?}, halves: {:?} / {:?}", s2.state_cycle, s2.letter_part_a, s2.letter_part_b);
    println!("witness: ({})^{} = e   [{}]", w2.word, w2.exponent, w2.provenance);
    assert_eq!(verify_witness(&square, &w2), Ok(true));
    println!();

    // Negative cases. An odd alphabet cannot split into equal halves, and
    // the search is budgeted: alphabets beyond eight letters are refused
    // rather than searched.
    let odd = validate_pairing(&[vec![1, 2, 3], vec![2, 3, 1]]).unwrap();
    let err = detect_cyclic_bipartite(&build_a_automaton(&odd)).unwrap_err();
    println!("{}: {err}", odd.to_compact());

    let wide = validate_pairing(&[
        (1..=10).collect::<Vec<i64>>(),
        (1..=10).map(|v| v % 10 + 1).collect(),
    ])
    .unwrap();
    let err = detect_cyclic_bipartite(&build_a_automaton(&wide)).unwrap_err();
    println!("{}: {err}", wide.to_compact());
}
