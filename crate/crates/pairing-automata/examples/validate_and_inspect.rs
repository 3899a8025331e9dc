//! Validate a pairing matrix and inspect its basic structure: dimensions,
//! partner cells, invertibility, bireversibility, and the rendering
//! formats.
//!
//! Run with `cargo run --example validate_and_inspect`.

use pairing_automata::{build_a_automaton, check_bireversible, validate_pairing, Cell};

fn main() {
    // Every value 1..=6 occurs exactly twice, never twice in a row or
    // column — the defining pairing conditions.
    let c = validate_pairing(&[
        vec![1, 2, 3, 4],
        vec![5, 6, 2, 1],
        vec![3, 4, 5, 6],
    ])
    .expect("a valid pairing matrix");

    println!("matrix ({} x {}, {} values):", c.n_rows(), c.n_cols(), c.value_count());
    print!("{}", c.to_text());
    println!("compact: {}", c.to_compact());
    println!();

    // Each cell has a unique partner holding the same value.
    for value in 1..=c.value_count() as u32 {
        let (first, second) = c.cells_of_value(value);
        println!("value {value}: cells {first} and {second}");
        assert_eq!(c.partner_cell(first), second);
    }
    println!();

    println!("invertible pairing: {}", c.is_invertible_pairing());
    println!(
        "bireversible automaton: {}",
        check_bireversible(&build_a_automaton(&c))
    );
    println!("entry at (2,3): {}", c.entry(Cell { row: 2, col: 3 }));
    println!("transpose compact: {}", c.transpose().to_compact());
    println!();

    // Validation pinpoints the first offending cell in row-major order.
    for raw in [
        vec![vec![1, 1], vec![2, 2]],
        vec![vec![1, 2], vec![1, 2]],
        vec![vec![0, 1], vec![1, 0]],
    ] {
        let verdict = validate_pairing(&raw).unwrap_err();
        println!("{raw:?} rejected: {verdict}");
    }
}
