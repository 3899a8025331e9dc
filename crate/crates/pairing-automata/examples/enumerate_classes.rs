//! Enumerate canonical representatives of pairing-matrix classes (one per
//! orbit under row/column permutation and value relabeling) for a range of
//! shapes, and show how the cell budget guards against runaway requests.
//!
//! Run with `cargo run --example enumerate_classes`.

use pairing_automata::{enumerate_pairings, enumerate_pairings_with_budget};

fn main() {
    println!("shape   classes   invertible");
    for (n, m) in [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 4), (4, 4), (3, 6)] {
        let all = enumerate_pairings(n, m, false).expect("within budget");
        let invertible = enumerate_pairings(n, m, true).expect("within budget");
        println!("{n} x {m}   {:7}   {:10}", all.len(), invertible.len());
    }
    println!();

    println!("all 3 x 4 classes (canonical, ascending):");
    for c in enumerate_pairings(3, 4, false).unwrap() {
        let tag = if c.is_invertible_pairing() {
            "invertible"
        } else {
            "not invertible"
        };
        println!("  {}   ({tag})", c.to_compact());
    }
    println!();

    // Requests are bounded by a cell budget (default 24 cells); a tighter
    // explicit budget turns oversized shapes into errors instead of hangs.
    match enumerate_pairings_with_budget(4, 4, false, 8) {
        Err(e) => println!("4 x 4 under budget 8: {e}"),
        Ok(_) => unreachable!("16 cells exceed a budget of 8"),
    }

    // Degenerate shapes are not errors, just empty: a single row or column
    // would force both copies of a value into the same line.
    assert!(enumerate_pairings(1, 6, false).unwrap().is_empty());
    println!("1 x 6: no classes");
}
