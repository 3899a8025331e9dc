//! Exporting group presentations. Every pairing matrix presents a group on
//! generators `a1..an, b1..bm` with one length-4 relator per value
//! (`a_i·b_j·b_{j'}^{-1}·a_{i'}^{-1}`); square matrices additionally present
//! a one-family variant on `a1..an` alone. Both export as line-oriented CAS
//! text and as JSON that parses back losslessly.
//!
//! Run with `cargo run --example presentations`.

use pairing_automata::certify::{parse_presentation_json, presentation_from_matrix};
use pairing_automata::{
    export_presentation, validate_pairing, GroupKind, PresentationFormat,
};

fn main() {
    let c = validate_pairing(&[
        vec![1, 2, 3, 4],
        vec![5, 6, 2, 1],
        vec![3, 4, 5, 6],
    ])
    .unwrap();

    // CAS text: a header with the group family and dimensions, then one
    // `gen` line per generator and one `rel` line per relator, by value.
    println!("--- two-family presentation of {} ---", c.to_compact());
    print!(
        "{}",
        export_presentation(&c, GroupKind::GammaC, PresentationFormat::CasText).unwrap()
    );
    println!();

    // Square matrices also present the one-family variant: the same pairing
    // read as a_i·a_j = a_{i'}·a_{j'}.
    let square = validate_pairing(&[vec![1, 2], vec![2, 1]]).unwrap();
    println!("--- one-family presentation of {} ---", square.to_compact());
    print!(
        "{}",
        export_presentation(&square, GroupKind::GC, PresentationFormat::CasText).unwrap()
    );
    let err = export_presentation(&c, GroupKind::GC, PresentationFormat::CasText).unwrap_err();
    println!("non-square one-family export: {err}");
    println!();

    // JSON round trip: the export parses back into an equal presentation,
    // and the relation list (left/right cell words) is recoverable from the
    // relators alone.
    let json = export_presentation(&c, GroupKind::GammaC, PresentationFormat::Json).unwrap();
    println!("--- JSON export ---");
    print!("{json}");
    let parsed = parse_presentation_json(&json).unwrap();
    let direct = presentation_from_matrix(&c, GroupKind::GammaC).unwrap();
    assert_eq!(parsed, direct);
    assert_eq!(parsed.dims(), (3, 4));
    assert!(parsed.distinct_generators);
    let relations = parsed.relations().unwrap();
    println!();
    println!("--- relations rebuilt from relators ---");
    for (i, r) in relations.iter().enumerate() {
        println!(
            "  value {}: {} = {}   (cells {} and {})",
            i + 1,
            r.left,
            r.right,
            r.source_cells.0,
            r.source_cells.1
        );
        assert!(r.relator().len() == 4 && r.relator().is_reduced());
    }
}
