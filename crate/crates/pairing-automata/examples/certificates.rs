//! Certificates are the trust boundary: every witness ships a replayable
//! insertion sequence, so a consumer never has to trust the search that
//! found it. This example serializes a witness to JSON, replays its
//! certificate step by step, and shows that single-field corruptions are
//! caught on replay.
//!
//! Run with `cargo run --example certificates`.

use pairing_automata::{
    find_letter_cycles, relations_from_matrix, replay_certificate, validate_pairing,
    verify_witness, GroupWord, TorsionWitness,
};

fn main() {
    let c = validate_pairing(&[vec![1, 2], vec![3, 1], vec![2, 3]]).unwrap();
    let w = find_letter_cycles(&c).into_iter().next().unwrap();
    println!("matrix: {}", c.to_compact());
    println!("witness: ({})^{} = e", w.word, w.exponent);

    // Witnesses serialize to JSON (words as token arrays, steps as plain
    // records) and deserialize back unchanged — the interchange format the
    // command-line `certify` subcommand consumes.
    let json = serde_json::to_string_pretty(&w).unwrap();
    println!("--- witness as JSON ---");
    println!("{json}");
    let back: TorsionWitness = serde_json::from_str(&json).unwrap();
    assert_eq!(back, w);
    assert_eq!(verify_witness(&c, &back), Ok(true));
    println!();

    // Replay by hand: each step splices one rotated (possibly inverted)
    // relator into the current word and freely reduces. Watching the word
    // shrink is the whole proof.
    let relations = relations_from_matrix(&c, w.certificate.group_kind).unwrap();
    let mut current = w.certificate.start.reduced();
    println!("--- replay, step by step ---");
    println!("  start: {current}");
    for step in &w.certificate.steps {
        let relator = relations[step.rel].relator();
        let oriented = if step.inv { relator.inverse() } else { relator };
        let omega = oriented.rotate_left(step.shift as usize);
        let mut letters = current.letters()[..step.pos].to_vec();
        letters.extend_from_slice(omega.letters());
        letters.extend_from_slice(&current.letters()[step.pos..]);
        current = GroupWord::from_letters(letters).reduced();
        println!(
            "  insert {omega} (relation {}, shift {}) at {}: {current}",
            step.rel, step.shift, step.pos
        );
    }
    assert!(current.is_empty());
    assert_eq!(replay_certificate(&relations, &w.certificate), Ok(true));
    println!();

    // Corruption is caught. Shifting a relator breaks the cancellation and
    // the replay ends at a nonempty word; moving an insertion position out
    // of range is rejected as malformed; and a witness whose certificate
    // starts at the wrong power fails verification outright.
    let mut shifted = w.clone();
    shifted.certificate.steps[0].shift = (shifted.certificate.steps[0].shift + 1) % 4;
    println!("shifted relator: replay ends empty = {:?}", replay_certificate(&relations, &shifted.certificate));
    assert_eq!(verify_witness(&c, &shifted), Ok(false));

    let mut moved = w.clone();
    moved.certificate.steps[0].pos = 100;
    println!("out-of-range position: {}", replay_certificate(&relations, &moved.certificate).unwrap_err());

    let mut wrong_power = w.clone();
    wrong_power.exponent += 1;
    assert_eq!(verify_witness(&c, &wrong_power), Ok(false));
    println!("wrong exponent: verification = Ok(false)");
}
