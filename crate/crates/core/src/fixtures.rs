//! Small named relations shared by tests, benches and the CLI docs.

use crate::relation::Relation;

/// `X = {a,b,c,d}`, `Y = {1,2,3,4}` with eight pairs; its Dowker complexes
/// and rectangle complex each have one component and one hole.
pub fn figure_one() -> Relation {
    Relation::new(
        ["a", "b", "c", "d"],
        ["1", "2", "3", "4"],
        [
            ("a", "2"),
            ("a", "4"),
            ("b", "1"),
            ("b", "2"),
            ("c", "1"),
            ("c", "4"),
            ("d", "1"),
            ("d", "3"),
        ],
    )
    .expect("valid relation")
}

/// The full relation `X × Y`.
pub fn full_relation(x: &[&str], y: &[&str]) -> Relation {
    let pairs: Vec<(&str, &str)> = x
        .iter()
        .flat_map(|a| y.iter().map(move |b| (*a, *b)))
        .collect();
    Relation::new(x.iter().copied(), y.iter().copied(), pairs).expect("valid relation")
}
