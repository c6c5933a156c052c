use super::{groebner_basis, Ideal};

/// Krull dimension of `R/I`: the largest set of variables containing no
/// support of a leading monomial of the Gröbner basis. `-1` for the unit ideal.
pub fn krull_dim(ideal: &Ideal) -> i64 {
    let gb = groebner_basis(ideal);
    let n = ideal.ring().nvars();
    if gb.elements.iter().any(|g| g.is_unit_constant()) {
        return -1;
    }
    let supports: Vec<u64> = gb
        .elements
        .iter()
        .map(|g| g.leading().unwrap().0.support().fold(0u64, |acc, v| acc | (1 << v)))
        .collect();
    assert!(n < 64, "too many variables for the staircase search");
    let mut best = 0;
    for set in 0u64..(1u64 << n) {
        let size = set.count_ones() as i64;
        if size > best && supports.iter().all(|s| s & !set != 0) {
            best = size;
        }
    }
    best
}
