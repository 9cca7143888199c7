/// Ladder at-most-one over `inputs`.
///
/// Register `R_1` is the first input itself and `R_2..R_r` are fresh, so
/// the constraint touches `2r - 1` variables. For each `i >= 2`:
/// `R_{i-1} -> R_i`, `x_i -> R_i`, `x_i -> !R_{i-1}`, and a closing clause
/// `R_r -> R_{r-1} | x_r` pins the last register, giving `3r - 2` clauses.
/// A single input needs no clause.
pub fn amo_ladder(inputs: &[i32], mut fresh: impl FnMut() -> i32) -> Vec<Vec<i32>> {
    let r = inputs.len();
    if r < 2 {
        return Vec::new();
    }
    let mut clauses = Vec::with_capacity(3 * r - 2);
    let mut before = inputs[0];
    let mut reg = inputs[0];
    for &x in &inputs[1..] {
        before = reg;
        reg = fresh();
        clauses.push(vec![-before, reg]);
        clauses.push(vec![-x, reg]);
        clauses.push(vec![-x, -before]);
    }
    clauses.push(vec![-reg, before, inputs[r - 1]]);
    clauses
}
