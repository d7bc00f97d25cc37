// Saturated integer kernel of a weight matrix and a rational particular
// solution of `W·s = τ`.

use std::error::Error;

use toric_ham::linalg::{integer_kernel, solve_rational};
use toric_ham::{format_rational, rat, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let w = IntMatrix::from_rows(&[[1, 1, 1, 0, 1], [0, 0, 1, 1, 0]]);
    let q = integer_kernel(&w);
    println!("W = {w:?}");
    println!("kernel basis Q ({}x{}) = {q:?}", q.rows(), q.cols());
    assert!(w.mul(&q)?.is_zero());

    let s0 = solve_rational(&w, &[rat(2, 1), rat(1, 1)])?;
    let shown: Vec<String> = s0.iter().map(format_rational).collect();
    println!("particular solution s0 = ({})", shown.join(", "));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("integer_kernel example");
}
