// Coordinate loops on CPⁿ have vanishing characteristic number, as they
// must: π₁ of the projective unitary group is finite.

use std::error::Error;

use toric_ham::{build_model, format_rational, invariant_coordinate, rat, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for n in 1..=4 {
        let w = IntMatrix::from_rows(&[vec![1i64; n + 1]]);
        let model = build_model(&w, &[rat(5, 2)])?;
        let r = invariant_coordinate(&model, 0)?;
        println!(
            "CP^{n}: kappa = {}, I = {} ({})",
            format_rational(&r.kappa),
            format_rational(&r.invariant),
            r.verdict
        );
        assert_eq!(r.invariant, rat(0, 1));
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("cpn_vanishing example");
}
