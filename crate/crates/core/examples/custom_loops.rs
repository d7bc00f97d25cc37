// General loops `Σ c_a e_a`: the invariant is linear in the weights, and
// loops coming from the quotient torus itself give zero.

use std::error::Error;

use toric_ham::invariant::Evaluator;
use toric_ham::{build_model, format_rational, rat, IntMatrix, LoopSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // a Hirzebruch surface: weights (1,0), (1,0), (1,1), (0,1)
    let w = IntMatrix::from_rows(&[[1, 1, 1, 0], [0, 0, 1, 1]]);
    let model = build_model(&w, &[rat(3, 1), rat(1, 1)])?;
    let ev = Evaluator::new(&model)?;
    for c in [
        [1, 0, 0, 0],
        [0, 0, 1, 0],
        [1, 0, -1, 0],
        [1, 1, 1, 0],
        [0, 0, 1, 1],
    ] {
        let r = ev.loop_report(&LoopSpec::from_i64(&c))?;
        println!(
            "{}: kappa = {}, I = {} -> {}",
            r.loop_spec,
            format_rational(&r.kappa),
            format_rational(&r.invariant),
            r.verdict
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("custom_loops example");
}
