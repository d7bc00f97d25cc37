// The one-point blow-up of CP³: the rotation of `z_1` has a nonzero
// characteristic number, so it generates an infinite cyclic subgroup.

use std::error::Error;

use toric_ham::invariant::Evaluator;
use toric_ham::{build_model, format_rational, rat, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let w = IntMatrix::from_rows(&[[1, 1, 1, 0, 1], [0, 0, 1, 1, 0]]);
    let model = build_model(&w, &[rat(2, 1), rat(1, 1)])?;
    println!("{}", model.describe());
    let ev = Evaluator::new(&model)?;
    println!("volume {}", format_rational(ev.volume()));
    for a in [0, 2, 3] {
        let r = ev.coordinate_report(a)?;
        let facets: Vec<String> = r.facet_contributions.iter().map(format_rational).collect();
        println!(
            "e{}: kappa = {}, N = ({}), I = {} -> {}",
            a + 1,
            format_rational(&r.kappa),
            facets.join(", "),
            format_rational(&r.invariant),
            r.verdict
        );
    }
    assert_eq!(ev.coordinate_report(0)?.invariant, rat(-1, 2));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("blowup_cp3 example");
}
