// Closed-form reference values for the blow-up next to the pipeline.

use std::error::Error;

use toric_ham::invariant::Evaluator;
use toric_ham::oracles::{blowup_model, blowup_table, BlowupLoop, BlowupParams};
use toric_ham::{build_model, format_rational, rat};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (tau, mu) in [
        (rat(2, 1), rat(1, 1)),
        (rat(3, 1), rat(1, 2)),
        (rat(7, 3), rat(2, 1)),
    ] {
        let p = BlowupParams::new(tau, mu)?;
        let table = blowup_table(&p)?;
        let (w, level) = blowup_model(&p);
        let model = build_model(&w, &level)?;
        let pipeline = Evaluator::new(&model)?.coordinate_report(BlowupLoop::Psi.coordinate())?;
        println!(
            "tau = {}, mu = {}: oracle I = {}, pipeline I = {}",
            format_rational(p.tau()),
            format_rational(p.mu()),
            format_rational(&table.i_psi),
            format_rational(&pipeline.invariant)
        );
        assert_eq!(table.i_psi, pipeline.invariant);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("oracle_table example");
}
