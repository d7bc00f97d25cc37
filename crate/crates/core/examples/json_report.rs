// Reads a JSON manifold description, computes every coordinate loop and
// writes the exact report back out as JSON.

use std::error::Error;

use toric_ham::invariant::Evaluator;
use toric_ham::report::{ManifoldSpecFile, ReportFile};
use toric_ham::{build_model, check_assumptions, LoopSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/blowup_cp3.json");
    let spec = ManifoldSpecFile::from_json(&std::fs::read_to_string(path)?)?.validate()?;
    let model = build_model(&spec.weights, &spec.tau)?;
    let ev = Evaluator::new(&model)?;
    let m = model.coordinates();
    let loops = (0..m)
        .map(|a| ev.loop_report(&LoopSpec::coordinate(a, m)))
        .collect::<Result<Vec<_>, _>>()?;
    let report = ReportFile::build(
        &spec.name,
        &check_assumptions(&spec.weights),
        &model,
        &ev,
        &loops,
    );
    let json = report.to_json();
    assert_eq!(ReportFile::from_json(&json)?, report);
    println!("{json}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("json_report example");
}
