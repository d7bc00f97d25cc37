// Volumes and affine integrals of an H-polytope, by pulling triangulation
// and independently by Lasserre's recursion.

use std::error::Error;

use toric_ham::polytope::{lasserre_volume, Inequality};
use toric_ham::{format_rational, rat, AffineForm, Polytope};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // the unit cube with one corner cut off: x, y, z in [0, 1], x + y + z <= 5/2
    let p = Polytope::new(
        3,
        vec![
            Inequality::from_ints(&[1, 0, 0], rat(0, 1)),
            Inequality::from_ints(&[0, 1, 0], rat(0, 1)),
            Inequality::from_ints(&[0, 0, 1], rat(0, 1)),
            Inequality::from_ints(&[-1, 0, 0], rat(1, 1)),
            Inequality::from_ints(&[0, -1, 0], rat(1, 1)),
            Inequality::from_ints(&[0, 0, -1], rat(1, 1)),
            Inequality::from_ints(&[-1, -1, -1], rat(5, 2)),
        ],
    )?;
    let vol = p.volume()?;
    println!(
        "{} vertices, volume {}",
        p.vertices().len(),
        format_rational(&vol)
    );
    assert_eq!(vol, lasserre_volume(&p)?);

    let x = AffineForm::coordinate(0, 3);
    println!(
        "integral of x: {}",
        format_rational(&p.integrate_affine(&x)?)
    );
    for facet in p.facets() {
        println!(
            "facet {}: normal {:?}, lattice volume {}",
            facet.index,
            facet.normal,
            format_rational(&p.facet_lattice_volume(&facet))
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("polytope_volumes example");
}
