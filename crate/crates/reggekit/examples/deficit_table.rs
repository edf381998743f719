//! Deficit angles at a vertex star, and the bridge from a complex to a
//! cone fan: the fan built from a perturbed star has exactly the star's
//! deficit angle.

use std::f64::consts::FRAC_PI_3;

use reggekit::cone::fan_from_vertex_star;
use reggekit::regge::{deficit_angle, EdgeLengths, SimplicialComplex};

fn main() -> reggekit::Result<()> {
    // five equilateral triangles around vertex 0: deficit pi/3
    let names: Vec<String> = (0..6).map(|i| format!("v{i}")).collect();
    let faces: Vec<Vec<usize>> = (1..=5).map(|i| vec![0, i, i % 5 + 1]).collect();
    let complex = SimplicialComplex::from_maximal_indices(names, &faces)?;
    let mut lengths = EdgeLengths::uniform(&complex, 1.0);

    let hinge = complex.hinge(&[0])?;
    let d = deficit_angle(&hinge, &lengths)?;
    println!("equilateral 5-star: deficit {d:.15} (pi/3 = {:.15})", FRAC_PI_3);

    // perturb one spoke; the fan inherits the new deficit exactly
    lengths.set(0, 1, 1.21);
    let d = deficit_angle(&complex.hinge(&[0])?, &lengths)?;
    let fan = fan_from_vertex_star(&complex, &lengths, 0)?;
    println!(
        "perturbed star:     deficit {d:.15}, fan deficit {:.15}",
        fan.deficit()?
    );
    Ok(())
}
