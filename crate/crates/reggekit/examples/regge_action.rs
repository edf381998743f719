//! Regge action and deficit table on two closed complexes, checked against
//! their closed forms: the boundary of the 4-simplex and the icosahedron
//! (Gauss-Bonnet: total 4 pi).

use std::f64::consts::PI;

use reggekit::regge::{boundary_4_simplex, icosahedron, regge_action, EdgeLengths};

fn main() -> reggekit::Result<()> {
    let complex = boundary_4_simplex();
    let lengths = EdgeLengths::uniform(&complex, 1.0);
    let report = regge_action(&complex, &lengths)?;
    let closed_form = 2.0 * PI - 3.0 * (1.0f64 / 3.0).acos();
    println!("boundary of the 4-simplex, unit edges:");
    for h in &report.hinges {
        println!(
            "  hinge {:?}: deficit {:.12} (closed form {closed_form:.12})",
            h.hinge, h.deficit
        );
    }
    println!("  action: {:.12}\n", report.total);

    let ico = icosahedron();
    let report = regge_action(&ico, &EdgeLengths::uniform(&ico, 1.0))?;
    println!(
        "icosahedron: total deficit {:.12}, 4 pi = {:.12}",
        report.total,
        4.0 * PI
    );
    Ok(())
}
