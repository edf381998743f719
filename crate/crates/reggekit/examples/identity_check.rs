//! The exact identity: Hol(dT) - I equals the transport-dressed curvature
//! integral over the rectangle, for a seeded non-abelian field.

use reggekit::gauge::PolyConnection;
use reggekit::identity::{verify_identity, Rectangle};

fn main() -> reggekit::Result<()> {
    let rect = Rectangle::planar(0.8, 0.6);
    println!("rectangle 0.8 x 0.6, Gauss order 16, 128 transport substeps");
    for seed in 0..5 {
        let field = PolyConnection::seeded_so3(seed).field()?;
        let report = verify_identity(&field, &rect, 16, 128)?;
        println!("seed {seed}: defect {:.3e}", report.defect);
    }
    Ok(())
}
