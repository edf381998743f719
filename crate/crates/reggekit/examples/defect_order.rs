//! Order of the naive defect ||Hol(dT_h) - I + int F|| without the
//! dressing transports: one order below the dressed identity (3 vs 4 in
//! the square side h).

use reggekit::gauge::PolyConnection;
use reggekit::identity::{defect_order_scan, fitted_slope};

fn main() -> reggekit::Result<()> {
    let field = PolyConnection::seeded_so3(0).field()?;
    let pairs = defect_order_scan(&field, &[0.1, 0.1], &[0.4, 0.2, 0.1, 0.05])?;
    for (h, d) in &pairs {
        println!("h {h:<4}: naive defect {d:.3e}");
    }
    println!("fitted log-log slope: {:.3} (theory: 3)", fitted_slope(&pairs));
    Ok(())
}
