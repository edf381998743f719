//! The radial gauge: transporting frames along corner paths produces a
//! gauge in which A'_0 vanishes everywhere and A'_1 vanishes on the axis.

use reggekit::gauge::PolyConnection;
use reggekit::identity::{radial_gauge, Rectangle};

fn main() -> reggekit::Result<()> {
    let field = PolyConnection::seeded_so3(1).field()?;
    let rect = Rectangle::planar(0.8, 0.6);
    let (transformed, _q) = radial_gauge(&field, &rect, 128)?;
    let mut worst = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let x0 = rect.a * (i as f64 + 0.5) / 8.0;
            let x1 = rect.b * (j as f64 + 0.5) / 8.0;
            worst = worst.max(transformed.eval(&rect.embed(x0, x1))[0].norm());
        }
    }
    println!("max |A'_0| on an 8x8 grid: {worst:.3e}");
    let axis_worst = (0..8)
        .map(|j| {
            let x1 = rect.b * (j as f64 + 0.5) / 8.0;
            transformed.eval(&rect.embed(0.0, x1))[1].norm()
        })
        .fold(0.0f64, f64::max);
    println!("max |A'_1(0, .)|:          {axis_worst:.3e}");
    Ok(())
}
