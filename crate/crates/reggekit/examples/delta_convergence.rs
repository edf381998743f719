//! kappa_eps mu_eps converges weakly to d times the point mass at the cone
//! tip: int psi kappa_eps mu_eps -> d psi(0) as eps -> 0.

use std::f64::consts::FRAC_PI_3;

use nalgebra::Vector2;
use reggekit::cone::{fan_from_sector_angles, weak_convergence_scan, GridSpec, QuadSpec};

fn main() -> reggekit::Result<()> {
    let fan = fan_from_sector_angles(&[FRAC_PI_3; 5])?;
    let psi = |x: &Vector2<f64>| {
        let s = x.norm_squared() / 1.44;
        if s >= 1.0 {
            0.0
        } else {
            (1.0 - 1.0 / (1.0 - s)).exp()
        }
    };
    let quad = QuadSpec {
        angular_order: 16,
        radial_order: 32,
        radial_segments: 2,
    };
    let rows = weak_convergence_scan(
        &fan,
        &psi,
        &[0.4, 0.2, 0.1],
        &GridSpec::default(),
        &quad,
    )?;
    println!("deficit d = {:.6}, psi a radial bump with psi(0) = 1", fan.deficit()?);
    for r in rows {
        println!(
            "eps {:<4}: int psi kappa mu = {:+.6}, d psi(0) = {:+.6}, error {:.3e}",
            r.eps, r.value, r.reference, r.abs_error
        );
    }
    Ok(())
}
