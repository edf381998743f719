//! Total curvature of a smoothed cone metric equals the deficit angle:
//! int kappa_eps mu_eps = d for fans of positive and negative deficit.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use reggekit::cone::{
    fan_from_sector_angles, integrate_curvature, wedge_fan, GridSpec, QuadSpec,
};

fn main() -> reggekit::Result<()> {
    let quad = QuadSpec {
        angular_order: 16,
        radial_order: 32,
        radial_segments: 2,
    };
    let grid = GridSpec::default();
    let fans = [
        ("5 x pi/3 fan", fan_from_sector_angles(&[FRAC_PI_3; 5])?),
        ("3/2 pi wedge", wedge_fan(1.5 * PI, 4)?),
        (
            "negative fan",
            fan_from_sector_angles(&[(TAU + 0.4) / 6.0; 6])?,
        ),
    ];
    for (name, fan) in fans {
        let est = integrate_curvature(&fan, 1.0, &grid, &quad)?;
        let d = fan.deficit()?;
        println!(
            "{name}: integral {:+.6}, deficit {d:+.6}, error {:.2e}",
            est.value,
            (est.value - d).abs()
        );
    }
    Ok(())
}
