//! Levi-Civita holonomy of the smoothed cone metric around a circle
//! enclosing the support: the rotation angle equals the deficit (mod 2 pi),
//! and the winding integer stays 1 along a homotopy to the flat fan.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use reggekit::cone::{
    fan_from_sector_angles, homotopy_integer, lc_holonomy_angle, wedge_fan, GridSpec, QuadSpec,
};

fn wrap(x: f64) -> f64 {
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    }
    if y <= -PI {
        y += TAU;
    }
    y
}

fn main() -> reggekit::Result<()> {
    let quad = QuadSpec::default();
    let eps = 0.4;
    let fans = [
        ("5 x pi/3 fan", fan_from_sector_angles(&[FRAC_PI_3; 5])?),
        ("3/2 pi wedge", wedge_fan(1.5 * PI, 4)?),
        (
            "negative fan",
            fan_from_sector_angles(&[(TAU + 0.4) / 6.0; 6])?,
        ),
    ];
    for (name, fan) in &fans {
        let big_r = 1.4 * fan.support_radius(eps);
        let angle = lc_holonomy_angle(fan, eps, big_r, 64, &quad)?;
        let d = fan.deficit()?;
        println!(
            "{name}: holonomy angle {angle:+.8}, deficit {d:+.8}, |diff mod 2pi| {:.2e}",
            wrap(angle - d).abs()
        );
    }

    let fan = wedge_fan(1.5 * PI, 4)?;
    let grid = GridSpec::default();
    let iquad = QuadSpec {
        angular_order: 16,
        radial_order: 32,
        radial_segments: 2,
    };
    print!("homotopy integer along the blend to flat:");
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let k = homotopy_integer(&fan.blend_with_flat(s)?, 1.0, &grid, &iquad)?;
        print!(" k({s}) = {k}");
    }
    println!();
    Ok(())
}
