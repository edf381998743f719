//! Action gradients two ways (finite differences vs the Schlafli form) and
//! a damped Newton search for a critical point of the Regge action.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reggekit::regge::{
    action_gradient, boundary_4_simplex, critical_point_search, EdgeLengths, GradientMode,
};

fn main() -> reggekit::Result<()> {
    let complex = boundary_4_simplex();

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut lengths = EdgeLengths::new();
    for e in complex.edges() {
        lengths.set(e[0], e[1], 1.0 + 0.08 * rng.gen_range(-1.0..1.0));
    }
    let fd = action_gradient(&complex, &lengths, GradientMode::FiniteDifference)?;
    let sc = action_gradient(&complex, &lengths, GradientMode::Schlafli)?;
    let worst = fd
        .iter()
        .map(|(e, v)| (v - sc[e]).abs())
        .fold(0.0f64, f64::max);
    println!("fd vs schlafli gradient, worst edge disagreement: {worst:.3e}");

    let mut start = EdgeLengths::uniform(&complex, 1.0);
    start.set(0, 1, 1.15);
    let report = critical_point_search(&complex, &start, &[(0, 1)], 1e-10, 200)?;
    println!(
        "search over edge (0,1) from l^2 = 1.15: {} iterations, grad norm {:.3e}, l^2 = {:.12}",
        report.iterations,
        report.grad_norm,
        report.lengths.get(0, 1)?
    );
    Ok(())
}
