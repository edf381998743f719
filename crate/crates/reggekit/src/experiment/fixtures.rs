//! Reproducible fixture files for the experiment suite.

use std::f64::consts::{FRAC_PI_3, PI};
use std::path::{Path, PathBuf};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cone::{fan_from_sector_angles, wedge_fan, HingeFan3D};
use crate::error::{Error, Result};
use crate::gauge::PolyConnection;
use crate::io::{write_json, ComplexFile, FanFile};
use crate::regge::{boundary_4_simplex, icosahedron, EdgeLengths, SimplicialComplex};

pub const FIXTURE_KINDS: [&str; 8] = [
    "polynomial-so3-field",
    "abelian-field",
    "triangle-fan",
    "wedge-fan",
    "product-hinge3d",
    "icosahedron",
    "boundary-4-simplex",
    "perturbed-flat-grid",
];

/// Flat n x n vertex grid triangulated by diagonals, unit squares, with
/// every squared length multiplied by (1 + amp * uniform(-1, 1)).
fn perturbed_flat_grid(n: usize, seed: u64, amp: f64) -> (SimplicialComplex, EdgeLengths) {
    let idx = |i: usize, j: usize| i * n + j;
    let mut faces = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            faces.push(vec![idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)]);
            faces.push(vec![idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)]);
        }
    }
    let names = (0..n * n).map(|k| format!("v{k}")).collect();
    let complex = SimplicialComplex::from_maximal_indices(names, &faces).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lengths = EdgeLengths::new();
    for e in complex.edges() {
        let (a, b) = (e[0], e[1]);
        let (ia, ja) = (a / n, a % n);
        let (ib, jb) = (b / n, b % n);
        let flat = ((ia as f64 - ib as f64).powi(2) + (ja as f64 - jb as f64).powi(2)) as f64;
        lengths.set(a, b, flat * (1.0 + amp * rng.gen_range(-1.0..1.0)));
    }
    (complex, lengths)
}

/// Writes the fixture files for `kind` into `out_dir` and returns their
/// paths. Identical (kind, seed) pairs produce identical bytes.
pub fn generate_fixture(kind: &str, seed: u64, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(format!("{kind}.json"));
    match kind {
        "polynomial-so3-field" => {
            write_json(&path, &PolyConnection::seeded_so3(seed))?;
        }
        "abelian-field" => {
            write_json(&path, &PolyConnection::seeded_abelian(seed))?;
        }
        "triangle-fan" => {
            let fan = fan_from_sector_angles(&[FRAC_PI_3; 5])?;
            write_json(&path, &FanFile::from_fan2(&fan))?;
        }
        "wedge-fan" => {
            let fan = wedge_fan(1.5 * PI, 4)?;
            write_json(&path, &FanFile::from_fan2(&fan))?;
        }
        "product-hinge3d" => {
            let fan2 = fan_from_sector_angles(&[FRAC_PI_3; 5])?;
            let fan = HingeFan3D::product(&fan2, 1.0)?;
            write_json(&path, &FanFile::from_fan3(&fan))?;
        }
        "icosahedron" => {
            let complex = icosahedron();
            let lengths = EdgeLengths::uniform(&complex, 1.0);
            write_json(&path, &ComplexFile::from_data(&complex, &lengths))?;
        }
        "boundary-4-simplex" => {
            let complex = boundary_4_simplex();
            let lengths = EdgeLengths::uniform(&complex, 1.0);
            write_json(&path, &ComplexFile::from_data(&complex, &lengths))?;
        }
        "perturbed-flat-grid" => {
            let (complex, lengths) = perturbed_flat_grid(4, seed, 0.05);
            write_json(&path, &ComplexFile::from_data(&complex, &lengths))?;
        }
        other => {
            return Err(Error::Config(format!(
                "unknown fixture kind {other:?}; valid kinds: {}",
                FIXTURE_KINDS.join(", ")
            )));
        }
    }
    Ok(vec![path])
}
