//! Regge calculus on finite simplicial complexes: combinatorics, metric
//! data from squared edge lengths, deficit angles, the Regge action and
//! its gradient, and a critical point search.

mod complex;
mod gradient;
mod metric;

pub use complex::{boundary_4_simplex, Hinge, Simplex, SimplicialComplex};
pub use gradient::{action_gradient, critical_point_search, GradientMode, SearchReport};
pub use metric::{
    curvature_measure, deficit_angle, dihedral_angle, gram, regge_action, simplex_volume,
    ActionReport, EdgeLengths, HingeReport,
};

/// Icosahedron surface: 12 vertices, 20 triangles, every vertex interior.
pub fn icosahedron() -> SimplicialComplex {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut pts: Vec<[f64; 3]> = Vec::new();
    for &a in &[-1.0, 1.0] {
        for &b in &[-phi, phi] {
            pts.push([0.0, a, b]);
            pts.push([a, b, 0.0]);
            pts.push([b, 0.0, a]);
        }
    }
    let d2 = |p: &[f64; 3], q: &[f64; 3]| -> f64 {
        (0..3).map(|k| (p[k] - q[k]).powi(2)).sum()
    };
    // edges have squared length 4; faces are triangles of mutual neighbors
    let mut faces = Vec::new();
    for i in 0..12 {
        for j in (i + 1)..12 {
            if (d2(&pts[i], &pts[j]) - 4.0).abs() > 1e-9 {
                continue;
            }
            for k in (j + 1)..12 {
                if (d2(&pts[i], &pts[k]) - 4.0).abs() < 1e-9
                    && (d2(&pts[j], &pts[k]) - 4.0).abs() < 1e-9
                {
                    faces.push(vec![i, j, k]);
                }
            }
        }
    }
    assert_eq!(faces.len(), 20);
    let names = (0..12).map(|i| format!("v{i}")).collect();
    SimplicialComplex::from_maximal_indices(names, &faces).unwrap()
}
