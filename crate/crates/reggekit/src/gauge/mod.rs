//! Matrix-group linear algebra, connection one-forms, gauge transforms,
//! parallel transport, holonomy and curvature.

mod field;
mod matrix;
mod path;
mod sample;
mod transport;

pub use field::{curvature, curvature_on_pair, gauge_transform, ConnectionField, Domain, GaugeField};
pub use matrix::{exp_map, expm_pade, so2_generator, so3_generator, AlgebraElement, GroupTag,
    MatrixGroupElement};
pub use path::{Path, Segment};
pub use sample::PolyConnection;
pub use transport::{holonomy, parallel_transport, pt_abelian};

#[cfg(test)]
mod covariance_tests {
    //! Gauge covariance of transport, holonomy and curvature (the Eq.-level
    //! invariants of the module).

    use std::sync::Arc;

    use nalgebra::DMatrix;

    use super::*;

    fn so3_field() -> ConnectionField {
        ConnectionField::new(
            2,
            3,
            Arc::new(|p: &[f64]| {
                let (x, y) = (p[0], p[1]);
                vec![
                    so3_generator(0) * (0.6 * x) + so3_generator(2) * (0.2 + 0.3 * y),
                    so3_generator(1) * (0.5 * x * y) + so3_generator(0) * (-0.3),
                ]
            }),
            None,
        )
    }

    /// Q(x) = exp(u(x) K) for a fixed generator K, so dQ is analytic.
    fn gauge_pair() -> (GaugeField, Arc<dyn Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync>) {
        let k = so3_generator(0) * 0.7 + so3_generator(1) * 0.2;
        let u = |p: &[f64]| 0.4 * p[0] - 0.6 * p[1];
        let du = [0.4, -0.6];
        let kq = k.clone();
        let q = GaugeField::new(Arc::new(move |p: &[f64]| {
            exp_map(&AlgebraElement::new(&kq * u(p)))
        }));
        let kd = k.clone();
        let dq = Arc::new(move |p: &[f64]| {
            let g = exp_map(&AlgebraElement::new(&kd * u(p)));
            du.iter().map(|d| &kd * g.entries() * *d).collect::<Vec<_>>()
        });
        (q, dq)
    }

    #[test]
    fn transport_covariance() {
        // PT_{GT_Q(A)}(gamma) Q(x) = Q(y) PT_A(gamma)
        let a = so3_field();
        let (q, dq) = gauge_pair();
        let ap = gauge_transform(&a, &q, dq).unwrap();
        let path = Path::polyline(&[vec![0.1, 0.1], vec![0.8, 0.2], vec![0.5, 0.9]]).unwrap();
        let lhs = parallel_transport(&ap, &path, 128).unwrap().entries()
            * q.eval(&path.start()).entries();
        let rhs = q.eval(&path.end()).entries()
            * parallel_transport(&a, &path, 128).unwrap().entries();
        assert!((lhs - rhs).norm() <= 1e-7);
    }

    #[test]
    fn holonomy_covariance() {
        // Hol_{GT_Q(A)} = Q(x) Hol_A Q(x)^-1
        let a = so3_field();
        let (q, dq) = gauge_pair();
        let ap = gauge_transform(&a, &q, dq).unwrap();
        let loop_path = Path::polyline(&[
            vec![0.2, 0.2],
            vec![0.9, 0.2],
            vec![0.9, 0.8],
            vec![0.2, 0.8],
            vec![0.2, 0.2],
        ])
        .unwrap();
        let qm = q.eval(&loop_path.start());
        let lhs = holonomy(&ap, &loop_path, 128).unwrap();
        let rhs = qm.entries() * holonomy(&a, &loop_path, 128).unwrap().entries()
            * qm.inverse().entries();
        assert!((lhs.entries() - rhs).norm() <= 1e-8);
    }

    #[test]
    fn curvature_covariance() {
        // F(GT_Q(A)) = Q F(A) Q^-1
        let a = so3_field();
        let (q, dq) = gauge_pair();
        let ap = gauge_transform(&a, &q, dq).unwrap();
        for p in [[0.3, 0.4], [0.7, 0.6], [0.55, 0.15]] {
            let fa = curvature(&a, &p, 1e-4).unwrap();
            let fap = curvature(&ap, &p, 1e-4).unwrap();
            let qm = q.eval(&p);
            let expect = qm.entries() * &fa[0][1].entries * qm.inverse().entries();
            assert!((&fap[0][1].entries - expect).norm() <= 1e-7);
        }
    }
}
