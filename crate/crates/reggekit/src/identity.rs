//! The exact holonomy identity on oriented rectangles.
//!
//! For an oriented rectangle T with corner paths
//!
//! ```text
//! gamma^-(x): (0,0) -> (x0,0) -> (x0,x1)
//! gamma^+(x): (x0,x1) -> (x0,b) -> (0,b) -> (0,0)
//! ```
//!
//! the holonomy around the boundary satisfies
//!
//! ```text
//! Hol_A(dT) - I = - int_T PT(gamma^+(x)) F(A)(x) PT(gamma^-(x)) dx
//! ```
//!
//! exactly, not just to leading order. This module evaluates both sides,
//! builds the radial gauge used in the proof, and measures the O(area^{3/2})
//! order of the naive (transport-free) defect.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gauge::{
    curvature, curvature_on_pair, holonomy, parallel_transport, ConnectionField, GaugeField, Path,
};
use crate::quad::QuadratureRule2D;

/// An oriented rectangle embedded in the field's domain.
#[derive(Debug, Clone)]
pub struct Rectangle {
    pub origin: Vec<f64>,
    pub axis0: Vec<f64>,
    pub axis1: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl Rectangle {
    pub fn new(origin: Vec<f64>, axis0: Vec<f64>, axis1: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        assert!(a > 0.0 && b > 0.0, "side lengths must be positive");
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
        let n0 = dot(&axis0, &axis0).sqrt();
        let n1 = dot(&axis1, &axis1).sqrt();
        if (n0 - 1.0).abs() > 1e-12 || (n1 - 1.0).abs() > 1e-12 || dot(&axis0, &axis1).abs() > 1e-12
        {
            return Err(Error::NumericalFailure(
                "rectangle axes must be orthonormal".into(),
            ));
        }
        Ok(Rectangle {
            origin,
            axis0,
            axis1,
            a,
            b,
        })
    }

    /// Axis-aligned rectangle [0,a] x [0,b] in the plane.
    pub fn planar(a: f64, b: f64) -> Self {
        Rectangle::new(vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], a, b).unwrap()
    }

    /// Map rectangle coordinates to ambient coordinates.
    pub fn embed(&self, x0: f64, x1: f64) -> Vec<f64> {
        self.origin
            .iter()
            .zip(self.axis0.iter().zip(&self.axis1))
            .map(|(o, (u, v))| o + x0 * u + x1 * v)
            .collect()
    }

    fn check_inside(&self, x: [f64; 2]) -> Result<()> {
        if x[0] < -1e-12 || x[0] > self.a + 1e-12 || x[1] < -1e-12 || x[1] > self.b + 1e-12 {
            return Err(Error::OutOfRectangle { point: x.to_vec() });
        }
        Ok(())
    }

    /// The oriented boundary loop (0,0) -> (a,0) -> (a,b) -> (0,b) -> (0,0).
    pub fn boundary(&self) -> Path {
        Path::polyline(&[
            self.embed(0.0, 0.0),
            self.embed(self.a, 0.0),
            self.embed(self.a, self.b),
            self.embed(0.0, self.b),
            self.embed(0.0, 0.0),
        ])
        .expect("rectangle boundary is continuous")
    }
}

/// gamma^-(x): (0,0) -> (x0,0) -> (x0,x1).
pub fn gamma_minus(rect: &Rectangle, x: [f64; 2]) -> Result<Path> {
    rect.check_inside(x)?;
    Path::polyline(&[
        rect.embed(0.0, 0.0),
        rect.embed(x[0], 0.0),
        rect.embed(x[0], x[1]),
    ])
}

/// gamma^+(x): (x0,x1) -> (x0,b) -> (0,b) -> (0,0).
pub fn gamma_plus(rect: &Rectangle, x: [f64; 2]) -> Result<Path> {
    rect.check_inside(x)?;
    Path::polyline(&[
        rect.embed(x[0], x[1]),
        rect.embed(x[0], rect.b),
        rect.embed(0.0, rect.b),
        rect.embed(0.0, 0.0),
    ])
}

/// Both sides of the identity and their Frobenius defect.
#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub lhs: DMatrix<f64>,
    pub rhs: DMatrix<f64>,
    pub defect: f64,
    pub quad_order: usize,
    pub pt_steps: usize,
}

fn fd_step_for(rect: &Rectangle) -> f64 {
    1e-4 * (rect.a * rect.a + rect.b * rect.b).sqrt()
}

/// -sum_k w_k PT(gamma^+(x_k)) F(A)(x_k)(axis0, axis1) PT(gamma^-(x_k)).
pub fn curvature_integral(
    field: &ConnectionField,
    rect: &Rectangle,
    quad: &QuadratureRule2D,
    pt_steps: usize,
) -> Result<DMatrix<f64>> {
    quad.validate(rect.a * rect.b)?;
    let fd = fd_step_for(rect);
    let mut acc = DMatrix::<f64>::zeros(field.n, field.n);
    for &(x, w) in &quad.nodes {
        let gp = gamma_plus(rect, x)?;
        let gm = gamma_minus(rect, x)?;
        let ptp = parallel_transport(field, &gp, pt_steps)?;
        let ptm = parallel_transport(field, &gm, pt_steps)?;
        let f = curvature(field, &rect.embed(x[0], x[1]), fd)?;
        let f01 = curvature_on_pair(&f, &rect.axis0, &rect.axis1);
        acc += ptp.entries() * f01 * ptm.entries() * w;
    }
    Ok(-acc)
}

/// Evaluate Hol - I and the curvature integral, and report the defect.
pub fn verify_identity(
    field: &ConnectionField,
    rect: &Rectangle,
    quad_order: usize,
    pt_steps: usize,
) -> Result<IdentityReport> {
    let hol = holonomy(field, &rect.boundary(), pt_steps)?;
    let n = field.n;
    let lhs = hol.entries() - DMatrix::<f64>::identity(n, n);
    let quad = QuadratureRule2D::tensor_gauss(quad_order, rect.a, rect.b);
    let rhs = curvature_integral(field, rect, &quad, pt_steps)?;
    let defect = (&lhs - &rhs).norm();
    Ok(IdentityReport {
        lhs,
        rhs,
        defect,
        quad_order,
        pt_steps,
    })
}

/// The radial gauge of the proof: Q(x) = PT_A(alpha(x)) with
/// alpha(x): (x0,x1) -> (0,x1) -> (0,0).
///
/// Returns GT_Q(A) and Q. The transformed field satisfies A'_0 = 0
/// everywhere and A'_1(0,.) = 0; this is checked on a 16x16 sample grid to
/// 1e-7 and a `GaugeCondition` error is raised if the check fails.
pub fn radial_gauge(
    field: &ConnectionField,
    rect: &Rectangle,
    pt_steps: usize,
) -> Result<(ConnectionField, GaugeField)> {
    let rect_q = rect.clone();
    let field_q = field.clone();
    let q = GaugeField::new(Arc::new(move |p: &[f64]| {
        // rectangle coordinates of p
        let rel: Vec<f64> = p.iter().zip(&rect_q.origin).map(|(x, o)| x - o).collect();
        let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>();
        let x0 = dot(&rel, &rect_q.axis0);
        let x1 = dot(&rel, &rect_q.axis1);
        let alpha = Path::polyline(&[
            rect_q.embed(x0, x1),
            rect_q.embed(0.0, x1),
            rect_q.embed(0.0, 0.0),
        ])
        .expect("alpha path is continuous");
        parallel_transport(&field_q, &alpha, pt_steps).expect("transport along alpha")
    }));

    // dQ by central finite differences; each evaluation is an ODE solve, so
    // the step is kept well above integrator noise.
    let h = 1e-5 * (rect.a * rect.a + rect.b * rect.b).sqrt();
    let qd = q.clone();
    let dim = field.dim;
    let dq = Arc::new(move |p: &[f64]| {
        (0..dim)
            .map(|i| {
                let mut pp = p.to_vec();
                let mut pm = p.to_vec();
                pp[i] += h;
                pm[i] -= h;
                (qd.eval(&pp).entries() - qd.eval(&pm).entries()) / (2.0 * h)
            })
            .collect::<Vec<_>>()
    });

    let transformed = crate::gauge::gauge_transform(field, &q, dq)?;

    // gauge-condition check on a 16x16 grid
    let mut worst: f64 = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            let x0 = rect.a * (i as f64 + 0.5) / 16.0;
            let x1 = rect.b * (j as f64 + 0.5) / 16.0;
            let a = transformed.eval(&rect.embed(x0, x1));
            worst = worst.max(a[0].norm());
        }
    }
    for j in 0..16 {
        let x1 = rect.b * (j as f64 + 0.5) / 16.0;
        let a = transformed.eval(&rect.embed(0.0, x1));
        worst = worst.max(a[1].norm());
    }
    if worst > 1e-7 {
        return Err(Error::GaugeCondition {
            detail: format!("max |A'_0| (and |A'_1(0,.)|) on the grid is {worst:.3e}"),
        });
    }
    Ok((transformed, q))
}

/// Naive defect ||Hol(dT_h) - I + int_{T_h} F|| (no transports) for squares
/// of side h at a fixed corner. Returns (h, defect) pairs.
pub fn defect_order_scan(
    field: &ConnectionField,
    corner: &[f64],
    h_list: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let rect = Rectangle::new(
            corner.to_vec(),
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            h,
            h,
        )?;
        let hol = holonomy(field, &rect.boundary(), 128)?;
        let n = field.n;
        let fd = fd_step_for(&rect);
        let quad = QuadratureRule2D::tensor_gauss(8, h, h);
        let mut int_f = DMatrix::<f64>::zeros(n, n);
        for &(x, w) in &quad.nodes {
            let f = curvature(field, &rect.embed(x[0], x[1]), fd)?;
            int_f += curvature_on_pair(&f, &rect.axis0, &rect.axis1) * w;
        }
        let defect = (hol.entries() - DMatrix::<f64>::identity(n, n) + int_f).norm();
        out.push((h, defect));
    }
    Ok(out)
}

/// Least-squares slope of log(defect) against log(h).
pub fn fitted_slope(pairs: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = pairs
        .iter()
        .filter(|(_, d)| *d > 0.0)
        .map(|(h, d)| (h.ln(), d.ln()))
        .collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
