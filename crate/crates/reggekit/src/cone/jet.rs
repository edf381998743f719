//! Smoothed metric jets sigma_eps = phi_eps * rho and their first and
//! second derivatives, computed by region-split polar quadrature so every
//! quadrature cell sees a smooth integrand.

use nalgebra::{Matrix2, Matrix3, Vector2};

use super::fan::{HingeFan3D, SectorFan2D};
use super::mollify::{MarginalKernel, Mollifier};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre_pairs;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Polar quadrature resolution for the convolution integrals.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSpec {
    pub angular_order: usize,
    pub radial_order: usize,
    /// equal subdivisions of each smooth radial piece (the bump's second
    /// derivatives need composite rules for 1e-10 accuracy)
    pub radial_segments: usize,
}

impl Default for QuadSpec {
    fn default() -> Self {
        Self {
            angular_order: 24,
            radial_order: 48,
            radial_segments: 4,
        }
    }
}

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if self.angular_order < 4 || self.radial_order < 4 || self.radial_segments < 1 {
            return Err(Error::QuadratureResolution {
                detail: format!(
                    "orders ({}, {}) below the minimum of 4",
                    self.angular_order, self.radial_order
                ),
            });
        }
        Ok(())
    }
}

/// Value and first two derivatives of the smoothed 2D metric at a point.
#[derive(Debug, Clone)]
pub struct MetricJet2 {
    pub sigma: Matrix2<f64>,
    pub d: [Matrix2<f64>; 2],
    pub dd: [[Matrix2<f64>; 2]; 2],
}

/// Value and first two derivatives of the smoothed 3D metric; the hinge
/// coordinate is z, along which the metric is constant.
#[derive(Debug, Clone)]
pub struct MetricJet3 {
    pub sigma: Matrix3<f64>,
    pub d: [Matrix3<f64>; 3],
    pub dd: [[Matrix3<f64>; 3]; 3],
}

/// Crossing radii s in (0, cap) of the ray x + s u with the half-lines at
/// the given angles.
fn ray_crossings(x: &Vector2<f64>, u: &Vector2<f64>, angles: &[f64], cap: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for &a in angles {
        let d = Vector2::new(a.cos(), a.sin());
        // solve s u - t d = -x
        let det = -u.x * d.y + u.y * d.x;
        if det.abs() < 1e-14 {
            continue;
        }
        let s = (-x.x * (-d.y) - (-d.x) * (-x.y)) / det;
        let t = (u.x * (-x.y) - u.y * (-x.x)) / det;
        if s > 1e-13 && s < cap - 1e-13 && t > 0.0 {
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

/// Angles (as seen from x) at which the radial crossing structure changes:
/// half-line directions and their opposites, the direction through the
/// cone vertex, and ball-exit points of each half-line.
fn critical_angles(x: &Vector2<f64>, angles: &[f64], eps: f64) -> Vec<f64> {
    let mut crit: Vec<f64> = Vec::new();
    let mut push = |a: f64| crit.push(a.rem_euclid(TAU));
    for &a in angles {
        push(a);
        push(a + std::f64::consts::PI);
        // intersections of {t (cos a, sin a), t >= 0} with the circle
        // |z - x| = eps
        let d = Vector2::new(a.cos(), a.sin());
        let b = d.dot(x);
        let disc = b * b - (x.norm_squared() - eps * eps);
        if disc > 0.0 {
            for t in [b - disc.sqrt(), b + disc.sqrt()] {
                if t > 0.0 {
                    let z = t * d - x;
                    push(z.y.atan2(z.x));
                }
            }
        }
    }
    if x.norm() > 1e-14 {
        push((-x).y.atan2((-x).x));
    }
    crit.sort_by(|a, b| a.partial_cmp(b).unwrap());
    crit.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if let (Some(&first), Some(&last)) = (crit.first(), crit.last()) {
        if (last - first - TAU).abs() < 1e-12 {
            crit.pop();
        }
    }
    crit
}

/// Shared polar-quadrature driver: integrates kernel jets against the
/// piecewise-constant matrix field `metric_of` over the eps-ball around x.
/// Returns (sigma, d sigma, d^2 sigma) as flat entry vectors of length
/// n*n, 2*n*n, 4*n*n.
fn convolve<const N: usize>(
    x: &Vector2<f64>,
    eps: f64,
    angles: &[f64],
    metric_of: &dyn Fn(&Vector2<f64>) -> nalgebra::SMatrix<f64, N, N>,
    kernel_jet: &dyn Fn(&[f64; 2]) -> (f64, [f64; 2], [[f64; 2]; 2]),
    quad: &QuadSpec,
) -> (
    nalgebra::SMatrix<f64, N, N>,
    [nalgebra::SMatrix<f64, N, N>; 2],
    [[nalgebra::SMatrix<f64, N, N>; 2]; 2],
) {
    type M<const N: usize> = nalgebra::SMatrix<f64, N, N>;
    let mut sigma = M::<N>::zeros();
    let mut d = [M::<N>::zeros(); 2];
    let mut dd = [[M::<N>::zeros(); 2]; 2];

    let mut crit = critical_angles(x, angles, eps);
    if crit.is_empty() {
        crit.push(0.0);
    }
    let m = crit.len();
    let ang_rule = gauss_legendre_pairs(quad.angular_order);
    let rad_rule = gauss_legendre_pairs(quad.radial_order);

    for k in 0..m {
        let a = crit[k];
        let b = if k + 1 < m { crit[k + 1] } else { crit[0] + TAU };
        if b - a < 1e-13 {
            continue;
        }
        for &(na, wa) in &ang_rule {
            let psi = 0.5 * (a + b) + 0.5 * (b - a) * na;
            let wpsi = 0.5 * (b - a) * wa;
            let u = Vector2::new(psi.cos(), psi.sin());
            let mut cuts = ray_crossings(x, &u, angles, eps);
            cuts.insert(0, 0.0);
            cuts.push(eps);
            for piece in cuts.windows(2) {
                if piece[1] - piece[0] < 1e-14 {
                    continue;
                }
                let mid = *x + 0.5 * (piece[0] + piece[1]) * u;
                let rho = metric_of(&mid);
                for sub in 0..quad.radial_segments {
                    let frac0 = sub as f64 / quad.radial_segments as f64;
                    let frac1 = (sub + 1) as f64 / quad.radial_segments as f64;
                    let s0 = piece[0] + frac0 * (piece[1] - piece[0]);
                    let s1 = piece[0] + frac1 * (piece[1] - piece[0]);
                for &(nr, wr) in &rad_rule {
                    let s = 0.5 * (s0 + s1) + 0.5 * (s1 - s0) * nr;
                    let w = wpsi * 0.5 * (s1 - s0) * wr * s;
                    let y = [-s * u.x, -s * u.y];
                    let (kv, kg, kh) = kernel_jet(&y);
                    sigma += w * kv * rho;
                    for i in 0..2 {
                        d[i] += w * kg[i] * rho;
                        for j in 0..2 {
                            dd[i][j] += w * kh[i][j] * rho;
                        }
                    }
                }
                }
            }
        }
    }
    (sigma, d, dd)
}

/// sigma_eps(x) and its first two derivatives for a 2D sector fan.
pub fn smoothed_jet(
    fan: &SectorFan2D,
    moll: &Mollifier,
    x: &Vector2<f64>,
    quad: &QuadSpec,
) -> Result<MetricJet2> {
    assert_eq!(moll.dim, 2, "2D fans take a 2D mollifier");
    quad.validate()?;
    let (sigma, d, dd) = convolve::<2>(
        x,
        moll.eps,
        fan.boundary_angles(),
        &|p| *fan.metric_at(p),
        &|y| {
            let (v, g, h) = moll.jet(y);
            (v, [g[0], g[1]], [[h[0][0], h[0][1]], [h[1][0], h[1][1]]])
        },
        quad,
    );
    Ok(MetricJet2 { sigma, d, dd })
}

/// sigma_eps and derivatives for a 3D hinge fan at transverse position w
/// (the jet is independent of the hinge coordinate; all z-derivatives are
/// zero and are returned as such).
pub fn smoothed_jet_3d(
    fan: &HingeFan3D,
    kernel: &MarginalKernel,
    w: &Vector2<f64>,
    quad: &QuadSpec,
) -> Result<MetricJet3> {
    quad.validate()?;
    let (sigma, d2, dd2) = convolve::<3>(
        w,
        kernel.eps(),
        fan.boundary_angles(),
        &|p| *fan.metric_at(&nalgebra::Vector3::new(p.x, p.y, 0.0)),
        &|y| {
            let (v, g, h) = kernel.jet(y);
            (v, [g[0], g[1]], [[h[0][0], h[0][1]], [h[1][0], h[1][1]]])
        },
        quad,
    );
    let z = Matrix3::zeros();
    Ok(MetricJet3 {
        sigma,
        d: [d2[0], d2[1], z],
        dd: [
            [dd2[0][0], dd2[0][1], z],
            [dd2[1][0], dd2[1][1], z],
            [z, z, z],
        ],
    })
}
