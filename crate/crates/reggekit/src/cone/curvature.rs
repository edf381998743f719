//! Curvature of a smoothed metric from its jet: Christoffel symbols,
//! Riemann/scalar curvature, volume density, and the Levi-Civita
//! holonomy angle around circles.

use nalgebra::{DMatrix, Matrix2, Vector2};

use super::fan::SectorFan2D;
use super::jet::{smoothed_jet, MetricJet2, MetricJet3, QuadSpec};
use super::mollify::Mollifier;
use crate::error::{Error, Result};
use crate::quad::gauss_legendre_pairs;

/// Christoffel symbols Gamma[k][i][j] and their first derivatives
/// dGamma[l][k][i][j] = d_l Gamma^k_ij from a metric jet given as flat
/// arrays (n-dimensional).
struct Christoffels {
    n: usize,
    gamma: Vec<f64>,
    dgamma: Vec<f64>,
}

impl Christoffels {
    fn idx3(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.n + i) * self.n + j
    }

    fn idx4(&self, l: usize, k: usize, i: usize, j: usize) -> usize {
        ((l * self.n + k) * self.n + i) * self.n + j
    }

    fn g(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[self.idx3(k, i, j)]
    }

    fn dg(&self, l: usize, k: usize, i: usize, j: usize) -> f64 {
        self.dgamma[self.idx4(l, k, i, j)]
    }

    /// sigma: metric, d[i]: d_i sigma, dd[i][j]: d_i d_j sigma.
    fn new(sigma: &DMatrix<f64>, d: &[DMatrix<f64>], dd: &[Vec<DMatrix<f64>>]) -> Result<Self> {
        let n = sigma.nrows();
        let inv = sigma.clone().try_inverse().ok_or(Error::SingularMetric {
            detail: "smoothed metric is not invertible".into(),
        })?;
        if sigma.determinant() <= 0.0 {
            return Err(Error::SingularMetric {
                detail: "smoothed metric has non-positive determinant".into(),
            });
        }
        let mut ch = Christoffels {
            n,
            gamma: vec![0.0; n * n * n],
            dgamma: vec![0.0; n * n * n * n],
        };
        // Gamma^k_ij = 1/2 inv[k][l] (d_i s_lj + d_j s_il - d_l s_ij)
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut v = 0.0;
                    for l in 0..n {
                        v += inv[(k, l)]
                            * (d[i][(l, j)] + d[j][(i, l)] - d[l][(i, j)]);
                    }
                    let id = ch.idx3(k, i, j);
                    ch.gamma[id] = 0.5 * v;
                }
            }
        }
        // d_m inv = -inv (d_m sigma) inv
        let dinv: Vec<DMatrix<f64>> = (0..n).map(|m| -(&inv * &d[m] * &inv)).collect();
        for m in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let mut v = 0.0;
                        for l in 0..n {
                            v += dinv[m][(k, l)]
                                * (d[i][(l, j)] + d[j][(i, l)] - d[l][(i, j)]);
                            v += inv[(k, l)]
                                * (dd[m][i][(l, j)] + dd[m][j][(i, l)] - dd[m][l][(i, j)]);
                        }
                        let id = ch.idx4(m, k, i, j);
                        ch.dgamma[id] = 0.5 * v;
                    }
                }
            }
        }
        Ok(ch)
    }

    /// R^r_{s i j} = d_i G^r_js - d_j G^r_is + G^r_il G^l_js - G^r_jl G^l_is
    fn riemann(&self, r: usize, s: usize, i: usize, j: usize) -> f64 {
        let mut v = self.dg(i, r, j, s) - self.dg(j, r, i, s);
        for l in 0..self.n {
            v += self.g(r, i, l) * self.g(l, j, s) - self.g(r, j, l) * self.g(l, i, s);
        }
        v
    }
}

fn to_dyn<const N: usize>(m: &nalgebra::SMatrix<f64, N, N>) -> DMatrix<f64> {
    DMatrix::from_fn(N, N, |i, j| m[(i, j)])
}

/// Gauss curvature and volume density (kappa, mu) of a 2D metric jet:
/// kappa = R_1212 / det sigma, mu = sqrt(det sigma).
pub fn curvature_density(jet: &MetricJet2) -> Result<(f64, f64)> {
    let sigma = to_dyn(&jet.sigma);
    let d: Vec<DMatrix<f64>> = jet.d.iter().map(to_dyn).collect();
    let dd: Vec<Vec<DMatrix<f64>>> = jet
        .dd
        .iter()
        .map(|row| row.iter().map(to_dyn).collect())
        .collect();
    let det = sigma.determinant();
    if det <= 0.0 {
        return Err(Error::SingularMetric {
            detail: format!("det sigma = {det}"),
        });
    }
    let ch = Christoffels::new(&sigma, &d, &dd)?;
    // R_{1212} in 0-based indices: sigma_{0 r} R^r_{1 0 1}
    let mut r0101 = 0.0;
    for r in 0..2 {
        r0101 += sigma[(0, r)] * ch.riemann(r, 1, 0, 1);
    }
    Ok((r0101 / det, det.sqrt()))
}

/// Half the scalar curvature and the volume density of a 3D metric jet;
/// the normalization makes a product cone reproduce the 2D Gauss value.
pub fn curvature_density_3d(jet: &MetricJet3) -> Result<(f64, f64)> {
    let sigma = to_dyn(&jet.sigma);
    let d: Vec<DMatrix<f64>> = jet.d.iter().map(to_dyn).collect();
    let dd: Vec<Vec<DMatrix<f64>>> = jet
        .dd
        .iter()
        .map(|row| row.iter().map(to_dyn).collect())
        .collect();
    let det = sigma.determinant();
    if det <= 0.0 {
        return Err(Error::SingularMetric {
            detail: format!("det sigma = {det}"),
        });
    }
    let inv = sigma.clone().try_inverse().unwrap();
    let ch = Christoffels::new(&sigma, &d, &dd)?;
    // scalar = inv^{s j} Ricci_{s j}, Ricci_{s j} = R^i_{s i j}
    let mut scalar = 0.0;
    for s in 0..3 {
        for j in 0..3 {
            let mut ric = 0.0;
            for i in 0..3 {
                ric += ch.riemann(i, s, i, j);
            }
            scalar += inv[(s, j)] * ric;
        }
    }
    Ok((0.5 * scalar, det.sqrt()))
}

/// Max-norm of Gamma applied to the vector f: max_{i,k} |Gamma^k_{i j} f^j|
/// (covariant-constancy residual of a field with zero coordinate
/// derivative).
pub fn christoffel_action_norm(jet: &MetricJet3, f: &nalgebra::Vector3<f64>) -> Result<f64> {
    let sigma = to_dyn(&jet.sigma);
    let d: Vec<DMatrix<f64>> = jet.d.iter().map(to_dyn).collect();
    let dd: Vec<Vec<DMatrix<f64>>> = jet
        .dd
        .iter()
        .map(|row| row.iter().map(to_dyn).collect())
        .collect();
    let ch = Christoffels::new(&sigma, &d, &dd)?;
    let mut worst = 0.0f64;
    for i in 0..3 {
        for k in 0..3 {
            let mut v = 0.0;
            for j in 0..3 {
                v += ch.g(k, i, j) * f[j];
            }
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}

/// Levi-Civita connection coefficient a(u) at a point, where A = a J in
/// the sigma-orthonormal frame (e1, e2) built by Gram-Schmidt from the
/// reference basis: a(u) = sigma(nabla_u e1, e2).
fn connection_coefficient(jet: &MetricJet2, u: &Vector2<f64>) -> Result<f64> {
    let s = &jet.sigma;
    let det = s.determinant();
    if det <= 0.0 || s[(0, 0)] <= 0.0 {
        return Err(Error::SingularMetric {
            detail: format!("det sigma = {det}"),
        });
    }
    // frame components and their coordinate derivatives from the jet:
    // e1 = (1/sqrt(s00), 0), e2 = (-s01, s00)/sqrt(s00 det)
    let frame = |s: &Matrix2<f64>| -> [Vector2<f64>; 2] {
        let a = 1.0 / s[(0, 0)].sqrt();
        let n = (s[(0, 0)] * s.determinant()).sqrt();
        [Vector2::new(a, 0.0), Vector2::new(-s[(0, 1)] / n, s[(0, 0)] / n)]
    };
    let [e1, e2] = frame(s);
    // d_i e1 by differentiating a = s00^{-1/2}
    let de1: [Vector2<f64>; 2] = [0, 1].map(|i| {
        Vector2::new(-0.5 * jet.d[i][(0, 0)] / s[(0, 0)].powf(1.5), 0.0)
    });
    let sigma = to_dyn(s);
    let d: Vec<DMatrix<f64>> = jet.d.iter().map(to_dyn).collect();
    let dd: Vec<Vec<DMatrix<f64>>> = jet
        .dd
        .iter()
        .map(|row| row.iter().map(to_dyn).collect())
        .collect();
    let ch = Christoffels::new(&sigma, &d, &dd)?;
    // a_i = sigma( d_i e1 + Gamma_i e1, e2 )
    let mut a = Vector2::zeros();
    for i in 0..2 {
        let mut cov = de1[i];
        for k in 0..2 {
            for j in 0..2 {
                cov[k] += ch.g(k, i, j) * e1[j];
            }
        }
        a[i] = (s * cov).dot(&e2);
    }
    Ok(a.dot(u))
}

/// Rotation angle of the Levi-Civita holonomy of sigma_eps around the
/// origin-centered circle of radius big_r, as the unreduced integral
/// -closed-integral of a: equal to the integral of kappa mu over the
/// disk, hence to the deficit when the circle encloses the curvature
/// support.
pub fn lc_holonomy_angle(
    fan: &SectorFan2D,
    eps: f64,
    big_r: f64,
    steps: usize,
    quad: &QuadSpec,
) -> Result<f64> {
    let support = fan.support_radius(eps);
    if big_r <= support {
        return Err(Error::RadiusTooSmall {
            radius: big_r,
            support,
        });
    }
    let moll = Mollifier::new(2, eps);
    let rule = gauss_legendre_pairs(4);
    let mut angle = 0.0;
    let tau = 2.0 * std::f64::consts::PI;
    for k in 0..steps {
        let (t0, t1) = (tau * k as f64 / steps as f64, tau * (k + 1) as f64 / steps as f64);
        for &(n, w) in &rule {
            let t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * n;
            let wt = 0.5 * (t1 - t0) * w;
            let x = big_r * Vector2::new(t.cos(), t.sin());
            let v = big_r * Vector2::new(-t.sin(), t.cos());
            let jet = smoothed_jet(fan, &moll, &x, quad)?;
            angle -= wt * connection_coefficient(&jet, &v)?;
        }
    }
    Ok(angle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Matrix3;

    /// Analytic jet of the round-sphere metric (stereographic chart):
    /// sigma = lambda^2 I with lambda = 1/(1 + |x|^2/(4 R^2)); Gauss
    /// curvature 1/R^2.
    fn sphere_jet(x: &Vector2<f64>, r: f64) -> MetricJet2 {
        let q = 1.0 / (4.0 * r * r);
        let lam = |p: &Vector2<f64>| 1.0 / (1.0 + q * p.norm_squared());
        let l = lam(x);
        // d_i lambda = -2 q x_i lambda^2
        let dl = [-2.0 * q * x.x * l * l, -2.0 * q * x.y * l * l];
        // d_j d_i lambda = -2 q delta_ij lambda^2 - 4 q x_i lambda d_j lambda
        let mut ddl = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let delta = if i == j { 1.0 } else { 0.0 };
                ddl[j][i] = -2.0 * q * delta * l * l - 4.0 * q * x[i] * l * dl[j];
            }
        }
        let id = Matrix2::identity();
        let sigma = l * l * id;
        let d = [2.0 * l * dl[0] * id, 2.0 * l * dl[1] * id];
        let mut dd = [[Matrix2::zeros(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                dd[i][j] = (2.0 * dl[i] * dl[j] + 2.0 * l * ddl[i][j]) * id;
            }
        }
        MetricJet2 { sigma, d, dd }
    }

    #[test]
    fn flat_jet_has_zero_curvature() {
        let jet = MetricJet2 {
            sigma: Matrix2::identity(),
            d: [Matrix2::zeros(); 2],
            dd: [[Matrix2::zeros(); 2]; 2],
        };
        let (kappa, mu) = curvature_density(&jet).unwrap();
        assert_eq!(kappa, 0.0);
        assert!((mu - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_patch_curvature() {
        for r in [1.0, 2.5] {
            for x in [Vector2::new(0.3, -0.2), Vector2::new(1.0, 0.7)] {
                let jet = sphere_jet(&x, r);
                let (kappa, mu) = curvature_density(&jet).unwrap();
                assert!(
                    (kappa - 1.0 / (r * r)).abs() < 1e-8,
                    "kappa {kappa} vs {}",
                    1.0 / (r * r)
                );
                let lam = 1.0 / (1.0 + x.norm_squared() / (4.0 * r * r));
                assert!((mu - lam * lam).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn product_sphere_3d_scalar_is_gauss_value() {
        // metric = sphere_2d (+) dz^2: scalar curvature = 2/R^2, and the
        // 3D convention (half the scalar) reproduces the 2D Gauss value
        let r = 1.7;
        let x = Vector2::new(0.4, 0.25);
        let j2 = sphere_jet(&x, r);
        let lift = |m: &Matrix2<f64>| {
            let mut out = Matrix3::zeros();
            out.fixed_view_mut::<2, 2>(0, 0).copy_from(m);
            out
        };
        let mut sigma = lift(&j2.sigma);
        sigma[(2, 2)] = 1.0;
        let d = [lift(&j2.d[0]), lift(&j2.d[1]), Matrix3::zeros()];
        let z = Matrix3::zeros();
        let dd = [
            [lift(&j2.dd[0][0]), lift(&j2.dd[0][1]), z],
            [lift(&j2.dd[1][0]), lift(&j2.dd[1][1]), z],
            [z, z, z],
        ];
        let j3 = MetricJet3 { sigma, d, dd };
        let (k3, mu3) = curvature_density_3d(&j3).unwrap();
        let (k2, mu2) = curvature_density(&j2).unwrap();
        assert!((k3 - k2).abs() < 1e-8, "{k3} vs {k2}");
        assert!((mu3 - mu2).abs() < 1e-12);
    }

    #[test]
    fn singular_jet_rejected() {
        let jet = MetricJet2 {
            sigma: Matrix2::new(1.0, 1.0, 1.0, 1.0),
            d: [Matrix2::zeros(); 2],
            dd: [[Matrix2::zeros(); 2]; 2],
        };
        assert!(matches!(
            curvature_density(&jet),
            Err(Error::SingularMetric { .. })
        ));
    }

    #[test]
    fn flat_fan_holonomy_vanishes() {
        let fan = SectorFan2D::flat();
        let angle = lc_holonomy_angle(&fan, 0.5, 1.5, 48, &QuadSpec::default()).unwrap();
        assert!(angle.abs() < 1e-8, "{angle}");
    }

    #[test]
    fn radius_must_exceed_support() {
        let fan = SectorFan2D::flat();
        assert!(matches!(
            lc_holonomy_angle(&fan, 1.0, 1.2, 16, &QuadSpec::default()),
            Err(Error::RadiusTooSmall { .. })
        ));
    }

    #[test]
    fn connection_coefficient_of_sphere_jet() {
        // on a conformal metric lambda^2 I the connection coefficient in
        // the orthonormal frame is a(u) = -d_2(log lambda) u_1 +
        // d_1(log lambda) u_2
        let r = 2.0;
        let x = Vector2::new(0.5, -0.3);
        let jet = sphere_jet(&x, r);
        let q = 1.0 / (4.0 * r * r);
        let l = 1.0 / (1.0 + q * x.norm_squared());
        let dlog = Vector2::new(-2.0 * q * x.x * l, -2.0 * q * x.y * l);
        for u in [Vector2::new(1.0, 0.0), Vector2::new(0.3, -1.2)] {
            let a = connection_coefficient(&jet, &u).unwrap();
            let expect = -dlog.y * u.x + dlog.x * u.y;
            assert!((a - expect).abs() < 1e-12, "{a} vs {expect}");
        }
    }
}
