//! The standard bump mollifier, its derivatives up to second order, and
//! the marginal kernel obtained by integrating out the hinge coordinate
//! in 3D.

use std::sync::OnceLock;

use crate::quad::gauss_legendre_on_pairs;

/// Radial profile g(s) = exp(-1/(1-s)) of the bump in s = |u|^2, with its
/// first two s-derivatives; zero (with all derivatives) for s >= 1.
fn profile(s: f64) -> (f64, f64, f64) {
    if s >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let t = 1.0 - s;
    let g = (-1.0 / t).exp();
    let g1 = g * (-1.0 / (t * t));
    let g2 = g * (1.0 / (t * t * t * t) - 2.0 / (t * t * t));
    (g, g1, g2)
}

/// Unnormalized bump value at u together with gradient and Hessian.
///
/// With s = |u|^2: grad = 2 u g'(s), hess = 2 delta g'(s) + 4 u u^T g''(s).
fn bump_jet(u: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
    let d = u.len();
    let s: f64 = u.iter().map(|x| x * x).sum();
    let (g, g1, g2) = profile(s);
    let grad: Vec<f64> = u.iter().map(|x| 2.0 * x * g1).collect();
    let mut hess = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in 0..d {
            hess[i][j] = 4.0 * u[i] * u[j] * g2 + if i == j { 2.0 * g1 } else { 0.0 };
        }
    }
    (g, grad, hess)
}

fn normalization(dim: usize) -> f64 {
    static C2: OnceLock<f64> = OnceLock::new();
    static C3: OnceLock<f64> = OnceLock::new();
    let compute = |dim: usize| -> f64 {
        // integral of the radial bump over the unit ball
        let rule = gauss_legendre_on_pairs(64, 0.0, 1.0);
        let total: f64 = rule
            .iter()
            .map(|&(r, w)| {
                let (g, _, _) = profile(r * r);
                let shell = match dim {
                    2 => 2.0 * std::f64::consts::PI * r,
                    3 => 4.0 * std::f64::consts::PI * r * r,
                    _ => unreachable!(),
                };
                w * g * shell
            })
            .sum();
        1.0 / total
    };
    match dim {
        2 => *C2.get_or_init(|| compute(2)),
        3 => *C3.get_or_init(|| compute(3)),
        _ => panic!("mollifier implemented for dimensions 2 and 3"),
    }
}

/// The scaled mollifier phi_eps(y) = eps^-d c g(|y/eps|^2), unit integral,
/// support exactly the eps-ball.
#[derive(Debug, Clone, Copy)]
pub struct Mollifier {
    pub dim: usize,
    pub eps: f64,
    c: f64,
}

impl Mollifier {
    pub fn new(dim: usize, eps: f64) -> Self {
        assert!(dim == 2 || dim == 3, "dimension 2 or 3");
        assert!(eps > 0.0);
        Self {
            dim,
            eps,
            c: normalization(dim),
        }
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        let u: Vec<f64> = y.iter().map(|x| x / self.eps).collect();
        let s: f64 = u.iter().map(|x| x * x).sum();
        self.c * profile(s).0 / self.eps.powi(self.dim as i32)
    }

    /// (phi, grad phi, hess phi) at y, with the eps scaling applied.
    pub fn jet(&self, y: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let u: Vec<f64> = y.iter().map(|x| x / self.eps).collect();
        let (g, grad, hess) = bump_jet(&u);
        let s0 = self.c / self.eps.powi(self.dim as i32);
        let s1 = s0 / self.eps;
        let s2 = s1 / self.eps;
        (
            s0 * g,
            grad.iter().map(|v| s1 * v).collect(),
            hess.iter()
                .map(|row| row.iter().map(|v| s2 * v).collect())
                .collect(),
        )
    }
}

/// Transverse kernel of a 3D mollifier around a z-independent metric:
/// K(w) = int phi_eps(w, t) dt, with derivatives taken under the
/// integral. Support is the eps-disk in the transverse plane.
#[derive(Debug, Clone)]
pub struct MarginalKernel {
    moll: Mollifier,
    rule: Vec<(f64, f64)>,
}

impl MarginalKernel {
    pub fn new(eps: f64) -> Self {
        Self {
            moll: Mollifier::new(3, eps),
            rule: gauss_legendre_on_pairs(48, -eps, eps),
        }
    }

    pub fn eps(&self) -> f64 {
        self.moll.eps
    }

    /// (K, grad K, hess K) at the transverse point w, derivatives in the
    /// two transverse coordinates only.
    pub fn jet(&self, w: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let mut k = 0.0;
        let mut grad = vec![0.0; 2];
        let mut hess = vec![vec![0.0; 2]; 2];
        for &(t, wt) in &self.rule {
            let (g, gr, h) = self.moll.jet(&[w[0], w[1], t]);
            k += wt * g;
            for i in 0..2 {
                grad[i] += wt * gr[i];
                for j in 0..2 {
                    hess[i][j] += wt * h[i][j];
                }
            }
        }
        (k, grad, hess)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_legendre_on_pairs;

    #[test]
    fn unit_integral_2d_and_3d() {
        for dim in [2usize, 3] {
            let m = Mollifier::new(dim, 0.7);
            // polar integral with an independent radial rule
            let rule = gauss_legendre_on_pairs(80, 0.0, 0.7);
            let total: f64 = rule
                .iter()
                .map(|&(r, w)| {
                    let v = m.value(&vec![r, 0.0, 0.0][..dim]);
                    let shell = match dim {
                        2 => 2.0 * std::f64::consts::PI * r,
                        _ => 4.0 * std::f64::consts::PI * r * r,
                    };
                    w * v * shell
                })
                .sum();
            assert!((total - 1.0).abs() < 1e-10, "dim {dim}: {total}");
        }
    }

    #[test]
    fn support_is_the_eps_ball() {
        let m = Mollifier::new(2, 0.5);
        assert_eq!(m.value(&[0.5, 0.0]), 0.0);
        assert_eq!(m.value(&[0.36, 0.36]), 0.0);
        assert!(m.value(&[0.3, 0.3]) > 0.0);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let m = Mollifier::new(2, 1.3);
        let y = [0.4, -0.25];
        let (_, grad, hess) = m.jet(&y);
        let h = 1e-5;
        for i in 0..2 {
            let mut yp = y;
            let mut ym = y;
            yp[i] += h;
            ym[i] -= h;
            let fd = (m.value(&yp) - m.value(&ym)) / (2.0 * h);
            assert!((grad[i] - fd).abs() < 1e-8, "grad[{i}] {} vs {fd}", grad[i]);
            for j in 0..2 {
                let mut p1 = y;
                let mut p2 = y;
                let mut p3 = y;
                let mut p4 = y;
                p1[i] += h;
                p1[j] += h;
                p2[i] += h;
                p2[j] -= h;
                p3[i] -= h;
                p3[j] += h;
                p4[i] -= h;
                p4[j] -= h;
                let fd2 = (m.value(&p1) - m.value(&p2) - m.value(&p3) + m.value(&p4))
                    / (4.0 * h * h);
                assert!(
                    (hess[i][j] - fd2).abs() < 1e-6,
                    "hess[{i}][{j}] {} vs {fd2}",
                    hess[i][j]
                );
            }
        }
    }

    #[test]
    fn marginal_kernel_integrates_to_one() {
        let k = MarginalKernel::new(0.8);
        // 2D polar integral of K over the eps-disk
        let rule = gauss_legendre_on_pairs(80, 0.0, 0.8);
        let ang = gauss_legendre_on_pairs(16, 0.0, 2.0 * std::f64::consts::PI);
        let total: f64 = rule
            .iter()
            .flat_map(|&(r, wr)| {
                ang.iter().map(move |&(a, wa)| {
                    (r, wr, a, wa)
                })
            })
            .map(|(r, wr, a, wa)| wr * wa * r * k.jet(&[r * a.cos(), r * a.sin()]).0)
            .sum();
        assert!((total - 1.0).abs() < 1e-9, "{total}");
    }

    #[test]
    fn marginal_kernel_gradient_matches_fd() {
        let k = MarginalKernel::new(1.0);
        let w = [0.3, 0.2];
        let (_, grad, _) = k.jet(&w);
        let h = 1e-5;
        for i in 0..2 {
            let mut wp = w;
            let mut wm = w;
            wp[i] += h;
            wm[i] -= h;
            let fd = (k.jet(&wp).0 - k.jet(&wm).0) / (2.0 * h);
            assert!((grad[i] - fd).abs() < 1e-7);
        }
    }
}
