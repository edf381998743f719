//! Connection one-forms, gauge fields, gauge transforms and curvature.

use std::sync::Arc;

use nalgebra::DMatrix;

use super::matrix::{AlgebraElement, MatrixGroupElement};
use crate::error::{Error, Result};

type EvalFn = Arc<dyn Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync>;
/// All partials: result[i][j] = d_i A_j.
type DEvalFn = Arc<dyn Fn(&[f64]) -> Vec<Vec<DMatrix<f64>>> + Send + Sync>;
type GaugeEvalFn = Arc<dyn Fn(&[f64]) -> MatrixGroupElement + Send + Sync>;
/// result[i] = d_i Q (plain matrices, not group elements).
type GaugeDerivFn = Arc<dyn Fn(&[f64]) -> Vec<DMatrix<f64>> + Send + Sync>;

/// Axis-aligned box domain.
#[derive(Debug, Clone)]
pub struct Domain {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl Domain {
    pub fn contains(&self, p: &[f64], margin: f64) -> bool {
        p.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (l, h))| *x >= l - margin && *x <= h + margin)
    }

    pub fn diameter(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l) * (h - l))
            .sum::<f64>()
            .sqrt()
    }
}

/// A g-valued connection one-form A on a d-dimensional box (or all of R^d),
/// given by its coefficient tuple A_0..A_{d-1} and an optional analytic
/// derivative callback.
#[derive(Clone)]
pub struct ConnectionField {
    pub dim: usize,
    pub n: usize,
    pub domain: Option<Domain>,
    eval: EvalFn,
    d_eval: Option<DEvalFn>,
}

impl ConnectionField {
    pub fn new(dim: usize, n: usize, eval: EvalFn, d_eval: Option<DEvalFn>) -> Self {
        ConnectionField {
            dim,
            n,
            domain: None,
            eval,
            d_eval,
        }
    }

    pub fn with_domain(mut self, lo: Vec<f64>, hi: Vec<f64>) -> Self {
        self.domain = Some(Domain { lo, hi });
        self
    }

    /// The zero connection.
    pub fn zero(dim: usize, n: usize) -> Self {
        ConnectionField::new(
            dim,
            n,
            Arc::new(move |_| (0..dim).map(|_| DMatrix::zeros(n, n)).collect()),
            Some(Arc::new(move |_| {
                (0..dim)
                    .map(|_| (0..dim).map(|_| DMatrix::zeros(n, n)).collect())
                    .collect()
            })),
        )
    }

    pub fn check_point(&self, p: &[f64]) -> Result<()> {
        if let Some(dom) = &self.domain {
            if !dom.contains(p, 1e-12) {
                return Err(Error::Domain {
                    point: p.to_vec(),
                    detail: "outside the field's box domain".into(),
                });
            }
        }
        Ok(())
    }

    /// Coefficients A_0..A_{d-1} at a point.
    pub fn eval(&self, p: &[f64]) -> Vec<DMatrix<f64>> {
        (self.eval)(p)
    }

    pub fn eval_algebra(&self, p: &[f64]) -> Vec<AlgebraElement> {
        self.eval(p).into_iter().map(AlgebraElement::new).collect()
    }

    pub fn has_derivative(&self) -> bool {
        self.d_eval.is_some()
    }

    /// All partials d_i A_j; analytic if available, else 4th-order central
    /// differences with the given step.
    pub fn partials(&self, p: &[f64], fd_step: f64) -> Result<Vec<Vec<DMatrix<f64>>>> {
        if let Some(d) = &self.d_eval {
            return Ok(d(p));
        }
        if let Some(dom) = &self.domain {
            if !dom.contains(p, -2.0 * fd_step) {
                return Err(Error::Domain {
                    point: p.to_vec(),
                    detail: format!("closer than {} to the boundary", 2.0 * fd_step),
                });
            }
        }
        let mut out = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let sample = |s: f64| -> Vec<DMatrix<f64>> {
                let mut q = p.to_vec();
                q[i] += s;
                self.eval(&q)
            };
            let (p2, p1, m1, m2) = (
                sample(2.0 * fd_step),
                sample(fd_step),
                sample(-fd_step),
                sample(-2.0 * fd_step),
            );
            let row: Vec<DMatrix<f64>> = (0..self.dim)
                .map(|j| {
                    (-&p2[j] + &p1[j] * 8.0 - &m1[j] * 8.0 + &m2[j]) / (12.0 * fd_step)
                })
                .collect();
            out.push(row);
        }
        Ok(out)
    }
}

/// A pointwise group-valued field Q.
#[derive(Clone)]
pub struct GaugeField {
    pub eval: GaugeEvalFn,
}

impl GaugeField {
    pub fn new(eval: GaugeEvalFn) -> Self {
        GaugeField { eval }
    }

    pub fn eval(&self, p: &[f64]) -> MatrixGroupElement {
        (self.eval)(p)
    }
}

/// Deterministic interior sample points for consistency checks: a fixed
/// low-discrepancy-ish set inside the field's domain (unit box if none).
fn sample_points(field: &ConnectionField, count: usize) -> Vec<Vec<f64>> {
    let (lo, hi) = match &field.domain {
        Some(d) => (d.lo.clone(), d.hi.clone()),
        None => (vec![0.0; field.dim], vec![1.0; field.dim]),
    };
    let golden = [0.618_033_988_749_894_8, 0.754_877_666_246_692_9, 0.819_172_513_396_164_4];
    (0..count)
        .map(|k| {
            (0..field.dim)
                .map(|i| {
                    let t = ((k + 1) as f64 * golden[i % 3]).fract();
                    // keep a margin for finite differences
                    lo[i] + (0.1 + 0.8 * t) * (hi[i] - lo[i])
                })
                .collect()
        })
        .collect()
}

/// GT_Q(A) = Q A Q^-1 - (DQ) Q^-1.
///
/// The supplied derivative dQ is validated against central finite
/// differences of Q at 8 interior sample points (1e-6 relative).
pub fn gauge_transform(
    field: &ConnectionField,
    q: &GaugeField,
    dq: GaugeDerivFn,
) -> Result<ConnectionField> {
    let scale = field
        .domain
        .as_ref()
        .map(|d| d.diameter())
        .unwrap_or(1.0)
        .max(1e-6);
    let h = 1e-5 * scale;
    for p in sample_points(field, 8) {
        let dq_given = dq(&p);
        for i in 0..field.dim {
            let mut pp = p.clone();
            let mut pm = p.clone();
            pp[i] += h;
            pm[i] -= h;
            let fd = (q.eval(&pp).entries() - q.eval(&pm).entries()) / (2.0 * h);
            let denom = dq_given[i].norm().max(1.0);
            let defect = (&fd - &dq_given[i]).norm() / denom;
            if defect > 1e-6 {
                return Err(Error::InconsistentDerivative { point: p, defect });
            }
        }
    }

    let a_eval = field.clone();
    let q_eval = q.clone();
    let dq_v = dq.clone();
    let dim = field.dim;
    let eval: EvalFn = Arc::new(move |p: &[f64]| {
        let qm = q_eval.eval(p);
        let qi = qm.inverse();
        let a = a_eval.eval(p);
        let dqs = dq_v(p);
        (0..dim)
            .map(|i| {
                qm.entries() * &a[i] * qi.entries() - &dqs[i] * qi.entries()
            })
            .collect()
    });
    let mut out = ConnectionField::new(field.dim, field.n, eval, None);
    out.domain = field.domain.clone();
    Ok(out)
}

/// Curvature coefficients F_ij = d_i A_j - d_j A_i + [A_i, A_j].
pub fn curvature(
    field: &ConnectionField,
    p: &[f64],
    fd_step: f64,
) -> Result<Vec<Vec<AlgebraElement>>> {
    field.check_point(p)?;
    let a = field.eval(p);
    let da = field.partials(p, fd_step)?;
    let d = field.dim;
    let mut f = vec![vec![AlgebraElement::zero(field.n); d]; d];
    for i in 0..d {
        for j in 0..d {
            let m = &da[i][j] - &da[j][i] + &a[i] * &a[j] - &a[j] * &a[i];
            f[i][j] = AlgebraElement::new(m);
        }
    }
    Ok(f)
}

/// Evaluate the 2-form F on an (ordered) pair of tangent vectors.
pub fn curvature_on_pair(f: &[Vec<AlgebraElement>], u: &[f64], v: &[f64]) -> DMatrix<f64> {
    let n = f[0][0].n();
    let mut out = DMatrix::zeros(n, n);
    for (i, fi) in f.iter().enumerate() {
        for (j, fij) in fi.iter().enumerate() {
            out += &fij.entries * (u[i] * v[j]);
        }
    }
    out
}
