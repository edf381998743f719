//! Matrix group and algebra elements, and the exponential map.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Which group a matrix is expected to live in.
///
/// The SO tags get closed-form exponentials and re-orthonormalization; the
/// generic tag is plain GL(n) with a Pade exponential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupTag {
    So2,
    So3,
    GlnGeneric,
}

/// The standard so(2) generator J = [[0,-1],[1,0]].
pub fn so2_generator() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0])
}

/// so(3) basis element generating rotations about axis k (0,1,2).
pub fn so3_generator(k: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(3, 3);
    let (i, j) = [(1, 2), (2, 0), (0, 1)][k];
    m[(i, j)] = -1.0;
    m[(j, i)] = 1.0;
    m
}

/// An element of the structure group, kept numerically on the group.
#[derive(Debug, Clone)]
pub struct MatrixGroupElement {
    entries: DMatrix<f64>,
    tag: GroupTag,
}

/// A Lie algebra element (skew-symmetric for the SO tags).
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    pub entries: DMatrix<f64>,
}

impl AlgebraElement {
    pub fn new(entries: DMatrix<f64>) -> Self {
        AlgebraElement { entries }
    }

    pub fn zero(n: usize) -> Self {
        AlgebraElement {
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// ||X + X^T||_F, the distance from skew-symmetry.
    pub fn skewness_defect(&self) -> f64 {
        (&self.entries + self.entries.transpose()).norm()
    }

    /// Check the skew-symmetry invariant for SO algebras.
    pub fn check_skew(&self) -> Result<()> {
        let defect = self.skewness_defect();
        if defect > 1e-12 {
            return Err(Error::NumericalFailure(format!(
                "algebra element is not skew-symmetric (defect {defect:.3e})"
            )));
        }
        Ok(())
    }

    pub fn commutator(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
        }
    }
}

impl MatrixGroupElement {
    /// Wrap a matrix, re-orthonormalizing if drift exceeds the tolerance.
    pub fn new(entries: DMatrix<f64>, tag: GroupTag) -> Self {
        let mut g = MatrixGroupElement { entries, tag };
        if tag != GroupTag::GlnGeneric && g.orthogonality_defect() > 1e-10 {
            g.reorthonormalize();
        }
        g
    }

    pub fn identity(n: usize, tag: GroupTag) -> Self {
        MatrixGroupElement {
            entries: DMatrix::identity(n, n),
            tag,
        }
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn tag(&self) -> GroupTag {
        self.tag
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    /// ||Q^T Q - I||_F.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.n();
        (self.entries.transpose() * &self.entries - DMatrix::<f64>::identity(n, n)).norm()
    }

    /// Project back onto the orthogonal group via the polar factor.
    pub fn reorthonormalize(&mut self) {
        let svd = self.entries.clone().svd(true, true);
        let u = svd.u.unwrap();
        let vt = svd.v_t.unwrap();
        self.entries = u * vt;
    }

    pub fn inverse(&self) -> MatrixGroupElement {
        let inv = match self.tag {
            GroupTag::GlnGeneric => self
                .entries
                .clone()
                .try_inverse()
                .expect("group element must be invertible"),
            _ => self.entries.transpose(),
        };
        MatrixGroupElement::new(inv, self.tag)
    }

    pub fn mul(&self, other: &MatrixGroupElement) -> MatrixGroupElement {
        MatrixGroupElement::new(&self.entries * &other.entries, self.tag)
    }

    /// For SO(2): rotation angle in (-pi, pi].
    pub fn rotation_angle(&self) -> f64 {
        assert_eq!(self.n(), 2);
        self.entries[(1, 0)].atan2(self.entries[(0, 0)])
    }
}

/// Matrix exponential: Rodrigues for 2x2/3x3 skew input, otherwise
/// scaling-and-squaring with a Pade(6,6) approximant.
pub fn exp_map(x: &AlgebraElement) -> MatrixGroupElement {
    let n = x.n();
    let skew = x.skewness_defect() <= 1e-12;
    if n == 2 && skew {
        let a = x.entries[(1, 0)];
        let (s, c) = a.sin_cos();
        return MatrixGroupElement::new(DMatrix::from_row_slice(2, 2, &[c, -s, s, c]), GroupTag::So2);
    }
    if n == 3 && skew {
        // Rodrigues: R = I + sin(t)/t X + (1-cos(t))/t^2 X^2.
        let wx = x.entries[(2, 1)];
        let wy = x.entries[(0, 2)];
        let wz = x.entries[(1, 0)];
        let t = (wx * wx + wy * wy + wz * wz).sqrt();
        let (c1, c2) = if t < 1e-8 {
            // series, to avoid 0/0
            (1.0 - t * t / 6.0, 0.5 - t * t / 24.0)
        } else {
            (t.sin() / t, (1.0 - t.cos()) / (t * t))
        };
        let x2 = &x.entries * &x.entries;
        let r = DMatrix::identity(3, 3) + &x.entries * c1 + x2 * c2;
        return MatrixGroupElement::new(r, GroupTag::So3);
    }
    let tag = if skew {
        match n {
            2 => GroupTag::So2,
            3 => GroupTag::So3,
            _ => GroupTag::GlnGeneric,
        }
    } else {
        GroupTag::GlnGeneric
    };
    MatrixGroupElement::new(expm_pade(&x.entries), tag)
}

/// Scaling-and-squaring with Pade(6,6).
pub fn expm_pade(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.amax() * n as f64; // crude 1-norm bound
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = m / 2f64.powi(s as i32);

    // Pade(6,6) coefficients via the standard recurrence.
    let q = 6usize;
    let mut b = vec![1.0f64; q + 1];
    for j in 1..=q {
        b[j] = b[j - 1] * (q + 1 - j) as f64 / ((j * (2 * q + 1 - j)) as f64);
    }
    let mut num = DMatrix::<f64>::identity(n, n) * b[0];
    let mut den = num.clone();
    let mut pow = DMatrix::<f64>::identity(n, n);
    for (j, &bj) in b.iter().enumerate().skip(1) {
        pow = &pow * &a;
        num += &pow * bj;
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        den += &pow * (bj * sign);
    }
    let mut r = den
        .lu()
        .solve(&num)
        .expect("Pade denominator must be invertible");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: 30-term Taylor series at ||X||/2^10, squared back up.
    fn exp_series_oracle(m: &DMatrix<f64>) -> DMatrix<f64> {
        let n = m.nrows();
        let a = m / 2f64.powi(10);
        let mut sum = DMatrix::<f64>::identity(n, n);
        let mut term = DMatrix::<f64>::identity(n, n);
        for k in 1..=30 {
            term = &term * &a / k as f64;
            sum += &term;
        }
        let mut r = sum;
        for _ in 0..10 {
            r = &r * &r;
        }
        r
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let g = exp_map(&AlgebraElement::zero(3));
        assert!((g.entries() - DMatrix::<f64>::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn quarter_rotation() {
        let x = AlgebraElement::new(so2_generator() * std::f64::consts::FRAC_PI_2);
        let g = exp_map(&x);
        let expect = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((g.entries() - expect).norm() < 1e-15);
    }

    #[test]
    fn random_so3_matches_series_oracle() {
        // fixed "random" coefficients; oracle frozen in test code
        let cases = [
            [0.3, -1.1, 0.7],
            [2.5, 0.1, -0.4],
            [-0.02, 0.03, 0.015],
        ];
        for w in cases {
            let x = AlgebraElement::new(
                so3_generator(0) * w[0] + so3_generator(1) * w[1] + so3_generator(2) * w[2],
            );
            let got = exp_map(&x);
            let expect = exp_series_oracle(&x.entries);
            assert!(
                (got.entries() - &expect).norm() <= 1e-12,
                "defect {}",
                (got.entries() - &expect).norm()
            );
            assert!(got.orthogonality_defect() < 1e-12);
        }
    }

    #[test]
    fn pade_matches_series_on_nonskew() {
        let m = DMatrix::from_row_slice(3, 3, &[0.2, 1.0, -0.3, 0.0, -0.5, 0.7, 0.4, 0.1, 0.9]);
        let got = expm_pade(&m);
        let expect = exp_series_oracle(&m);
        assert!((got - expect).norm() < 1e-12);
    }

    #[test]
    fn reorthonormalization_projects_back() {
        let mut g = MatrixGroupElement::identity(3, GroupTag::So3);
        // inject drift
        let drifted = g.entries() + DMatrix::from_element(3, 3, 1e-7);
        g = MatrixGroupElement::new(drifted, GroupTag::So3);
        assert!(g.orthogonality_defect() <= 1e-10);
    }
}
