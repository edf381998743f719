//! Seeded polynomial sample fields for experiments and fixtures.

use std::sync::Arc;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::field::ConnectionField;
use super::matrix::{so2_generator, so3_generator};
use crate::error::{Error, Result};

/// Monomial basis 1, x, y, x^2, xy, y^2.
fn monomials(x: f64, y: f64) -> [f64; 6] {
    [1.0, x, y, x * x, x * y, y * y]
}

/// d/dx and d/dy of the monomial basis.
fn d_monomials(x: f64, y: f64) -> ([f64; 6], [f64; 6]) {
    (
        [0.0, 1.0, 0.0, 2.0 * x, y, 0.0],
        [0.0, 0.0, 1.0, 0.0, x, 2.0 * y],
    )
}

/// A planar connection with polynomial coefficients in a fixed generator
/// basis: so(2) (one generator, abelian) or so(3) (three generators).
/// Serializable, so fixtures reproduce the field bit-for-bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyConnection {
    /// Matrix size: 2 for so(2), 3 for so(3).
    pub n: usize,
    /// coeffs[direction][generator][monomial], directions x then y.
    pub coeffs: Vec<Vec<[f64; 6]>>,
}

impl PolyConnection {
    fn generators(n: usize) -> Result<Vec<DMatrix<f64>>> {
        match n {
            2 => Ok(vec![so2_generator()]),
            3 => Ok((0..3).map(so3_generator).collect()),
            _ => Err(Error::Config(format!(
                "polynomial connection needs n = 2 or 3, got {n}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gens = Self::generators(self.n)?;
        if self.coeffs.len() != 2 || self.coeffs.iter().any(|c| c.len() != gens.len()) {
            return Err(Error::Config(format!(
                "coefficient shape must be 2 x {} x 6 for n = {}",
                gens.len(),
                self.n
            )));
        }
        Ok(())
    }

    /// Seeded so(3) field, coefficients uniform in [-0.8, 0.8].
    pub fn seeded_so3(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..2)
            .map(|_| {
                (0..3)
                    .map(|_| std::array::from_fn(|_| rng.gen_range(-0.8..0.8)))
                    .collect()
            })
            .collect();
        PolyConnection { n: 3, coeffs }
    }

    /// Seeded abelian so(2) field.
    pub fn seeded_abelian(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..2)
            .map(|_| vec![std::array::from_fn(|_| rng.gen_range(-0.8..0.8))])
            .collect();
        PolyConnection { n: 2, coeffs }
    }

    /// Builds the ConnectionField with analytic derivatives.
    pub fn field(&self) -> Result<ConnectionField> {
        self.validate()?;
        let gens = Self::generators(self.n)?;
        let n = self.n;
        let coeffs = self.coeffs.clone();
        let eval = {
            let (gens, coeffs) = (gens.clone(), coeffs.clone());
            Arc::new(move |p: &[f64]| {
                let m = monomials(p[0], p[1]);
                coeffs
                    .iter()
                    .map(|dir| {
                        let mut a = DMatrix::zeros(n, n);
                        for (g, c) in gens.iter().zip(dir) {
                            let s: f64 = c.iter().zip(&m).map(|(ci, mi)| ci * mi).sum();
                            a += g * s;
                        }
                        a
                    })
                    .collect::<Vec<_>>()
            })
        };
        let d_eval = Arc::new(move |p: &[f64]| {
            let (dx, dy) = d_monomials(p[0], p[1]);
            [dx, dy]
                .iter()
                .map(|dm| {
                    coeffs
                        .iter()
                        .map(|dir| {
                            let mut a = DMatrix::zeros(n, n);
                            for (g, c) in gens.iter().zip(dir) {
                                let s: f64 = c.iter().zip(dm.iter()).map(|(ci, mi)| ci * mi).sum();
                                a += g * s;
                            }
                            a
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        });
        Ok(ConnectionField::new(2, n, eval, Some(d_eval)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_fields_are_deterministic() {
        let a = PolyConnection::seeded_so3(7);
        let b = PolyConnection::seeded_so3(7);
        assert_eq!(a.coeffs, b.coeffs);
        assert_ne!(a.coeffs, PolyConnection::seeded_so3(8).coeffs);
    }

    #[test]
    fn analytic_partials_match_finite_differences() {
        let pc = PolyConnection::seeded_so3(3);
        let field = pc.field().unwrap();
        let fd_field = ConnectionField::new(
            2,
            3,
            Arc::new({
                let f = field.clone();
                move |p: &[f64]| f.eval(p)
            }),
            None,
        );
        let p = [0.3, -0.4];
        let exact = field.partials(&p, 1e-4).unwrap();
        let fd = fd_field.partials(&p, 1e-4).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((&exact[i][j] - &fd[i][j]).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn abelian_sample_is_so2_multiple() {
        let pc = PolyConnection::seeded_abelian(11);
        let field = pc.field().unwrap();
        let a = field.eval(&[0.5, 0.2]);
        // both coefficients proportional to the so(2) generator
        for m in &a {
            assert!((m[(0, 1)] + m[(1, 0)]).abs() < 1e-15);
            assert!(m[(0, 0)].abs() < 1e-15);
        }
    }

    #[test]
    fn bad_shape_rejected() {
        let pc = PolyConnection {
            n: 3,
            coeffs: vec![vec![[0.0; 6]; 2]; 2],
        };
        assert!(pc.field().is_err());
    }
}
