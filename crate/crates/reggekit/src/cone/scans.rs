//! Grid experiments on smoothed cone metrics: total curvature, holonomy
//! consistency, delta-convergence scans, and the 3D hinge checks.

use nalgebra::{Vector2, Vector3};
use rayon::prelude::*;

use super::curvature::{
    christoffel_action_norm, curvature_density, curvature_density_3d,
};
use super::fan::{HingeFan3D, SectorFan2D};
use super::jet::{smoothed_jet, smoothed_jet_3d, QuadSpec};
use super::mollify::{MarginalKernel, Mollifier};
use crate::error::Result;
use crate::quad::{gauss_legendre_pairs, gauss_legendre_on_pairs};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Polar grid resolution for curvature integrals. The angular order is
/// applied per fan sector; the radial order per radial segment.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub radial_order: usize,
    pub radial_segments: usize,
    pub angular_order: usize,
    /// outer radius as a multiple of the curvature support radius
    pub radius_factor: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            radial_order: 10,
            radial_segments: 4,
            angular_order: 10,
            radius_factor: 1.5,
        }
    }
}

/// Polar quadrature nodes (point, weight incl. the Jacobian r) covering
/// the disk of the given radius, split angularly at the fan boundaries.
fn polar_nodes(boundaries: &[f64], radius: f64, grid: &GridSpec) -> Vec<(Vector2<f64>, f64)> {
    let ang = gauss_legendre_pairs(grid.angular_order);
    let rad = gauss_legendre_pairs(grid.radial_order);
    let n = boundaries.len();
    let mut nodes = Vec::new();
    for k in 0..n {
        let a = boundaries[k];
        let b = if k + 1 < n { boundaries[k + 1] } else { boundaries[0] + TAU };
        for &(na, wa) in &ang {
            let psi = 0.5 * (a + b) + 0.5 * (b - a) * na;
            let wpsi = 0.5 * (b - a) * wa;
            let u = Vector2::new(psi.cos(), psi.sin());
            for seg in 0..grid.radial_segments {
                let r0 = radius * seg as f64 / grid.radial_segments as f64;
                let r1 = radius * (seg + 1) as f64 / grid.radial_segments as f64;
                for &(nr, wr) in &rad {
                    let r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * nr;
                    let w = wpsi * 0.5 * (r1 - r0) * wr * r;
                    nodes.push((r * u, w));
                }
            }
        }
    }
    nodes
}

fn coarser(grid: &GridSpec) -> GridSpec {
    GridSpec {
        radial_order: (grid.radial_order / 2).max(4),
        radial_segments: grid.radial_segments.div_ceil(2),
        angular_order: (grid.angular_order / 2).max(4),
        radius_factor: grid.radius_factor,
    }
}

/// A grid integral together with an a-posteriori Richardson estimate
/// (the difference against a coarsened grid).
#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate {
    pub value: f64,
    pub error_estimate: f64,
}

fn kappa_mu_at(fan: &SectorFan2D, moll: &Mollifier, x: &Vector2<f64>, quad: &QuadSpec) -> Result<f64> {
    let jet = smoothed_jet(fan, moll, x, quad)?;
    let (kappa, mu) = curvature_density(&jet)?;
    Ok(kappa * mu)
}

fn integrate_field(
    fan: &SectorFan2D,
    eps: f64,
    grid: &GridSpec,
    quad: &QuadSpec,
) -> Result<f64> {
    let moll = Mollifier::new(2, eps);
    let radius = grid.radius_factor * fan.support_radius(eps).max(eps);
    let nodes = polar_nodes(fan.boundary_angles(), radius, grid);
    nodes
        .par_iter()
        .map(|(x, w)| Ok(w * kappa_mu_at(fan, &moll, x, quad)?))
        .try_reduce(|| 0.0, |a, b| Ok(a + b))
}

/// Total curvature of the eps-smoothed cone metric; equals the deficit.
pub fn integrate_curvature(
    fan: &SectorFan2D,
    eps: f64,
    grid: &GridSpec,
    quad: &QuadSpec,
) -> Result<IntegralEstimate> {
    let fine = integrate_field(fan, eps, grid, quad)?;
    let coarse = integrate_field(fan, eps, &coarser(grid), quad)?;
    Ok(IntegralEstimate {
        value: fine,
        error_estimate: (fine - coarse).abs(),
    })
}

/// Winding integer of the homotopy argument: k = (int kappa mu + sum
/// theta) / 2 pi, rounded. Constant (= 1) along the family blending the
/// fan with the flat metric.
pub fn homotopy_integer(fan: &SectorFan2D, eps: f64, grid: &GridSpec, quad: &QuadSpec) -> Result<i64> {
    let total = integrate_curvature(fan, eps, grid, quad)?.value;
    let theta_sum: f64 = fan.sector_angles()?.iter().sum();
    Ok(((total + theta_sum) / TAU).round() as i64)
}

/// One row of a delta-convergence scan.
#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub eps: f64,
    pub value: f64,
    pub reference: f64,
    pub abs_error: f64,
}

/// int psi kappa_eps mu_eps against d psi(0) for each eps.
///
/// Uses the scaling identity kappa_eps mu_eps (x) = eps^-2 (kappa_1
/// mu_1)(x / eps) as a fast path: the eps = 1 field is evaluated once on
/// the grid and reused, with psi pulled back.
pub fn weak_convergence_scan(
    fan: &SectorFan2D,
    psi: &(dyn Fn(&Vector2<f64>) -> f64 + Sync),
    eps_list: &[f64],
    grid: &GridSpec,
    quad: &QuadSpec,
) -> Result<Vec<ScanRow>> {
    let d = fan.deficit()?;
    let moll = Mollifier::new(2, 1.0);
    let radius = grid.radius_factor * fan.support_radius(1.0);
    let nodes = polar_nodes(fan.boundary_angles(), radius, grid);
    let field: Vec<f64> = nodes
        .par_iter()
        .map(|(x, w)| Ok(w * kappa_mu_at(fan, &moll, x, quad)?))
        .collect::<Result<_>>()?;
    let reference = d * psi(&Vector2::zeros());
    Ok(eps_list
        .iter()
        .map(|&eps| {
            let value: f64 = nodes
                .iter()
                .zip(&field)
                .map(|((x, _), f)| f * psi(&(eps * x)))
                .sum();
            ScanRow {
                eps,
                value,
                reference,
                abs_error: (value - reference).abs(),
            }
        })
        .collect())
}

/// Residual report for the 3D hinge lemmas.
#[derive(Debug, Clone, Copy)]
pub struct Hinge3DReport {
    /// max over samples of the covariant-constancy residual of the
    /// rho-unit hinge field
    pub hinge_residual: f64,
    /// max over deep-sector samples of the residual for the transverse
    /// unit fields m_i
    pub sector_residual: f64,
    /// max |kappa| sampled outside the tube of radius `tube_factor * eps`
    pub outside_tube_max: f64,
    /// max |kappa| eps^2 sampled inside the tube
    pub inside_bound: f64,
    pub tube_factor: f64,
}

/// Checks the three pointwise statements backing the 3D result: the
/// hinge field and the deep-sector fields are parallel, and curvature
/// concentrates in a tube around the hinge.
pub fn hinge3d_invariant_checks(
    fan: &HingeFan3D,
    eps: f64,
    quad: &QuadSpec,
) -> Result<Hinge3DReport> {
    let kernel = MarginalKernel::new(eps);
    let tube_factor = 3.0f64.max(fan.support_radius(1.0) * 1.05);
    let n = fan.num_sectors();
    let boundaries = fan.boundary_angles();

    // transverse sample set: per sector, points along the bisector and
    // off-axis, at radii from 0.3 eps to past the tube
    let mut inside_samples = Vec::new();
    let mut deep_samples: Vec<(usize, Vector2<f64>)> = Vec::new();
    let mut outside_samples = Vec::new();
    for i in 0..n {
        let a = boundaries[i];
        let b = if i + 1 < n { boundaries[i + 1] } else { boundaries[0] + TAU };
        for frac in [0.35, 0.65] {
            let psi = a + frac * (b - a);
            let u = Vector2::new(psi.cos(), psi.sin());
            for r in [0.3 * eps, 1.5 * eps, 0.8 * tube_factor * eps] {
                inside_samples.push(r * u);
            }
            // deep in the sector: distance from both half-lines > eps
            let off = (psi - a).min(b - psi);
            let deep_r = 1.3 * eps / off.sin().max(1e-6);
            deep_samples.push((i, deep_r * u));
            for r in [1.02 * tube_factor * eps, 1.5 * tube_factor * eps] {
                outside_samples.push(r * u);
            }
        }
    }

    let jets = |pts: &[Vector2<f64>]| -> Result<Vec<super::jet::MetricJet3>> {
        pts.par_iter()
            .map(|w| smoothed_jet_3d(fan, &kernel, w, quad))
            .collect()
    };

    let inside_jets = jets(&inside_samples)?;
    let outside_jets = jets(&outside_samples)?;

    let mut hinge_residual = 0.0f64;
    let mut inside_bound = 0.0f64;
    for jet in &inside_jets {
        // rho-unit hinge field, constant in coordinates: f = e_z /
        // sqrt(sigma_zz) evaluated sector-wise; tangential agreement makes
        // sigma_zz equal to the sector value everywhere
        let f = Vector3::z() / jet.sigma[(2, 2)].sqrt();
        hinge_residual = hinge_residual.max(christoffel_action_norm(jet, &f)?);
        let (kappa, _) = curvature_density_3d(jet)?;
        inside_bound = inside_bound.max(kappa.abs() * eps * eps);
    }

    let mut outside_tube_max = 0.0f64;
    for jet in &outside_jets {
        let (kappa, _) = curvature_density_3d(jet)?;
        outside_tube_max = outside_tube_max.max(kappa.abs());
    }

    let m = fan.unit_directions();
    let mut sector_residual = 0.0f64;
    let deep_jets = jets(&deep_samples.iter().map(|(_, w)| *w).collect::<Vec<_>>())?;
    for ((i, _), jet) in deep_samples.iter().zip(&deep_jets) {
        sector_residual = sector_residual.max(christoffel_action_norm(jet, &m[*i])?);
    }

    Ok(Hinge3DReport {
        hinge_residual,
        sector_residual,
        outside_tube_max,
        inside_bound,
        tube_factor,
    })
}

/// int psi kappa_eps mu_eps over 3-space against d int_F psi for each
/// eps, psi compactly supported in |z| <= z_extent.
///
/// The transverse scaling identity gives the fast path: the eps = 1
/// transverse field is integrated once; only psi is rescaled.
pub fn hinge3d_weak_convergence(
    fan: &HingeFan3D,
    psi: &(dyn Fn(&Vector3<f64>) -> f64 + Sync),
    z_extent: f64,
    eps_list: &[f64],
    grid: &GridSpec,
    quad: &QuadSpec,
) -> Result<Vec<ScanRow>> {
    let kernel = MarginalKernel::new(1.0);
    let radius = grid.radius_factor * fan.support_radius(1.0);
    let nodes = polar_nodes(fan.boundary_angles(), radius, grid);
    let field: Vec<f64> = nodes
        .par_iter()
        .map(|(w, wt)| {
            let jet = smoothed_jet_3d(fan, &kernel, w, quad)?;
            let (kappa, mu) = curvature_density_3d(&jet)?;
            Ok(wt * kappa * mu)
        })
        .collect::<Result<_>>()?;
    let z_rule = gauss_legendre_on_pairs(32, -z_extent, z_extent);

    // reference: d * int psi(0,0,z) dl_rho, line element sqrt(rho_zz)
    let d = fan.deficit()?;
    let rho_zz = fan.sector_metrics()[0][(2, 2)];
    let reference: f64 = d
        * z_rule
            .iter()
            .map(|&(z, wz)| wz * psi(&Vector3::new(0.0, 0.0, z)) * rho_zz.sqrt())
            .sum::<f64>();

    // mu = sqrt(det sigma_3) already contains the hinge line element, so
    // the z-integral uses the plain coordinate measure
    Ok(eps_list
        .iter()
        .map(|&eps| {
            let value: f64 = z_rule
                .iter()
                .map(|&(z, wz)| {
                    let transverse: f64 = nodes
                        .iter()
                        .zip(&field)
                        .map(|((w, _), f)| f * psi(&Vector3::new(eps * w.x, eps * w.y, z)))
                        .sum();
                    wz * transverse
                })
                .sum();
            ScanRow {
                eps,
                value,
                reference,
                abs_error: (value - reference).abs(),
            }
        })
        .collect())
}
