//! Piecewise-constant sector metrics around a point in the plane and
//! around a straight hinge line in 3-space.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::regge::{deficit_angle, gram, EdgeLengths, SimplicialComplex};

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn spd2(m: &Matrix2<f64>) -> bool {
    (m[(0, 1)] - m[(1, 0)]).abs() < 1e-12 && m[(0, 0)] > 0.0 && m.determinant() > 0.0
}

fn spd3(m: &Matrix3<f64>) -> bool {
    (m - m.transpose()).norm() < 1e-12
        && m[(0, 0)] > 0.0
        && m.fixed_view::<2, 2>(0, 0).determinant() > 0.0
        && m.determinant() > 0.0
}

/// A cone metric on the plane: constant SPD matrices on the sectors cut
/// out by half-lines at the given reference angles.
///
/// Sector `i` spans reference angles `boundary_angles[i]` to
/// `boundary_angles[i+1]` (wrapping); the total reference span is 2 pi.
#[derive(Debug, Clone)]
pub struct SectorFan2D {
    boundary_angles: Vec<f64>,
    sector_metrics: Vec<Matrix2<f64>>,
}

impl SectorFan2D {
    /// Validates monotone angles spanning 2 pi, reference sector widths in
    /// (0, pi), SPD metrics, and tangential continuity across half-lines.
    pub fn new(boundary_angles: Vec<f64>, sector_metrics: Vec<Matrix2<f64>>) -> Result<Self> {
        let n = boundary_angles.len();
        if n < 3 || sector_metrics.len() != n {
            return Err(Error::InvalidFan(format!(
                "need >= 3 half-lines and one metric per sector, got {n} angles and {} metrics",
                sector_metrics.len()
            )));
        }
        for w in boundary_angles.windows(2) {
            let width = w[1] - w[0];
            if !(width > 0.0 && width < std::f64::consts::PI) {
                return Err(Error::InvalidFan(format!(
                    "reference sector width {width} outside (0, pi)"
                )));
            }
        }
        let wrap = boundary_angles[0] + TAU - boundary_angles[n - 1];
        if !(wrap > 0.0 && wrap < std::f64::consts::PI) {
            return Err(Error::InvalidFan(format!(
                "wrapping reference sector width {wrap} outside (0, pi)"
            )));
        }
        for (i, m) in sector_metrics.iter().enumerate() {
            if !spd2(m) {
                return Err(Error::InvalidFan(format!("sector metric {i} is not SPD")));
            }
        }
        let fan = Self {
            boundary_angles,
            sector_metrics,
        };
        for i in 0..n {
            let t = fan.half_line_dir(i);
            let prev = &fan.sector_metrics[(i + n - 1) % n];
            let next = &fan.sector_metrics[i];
            let a = (t.transpose() * prev * t)[(0, 0)];
            let b = (t.transpose() * next * t)[(0, 0)];
            if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                return Err(Error::InvalidFan(format!(
                    "tangential discontinuity across half-line {i}: {a} vs {b}"
                )));
            }
        }
        Ok(fan)
    }

    /// Flat fan: four quadrants carrying the reference metric.
    pub fn flat() -> Self {
        use std::f64::consts::FRAC_PI_2;
        Self::new(
            vec![0.0, FRAC_PI_2, 2.0 * FRAC_PI_2, 3.0 * FRAC_PI_2],
            vec![Matrix2::identity(); 4],
        )
        .unwrap()
    }

    pub fn num_sectors(&self) -> usize {
        self.boundary_angles.len()
    }

    pub fn boundary_angles(&self) -> &[f64] {
        &self.boundary_angles
    }

    pub fn sector_metrics(&self) -> &[Matrix2<f64>] {
        &self.sector_metrics
    }

    pub fn half_line_dir(&self, i: usize) -> Vector2<f64> {
        let a = self.boundary_angles[i];
        Vector2::new(a.cos(), a.sin())
    }

    /// Index of the sector containing reference direction `angle`.
    pub fn sector_of(&self, angle: f64) -> usize {
        let n = self.boundary_angles.len();
        let a0 = self.boundary_angles[0];
        let mut a = (angle - a0).rem_euclid(TAU) + a0;
        if a >= a0 + TAU {
            a -= TAU;
        }
        match self.boundary_angles.partition_point(|b| *b <= a) {
            0 => n - 1, // cannot happen for a >= a0, kept for safety
            k => k - 1,
        }
    }

    /// The constant metric at a (nonzero) reference point.
    pub fn metric_at(&self, p: &Vector2<f64>) -> &Matrix2<f64> {
        &self.sector_metrics[self.sector_of(p.y.atan2(p.x))]
    }

    /// Half-line directions normalized to unit rho-length; well-defined
    /// from either adjacent sector by tangential continuity.
    pub fn unit_directions(&self) -> Vec<Vector2<f64>> {
        (0..self.num_sectors())
            .map(|i| {
                let t = self.half_line_dir(i);
                let len = (self.sector_metrics[i] * t).dot(&t).sqrt();
                t / len
            })
            .collect()
    }

    /// Metric angles theta_{i+1/2} between consecutive unit directions,
    /// measured in the sector's own metric.
    pub fn sector_angles(&self) -> Result<Vec<f64>> {
        let m = self.unit_directions();
        let n = self.num_sectors();
        (0..n)
            .map(|i| {
                let c = (self.sector_metrics[i] * m[(i + 1) % n]).dot(&m[i]);
                if c.abs() >= 1.0 - 1e-12 {
                    return Err(Error::DegenerateSector {
                        detail: format!("cos theta = {c} at sector {i}"),
                    });
                }
                Ok(c.acos())
            })
            .collect()
    }

    /// Deficit d = 2 pi - sum theta; negative values (saddle cones) are
    /// allowed.
    pub fn deficit(&self) -> Result<f64> {
        Ok(TAU - self.sector_angles()?.iter().sum::<f64>())
    }

    /// Radius outside which the eps-smoothed curvature vanishes:
    /// eps * max_i 1/cos(pi/2 - alpha_{i+1/2}/2), alpha the reference
    /// sector widths.
    pub fn support_radius(&self, eps: f64) -> f64 {
        let n = self.num_sectors();
        let widths = (0..n).map(|i| {
            let next = self.boundary_angles[(i + 1) % n]
                + if i + 1 == n { TAU } else { 0.0 };
            next - self.boundary_angles[i]
        });
        eps * widths.map(|a| 1.0 / (a / 2.0).sin()).fold(0.0, f64::max)
    }

    /// The same cone with all half-lines rotated by `phi` and metrics
    /// conjugated accordingly (an isometric re-presentation).
    pub fn rotated(&self, phi: f64) -> Self {
        let r = nalgebra::Rotation2::new(phi);
        let rm = r.matrix();
        let base = self.boundary_angles[0] + phi;
        let shift = base.rem_euclid(TAU) - base;
        Self {
            boundary_angles: self.boundary_angles.iter().map(|a| a + phi + shift).collect(),
            sector_metrics: self
                .sector_metrics
                .iter()
                .map(|m| rm * m * rm.transpose())
                .collect(),
        }
    }

    /// Blend toward the flat metric: rho(s) = s rho + (1-s) g per sector.
    /// Reference angles are kept, so s=0 is the flat fan.
    pub fn blend_with_flat(&self, s: f64) -> Result<Self> {
        Self::new(
            self.boundary_angles.clone(),
            self.sector_metrics
                .iter()
                .map(|m| s * m + (1.0 - s) * Matrix2::identity())
                .collect(),
        )
    }
}

/// Cone metric around the straight hinge F = span(e_z): half-hyperplanes
/// at the given transverse reference angles, constant SPD 3x3 metric per
/// sector, independent of the hinge coordinate.
#[derive(Debug, Clone)]
pub struct HingeFan3D {
    boundary_angles: Vec<f64>,
    sector_metrics: Vec<Matrix3<f64>>,
}

impl HingeFan3D {
    /// `axis` must be (a multiple of) e_z; the transverse angular layout
    /// obeys the same invariants as the 2D fan, and tangential continuity
    /// is required on the basis {t_i, e_z} of each half-hyperplane.
    pub fn new(
        axis: Vector3<f64>,
        boundary_angles: Vec<f64>,
        sector_metrics: Vec<Matrix3<f64>>,
    ) -> Result<Self> {
        let a = axis.normalize();
        if (a.x.abs() > 1e-12) || (a.y.abs() > 1e-12) {
            return Err(Error::InvalidFan(
                "hinge axis must be along e_z (canonical frame)".into(),
            ));
        }
        let n = boundary_angles.len();
        if n < 3 || sector_metrics.len() != n {
            return Err(Error::InvalidFan(format!(
                "need >= 3 half-hyperplanes and one metric per sector, got {n} angles and {} metrics",
                sector_metrics.len()
            )));
        }
        // reuse the 2D angular validation through a dummy fan
        SectorFan2D::new(boundary_angles.clone(), vec![Matrix2::identity(); n])?;
        for (i, m) in sector_metrics.iter().enumerate() {
            if !spd3(m) {
                return Err(Error::InvalidFan(format!("sector metric {i} is not SPD")));
            }
        }
        let fan = Self {
            boundary_angles,
            sector_metrics,
        };
        let ez = Vector3::z();
        for i in 0..n {
            let ang = fan.boundary_angles[i];
            let t = Vector3::new(ang.cos(), ang.sin(), 0.0);
            let prev = &fan.sector_metrics[(i + n - 1) % n];
            let next = &fan.sector_metrics[i];
            for (u, v) in [(&t, &t), (&t, &ez), (&ez, &ez)] {
                let a = (prev * v).dot(u);
                let b = (next * v).dot(u);
                if (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(Error::InvalidFan(format!(
                        "tangential discontinuity across half-hyperplane {i}: {a} vs {b}"
                    )));
                }
            }
        }
        Ok(fan)
    }

    /// Product of a 2D fan with a flat hinge line of weight `czz`.
    pub fn product(fan: &SectorFan2D, czz: f64) -> Result<Self> {
        let metrics = fan
            .sector_metrics()
            .iter()
            .map(|m| {
                let mut g = Matrix3::zeros();
                g.fixed_view_mut::<2, 2>(0, 0).copy_from(m);
                g[(2, 2)] = czz;
                g
            })
            .collect();
        Self::new(Vector3::z(), fan.boundary_angles().to_vec(), metrics)
    }

    pub fn num_sectors(&self) -> usize {
        self.boundary_angles.len()
    }

    pub fn boundary_angles(&self) -> &[f64] {
        &self.boundary_angles
    }

    pub fn sector_metrics(&self) -> &[Matrix3<f64>] {
        &self.sector_metrics
    }

    /// The constant metric at a point with nonzero transverse part.
    pub fn metric_at(&self, p: &Vector3<f64>) -> &Matrix3<f64> {
        let n = self.boundary_angles.len();
        let angle = p.y.atan2(p.x);
        let a0 = self.boundary_angles[0];
        let mut a = (angle - a0).rem_euclid(TAU) + a0;
        if a >= a0 + TAU {
            a -= TAU;
        }
        let k = match self.boundary_angles.partition_point(|b| *b <= a) {
            0 => n - 1,
            k => k - 1,
        };
        &self.sector_metrics[k]
    }

    /// rho-unit vector spanning the hinge.
    pub fn hinge_unit(&self, sector: usize) -> Vector3<f64> {
        let ez = Vector3::z();
        ez / (self.sector_metrics[sector] * ez).dot(&ez).sqrt()
    }

    /// Transverse unit directions m_i, projected rho-orthogonally to the
    /// hinge and normalized (either adjacent sector gives the same value).
    pub fn unit_directions(&self) -> Vec<Vector3<f64>> {
        (0..self.num_sectors())
            .map(|i| {
                let rho = &self.sector_metrics[i];
                let a = self.boundary_angles[i];
                let t = Vector3::new(a.cos(), a.sin(), 0.0);
                let f = self.hinge_unit(i);
                let mut m = t - (rho * t).dot(&f) * f;
                m /= (rho * m).dot(&m).sqrt();
                m
            })
            .collect()
    }

    pub fn sector_angles(&self) -> Result<Vec<f64>> {
        let m = self.unit_directions();
        let n = self.num_sectors();
        (0..n)
            .map(|i| {
                let rho = &self.sector_metrics[i];
                let f = self.hinge_unit(i);
                let mut next = m[(i + 1) % n] - (rho * m[(i + 1) % n]).dot(&f) * f;
                next /= (rho * next).dot(&next).sqrt();
                let c = (rho * next).dot(&m[i]);
                if c.abs() >= 1.0 - 1e-12 {
                    return Err(Error::DegenerateSector {
                        detail: format!("cos theta = {c} at sector {i}"),
                    });
                }
                Ok(c.acos())
            })
            .collect()
    }

    pub fn deficit(&self) -> Result<f64> {
        Ok(TAU - self.sector_angles()?.iter().sum::<f64>())
    }

    pub fn support_radius(&self, eps: f64) -> f64 {
        let n = self.num_sectors();
        let widths = (0..n).map(|i| {
            let next = self.boundary_angles[(i + 1) % n]
                + if i + 1 == n { TAU } else { 0.0 };
            next - self.boundary_angles[i]
        });
        eps * widths.map(|a| 1.0 / (a / 2.0).sin()).fold(0.0, f64::max)
    }
}

/// Wedge cone of total metric angle `total` (deficit 2 pi - total), laid
/// out over `sectors` equal reference sectors. The sector metrics are the
/// pullbacks of the flat metric under the linear maps matching unit
/// reference rays to unit rays at the target angles.
pub fn wedge_fan(total: f64, sectors: usize) -> Result<SectorFan2D> {
    assert!(sectors >= 3);
    let thetas = vec![total / sectors as f64; sectors];
    fan_from_sector_angles(&thetas)
}

/// Cone whose metric angles are the given thetas, on proportionally sized
/// reference sectors.
pub fn fan_from_sector_angles(thetas: &[f64]) -> Result<SectorFan2D> {
    let total: f64 = thetas.iter().sum();
    let n = thetas.len();
    let mut ref_angles = vec![0.0; n];
    let mut target_angles = vec![0.0; n + 1];
    for i in 1..n {
        ref_angles[i] = ref_angles[i - 1] + TAU * thetas[i - 1] / total;
    }
    for i in 1..=n {
        target_angles[i] = target_angles[i - 1] + thetas[i - 1];
    }
    let mut metrics = Vec::with_capacity(n);
    for i in 0..n {
        let a = ref_angles[i];
        let b = if i + 1 < n { ref_angles[i + 1] } else { TAU };
        let (ta, tb) = (target_angles[i], target_angles[i + 1]);
        let v = Matrix2::from_columns(&[
            Vector2::new(a.cos(), a.sin()),
            Vector2::new(b.cos(), b.sin()),
        ]);
        let u = Matrix2::from_columns(&[
            Vector2::new(ta.cos(), ta.sin()),
            Vector2::new(tb.cos(), tb.sin()),
        ]);
        let l = u * v.try_inverse().ok_or_else(|| {
            Error::InvalidFan("reference rays are collinear".into())
        })?;
        metrics.push(l.transpose() * l);
    }
    SectorFan2D::new(ref_angles, metrics)
}

/// Lays the triangles of an interior vertex star isometrically as
/// consecutive sectors; the fan's deficit equals the Regge deficit.
///
/// The reference sectors take proportional shares of 2 pi (the metric
/// sector angles cannot tile the reference circle when the deficit is
/// nonzero); each sector metric is the flat pullback realizing the
/// triangle's vertex angle, which keeps tangential continuity exact.
pub fn fan_from_vertex_star(
    complex: &SimplicialComplex,
    lengths: &EdgeLengths,
    vertex: usize,
) -> Result<SectorFan2D> {
    if complex.top_dim() != 2 {
        return Err(Error::InvalidFan("vertex star fans require a 2D complex".into()));
    }
    let hinge = complex.hinge(&[vertex])?;
    if !hinge.interior {
        return Err(Error::BoundaryHinge { hinge: vec![vertex] });
    }
    // order the star triangles into a cycle around the vertex
    let star = &hinge.star;
    let mut ring: Vec<(usize, usize)> = star
        .iter()
        .map(|t| {
            let others: Vec<usize> = t.iter().copied().filter(|v| *v != vertex).collect();
            (others[0], others[1])
        })
        .collect();
    let mut order = vec![0usize];
    let mut used = vec![false; ring.len()];
    used[0] = true;
    let mut cur_end = ring[0].1;
    for _ in 1..ring.len() {
        let next = (0..ring.len())
            .find(|&j| !used[j] && (ring[j].0 == cur_end || ring[j].1 == cur_end))
            .ok_or_else(|| Error::InvalidFan("vertex star is not a single cycle".into()))?;
        if ring[next].1 == cur_end {
            ring[next] = (ring[next].1, ring[next].0);
        }
        cur_end = ring[next].1;
        used[next] = true;
        order.push(next);
    }
    let thetas: Vec<f64> = order
        .iter()
        .map(|&j| {
            let (a, b) = ring[j];
            // vertex angle from the Gram metric with base `vertex`
            let g = gram(&[vertex, a, b], lengths)?;
            Ok((g[(0, 1)] / (g[(0, 0)] * g[(1, 1)]).sqrt()).acos())
        })
        .collect::<Result<_>>()?;
    let fan = fan_from_sector_angles(&thetas)?;
    let d_regge = deficit_angle(&hinge, lengths)?;
    let d_fan = fan.deficit()?;
    debug_assert!((d_fan - d_regge).abs() < 1e-10);
    Ok(fan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn flat_fan_basics() {
        let f = SectorFan2D::flat();
        let m = f.unit_directions();
        assert!((m[0] - Vector2::x()).norm() < 1e-15);
        assert!((m[1] - Vector2::y()).norm() < 1e-15);
        for t in f.sector_angles().unwrap() {
            assert!((t - FRAC_PI_2).abs() < 1e-14);
        }
        assert!(f.deficit().unwrap().abs() < 1e-14);
        assert!((f.support_radius(1.0) - 2f64.sqrt()).abs() < 1e-14);
        assert!((f.support_radius(0.1) - 0.1 * 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn uniformly_scaled_metric_halves_directions() {
        let f = SectorFan2D::new(
            vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2],
            vec![4.0 * Matrix2::identity(); 4],
        )
        .unwrap();
        for (i, m) in f.unit_directions().iter().enumerate() {
            assert!((m - f.half_line_dir(i) / 2.0).norm() < 1e-14);
        }
        assert!(f.deficit().unwrap().abs() < 1e-14);
    }

    #[test]
    fn five_triangle_cone() {
        let f = fan_from_sector_angles(&[FRAC_PI_3; 5]).unwrap();
        for t in f.sector_angles().unwrap() {
            assert!((t - FRAC_PI_3).abs() < 1e-13);
        }
        assert!((f.deficit().unwrap() - FRAC_PI_3).abs() < 1e-13);
    }

    #[test]
    fn wedge_with_quarter_deficit() {
        let f = wedge_fan(1.5 * PI, 4).unwrap();
        assert!((f.deficit().unwrap() - FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn negative_deficit_allowed() {
        let f = wedge_fan(2.4 * PI, 5).unwrap();
        assert!((f.deficit().unwrap() + 0.4 * PI).abs() < 1e-13);
    }

    #[test]
    fn rotation_equivariance() {
        let f = fan_from_sector_angles(&[0.9, 1.1, 1.3, 1.0, 1.2]).unwrap();
        let sum: f64 = f.sector_angles().unwrap().iter().sum();
        for phi in [0.3, 1.7, 4.0] {
            let g = f.rotated(phi);
            let gsum: f64 = g.sector_angles().unwrap().iter().sum();
            assert!((sum - gsum).abs() < 1e-12);
        }
    }

    #[test]
    fn tangential_discontinuity_rejected() {
        let mut metrics = vec![Matrix2::identity(); 4];
        metrics[2][(0, 0)] = 3.0;
        let r = SectorFan2D::new(vec![0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2], metrics);
        assert!(matches!(r, Err(Error::InvalidFan(_))));
    }

    #[test]
    fn wide_sector_rejected() {
        let r = SectorFan2D::new(
            vec![0.0, 0.5, 0.5 + PI],
            vec![Matrix2::identity(); 3],
        );
        assert!(r.is_err());
    }

    #[test]
    fn sector_lookup() {
        let f = SectorFan2D::flat();
        assert_eq!(f.sector_of(0.1), 0);
        assert_eq!(f.sector_of(2.0), 1);
        assert_eq!(f.sector_of(-0.1), 3);
        assert_eq!(f.sector_of(6.4), 0);
    }

    #[test]
    fn vertex_star_fans_match_regge_deficits() {
        // six unit equilateral triangles: flat
        let tris: Vec<Vec<usize>> = (0..6).map(|i| vec![0, 1 + i, 1 + (i + 1) % 6]).collect();
        let names: Vec<String> = (0..7).map(|i| format!("v{i}")).collect();
        let c = SimplicialComplex::from_maximal_indices(names, &tris).unwrap();
        let len = EdgeLengths::uniform(&c, 1.0);
        let f = fan_from_vertex_star(&c, &len, 0).unwrap();
        assert!(f.deficit().unwrap().abs() < 1e-12);

        // five: deficit pi/3
        let tris5: Vec<Vec<usize>> = (0..5).map(|i| vec![0, 1 + i, 1 + (i + 1) % 5]).collect();
        let names5: Vec<String> = (0..6).map(|i| format!("v{i}")).collect();
        let c5 = SimplicialComplex::from_maximal_indices(names5, &tris5).unwrap();
        let len5 = EdgeLengths::uniform(&c5, 1.0);
        let f5 = fan_from_vertex_star(&c5, &len5, 0).unwrap();
        assert!((f5.deficit().unwrap() - FRAC_PI_3).abs() < 1e-12);
        let d5 = deficit_angle(&c5.hinge(&[0]).unwrap(), &len5).unwrap();
        assert!((f5.deficit().unwrap() - d5).abs() < 1e-12);

        // scalene star: cross-module deficit agreement
        let mut len_s = EdgeLengths::new();
        for e in c5.edges() {
            let bump = 0.1 * ((e[0] * 7 + e[1] * 3) % 5) as f64;
            len_s.set(e[0], e[1], 1.0 + bump);
        }
        let fs = fan_from_vertex_star(&c5, &len_s, 0).unwrap();
        let ds = deficit_angle(&c5.hinge(&[0]).unwrap(), &len_s).unwrap();
        assert!((fs.deficit().unwrap() - ds).abs() < 1e-10);
    }

    #[test]
    fn hinge_fan_product_matches_2d() {
        let f2 = fan_from_sector_angles(&[FRAC_PI_3; 5]).unwrap();
        let f3 = HingeFan3D::product(&f2, 2.0).unwrap();
        assert!((f3.deficit().unwrap() - f2.deficit().unwrap()).abs() < 1e-12);
        assert!((f3.support_radius(1.0) - f2.support_radius(1.0)).abs() < 1e-12);
        // hinge unit vector has rho-length 1
        let f = f3.hinge_unit(0);
        assert!(((f3.sector_metrics()[0] * f).dot(&f) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hinge_fan_requires_ez_axis() {
        let f2 = SectorFan2D::flat();
        let metrics: Vec<Matrix3<f64>> = vec![Matrix3::identity(); 4];
        let r = HingeFan3D::new(Vector3::x(), f2.boundary_angles().to_vec(), metrics);
        assert!(r.is_err());
    }
}
