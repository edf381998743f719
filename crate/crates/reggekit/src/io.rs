//! File formats: complexes and fans as JSON, reports and scans as CSV.
//!
//! Floats in CSV are written with 17 significant digits so re-runs can be
//! compared byte-for-byte.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::cone::{HingeFan3D, SectorFan2D};
use crate::error::{Error, Result};
use crate::regge::{ActionReport, EdgeLengths, SimplicialComplex};

/// A complex plus metric data. Edge keys are "name1-name2".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub maximal_simplices: Vec<Vec<String>>,
    pub edge_lengths_sq: BTreeMap<String, f64>,
}

impl ComplexFile {
    pub fn from_data(complex: &SimplicialComplex, lengths: &EdgeLengths) -> Self {
        let vertices: Vec<String> = complex.vertex_names().to_vec();
        let maximal_simplices = complex
            .top_simplices()
            .map(|s| s.iter().map(|&v| vertices[v].clone()).collect())
            .collect();
        let edge_lengths_sq = lengths
            .iter()
            .map(|(&(u, v), &lsq)| (format!("{}-{}", vertices[u], vertices[v]), lsq))
            .collect();
        ComplexFile {
            vertices,
            maximal_simplices,
            edge_lengths_sq,
        }
    }

    pub fn into_data(&self) -> Result<(SimplicialComplex, EdgeLengths)> {
        let complex = SimplicialComplex::from_maximal(
            self.vertices.clone(),
            &self.maximal_simplices,
        )?;
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, n)| (n.as_str(), i))
            .collect();
        let mut lengths = EdgeLengths::new();
        for (key, &lsq) in &self.edge_lengths_sq {
            let (a, b) = key.split_once('-').ok_or_else(|| {
                Error::Config(format!("edge key {key:?} is not of the form \"v-w\""))
            })?;
            let resolve = |n: &str| {
                index
                    .get(n)
                    .copied()
                    .ok_or_else(|| Error::Config(format!("unknown vertex {n:?} in edge {key:?}")))
            };
            lengths.set(resolve(a)?, resolve(b)?, lsq);
        }
        lengths.validate_for(&complex)?;
        Ok((complex, lengths))
    }
}

/// A sector fan, 2D or 3D. Metrics are row-major; `hinge_axis` is required
/// exactly when `dim` is 3.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanFile {
    pub dim: usize,
    pub boundary_angles: Vec<f64>,
    pub sector_metrics: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hinge_axis: Option<[f64; 3]>,
}

/// A parsed fan of either dimension.
#[derive(Debug, Clone)]
pub enum LoadedFan {
    Two(SectorFan2D),
    Three(HingeFan3D),
}

impl FanFile {
    pub fn from_fan2(fan: &SectorFan2D) -> Self {
        FanFile {
            dim: 2,
            boundary_angles: fan.boundary_angles().to_vec(),
            sector_metrics: fan
                .sector_metrics()
                .iter()
                .map(|m| m.transpose().as_slice().to_vec())
                .collect(),
            hinge_axis: None,
        }
    }

    pub fn from_fan3(fan: &HingeFan3D) -> Self {
        FanFile {
            dim: 3,
            boundary_angles: fan.boundary_angles().to_vec(),
            sector_metrics: fan
                .sector_metrics()
                .iter()
                .map(|m| m.transpose().as_slice().to_vec())
                .collect(),
            hinge_axis: Some([0.0, 0.0, 1.0]),
        }
    }

    pub fn into_fan(&self) -> Result<LoadedFan> {
        match self.dim {
            2 => {
                let metrics = self
                    .sector_metrics
                    .iter()
                    .map(|row| {
                        if row.len() != 4 {
                            return Err(Error::Config(format!(
                                "2D sector metric needs 4 entries, got {}",
                                row.len()
                            )));
                        }
                        Ok(Matrix2::new(row[0], row[1], row[2], row[3]))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if self.hinge_axis.is_some() {
                    return Err(Error::Config("hinge_axis is only valid when dim = 3".into()));
                }
                Ok(LoadedFan::Two(SectorFan2D::new(
                    self.boundary_angles.clone(),
                    metrics,
                )?))
            }
            3 => {
                let metrics = self
                    .sector_metrics
                    .iter()
                    .map(|row| {
                        if row.len() != 9 {
                            return Err(Error::Config(format!(
                                "3D sector metric needs 9 entries, got {}",
                                row.len()
                            )));
                        }
                        Ok(Matrix3::from_row_slice(row))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let axis = self
                    .hinge_axis
                    .ok_or_else(|| Error::Config("dim = 3 requires hinge_axis".into()))?;
                Ok(LoadedFan::Three(HingeFan3D::new(
                    Vector3::new(axis[0], axis[1], axis[2]),
                    self.boundary_angles.clone(),
                    metrics,
                )?))
            }
            d => Err(Error::Config(format!("fan dim must be 2 or 3, got {d}"))),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(std::fs::write(path, text)?)
}

/// 17 significant digits, enough to round-trip an f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV of an ActionReport: hinge id, dihedral list (';'-separated), deficit,
/// area. Hinge ids join vertex names with '-'.
pub fn action_report_csv(complex: &SimplicialComplex, report: &ActionReport) -> String {
    let mut out = String::from("hinge,thetas,deficit,area\n");
    for h in &report.hinges {
        let id: Vec<&str> = h.hinge.iter().map(|&v| complex.vertex_name(v)).collect();
        let thetas: Vec<String> = h.dihedrals.iter().map(|&t| fmt_float(t)).collect();
        out.push_str(&format!(
            "{},{},{},{}\n",
            id.join("-"),
            thetas.join(";"),
            fmt_float(h.deficit),
            fmt_float(h.area)
        ));
    }
    out.push_str(&format!("total,,{},\n", fmt_float(report.total)));
    out
}

/// CSV for convergence scans: eps, value, reference, abs_error.
pub fn scan_csv(rows: &[crate::cone::ScanRow]) -> String {
    let mut out = String::from("eps,value,reference,abs_error\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_float(r.eps),
            fmt_float(r.value),
            fmt_float(r.reference),
            fmt_float(r.abs_error)
        ));
    }
    out
}
