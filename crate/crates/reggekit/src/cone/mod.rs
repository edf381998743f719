//! Cone metrics, their mollified smoothings, and the convergence of the
//! smoothed curvature to the deficit-angle measure.

mod curvature;
mod fan;
mod jet;
mod mollify;
mod scans;

pub use curvature::{curvature_density, curvature_density_3d, lc_holonomy_angle};
pub use fan::{fan_from_sector_angles, fan_from_vertex_star, wedge_fan, HingeFan3D, SectorFan2D};
pub use jet::{smoothed_jet, smoothed_jet_3d, MetricJet2, MetricJet3, QuadSpec};
pub use mollify::{MarginalKernel, Mollifier};
pub use scans::{
    hinge3d_invariant_checks, hinge3d_weak_convergence, homotopy_integer, integrate_curvature,
    weak_convergence_scan, GridSpec, Hinge3DReport, IntegralEstimate, ScanRow,
};
