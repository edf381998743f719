//! Piecewise-smooth parameterized paths.

use std::sync::Arc;

use crate::error::{Error, Result};

type PointFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// One smooth arc, parameterized over t in [0,1], with an explicit velocity.
#[derive(Clone)]
pub struct Segment {
    pub point: PointFn,
    pub velocity: PointFn,
}

impl Segment {
    /// Straight line from `from` to `to`.
    pub fn line(from: Vec<f64>, to: Vec<f64>) -> Segment {
        assert_eq!(from.len(), to.len());
        let dir: Vec<f64> = from.iter().zip(&to).map(|(a, b)| b - a).collect();
        let f = from.clone();
        let d = dir.clone();
        Segment {
            point: Arc::new(move |t| f.iter().zip(&d).map(|(a, v)| a + t * v).collect()),
            velocity: Arc::new(move |_| dir.clone()),
        }
    }

    /// Circular arc in 2D around `center`, from angle `t0` to `t1`.
    pub fn arc(center: [f64; 2], radius: f64, t0: f64, t1: f64) -> Segment {
        let c = center;
        Segment {
            point: Arc::new(move |t| {
                let a = t0 + t * (t1 - t0);
                vec![c[0] + radius * a.cos(), c[1] + radius * a.sin()]
            }),
            velocity: Arc::new(move |t| {
                let a = t0 + t * (t1 - t0);
                let da = t1 - t0;
                vec![-radius * a.sin() * da, radius * a.cos() * da]
            }),
        }
    }

    /// Euclidean chord length estimate used only for degeneracy detection.
    pub fn is_degenerate(&self) -> bool {
        let a = (self.point)(0.0);
        let b = (self.point)(1.0);
        let m = (self.point)(0.5);
        let d = |p: &[f64], q: &[f64]| -> f64 {
            p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
        };
        d(&a, &b) < 1e-14 && d(&a, &m) < 1e-14
    }
}

/// An ordered list of smooth arcs with matching endpoints.
#[derive(Clone)]
pub struct Path {
    pub segments: Vec<Segment>,
    pub closed: bool,
}

fn dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

impl Path {
    /// Build from segments, validating endpoint continuity (1e-12) and closedness.
    pub fn new(segments: Vec<Segment>) -> Result<Path> {
        assert!(!segments.is_empty(), "a path needs at least one segment");
        for w in segments.windows(2) {
            let gap = dist(&(w[0].point)(1.0), &(w[1].point)(0.0));
            if gap > 1e-12 {
                return Err(Error::NumericalFailure(format!(
                    "path segments do not join (gap {gap:.3e})"
                )));
            }
        }
        let gap = dist(
            &(segments.last().unwrap().point)(1.0),
            &(segments[0].point)(0.0),
        );
        Ok(Path {
            closed: gap <= 1e-12,
            segments,
        })
    }

    /// Polyline through the given points. Degenerate (zero-length) segments
    /// are legal and transport as the identity.
    pub fn polyline(points: &[Vec<f64>]) -> Result<Path> {
        assert!(points.len() >= 2);
        let segments = points
            .windows(2)
            .map(|w| Segment::line(w[0].clone(), w[1].clone()))
            .collect();
        Path::new(segments)
    }

    /// Full counterclockwise circle in 2D.
    pub fn circle(center: [f64; 2], radius: f64) -> Path {
        Path::new(vec![Segment::arc(center, radius, 0.0, 2.0 * std::f64::consts::PI)]).unwrap()
    }

    pub fn start(&self) -> Vec<f64> {
        (self.segments[0].point)(0.0)
    }

    pub fn end(&self) -> Vec<f64> {
        (self.segments.last().unwrap().point)(1.0)
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Path {
        let segments = self
            .segments
            .iter()
            .rev()
            .map(|s| {
                let p = s.point.clone();
                let v = s.velocity.clone();
                Segment {
                    point: Arc::new(move |t| p(1.0 - t)),
                    velocity: Arc::new(move |t| v(1.0 - t).iter().map(|x| -x).collect()),
                }
            })
            .collect();
        Path::new(segments).expect("reversal preserves continuity")
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Path) -> Result<Path> {
        let mut segs = self.segments.clone();
        segs.extend(other.segments.iter().cloned());
        Path::new(segs)
    }
}
