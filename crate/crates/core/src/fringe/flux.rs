use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::prelude::*;

use super::solenoid::SolenoidSpec;
use super::shoelace;

pub const MIN_SEGMENTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

/// Closed polyline; the last point repeats the first.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopPath {
    points: Vec<[f64; 2]>,
}

impl LoopPath {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.len() < MIN_SEGMENTS + 1 {
            return Err(Error::invalid(format!(
                "loop needs at least {MIN_SEGMENTS} segments, got {}",
                points.len().saturating_sub(1)
            )));
        }
        if points.first() != points.last() {
            return Err(Error::invalid("loop is open: first and last points differ"));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::invalid("loop points must be finite"));
        }
        Ok(Self { points })
    }

    /// Counter-clockwise regular polygon inscribed in a circle.
    pub fn circle(center: [f64; 2], radius: f64, segments: usize) -> Result<Self> {
        let mut pts: Vec<[f64; 2]> = (0..segments)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / segments as f64;
                [center[0] + radius * a.cos(), center[1] + radius * a.sin()]
            })
            .collect();
        if let Some(&first) = pts.first() {
            pts.push(first);
        }
        Self::new(pts)
    }

    /// Counter-clockwise axis-aligned rectangle, `per_side` segments per edge.
    pub fn rectangle(lo: [f64; 2], hi: [f64; 2], per_side: usize) -> Result<Self> {
        let corners = [lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]];
        let mut pts = Vec::with_capacity(4 * per_side + 1);
        for c in 0..4 {
            let (a, b) = (corners[c], corners[(c + 1) % 4]);
            for i in 0..per_side {
                let t = i as f64 / per_side as f64;
                pts.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
        pts.push(lo);
        Self::new(pts)
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { points }
    }

    pub fn signed_area(&self) -> f64 {
        shoelace(&self.points[..self.points.len() - 1])
    }

    pub fn orientation(&self) -> Orientation {
        if self.signed_area() >= 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        }
    }
}

/// What produces the vector potential being integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FluxSource {
    Solenoid(SolenoidSpec),
    /// Uniform field in the symmetric gauge `A = B·(−y, x)/2`.
    Uniform { field: f64 },
}

impl FluxSource {
    pub fn vector_potential(&self, p: [f64; 2]) -> [f64; 2] {
        match self {
            FluxSource::Solenoid(s) => s.vector_potential(p),
            FluxSource::Uniform { field } => [-0.5 * field * p[1], 0.5 * field * p[0]],
        }
    }
}

/// Per-segment rule for the line integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    Midpoint,
    /// Three-point Gauss–Legendre.
    #[default]
    GaussLegendre3,
}

/// `∮A·dl` around `path` (positive for counter-clockwise circulation
/// around positive flux), with three-point Gauss–Legendre per segment.
pub fn loop_flux(source: &FluxSource, path: &LoopPath) -> f64 {
    loop_flux_with(source, path, Quadrature::GaussLegendre3)
}

pub fn loop_flux_with(source: &FluxSource, path: &LoopPath, rule: Quadrature) -> f64 {
    let (nodes, weights): (&[f64], &[f64]) = match rule {
        Quadrature::Midpoint => (&[0.0], &[1.0]),
        Quadrature::GaussLegendre3 => {
            const R: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
            (&[-R, 0.0, R], &[5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])
        }
    };
    path.points
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let d = [b[0] - a[0], b[1] - a[1]];
            let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
            nodes
                .iter()
                .zip(weights)
                .map(|(&t, &wt)| {
                    let p = [mid[0] + 0.5 * t * d[0], mid[1] + 0.5 * t * d[1]];
                    let av = source.vector_potential(p);
                    wt * (av[0] * d[0] + av[1] * d[1])
                })
                .sum::<f64>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solenoid() -> SolenoidSpec {
        SolenoidSpec::new(0.4, 1.5, [0.1, -0.3]).unwrap()
    }

    #[test]
    fn enclosing_circle_gives_flux() {
        let s = solenoid();
        let path = LoopPath::circle(s.center, 2.0 * s.radius, 4096).unwrap();
        for rule in [Quadrature::Midpoint, Quadrature::GaussLegendre3] {
            let f = loop_flux_with(&FluxSource::Solenoid(s), &path, rule);
            assert!((f - s.flux()).abs() < 1e-6 * s.flux(), "{rule:?}: {f}");
        }
    }

    #[test]
    fn non_enclosing_square_gives_zero() {
        let s = solenoid();
        let c = s.center;
        let r = s.radius;
        let path = LoopPath::rectangle([c[0] + 3.0 * r, c[1] - r], [c[0] + 5.0 * r, c[1] + r], 1024).unwrap();
        let f = loop_flux(&FluxSource::Solenoid(s), &path);
        assert!(f.abs() < 1e-8 * s.flux(), "{f}");
    }

    #[test]
    fn uniform_field_unit_square() {
        let b = 0.37;
        let path = LoopPath::rectangle([0.0, 0.0], [1.0, 1.0], 16).unwrap();
        for rule in [Quadrature::Midpoint, Quadrature::GaussLegendre3] {
            let f = loop_flux_with(&FluxSource::Uniform { field: b }, &path, rule);
            assert!((f - b).abs() < 1e-10);
        }
    }

    #[test]
    fn reversing_negates() {
        let s = solenoid();
        let path = LoopPath::circle([0.0, 0.0], 1.7, 512).unwrap();
        assert_eq!(path.orientation(), Orientation::CounterClockwise);
        let rev = path.reversed();
        assert_eq!(rev.orientation(), Orientation::Clockwise);
        let src = FluxSource::Solenoid(s);
        assert!((loop_flux(&src, &path) + loop_flux(&src, &rev)).abs() < 1e-12);
    }

    #[test]
    fn rejects_open_or_short_loops() {
        let mut pts: Vec<[f64; 2]> = (0..20).map(|i| [i as f64, (i * i) as f64]).collect();
        assert!(LoopPath::new(pts.clone()).is_err());
        pts.push(pts[0]);
        assert!(LoopPath::new(pts).is_ok());
        assert!(LoopPath::circle([0.0, 0.0], 1.0, 8).is_err());
    }
}
