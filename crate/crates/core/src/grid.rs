//! Uniform periodic grids in one or two dimensions.
//!
//! Samples sit at `min + i·h` with `h = (max − min)/n`; the point `max` itself
//! is the periodic image of `min` and is not stored.

use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prelude::*;

pub const MIN_POINTS: usize = 8;

/// Serialized form of an [`Axis`]; the spacing is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AxisSpec", into = "AxisSpec")]
pub struct Axis {
    min: f64,
    max: f64,
    n: usize,
    h: f64,
}

impl Axis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) {
            return Err(Error::invalid(format!("axis bounds must be finite, got [{min}, {max}]")));
        }
        if max <= min {
            return Err(Error::invalid(format!("axis requires max > min, got [{min}, {max}]")));
        }
        if n < MIN_POINTS {
            return Err(Error::invalid(format!("axis needs at least {MIN_POINTS} points, got {n}")));
        }
        Ok(Self { min, max, n, h: (max - min) / n as f64 })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn extent(&self) -> f64 {
        self.max - self.min
    }

    /// Coordinate of sample `i`, computed directly so there is no drift.
    pub fn coord(&self, i: usize) -> f64 {
        self.min + i as f64 * self.h
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    /// Signed angular wavenumber of FFT bin `j` (standard ordering: zero,
    /// positive frequencies, then negative ones; Nyquist is negative).
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as isize;
        let j = j as isize;
        let signed = if j < (n + 1) / 2 { j } else { j - n };
        2.0 * PI * signed as f64 / (self.n as f64 * self.h)
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.wavenumber(j)).collect()
    }

    /// Index of the sample closest to `x`, or `None` outside `[min, max)`.
    pub fn nearest_index(&self, x: f64) -> Option<usize> {
        if !(x >= self.min && x < self.max) {
            return None;
        }
        let i = ((x - self.min) / self.h).round() as usize;
        Some(i.min(self.n - 1))
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.min && x <= self.max
    }
}

impl TryFrom<AxisSpec> for Axis {
    type Error = Error;

    fn try_from(spec: AxisSpec) -> Result<Self> {
        Axis::new(spec.min, spec.max, spec.n)
    }
}

impl From<Axis> for AxisSpec {
    fn from(axis: Axis) -> Self {
        AxisSpec { min: axis.min, max: axis.max, n: axis.n }
    }
}

/// A one- or two-dimensional grid. Two-dimensional data is stored row-major
/// with `x` varying fastest: `index = iy·nx + ix`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Axis>,
}

impl Grid {
    pub fn line(x: Axis) -> Self {
        Self { x, y: None }
    }

    pub fn plane(x: Axis, y: Axis) -> Self {
        Self { x, y: Some(y) }
    }

    pub fn dims(&self) -> usize {
        if self.y.is_some() {
            2
        } else {
            1
        }
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.map_or(1, |y| y.len())
    }

    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weight of a single sample, `h^dims`.
    pub fn cell_volume(&self) -> f64 {
        self.x.spacing() * self.y.map_or(1.0, |y| y.spacing())
    }

    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx() + ix
    }

    /// `(x, y)` of a flat index; `y` is zero on a line grid.
    pub fn point(&self, index: usize) -> (f64, f64) {
        let nx = self.nx();
        let (ix, iy) = (index % nx, index / nx);
        (self.x.coord(ix), self.y.map_or(0.0, |y| y.coord(iy)))
    }

    pub fn y_axis(&self) -> Result<Axis> {
        self.y.ok_or_else(|| Error::invalid("operation needs a two-dimensional grid"))
    }
}

/// Builds the one-dimensional grid `[min, max)` with `n` samples.
pub fn make_uniform_grid(min: f64, max: f64, n: usize) -> Result<Grid> {
    Ok(Grid::line(Axis::new(min, max, n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_coordinates() {
        let g = make_uniform_grid(-10.0, 10.0, 8).unwrap();
        assert_eq!(g.x.spacing(), 2.5);
        assert_eq!(g.x.coord(0), -10.0);
        assert_eq!(g.x.coord(7), 7.5);
    }

    #[test]
    fn wavenumber_ladder_ordering() {
        let g = make_uniform_grid(0.0, 1.0, 8).unwrap();
        let k = g.x.wavenumbers();
        let two_pi = 2.0 * PI;
        let expected = [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0].map(|j| j * two_pi);
        assert_eq!(k.len(), 8);
        for (a, b) in k.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn odd_length_ladder_is_symmetric() {
        let a = Axis::new(0.0, 9.0, 9).unwrap();
        let k = a.wavenumbers();
        assert_eq!(k[4], -k[5]);
        assert!(k.iter().all(|v| v.abs() < PI / a.spacing()));
    }

    #[test]
    fn cells_telescope_to_extent() {
        let g = make_uniform_grid(-5.0, 5.0, 1024).unwrap();
        assert_eq!(g.x.spacing(), 10.0 / 1024.0);
        let total: f64 = (0..1024).map(|_| g.x.spacing()).sum();
        assert!((total - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(make_uniform_grid(0.0, 1.0, 7).is_err());
        assert!(make_uniform_grid(1.0, 1.0, 16).is_err());
        assert!(make_uniform_grid(f64::NEG_INFINITY, 1.0, 16).is_err());
        assert!(make_uniform_grid(0.0, f64::NAN, 16).is_err());
    }

    #[test]
    fn nearest_index_bounds() {
        let a = Axis::new(0.0, 8.0, 8).unwrap();
        assert_eq!(a.nearest_index(2.4), Some(2));
        assert_eq!(a.nearest_index(7.9), Some(7));
        assert_eq!(a.nearest_index(8.0), None);
        assert_eq!(a.nearest_index(-0.1), None);
    }

    #[test]
    fn two_dimensional_layout() {
        let g = Grid::plane(Axis::new(0.0, 8.0, 8).unwrap(), Axis::new(0.0, 16.0, 16).unwrap());
        assert_eq!(g.len(), 128);
        assert_eq!(g.cell_volume(), 1.0);
        assert_eq!(g.point(g.index(3, 5)), (3.0, 5.0));
    }
}
