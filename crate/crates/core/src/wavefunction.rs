//! Complex fields on a [`Grid`] and the initial-condition generators.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, Grid};
use crate::prelude::*;

/// Clipped fraction of a packet's analytic norm above which it is flagged.
pub const CLIP_WARNING: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct Wavefunction {
    grid: Grid,
    data: Vec<Complex64>,
    time: f64,
}

impl Wavefunction {
    pub fn new(grid: Grid, data: Vec<Complex64>, time: f64) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::invalid(format!(
                "wavefunction has {} samples but grid has {}",
                data.len(),
                grid.len()
            )));
        }
        if !time.is_finite() {
            return Err(Error::invalid("time must be finite"));
        }
        Ok(Self { grid, data, time })
    }

    /// Samples `f(x, y)` at every grid point (`y = 0` on a line).
    pub fn from_fn(grid: Grid, time: f64, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let data = (0..grid.len())
            .map(|i| {
                let (x, y) = grid.point(i);
                f(x, y)
            })
            .collect();
        Self { grid, data, time }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn set_time(&mut self, time: f64) {
        self.time = time;
    }

    pub fn density(&self) -> Vec<f64> {
        self.data.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn norm2(&self) -> f64 {
        norm2(self)
    }

    pub fn scale(&mut self, factor: f64) {
        for z in &mut self.data {
            *z *= factor;
        }
    }

    /// Multiplies by `e^{iφ}`.
    pub fn rotate_phase(&mut self, phi: f64) {
        let w = Complex64::from_polar(1.0, phi);
        for z in &mut self.data {
            *z *= w;
        }
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.norm2();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Degenerate(format!("cannot normalize a state with norm {n}")));
        }
        self.scale(1.0 / n.sqrt());
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Density-weighted mean position along x (and y in 2D).
    pub fn centroid(&self) -> (f64, f64) {
        let (mut sx, mut sy, mut total) = (0.0, 0.0, 0.0);
        for (i, z) in self.data.iter().enumerate() {
            let (x, y) = self.grid.point(i);
            let w = z.norm_sqr();
            sx += w * x;
            sy += w * y;
            total += w;
        }
        (sx / total, sy / total)
    }

    /// Density-weighted variance along x (and y in 2D) about the centroid.
    pub fn second_moment(&self) -> (f64, f64) {
        let (cx, cy) = self.centroid();
        let (mut sx, mut sy, mut total) = (0.0, 0.0, 0.0);
        for (i, z) in self.data.iter().enumerate() {
            let (x, y) = self.grid.point(i);
            let w = z.norm_sqr();
            sx += w * (x - cx) * (x - cx);
            sy += w * (y - cy) * (y - cy);
            total += w;
        }
        (sx / total, sy / total)
    }
}

/// Discrete squared norm, `Σ|ψ|²·h^dims` (left Riemann sum).
pub fn norm2(psi: &Wavefunction) -> f64 {
    psi.data.iter().map(|z| z.norm_sqr()).sum::<f64>() * psi.grid.cell_volume()
}

/// Per-axis Gaussian packet parameters: centre, mean wavenumber and the
/// standard deviation of `|ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketAxis {
    pub center: f64,
    pub k0: f64,
    pub sigma: f64,
}

/// A normalized packet together with the share of its analytic norm that
/// fell outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub psi: Wavefunction,
    pub clipped_mass: f64,
}

impl Packet {
    pub fn is_clipped(&self) -> bool {
        self.clipped_mass > CLIP_WARNING
    }
}

/// `ψ(x) ∝ exp(−(x−x0)²/(4σ²))·exp(i·k0·x)`, normalized on the grid, `t = 0`.
pub fn gaussian_packet(grid: &Grid, x0: f64, k0: f64, sigma: f64) -> Result<Packet> {
    if grid.dims() != 1 {
        return Err(Error::invalid("gaussian_packet expects a line grid; use gaussian_packet_2d"));
    }
    build_packet(grid, &[PacketAxis { center: x0, k0, sigma }])
}

/// Product of two [`PacketAxis`] profiles on a plane grid.
pub fn gaussian_packet_2d(grid: &Grid, x: PacketAxis, y: PacketAxis) -> Result<Packet> {
    if grid.dims() != 2 {
        return Err(Error::invalid("gaussian_packet_2d expects a plane grid"));
    }
    build_packet(grid, &[x, y])
}

fn build_packet(grid: &Grid, axes: &[PacketAxis]) -> Result<Packet> {
    for a in axes {
        if !(a.sigma.is_finite() && a.sigma > 0.0) {
            return Err(Error::invalid(format!("packet width must be positive, got {}", a.sigma)));
        }
        if !(a.center.is_finite() && a.k0.is_finite()) {
            return Err(Error::invalid("packet centre and wavenumber must be finite"));
        }
    }
    let profile = |a: &PacketAxis, u: f64| {
        let d = u - a.center;
        Complex64::from_polar((-d * d / (4.0 * a.sigma * a.sigma)).exp(), a.k0 * u)
    };
    let mut psi = Wavefunction::from_fn(*grid, 0.0, |x, y| {
        let mut z = profile(&axes[0], x);
        if let Some(ay) = axes.get(1) {
            z *= profile(ay, y);
        }
        z
    });
    psi.normalize()?;

    let grid_axes: [Option<Axis>; 2] = [Some(grid.x), grid.y];
    let mut inside = 1.0;
    for (a, axis) in axes.iter().zip(grid_axes.iter().flatten()) {
        inside *= 1.0 - outside_mass(a, axis);
    }
    Ok(Packet { psi, clipped_mass: 1.0 - inside })
}

/// Mass of the normal density `N(center, σ²)` outside `[min, max]`.
fn outside_mass(a: &PacketAxis, axis: &Axis) -> f64 {
    let s = a.sigma * core::f64::consts::SQRT_2;
    0.5 * libm::erfc((axis.max() - a.center) / s) + 0.5 * libm::erfc((a.center - axis.min()) / s)
}
