//! FFT plans and spectral derivatives on periodic grids.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::wavefunction::Wavefunction;

/// Forward/inverse transforms along each axis of a grid. Inverse transforms
/// are normalized so `inverse(forward(f)) = f`.
pub struct Spectral {
    grid: Grid,
    fx: Arc<dyn Fft<f64>>,
    ix: Arc<dyn Fft<f64>>,
    fy: Option<(Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>)>,
    kx: Vec<f64>,
    ky: Vec<f64>,
    scratch: Vec<Complex64>,
    transposed: Vec<Complex64>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish_non_exhaustive()
    }
}

impl Spectral {
    pub fn new(grid: &Grid) -> Self {
        let mut planner = FftPlanner::new();
        let fx = planner.plan_fft_forward(grid.nx());
        let ix = planner.plan_fft_inverse(grid.nx());
        let fy = grid
            .y
            .map(|y| (planner.plan_fft_forward(y.len()), planner.plan_fft_inverse(y.len())));
        let mut scratch_len = fx.get_inplace_scratch_len().max(ix.get_inplace_scratch_len());
        if let Some((f, i)) = &fy {
            scratch_len = scratch_len.max(f.get_inplace_scratch_len()).max(i.get_inplace_scratch_len());
        }
        Self {
            grid: *grid,
            kx: grid.x.wavenumbers(),
            ky: grid.y.map(|y| y.wavenumbers()).unwrap_or_default(),
            transposed: if grid.dims() == 2 { vec![Complex64::default(); grid.len()] } else { Vec::new() },
            scratch: vec![Complex64::default(); scratch_len],
            fx,
            ix,
            fy,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kx(&self) -> &[f64] {
        &self.kx
    }

    pub fn ky(&self) -> &[f64] {
        &self.ky
    }

    /// Transform every row (along x).
    pub fn forward_x(&mut self, data: &mut [Complex64]) {
        self.fx.process_with_scratch(data, &mut self.scratch);
    }

    pub fn inverse_x(&mut self, data: &mut [Complex64]) {
        self.ix.process_with_scratch(data, &mut self.scratch);
        let s = 1.0 / self.grid.nx() as f64;
        data.iter_mut().for_each(|z| *z *= s);
    }

    /// Transform every column (along y). No-op on a line grid.
    pub fn forward_y(&mut self, data: &mut [Complex64]) {
        self.along_y(data, true);
    }

    pub fn inverse_y(&mut self, data: &mut [Complex64]) {
        self.along_y(data, false);
    }

    fn along_y(&mut self, data: &mut [Complex64], forward: bool) {
        let Some((f, i)) = &self.fy else { return };
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        transpose::transpose(data, &mut self.transposed, nx, ny);
        let plan = if forward { f } else { i };
        plan.process_with_scratch(&mut self.transposed, &mut self.scratch);
        transpose::transpose(&self.transposed, data, ny, nx);
        if !forward {
            let s = 1.0 / ny as f64;
            data.iter_mut().for_each(|z| *z *= s);
        }
    }

    pub fn forward(&mut self, data: &mut [Complex64]) {
        self.forward_x(data);
        self.forward_y(data);
    }

    pub fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse_y(data);
        self.inverse_x(data);
    }

    /// Spectral first derivative along `axis` (0 = x, 1 = y). The Nyquist
    /// mode is dropped, as its derivative is not representable.
    pub fn derivative(&mut self, data: &[Complex64], axis: usize) -> Vec<Complex64> {
        let mut buf = data.to_vec();
        let nx = self.grid.nx();
        if axis == 0 {
            self.forward_x(&mut buf);
            let nyq = nyquist(nx);
            for row in buf.chunks_mut(nx) {
                for (j, z) in row.iter_mut().enumerate() {
                    *z *= if Some(j) == nyq { Complex64::default() } else { Complex64::new(0.0, self.kx[j]) };
                }
            }
            self.inverse_x(&mut buf);
        } else {
            self.forward_y(&mut buf);
            let nyq = nyquist(self.grid.ny());
            for (iy, row) in buf.chunks_mut(nx).enumerate() {
                let factor = if Some(iy) == nyq { Complex64::default() } else { Complex64::new(0.0, self.ky[iy]) };
                row.iter_mut().for_each(|z| *z *= factor);
            }
            self.inverse_y(&mut buf);
        }
        buf
    }

    /// Spectral derivative of a real periodic field.
    pub fn derivative_real(&mut self, data: &[f64], axis: usize) -> Vec<f64> {
        let c: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.derivative(&c, axis).into_iter().map(|z| z.re).collect()
    }

    /// Spectral Laplacian of a real periodic field.
    pub fn laplacian_real(&mut self, data: &[f64]) -> Vec<f64> {
        let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        let nx = self.grid.nx();
        for (iy, row) in buf.chunks_mut(nx).enumerate() {
            let ky2 = self.ky.get(iy).map_or(0.0, |k| k * k);
            for (j, z) in row.iter_mut().enumerate() {
                *z *= -(self.kx[j] * self.kx[j] + ky2);
            }
        }
        self.inverse(&mut buf);
        buf.into_iter().map(|z| z.re).collect()
    }
}

fn nyquist(n: usize) -> Option<usize> {
    (n % 2 == 0).then_some(n / 2)
}

/// Momentum-space expectation `⟨k⟩` per axis, `Σ|φ_k|²·k / Σ|φ_k|²`.
pub fn mean_wavenumber(psi: &Wavefunction) -> Result<(f64, f64)> {
    let grid = *psi.grid();
    let mut sp = Spectral::new(&grid);
    let mut buf = psi.data().to_vec();
    sp.forward(&mut buf);
    let nx = grid.nx();
    let (mut kx, mut ky, mut total) = (0.0, 0.0, 0.0);
    for (i, z) in buf.iter().enumerate() {
        let w = z.norm_sqr();
        kx += w * sp.kx[i % nx];
        ky += w * sp.ky.get(i / nx).copied().unwrap_or(0.0);
        total += w;
    }
    if !(total > 0.0) {
        return Err(Error::Degenerate("zero state has no mean momentum".into()));
    }
    Ok((kx / total, ky / total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_uniform_grid, Axis};
    use crate::wavefunction::{gaussian_packet, gaussian_packet_2d, PacketAxis};

    #[test]
    fn round_trip_is_identity() {
        let g = Grid::plane(Axis::new(-4.0, 4.0, 32).unwrap(), Axis::new(-2.0, 2.0, 16).unwrap());
        let mut sp = Spectral::new(&g);
        let orig: Vec<Complex64> = (0..g.len()).map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos())).collect();
        let mut buf = orig.clone();
        sp.forward(&mut buf);
        sp.inverse(&mut buf);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn derivatives_of_trig_functions() {
        let g = Grid::plane(Axis::new(0.0, 2.0 * std::f64::consts::PI, 32).unwrap(), Axis::new(0.0, 1.0, 16).unwrap());
        let mut sp = Spectral::new(&g);
        let f: Vec<f64> = (0..g.len())
            .map(|i| {
                let (x, y) = g.point(i);
                (3.0 * x).sin() * (2.0 * std::f64::consts::PI * y).cos()
            })
            .collect();
        let dx = sp.derivative_real(&f, 0);
        let dy = sp.derivative_real(&f, 1);
        let lap = sp.laplacian_real(&f);
        let two_pi = 2.0 * std::f64::consts::PI;
        for i in 0..g.len() {
            let (x, y) = g.point(i);
            assert!((dx[i] - 3.0 * (3.0 * x).cos() * (two_pi * y).cos()).abs() < 1e-11);
            assert!((dy[i] + two_pi * (3.0 * x).sin() * (two_pi * y).sin()).abs() < 1e-11);
            assert!((lap[i] + (9.0 + two_pi * two_pi) * f[i]).abs() < 1e-10);
        }
    }

    #[test]
    fn mean_momentum_of_boosted_packet() {
        let g = make_uniform_grid(-20.0, 20.0, 512).unwrap();
        let p = gaussian_packet(&g, 0.0, 5.0, 1.0).unwrap();
        let (k, _) = mean_wavenumber(&p.psi).unwrap();
        assert!((k - 5.0).abs() < 1e-6, "{k}");

        let g2 = Grid::plane(Axis::new(-10.0, 10.0, 128).unwrap(), Axis::new(-10.0, 10.0, 64).unwrap());
        let p2 = gaussian_packet_2d(
            &g2,
            PacketAxis { center: 0.0, k0: 2.0, sigma: 1.0 },
            PacketAxis { center: 1.0, k0: -1.5, sigma: 1.2 },
        )
        .unwrap();
        let (kx, ky) = mean_wavenumber(&p2.psi).unwrap();
        assert!((kx - 2.0).abs() < 1e-6 && (ky + 1.5).abs() < 1e-6);
    }
}
