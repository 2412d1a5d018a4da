//! Hydrodynamic (Madelung) view of a wavefunction, `ψ = √n·e^{iS/ħ}`, and
//! residuals of the continuity, Hamilton–Jacobi and Euler equations on
//! recorded frames.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spectral::Spectral;
use crate::units::UnitsConfig;
use crate::wavefunction::Wavefunction;

/// Points with `n ≤ FLOOR_RATIO·max n` are masked.
pub const FLOOR_RATIO: f64 = 1e-12;
/// Cells next to the domain edge left out of residual summaries.
pub const EDGE_CELLS: usize = 2;

/// Density, velocity, quantum potential and (in 1D) action of one state.
/// Masked entries of `velocity` and `quantum_potential` hold NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct HydroFields {
    pub grid: Grid,
    pub time: f64,
    pub density: Vec<f64>,
    pub mass_density: Vec<f64>,
    /// Unwrapped action `S`, 1D only.
    pub action: Option<Vec<f64>>,
    pub velocity_x: Vec<f64>,
    pub velocity_y: Option<Vec<f64>>,
    pub quantum_potential: Vec<f64>,
    /// `true` where `n` exceeds the floor.
    pub mask: Vec<bool>,
    pub floor: f64,
    /// `false` if unwrapping met a phase step it could not resolve.
    pub unwrap_ok: bool,
}

impl HydroFields {
    pub fn valid_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }
}

/// Splits `psi` into hydrodynamic fields. The velocity is taken from the
/// probability current, `V_q` from the spectral Laplacian of `√n`.
pub fn decompose(psi: &Wavefunction, units: &UnitsConfig) -> Result<HydroFields> {
    units.validate()?;
    let grid = *psi.grid();
    let mut sp = Spectral::new(&grid);
    Ok(decompose_with(psi, units, &mut sp))
}

fn decompose_with(psi: &Wavefunction, units: &UnitsConfig, sp: &mut Spectral) -> HydroFields {
    let grid = *psi.grid();
    let (hbar, m) = (units.hbar, units.mass);
    let density = psi.density();
    let nmax = density.iter().fold(0.0f64, |a, b| a.max(*b));
    let floor = FLOOR_RATIO * nmax;
    let mask: Vec<bool> = density.iter().map(|&n| n > floor).collect();

    let velocity = |axis: usize, sp: &mut Spectral| -> Vec<f64> {
        let d = sp.derivative(psi.data(), axis);
        psi.data()
            .iter()
            .zip(&d)
            .zip(density.iter().zip(&mask))
            .map(|((z, dz), (&n, &ok))| if ok { hbar * (z.conj() * dz).im / (m * n) } else { f64::NAN })
            .collect()
    };
    let velocity_x = velocity(0, sp);
    let velocity_y = (grid.dims() == 2).then(|| velocity(1, sp));

    let amp: Vec<f64> = density.iter().map(|n| n.sqrt()).collect();
    let lap = sp.laplacian_real(&amp);
    let quantum_potential = lap
        .iter()
        .zip(&amp)
        .zip(&mask)
        .map(|((l, a), &ok)| if ok { -hbar * hbar / (2.0 * m) * l / a } else { f64::NAN })
        .collect();

    let (action, unwrap_ok) = if grid.dims() == 1 {
        let (s, ok) = unwrap_action(psi, &velocity_x, &mask, units);
        (Some(s), ok)
    } else {
        (None, true)
    };

    HydroFields {
        grid,
        time: psi.time(),
        mass_density: density.iter().map(|n| n * m).collect(),
        density,
        action,
        velocity_x,
        velocity_y,
        quantum_potential,
        mask,
        floor,
        unwrap_ok,
    }
}

/// Unwraps `ħ·arg ψ` along x, choosing at each step the branch closest to
/// the increment predicted by the current velocity. A predicted increment of
/// `π` or more cannot be resolved and is reported as a failure.
fn unwrap_action(psi: &Wavefunction, v: &[f64], mask: &[bool], units: &UnitsConfig) -> (Vec<f64>, bool) {
    let h = psi.grid().x.spacing();
    let data = psi.data();
    let k = units.mass / units.hbar;
    let mut phase = vec![f64::NAN; data.len()];
    let mut ok = true;
    let mut prev: Option<usize> = None;
    let mut acc = 0.0;
    for i in 0..data.len() {
        if !mask[i] {
            prev = None;
            continue;
        }
        match prev {
            None => acc = data[i].arg(),
            Some(j) => {
                let raw = (data[i] * data[j].conj()).arg();
                let predicted = 0.5 * k * (v[i] + v[j]) * h;
                if predicted.abs() >= PI {
                    ok = false;
                }
                let turns = ((predicted - raw) / (2.0 * PI)).round();
                acc += raw + 2.0 * PI * turns;
            }
        }
        phase[i] = acc;
        prev = Some(i);
    }
    (phase.into_iter().map(|p| units.hbar * p).collect(), ok)
}

/// Rebuilds `√n·e^{iS/ħ}` from 1D fields; masked points get zero amplitude.
pub fn recompose(fields: &HydroFields, units: &UnitsConfig) -> Result<Wavefunction> {
    let s = fields
        .action
        .as_ref()
        .ok_or_else(|| Error::invalid("recompose needs the 1D action field"))?;
    if !fields.unwrap_ok {
        return Err(Error::Degenerate("action was not unwrapped cleanly".into()));
    }
    let data = fields
        .density
        .iter()
        .zip(s)
        .zip(&fields.mask)
        .map(|((n, s), &ok)| if ok { Complex64::from_polar(n.sqrt(), s / units.hbar) } else { Complex64::default() })
        .collect();
    Wavefunction::new(fields.grid, data, fields.time)
}

/// Pointwise residual on each interior frame (NaN where masked) and the
/// summary `sqrt(mean over frames of Σ r²·dV)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub times: Vec<f64>,
    pub fields: Vec<Vec<f64>>,
    pub summary: f64,
    pub evaluated_points: usize,
}

struct Frames {
    grid: Grid,
    dt: f64,
    hydro: Vec<HydroFields>,
}

fn prepare(frames: &[Wavefunction], units: &UnitsConfig) -> Result<Frames> {
    units.validate()?;
    if frames.len() < 3 {
        return Err(Error::invalid(format!("need at least 3 frames, got {}", frames.len())));
    }
    let grid = *frames[0].grid();
    if frames.iter().any(|f| f.grid() != &grid) {
        return Err(Error::invalid("frames live on different grids"));
    }
    let dt = frames[1].time() - frames[0].time();
    if !(dt > 0.0) {
        return Err(Error::invalid("frame times must increase"));
    }
    for w in frames.windows(2) {
        if ((w[1].time() - w[0].time()) - dt).abs() > 1e-9 * dt {
            return Err(Error::invalid("frames are not uniformly spaced in time"));
        }
    }
    let mut sp = Spectral::new(&grid);
    let hydro = frames.iter().map(|f| decompose_with(f, units, &mut sp)).collect();
    Ok(Frames { grid, dt, hydro })
}

fn is_interior(grid: &Grid, i: usize) -> bool {
    let inside = |j: usize, n: usize| j >= EDGE_CELLS && j + EDGE_CELLS < n;
    let nx = grid.nx();
    inside(i % nx, nx) && (grid.dims() == 1 || inside(i / nx, grid.ny()))
}

fn summarize(grid: &Grid, times: Vec<f64>, fields: Vec<Vec<f64>>) -> Result<Residual> {
    let mut total = 0.0;
    let mut count = 0;
    for f in &fields {
        for (i, r) in f.iter().enumerate() {
            if r.is_finite() && is_interior(grid, i) {
                total += r * r;
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::Degenerate("every point is masked".into()));
    }
    let summary = (total * grid.cell_volume() / fields.len() as f64).sqrt();
    Ok(Residual { times, fields, summary, evaluated_points: count })
}

/// Second-order central difference along `axis` with periodic wrap; NaN if
/// either neighbour is masked.
fn central_diff(grid: &Grid, f: &[f64], mask: &[bool], axis: usize) -> Vec<f64> {
    let nx = grid.nx();
    let (n, stride, h) = if axis == 0 {
        (nx, 1, grid.x.spacing())
    } else {
        (grid.ny(), nx, grid.y.map_or(1.0, |a| a.spacing()))
    };
    (0..f.len())
        .map(|i| {
            let j = if axis == 0 { i % nx } else { i / nx };
            let base = i - j * stride;
            let ip = base + ((j + 1) % n) * stride;
            let im = base + ((j + n - 1) % n) * stride;
            if mask[ip] && mask[im] {
                (f[ip] - f[im]) / (2.0 * h)
            } else {
                f64::NAN
            }
        })
        .collect()
}

/// `∂n/∂t + ∇·(n v)` with a centred time difference and the current
/// `n v = (ħ/m)·Im(ψ*∇ψ)` differentiated spectrally.
pub fn continuity_residual(frames: &[Wavefunction], units: &UnitsConfig) -> Result<Residual> {
    let fr = prepare(frames, units)?;
    let grid = fr.grid;
    let mut sp = Spectral::new(&grid);
    let c = units.hbar / units.mass;
    let mut fields = Vec::new();
    let mut times = Vec::new();
    for i in 1..frames.len() - 1 {
        let psi = frames[i].data();
        let mut div = vec![0.0; grid.len()];
        for axis in 0..grid.dims() {
            let d = sp.derivative(psi, axis);
            let j: Vec<f64> = psi.iter().zip(&d).map(|(z, dz)| c * (z.conj() * dz).im).collect();
            let dj = sp.derivative_real(&j, axis);
            div.iter_mut().zip(&dj).for_each(|(a, b)| *a += b);
        }
        let (prev, here, next) = (&fr.hydro[i - 1], &fr.hydro[i], &fr.hydro[i + 1]);
        let r = (0..grid.len())
            .map(|k| {
                if here.mask[k] {
                    (next.density[k] - prev.density[k]) / (2.0 * fr.dt) + div[k]
                } else {
                    f64::NAN
                }
            })
            .collect();
        fields.push(r);
        times.push(here.time);
    }
    summarize(&grid, times, fields)
}

fn check_potential(grid: &Grid, v: &[f64]) -> Result<()> {
    if v.len() != grid.len() {
        return Err(Error::invalid(format!("potential has {} samples, grid has {}", v.len(), grid.len())));
    }
    Ok(())
}

/// `∂S/∂t + (∇S)²/(2m) + V + V_q` in 1D. `∂S/∂t` comes from the phase of
/// `ψ(t+Δt)·ψ*(t−Δt)`, `∇S` from the current.
pub fn hj_residual(frames: &[Wavefunction], v: &[f64], units: &UnitsConfig) -> Result<Residual> {
    let fr = prepare(frames, units)?;
    let grid = fr.grid;
    if grid.dims() != 1 {
        return Err(Error::invalid("the Hamilton–Jacobi residual is defined on line grids only"));
    }
    check_potential(&grid, v)?;
    let m = units.mass;
    let mut fields = Vec::new();
    let mut times = Vec::new();
    for i in 1..frames.len() - 1 {
        let (a, b) = (frames[i - 1].data(), frames[i + 1].data());
        let (prev, here, next) = (&fr.hydro[i - 1], &fr.hydro[i], &fr.hydro[i + 1]);
        let r = (0..grid.len())
            .map(|k| {
                if !(prev.mask[k] && here.mask[k] && next.mask[k]) {
                    return f64::NAN;
                }
                let ds = units.hbar * (b[k] * a[k].conj()).arg() / (2.0 * fr.dt);
                let u = here.velocity_x[k];
                ds + 0.5 * m * u * u + v[k] + here.quantum_potential[k]
            })
            .collect();
        fields.push(r);
        times.push(here.time);
    }
    summarize(&grid, times, fields)
}

/// `∂v/∂t + (v·∇)v + (1/m)∇(V + V_q)`; pointwise magnitude in 2D.
pub fn euler_residual(frames: &[Wavefunction], v: &[f64], units: &UnitsConfig) -> Result<Residual> {
    let fr = prepare(frames, units)?;
    check_potential(&fr.grid, v)?;
    euler_with(&fr, units, &|_| v.to_vec())
}

/// Euler residual with a frame-dependent potential built from the density.
pub(crate) fn euler_residual_density(
    frames: &[Wavefunction],
    units: &UnitsConfig,
    potential: &dyn Fn(&[f64]) -> Vec<f64>,
) -> Result<Residual> {
    let fr = prepare(frames, units)?;
    euler_with(&fr, units, potential)
}

fn euler_with(fr: &Frames, units: &UnitsConfig, potential: &dyn Fn(&[f64]) -> Vec<f64>) -> Result<Residual> {
    let grid = fr.grid;
    let m = units.mass;
    let mut fields = Vec::new();
    let mut times = Vec::new();
    for i in 1..fr.hydro.len() - 1 {
        let (prev, here, next) = (&fr.hydro[i - 1], &fr.hydro[i], &fr.hydro[i + 1]);
        let mask: Vec<bool> = (0..grid.len()).map(|k| prev.mask[k] && here.mask[k] && next.mask[k]).collect();
        let vext = potential(&here.density);
        let total: Vec<f64> = vext.iter().zip(&here.quantum_potential).map(|(a, b)| a + b).collect();
        let comps: Vec<(&Vec<f64>, &Vec<f64>, &Vec<f64>)> = match (&here.velocity_y, &prev.velocity_y, &next.velocity_y) {
            (Some(hy), Some(py), Some(ny)) => vec![
                (&here.velocity_x, &prev.velocity_x, &next.velocity_x),
                (hy, py, ny),
            ],
            _ => vec![(&here.velocity_x, &prev.velocity_x, &next.velocity_x)],
        };
        let mut sq = vec![0.0; grid.len()];
        for (axis, (vh, vp, vn)) in comps.iter().enumerate() {
            let grad_p = central_diff(&grid, &total, &mask, axis);
            let mut adv = vec![0.0; grid.len()];
            for (b, (wh, _, _)) in comps.iter().enumerate() {
                let d = central_diff(&grid, vh, &mask, b);
                adv.iter_mut().zip(wh.iter().zip(&d)).for_each(|(a, (w, dv))| *a += w * dv);
            }
            for k in 0..grid.len() {
                let r = (vn[k] - vp[k]) / (2.0 * fr.dt) + adv[k] + grad_p[k] / m;
                sq[k] += r * r;
            }
        }
        let r = sq
            .iter()
            .zip(&mask)
            .map(|(s, &ok)| if ok { s.sqrt() } else { f64::NAN })
            .collect();
        fields.push(r);
        times.push(here.time);
    }
    summarize(&grid, times, fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_uniform_grid;
    use crate::tdse::{evolve, EvolveConfig, PotentialSpec};
    use crate::wavefunction::gaussian_packet;

    fn units() -> UnitsConfig {
        UnitsConfig::default()
    }

    fn plane_wave_frames(k: f64, n_frames: usize, dt: f64) -> Vec<Wavefunction> {
        let g = make_uniform_grid(0.0, 2.0 * PI, 64).unwrap();
        let omega = k * k / 2.0;
        (0..n_frames)
            .map(|i| {
                let t = i as f64 * dt;
                Wavefunction::from_fn(g, t, |x, _| Complex64::from_polar(0.4, k * x - omega * t))
            })
            .collect()
    }

    #[test]
    fn plane_wave_fields() {
        let f = &plane_wave_frames(3.0, 1, 0.1)[0];
        let h = decompose(f, &units()).unwrap();
        for i in 0..h.density.len() {
            assert!((h.velocity_x[i] - 3.0).abs() < 1e-8);
            assert!(h.quantum_potential[i].abs() < 1e-8);
            assert!((h.density[i] - 0.16).abs() < 1e-14);
        }
        assert!(h.unwrap_ok);
    }

    #[test]
    fn plane_wave_residuals_vanish() {
        let frames = plane_wave_frames(3.0, 5, 0.01);
        let zero = vec![0.0; 64];
        assert!(continuity_residual(&frames, &units()).unwrap().summary < 1e-8);
        assert!(hj_residual(&frames, &zero, &units()).unwrap().summary < 1e-8);
        assert!(euler_residual(&frames, &zero, &units()).unwrap().summary < 1e-8);
    }

    #[test]
    fn gaussian_quantum_potential() {
        let g = make_uniform_grid(-20.0, 20.0, 1024).unwrap();
        let p = gaussian_packet(&g, 0.0, 0.0, 1.0).unwrap();
        let h = decompose(&p.psi, &units()).unwrap();
        for (i, x) in g.x.coords().into_iter().enumerate() {
            if x.abs() < 4.0 {
                let exact = -0.5 * (x * x / 4.0 - 0.5);
                assert!((h.quantum_potential[i] - exact).abs() < 1e-6 * exact.abs().max(1.0));
            }
        }
    }

    #[test]
    fn too_few_frames_rejected() {
        let frames = plane_wave_frames(1.0, 2, 0.1);
        assert!(continuity_residual(&frames, &units()).is_err());
    }

    #[test]
    fn recompose_reproduces_state() {
        let g = make_uniform_grid(-20.0, 20.0, 512).unwrap();
        let p = gaussian_packet(&g, 1.0, 4.0, 1.5).unwrap();
        let traj = evolve(&p.psi, &PotentialSpec::zero(g), &EvolveConfig::new(1e-3, 500, 500), &units()).unwrap();
        let psi = traj.last();
        let h = decompose(psi, &units()).unwrap();
        assert!(h.unwrap_ok);
        let rec = recompose(&h, &units()).unwrap();
        let overlap: Complex64 = psi.data().iter().zip(rec.data()).map(|(a, b)| a.conj() * b).sum();
        let phase = Complex64::from_polar(1.0, overlap.arg());
        let err = psi
            .data()
            .iter()
            .zip(rec.data())
            .zip(&h.mask)
            .filter(|(_, ok)| **ok)
            .map(|((a, b), _)| (b - a * phase).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
    }

    fn free_run(n: usize, dt: f64) -> Vec<Wavefunction> {
        let g = make_uniform_grid(-16.0, 16.0, n).unwrap();
        let p = gaussian_packet(&g, -2.0, 2.0, 1.0).unwrap();
        let steps = (1.0 / dt).round() as usize;
        let stride = 25;
        evolve(&p.psi, &PotentialSpec::zero(g), &EvolveConfig::new(dt, steps, stride), &units())
            .unwrap()
            .frames
    }

    #[test]
    fn residuals_converge_at_second_order() {
        let coarse = free_run(256, 2e-3);
        let fine = free_run(512, 1e-3);
        let z = |f: &[Wavefunction]| vec![0.0; f[0].grid().len()];
        let ratios = [
            continuity_residual(&coarse, &units()).unwrap().summary / continuity_residual(&fine, &units()).unwrap().summary,
            hj_residual(&coarse, &z(&coarse), &units()).unwrap().summary
                / hj_residual(&fine, &z(&fine), &units()).unwrap().summary,
            euler_residual(&coarse, &z(&coarse), &units()).unwrap().summary
                / euler_residual(&fine, &z(&fine), &units()).unwrap().summary,
        ];
        for r in ratios {
            assert!((3.5..4.5).contains(&r), "{ratios:?}");
        }
    }
}
