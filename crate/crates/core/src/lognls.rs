//! Time evolution under the logarithmic nonlinearity and the matching
//! hydrodynamic residual.

use crate::error::{Error, Result};
use crate::gausson::{gausson_value, GaussonParams};
use crate::madelung::{euler_residual_density, Residual};
use crate::tdse::{self, EvolveConfig, PotentialSpec, Propagator, Trajectory, LOG_CLAMP};
use crate::units::UnitsConfig;
use crate::wavefunction::Wavefunction;

/// Split-operator evolution with the potential `V − b·ln max(|ψ|², LOG_CLAMP)`.
pub fn evolve_lognls(
    psi0: &Wavefunction,
    b: f64,
    v: &[f64],
    cfg: &EvolveConfig,
    units: &UnitsConfig,
) -> Result<Trajectory> {
    let pot = PotentialSpec::scalar_only(*psi0.grid(), v.to_vec())?;
    evolve_lognls_in(psi0, b, &pot, cfg, units)
}

/// As [`evolve_lognls`] with a full potential, including a vector potential.
pub fn evolve_lognls_in(
    psi0: &Wavefunction,
    b: f64,
    pot: &PotentialSpec,
    cfg: &EvolveConfig,
    units: &UnitsConfig,
) -> Result<Trajectory> {
    tdse::prepare(psi0, pot)?;
    let mut prop = Propagator::with_log_nonlinearity(pot, cfg, units, b)?;
    tdse::collect(psi0, &mut prop, cfg)
}

/// Euler residual with the log force, `∂v/∂t + (v·∇)v + (1/m)∇V_q − (b/m)∇ln n`.
pub fn lognls_hydro_residual(frames: &[Wavefunction], b: f64, units: &UnitsConfig) -> Result<Residual> {
    if !b.is_finite() {
        return Err(Error::invalid("nonlinearity b must be finite"));
    }
    euler_residual_density(frames, units, &|n| n.iter().map(|d| -b * d.max(LOG_CLAMP).ln()).collect())
}

/// Per-frame diagnostics of a run started from a gausson.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussonSample {
    pub t: f64,
    pub centroid: f64,
    pub second_moment: f64,
    /// `sqrt(Σ (|ψ|² − |Ψ_exact|²)²·h)`.
    pub l2_error: f64,
}

pub fn gausson_diagnostics(traj: &Trajectory, params: &GaussonParams) -> Vec<GaussonSample> {
    traj.frames
        .iter()
        .map(|f| {
            let t = f.time();
            let h = f.grid().cell_volume();
            let err: f64 = f
                .data()
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let (x, _) = f.grid().point(i);
                    let d = z.norm_sqr() - gausson_value(x, t, params).norm_sqr();
                    d * d
                })
                .sum();
            GaussonSample {
                t,
                centroid: f.centroid().0,
                second_moment: f.second_moment().0,
                l2_error: (err * h).sqrt(),
            }
        })
        .collect()
}

/// Least-squares slope of centroid against time.
pub fn centroid_speed(samples: &[GaussonSample]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::invalid("need at least two samples for a slope"));
    }
    let n = samples.len() as f64;
    let tm = samples.iter().map(|s| s.t).sum::<f64>() / n;
    let cm = samples.iter().map(|s| s.centroid).sum::<f64>() / n;
    let num: f64 = samples.iter().map(|s| (s.t - tm) * (s.centroid - cm)).sum();
    let den: f64 = samples.iter().map(|s| (s.t - tm) * (s.t - tm)).sum();
    Ok(num / den)
}

/// Largest `|M₂(t)/M₂(0) − 1|` over the samples.
pub fn max_width_drift(samples: &[GaussonSample]) -> f64 {
    let Some(first) = samples.first() else { return 0.0 };
    samples
        .iter()
        .map(|s| (s.second_moment / first.second_moment - 1.0).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gausson::{gausson_wavefunction, make_gausson};
    use crate::grid::make_uniform_grid;
    use crate::madelung::euler_residual;

    fn units() -> UnitsConfig {
        UnitsConfig::default()
    }

    fn run(n: usize, dt: f64, b_run: f64, t_end: f64, stride: usize) -> (Trajectory, GaussonParams) {
        let g = make_uniform_grid(-40.0, 40.0, n).unwrap();
        let p = make_gausson(1.0, 0.25, 1.0, &units(), None).unwrap().with_offset(5.0);
        let mut psi = gausson_wavefunction(&g, 0.0, &p).unwrap();
        psi.normalize().unwrap();
        let steps = (t_end / dt).round() as usize;
        let traj = evolve_lognls(&psi, b_run, &vec![0.0; n], &EvolveConfig::new(dt, steps, stride), &units()).unwrap();
        (traj, p)
    }

    #[test]
    fn gausson_is_rigid_and_linear_control_spreads() {
        let (traj, p) = run(2048, 2e-3, 0.25, 10.0, 250);
        let s = gausson_diagnostics(&traj, &p);
        assert!(s.last().unwrap().l2_error < 1e-3, "{:?}", s.last());
        assert!(max_width_drift(&s) < 0.01);
        assert!((centroid_speed(&s).unwrap() - 1.0).abs() < 1e-3);
        let norm_drift = (traj.last().norm2() - traj.frames[0].norm2()).abs();
        assert!(norm_drift < 1e-8 * 5.0);

        let (lin, _) = run(2048, 2e-3, 0.0, 10.0, 250);
        let s0 = gausson_diagnostics(&lin, &p);
        let w: Vec<f64> = s0.iter().map(|x| x.second_moment).collect();
        assert!(w.windows(2).all(|w| w[1] > w[0]));
        assert!((w.last().unwrap() / w[0]).sqrt() > 1.2);
    }

    #[test]
    fn norm_is_conserved() {
        let (traj, _) = run(1024, 1e-3, 0.25, 1.0, 1000);
        assert!((traj.last().norm2() - traj.frames[0].norm2()).abs() < 1e-8);
    }

    #[test]
    fn coarse_step_is_rejected() {
        let g = make_uniform_grid(-10.0, 10.0, 64).unwrap();
        let p = make_gausson(0.0, 0.25, 1.0, &units(), None).unwrap();
        let mut psi = gausson_wavefunction(&g, 0.0, &p).unwrap();
        psi.normalize().unwrap();
        let r = evolve_lognls(&psi, 10.0, &[0.0; 64], &EvolveConfig::new(0.1, 1, 1), &units());
        assert!(matches!(r, Err(Error::Unstable(_))));
    }

    #[test]
    fn hydro_residual_discriminates_log_term() {
        let (traj, _) = run(1024, 1e-3, 0.25, 1.0, 50);
        let with = lognls_hydro_residual(&traj.frames, 0.25, &units()).unwrap().summary;
        let without = euler_residual(&traj.frames, &vec![0.0; 1024], &units()).unwrap().summary;
        assert!(without > 100.0 * with, "{with} {without}");
    }
}
