//! Strang split-operator evolution of the Schrödinger equation with scalar
//! and vector potentials, plus screen accumulation and fringe measurement.
//!
//! One step is `V/2 · T · V/2`. With no vector potential the kinetic factor
//! is diagonal in the full wavevector. With a Landau-type or solenoid gauge
//! the kinetic step is split as `Tx/2 · Ty · Tx/2`; each factor becomes
//! diagonal after the gauge transform `ψ → e^{−ieχ/ħ}ψ` with `∂χ = A` along
//! that axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fringe::SolenoidSpec;
use crate::grid::Grid;
use crate::spectral::Spectral;
use crate::units::UnitsConfig;
use crate::wavefunction::Wavefunction;

pub const DEFAULT_WALL_HEIGHT: f64 = 1e3;
/// Upper bound on `dt·max|V|/ħ` and `|b|·dt/ħ`.
pub const STABILITY_LIMIT: f64 = 0.5;
pub const MIN_ABSORBER_CELLS: usize = 8;
/// Floor on `|ψ|²` inside the logarithmic potential.
pub const LOG_CLAMP: f64 = 1e-30;
/// Tolerated deviation of the initial norm from one.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Magnetic vector potential, fixed by its gauge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VectorPotential {
    #[default]
    None,
    /// `A = (−B·(y − y0), 0)`: uniform field everywhere.
    Landau { field: f64, y0: f64 },
    /// `A = (0, B·max(x − x0, 0))`: uniform field for `x > x0` only.
    HalfPlane { field: f64, x0: f64 },
    /// Exterior-form solenoid potential; the core must be masked.
    Solenoid(SolenoidSpec),
}

impl VectorPotential {
    pub fn is_none(&self) -> bool {
        matches!(self, VectorPotential::None)
    }

    /// `(A_x, A_y)` at a point.
    pub fn value(&self, x: f64, y: f64) -> [f64; 2] {
        match *self {
            VectorPotential::None => [0.0, 0.0],
            VectorPotential::Landau { field, y0 } => [-field * (y - y0), 0.0],
            VectorPotential::HalfPlane { field, x0 } => [0.0, field * (x - x0).max(0.0)],
            VectorPotential::Solenoid(s) => s.vector_potential([x, y]),
        }
    }

    /// `∫_{x0}^{x1} A_x dx` at fixed `y`.
    fn integral_x(&self, y: f64, x0: f64, x1: f64) -> f64 {
        match *self {
            VectorPotential::Landau { field, y0 } => -field * (y - y0) * (x1 - x0),
            VectorPotential::Solenoid(s) => s.integral_ax(y, x0, x1),
            _ => 0.0,
        }
    }

    /// `∫_{y0}^{y1} A_y dy` at fixed `x`.
    fn integral_y(&self, x: f64, y0: f64, y1: f64) -> f64 {
        match *self {
            VectorPotential::HalfPlane { field, x0 } => field * (x - x0).max(0.0) * (y1 - y0),
            VectorPotential::Solenoid(s) => s.integral_ay(x, y0, y1),
            _ => 0.0,
        }
    }

    fn has_x(&self) -> bool {
        matches!(self, VectorPotential::Landau { .. } | VectorPotential::Solenoid(_))
    }

    fn has_y(&self) -> bool {
        matches!(self, VectorPotential::HalfPlane { .. } | VectorPotential::Solenoid(_))
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            VectorPotential::None => true,
            VectorPotential::Landau { field, y0 } => field.is_finite() && y0.is_finite(),
            VectorPotential::HalfPlane { field, x0 } => field.is_finite() && x0.is_finite(),
            VectorPotential::Solenoid(s) => return s.validate(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid("vector potential parameters must be finite"))
        }
    }
}

/// Scalar potential samples and a vector potential on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    grid: Grid,
    scalar: Vec<f64>,
    vector: VectorPotential,
}

impl PotentialSpec {
    pub fn new(grid: Grid, scalar: Vec<f64>, vector: VectorPotential) -> Result<Self> {
        if scalar.len() != grid.len() {
            return Err(Error::invalid(format!(
                "potential has {} samples, grid has {}",
                scalar.len(),
                grid.len()
            )));
        }
        if let Some(i) = scalar.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("potential is not finite at index {i}")));
        }
        vector.validate()?;
        if !vector.is_none() && grid.dims() != 2 {
            return Err(Error::invalid("a vector potential needs a plane grid"));
        }
        if let VectorPotential::Solenoid(s) = vector {
            check_core_masked(&grid, &scalar, &s)?;
        }
        Ok(Self { grid, scalar, vector })
    }

    pub fn zero(grid: Grid) -> Self {
        Self { scalar: vec![0.0; grid.len()], grid, vector: VectorPotential::None }
    }

    pub fn scalar_only(grid: Grid, scalar: Vec<f64>) -> Result<Self> {
        Self::new(grid, scalar, VectorPotential::None)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn scalar(&self) -> &[f64] {
        &self.scalar
    }

    pub fn vector(&self) -> &VectorPotential {
        &self.vector
    }

    pub fn max_abs(&self) -> f64 {
        self.scalar.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn check_core_masked(grid: &Grid, scalar: &[f64], s: &SolenoidSpec) -> Result<()> {
    let vmax = scalar.iter().fold(0.0f64, |m, v| m.max(*v));
    let r2 = s.radius * s.radius;
    let mut covered = 0usize;
    for (i, &v) in scalar.iter().enumerate() {
        let (x, y) = grid.point(i);
        let (dx, dy) = (x - s.center[0], y - s.center[1]);
        if dx * dx + dy * dy <= r2 {
            covered += 1;
            if !(vmax > 0.0 && v >= 0.5 * vmax) {
                return Err(Error::invalid(format!(
                    "solenoid core is not masked at ({x}, {y}): V = {v}, need at least half of max V = {vmax}"
                )));
            }
        }
    }
    if covered == 0 {
        return Err(Error::invalid("solenoid core falls between grid points; refine the grid"));
    }
    Ok(())
}

/// `0` below `u = 0`, `1` above `u = 1`, raised cosine in between.
fn smoothstep(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if u >= 1.0 {
        1.0
    } else {
        0.5 * (1.0 - (core::f64::consts::PI * u).cos())
    }
}

/// Soft indicator of `|d| < half`, with the edge spread over `edge`.
fn soft_inside(d: f64, half: f64, edge: f64) -> f64 {
    if edge <= 0.0 {
        return if d.abs() < half { 1.0 } else { 0.0 };
    }
    smoothstep(0.5 + (half - d.abs()) / edge)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Openings {
    #[default]
    Both,
    /// Only the slit at `+separation/2`.
    Upper,
    /// Only the slit at `−separation/2`.
    Lower,
}

/// A wall normal to x with two gaps centred at `±separation/2` in y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DoubleSlit {
    pub barrier_x: f64,
    pub thickness: f64,
    pub separation: f64,
    pub width: f64,
    #[serde(default = "default_wall")]
    pub height: f64,
    #[serde(default)]
    pub openings: Openings,
    /// Width of the cosine edge ramps in grid cells.
    #[serde(default = "default_edge_cells")]
    pub edge_cells: f64,
}

fn default_wall() -> f64 {
    DEFAULT_WALL_HEIGHT
}

fn default_edge_cells() -> f64 {
    2.0
}

impl DoubleSlit {
    pub fn validate(&self) -> Result<()> {
        let all = [self.barrier_x, self.thickness, self.separation, self.width, self.height, self.edge_cells];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("slit parameters must be finite"));
        }
        if self.thickness <= 0.0 || self.width <= 0.0 || self.height <= 0.0 || self.edge_cells < 0.0 {
            return Err(Error::invalid("slit thickness, width and wall height must be positive"));
        }
        if self.width >= self.separation {
            return Err(Error::invalid("slit width must be smaller than the separation"));
        }
        Ok(())
    }

    /// Samples the wall on a plane grid.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<f64>> {
        self.validate()?;
        if grid.dims() != 2 {
            return Err(Error::invalid("a double slit needs a plane grid"));
        }
        let edge = self.edge_cells * grid.x.spacing();
        let centers: &[f64] = match self.openings {
            Openings::Both => &[0.5, -0.5],
            Openings::Upper => &[0.5],
            Openings::Lower => &[-0.5],
        };
        Ok((0..grid.len())
            .map(|i| {
                let (x, y) = grid.point(i);
                let wall = soft_inside(x - self.barrier_x, 0.5 * self.thickness, edge);
                if wall == 0.0 {
                    return 0.0;
                }
                let gaps: f64 = centers
                    .iter()
                    .map(|c| soft_inside(y - c * self.separation, 0.5 * self.width, edge))
                    .sum();
                self.height * wall * (1.0 - gaps.min(1.0))
            })
            .collect())
    }
}

/// Hard disk of `height` over `radius` with a cosine edge of `edge` length.
pub fn disk_potential(grid: &Grid, center: [f64; 2], radius: f64, height: f64, edge: f64) -> Vec<f64> {
    (0..grid.len())
        .map(|i| {
            let (x, y) = grid.point(i);
            let r = (x - center[0]).hypot(y - center[1]);
            height * soft_inside(r, radius, edge)
        })
        .collect()
}

/// `½·m·ω²·|x − c|²`.
pub fn harmonic_potential(grid: &Grid, omega: f64, mass: f64, center: [f64; 2]) -> Vec<f64> {
    (0..grid.len())
        .map(|i| {
            let (x, y) = grid.point(i);
            let (dx, dy) = (x - center[0], if grid.dims() == 2 { y - center[1] } else { 0.0 });
            0.5 * mass * omega * omega * (dx * dx + dy * dy)
        })
        .collect()
}

/// Pointwise maximum of two sampled potentials.
pub fn combine_max(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(u, v)| u.max(*v)).collect()
}

/// Edge damping: over the outer `width` cells the state is multiplied by
/// `exp(−strength·dt·ramp²)` each step, `ramp` rising linearly to 1 at the edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Absorber {
    pub width: usize,
    pub strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveConfig {
    pub dt: f64,
    pub n_steps: usize,
    #[serde(default)]
    pub absorber: Option<Absorber>,
    #[serde(default = "default_stride")]
    pub record_stride: usize,
    #[serde(default)]
    pub x_screen: Option<f64>,
}

fn default_stride() -> usize {
    1
}

impl EvolveConfig {
    pub fn new(dt: f64, n_steps: usize, record_stride: usize) -> Self {
        Self { dt, n_steps, absorber: None, record_stride, x_screen: None }
    }

    pub fn with_absorber(mut self, width: usize, strength: f64) -> Self {
        self.absorber = Some(Absorber { width, strength });
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.record_stride == 0 {
            return Err(Error::invalid("record_stride must be at least 1"));
        }
        if let Some(a) = self.absorber {
            if a.width < MIN_ABSORBER_CELLS {
                return Err(Error::invalid(format!(
                    "absorber width must be at least {MIN_ABSORBER_CELLS} cells, got {}",
                    a.width
                )));
            }
            if !(a.strength.is_finite() && a.strength >= 0.0) {
                return Err(Error::invalid("absorber strength must be non-negative"));
            }
        }
        Ok(())
    }
}

enum Kinetic {
    /// Full-step factor over the whole wavevector grid.
    Diagonal(Vec<Complex64>),
    Split {
        x_half: Vec<Complex64>,
        y_full: Vec<Complex64>,
        /// `e^{ieχ_x/ħ}` with `∂_x χ_x = A_x`.
        gauge_x: Option<Vec<Complex64>>,
        gauge_y: Option<Vec<Complex64>>,
    },
}

/// Single-step propagator for a fixed potential, time step and grid.
pub struct Propagator {
    grid: Grid,
    units: UnitsConfig,
    dt: f64,
    spectral: Spectral,
    scalar: Vec<f64>,
    log_b: Option<f64>,
    half_phase: Vec<Complex64>,
    kinetic: Kinetic,
    absorber: Option<Vec<f64>>,
}

impl std::fmt::Debug for Propagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Propagator")
            .field("grid", &self.grid)
            .field("dt", &self.dt)
            .field("log_b", &self.log_b)
            .finish_non_exhaustive()
    }
}

impl Propagator {
    pub fn new(pot: &PotentialSpec, cfg: &EvolveConfig, units: &UnitsConfig) -> Result<Self> {
        Self::build(pot, cfg, units, None)
    }

    /// Adds the potential `−b·ln max(|ψ|², LOG_CLAMP)` to each potential step.
    pub fn with_log_nonlinearity(pot: &PotentialSpec, cfg: &EvolveConfig, units: &UnitsConfig, b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::invalid("nonlinearity b must be finite"));
        }
        if b.abs() * cfg.dt / units.hbar > STABILITY_LIMIT {
            return Err(Error::Unstable(format!(
                "|b|·dt/ħ = {} exceeds {STABILITY_LIMIT}",
                b.abs() * cfg.dt / units.hbar
            )));
        }
        Self::build(pot, cfg, units, Some(b))
    }

    fn build(pot: &PotentialSpec, cfg: &EvolveConfig, units: &UnitsConfig, log_b: Option<f64>) -> Result<Self> {
        units.validate()?;
        cfg.validate()?;
        let (dt, hbar) = (cfg.dt, units.hbar);
        let guard = dt * pot.max_abs() / hbar;
        if guard >= STABILITY_LIMIT {
            return Err(Error::Unstable(format!("dt·max|V|/ħ = {guard} must stay below {STABILITY_LIMIT}")));
        }
        let grid = *pot.grid();
        let spectral = Spectral::new(&grid);
        let c = hbar / (2.0 * units.mass);
        let phase = |k2: f64, tau: f64| Complex64::from_polar(1.0, -c * k2 * tau);
        let kx = spectral.kx();
        let ky = spectral.ky();
        let vector = *pot.vector();
        let kinetic = if vector.is_none() {
            let nx = grid.nx();
            Kinetic::Diagonal(
                (0..grid.len())
                    .map(|i| {
                        let kyv = ky.get(i / nx).copied().unwrap_or(0.0);
                        phase(kx[i % nx] * kx[i % nx] + kyv * kyv, dt)
                    })
                    .collect(),
            )
        } else {
            let q = units.charge / hbar;
            let ax = grid.x;
            let ay = grid.y_axis()?;
            let gauge_x = vector.has_x().then(|| {
                (0..grid.len())
                    .map(|i| {
                        let (x, y) = grid.point(i);
                        Complex64::from_polar(1.0, q * vector.integral_x(y, ax.min(), x))
                    })
                    .collect()
            });
            let gauge_y = vector.has_y().then(|| {
                (0..grid.len())
                    .map(|i| {
                        let (x, y) = grid.point(i);
                        Complex64::from_polar(1.0, q * vector.integral_y(x, ay.min(), y))
                    })
                    .collect()
            });
            Kinetic::Split {
                x_half: kx.iter().map(|k| phase(k * k, 0.5 * dt)).collect(),
                y_full: ky.iter().map(|k| phase(k * k, dt)).collect(),
                gauge_x,
                gauge_y,
            }
        };
        let half_phase = pot.scalar().iter().map(|v| Complex64::from_polar(1.0, -v * dt / (2.0 * hbar))).collect();
        let absorber = cfg.absorber.filter(|a| a.strength > 0.0).map(|a| absorber_mask(&grid, a, dt));
        Ok(Self {
            grid,
            units: *units,
            dt,
            spectral,
            scalar: pot.scalar().to_vec(),
            log_b,
            half_phase,
            kinetic,
            absorber,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    fn potential_half(&self, psi: &mut [Complex64]) {
        match self.log_b {
            None => psi.iter_mut().zip(&self.half_phase).for_each(|(z, p)| *z *= p),
            Some(b) => {
                let s = -self.dt / (2.0 * self.units.hbar);
                for (z, v) in psi.iter_mut().zip(&self.scalar) {
                    let veff = v - b * z.norm_sqr().max(LOG_CLAMP).ln();
                    *z *= Complex64::from_polar(1.0, s * veff);
                }
            }
        }
    }

    fn kinetic_step(&mut self, psi: &mut [Complex64]) {
        let nx = self.grid.nx();
        match &self.kinetic {
            Kinetic::Diagonal(f) => {
                self.spectral.forward(psi);
                psi.iter_mut().zip(f).for_each(|(z, p)| *z *= p);
                self.spectral.inverse(psi);
            }
            Kinetic::Split { x_half, y_full, gauge_x, gauge_y } => {
                let sp = &mut self.spectral;
                let x_step = |sp: &mut Spectral, psi: &mut [Complex64]| {
                    if let Some(g) = gauge_x {
                        psi.iter_mut().zip(g).for_each(|(z, u)| *z *= u.conj());
                    }
                    sp.forward_x(psi);
                    for row in psi.chunks_mut(nx) {
                        row.iter_mut().zip(x_half).for_each(|(z, p)| *z *= p);
                    }
                    sp.inverse_x(psi);
                    if let Some(g) = gauge_x {
                        psi.iter_mut().zip(g).for_each(|(z, u)| *z *= u);
                    }
                };
                x_step(sp, psi);
                if let Some(g) = gauge_y {
                    psi.iter_mut().zip(g).for_each(|(z, u)| *z *= u.conj());
                }
                sp.forward_y(psi);
                for (row, p) in psi.chunks_mut(nx).zip(y_full) {
                    row.iter_mut().for_each(|z| *z *= p);
                }
                sp.inverse_y(psi);
                if let Some(g) = gauge_y {
                    psi.iter_mut().zip(g).for_each(|(z, u)| *z *= u);
                }
                x_step(sp, psi);
            }
        }
    }

    /// Advances `psi` by one time step.
    pub fn step(&mut self, psi: &mut Wavefunction) {
        debug_assert_eq!(psi.grid(), &self.grid);
        let t = psi.time() + self.dt;
        let data = psi.data_mut();
        self.potential_half(data);
        self.kinetic_step(data);
        self.potential_half(data);
        if let Some(m) = &self.absorber {
            data.iter_mut().zip(m).for_each(|(z, w)| *z *= w);
        }
        psi.set_time(t);
    }
}

fn absorber_mask(grid: &Grid, a: Absorber, dt: f64) -> Vec<f64> {
    // distance to the periodic seam at index 0, so the mask is even in the
    // coordinate on grids centred at the origin
    let ramp = |i: usize, n: usize| {
        let d = i.min(n - i);
        if d >= a.width {
            0.0
        } else {
            (a.width - d) as f64 / a.width as f64
        }
    };
    let nx = grid.nx();
    let ny = grid.ny();
    (0..grid.len())
        .map(|i| {
            let rx = ramp(i % nx, nx);
            let ry = if grid.dims() == 2 { ramp(i / nx, ny) } else { 0.0 };
            (-a.strength * dt * (rx * rx + ry * ry)).exp()
        })
        .collect()
}

/// Recorded frames of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub frames: Vec<Wavefunction>,
    pub dt_record: f64,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.time()).collect()
    }

    pub fn last(&self) -> &Wavefunction {
        self.frames.last().expect("a trajectory holds at least the initial frame")
    }
}

fn check_initial(psi0: &Wavefunction, pot: &PotentialSpec) -> Result<()> {
    if psi0.grid() != pot.grid() {
        return Err(Error::invalid("initial state and potential live on different grids"));
    }
    if !psi0.is_finite() {
        return Err(Error::NumericAbort { frame: 0, reason: "initial state is not finite".into() });
    }
    let n = psi0.norm2();
    if (n - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::invalid(format!("initial state must be normalized, norm² = {n}")));
    }
    Ok(())
}

/// Runs `cfg.n_steps` steps, calling `observer(frame_index, state)` at the
/// initial state and after every `record_stride` steps. Returns the final state.
pub fn evolve_observed(
    psi0: &Wavefunction,
    prop: &mut Propagator,
    cfg: &EvolveConfig,
    observer: &mut dyn FnMut(usize, &Wavefunction),
) -> Result<Wavefunction> {
    let mut psi = psi0.clone();
    observer(0, &psi);
    let mut frame = 0;
    for step in 1..=cfg.n_steps {
        prop.step(&mut psi);
        if step % cfg.record_stride == 0 || step == cfg.n_steps {
            let n = psi.norm2();
            if !n.is_finite() {
                return Err(Error::NumericAbort {
                    frame: frame + 1,
                    reason: format!("non-finite state after step {step} (t = {})", psi.time()),
                });
            }
            if step % cfg.record_stride == 0 {
                frame += 1;
                observer(frame, &psi);
            }
        }
    }
    Ok(psi)
}

/// Evolves `psi0` and keeps every recorded frame.
pub fn evolve(psi0: &Wavefunction, pot: &PotentialSpec, cfg: &EvolveConfig, units: &UnitsConfig) -> Result<Trajectory> {
    check_initial(psi0, pot)?;
    let mut prop = Propagator::new(pot, cfg, units)?;
    collect(psi0, &mut prop, cfg)
}

pub(crate) fn collect(psi0: &Wavefunction, prop: &mut Propagator, cfg: &EvolveConfig) -> Result<Trajectory> {
    let mut frames = Vec::with_capacity(cfg.n_steps / cfg.record_stride + 1);
    evolve_observed(psi0, prop, cfg, &mut |_, f| frames.push(f.clone()))?;
    Ok(Trajectory { frames, dt_record: cfg.dt * cfg.record_stride as f64 })
}

pub(crate) fn prepare(psi0: &Wavefunction, pot: &PotentialSpec) -> Result<()> {
    check_initial(psi0, pot)
}

/// Time-integrated density along the line `x = x_screen`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenPattern {
    pub x_screen: f64,
    pub s: Vec<f64>,
    pub intensity: Vec<f64>,
    #[serde(default)]
    pub metadata: Vec<(String, f64)>,
}

impl ScreenPattern {
    pub fn spacing(&self) -> f64 {
        if self.s.len() < 2 {
            0.0
        } else {
            self.s[1] - self.s[0]
        }
    }

    pub fn max(&self) -> f64 {
        self.intensity.iter().fold(0.0, |m, v| m.max(*v))
    }

    pub fn with_meta(mut self, key: &str, value: f64) -> Self {
        self.metadata.push((key.to_string(), value));
        self
    }
}

/// Streams `|ψ(x_screen, s)|²·dt_record` into a running sum.
#[derive(Debug, Clone)]
pub struct ScreenAccumulator {
    column: usize,
    weight: f64,
    pattern: ScreenPattern,
}

impl ScreenAccumulator {
    pub fn new(grid: &Grid, x_screen: f64, dt_record: f64) -> Result<Self> {
        let y = grid.y_axis().map_err(|_| Error::invalid("a screen line needs a plane grid"))?;
        if !grid.x.contains(x_screen) {
            return Err(Error::invalid(format!(
                "screen at x = {x_screen} lies outside [{}, {})",
                grid.x.min(),
                grid.x.max()
            )));
        }
        let column = grid.x.nearest_index(x_screen).ok_or_else(|| Error::invalid("screen outside grid"))?;
        Ok(Self {
            column,
            weight: dt_record,
            pattern: ScreenPattern {
                x_screen: grid.x.coord(column),
                s: y.coords(),
                intensity: vec![0.0; y.len()],
                metadata: Vec::new(),
            },
        })
    }

    pub fn add(&mut self, psi: &Wavefunction) {
        let nx = psi.grid().nx();
        for (iy, acc) in self.pattern.intensity.iter_mut().enumerate() {
            *acc += psi.data()[iy * nx + self.column].norm_sqr() * self.weight;
        }
    }

    pub fn finish(self) -> ScreenPattern {
        self.pattern
    }
}

/// Sums the recorded frames of `traj` along the screen line.
pub fn screen_pattern(traj: &Trajectory, x_screen: f64) -> Result<ScreenPattern> {
    let first = traj.frames.first().ok_or_else(|| Error::invalid("empty trajectory"))?;
    let mut acc = ScreenAccumulator::new(first.grid(), x_screen, traj.dt_record)?;
    traj.frames.iter().for_each(|f| acc.add(f));
    Ok(acc.finish())
}

/// Shift of `pattern_b` relative to `pattern_0` in units of `s`, positive
/// toward `+s`, from the circular cross-correlation of the mean-removed
/// intensities with parabolic refinement of its peak.
pub fn fringe_shift_measure(pattern_b: &ScreenPattern, pattern_0: &ScreenPattern) -> Result<f64> {
    let n = pattern_0.s.len();
    if pattern_b.s.len() != n || n < 3 {
        return Err(Error::invalid("patterns must share an s-grid of at least 3 points"));
    }
    let h = pattern_0.spacing();
    if pattern_b.s.iter().zip(&pattern_0.s).any(|(a, b)| (a - b).abs() > 1e-9 * h.abs().max(1.0)) {
        return Err(Error::invalid("patterns are sampled on different s-grids"));
    }
    let centered = |p: &ScreenPattern| -> Result<Vec<f64>> {
        let mean = p.intensity.iter().sum::<f64>() / n as f64;
        let v: Vec<f64> = p.intensity.iter().map(|x| x - mean).collect();
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if !(scale > 1e-12 * p.max()) || !(p.max() > 0.0) {
            return Err(Error::Degenerate("flat pattern has no measurable shift".into()));
        }
        Ok(v)
    };
    let a = centered(pattern_b)?;
    let b = centered(pattern_0)?;
    let corr = |m: isize| -> f64 {
        (0..n).map(|i| a[i] * b[(i as isize - m).rem_euclid(n as isize) as usize]).sum()
    };
    let half = (n / 2) as isize;
    let mut best = (0isize, f64::NEG_INFINITY);
    for m in -half..(n as isize - half) {
        let c = corr(m);
        if c > best.1 {
            best = (m, c);
        }
    }
    let (m, c0) = best;
    let (cm, cp) = (corr(m - 1), corr(m + 1));
    let denom = cm - 2.0 * c0 + cp;
    let frac = if denom < 0.0 { 0.5 * (cm - cp) / denom } else { 0.0 };
    Ok((m as f64 + frac) * h)
}

/// Local maxima of the intensity above `min_fraction·max` with `|s| ≤ window`,
/// refined by a parabola through each peak and its neighbours.
pub fn fringe_peaks(pattern: &ScreenPattern, window: f64, min_fraction: f64) -> Vec<f64> {
    let v = &pattern.intensity;
    let threshold = min_fraction * pattern.max();
    let h = pattern.spacing();
    (1..v.len().saturating_sub(1))
        .filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > threshold && pattern.s[i].abs() <= window)
        .map(|i| {
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let frac = if denom < 0.0 { 0.5 * (v[i - 1] - v[i + 1]) / denom } else { 0.0 };
            pattern.s[i] + frac * h
        })
        .collect()
}

/// Mean distance between consecutive peaks within `|s| ≤ window`.
pub fn fringe_spacing(pattern: &ScreenPattern, window: f64) -> Result<f64> {
    let peaks = fringe_peaks(pattern, window, 0.05);
    if peaks.len() < 2 {
        return Err(Error::Degenerate(format!("found {} fringe peaks, need at least 2", peaks.len())));
    }
    Ok((peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}
