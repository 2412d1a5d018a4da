//! The planar two-slit experiment: a Gaussian packet launched at a slit
//! barrier, with optional solenoid or uniform field, observed on a screen line.

use std::f64::consts::PI;

use slitlab_core::fringe::{predict_fringe_shift, PhaseConvention, SlitGeometry, SolenoidSpec};
use slitlab_core::grid::Grid;
use slitlab_core::tdse::{
    combine_max, disk_potential, evolve_observed, DoubleSlit, EvolveConfig, PotentialSpec, Propagator,
    ScreenAccumulator, ScreenPattern, VectorPotential,
};
use slitlab_core::wavefunction::{gaussian_packet_2d, PacketAxis};
use slitlab_core::{UnitsConfig, Wavefunction};

use crate::config::{ScenarioConfig, UniformGauge};
use crate::error::{AppError, AppResult};

/// Extra radius of the solenoid mask beyond the flux tube.
pub const MASK_MARGIN: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldSetup {
    Free,
    Solenoid { radius: f64, flux: f64, center: [f64; 2] },
    Uniform { field: f64, gauge: UniformGauge },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub grid: Grid,
    pub packet: [PacketAxis; 2],
    pub slit: DoubleSlit,
    pub screen_distance: f64,
    pub source_distance: f64,
    pub x_screen: f64,
    pub evolve: EvolveConfig,
    pub units: UnitsConfig,
    pub convention: PhaseConvention,
}

#[derive(Debug, Clone)]
pub struct ExperimentRun {
    pub pattern: ScreenPattern,
    pub final_state: Wavefunction,
}

impl Experiment {
    /// Builds the experiment from a resolved planar config.
    pub fn from_config(cfg: &ScenarioConfig) -> AppResult<Self> {
        let grid = cfg.grid();
        let y = grid.y.ok_or_else(|| AppError::Config("the planar experiment needs grid.y".into()))?;
        let packet = cfg.packet();
        let py = packet.y.ok_or_else(|| AppError::Config("the planar experiment needs packet.y".into()))?;
        let g = cfg.geometry();
        let slit = DoubleSlit {
            barrier_x: g.barrier_x,
            thickness: g.barrier_thickness,
            separation: g.slit_separation,
            width: g.slit_width,
            height: g.wall_height,
            openings: g.openings,
            edge_cells: g.edge_cells,
        };
        slit.validate()?;
        let evolve = *cfg.evolve();
        let x_screen = evolve.x_screen.unwrap_or(g.barrier_x + g.screen_distance);
        Ok(Self {
            grid: Grid::plane(grid.x, y),
            packet: [packet.x, py],
            slit,
            screen_distance: g.screen_distance,
            source_distance: g.source_distance,
            x_screen,
            evolve,
            units: cfg.units,
            convention: g.convention,
        })
    }

    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.packet[0].k0
    }

    /// Closed-form counterpart with `L` measured from the barrier centre.
    pub fn geometry(&self, convention: PhaseConvention) -> AppResult<SlitGeometry> {
        Ok(SlitGeometry::new(
            self.screen_distance,
            self.slit.separation,
            self.source_distance,
            self.wavelength(),
            1.0,
            convention,
        )?)
    }

    pub fn potential(&self, field: &FieldSetup) -> AppResult<PotentialSpec> {
        let mut v = self.slit.sample(&self.grid)?;
        let vector = match *field {
            FieldSetup::Free => VectorPotential::None,
            FieldSetup::Solenoid { radius, flux, center } => {
                let spec = SolenoidSpec::with_flux(radius, flux, center)?;
                let edge = 2.0 * self.grid.x.spacing();
                let disk = disk_potential(&self.grid, center, radius + MASK_MARGIN, self.slit.height, edge);
                v = combine_max(&v, &disk);
                VectorPotential::Solenoid(spec)
            }
            FieldSetup::Uniform { field, gauge: UniformGauge::HalfPlane } => {
                VectorPotential::HalfPlane { field, x0: self.downstream_face() }
            }
            FieldSetup::Uniform { field, gauge: UniformGauge::Landau } => VectorPotential::Landau { field, y0: 0.0 },
        };
        Ok(PotentialSpec::new(self.grid, v, vector)?)
    }

    fn downstream_face(&self) -> f64 {
        self.slit.barrier_x + 0.5 * self.slit.thickness
    }

    /// Relative phase `eΦ/ħ` between the two paths to the screen centre.
    pub fn enclosed_phase(&self, field: &FieldSetup) -> AppResult<f64> {
        let q = self.units.flux_to_phase();
        Ok(match *field {
            FieldSetup::Free => 0.0,
            FieldSetup::Solenoid { flux, .. } => q * flux,
            FieldSetup::Uniform { field, gauge: UniformGauge::HalfPlane } => {
                let run = self.x_screen - self.downstream_face();
                q * field * 0.5 * self.slit.separation * run
            }
            FieldSetup::Uniform { field, gauge: UniformGauge::Landau } => {
                let geom = self.geometry(self.convention)?;
                q * field * slitlab_core::fringe::circuit_area(&geom, 0.0)?
            }
        })
    }

    pub fn predicted_shift(&self, field: &FieldSetup, convention: PhaseConvention) -> AppResult<f64> {
        Ok(predict_fringe_shift(&self.geometry(convention)?, self.enclosed_phase(field)?))
    }

    pub fn initial_state(&self) -> AppResult<Wavefunction> {
        Ok(gaussian_packet_2d(&self.grid, self.packet[0], self.packet[1])?.psi)
    }

    pub fn run(&self, field: &FieldSetup) -> AppResult<ExperimentRun> {
        let pot = self.potential(field)?;
        let psi0 = self.initial_state()?;
        let mut cfg = self.evolve;
        cfg.x_screen = Some(self.x_screen);
        let mut prop = Propagator::new(&pot, &cfg, &self.units)?;
        let mut acc = ScreenAccumulator::new(&self.grid, self.x_screen, cfg.dt * cfg.record_stride as f64)?;
        let final_state = evolve_observed(&psi0, &mut prop, &cfg, &mut |_, f| acc.add(f))?;
        let mut pattern = acc.finish();
        pattern.metadata = self.describe(field);
        Ok(ExperimentRun { pattern, final_state })
    }

    fn describe(&self, field: &FieldSetup) -> Vec<(String, f64)> {
        let mut m = vec![
            ("slit_separation".to_string(), self.slit.separation),
            ("screen_distance".to_string(), self.screen_distance),
            ("wavelength".to_string(), self.wavelength()),
        ];
        match *field {
            FieldSetup::Free => {}
            FieldSetup::Solenoid { radius, flux, .. } => {
                m.push(("solenoid_radius".into(), radius));
                m.push(("solenoid_flux".into(), flux));
                m.push(("solenoid_field".into(), flux / (PI * radius * radius)));
            }
            FieldSetup::Uniform { field, .. } => m.push(("uniform_field".into(), field)),
        }
        m
    }
}
