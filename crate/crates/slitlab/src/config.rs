//! Scenario configuration. Every section is strict (unknown keys are
//! rejected) and missing sections are filled with scenario defaults by
//! [`ScenarioConfig::resolve`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use slitlab_core::fringe::PhaseConvention;
use slitlab_core::grid::Axis;
use slitlab_core::tdse::{Absorber, EvolveConfig, Openings, DEFAULT_WALL_HEIGHT};
use slitlab_core::wavefunction::PacketAxis;
use slitlab_core::UnitsConfig;

use crate::error::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Fringe,
    Ab,
    Evolve2d,
    Madelung,
    Gausson,
    Suite,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Fringe => "fringe",
            ScenarioKind::Ab => "ab",
            ScenarioKind::Evolve2d => "evolve2d",
            ScenarioKind::Madelung => "madelung",
            ScenarioKind::Gausson => "gausson",
            ScenarioKind::Suite => "suite",
        }
    }

    fn is_planar(self) -> bool {
        matches!(self, ScenarioKind::Ab | ScenarioKind::Evolve2d | ScenarioKind::Suite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x: Axis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Axis>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketSection {
    pub x: PacketAxis,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<PacketAxis>,
}

/// Analytic two-slit layout and the barrier that realizes it on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    /// Barrier centre to screen line.
    pub screen_distance: f64,
    pub slit_separation: f64,
    /// Packet start to barrier centre.
    pub source_distance: f64,
    /// Defaults to `2π/k0` of the packet.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wavelength: Option<f64>,
    pub single_slit_intensity: f64,
    pub convention: PhaseConvention,
    pub barrier_x: f64,
    pub barrier_thickness: f64,
    pub slit_width: f64,
    pub wall_height: f64,
    pub edge_cells: f64,
    pub openings: Openings,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            screen_distance: 30.0,
            slit_separation: 3.0,
            source_distance: 7.0,
            wavelength: None,
            single_slit_intensity: 1.0,
            convention: PhaseConvention::Standard,
            barrier_x: -12.0,
            barrier_thickness: 1.2,
            slit_width: 0.6,
            wall_height: DEFAULT_WALL_HEIGHT,
            edge_cells: 2.0,
            openings: Openings::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum UniformGauge {
    /// Field confined to the region downstream of the barrier.
    #[default]
    HalfPlane,
    /// Field everywhere.
    Landau,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldsSection {
    /// Solenoid flux enclosed between the two paths.
    pub flux: f64,
    /// Solenoid radii; the `ab` scenario runs one simulation per radius.
    pub solenoid_radii: Vec<f64>,
    /// Defaults to the barrier centre between the slits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solenoid_center: Option<[f64; 2]>,
    /// Uniform field strength.
    pub field: f64,
    pub uniform_gauge: UniformGauge,
    /// Largest flux of the periodicity table; defaults to two flux periods.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flux_sweep_max: Option<f64>,
    pub flux_sweep_steps: usize,
    /// Logarithmic nonlinearity strength.
    pub b: f64,
    /// Harmonic trap frequency for the 1D hydrodynamics run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub harmonic_omega: Option<f64>,
}

impl Default for FieldsSection {
    fn default() -> Self {
        Self {
            flux: 0.0,
            solenoid_radii: vec![0.25, 0.4],
            solenoid_center: None,
            field: 0.0,
            uniform_gauge: UniformGauge::HalfPlane,
            flux_sweep_max: None,
            flux_sweep_steps: 9,
            b: 0.25,
            harmonic_omega: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run_id: Option<String>,
    pub theta_max: f64,
    pub theta_points: usize,
    pub svg: bool,
    /// Write the final wavefunction with its JSON sidecar.
    pub write_state: bool,
    /// Repeat 1D runs at half `dt` and `h` and report residual ratios.
    pub convergence_check: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            run_id: None,
            theta_max: 0.5,
            theta_points: 201,
            svg: true,
            write_state: true,
            convergence_check: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioKind>,
    #[serde(default)]
    pub units: UnitsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packet: Option<PacketSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<GeometrySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<FieldsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evolve: Option<EvolveConfig>,
    #[serde(default)]
    pub output: OutputSection,
}

/// Desk-scale planar setup: λ = 0.4, δ = 3, L = 30, 512² cells of 0.1.
pub fn desk_grid() -> GridSection {
    let ax = Axis::new(-25.6, 25.6, 512).expect("valid axis");
    GridSection { x: ax, y: Some(ax) }
}

pub fn desk_packet() -> PacketSection {
    PacketSection {
        x: PacketAxis { center: -19.0, k0: 2.0 * PI / 0.4, sigma: 1.2 },
        y: Some(PacketAxis { center: 0.0, k0: 0.0, sigma: 4.0 }),
    }
}

pub fn desk_evolve() -> EvolveConfig {
    EvolveConfig {
        dt: 4e-4,
        n_steps: 8000,
        absorber: Some(Absorber { width: 24, strength: 2000.0 }),
        record_stride: 5,
        x_screen: None,
    }
}

fn line_grid(min: f64, max: f64, n: usize) -> GridSection {
    GridSection { x: Axis::new(min, max, n).expect("valid axis"), y: None }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, AppError> {
        toml::from_str(text).map_err(|e| AppError::Config(e.to_string()))
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Fills every section the scenario uses and checks cross-section
    /// consistency. The result is what gets hashed and echoed.
    pub fn resolve(mut self, kind: ScenarioKind) -> Result<Self, AppError> {
        if let Some(k) = self.scenario {
            if k != kind {
                return Err(AppError::Config(format!(
                    "config declares scenario '{}' but '{}' was requested",
                    k.name(),
                    kind.name()
                )));
            }
        }
        self.scenario = Some(kind);
        self.units.validate()?;
        match kind {
            ScenarioKind::Fringe => {
                let g = self.geometry.get_or_insert_with(GeometrySection::default);
                if g.wavelength.is_none() {
                    g.wavelength = Some(match &self.packet {
                        Some(p) => 2.0 * PI / p.x.k0,
                        None => 0.4,
                    });
                }
                self.fields.get_or_insert_with(FieldsSection::default);
            }
            ScenarioKind::Ab | ScenarioKind::Evolve2d | ScenarioKind::Suite => {
                self.grid.get_or_insert_with(desk_grid);
                self.packet.get_or_insert_with(desk_packet);
                self.geometry.get_or_insert_with(GeometrySection::default);
                let hbar_over_e = self.units.hbar / self.units.charge;
                self.fields.get_or_insert_with(|| FieldsSection {
                    flux: if kind == ScenarioKind::Evolve2d { 0.0 } else { PI * hbar_over_e },
                    ..FieldsSection::default()
                });
                self.evolve.get_or_insert_with(desk_evolve);
                self.resolve_planar()?;
            }
            ScenarioKind::Madelung => {
                self.grid.get_or_insert_with(|| line_grid(-16.0, 16.0, 512));
                self.packet.get_or_insert(PacketSection {
                    x: PacketAxis { center: -2.0, k0: 2.0, sigma: 1.0 },
                    y: None,
                });
                self.fields.get_or_insert_with(FieldsSection::default);
                self.evolve.get_or_insert(EvolveConfig::new(1e-3, 1000, 25));
            }
            ScenarioKind::Gausson => {
                self.grid.get_or_insert_with(|| line_grid(-40.0, 40.0, 2048));
                self.packet.get_or_insert(PacketSection {
                    x: PacketAxis { center: -5.0, k0: 1.0, sigma: 1.0 },
                    y: None,
                });
                self.fields.get_or_insert_with(FieldsSection::default);
                self.evolve.get_or_insert(EvolveConfig::new(2e-3, 5000, 250));
            }
        }
        self.check_dims(kind)?;
        if let Some(e) = &self.evolve {
            e.validate()?;
        }
        Ok(self)
    }

    fn resolve_planar(&mut self) -> Result<(), AppError> {
        let packet = self.packet.expect("packet resolved");
        let g = self.geometry.as_mut().expect("geometry resolved");
        let lambda = 2.0 * PI / packet.x.k0;
        match g.wavelength {
            None => g.wavelength = Some(lambda),
            Some(w) if (w - lambda).abs() > 1e-9 * lambda => {
                return Err(AppError::Config(format!(
                    "geometry.wavelength = {w} disagrees with 2π/k0 = {lambda} from the packet"
                )))
            }
            Some(_) => {}
        }
        let x_screen = g.barrier_x + g.screen_distance;
        let e = self.evolve.as_mut().expect("evolve resolved");
        match e.x_screen {
            None => e.x_screen = Some(x_screen),
            Some(x) if (x - x_screen).abs() > 1e-9 * x_screen.abs().max(1.0) => {
                return Err(AppError::Config(format!(
                    "evolve.x_screen = {x} disagrees with barrier_x + screen_distance = {x_screen}"
                )))
            }
            Some(_) => {}
        }
        let fields = self.fields.as_ref().expect("fields resolved");
        if fields.solenoid_radii.is_empty() {
            return Err(AppError::Config("fields.solenoid_radii must list at least one radius".into()));
        }
        Ok(())
    }

    fn check_dims(&self, kind: ScenarioKind) -> Result<(), AppError> {
        let (Some(grid), Some(packet)) = (&self.grid, &self.packet) else {
            return Ok(());
        };
        let planar = kind.is_planar();
        if planar != grid.y.is_some() || planar != packet.y.is_some() {
            let want = if planar { "a plane (x and y)" } else { "a line (x only)" };
            return Err(AppError::Config(format!(
                "scenario '{}' needs {want} grid and packet",
                kind.name()
            )));
        }
        Ok(())
    }

    pub fn run_id(&self) -> String {
        self.output
            .run_id
            .clone()
            .unwrap_or_else(|| self.scenario.map_or("run", |k| k.name()).to_string())
    }

    pub fn geometry(&self) -> &GeometrySection {
        self.geometry.as_ref().expect("resolved config has a geometry section")
    }

    pub fn fields(&self) -> &FieldsSection {
        self.fields.as_ref().expect("resolved config has a fields section")
    }

    pub fn grid(&self) -> &GridSection {
        self.grid.as_ref().expect("resolved config has a grid section")
    }

    pub fn packet(&self) -> &PacketSection {
        self.packet.as_ref().expect("resolved config has a packet section")
    }

    pub fn evolve(&self) -> &EvolveConfig {
        self.evolve.as_ref().expect("resolved config has an evolve section")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = ScenarioConfig::from_toml_str("[geometry]\nslit_separation = 2.0\nslit_gap = 1.0\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("slit_gap") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn resolved_config_round_trips() {
        for kind in [
            ScenarioKind::Fringe,
            ScenarioKind::Ab,
            ScenarioKind::Evolve2d,
            ScenarioKind::Madelung,
            ScenarioKind::Gausson,
            ScenarioKind::Suite,
        ] {
            let r = ScenarioConfig::default().resolve(kind).unwrap();
            let back = ScenarioConfig::from_toml_str(&r.to_toml_string()).unwrap();
            assert_eq!(back, r);
            assert_eq!(back.clone().resolve(kind).unwrap(), r);
        }
    }

    #[test]
    fn inconsistent_wavelength_is_rejected() {
        let cfg = ScenarioConfig::from_toml_str("[geometry]\nwavelength = 0.5\n").unwrap();
        assert!(matches!(cfg.resolve(ScenarioKind::Suite), Err(AppError::Config(_))));
    }

    #[test]
    fn scenario_mismatch_is_rejected() {
        let cfg = ScenarioConfig::from_toml_str("scenario = \"gausson\"\n").unwrap();
        assert!(cfg.clone().resolve(ScenarioKind::Fringe).is_err());
        assert!(cfg.resolve(ScenarioKind::Gausson).is_ok());
    }

    #[test]
    fn line_grid_for_planar_scenario_is_rejected() {
        let text = "[grid.x]\nmin = -10.0\nmax = 10.0\nn = 64\n";
        let cfg = ScenarioConfig::from_toml_str(text).unwrap();
        assert!(cfg.resolve(ScenarioKind::Evolve2d).is_err());
    }
}
