//! Closed-form two-slit intensities with geometric and magnetic phases.
//!
//! Slit 1 sits at `y = +δ/2` and slit 2 at `y = −δ/2`, so a screen point at
//! transverse offset `s > 0` is closer to slit 1. The geometric part of every
//! intensity is `πδ·sinθ/(2λ)` under [`PhaseConvention::PaperHalf`] and
//! `πδ·sinθ/λ` under [`PhaseConvention::Standard`]; an enclosed flux `Φ`
//! adds `eΦ/(2ħ)` to the same cos² argument.

mod flux;
mod solenoid;

pub use flux::{loop_flux, loop_flux_with, FluxSource, LoopPath, Orientation, Quadrature};
pub use solenoid::{curl_a_z, solenoid_a, CurlEstimate, SolenoidSpec};

use core::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prelude::*;
use crate::units::UnitsConfig;

/// Which path-phase law is used for the geometric term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    /// Phase `π·d/λ` per path of length `d`.
    PaperHalf,
    /// Phase `2π·d/λ` per path, the action of a free particle with `λ = 2πħ/p`.
    Standard,
}

impl PhaseConvention {
    /// Half-turns of phase per wavelength of path length.
    fn half_turns_per_wavelength(self) -> f64 {
        match self {
            PhaseConvention::PaperHalf => 1.0,
            PhaseConvention::Standard => 2.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            PhaseConvention::PaperHalf => "paper_half",
            PhaseConvention::Standard => "standard",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlitGeometry {
    /// Distance from the slit screen to the observation screen.
    pub screen_distance: f64,
    /// Centre-to-centre slit separation.
    pub slit_separation: f64,
    /// Source-to-slit distance.
    pub source_distance: f64,
    /// de Broglie wavelength.
    pub wavelength: f64,
    /// Intensity with a single slit open.
    pub single_slit_intensity: f64,
    pub convention: PhaseConvention,
}

impl SlitGeometry {
    pub fn new(
        screen_distance: f64,
        slit_separation: f64,
        source_distance: f64,
        wavelength: f64,
        single_slit_intensity: f64,
        convention: PhaseConvention,
    ) -> Result<Self> {
        let g = Self {
            screen_distance,
            slit_separation,
            source_distance,
            wavelength,
            single_slit_intensity,
            convention,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("screen_distance", self.screen_distance),
            ("slit_separation", self.slit_separation),
            ("wavelength", self.wavelength),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.single_slit_intensity.is_finite() && self.single_slit_intensity >= 0.0) {
            return Err(Error::invalid("single_slit_intensity must be non-negative"));
        }
        if !(self.source_distance.is_finite() && self.source_distance >= 0.0) {
            return Err(Error::invalid("source_distance must be non-negative"));
        }
        if self.slit_separation >= self.screen_distance {
            return Err(Error::invalid(format!(
                "paraxial layout needs slit_separation < screen_distance ({} >= {})",
                self.slit_separation, self.screen_distance
            )));
        }
        Ok(())
    }

    pub fn with_convention(mut self, convention: PhaseConvention) -> Self {
        self.convention = convention;
        self
    }

    /// Screen offset `s = L·tanθ` of a ray leaving the slit midpoint at angle θ.
    pub fn screen_offset(&self, theta: f64) -> f64 {
        self.screen_distance * theta.tan()
    }

    /// Fringe period on the screen in the small-angle limit.
    pub fn fringe_spacing(&self) -> f64 {
        let lam_l_over_d = self.wavelength * self.screen_distance / self.slit_separation;
        match self.convention {
            PhaseConvention::PaperHalf => 2.0 * lam_l_over_d,
            PhaseConvention::Standard => lam_l_over_d,
        }
    }
}

/// `cos(π·u)`, exact at integers and half-integers.
pub fn cos_pi(u: f64) -> f64 {
    let r = (u - 2.0 * (u * 0.5).round()).abs();
    if r <= 0.25 {
        (PI * r).cos()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).sin()
    } else {
        -(PI * (1.0 - r)).cos()
    }
}

/// `sin(π·u)`, exact at integers and half-integers.
pub fn sin_pi(u: f64) -> f64 {
    cos_pi(u - 0.5)
}

/// Exact and first-order path lengths from both slits to a screen point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLengths {
    pub d1: f64,
    pub d2: f64,
    pub d1_approx: f64,
    pub d2_approx: f64,
    pub sin_theta: f64,
}

pub fn path_lengths(geom: &SlitGeometry, s: f64) -> PathLengths {
    let l = geom.screen_distance;
    let half = 0.5 * geom.slit_separation;
    let d1 = l.hypot(s - half);
    let d2 = l.hypot(s + half);
    let r = l.hypot(s);
    let sin_theta = s / r;
    PathLengths {
        d1,
        d2,
        d1_approx: r - half * sin_theta,
        d2_approx: r + half * sin_theta,
        sin_theta,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Through the slit at `y = +δ/2`.
    Upper,
    /// Through the slit at `y = −δ/2`.
    Lower,
}

/// Unit phasor of a classical path: source → slit → screen point `s`, plus
/// the magnetic term `(e/ħ)·∫A·dx` along it.
pub fn path_phase(
    geom: &SlitGeometry,
    branch: Branch,
    s: f64,
    line_integral_a: f64,
    units: &UnitsConfig,
) -> Complex64 {
    let lengths = path_lengths(geom, s);
    let d = match branch {
        Branch::Upper => lengths.d1,
        Branch::Lower => lengths.d2,
    };
    phase_for_length(geom, geom.source_distance + d, line_integral_a, units)
}

/// Phasor for a total path length `length` (source to screen).
pub fn phase_for_length(
    geom: &SlitGeometry,
    length: f64,
    line_integral_a: f64,
    units: &UnitsConfig,
) -> Complex64 {
    let geometric = geom.convention.half_turns_per_wavelength() * length / geom.wavelength;
    let magnetic = units.flux_to_phase() * line_integral_a / PI;
    let u = geometric + magnetic;
    Complex64::new(cos_pi(u), sin_pi(u))
}

/// `I0·|1 + e^{iΔ}|² = 4·I0·cos²(Δ/2)`.
pub fn superpose_two_path(i0: f64, delta_phase: f64) -> f64 {
    let c = cos_pi(delta_phase / (2.0 * PI));
    4.0 * i0 * c * c
}

/// Two-path intensity at `sinθ` with an extra relative phase `enclosed_phase`
/// (radians) between the two paths.
pub fn fringe_intensity(sin_theta: f64, geom: &SlitGeometry, enclosed_phase: f64) -> f64 {
    let geometric =
        0.5 * geom.convention.half_turns_per_wavelength() * geom.slit_separation * sin_theta
            / geom.wavelength;
    // reduce each term before adding so a large path term keeps the flux term's precision
    let turns = enclosed_phase / (2.0 * PI);
    let c = cos_pi((geometric - geometric.round()) + (turns - turns.round()));
    4.0 * geom.single_slit_intensity * c * c
}

/// Field-free two-slit law.
pub fn two_slit_intensity(theta: f64, geom: &SlitGeometry) -> f64 {
    fringe_intensity(theta.sin(), geom, 0.0)
}

/// Two-slit law shifted by a uniform field `B` threading the circuit area.
pub fn magnetic_shift_intensity(
    theta: f64,
    geom: &SlitGeometry,
    b: f64,
    s_area: f64,
    units: &UnitsConfig,
) -> f64 {
    fringe_intensity(theta.sin(), geom, units.flux_to_phase() * b * s_area)
}

/// Two-slit law shifted by the flux of a solenoid between the slits.
pub fn ab_intensity(theta: f64, geom: &SlitGeometry, spec: &SolenoidSpec, units: &UnitsConfig) -> f64 {
    fringe_intensity(theta.sin(), geom, units.flux_to_phase() * spec.flux())
}

/// Solenoid flux and an external uniform field acting together.
pub fn combined_intensity(
    theta: f64,
    geom: &SlitGeometry,
    spec: &SolenoidSpec,
    b_ext: f64,
    s_area: f64,
    units: &UnitsConfig,
) -> f64 {
    let phase = units.flux_to_phase() * (spec.flux() + b_ext * s_area);
    fringe_intensity(theta.sin(), geom, phase)
}

/// Screen displacement of the fringe system caused by an extra relative
/// phase `total_phase_shift` (radians) between the lower and upper path.
/// Small-angle regime.
pub fn predict_fringe_shift(geom: &SlitGeometry, total_phase_shift: f64) -> f64 {
    -total_phase_shift * geom.wavelength * geom.screen_distance
        / (PI * geom.slit_separation * geom.convention.half_turns_per_wavelength())
}

/// Area of the circuit source → lower slit → screen point → upper slit →
/// source, with the source on the axis at `source_distance` from the slits.
pub fn circuit_area(geom: &SlitGeometry, s: f64) -> Result<f64> {
    let half = 0.5 * geom.slit_separation;
    if geom.source_distance < half {
        return Err(Error::invalid("source_distance must be at least half the slit separation"));
    }
    let xs = (geom.source_distance * geom.source_distance - half * half).sqrt();
    let poly = [[-xs, 0.0], [0.0, -half], [geom.screen_distance, s], [0.0, half]];
    Ok(shoelace(&poly).abs())
}

pub(crate) fn shoelace(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    let mut twice = 0.0;
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        twice += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * twice
}

/// One row of an angular sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PatternRow {
    pub theta: f64,
    pub sin_theta: f64,
    pub s: f64,
    pub intensity: f64,
}

/// Samples `intensity(θ)` on `count` equally spaced angles in `[−θmax, θmax]`.
pub fn sweep(
    geom: &SlitGeometry,
    theta_max: f64,
    count: usize,
    intensity: impl Fn(f64) -> f64,
) -> Result<Vec<PatternRow>> {
    if !(theta_max > 0.0 && theta_max < 0.5 * PI) {
        return Err(Error::invalid("theta_max must lie in (0, π/2)"));
    }
    if count < 2 {
        return Err(Error::invalid("sweep needs at least two angles"));
    }
    Ok((0..count)
        .map(|i| {
            let theta = theta_max * (2 * i as isize - (count as isize - 1)) as f64 / (count - 1) as f64;
            PatternRow {
                theta,
                sin_theta: theta.sin(),
                s: geom.screen_offset(theta),
                intensity: intensity(theta),
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom(conv: PhaseConvention) -> SlitGeometry {
        SlitGeometry::new(100.0, 10.0, 50.0, 1.0, 1.0, conv).unwrap()
    }

    #[test]
    fn cos_pi_is_exact_at_quarter_points() {
        assert_eq!(cos_pi(0.0), 1.0);
        assert_eq!(cos_pi(0.5), 0.0);
        assert_eq!(cos_pi(1.0), -1.0);
        assert_eq!(cos_pi(-1.5), 0.0);
        assert_eq!(cos_pi(2.0), 1.0);
        assert_eq!(sin_pi(1.0), 0.0);
        assert_eq!(sin_pi(0.5), 1.0);
        for u in [0.1, 0.3, 0.7, 1.2, -2.9, 17.3] {
            assert!((cos_pi(u) - (PI * u).cos()).abs() < 1e-14);
            assert!((sin_pi(u) - (PI * u).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn path_lengths_on_axis() {
        let g = SlitGeometry::new(1.0, 0.1, 1.0, 1.0, 1.0, PhaseConvention::Standard).unwrap();
        let p = path_lengths(&g, 0.0);
        assert_eq!(p.d1, (1.0f64 + 0.0025).sqrt());
        assert_eq!(p.d2, p.d1);
        assert_eq!(p.d2 - p.d1, 0.0);
        assert_eq!(p.sin_theta, 0.0);
    }

    #[test]
    fn path_length_approximation_error() {
        let g = SlitGeometry::new(100.0, 1.0, 1.0, 1.0, 1.0, PhaseConvention::Standard).unwrap();
        let p = path_lengths(&g, 10.0);
        // direct evaluation of both forms
        let exact = (100.0f64 * 100.0 + 10.5 * 10.5).sqrt();
        let approx = (100.0f64 * 100.0 + 100.0).sqrt() + 0.5 * 10.0 / (10100.0f64).sqrt();
        assert!((p.d2 - exact).abs() < 1e-12);
        assert!((p.d2_approx - approx).abs() < 1e-12);
        assert!((p.d2 - p.d2_approx).abs() < 1e-3 * p.d2);
    }

    #[test]
    fn path_phase_full_turns() {
        let units = UnitsConfig::default();
        // L = λ and s = δ/2 put the upper path at exactly one wavelength.
        let mut g = SlitGeometry::new(1.0, 0.1, 1.0, 1.0, 1.0, PhaseConvention::PaperHalf).unwrap();
        let z = path_phase(&g, Branch::Upper, 0.05, 0.0, &units);
        assert_eq!(z, Complex64::new(1.0, 0.0));
        g.convention = PhaseConvention::Standard;
        let z = path_phase(&g, Branch::Upper, 0.05, 0.0, &units);
        assert_eq!(z, Complex64::new(1.0, 0.0));
        // magnetic half turn on top of a full geometric turn
        let z = path_phase(&g, Branch::Upper, 0.05, PI / units.charge, &units);
        assert_eq!(z, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn superposition_values() {
        assert_eq!(superpose_two_path(1.0, 0.0), 4.0);
        assert_eq!(superpose_two_path(1.0, PI), 0.0);
        assert!((superpose_two_path(2.0, PI / 2.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn central_maximum_and_zeros() {
        let paper = geom(PhaseConvention::PaperHalf);
        let standard = geom(PhaseConvention::Standard);
        assert_eq!(two_slit_intensity(0.0, &paper), 4.0);
        assert_eq!(two_slit_intensity(0.0, &standard), 4.0);
        // δ·sinθ = λ for PaperHalf, λ/2 for Standard
        assert_eq!(fringe_intensity(0.1, &paper, 0.0), 0.0);
        assert_eq!(fringe_intensity(0.05, &standard, 0.0), 0.0);
    }

    #[test]
    fn magnetic_shift_values() {
        let units = UnitsConfig::default();
        let g = geom(PhaseConvention::PaperHalf);
        for theta in [-0.3, -0.01, 0.0, 0.02, 0.4] {
            assert_eq!(magnetic_shift_intensity(theta, &g, 0.0, 7.0, &units), two_slit_intensity(theta, &g));
        }
        assert_eq!(magnetic_shift_intensity(0.0, &g, PI, 1.0, &units), 0.0);
        assert_eq!(magnetic_shift_intensity(0.0, &g, 2.0 * PI, 1.0, &units), 4.0);
    }

    #[test]
    fn ab_and_combined_reductions() {
        let units = UnitsConfig::default();
        let g = geom(PhaseConvention::Standard);
        let off = SolenoidSpec::new(0.5, 0.0, [0.0, 0.0]).unwrap();
        let half_flux = SolenoidSpec::new(1.0, 1.0, [0.0, 0.0]).unwrap(); // πR²B = π
        for theta in [-0.2, 0.0, 0.13] {
            assert_eq!(ab_intensity(theta, &g, &off, &units), two_slit_intensity(theta, &g));
            assert_eq!(
                combined_intensity(theta, &g, &half_flux, 0.0, 3.0, &units),
                ab_intensity(theta, &g, &half_flux, &units)
            );
            assert_eq!(
                combined_intensity(theta, &g, &off, 0.7, 3.0, &units),
                magnetic_shift_intensity(theta, &g, 0.7, 3.0, &units)
            );
        }
        assert_eq!(ab_intensity(0.0, &g, &half_flux, &units), 0.0);
        // e·B_sol·πR²/2 + e·B_ext·S/2 = π/2 split evenly between the two sources
        let quarter = SolenoidSpec::new(1.0, 0.5, [0.0, 0.0]).unwrap();
        assert!(combined_intensity(0.0, &g, &quarter, 0.5 * PI, 1.0, &units) < 1e-30);
    }

    #[test]
    fn predicted_shift_values() {
        let g = geom(PhaseConvention::PaperHalf);
        assert_eq!(predict_fringe_shift(&g, 0.0), 0.0);
        assert!((predict_fringe_shift(&g, PI) + 10.0).abs() < 1e-12);
        let g = g.with_convention(PhaseConvention::Standard);
        assert!((predict_fringe_shift(&g, PI) + 5.0).abs() < 1e-12);
    }

    #[test]
    fn predicted_shift_moves_the_maximum() {
        let units = UnitsConfig::default();
        for conv in [PhaseConvention::PaperHalf, PhaseConvention::Standard] {
            let g = geom(conv);
            let phase = 0.6;
            let ds = predict_fringe_shift(&g, phase);
            // the shifted central maximum sits at s = ds (small angle)
            let theta = (ds / g.screen_distance).atan();
            let i = magnetic_shift_intensity(theta, &g, phase, 1.0, &units);
            assert!((i - 4.0).abs() < 1e-4, "{conv:?}: {i}");
        }
    }

    #[test]
    fn circuit_area_of_symmetric_layout() {
        let g = SlitGeometry::new(10.0, 2.0, 1.0, 1.0, 1.0, PhaseConvention::Standard).unwrap();
        // source at the slit plane: the circuit degenerates to the screen triangle
        assert!((circuit_area(&g, 0.0).unwrap() - 10.0).abs() < 1e-12);
        let far = SlitGeometry { source_distance: 5.0, ..g };
        let xs = (25.0f64 - 1.0).sqrt();
        assert!((circuit_area(&far, 0.0).unwrap() - (10.0 + xs)).abs() < 1e-12);
    }

    #[test]
    fn geometry_validation() {
        assert!(SlitGeometry::new(1.0, 2.0, 1.0, 1.0, 1.0, PhaseConvention::Standard).is_err());
        assert!(SlitGeometry::new(1.0, 0.1, 1.0, 0.0, 1.0, PhaseConvention::Standard).is_err());
        assert!(SlitGeometry::new(1.0, 0.1, 1.0, 1.0, -1.0, PhaseConvention::Standard).is_err());
    }

    #[test]
    fn sweep_is_symmetric_without_field() {
        let g = geom(PhaseConvention::Standard);
        let rows = sweep(&g, 0.3, 101, |t| two_slit_intensity(t, &g)).unwrap();
        assert_eq!(rows[50].theta, 0.0);
        assert_eq!(rows[50].intensity, 4.0);
        for i in 0..50 {
            assert!((rows[i].intensity - rows[100 - i].intensity).abs() < 1e-12);
        }
    }
}
