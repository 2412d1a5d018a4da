//! Closed-form gausson of the logarithmic Schrödinger equation
//! `iħψ_t = −(ħ²/2m)ψ'' − b·ln|ψ|²·ψ` and its classical-limit density family.
//!
//! With `ψ = c·G(x − vt)·e^{i(kx − ωt)}` the envelope obeys
//! `G'' + A·G + B·ln(G)·G = 0`, where
//!
//! * `A = (2m/ħ)·ω − k² + (2m/ħ²)·b·ln c²`
//! * `B = 4mb/ħ²`
//! * `a = B/2 − A`, `v = ħk/m`
//!
//! and is solved by `G = e^{a/B}·e^{−(B/4)(ξ + d)²}`. Unit norm requires
//! `c²·e^{2a/B} = √(B/2π)`. Substituting `A` shows `c` drops out of that
//! condition: normalization pins `ω` and leaves `c` as a free label.

use core::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::prelude::*;
use crate::units::UnitsConfig;

/// Largest accepted relative mismatch in the normalization identity when a
/// frequency is supplied by the caller.
pub const OMEGA_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussonParams {
    pub c: f64,
    pub k: f64,
    pub omega: f64,
    pub b: f64,
    pub mass: f64,
    /// Centre offset `d`: the peak sits at `x = vt − d`.
    pub offset: f64,
    pub hbar: f64,
}

/// Frequency that makes the gausson with `(k, b, m)` normalized.
pub fn normalized_frequency(k: f64, b: f64, mass: f64, hbar: f64) -> f64 {
    let big_b = 4.0 * mass * b / (hbar * hbar);
    hbar / (2.0 * mass) * (k * k + 0.5 * big_b * (1.0 - 0.5 * (big_b / (2.0 * PI)).ln()))
}

/// Builds a normalized gausson. When `omega` is given it must agree with the
/// normalization condition; otherwise it is derived. `c = 1`, `d = 0`.
pub fn make_gausson(
    k: f64,
    b: f64,
    mass: f64,
    units: &UnitsConfig,
    omega: Option<f64>,
) -> Result<GaussonParams> {
    units.validate()?;
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::invalid(format!("gausson needs b > 0 for a localized envelope, got {b}")));
    }
    if !(mass.is_finite() && mass > 0.0) {
        return Err(Error::invalid(format!("mass must be positive, got {mass}")));
    }
    if !k.is_finite() {
        return Err(Error::invalid("wavenumber must be finite"));
    }
    let derived = normalized_frequency(k, b, mass, units.hbar);
    let p = GaussonParams {
        c: 1.0,
        k,
        omega: omega.unwrap_or(derived),
        b,
        mass,
        offset: 0.0,
        hbar: units.hbar,
    };
    let residual = p.normalization_residual();
    if !(residual.abs() <= OMEGA_TOLERANCE) {
        return Err(Error::invalid(format!(
            "omega = {} is inconsistent with unit norm: c²e^(2a/B)/sqrt(B/2π) − 1 = {residual:e} \
             (normalized omega = {derived})",
            p.omega
        )));
    }
    Ok(p)
}

impl GaussonParams {
    /// Replaces the amplitude label `c`; the wavefunction does not change.
    pub fn with_amplitude(mut self, c: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::invalid(format!("c must be real and positive, got {c}")));
        }
        self.c = c;
        Ok(self)
    }

    pub fn with_offset(mut self, d: f64) -> Self {
        self.offset = d;
        self
    }

    pub fn big_a(&self) -> f64 {
        let h2 = self.hbar * self.hbar;
        2.0 * self.mass / self.hbar * self.omega - self.k * self.k
            + 2.0 * self.mass / h2 * self.b * (self.c * self.c).ln()
    }

    pub fn big_b(&self) -> f64 {
        4.0 * self.mass * self.b / (self.hbar * self.hbar)
    }

    pub fn small_a(&self) -> f64 {
        0.5 * self.big_b() - self.big_a()
    }

    pub fn velocity(&self) -> f64 {
        self.hbar * self.k / self.mass
    }

    /// Standard deviation of `|ψ|²`, `1/√B`.
    pub fn density_width(&self) -> f64 {
        1.0 / self.big_b().sqrt()
    }

    /// Relative mismatch of `c²·e^{2a/B} = √(B/2π)`.
    pub fn normalization_residual(&self) -> f64 {
        let big_b = self.big_b();
        let lhs = self.c * self.c * (2.0 * self.small_a() / big_b).exp();
        lhs / (big_b / (2.0 * PI)).sqrt() - 1.0
    }

    /// `G(ξ) = e^{a/B}·e^{−(B/4)(ξ + d)²}`.
    pub fn envelope(&self, xi: f64) -> f64 {
        let big_b = self.big_b();
        let u = xi + self.offset;
        (self.small_a() / big_b - 0.25 * big_b * u * u).exp()
    }

    /// Peak position at time `t`.
    pub fn center(&self, t: f64) -> f64 {
        self.velocity() * t - self.offset
    }
}

/// `Ψ(x, t) = c·G(x − vt)·e^{i(kx − ωt)}`.
pub fn gausson_value(x: f64, t: f64, p: &GaussonParams) -> Complex64 {
    let amp = p.c * p.envelope(x - p.velocity() * t);
    Complex64::from_polar(amp, p.k * x - p.omega * t)
}

/// Samples `Ψ(·, t)` on a line grid.
pub fn gausson_wavefunction(grid: &Grid, t: f64, p: &GaussonParams) -> Result<crate::Wavefunction> {
    if grid.dims() != 1 {
        return Err(Error::invalid("the gausson is one-dimensional"));
    }
    Ok(crate::Wavefunction::from_fn(*grid, t, |x, _| gausson_value(x, t, p)))
}

/// Envelope values below this are skipped when evaluating `ln G`.
pub const LOG_DOMAIN_FLOOR: f64 = 1e-15;

/// `max |G'' + A·G + B·ln(G)·G|` over interior samples with `G > 1e-15`,
/// using a fourth-order central difference for `G''`.
pub fn ode_residual_profile(g: &[f64], h: f64, big_a: f64, big_b: f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 2..g.len().saturating_sub(2) {
        if g[i] <= LOG_DOMAIN_FLOOR {
            continue;
        }
        let d2 = (-g[i - 2] + 16.0 * g[i - 1] - 30.0 * g[i] + 16.0 * g[i + 1] - g[i + 2]) / (12.0 * h * h);
        let r = d2 + big_a * g[i] + big_b * g[i].ln() * g[i];
        worst = worst.max(r.abs());
    }
    worst
}

/// Envelope-equation residual of the closed-form envelope sampled on `grid`.
pub fn ode_residual_g(p: &GaussonParams, grid: &Grid) -> Result<f64> {
    if grid.dims() != 1 {
        return Err(Error::invalid("the envelope equation is one-dimensional"));
    }
    let g: Vec<f64> = grid.x.coords().iter().map(|&x| p.envelope(x)).collect();
    Ok(ode_residual_profile(&g, grid.x.spacing(), p.big_a(), p.big_b()))
}

/// `δ_m(ξ) = √(mα/π)·e^{−αmξ²}` with `α = 2b/ħ²`.
pub fn delta_m_density(xi: f64, mass: f64, b: f64, units: &UnitsConfig) -> Result<f64> {
    Ok(DeltaFamily::new(mass, b, units)?.density(xi))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaFamily {
    pub mass: f64,
    pub alpha: f64,
}

impl DeltaFamily {
    pub fn new(mass: f64, b: f64, units: &UnitsConfig) -> Result<Self> {
        units.validate()?;
        if !(mass.is_finite() && mass > 0.0 && b.is_finite() && b > 0.0) {
            return Err(Error::invalid(format!("delta family needs m > 0 and b > 0, got m={mass}, b={b}")));
        }
        Ok(Self { mass, alpha: 2.0 * b / (units.hbar * units.hbar) })
    }

    pub fn density(&self, xi: f64) -> f64 {
        let ma = self.mass * self.alpha;
        (ma / PI).sqrt() * (-ma * xi * xi).exp()
    }

    pub fn peak(&self) -> f64 {
        (self.mass * self.alpha / PI).sqrt()
    }

    /// Half-width at which the density falls to `1/e` of its peak.
    pub fn e_fold_half_width(&self) -> f64 {
        1.0 / (self.mass * self.alpha).sqrt()
    }
}
