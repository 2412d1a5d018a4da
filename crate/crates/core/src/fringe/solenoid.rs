use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prelude::*;

/// Infinite solenoid along z: radius, interior field and axis position.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolenoidSpec {
    pub radius: f64,
    pub field: f64,
    #[serde(default)]
    pub center: [f64; 2],
}

impl SolenoidSpec {
    pub fn new(radius: f64, field: f64, center: [f64; 2]) -> Result<Self> {
        let s = Self { radius, field, center };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::invalid(format!("solenoid radius must be positive, got {}", self.radius)));
        }
        if !(self.field.is_finite() && self.center.iter().all(|c| c.is_finite())) {
            return Err(Error::invalid("solenoid field and centre must be finite"));
        }
        Ok(())
    }

    /// Field whose flux `B·πR²` equals `flux`.
    pub fn with_flux(radius: f64, flux: f64, center: [f64; 2]) -> Result<Self> {
        Self::new(radius, flux / (PI * radius * radius), center)
    }

    pub fn flux(&self) -> f64 {
        self.field * PI * self.radius * self.radius
    }

    /// Cartesian vector potential `(A_x, A_y)` at `p`.
    pub fn vector_potential(&self, p: [f64; 2]) -> [f64; 2] {
        let (x, y) = (p[0] - self.center[0], p[1] - self.center[1]);
        let r = x.hypot(y);
        if r == 0.0 {
            return [0.0, 0.0];
        }
        let g = solenoid_a(r, self) / r;
        [-g * y, g * x]
    }

    /// `∫ A_x dx` along the horizontal line at height `y` from `x0` to `x1`.
    pub fn integral_ax(&self, y: f64, x0: f64, x1: f64) -> f64 {
        -self.transverse_integral(y - self.center[1], x0 - self.center[0], x1 - self.center[0])
    }

    /// `∫ A_y dy` along the vertical line at abscissa `x` from `y0` to `y1`.
    pub fn integral_ay(&self, x: f64, y0: f64, y1: f64) -> f64 {
        self.transverse_integral(x - self.center[0], y0 - self.center[1], y1 - self.center[1])
    }

    /// `p·∫ A_φ(r)/r dq` with `r = √(p² + q²)`, in closed form on each branch.
    fn transverse_integral(&self, p: f64, q0: f64, q1: f64) -> f64 {
        if p == 0.0 || q0 == q1 {
            return 0.0;
        }
        let (lo, hi, sign) = if q0 < q1 { (q0, q1, 1.0) } else { (q1, q0, -1.0) };
        let r = self.radius;
        let b = self.field;
        let exterior = |a: f64, c: f64| 0.5 * b * r * r * ((c / p).atan() - (a / p).atan());
        let interior = |a: f64, c: f64| 0.5 * b * p * (c - a);
        let total = if p.abs() >= r {
            exterior(lo, hi)
        } else {
            let c = (r * r - p * p).sqrt();
            let mut sum = 0.0;
            // pieces: (-inf, -c) exterior, [-c, c] interior, (c, inf) exterior
            let seg = |a: f64, z: f64| (a.max(lo), z.min(hi));
            let (a, z) = seg(f64::NEG_INFINITY, -c);
            if a < z {
                sum += exterior(a, z);
            }
            let (a, z) = seg(-c, c);
            if a < z {
                sum += interior(a, z);
            }
            let (a, z) = seg(c, f64::INFINITY);
            if a < z {
                sum += exterior(a, z);
            }
            sum
        };
        sign * total
    }
}

/// Azimuthal vector potential of the solenoid at distance `r` from its axis:
/// `B·r/2` inside, `B·R²/(2r)` outside.
pub fn solenoid_a(r: f64, spec: &SolenoidSpec) -> f64 {
    let big_r = spec.radius;
    if r < big_r {
        0.5 * spec.field * r
    } else {
        0.5 * spec.field * big_r * big_r / r
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurlEstimate {
    pub value: f64,
    /// False when the difference stencil straddles the wall `r = R`.
    pub reliable: bool,
}

/// Central-difference `∂A_y/∂x − ∂A_x/∂y` at `p` with step `h`.
pub fn curl_a_z(p: [f64; 2], spec: &SolenoidSpec, h: f64) -> Result<CurlEstimate> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::invalid(format!("difference step must be positive, got {h}")));
    }
    let a = |dx: f64, dy: f64| spec.vector_potential([p[0] + dx, p[1] + dy]);
    let day_dx = (a(h, 0.0)[1] - a(-h, 0.0)[1]) / (2.0 * h);
    let dax_dy = (a(0.0, h)[0] - a(0.0, -h)[0]) / (2.0 * h);
    let r = (p[0] - spec.center[0]).hypot(p[1] - spec.center[1]);
    Ok(CurlEstimate { value: day_dx - dax_dy, reliable: (r - spec.radius).abs() > 2.0 * h })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SolenoidSpec {
        SolenoidSpec::new(0.5, 2.0, [0.3, -0.2]).unwrap()
    }

    #[test]
    fn potential_is_continuous_at_the_wall() {
        let s = spec();
        let r = s.radius;
        let inside = 0.5 * s.field * r;
        let outside = 0.5 * s.field * r * r / r;
        assert_eq!(solenoid_a(r, &s), outside);
        assert!((inside - outside).abs() < 1e-15);
        assert!((solenoid_a(r * (1.0 - 1e-12), &s) - outside).abs() < 1e-11);
    }

    #[test]
    fn exterior_values_and_decay() {
        let s = spec();
        let r = s.radius;
        assert!((solenoid_a(2.0 * r, &s) - s.field * r / 4.0).abs() < 1e-15);
        assert!(solenoid_a(1e6 * r, &s) < s.field * r * 1e-6);
    }

    #[test]
    fn curl_recovers_the_field() {
        let s = spec();
        let h = s.radius / 1000.0;
        let c = s.center;
        let inside = curl_a_z([c[0] + 0.25 * 0.6, c[1] + 0.25 * 0.8], &s, h).unwrap();
        assert!(inside.reliable);
        assert!((inside.value - s.field).abs() < 1e-4 * s.field);
        let outside = curl_a_z([c[0] + 1.5 * 0.6, c[1] - 1.5 * 0.8], &s, h).unwrap();
        assert!(outside.reliable);
        assert!(outside.value.abs() < 1e-4 * s.field);
        let edge = curl_a_z([c[0] + s.radius, c[1]], &s, h).unwrap();
        assert!(!edge.reliable);
        let off = SolenoidSpec::new(0.5, 0.0, [0.0, 0.0]).unwrap();
        assert_eq!(curl_a_z([0.1, 0.7], &off, h).unwrap().value, 0.0);
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn line_integrals_match_quadrature() {
        let s = spec();
        for &y in &[-0.9, -0.6, -0.2, 0.0, 0.1, 0.25, 1.4] {
            // split at the wall crossings so Simpson sees smooth pieces
            let mut cuts = vec![-3.0, 2.5];
            let p = y - s.center[1];
            if p.abs() < s.radius {
                let c = (s.radius * s.radius - p * p).sqrt();
                cuts.extend([s.center[0] - c, s.center[0] + c]);
            }
            cuts.sort_by(f64::total_cmp);
            let mut reference = 0.0;
            for w in cuts.windows(2) {
                reference += simpson(|x| s.vector_potential([x, y])[0], w[0], w[1], 20000);
            }
            let got = s.integral_ax(y, -3.0, 2.5);
            assert!((got - reference).abs() < 1e-9, "y={y}: {got} vs {reference}");
            assert!((s.integral_ax(y, 2.5, -3.0) + got).abs() < 1e-15);
        }
        for &x in &[-0.5, 0.3, 0.5, 2.0] {
            let mut cuts = vec![-2.0, 3.0];
            let p = x - s.center[0];
            if p.abs() < s.radius {
                let c = (s.radius * s.radius - p * p).sqrt();
                cuts.extend([s.center[1] - c, s.center[1] + c]);
            }
            cuts.sort_by(f64::total_cmp);
            let mut reference = 0.0;
            for w in cuts.windows(2) {
                reference += simpson(|y| s.vector_potential([x, y])[1], w[0], w[1], 20000);
            }
            let got = s.integral_ay(x, -2.0, 3.0);
            assert!((got - reference).abs() < 1e-9, "x={x}: {got} vs {reference}");
        }
    }

    #[test]
    fn rejects_bad_radius() {
        assert!(SolenoidSpec::new(0.0, 1.0, [0.0, 0.0]).is_err());
        assert!(SolenoidSpec::new(f64::NAN, 1.0, [0.0, 0.0]).is_err());
    }
}
