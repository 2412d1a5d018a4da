use std::f64::consts::PI;

use proptest::prelude::*;
use slitlab_core::fringe::{
    fringe_intensity, loop_flux, magnetic_shift_intensity, two_slit_intensity, FluxSource, LoopPath,
    PhaseConvention, SlitGeometry, SolenoidSpec,
};
use slitlab_core::gausson::{gausson_wavefunction, make_gausson, DeltaFamily};
use slitlab_core::grid::make_uniform_grid;
use slitlab_core::madelung::decompose;
use slitlab_core::wavefunction::gaussian_packet;
use slitlab_core::UnitsConfig;

fn convention() -> impl Strategy<Value = PhaseConvention> {
    prop_oneof![Just(PhaseConvention::PaperHalf), Just(PhaseConvention::Standard)]
}

prop_compose! {
    fn geometry()(
        l in 5.0f64..200.0,
        frac in 0.01f64..0.5,
        src in 1.0f64..50.0,
        lambda in 0.05f64..2.0,
        i0 in 0.0f64..10.0,
        conv in convention(),
    ) -> SlitGeometry {
        SlitGeometry::new(l, frac * l, src, lambda, i0, conv).unwrap()
    }
}

fn units() -> impl Strategy<Value = UnitsConfig> {
    (0.2f64..5.0, 0.2f64..5.0, 0.2f64..5.0).prop_map(|(h, m, e)| UnitsConfig::new(h, m, e).unwrap())
}

/// Points carrying at least 1e-6 of the peak density, where rounding in
/// the division by `√n` stays small.
fn supported(n: &[f64]) -> Vec<bool> {
    let max = n.iter().cloned().fold(0.0, f64::max);
    n.iter().map(|v| *v >= 1e-6 * max).collect()
}

proptest! {
    #[test]
    fn intensity_is_bounded(g in geometry(), theta in -1.5f64..1.5, phase in -50.0f64..50.0) {
        let i = fringe_intensity(theta.sin(), &g, phase);
        prop_assert!(i >= 0.0);
        prop_assert!(i <= 4.0 * g.single_slit_intensity * (1.0 + 1e-15));
    }

    #[test]
    fn zero_field_matches_field_free_law(g in geometry(), theta in -1.5f64..1.5, area in 0.0f64..100.0, u in units()) {
        prop_assert_eq!(magnetic_shift_intensity(theta, &g, 0.0, area, &u), two_slit_intensity(theta, &g));
    }

    #[test]
    fn intensity_is_flux_periodic(g in geometry(), theta in -1.0f64..1.0, flux in -5.0f64..5.0, u in units()) {
        let q = u.flux_to_phase();
        let a = fringe_intensity(theta.sin(), &g, q * flux);
        let b = fringe_intensity(theta.sin(), &g, q * (flux + u.flux_period()));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + 4.0 * g.single_slit_intensity));
    }

    #[test]
    fn loop_flux_is_orientation_odd(r in 0.05f64..2.0, b in -3.0f64..3.0, rho in 0.1f64..5.0, cx in -2.0f64..2.0) {
        let s = SolenoidSpec::new(r, b, [0.0, 0.0]).unwrap();
        let path = LoopPath::circle([cx, 0.3], rho, 512).unwrap();
        let f = loop_flux(&FluxSource::Solenoid(s), &path);
        let back = loop_flux(&FluxSource::Solenoid(s), &path.reversed());
        prop_assert!((f + back).abs() <= 1e-12 * s.flux().abs().max(1e-300));
    }

    #[test]
    fn homotopic_loops_enclose_the_same_flux(r in 0.05f64..1.0, b in 0.1f64..3.0, rho in 1.2f64..4.0, half in 1.2f64..4.0) {
        let s = FluxSource::Solenoid(SolenoidSpec::new(r, b, [0.0, 0.0]).unwrap());
        let circle = loop_flux(&s, &LoopPath::circle([0.0, 0.0], rho, 4096).unwrap());
        let square = loop_flux(&s, &LoopPath::rectangle([-half, -half], [half, half], 1024).unwrap());
        prop_assert!((circle - square).abs() <= 1e-6 * circle.abs());
    }

    #[test]
    fn packet_is_normalized(x0 in -3.0f64..3.0, k0 in -10.0f64..10.0, sigma in 0.3f64..2.0) {
        let g = make_uniform_grid(-20.0, 20.0, 512).unwrap();
        let p = gaussian_packet(&g, x0, k0, sigma).unwrap();
        prop_assert!((p.psi.norm2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn norm_ignores_global_phase(phi in -10.0f64..10.0, k0 in -5.0f64..5.0) {
        let g = make_uniform_grid(-20.0, 20.0, 256).unwrap();
        let mut psi = gaussian_packet(&g, 0.5, k0, 1.0).unwrap().psi;
        let before = psi.norm2();
        psi.rotate_phase(phi);
        prop_assert!((psi.norm2() - before).abs() < 1e-14);
    }

    #[test]
    fn quantum_potential_is_scale_invariant(c in 0.01f64..100.0, sigma in 0.7f64..2.0) {
        let g = make_uniform_grid(-16.0, 16.0, 256).unwrap();
        let psi = gaussian_packet(&g, 0.0, 1.0, sigma).unwrap().psi;
        let mut scaled = psi.clone();
        scaled.scale(c);
        let u = UnitsConfig::default();
        let (a, b) = (decompose(&psi, &u).unwrap(), decompose(&scaled, &u).unwrap());
        let peak = a.quantum_potential.iter().filter(|v| v.is_finite()).fold(0.0f64, |m, v| m.max(v.abs()));
        let support = supported(&a.density);
        for ((x, y), _) in a.quantum_potential.iter().zip(&b.quantum_potential).zip(&support).filter(|(_, s)| **s) {
            prop_assert!((x - y).abs() <= 1e-10 * peak);
        }
        prop_assert_eq!(a.mask, b.mask);
    }

    #[test]
    fn velocity_ignores_global_phase(phi in -10.0f64..10.0, k0 in -5.0f64..5.0) {
        let g = make_uniform_grid(-16.0, 16.0, 256).unwrap();
        let psi = gaussian_packet(&g, 0.0, k0, 1.0).unwrap().psi;
        let mut rotated = psi.clone();
        rotated.rotate_phase(phi);
        let u = UnitsConfig::default();
        let (a, b) = (decompose(&psi, &u).unwrap(), decompose(&rotated, &u).unwrap());
        let support = supported(&a.density);
        for ((x, y), _) in a.velocity_x.iter().zip(&b.velocity_x).zip(&support).filter(|(_, s)| **s) {
            prop_assert!((x - y).abs() <= 1e-9 * (1.0 + k0.abs()));
        }
    }

    #[test]
    fn constructed_gausson_satisfies_normalization_identity(k in -5.0f64..5.0, b in 0.01f64..5.0, m in 0.1f64..50.0, u in units()) {
        let p = make_gausson(k, b, m, &u, None).unwrap();
        prop_assert!(p.normalization_residual().abs() <= 1e-12);
    }

    #[test]
    fn boosted_gausson_keeps_its_envelope(k in -2.0f64..2.0, dk in -1.0f64..1.0, t in 0.0f64..3.0) {
        let u = UnitsConfig::default();
        let g = make_uniform_grid(-40.0, 40.0, 1024).unwrap();
        let a = make_gausson(k, 0.5, 1.0, &u, None).unwrap();
        let b = make_gausson(k + dk, 0.5, 1.0, &u, None).unwrap();
        let (pa, pb) = (gausson_wavefunction(&g, t, &a).unwrap(), gausson_wavefunction(&g, t, &b).unwrap());
        prop_assert!((pa.second_moment().0 - pb.second_moment().0).abs() < 1e-6);
        let shift = pb.centroid().0 - pa.centroid().0;
        prop_assert!((shift - dk * t).abs() < 1e-9);
    }

    #[test]
    fn delta_family_has_unit_mass(m in 0.5f64..2000.0, b in 0.05f64..2.0) {
        let d = DeltaFamily::new(m, b, &UnitsConfig::default()).unwrap();
        let w = d.e_fold_half_width();
        let n = 4000;
        let h = 24.0 * w / n as f64;
        let mass: f64 = (0..n).map(|i| d.density(-12.0 * w + i as f64 * h)).sum::<f64>() * h;
        prop_assert!((mass - 1.0).abs() < 1e-8);
    }
}

#[test]
fn axis_samples_are_bit_reproducible() {
    let a = make_uniform_grid(-PI, 2.0 * PI, 1000).unwrap();
    let b = make_uniform_grid(-PI, 2.0 * PI, 1000).unwrap();
    assert_eq!(a.x.coords(), b.x.coords());
    assert_eq!(a.x.wavenumbers(), b.x.wavenumbers());
}
