use std::f64::consts::PI;

use slitlab_core::grid::{Axis, Grid};
use slitlab_core::tdse::{
    evolve_observed, DoubleSlit, EvolveConfig, Openings, PotentialSpec, Propagator, ScreenAccumulator,
    ScreenPattern, VectorPotential,
};
use slitlab_core::wavefunction::{gaussian_packet_2d, PacketAxis};
use slitlab_core::UnitsConfig;

const X_SCREEN: f64 = 6.0;

fn screen(openings: Openings) -> ScreenPattern {
    let ax = Axis::new(-12.8, 12.8, 256).unwrap();
    let grid = Grid::plane(ax, ax);
    let slit = DoubleSlit {
        barrier_x: -3.0,
        thickness: 0.8,
        separation: 2.4,
        width: 0.6,
        height: 1e3,
        openings,
        edge_cells: 2.0,
    };
    let pot = PotentialSpec::new(grid, slit.sample(&grid).unwrap(), VectorPotential::None).unwrap();
    let psi0 = gaussian_packet_2d(
        &grid,
        PacketAxis { center: -8.0, k0: 2.0 * PI / 0.4, sigma: 1.0 },
        PacketAxis { center: 0.0, k0: 0.0, sigma: 3.0 },
    )
    .unwrap()
    .psi;
    let mut cfg = EvolveConfig::new(4e-4, 3000, 5).with_absorber(12, 500.0);
    cfg.x_screen = Some(X_SCREEN);
    let units = UnitsConfig::default();
    let mut prop = Propagator::new(&pot, &cfg, &units).unwrap();
    let mut acc = ScreenAccumulator::new(&grid, X_SCREEN, cfg.dt * 5.0).unwrap();
    evolve_observed(&psi0, &mut prop, &cfg, &mut |_, f| acc.add(f)).unwrap();
    acc.finish()
}

#[test]
fn double_slit_pattern_is_mirror_symmetric() {
    let p = screen(Openings::Both);
    assert!(p.intensity.iter().all(|v| *v >= 0.0));
    let n = p.s.len();
    let worst = (1..n).map(|i| (p.intensity[i] - p.intensity[n - i]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-3 * p.max(), "asymmetry {}", worst / p.max());
}

#[test]
fn single_slit_gives_one_smooth_lobe() {
    let p = screen(Openings::Upper);
    let max = p.max();
    let peak = p.intensity.iter().position(|v| *v == max).unwrap();
    assert!((p.s[peak] - 1.2).abs() < 1.0, "lobe centred at {}", p.s[peak]);
    // walking away from the peak, the intensity must fall to a tenth of
    // the maximum without any dip and recovery
    for dir in [-1isize, 1] {
        let mut i = peak as isize;
        let mut low = max;
        loop {
            i += dir;
            let v = p.intensity[i as usize];
            assert!(v <= low + 1e-2 * max, "secondary rise at s = {}", p.s[i as usize]);
            low = low.min(v);
            if v < 0.1 * max {
                break;
            }
        }
    }
}
