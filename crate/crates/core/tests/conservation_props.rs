mod common;

use active_flux::average::average_rhs;
use active_flux::integrate::{compute_dt, rk3_step};
use active_flux::{BoundaryCondition, GasParams, GridSpec, Parallelism};
use proptest::prelude::*;

fn spec(nx: usize, ny: usize) -> GridSpec {
    GridSpec::new(nx, ny, -0.4, 0.1, 0.07, 0.09, BoundaryCondition::PERIODIC).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn average_updates_telescope(seed in any::<u64>(), nx in 3usize..10, ny in 3usize..10) {
        let gas = GasParams::default();
        let mut field = common::noisy_field(spec(nx, ny), &mut common::rng(seed), 0.4);
        field.fill_ghosts();
        let rhs = average_rhs(&field, gas, Parallelism::Serial).unwrap();
        let mut total = [0.0; 4];
        let mut size = [0.0f64; 4];
        for (_, r) in rhs.physical() {
            for k in 0..4 {
                total[k] += r[k];
                size[k] += r[k].abs();
            }
        }
        for k in 0..4 {
            prop_assert!(total[k].abs() <= 1e-13 * size[k].max(1.0), "component {}: {} of {}", k, total[k], size[k]);
        }
    }

    #[test]
    fn rk3_step_conserves_totals(seed in any::<u64>(), nx in 3usize..8, ny in 3usize..8, limiter in any::<bool>()) {
        let gas = GasParams::default();
        let mut field = common::noisy_field(spec(nx, ny), &mut common::rng(seed), 0.2);
        field.fill_ghosts();
        let before = field.totals();
        let dt = 0.05 * compute_dt(&field, 1.0, gas).unwrap();
        rk3_step(&mut field, dt, limiter, gas, Parallelism::Serial).unwrap();
        let after = field.totals();
        for k in 0..4 {
            prop_assert!((after[k] - before[k]).abs() <= 1e-13 * before[k].abs().max(field.spec.area()));
        }
    }
}
