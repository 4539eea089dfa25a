use active_flux::physics::{
    flux_x, flux_y, jacobian, mat_vec, max_wave_speeds, pressure, split_jacobian, validate, EigenSystem, Mat4,
};
use active_flux::{Axis, ConservedState, GasParams, PrimitiveState};
use proptest::prelude::*;

fn state() -> impl Strategy<Value = (PrimitiveState, GasParams)> {
    (0.05..5.0f64, -3.0..3.0f64, -3.0..3.0f64, 0.05..5.0f64, 1.05..3.0f64)
        .prop_map(|(rho, u, v, p, g)| (PrimitiveState::new(rho, u, v, p), GasParams::new(g).unwrap()))
}

fn vec4() -> impl Strategy<Value = [f64; 4]> {
    prop::array::uniform4(-1.0..1.0f64)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn flux(q: ConservedState, gas: GasParams, axis: Axis) -> [f64; 4] {
    match axis {
        Axis::X => flux_x(q, gas).unwrap().0,
        Axis::Y => flux_y(q, gas).unwrap().0,
    }
}

/// Directional derivative of the flux, by a fourth-order central difference.
fn flux_derivative(q: ConservedState, d: [f64; 4], gas: GasParams, axis: Axis) -> [f64; 4] {
    let h = 1e-4 * q.rho().min(1.0);
    let at = |s: f64| flux(ConservedState(std::array::from_fn(|k| q[k] + s * d[k])), gas, axis);
    let (p1, m1, p2, m2) = (at(h), at(-h), at(2.0 * h), at(-2.0 * h));
    std::array::from_fn(|k| (8.0 * (p1[k] - m1[k]) - (p2[k] - m2[k])) / (12.0 * h))
}

fn mat_norm(m: &Mat4) -> f64 {
    norm(&m.concat())
}

proptest! {
    #[test]
    fn primitive_round_trip((w, gas) in state()) {
        let back = w.to_conserved(gas).to_primitive(gas).unwrap();
        let scale = 1.0 + w.rho.abs() + w.u.abs() + w.v.abs() + w.p.abs();
        for (a, b) in [(w.rho, back.rho), (w.u, back.u), (w.v, back.v), (w.p, back.p)] {
            prop_assert!((a - b).abs() <= 1e-12 * scale, "{:?} vs {:?}", w, back);
        }
    }

    #[test]
    fn jacobian_is_the_flux_derivative((w, gas) in state(), d in vec4(), y in any::<bool>()) {
        let q = w.to_conserved(gas);
        let axis = if y { Axis::Y } else { Axis::X };
        let j = jacobian(q, gas, axis).unwrap();
        let exact = mat_vec(&j, d);
        let fd = flux_derivative(q, d, gas, axis);
        let scale = mat_norm(&j) * norm(&d) + 1e-300;
        let diff: Vec<f64> = (0..4).map(|k| exact[k] - fd[k]).collect();
        prop_assert!(norm(&diff) <= 1e-6 * scale, "J d = {:?}, difference quotient {:?}", exact, fd);
    }

    #[test]
    fn flux_is_homogeneous_of_degree_one((w, gas) in state(), y in any::<bool>()) {
        // F(q) = J(q) q for the Euler equations with an ideal gas.
        let q = w.to_conserved(gas);
        let axis = if y { Axis::Y } else { Axis::X };
        let jq = mat_vec(&jacobian(q, gas, axis).unwrap(), q.0);
        let f = flux(q, gas, axis);
        for k in 0..4 {
            prop_assert!((jq[k] - f[k]).abs() <= 1e-11 * (1.0 + norm(&f)));
        }
    }

    #[test]
    fn eigensystem_diagonalizes((w, gas) in state(), y in any::<bool>()) {
        let q = w.to_conserved(gas);
        let axis = if y { Axis::Y } else { Axis::X };
        let es = EigenSystem::along(q, gas, axis).unwrap();
        let j = jacobian(q, gas, axis).unwrap();
        let scale = mat_norm(&es.right) * mat_norm(&es.left);
        for r in 0..4 {
            for c in 0..4 {
                let lr: f64 = (0..4).map(|k| es.left[r][k] * es.right[k][c]).sum();
                let id = if r == c { 1.0 } else { 0.0 };
                prop_assert!((lr - id).abs() <= 1e-12 * scale);
            }
        }
        // J r_k = lambda_k r_k
        for k in 0..4 {
            let rk: [f64; 4] = std::array::from_fn(|r| es.right[r][k]);
            let jr = mat_vec(&j, rk);
            for r in 0..4 {
                prop_assert!((jr[r] - es.values[k] * rk[r]).abs() <= 1e-11 * mat_norm(&j) * norm(&rk));
            }
        }
        let c = active_flux::physics::sound_speed(q, gas).unwrap();
        let u = if y { w.v } else { w.u };
        prop_assert!((es.values[0] - (u - c)).abs() <= 1e-12 * (u.abs() + c));
        prop_assert!((es.values[3] - (u + c)).abs() <= 1e-12 * (u.abs() + c));
    }

    #[test]
    fn split_sums_to_jacobian_and_upwinds((w, gas) in state(), d in vec4(), e in vec4(), y in any::<bool>()) {
        let q = w.to_conserved(gas);
        let axis = if y { Axis::Y } else { Axis::X };
        let j = jacobian(q, gas, axis).unwrap();
        let s = split_jacobian(q, gas, axis).unwrap();
        let tol = 1e-11 * mat_norm(&j);
        for r in 0..4 {
            for c in 0..4 {
                prop_assert!((s.plus[r][c] + s.minus[r][c] - j[r][c]).abs() <= tol);
            }
        }
        let es = EigenSystem::along(q, gas, axis).unwrap();
        // J+ d + J- e, and both equal to J d when d = e.
        let up = es.upwind(d, e);
        let direct: Vec<f64> = (0..4).map(|r| mat_vec(&s.plus, d)[r] + mat_vec(&s.minus, e)[r]).collect();
        let jd = mat_vec(&j, d);
        let same = es.upwind(d, d);
        for r in 0..4 {
            prop_assert!((up[r] - direct[r]).abs() <= tol * (norm(&d) + norm(&e)));
            prop_assert!((same[r] - jd[r]).abs() <= tol * norm(&d));
        }
    }

    #[test]
    fn axes_are_related_by_swapping((w, gas) in state()) {
        let q = w.to_conserved(gas);
        let fy = flux_y(q, gas).unwrap();
        let fx_swapped = flux_x(q.swap_xy(), gas).unwrap().swap_xy();
        for k in 0..4 {
            prop_assert!((fy[k] - fx_swapped[k]).abs() <= 1e-14 * (1.0 + fy[k].abs()));
        }
        let (sx, sy) = max_wave_speeds(q, gas).unwrap();
        let (tx, ty) = max_wave_speeds(q.swap_xy(), gas).unwrap();
        prop_assert_eq!((sx, sy), (ty, tx));
        prop_assert!(sx >= w.u.abs() && sy >= w.v.abs());
    }

    #[test]
    fn nonphysical_states_are_rejected(rho in -2.0..0.0f64, m in vec4()) {
        let gas = GasParams::default();
        let q = ConservedState::new(rho, m[0], m[1], m[2].abs() + 1.0);
        prop_assert!(pressure(q, gas).is_err());
        prop_assert!(max_wave_speeds(q, gas).is_err());
        // Positive density but kinetic energy above total energy.
        let q = ConservedState::new(1.0, 2.0 + m[0].abs(), 0.0, 1.0);
        prop_assert!(pressure(q, gas).unwrap() < 0.0);
        prop_assert!(validate(q, gas).is_err());
    }
}
