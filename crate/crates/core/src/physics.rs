//! Ideal-gas Euler closure, fluxes, flux Jacobians and their eigenvalue-sign splitting.
//!
//! Conserved variables are `(rho, rho*u, rho*v, e)` with the total energy
//! `e = p/(gamma-1) + rho*(u^2+v^2)/2`.

use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use crate::error::PhysicsError;
use crate::Axis;

pub type Mat4 = [[f64; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GasParams {
    pub gamma: f64,
}

impl GasParams {
    pub fn new(gamma: f64) -> Option<Self> {
        (gamma > 1.0 && gamma.is_finite()).then_some(Self { gamma })
    }
}

impl Default for GasParams {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ConservedState(pub [f64; 4]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl ConservedState {
    pub const ZERO: Self = Self([0.0; 4]);

    pub fn new(rho: f64, rhou: f64, rhov: f64, e: f64) -> Self {
        Self([rho, rhou, rhov, e])
    }

    pub fn splat(c: f64) -> Self {
        Self([c; 4])
    }

    pub fn rho(&self) -> f64 {
        self.0[0]
    }
    pub fn rhou(&self) -> f64 {
        self.0[1]
    }
    pub fn rhov(&self) -> f64 {
        self.0[2]
    }
    pub fn e(&self) -> f64 {
        self.0[3]
    }

    /// Exchanges the two momentum components (the x <-> y mirror).
    pub fn swap_xy(self) -> Self {
        Self([self.0[0], self.0[2], self.0[1], self.0[3]])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn to_primitive(self, gas: GasParams) -> Result<PrimitiveState, PhysicsError> {
        let p = pressure(self, gas)?;
        Ok(PrimitiveState {
            rho: self.rho(),
            u: self.rhou() / self.rho(),
            v: self.rhov() / self.rho(),
            p,
        })
    }
}

impl PrimitiveState {
    pub fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    pub fn to_conserved(self, gas: GasParams) -> ConservedState {
        let e = self.p / (gas.gamma - 1.0) + 0.5 * self.rho * (self.u * self.u + self.v * self.v);
        ConservedState([self.rho, self.rho * self.u, self.rho * self.v, e])
    }
}

impl Add for ConservedState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl Sub for ConservedState {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self(std::array::from_fn(|k| self.0[k] - o.0[k]))
    }
}

impl Mul<f64> for ConservedState {
    type Output = Self;
    fn mul(self, a: f64) -> Self {
        Self(self.0.map(|c| c * a))
    }
}

impl Mul<ConservedState> for f64 {
    type Output = ConservedState;
    fn mul(self, q: ConservedState) -> ConservedState {
        q * self
    }
}

impl AddAssign for ConservedState {
    fn add_assign(&mut self, o: Self) {
        for k in 0..4 {
            self.0[k] += o.0[k];
        }
    }
}

impl Index<usize> for ConservedState {
    type Output = f64;
    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

impl IndexMut<usize> for ConservedState {
    fn index_mut(&mut self, k: usize) -> &mut f64 {
        &mut self.0[k]
    }
}

fn check_density(q: ConservedState) -> Result<(), PhysicsError> {
    if !q.is_finite() {
        return Err(PhysicsError::NonFinite { state: q });
    }
    if q.rho() <= 0.0 {
        return Err(PhysicsError::NonPositiveDensity { rho: q.rho(), state: q });
    }
    Ok(())
}

pub fn pressure(q: ConservedState, gas: GasParams) -> Result<f64, PhysicsError> {
    check_density(q)?;
    let kinetic = 0.5 * (q.rhou() * q.rhou() + q.rhov() * q.rhov()) / q.rho();
    Ok((gas.gamma - 1.0) * (q.e() - kinetic))
}

pub fn sound_speed(q: ConservedState, gas: GasParams) -> Result<f64, PhysicsError> {
    let p = pressure(q, gas)?;
    if !(p > 0.0) {
        return Err(PhysicsError::NonPositivePressure { p, state: q });
    }
    Ok((gas.gamma * p / q.rho()).sqrt())
}

pub fn flux_x(q: ConservedState, gas: GasParams) -> Result<ConservedState, PhysicsError> {
    let p = pressure(q, gas)?;
    let u = q.rhou() / q.rho();
    Ok(ConservedState([
        q.rhou(),
        q.rhou() * u + p,
        q.rhov() * u,
        u * (q.e() + p),
    ]))
}

pub fn flux_y(q: ConservedState, gas: GasParams) -> Result<ConservedState, PhysicsError> {
    let p = pressure(q, gas)?;
    let v = q.rhov() / q.rho();
    Ok(ConservedState([
        q.rhov(),
        q.rhou() * v,
        q.rhov() * v + p,
        v * (q.e() + p),
    ]))
}

pub fn flux(q: ConservedState, gas: GasParams, axis: Axis) -> Result<ConservedState, PhysicsError> {
    match axis {
        Axis::X => flux_x(q, gas),
        Axis::Y => flux_y(q, gas),
    }
}

pub fn jacobian_x(q: ConservedState, gas: GasParams) -> Result<Mat4, PhysicsError> {
    let p = pressure(q, gas)?;
    let g = gas.gamma;
    let u = q.rhou() / q.rho();
    let v = q.rhov() / q.rho();
    let h = (q.e() + p) / q.rho();
    let half_q2 = 0.5 * (g - 1.0) * (u * u + v * v);
    Ok([
        [0.0, 1.0, 0.0, 0.0],
        [half_q2 - u * u, (3.0 - g) * u, -(g - 1.0) * v, g - 1.0],
        [-u * v, v, u, 0.0],
        [u * (half_q2 - h), h - (g - 1.0) * u * u, -(g - 1.0) * u * v, g * u],
    ])
}

/// Permutation exchanging rows/columns 1 and 2.
fn swap_mat(m: Mat4) -> Mat4 {
    const P: [usize; 4] = [0, 2, 1, 3];
    std::array::from_fn(|r| std::array::from_fn(|c| m[P[r]][P[c]]))
}

pub fn jacobian_y(q: ConservedState, gas: GasParams) -> Result<Mat4, PhysicsError> {
    Ok(swap_mat(jacobian_x(q.swap_xy(), gas)?))
}

pub fn jacobian(q: ConservedState, gas: GasParams, axis: Axis) -> Result<Mat4, PhysicsError> {
    match axis {
        Axis::X => jacobian_x(q, gas),
        Axis::Y => jacobian_y(q, gas),
    }
}

pub fn mat_vec(m: &Mat4, v: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|r| m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3])
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..4).map(|k| a[r][k] * b[k][c]).sum()))
}

/// Positive and negative parts of a flux Jacobian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobianSplit {
    pub plus: Mat4,
    pub minus: Mat4,
}

/// Closed-form eigendecomposition `J = R diag(lambda) L` with `L = R^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenSystem {
    pub values: [f64; 4],
    pub right: Mat4,
    pub left: Mat4,
}

impl EigenSystem {
    pub fn x(q: ConservedState, gas: GasParams) -> Result<Self, PhysicsError> {
        let c = sound_speed(q, gas)?;
        let p = pressure(q, gas)?;
        let g1 = gas.gamma - 1.0;
        let u = q.rhou() / q.rho();
        let v = q.rhov() / q.rho();
        let h = (q.e() + p) / q.rho();
        let b1 = g1 / (c * c);
        let b2 = 0.5 * b1 * (u * u + v * v);

        let right = [
            [1.0, 1.0, 0.0, 1.0],
            [u - c, u, 0.0, u + c],
            [v, v, 1.0, v],
            [h - u * c, 0.5 * (u * u + v * v), v, h + u * c],
        ];
        let left = [
            [
                0.5 * (b2 + u / c),
                -0.5 * (b1 * u + 1.0 / c),
                -0.5 * b1 * v,
                0.5 * b1,
            ],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-v, 0.0, 1.0, 0.0],
            [
                0.5 * (b2 - u / c),
                -0.5 * (b1 * u - 1.0 / c),
                -0.5 * b1 * v,
                0.5 * b1,
            ],
        ];
        Ok(Self {
            values: [u - c, u, u, u + c],
            right,
            left,
        })
    }

    pub fn y(q: ConservedState, gas: GasParams) -> Result<Self, PhysicsError> {
        let ex = Self::x(q.swap_xy(), gas)?;
        const P: [usize; 4] = [0, 2, 1, 3];
        Ok(Self {
            values: ex.values,
            right: std::array::from_fn(|r| ex.right[P[r]]),
            left: std::array::from_fn(|r| std::array::from_fn(|c| ex.left[r][P[c]])),
        })
    }

    pub fn along(q: ConservedState, gas: GasParams, axis: Axis) -> Result<Self, PhysicsError> {
        match axis {
            Axis::X => Self::x(q, gas),
            Axis::Y => Self::y(q, gas),
        }
    }

    fn rebuild(&self, scale: impl Fn(f64) -> f64) -> Mat4 {
        let lam = self.values.map(scale);
        std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..4).map(|k| self.right[r][k] * lam[k] * self.left[k][c]).sum())
        })
    }

    pub fn split(&self) -> JacobianSplit {
        JacobianSplit {
            plus: self.rebuild(|a| a.max(0.0)),
            minus: self.rebuild(|a| a.min(0.0)),
        }
    }

    /// `J+ d_plus + J- d_minus`, evaluated in characteristic variables.
    pub fn upwind(&self, d_plus: [f64; 4], d_minus: [f64; 4]) -> [f64; 4] {
        let wp = mat_vec(&self.left, d_plus);
        let wm = mat_vec(&self.left, d_minus);
        let w: [f64; 4] =
            std::array::from_fn(|k| self.values[k].max(0.0) * wp[k] + self.values[k].min(0.0) * wm[k]);
        mat_vec(&self.right, w)
    }
}

/// Splits the Euler flux Jacobian along `axis` at state `q`.
pub fn split_jacobian(q: ConservedState, gas: GasParams, axis: Axis) -> Result<JacobianSplit, PhysicsError> {
    Ok(EigenSystem::along(q, gas, axis)?.split())
}

/// `(|u| + c, |v| + c)`.
pub fn max_wave_speeds(q: ConservedState, gas: GasParams) -> Result<(f64, f64), PhysicsError> {
    let c = sound_speed(q, gas)?;
    let u = q.rhou() / q.rho();
    let v = q.rhov() / q.rho();
    Ok((u.abs() + c, v.abs() + c))
}

/// Density and pressure must both be positive.
pub fn validate(q: ConservedState, gas: GasParams) -> Result<(), PhysicsError> {
    sound_speed(q, gas).map(|_| ())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAS: GasParams = GasParams { gamma: 1.4 };

    fn prim(rho: f64, u: f64, v: f64, p: f64) -> ConservedState {
        PrimitiveState::new(rho, u, v, p).to_conserved(GAS)
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn flux_examples() {
        let rest = prim(1.0, 0.0, 0.0, 1.0);
        assert!((rest.e() - 2.5).abs() < 1e-15);
        assert!(close(&flux_x(rest, GAS).unwrap().0, &[0.0, 1.0, 0.0, 0.0], 1e-15));
        assert!(close(&flux_y(rest, GAS).unwrap().0, &[0.0, 0.0, 1.0, 0.0], 1e-15));

        let moving = prim(1.0, 1.0, 0.0, 1.0);
        assert!((moving.e() - 3.0).abs() < 1e-15);
        assert!(close(&flux_x(moving, GAS).unwrap().0, &[1.0, 2.0, 0.0, 4.0], 1e-14));

        let up = prim(1.0, 0.0, 1.0, 1.0);
        assert!(close(&flux_y(up, GAS).unwrap().0, &[1.0, 0.0, 2.0, 4.0], 1e-14));

        let q = prim(2.0, 0.0, 3.0, 1.0);
        assert!(close(&flux_x(q, GAS).unwrap().0, &[0.0, 1.0, 0.0, 0.0], 1e-14));
    }

    #[test]
    fn pressure_and_sound_speed() {
        let q = ConservedState::new(1.0, 0.0, 0.0, 2.5);
        assert!((pressure(q, GAS).unwrap() - 1.0).abs() < 1e-15);
        let q = ConservedState::new(1.0, 1.0, 0.0, 3.0);
        assert!((pressure(q, GAS).unwrap() - 1.0).abs() < 1e-15);
        assert!((sound_speed(q, GAS).unwrap() - 1.4f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_carry_state() {
        let q = ConservedState::new(-1.0, 0.0, 0.0, 1.0);
        assert!(matches!(flux_x(q, GAS), Err(PhysicsError::NonPositiveDensity { .. })));
        let q = ConservedState::new(1.0, 3.0, 0.0, 1.0);
        match sound_speed(q, GAS) {
            Err(PhysicsError::NonPositivePressure { p, state }) => {
                assert!(p < 0.0);
                assert_eq!(state, q);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn eigenvectors_are_inverse() {
        for q in [prim(1.0, 0.3, -0.7, 2.0), prim(0.2, -3.0, 1.0, 0.1)] {
            for axis in [Axis::X, Axis::Y] {
                let es = EigenSystem::along(q, GAS, axis).unwrap();
                let id = mat_mul(&es.left, &es.right);
                for r in 0..4 {
                    for c in 0..4 {
                        let want = if r == c { 1.0 } else { 0.0 };
                        assert!((id[r][c] - want).abs() < 1e-12, "{axis:?} {id:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn split_of_diagonal_matrix() {
        let id: Mat4 = std::array::from_fn(|r| std::array::from_fn(|c| if r == c { 1.0 } else { 0.0 }));
        let es = EigenSystem { values: [2.0, -3.0, 0.0, 1.0], right: id, left: id };
        let s = es.split();
        for k in 0..4 {
            assert_eq!(s.plus[k][k], [2.0, 0.0, 0.0, 1.0][k]);
            assert_eq!(s.minus[k][k], [0.0, -3.0, 0.0, 0.0][k]);
        }
    }

    #[test]
    fn supersonic_split_is_one_sided() {
        let q = prim(1.0, 3.0, 0.2, 1.0);
        let j = jacobian_x(q, GAS).unwrap();
        let s = split_jacobian(q, GAS, Axis::X).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                assert!((s.plus[r][c] - j[r][c]).abs() < 1e-12);
                assert!(s.minus[r][c].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn upwind_matches_split_matrices() {
        let q = prim(1.3, 0.4, -0.2, 0.9);
        let es = EigenSystem::y(q, GAS).unwrap();
        let s = es.split();
        let dp = [0.1, -0.3, 0.7, 1.1];
        let dm = [-0.5, 0.2, 0.05, 0.4];
        let a = es.upwind(dp, dm);
        let b: Vec<f64> = mat_vec(&s.plus, dp)
            .iter()
            .zip(mat_vec(&s.minus, dm))
            .map(|(x, y)| x + y)
            .collect();
        assert!(close(&a, &b, 1e-13));
    }

    #[test]
    fn wave_speeds() {
        let c = 1.4f64.sqrt();
        let (sx, sy) = max_wave_speeds(prim(1.0, 0.0, 0.0, 1.0), GAS).unwrap();
        assert!((sx - c).abs() < 1e-15 && (sy - c).abs() < 1e-15);
        let (sx, sy) = max_wave_speeds(prim(1.0, 2.0, -1.0, 1.0), GAS).unwrap();
        assert!((sx - (2.0 + c)).abs() < 1e-14);
        assert!((sy - (1.0 + c)).abs() < 1e-14);
    }
}
