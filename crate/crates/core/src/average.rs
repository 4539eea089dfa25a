//! Conservative update of the cell averages with Simpson-rule interface fluxes.

use crate::error::{DofLocation, Error, Result};
use crate::exec::{try_for_each_row, Parallelism};
use crate::grid::{Array2, DofField};
use crate::physics::{flux_x, flux_y, ConservedState, GasParams};

pub const W_END: f64 = 1.0 / 6.0;
pub const W_MID: f64 = 2.0 / 3.0;

/// Simpson's rule on one face from its two end values and the midpoint value.
#[inline]
pub fn simpson(a: ConservedState, mid: ConservedState, b: ConservedState) -> ConservedState {
    (a + b) * W_END + mid * W_MID
}

/// x-flux through the vertical face `i` (between cells `i-1` and `i`) of row `j`.
pub fn interface_flux_x(field: &DofField, i: isize, j: isize, gas: GasParams) -> Result<ConservedState> {
    let f = |q| flux_x(q, gas).map_err(|e| Error::domain(DofLocation::Face { axis: 'x', i, j }, e));
    Ok(simpson(
        f(field.nodes.at(i, j))?,
        f(field.xedges.at(i, j))?,
        f(field.nodes.at(i, j + 1))?,
    ))
}

/// y-flux through the horizontal face `j` (between cells `j-1` and `j`) of column `i`.
pub fn interface_flux_y(field: &DofField, i: isize, j: isize, gas: GasParams) -> Result<ConservedState> {
    let f = |q| flux_y(q, gas).map_err(|e| Error::domain(DofLocation::Face { axis: 'y', i, j }, e));
    Ok(simpson(
        f(field.nodes.at(i, j))?,
        f(field.yedges.at(i, j))?,
        f(field.nodes.at(i + 1, j))?,
    ))
}

/// Time derivative of the cell averages.
pub fn average_rhs(field: &DofField, gas: GasParams, par: Parallelism) -> Result<Array2<ConservedState>> {
    let mut out = Array2::new("average rhs", field.spec.nx, field.spec.ny);
    average_rhs_into(field, gas, par, &mut out)?;
    Ok(out)
}

/// Writes the averages' time derivative into `out`. Every face flux is evaluated once
/// and shared by both neighbouring cells.
pub fn average_rhs_into(field: &DofField, gas: GasParams, par: Parallelism, out: &mut Array2<ConservedState>) -> Result<()> {
    let spec = field.spec;
    let (nx, ny) = (spec.nx as isize, spec.ny as isize);
    let mut fx = Array2::new("x-fluxes", spec.nx + 1, spec.ny);
    let mut fy = Array2::new("y-fluxes", spec.nx, spec.ny + 1);
    try_for_each_row(par, &mut fx, 0..ny, |j, row| {
        for i in 0..=nx {
            row[i] = interface_flux_x(field, i, j, gas)?;
        }
        Ok(())
    })?;
    try_for_each_row(par, &mut fy, 0..ny + 1, |j, row| {
        for i in 0..nx {
            row[i] = interface_flux_y(field, i, j, gas)?;
        }
        Ok(())
    })?;
    let (rdx, rdy) = (1.0 / spec.dx, 1.0 / spec.dy);
    try_for_each_row(par, out, 0..ny, |j, row| {
        for i in 0..nx {
            let dfx = fx.at(i + 1, j) - fx.at(i, j);
            let dfy = fy.at(i, j + 1) - fy.at(i, j);
            row[i] = (dfx * rdx + dfy * rdy) * -1.0;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{BoundaryCondition, GridSpec};
    use crate::PrimitiveState;

    #[test]
    fn weights_sum_to_one() {
        assert_eq!(2.0 * W_END + W_MID, 1.0);
        let s = simpson(ConservedState::splat(1.0), ConservedState::splat(2.0), ConservedState::splat(3.0));
        assert!((s[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn constant_face_gives_point_flux() {
        let gas = GasParams::default();
        let spec = GridSpec::new(3, 3, 0.0, 0.0, 1.0, 1.0, BoundaryCondition::PERIODIC).unwrap();
        let mut field = DofField::allocate(spec);
        let q = PrimitiveState::new(1.0, 1.0, 0.5, 1.0).to_conserved(gas);
        for arr in field.storage_mut() {
            arr.fill(q);
        }
        let f = interface_flux_x(&field, 1, 1, gas).unwrap();
        let exact = flux_x(q, gas).unwrap();
        for k in 0..4 {
            assert!((f[k] - exact[k]).abs() < 1e-14);
        }
        let rhs = average_rhs(&field, gas, Parallelism::Serial).unwrap();
        for (_, v) in rhs.physical() {
            assert_eq!(*v, ConservedState::ZERO);
        }
    }

    #[test]
    fn bad_face_state_is_reported() {
        let gas = GasParams::default();
        let spec = GridSpec::new(3, 3, 0.0, 0.0, 1.0, 1.0, BoundaryCondition::PERIODIC).unwrap();
        let field = DofField::allocate(spec);
        let err = average_rhs(&field, gas, Parallelism::Serial).unwrap_err();
        assert!(matches!(err, Error::Domain { location: DofLocation::Face { .. }, .. }));
    }
}
