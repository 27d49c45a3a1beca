// SPDX-License-Identifier: Apache-2.0

use crate::engines::kernels::weighted_sum;
use crate::engines::ExecutionConfig;
use crate::error::Result;
use crate::grid::basis::basis_unchecked;
use crate::grid::tables::offset_parameter;
use crate::grid::{ControlGrid, DeformationField, TileGeometry};
use crate::parallel::for_each_slab;
use crate::real::Real;

/// Reference field: the direct triple sum evaluated entirely in double
/// precision, with the grid promoted to double first.
pub fn interpolate_oracle<T: Real>(
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
) -> Result<DeformationField<f64>> {
    grid.check_covers(geom)?;
    let grid = grid.convert::<f64>();
    let src = grid.data();
    let gdims = grid.dims();
    let [nx, ny, _] = geom.volume_dims();
    let spacing = geom.spacing();

    let mut field = DeformationField::<f64>::zeros(geom.volume_dims());
    let workers = ExecutionConfig::default().parallelism;
    for_each_slab(field.data_mut(), nx * ny, workers, |z, plane| {
        let bz = basis_unchecked(offset_parameter(z % spacing[2], spacing[2]));
        let kz = z / spacing[2];
        for y in 0..ny {
            let by = basis_unchecked(offset_parameter(y % spacing[1], spacing[1]));
            let jy = y / spacing[1];
            for x in 0..nx {
                let bx = basis_unchecked(offset_parameter(x % spacing[0], spacing[0]));
                let ix = x / spacing[0];
                plane[x + nx * y] = weighted_sum(
                    |l, m, n| src[(ix + l) + gdims[0] * ((jy + m) + gdims[1] * (kz + n))],
                    &bx,
                    &by,
                    &bz,
                );
            }
        }
    });
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Axis;
    use crate::Error;

    #[test]
    fn constant_grid() {
        let geom = TileGeometry::new([11, 7, 5], [3, 2, 4]).unwrap();
        let grid = ControlGrid::<f64>::from_fn(geom.required_grid_dims(), [3, 2, 4], |_| {
            [0.25, -1.5, 3.0]
        })
        .unwrap();
        let f = interpolate_oracle(&grid, &geom).unwrap();
        for v in f.data() {
            assert!((v[0] - 0.25).abs() < 1e-12);
            assert!((v[1] + 1.5).abs() < 1e-12);
            assert!((v[2] - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ramp_along_x() {
        let geom = TileGeometry::new([17, 3, 3], [5, 1, 1]).unwrap();
        let grid = ControlGrid::<f64>::from_fn(geom.required_grid_dims(), [5, 1, 1], |p| {
            [p[0] as f64, 0.0, 0.0]
        })
        .unwrap();
        let f = interpolate_oracle(&grid, &geom).unwrap();
        for x in 0..17 {
            let v = f.get([x, 1, 2]);
            assert!((v[0] - (x as f64 / 5.0 + 1.0)).abs() < 1e-10, "x = {x}: {v:?}");
            assert_eq!(v[1], 0.0);
        }
    }

    #[test]
    fn too_small_names_axis() {
        let geom = TileGeometry::new([10, 10, 10], [5, 5, 5]).unwrap();
        let grid = ControlGrid::<f32>::from_fn([5, 5, 4], [5, 5, 5], |_| [0.0; 3]).unwrap();
        assert!(matches!(
            interpolate_oracle(&grid, &geom),
            Err(Error::GridTooSmall { axis: Axis::Z, .. })
        ));
    }
}
