// SPDX-License-Identifier: Apache-2.0

use crate::engines::kernels::{gather, weighted_sum, weighted_sum_local, Vec3};
use crate::engines::ExecutionConfig;
use crate::grid::basis::basis_unchecked;
use crate::grid::tables::offset_parameter;
use crate::grid::{ControlGrid, TileGeometry, TypedTables};
use crate::parallel::for_each_slab;
use crate::real::Real;

#[inline(always)]
fn weights_at<T: Real>(offset: usize, delta: usize) -> [T; 4] {
    basis_unchecked(offset_parameter(offset, delta)).map(T::from_f64)
}

/// Every voxel gathers its 64 control points straight from the grid and
/// evaluates its own basis weights.
pub(crate) fn thread_per_voxel<T: Real>(
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
    cfg: &ExecutionConfig,
    out: &mut [Vec3<T>],
) {
    let src = grid.data();
    let gdims = grid.dims();
    let [nx, ny, _] = geom.volume_dims();
    let spacing = geom.spacing();

    for_each_slab(out, nx * ny, cfg.parallelism, |z, plane| {
        for y in 0..ny {
            for x in 0..nx {
                let bx = weights_at::<T>(x % spacing[0], spacing[0]);
                let by = weights_at::<T>(y % spacing[1], spacing[1]);
                let bz = weights_at::<T>(z % spacing[2], spacing[2]);
                let base = [x / spacing[0], y / spacing[1], z / spacing[2]];
                plane[x + nx * y] = weighted_sum(
                    |l, m, n| {
                        src[(base[0] + l) + gdims[0] * ((base[1] + m) + gdims[1] * (base[2] + n))]
                    },
                    &bx,
                    &by,
                    &bz,
                );
            }
        }
    });
}

/// One work item per tile: its neighbourhood is fetched once into scratch
/// and weights come from the look-up tables.
pub(crate) fn thread_per_voxel_tiled<T: Real>(
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
    tables: &TypedTables<T>,
    cfg: &ExecutionConfig,
    out: &mut [Vec3<T>],
) {
    let src = grid.data();
    let gdims = grid.dims();
    let [nx, ny, _] = geom.volume_dims();
    let spacing = geom.spacing();
    let tiles = geom.tile_counts();

    for_each_slab(out, nx * ny * spacing[2], cfg.parallelism, |tz, slab| {
        let z0 = tz * spacing[2];
        for ty in 0..tiles[1] {
            for tx in 0..tiles[0] {
                let scratch = gather(src, gdims, [tx, ty, tz]);
                for z in geom.tile_span(2, tz) {
                    let bz = &tables.axes[2][z - z0].basis;
                    for y in geom.tile_span(1, ty) {
                        let by = &tables.axes[1][y - ty * spacing[1]].basis;
                        let row = nx * (y + ny * (z - z0));
                        for x in geom.tile_span(0, tx) {
                            let bx = &tables.axes[0][x - tx * spacing[0]].basis;
                            slab[row + x] = weighted_sum_local(&scratch, bx, by, bz);
                        }
                    }
                }
            }
        }
    });
}
