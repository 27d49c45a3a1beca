// SPDX-License-Identifier: Apache-2.0

use std::ops::Range;

use crate::engines::kernels::{gather, lerp_tree, to_sub_cubes, weighted_sum_local, Vec3};
use crate::engines::ExecutionConfig;
use crate::grid::{ControlGrid, TileGeometry, TypedTables};
use crate::parallel::for_each_slab;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Formulation {
    WeightedSum,
    LerpTree,
}

/// Control points shared by a block of adjacent tiles: a block of
/// `l × m × n` tiles needs `(l+3)(m+3)(n+3)` points, fetched once.
pub(crate) struct BlockBuffer<T> {
    dims: [usize; 3],
    origin: [usize; 3],
    data: Vec<Vec3<T>>,
}

impl<T: Real> BlockBuffer<T> {
    pub(crate) fn new() -> Self {
        Self {
            dims: [0; 3],
            origin: [0; 3],
            data: Vec::new(),
        }
    }

    /// Loads the points for tiles `tiles[a]` along each axis.
    pub(crate) fn load(&mut self, src: &[Vec3<T>], gdims: [usize; 3], tiles: [Range<usize>; 3]) {
        self.origin = [tiles[0].start, tiles[1].start, tiles[2].start];
        self.dims = [0, 1, 2].map(|a| tiles[a].len() + 3);
        self.data.clear();
        for k in 0..self.dims[2] {
            for j in 0..self.dims[1] {
                let row = self.origin[0]
                    + gdims[0] * ((self.origin[1] + j) + gdims[1] * (self.origin[2] + k));
                self.data.extend_from_slice(&src[row..row + self.dims[0]]);
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.data.len()
    }

    /// Neighbourhood of global tile `tile`, which must lie in the block.
    #[inline]
    pub(crate) fn neighbourhood(&self, tile: [usize; 3]) -> [Vec3<T>; 64] {
        gather(
            &self.data,
            self.dims,
            [0, 1, 2].map(|a| tile[a] - self.origin[a]),
        )
    }
}

fn clipped(start: usize, len: usize, limit: usize) -> Range<usize> {
    start..(start + len).min(limit)
}

/// One worker per tile. Blocks of tiles share a single fetch of their
/// overlapping control points; each tile then keeps its 64 points local for
/// every voxel it produces.
pub(crate) fn thread_per_tile<T: Real>(
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
    tables: &TypedTables<T>,
    cfg: &ExecutionConfig,
    out: &mut [Vec3<T>],
    formulation: Formulation,
) {
    let src = grid.data();
    let gdims = grid.dims();
    let [nx, ny, _] = geom.volume_dims();
    let spacing = geom.spacing();
    let tiles = geom.tile_counts();
    let block = cfg.block_of_tiles;

    let slab_len = nx * ny * spacing[2] * block[2];
    for_each_slab(out, slab_len, cfg.parallelism, |slab_index, slab| {
        let tz_range = clipped(slab_index * block[2], block[2], tiles[2]);
        let z0 = tz_range.start * spacing[2];
        let mut buffer = BlockBuffer::new();
        for by in (0..tiles[1]).step_by(block[1]) {
            let ty_range = clipped(by, block[1], tiles[1]);
            for bx in (0..tiles[0]).step_by(block[0]) {
                let tx_range = clipped(bx, block[0], tiles[0]);
                buffer.load(src, gdims, [tx_range.clone(), ty_range.clone(), tz_range.clone()]);
                for tz in tz_range.clone() {
                    for ty in ty_range.clone() {
                        for tx in tx_range.clone() {
                            let cps = buffer.neighbourhood([tx, ty, tz]);
                            let ctx = TileCtx {
                                geom,
                                tables,
                                tile: [tx, ty, tz],
                                z0,
                            };
                            match formulation {
                                Formulation::WeightedSum => ctx.run(slab, |wx, wy, wz| {
                                    weighted_sum_local(&cps, &wx.basis, &wy.basis, &wz.basis)
                                }),
                                Formulation::LerpTree => {
                                    let subs = to_sub_cubes(&cps);
                                    ctx.run(slab, |wx, wy, wz| lerp_tree(&subs, wx, wy, wz))
                                }
                            }
                        }
                    }
                }
            }
        }
    });
}

struct TileCtx<'a, T> {
    geom: &'a TileGeometry,
    tables: &'a TypedTables<T>,
    tile: [usize; 3],
    /// First voxel plane of the slab being written.
    z0: usize,
}

impl<T: Real> TileCtx<'_, T> {
    #[inline(always)]
    fn run(
        &self,
        slab: &mut [Vec3<T>],
        voxel: impl Fn(
            &crate::grid::TypedAxisWeight<T>,
            &crate::grid::TypedAxisWeight<T>,
            &crate::grid::TypedAxisWeight<T>,
        ) -> Vec3<T>,
    ) {
        let [nx, ny, _] = self.geom.volume_dims();
        let spacing = self.geom.spacing();
        let start = [0, 1, 2].map(|a| self.tile[a] * spacing[a]);
        for z in self.geom.tile_span(2, self.tile[2]) {
            let wz = &self.tables.axes[2][z - start[2]];
            for y in self.geom.tile_span(1, self.tile[1]) {
                let wy = &self.tables.axes[1][y - start[1]];
                let row = nx * (y + ny * (z - self.z0));
                for x in self.geom.tile_span(0, self.tile[0]) {
                    let wx = &self.tables.axes[0][x - start[0]];
                    slab[row + x] = voxel(wx, wy, wz);
                }
            }
        }
    }
}
