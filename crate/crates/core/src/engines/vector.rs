// SPDX-License-Identifier: Apache-2.0

//! Lane-parallel lerp-form strategies.
//!
//! Lanes are plain fixed-size arrays; with FMA-capable targets the compiler
//! maps each lane loop to one vector instruction. Per-lane arithmetic is the
//! same sequence of fused lerps as the scalar lerp tree.

use crate::engines::kernels::{lerp, to_sub_cubes, trilerp, Vec3};
use crate::engines::tile::BlockBuffer;
use crate::engines::ExecutionConfig;
use crate::grid::{ControlGrid, TileGeometry, TypedTables};
use crate::parallel::for_each_slab;
use crate::real::Real;

/// Lane count of both vector strategies; equals the number of sub-cubes.
pub const LANES: usize = 8;

type Lanes<T> = [T; LANES];

#[inline(always)]
fn splat<T: Real>(v: T) -> Lanes<T> {
    [v; LANES]
}

#[inline(always)]
fn lerp_lanes<T: Real>(a: &Lanes<T>, b: &Lanes<T>, w: &Lanes<T>) -> Lanes<T> {
    let mut out = [T::ZERO; LANES];
    for i in 0..LANES {
        out[i] = lerp(a[i], b[i], w[i]);
    }
    out
}

/// Lane-wise seven-lerp trilinear interpolation.
#[inline(always)]
fn trilerp_lanes<T: Real>(
    c: &[Lanes<T>; 8],
    fx: &Lanes<T>,
    fy: &Lanes<T>,
    fz: &Lanes<T>,
) -> Lanes<T> {
    let x00 = lerp_lanes(&c[0], &c[1], fx);
    let x10 = lerp_lanes(&c[2], &c[3], fx);
    let x01 = lerp_lanes(&c[4], &c[5], fx);
    let x11 = lerp_lanes(&c[6], &c[7], fx);
    let y0 = lerp_lanes(&x00, &x10, fy);
    let y1 = lerp_lanes(&x01, &x11, fy);
    lerp_lanes(&y0, &y1, fz)
}

/// Drives `tile_fn(buffer, tile, slab, z0)` over rows of `block_x` tiles.
///
/// Only x-adjacent tiles share a control-point fetch.
fn for_each_tile_row<T, F>(
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
    cfg: &ExecutionConfig,
    out: &mut [Vec3<T>],
    tile_fn: F,
) where
    T: Real,
    F: Fn(&BlockBuffer<T>, [usize; 3], &mut [Vec3<T>], usize) + Sync,
{
    let src = grid.data();
    let gdims = grid.dims();
    let [nx, ny, _] = geom.volume_dims();
    let spacing = geom.spacing();
    let tiles = geom.tile_counts();
    let block_x = cfg.block_of_tiles[0];

    for_each_slab(out, nx * ny * spacing[2], cfg.parallelism, |tz, slab| {
        let z0 = tz * spacing[2];
        let mut buffer = BlockBuffer::new();
        for ty in 0..tiles[1] {
            for bx in (0..tiles[0]).step_by(block_x) {
                let tx_range = bx..(bx + block_x).min(tiles[0]);
                buffer.load(src, gdims, [tx_range.clone(), ty..ty + 1, tz..tz + 1]);
                for tx in tx_range {
                    tile_fn(&buffer, [tx, ty, tz], slab, z0);
                }
            }
        }
    });
}

/// Lanes cover up to eight consecutive x-offsets of one tile row; trailing
/// lanes are masked when `δx` is not a multiple of the lane count.
pub(crate) fn vector_per_tile<T: Real>(
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
    tables: &TypedTables<T>,
    cfg: &ExecutionConfig,
    out: &mut [Vec3<T>],
) {
    let [nx, ny, _] = geom.volume_dims();
    let spacing = geom.spacing();

    for_each_tile_row(grid, geom, cfg, out, |buffer, tile, slab, z0| {
        let subs = to_sub_cubes(&buffer.neighbourhood(tile));
        let start = [0, 1, 2].map(|a| tile[a] * spacing[a]);
        let x_span = geom.tile_span(0, tile[0]);

        for z in geom.tile_span(2, tile[2]) {
            let wz = &tables.axes[2][z - start[2]];
            for y in geom.tile_span(1, tile[1]) {
                let wy = &tables.axes[1][y - start[1]];
                let row = nx * (y + ny * (z - z0));

                for xs in x_span.clone().step_by(LANES) {
                    let width = LANES.min(x_span.end - xs);
                    let mut hx = [[T::ZERO; LANES]; 2];
                    let mut gx = [T::ZERO; LANES];
                    for lane in 0..width {
                        let w = &tables.axes[0][xs + lane - start[0]];
                        hx[0][lane] = w.h[0];
                        hx[1][lane] = w.h[1];
                        gx[lane] = w.g1;
                    }

                    let mut partial = [[[T::ZERO; LANES]; 8]; 3];
                    for s in 0..8 {
                        let (p, q, r) = (s & 1, (s >> 1) & 1, s >> 2);
                        let fy = splat(wy.h[q]);
                        let fz = splat(wz.h[r]);
                        for c in 0..3 {
                            let corners = subs[s].map(|v| splat(v[c]));
                            partial[c][s] = trilerp_lanes(&corners, &hx[p], &fy, &fz);
                        }
                    }
                    let gy = splat(wy.g1);
                    let gz = splat(wz.g1);
                    let result = [0, 1, 2].map(|c| trilerp_lanes(&partial[c], &gx, &gy, &gz));
                    for lane in 0..width {
                        slab[row + xs + lane] = [result[0][lane], result[1][lane], result[2][lane]];
                    }
                }
            }
        }
    });
}

/// Lane `s` evaluates sub-cube `s` of one voxel; a cross-lane trilinear
/// interpolation combines the eight results.
pub(crate) fn vector_per_voxel<T: Real>(
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
    tables: &TypedTables<T>,
    cfg: &ExecutionConfig,
    out: &mut [Vec3<T>],
) {
    let [nx, ny, _] = geom.volume_dims();
    let spacing = geom.spacing();

    for_each_tile_row(grid, geom, cfg, out, |buffer, tile, slab, z0| {
        let subs = to_sub_cubes(&buffer.neighbourhood(tile));
        // corners[c][k][s]: component c of corner k of sub-cube s.
        let mut corners = [[[T::ZERO; LANES]; 8]; 3];
        for (s, sub) in subs.iter().enumerate() {
            for (k, point) in sub.iter().enumerate() {
                for c in 0..3 {
                    corners[c][k][s] = point[c];
                }
            }
        }
        let start = [0, 1, 2].map(|a| tile[a] * spacing[a]);

        for z in geom.tile_span(2, tile[2]) {
            let wz = &tables.axes[2][z - start[2]];
            let fz: Lanes<T> = std::array::from_fn(|s| wz.h[s >> 2]);
            for y in geom.tile_span(1, tile[1]) {
                let wy = &tables.axes[1][y - start[1]];
                let fy: Lanes<T> = std::array::from_fn(|s| wy.h[(s >> 1) & 1]);
                let row = nx * (y + ny * (z - z0));
                for x in geom.tile_span(0, tile[0]) {
                    let wx = &tables.axes[0][x - start[0]];
                    let fx: Lanes<T> = std::array::from_fn(|s| wx.h[s & 1]);
                    slab[row + x] = [0, 1, 2].map(|c| {
                        let partial = trilerp_lanes(&corners[c], &fx, &fy, &fz);
                        trilerp(&partial, wx.g1, wy.g1, wz.g1)
                    });
                }
            }
        }
    });
}
