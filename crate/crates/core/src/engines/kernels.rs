// SPDX-License-Identifier: Apache-2.0

//! Per-voxel arithmetic shared by the strategies.

use crate::grid::TypedAxisWeight;
use crate::real::Real;

pub(crate) type Vec3<T> = [T; 3];

/// The 4×4×4 neighbourhood of one tile, x-fastest: `l + 4m + 16n`.
pub(crate) type Neighbourhood<T> = [Vec3<T>; 64];

/// Eight 2×2×2 sub-cubes, each with its corners x-fastest.
///
/// Sub-cube `p + 2q + 4r` holds the neighbourhood points
/// `(2p + a, 2q + b, 2r + c)` at corner `a + 2b + 4c`.
pub(crate) type SubCubes<T> = [[Vec3<T>; 8]; 8];

#[inline(always)]
pub(crate) fn lerp<T: Real>(a: T, b: T, w: T) -> T {
    w.mul_add(b - a, a)
}

/// Seven lerps: four along x, two along y, one along z.
#[inline(always)]
pub(crate) fn trilerp<T: Real>(c: &[T; 8], fx: T, fy: T, fz: T) -> T {
    let x00 = lerp(c[0], c[1], fx);
    let x10 = lerp(c[2], c[3], fx);
    let x01 = lerp(c[4], c[5], fx);
    let x11 = lerp(c[6], c[7], fx);
    let y0 = lerp(x00, x10, fy);
    let y1 = lerp(x01, x11, fy);
    lerp(y0, y1, fz)
}

#[inline(always)]
fn lerp3<T: Real>(a: &Vec3<T>, b: &Vec3<T>, w: T) -> Vec3<T> {
    [lerp(a[0], b[0], w), lerp(a[1], b[1], w), lerp(a[2], b[2], w)]
}

/// [`trilerp`] applied to each component.
#[inline(always)]
fn trilerp3<T: Real>(c: &[Vec3<T>; 8], fx: T, fy: T, fz: T) -> Vec3<T> {
    let x00 = lerp3(&c[0], &c[1], fx);
    let x10 = lerp3(&c[2], &c[3], fx);
    let x01 = lerp3(&c[4], &c[5], fx);
    let x11 = lerp3(&c[6], &c[7], fx);
    let y0 = lerp3(&x00, &x10, fy);
    let y1 = lerp3(&x01, &x11, fy);
    lerp3(&y0, &y1, fz)
}

/// Triple sum in fixed order: x outer, y middle, z inner; each term is
/// `((φ·Bx)·By)·Bz`.
#[inline(always)]
#[allow(clippy::needless_range_loop)]
pub(crate) fn weighted_sum<T: Real>(
    fetch: impl Fn(usize, usize, usize) -> Vec3<T>,
    bx: &[T; 4],
    by: &[T; 4],
    bz: &[T; 4],
) -> Vec3<T> {
    let mut acc = [T::ZERO; 3];
    for l in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                let p = fetch(l, m, n);
                for c in 0..3 {
                    acc[c] += p[c] * bx[l] * by[m] * bz[n];
                }
            }
        }
    }
    acc
}

#[inline(always)]
pub(crate) fn weighted_sum_local<T: Real>(
    cps: &Neighbourhood<T>,
    bx: &[T; 4],
    by: &[T; 4],
    bz: &[T; 4],
) -> Vec3<T> {
    weighted_sum(|l, m, n| cps[l + 4 * m + 16 * n], bx, by, bz)
}

pub(crate) fn to_sub_cubes<T: Real>(cps: &Neighbourhood<T>) -> SubCubes<T> {
    let mut subs = [[[T::ZERO; 3]; 8]; 8];
    for (s, sub) in subs.iter_mut().enumerate() {
        let (p, q, r) = (s & 1, (s >> 1) & 1, s >> 2);
        for (k, corner) in sub.iter_mut().enumerate() {
            let (a, b, c) = (k & 1, (k >> 1) & 1, k >> 2);
            *corner = cps[(2 * p + a) + 4 * (2 * q + b) + 16 * (2 * r + c)];
        }
    }
    subs
}

/// Eight sub-cube trilinear interpolations with per-axis pair fractions,
/// combined by a ninth with the final fractions.
#[inline(always)]
pub(crate) fn lerp_tree<T: Real>(
    subs: &SubCubes<T>,
    wx: &TypedAxisWeight<T>,
    wy: &TypedAxisWeight<T>,
    wz: &TypedAxisWeight<T>,
) -> Vec3<T> {
    let mut partial = [[T::ZERO; 3]; 8];
    for (s, slot) in partial.iter_mut().enumerate() {
        let (p, q, r) = (s & 1, (s >> 1) & 1, s >> 2);
        *slot = trilerp3(&subs[s], wx.h[p], wy.h[q], wz.h[r]);
    }
    trilerp3(&partial, wx.g1, wy.g1, wz.g1)
}

/// Copies the 4×4×4 points starting at `base` out of an x-fastest array.
#[inline]
pub(crate) fn gather<T: Real>(src: &[Vec3<T>], dims: [usize; 3], base: [usize; 3]) -> Neighbourhood<T> {
    let mut cps = [[T::ZERO; 3]; 64];
    for n in 0..4 {
        for m in 0..4 {
            let row = base[0] + dims[0] * ((base[1] + m) + dims[1] * (base[2] + n));
            cps[4 * m + 16 * n..4 * m + 16 * n + 4].copy_from_slice(&src[row..row + 4]);
        }
    }
    cps
}
