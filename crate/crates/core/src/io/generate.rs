// SPDX-License-Identifier: Apache-2.0

use crate::error::{Error, Result};
use crate::grid::{Axis, ControlGrid, TileGeometry};
use crate::real::Real;

/// SplitMix64: increment `0x9E3779B97F4A7C15`, then xor-shift-multiply by
/// `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` with shifts 30, 27, 31.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridKind {
    Constant([f64; 3]),
    /// The given component equals the stored index along that axis; the
    /// others are zero.
    Ramp(Axis),
    /// `φ(i, j, k) = (i, j, k)`.
    RampXyz,
    /// Components drawn independently from `[lo, hi)`.
    RandomUniform { seed: u64, lo: f64, hi: f64 },
    /// Noise uniform in `[-amplitude, amplitude)`, then one `(1/4, 1/2, 1/4)`
    /// smoothing pass per axis with clamped borders.
    RandomSmooth { seed: u64, amplitude: f64 },
}

/// Fills a grid of `grid_dims` control points. Values are generated in
/// double precision and rounded once to `T`; draws are x-fastest, then
/// component order.
pub fn generate_grid<T: Real>(
    kind: &GridKind,
    grid_dims: [usize; 3],
    spacing: [usize; 3],
) -> Result<ControlGrid<T>> {
    for axis in Axis::ALL {
        if grid_dims[axis.index()] < 4 {
            return Err(Error::GridTooSmall {
                axis,
                required: 4,
                actual: grid_dims[axis.index()],
            });
        }
    }
    match *kind {
        GridKind::Constant(c) => ControlGrid::from_fn(grid_dims, spacing, |_| c),
        GridKind::Ramp(axis) => ControlGrid::from_fn(grid_dims, spacing, |p| {
            let mut v = [0.0; 3];
            v[axis.index()] = p[axis.index()] as f64;
            v
        }),
        GridKind::RampXyz => {
            ControlGrid::from_fn(grid_dims, spacing, |p| p.map(|i| i as f64))
        }
        GridKind::RandomUniform { seed, lo, hi } => {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::InvalidArgument(format!("bad range [{lo}, {hi})")));
            }
            let mut rng = SplitMix64::new(seed);
            ControlGrid::from_fn(grid_dims, spacing, |_| {
                [rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)]
            })
        }
        GridKind::RandomSmooth { seed, amplitude } => {
            if !(amplitude.is_finite() && amplitude >= 0.0) {
                return Err(Error::InvalidArgument(format!("bad amplitude {amplitude}")));
            }
            let mut rng = SplitMix64::new(seed);
            let len: usize = grid_dims.iter().product();
            let mut values: Vec<[f64; 3]> = (0..len)
                .map(|_| {
                    [0, 1, 2].map(|_| rng.uniform(-amplitude, amplitude))
                })
                .collect();
            for axis in 0..3 {
                values = smooth_along(&values, grid_dims, axis);
            }
            let mut it = values.into_iter();
            ControlGrid::from_fn(grid_dims, spacing, |_| it.next().expect("sized"))
        }
    }
}

fn smooth_along(values: &[[f64; 3]], dims: [usize; 3], axis: usize) -> Vec<[f64; 3]> {
    let stride = match axis {
        0 => 1,
        1 => dims[0],
        _ => dims[0] * dims[1],
    };
    let mut out = vec![[0.0; 3]; values.len()];
    for (i, slot) in out.iter_mut().enumerate() {
        let coord = (i / stride) % dims[axis];
        let prev = if coord == 0 { i } else { i - stride };
        let next = if coord + 1 == dims[axis] { i } else { i + stride };
        for c in 0..3 {
            slot[c] = 0.25 * values[prev][c] + 0.5 * values[i][c] + 0.25 * values[next][c];
        }
    }
    out
}

/// Generates a grid sized exactly to drive `geom`.
pub fn generate_for_volume<T: Real>(kind: &GridKind, geom: &TileGeometry) -> Result<ControlGrid<T>> {
    generate_grid(kind, geom.required_grid_dims(), geom.spacing())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // Published first outputs for seed 0.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn constant_zero() {
        let g = generate_grid::<f32>(&GridKind::Constant([0.0; 3]), [4, 4, 4], [1, 1, 1]).unwrap();
        assert!(g.data().iter().all(|v| *v == [0.0; 3]));
    }

    #[test]
    fn seeded_generators_are_deterministic() {
        let kinds = [
            GridKind::RandomUniform { seed: 42, lo: -1.0, hi: 1.0 },
            GridKind::RandomSmooth { seed: 42, amplitude: 2.0 },
        ];
        for kind in &kinds {
            let a = generate_grid::<f32>(kind, [6, 5, 4], [3, 3, 3]).unwrap();
            let b = generate_grid::<f32>(kind, [6, 5, 4], [3, 3, 3]).unwrap();
            assert_eq!(a, b);
        }
        let c = generate_grid::<f32>(
            &GridKind::RandomUniform { seed: 43, lo: -1.0, hi: 1.0 },
            [6, 5, 4],
            [3, 3, 3],
        )
        .unwrap();
        assert_ne!(c, generate_grid::<f32>(&kinds[0], [6, 5, 4], [3, 3, 3]).unwrap());
    }

    #[test]
    fn uniform_range_and_smooth_bound() {
        let g = generate_grid::<f64>(
            &GridKind::RandomUniform { seed: 1, lo: -1.0, hi: 1.0 },
            [8, 8, 8],
            [1, 1, 1],
        )
        .unwrap();
        assert!(g.data().iter().flatten().all(|c| (-1.0..1.0).contains(c)));
        let s = generate_grid::<f64>(&GridKind::RandomSmooth { seed: 1, amplitude: 0.5 }, [8, 8, 8], [1, 1, 1])
            .unwrap();
        assert!(s.max_magnitude() <= 0.5);
        // smoothing shrinks the spread of independent noise
        let var = |g: &ControlGrid<f64>| g.data().iter().map(|v| v[0] * v[0]).sum::<f64>();
        let raw = generate_grid::<f64>(
            &GridKind::RandomUniform { seed: 1, lo: -0.5, hi: 0.5 },
            [8, 8, 8],
            [1, 1, 1],
        )
        .unwrap();
        assert!(var(&s) < var(&raw));
    }

    #[test]
    fn ramps() {
        let g = generate_grid::<f32>(&GridKind::Ramp(Axis::Y), [4, 5, 4], [1, 1, 1]).unwrap();
        assert_eq!(g.get([2, 3, 1]), [0.0, 3.0, 0.0]);
        let g = generate_grid::<f32>(&GridKind::RampXyz, [4, 5, 4], [1, 1, 1]).unwrap();
        assert_eq!(g.get([2, 3, 1]), [2.0, 3.0, 1.0]);
    }

    #[test]
    fn too_small() {
        assert!(matches!(
            generate_grid::<f32>(&GridKind::Constant([1.0; 3]), [4, 3, 4], [1, 1, 1]),
            Err(Error::GridTooSmall { axis: Axis::Y, .. })
        ));
    }

    #[test]
    fn sized_for_volume() {
        let geom = TileGeometry::new([64, 64, 64], [5, 5, 5]).unwrap();
        let g = generate_for_volume::<f32>(&GridKind::RandomUniform { seed: 42, lo: -1.0, hi: 1.0 }, &geom).unwrap();
        assert_eq!(g.dims(), [16, 16, 16]);
        g.check_covers(&geom).unwrap();
    }
}
