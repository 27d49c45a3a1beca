// SPDX-License-Identifier: Apache-2.0

use std::ops::Range;

use crate::error::{Error, Result};
use crate::grid::types::checked_volume;
use crate::grid::Axis;

/// Partition of a voxel volume into `δx × δy × δz` tiles.
///
/// Tiles at the upper borders are partial when a spacing does not divide the
/// volume extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileGeometry {
    volume_dims: [usize; 3],
    spacing: [usize; 3],
    tile_counts: [usize; 3],
    required_grid_dims: [usize; 3],
}

/// Where a voxel reads from the control grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridCoords {
    /// First of the four stored control points per axis.
    pub base: [usize; 3],
    /// Position inside the tile, `0..δ` per axis.
    pub offset: [usize; 3],
}

impl TileGeometry {
    pub fn new(volume_dims: [usize; 3], spacing: [usize; 3]) -> Result<Self> {
        checked_volume(volume_dims)?;
        for axis in Axis::ALL {
            if spacing[axis.index()] == 0 {
                return Err(Error::ZeroSpacing { axis });
            }
        }
        let tile_counts = [0, 1, 2].map(|a| volume_dims[a].div_ceil(spacing[a]));
        let required_grid_dims = [0, 1, 2].map(|a| (volume_dims[a] - 1) / spacing[a] + 4);
        Ok(Self {
            volume_dims,
            spacing,
            tile_counts,
            required_grid_dims,
        })
    }

    pub fn volume_dims(&self) -> [usize; 3] {
        self.volume_dims
    }

    pub fn spacing(&self) -> [usize; 3] {
        self.spacing
    }

    pub fn tile_counts(&self) -> [usize; 3] {
        self.tile_counts
    }

    pub fn required_grid_dims(&self) -> [usize; 3] {
        self.required_grid_dims
    }

    pub fn voxel_count(&self) -> usize {
        self.volume_dims.iter().product()
    }

    pub fn voxels_per_tile(&self) -> usize {
        self.spacing.iter().product()
    }

    /// Voxel range covered by tile `tile` along `axis`, clipped at the border.
    #[inline]
    pub fn tile_span(&self, axis: usize, tile: usize) -> Range<usize> {
        let start = tile * self.spacing[axis];
        start..(start + self.spacing[axis]).min(self.volume_dims[axis])
    }

    pub fn voxel_to_grid(&self, voxel: [usize; 3]) -> Result<GridCoords> {
        if (0..3).any(|a| voxel[a] >= self.volume_dims[a]) {
            return Err(Error::VoxelOutOfRange {
                voxel,
                volume: self.volume_dims,
            });
        }
        Ok(GridCoords {
            base: [0, 1, 2].map(|a| voxel[a] / self.spacing[a]),
            offset: [0, 1, 2].map(|a| voxel[a] % self.spacing[a]),
        })
    }
}

pub fn voxel_to_grid(voxel: [usize; 3], geometry: &TileGeometry) -> Result<GridCoords> {
    geometry.voxel_to_grid(voxel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_sizes() {
        let g = TileGeometry::new([64, 64, 64], [5, 5, 5]).unwrap();
        assert_eq!(g.tile_counts(), [13, 13, 13]);
        assert_eq!(g.required_grid_dims(), [16, 16, 16]);

        let g = TileGeometry::new([10, 11, 1], [5, 5, 1]).unwrap();
        assert_eq!(g.tile_counts(), [2, 3, 1]);
        assert_eq!(g.required_grid_dims(), [5, 6, 4]);
        assert_eq!(g.tile_span(1, 2), 10..11);
    }

    #[test]
    fn origin_and_interior() {
        let g = TileGeometry::new([20, 20, 20], [5, 5, 5]).unwrap();
        let c = voxel_to_grid([0, 0, 0], &g).unwrap();
        assert_eq!(c.base, [0, 0, 0]);
        assert_eq!(c.offset, [0, 0, 0]);
        let c = voxel_to_grid([7, 0, 0], &g).unwrap();
        assert_eq!(c.base, [1, 0, 0]);
        assert_eq!(c.offset, [2, 0, 0]);
    }

    #[test]
    fn last_voxel_stays_inside_grid() {
        let g = TileGeometry::new([23, 17, 9], [5, 4, 3]).unwrap();
        let c = g.voxel_to_grid([22, 16, 8]).unwrap();
        for a in 0..3 {
            assert!(c.base[a] + 3 < g.required_grid_dims()[a]);
        }
    }

    #[test]
    fn rejects_out_of_range_and_invalid() {
        let g = TileGeometry::new([4, 4, 4], [2, 2, 2]).unwrap();
        assert!(matches!(
            g.voxel_to_grid([4, 0, 0]),
            Err(Error::VoxelOutOfRange { .. })
        ));
        assert!(matches!(
            TileGeometry::new([4, 0, 4], [1, 1, 1]),
            Err(Error::ZeroDimension { axis: Axis::Y })
        ));
        assert!(matches!(
            TileGeometry::new([4, 4, 4], [1, 1, 0]),
            Err(Error::ZeroSpacing { axis: Axis::Z })
        ));
    }
}
