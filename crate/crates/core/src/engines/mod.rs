// SPDX-License-Identifier: Apache-2.0

//! Interpolation strategies.
//!
//! All strategies evaluate, for every voxel, the weighted sum of the 4×4×4
//! control points around its tile. Weighted-sum strategies accumulate the 64
//! terms in a fixed order (x outer, z inner); lerp-form strategies evaluate
//! eight sub-cube trilinear interpolations and combine them with a ninth.
//! Within each family the per-voxel arithmetic is identical, so outputs are
//! bit-identical across strategies of the same family and across any worker
//! count.

mod kernels;
mod oracle;
mod tile;
mod vector;
mod voxel;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{ControlGrid, DeformationField, TileGeometry, WeightTables};
use crate::real::Real;

pub use oracle::interpolate_oracle;
pub use vector::LANES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StrategyId {
    /// Double-precision direct sum; ground truth for accuracy comparisons.
    OracleDouble,
    /// One voxel per work item, weights recomputed per voxel, no reuse.
    ThreadPerVoxel,
    /// One tile per work item; its 64 control points fetched once into a
    /// scratch buffer shared by the tile's voxels.
    ThreadPerVoxelTiled,
    /// Blocks of tiles; each tile's control points held locally for all of
    /// its voxels.
    ThreadPerTile,
    /// [`StrategyId::ThreadPerTile`] with the sum evaluated as nine
    /// trilinear interpolations.
    ThreadPerTileLerp,
    /// Lerp form, lanes over the x-offsets of a tile row.
    VectorPerTile,
    /// Lerp form, lanes over the eight sub-cubes of one voxel.
    VectorPerVoxel,
}

impl StrategyId {
    pub const ALL: [StrategyId; 7] = [
        StrategyId::OracleDouble,
        StrategyId::ThreadPerVoxel,
        StrategyId::ThreadPerVoxelTiled,
        StrategyId::ThreadPerTile,
        StrategyId::ThreadPerTileLerp,
        StrategyId::VectorPerTile,
        StrategyId::VectorPerVoxel,
    ];

    /// Every strategy runnable through [`interpolate`].
    pub const ENGINES: [StrategyId; 6] = [
        StrategyId::ThreadPerVoxel,
        StrategyId::ThreadPerVoxelTiled,
        StrategyId::ThreadPerTile,
        StrategyId::ThreadPerTileLerp,
        StrategyId::VectorPerTile,
        StrategyId::VectorPerVoxel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyId::OracleDouble => "oracle",
            StrategyId::ThreadPerVoxel => "thread-per-voxel",
            StrategyId::ThreadPerVoxelTiled => "thread-per-voxel-tiled",
            StrategyId::ThreadPerTile => "thread-per-tile",
            StrategyId::ThreadPerTileLerp => "thread-per-tile-lerp",
            StrategyId::VectorPerTile => "vector-per-tile",
            StrategyId::VectorPerVoxel => "vector-per-voxel",
        }
    }
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let id = match s.to_ascii_lowercase().as_str() {
            "oracle" | "oracle-double" => StrategyId::OracleDouble,
            "thread-per-voxel" | "tv" => StrategyId::ThreadPerVoxel,
            "thread-per-voxel-tiled" | "tv-tiling" => StrategyId::ThreadPerVoxelTiled,
            "thread-per-tile" | "tt" => StrategyId::ThreadPerTile,
            "thread-per-tile-lerp" | "ttli" => StrategyId::ThreadPerTileLerp,
            "vector-per-tile" | "vt" => StrategyId::VectorPerTile,
            "vector-per-voxel" | "vv" => StrategyId::VectorPerVoxel,
            _ => return Err(Error::UnknownStrategy(s.to_string())),
        };
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WorkUnit {
    Voxel,
    Tile,
    Block,
}

impl fmt::Display for WorkUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WorkUnit::Voxel => "voxel",
            WorkUnit::Tile => "tile",
            WorkUnit::Block => "block",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrategyMetadata {
    pub uses_tiling: bool,
    pub uses_lerp_form: bool,
    pub work_unit: WorkUnit,
    pub lanes: usize,
}

pub fn strategy_metadata(strategy: StrategyId) -> StrategyMetadata {
    let (uses_tiling, uses_lerp_form, work_unit, lanes) = match strategy {
        StrategyId::OracleDouble | StrategyId::ThreadPerVoxel => (false, false, WorkUnit::Voxel, 1),
        StrategyId::ThreadPerVoxelTiled => (true, false, WorkUnit::Tile, 1),
        StrategyId::ThreadPerTile => (true, false, WorkUnit::Block, 1),
        StrategyId::ThreadPerTileLerp => (true, true, WorkUnit::Block, 1),
        StrategyId::VectorPerTile => (true, true, WorkUnit::Tile, LANES),
        StrategyId::VectorPerVoxel => (true, true, WorkUnit::Tile, LANES),
    };
    StrategyMetadata {
        uses_tiling,
        uses_lerp_form,
        work_unit,
        lanes,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExecutionConfig {
    /// Worker threads.
    pub parallelism: usize,
    /// Tiles per work block along x, y, z.
    pub block_of_tiles: [usize; 3],
}

impl ExecutionConfig {
    pub fn new(parallelism: usize, block_of_tiles: [usize; 3]) -> Result<Self> {
        let cfg = Self {
            parallelism,
            block_of_tiles,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_parallelism(parallelism: usize) -> Self {
        Self {
            parallelism,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.parallelism == 0 {
            return Err(Error::InvalidArgument("parallelism must be positive".into()));
        }
        if self.block_of_tiles.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "block of tiles {:?} must be positive",
                self.block_of_tiles
            )));
        }
        Ok(())
    }
}

impl Default for ExecutionConfig {
    fn default() -> Self {
        Self {
            parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
            block_of_tiles: [4, 4, 4],
        }
    }
}

/// Evaluates the deformation field of `grid` over `geom` with `strategy`.
///
/// `T` is the working precision; the single-precision contract is
/// `T = f32`, and `f64` runs the same arithmetic in double.
pub fn interpolate<T: Real>(
    strategy: StrategyId,
    grid: &ControlGrid<T>,
    geom: &TileGeometry,
    tables: &WeightTables,
    cfg: &ExecutionConfig,
) -> Result<DeformationField<T>> {
    cfg.validate()?;
    grid.check_covers(geom)?;
    if tables.spacing() != geom.spacing() {
        return Err(Error::TableMismatch {
            tables: tables.spacing(),
            geometry: geom.spacing(),
        });
    }
    let mut field = DeformationField::zeros(geom.volume_dims());
    let out = field.data_mut();
    match strategy {
        StrategyId::OracleDouble => return Err(Error::UnsupportedStrategy(strategy.name())),
        StrategyId::ThreadPerVoxel => voxel::thread_per_voxel(grid, geom, cfg, out),
        StrategyId::ThreadPerVoxelTiled => {
            voxel::thread_per_voxel_tiled(grid, geom, &tables.typed(), cfg, out)
        }
        StrategyId::ThreadPerTile => {
            tile::thread_per_tile(grid, geom, &tables.typed(), cfg, out, tile::Formulation::WeightedSum)
        }
        StrategyId::ThreadPerTileLerp => {
            tile::thread_per_tile(grid, geom, &tables.typed(), cfg, out, tile::Formulation::LerpTree)
        }
        StrategyId::VectorPerTile => vector::vector_per_tile(grid, geom, &tables.typed(), cfg, out),
        StrategyId::VectorPerVoxel => {
            vector::vector_per_voxel(grid, geom, &tables.typed(), cfg, out)
        }
    }
    Ok(field)
}
