// SPDX-License-Identifier: Apache-2.0

//! Dense deformation field evaluation from uniform cubic B-spline control
//! grids.
//!
//! Every engine computes the same triple sum over the 4×4×4 control points
//! surrounding a tile of voxels; they differ in how work is partitioned, how
//! control points are reused, and whether the sum is evaluated directly or as
//! a tree of trilinear interpolations.
//!
//! ```
//! use tilespline::{ExecutionConfig, StrategyId, TileGeometry, WeightTables};
//! use tilespline::io::{generate_for_volume, GridKind};
//!
//! let geom = TileGeometry::new([20, 20, 20], [5, 5, 5]).unwrap();
//! let grid = generate_for_volume::<f32>(&GridKind::Constant([1.0, 2.0, 3.0]), &geom).unwrap();
//! let tables = WeightTables::build(&geom);
//! let field = tilespline::interpolate(
//!     StrategyId::ThreadPerTileLerp,
//!     &grid,
//!     &geom,
//!     &tables,
//!     &ExecutionConfig::default(),
//! )
//! .unwrap();
//! assert!((field.get([3, 4, 5])[1] - 2.0).abs() < 1e-5);
//! ```

pub mod engines;
mod error;
pub mod grid;
pub mod harness;
pub mod io;
pub mod model;
mod parallel;
mod real;

pub use engines::{
    interpolate, interpolate_oracle, strategy_metadata, ExecutionConfig, StrategyId,
    StrategyMetadata, WorkUnit,
};
pub use error::{Error, ErrorKind, Result};
pub use grid::{
    basis_weights, lerp_form_weights, voxel_to_grid, Axis, ControlGrid, DeformationField,
    GridCoords, LerpWeights, Precision, TileGeometry, WeightTables,
};
pub use real::Real;
