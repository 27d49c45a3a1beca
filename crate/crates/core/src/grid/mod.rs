// SPDX-License-Identifier: Apache-2.0

//! Domain types shared by every engine: control grids, output fields, tile
//! geometry and the per-offset weight look-up tables.

pub(crate) mod basis;
mod geometry;
pub(crate) mod tables;
mod types;

pub use basis::{basis_weights, lerp_form_weights, LerpWeights};
pub use geometry::{voxel_to_grid, GridCoords, TileGeometry};
pub use tables::{AxisWeight, WeightTables};
pub(crate) use tables::{TypedAxisWeight, TypedTables};
pub use types::{Axis, ControlGrid, DeformationField, Precision};
