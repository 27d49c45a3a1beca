// SPDX-License-Identifier: Apache-2.0

//! Closed-form off-chip transfer counts and per-voxel operation counts.
//!
//! Transfer counts follow the external memory model: control points move in
//! transactions of `L` words, and the counts are kept real-valued (no
//! rounding to whole transactions) so ratios between schemes are exact.

use std::fmt;

use crate::error::{Error, Result};

/// Control points influencing one voxel in 3D.
pub const NEIGHBOURHOOD_POINTS: u64 = 64;

/// Loads per voxel when eight hardware trilinear fetches replace the 64-term
/// sum.
pub const TEXTURE_FETCHES: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModelInput {
    /// Total voxels.
    pub voxels: u64,
    /// Control points per neighbourhood; 64 in 3D.
    pub neighbourhood: u64,
    /// Voxels per tile, `δx·δy·δz`.
    pub tile_voxels: u64,
    /// Words per transaction.
    pub words_per_transfer: f64,
    /// Tiles per block, `(l, m, n)`.
    pub block: [u64; 3],
}

impl CostModelInput {
    pub fn new(voxels: u64, tile_voxels: u64, words_per_transfer: f64, block: [u64; 3]) -> Result<Self> {
        let input = Self {
            voxels,
            neighbourhood: NEIGHBOURHOOD_POINTS,
            tile_voxels,
            words_per_transfer,
            block,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn validate(&self) -> Result<()> {
        if self.tile_voxels == 0 {
            return Err(Error::InvalidArgument("tile voxel count must be positive".into()));
        }
        if !(self.words_per_transfer.is_finite() && self.words_per_transfer > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "words per transfer must be positive, got {}",
                self.words_per_transfer
            )));
        }
        if self.block.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "block {:?} must be positive",
                self.block
            )));
        }
        if self.neighbourhood != NEIGHBOURHOOD_POINTS {
            return Err(Error::InvalidArgument(format!(
                "neighbourhood must be {NEIGHBOURHOOD_POINTS} in 3D"
            )));
        }
        Ok(())
    }

    fn m(&self) -> f64 {
        self.voxels as f64
    }
}

/// Every voxel fetches its whole neighbourhood: `N·M/L`.
pub fn mem_no_tiles(input: &CostModelInput) -> f64 {
    input.neighbourhood as f64 * input.m() / input.words_per_transfer
}

/// Hardware trilinear fetches, eight per voxel: `8·M/L`.
pub fn mem_texture_hw(input: &CostModelInput) -> f64 {
    TEXTURE_FETCHES as f64 * input.m() / input.words_per_transfer
}

/// One neighbourhood fetch per tile: `N·M/(T·L)`.
pub fn mem_block_per_tile(input: &CostModelInput) -> f64 {
    input.neighbourhood as f64 * input.m() / (input.tile_voxels as f64 * input.words_per_transfer)
}

/// One fetch of the overlapping points per block of `l·m·n` tiles:
/// `(l+3)(m+3)(n+3)·M/(l·m·n·T·L)`.
pub fn mem_blocks_of_tiles(input: &CostModelInput) -> f64 {
    let [l, m, n] = input.block.map(|b| b as f64);
    let points = (4.0 + l - 1.0) * (4.0 + m - 1.0) * (4.0 + n - 1.0);
    points * input.m() / (l * m * n * input.tile_voxels as f64 * input.words_per_transfer)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// 64 terms, each a vector times three scalar weights, then accumulated.
    WeightedSum,
    /// 64 terms sharing one precomputed product weight.
    WeightedSumSharedWeight,
    /// Nine trilinear interpolations of seven two-operation lerps.
    LerpTree,
}

impl Formulation {
    pub const ALL: [Formulation; 3] = [
        Formulation::WeightedSum,
        Formulation::WeightedSumSharedWeight,
        Formulation::LerpTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Formulation::WeightedSum => "weighted-sum",
            Formulation::WeightedSumSharedWeight => "weighted-sum-shared-weight",
            Formulation::LerpTree => "lerp-tree",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Vector arithmetic operations per output voxel.
pub fn ops_per_voxel(formulation: Formulation) -> u64 {
    let summands = NEIGHBOURHOOD_POINTS;
    match formulation {
        // three multiplications and one accumulation per summand; the first
        // summand needs no accumulation
        Formulation::WeightedSum => summands * (3 + 1) - 1,
        Formulation::WeightedSumSharedWeight => summands * (1 + 1) - 1,
        // a lerp is one subtraction plus one fused multiply-add
        Formulation::LerpTree => 9 * 7 * 2,
    }
}

/// Named ratio between two transfer counts, `numerator / denominator`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferRatio {
    pub numerator: &'static str,
    pub denominator: &'static str,
    pub value: f64,
}

pub fn transfer_ratios(input: &CostModelInput) -> Vec<TransferRatio> {
    let tt = mem_blocks_of_tiles(input);
    vec![
        TransferRatio {
            numerator: "block-per-tile",
            denominator: "blocks-of-tiles",
            value: mem_block_per_tile(input) / tt,
        },
        TransferRatio {
            numerator: "texture-hw",
            denominator: "blocks-of-tiles",
            value: mem_texture_hw(input) / tt,
        },
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostModelReport {
    pub input: CostModelInput,
    pub transfers_no_tiles: f64,
    pub transfers_texture_hw: f64,
    pub transfers_block_per_tile: f64,
    pub transfers_blocks_of_tiles: f64,
    pub ratios: Vec<TransferRatio>,
    pub ops_per_voxel_sum: u64,
    pub ops_per_voxel_shared_weight: u64,
    pub ops_per_voxel_lerp: u64,
}

impl CostModelReport {
    pub fn evaluate(input: &CostModelInput) -> Result<Self> {
        input.validate()?;
        Ok(Self {
            input: *input,
            transfers_no_tiles: mem_no_tiles(input),
            transfers_texture_hw: mem_texture_hw(input),
            transfers_block_per_tile: mem_block_per_tile(input),
            transfers_blocks_of_tiles: mem_blocks_of_tiles(input),
            ratios: transfer_ratios(input),
            ops_per_voxel_sum: ops_per_voxel(Formulation::WeightedSum),
            ops_per_voxel_shared_weight: ops_per_voxel(Formulation::WeightedSumSharedWeight),
            ops_per_voxel_lerp: ops_per_voxel(Formulation::LerpTree),
        })
    }

    /// `(key, value)` rows in a stable order, shared by the table and CSV
    /// renderings.
    pub fn rows(&self) -> Vec<(String, String)> {
        let mut rows = vec![
            ("voxels".to_string(), self.input.voxels.to_string()),
            ("tile_voxels".to_string(), self.input.tile_voxels.to_string()),
            ("words_per_transfer".to_string(), self.input.words_per_transfer.to_string()),
            (
                "block".to_string(),
                format!("{}x{}x{}", self.input.block[0], self.input.block[1], self.input.block[2]),
            ),
            ("transfers_no_tiles".to_string(), self.transfers_no_tiles.to_string()),
            ("transfers_texture_hw".to_string(), self.transfers_texture_hw.to_string()),
            ("transfers_block_per_tile".to_string(), self.transfers_block_per_tile.to_string()),
            ("transfers_blocks_of_tiles".to_string(), self.transfers_blocks_of_tiles.to_string()),
        ];
        for r in &self.ratios {
            rows.push((
                format!("ratio_{}_over_{}", r.numerator, r.denominator).replace('-', "_"),
                format!("{:.2}", r.value),
            ));
        }
        rows.push(("ops_per_voxel_weighted_sum".to_string(), self.ops_per_voxel_sum.to_string()));
        rows.push((
            "ops_per_voxel_shared_weight".to_string(),
            self.ops_per_voxel_shared_weight.to_string(),
        ));
        rows.push(("ops_per_voxel_lerp_tree".to_string(), self.ops_per_voxel_lerp.to_string()));
        rows
    }
}
