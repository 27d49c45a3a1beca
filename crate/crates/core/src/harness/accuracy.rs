// SPDX-License-Identifier: Apache-2.0

use std::io::{self, Write};

use crate::engines::{interpolate, interpolate_oracle, ExecutionConfig, StrategyId};
use crate::error::{Error, Result};
use crate::grid::{ControlGrid, TileGeometry, WeightTables};
use crate::harness::{tile_label, ReportMetadata};

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyRow {
    pub strategy: StrategyId,
    pub tile_size: [usize; 3],
    pub mean_abs_error: f64,
    pub max_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<AccuracyRow>,
}

impl AccuracyReport {
    pub const HEADER: &'static str = "strategy,tile_size,mean_abs_error,max_abs_error";

    pub fn row(&self, strategy: StrategyId) -> Option<&AccuracyRow> {
        self.rows.iter().find(|r| r.strategy == strategy)
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        self.metadata.write(out)?;
        writeln!(out, "{}", Self::HEADER)?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:e},{:e}",
                r.strategy,
                tile_label(r.tile_size),
                r.mean_abs_error,
                r.max_abs_error
            )?;
        }
        Ok(())
    }
}

/// Per-strategy absolute error against the double-precision oracle, pooled
/// over every component of every voxel of every grid.
///
/// The oracle row is always present and reports zero error. `metadata`
/// receives the largest control-point magnitude among `grids`.
pub fn run_accuracy(
    strategies: &[StrategyId],
    grids: &[ControlGrid<f32>],
    geom: &TileGeometry,
    cfg: &ExecutionConfig,
    mut metadata: ReportMetadata,
) -> Result<AccuracyReport> {
    if grids.is_empty() {
        return Err(Error::InvalidArgument("accuracy run needs at least one grid".into()));
    }
    let tables = WeightTables::build(geom);
    let mut order = vec![StrategyId::OracleDouble];
    order.extend(strategies.iter().copied().filter(|s| *s != StrategyId::OracleDouble));

    let mut totals = vec![(0.0f64, 0.0f64); order.len()];
    let mut count = 0usize;
    for grid in grids {
        let reference = interpolate_oracle(grid, geom)?;
        count += 3 * reference.voxel_count();
        for (slot, &strategy) in totals.iter_mut().zip(&order).skip(1) {
            let field = interpolate(strategy, grid, geom, &tables, cfg)?;
            for (a, b) in field.data().iter().zip(reference.data()) {
                for c in 0..3 {
                    let e = (a[c] as f64 - b[c]).abs();
                    slot.0 += e;
                    slot.1 = slot.1.max(e);
                }
            }
        }
    }

    let magnitude = grids
        .iter()
        .map(ControlGrid::max_magnitude)
        .fold(0.0, f64::max);
    metadata.push("grids", grids.len());
    metadata.push("max_control_point_magnitude", magnitude);
    metadata.push("reference", StrategyId::OracleDouble);

    let rows = order
        .iter()
        .zip(totals)
        .map(|(&strategy, (sum, max))| AccuracyRow {
            strategy,
            tile_size: geom.spacing(),
            mean_abs_error: sum / count as f64,
            max_abs_error: max,
        })
        .collect();
    Ok(AccuracyReport { metadata, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{generate_for_volume, GridKind};

    #[test]
    fn oracle_row_is_zero_and_first() {
        let geom = TileGeometry::new([10, 10, 10], [3, 3, 3]).unwrap();
        let grid = generate_for_volume(&GridKind::RandomUniform { seed: 3, lo: -1.0, hi: 1.0 }, &geom).unwrap();
        let report = run_accuracy(
            &[StrategyId::ThreadPerTile, StrategyId::OracleDouble],
            &[grid],
            &geom,
            &ExecutionConfig::with_parallelism(1),
            ReportMetadata::default(),
        )
        .unwrap();
        assert_eq!(report.rows.len(), 2);
        assert_eq!(report.rows[0].strategy, StrategyId::OracleDouble);
        assert_eq!(report.rows[0].mean_abs_error, 0.0);
        assert_eq!(report.rows[0].max_abs_error, 0.0);
        let tt = report.row(StrategyId::ThreadPerTile).unwrap();
        assert!(tt.mean_abs_error <= tt.max_abs_error);
        assert!(tt.max_abs_error > 0.0);
    }

    #[test]
    fn requires_grids() {
        let geom = TileGeometry::new([4, 4, 4], [2, 2, 2]).unwrap();
        assert!(run_accuracy(
            &StrategyId::ENGINES,
            &[],
            &geom,
            &ExecutionConfig::default(),
            ReportMetadata::default()
        )
        .is_err());
    }
}
