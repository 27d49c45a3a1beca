// SPDX-License-Identifier: Apache-2.0

use std::hint::black_box;
use std::io::{self, Write};
use std::time::Instant;

use crate::engines::{interpolate, ExecutionConfig, StrategyId};
use crate::error::{Error, Result};
use crate::grid::{ControlGrid, TileGeometry, WeightTables};
use crate::harness::{tile_label, ReportMetadata};
use crate::io::{generate_for_volume, GridKind};

/// Speedups are reported relative to this strategy.
pub const BASELINE: StrategyId = StrategyId::ThreadPerVoxel;

/// Timing of one strategy on one input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingSample {
    /// Median over the timed repetitions, nanoseconds per voxel.
    pub time_per_voxel_ns: f64,
    /// Sample standard deviation over the repetitions.
    pub stddev_ns: f64,
}

/// Runs `warmups` untimed and `repetitions` timed evaluations.
pub fn time_strategy(
    strategy: StrategyId,
    grid: &ControlGrid<f32>,
    geom: &TileGeometry,
    tables: &WeightTables,
    cfg: &ExecutionConfig,
    repetitions: usize,
    warmups: usize,
) -> Result<TimingSample> {
    if repetitions < 5 || warmups < 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 repetitions and 1 warmup, got {repetitions} and {warmups}"
        )));
    }
    for _ in 0..warmups {
        black_box(interpolate(strategy, grid, geom, tables, cfg)?);
    }
    let voxels = geom.voxel_count() as f64;
    let mut times = Vec::with_capacity(repetitions);
    for _ in 0..repetitions {
        let start = Instant::now();
        let field = interpolate(strategy, black_box(grid), geom, tables, cfg)?;
        let elapsed = start.elapsed();
        black_box(field);
        times.push(elapsed.as_secs_f64() * 1e9 / voxels);
    }
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (times.len() - 1) as f64;
    Ok(TimingSample {
        time_per_voxel_ns: median(times),
        stddev_ns: var.sqrt(),
    })
}

/// Coefficient of variation of the median time per voxel across `grids`,
/// all of which share `geom`.
///
/// Grids are timed round-robin, one evaluation each per round, so slow
/// drift in machine speed lands on every grid alike.
pub fn content_variation(
    strategy: StrategyId,
    grids: &[ControlGrid<f32>],
    geom: &TileGeometry,
    cfg: &ExecutionConfig,
    repetitions: usize,
    warmups: usize,
) -> Result<f64> {
    if grids.len() < 2 {
        return Err(Error::InvalidArgument("need at least two grids".into()));
    }
    if repetitions < 5 || warmups < 1 {
        return Err(Error::InvalidArgument(format!(
            "need at least 5 repetitions and 1 warmup, got {repetitions} and {warmups}"
        )));
    }
    let tables = WeightTables::build(geom);
    for _ in 0..warmups {
        for g in grids {
            black_box(interpolate(strategy, g, geom, &tables, cfg)?);
        }
    }
    let voxels = geom.voxel_count() as f64;
    let mut samples = vec![Vec::with_capacity(repetitions); grids.len()];
    for _ in 0..repetitions {
        for (g, times) in grids.iter().zip(&mut samples) {
            let start = Instant::now();
            let field = interpolate(strategy, black_box(g), geom, &tables, cfg)?;
            let elapsed = start.elapsed();
            black_box(field);
            times.push(elapsed.as_secs_f64() * 1e9 / voxels);
        }
    }
    let times: Vec<f64> = samples.into_iter().map(median).collect();
    let mean = times.iter().sum::<f64>() / times.len() as f64;
    let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / (times.len() - 1) as f64;
    Ok(var.sqrt() / mean)
}

fn median(mut times: Vec<f64>) -> f64 {
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    if times.len() % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    }
}

/// A tile-size sweep: isotropic tiles `δ³` for each entry of `tile_sizes`.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub strategies: Vec<StrategyId>,
    pub volume_dims: [usize; 3],
    pub tile_sizes: Vec<usize>,
    pub repetitions: usize,
    pub warmups: usize,
    /// Seed of the uniform `[-1, 1)` grid timed at every tile size.
    pub seed: u64,
}

impl BenchPlan {
    pub const DEFAULT_TILE_SIZES: [usize; 5] = [3, 4, 5, 6, 7];

    pub fn new(strategies: Vec<StrategyId>, volume_dims: [usize; 3]) -> Self {
        Self {
            strategies,
            volume_dims,
            tile_sizes: Self::DEFAULT_TILE_SIZES.to_vec(),
            repetitions: 9,
            warmups: 2,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub strategy: StrategyId,
    pub tile_size: [usize; 3],
    pub time_per_voxel_ns: f64,
    pub stddev_ns: f64,
    pub speedup_vs_baseline: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub metadata: ReportMetadata,
    pub rows: Vec<TimingRow>,
}

impl TimingReport {
    pub const HEADER: &'static str =
        "strategy,tile_size,time_per_voxel_ns,stddev_ns,speedup_vs_baseline";

    pub fn row(&self, strategy: StrategyId, delta: usize) -> Option<&TimingRow> {
        self.rows
            .iter()
            .find(|r| r.strategy == strategy && r.tile_size == [delta; 3])
    }

    pub fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        self.metadata.write(out)?;
        writeln!(out, "{}", Self::HEADER)?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:.4},{:.4},{:.4}",
                r.strategy,
                tile_label(r.tile_size),
                r.time_per_voxel_ns,
                r.stddev_ns,
                r.speedup_vs_baseline
            )?;
        }
        Ok(())
    }
}

/// Times every strategy of `plan` at every tile size. The baseline is timed
/// even when not requested, and listed first for each tile size.
pub fn run_bench(
    plan: &BenchPlan,
    cfg: &ExecutionConfig,
    mut metadata: ReportMetadata,
) -> Result<TimingReport> {
    if plan.tile_sizes.is_empty() || plan.tile_sizes.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "tile sizes {:?} must be non-empty and positive",
            plan.tile_sizes
        )));
    }
    let mut order = vec![BASELINE];
    order.extend(
        plan.strategies
            .iter()
            .copied()
            .filter(|s| *s != BASELINE && *s != StrategyId::OracleDouble),
    );

    let mut rows = Vec::new();
    for &delta in &plan.tile_sizes {
        let geom = TileGeometry::new(plan.volume_dims, [delta; 3])?;
        let tables = WeightTables::build(&geom);
        let grid = generate_for_volume::<f32>(
            &GridKind::RandomUniform {
                seed: plan.seed,
                lo: -1.0,
                hi: 1.0,
            },
            &geom,
        )?;
        let mut baseline = None;
        for &strategy in &order {
            let sample = time_strategy(
                strategy,
                &grid,
                &geom,
                &tables,
                cfg,
                plan.repetitions,
                plan.warmups,
            )?;
            let base = *baseline.get_or_insert(sample.time_per_voxel_ns);
            rows.push(TimingRow {
                strategy,
                tile_size: [delta; 3],
                time_per_voxel_ns: sample.time_per_voxel_ns,
                stddev_ns: sample.stddev_ns,
                speedup_vs_baseline: base / sample.time_per_voxel_ns,
            });
        }
    }

    metadata.push("parallelism", cfg.parallelism);
    metadata.push(
        "block_of_tiles",
        tile_label(cfg.block_of_tiles),
    );
    metadata.push("volume_dims", tile_label(plan.volume_dims));
    metadata.push("seed", plan.seed);
    metadata.push("repetitions", plan.repetitions);
    metadata.push("warmups", plan.warmups);
    metadata.push("baseline", BASELINE);
    Ok(TimingReport { metadata, rows })
}
