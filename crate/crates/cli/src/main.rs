// SPDX-License-Identifier: Apache-2.0

//! `tilespline` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or file-format error,
//! 3 engine or domain error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tilespline::harness::{run_accuracy, run_bench, BenchPlan, ReportMetadata};
use tilespline::io::{generate_for_volume, read_grid, write_field, write_grid, AnyGrid, GridKind};
use tilespline::model::{CostModelInput, CostModelReport};
use tilespline::{
    interpolate, interpolate_oracle, Axis, Error, ErrorKind, ExecutionConfig, StrategyId,
    TileGeometry, WeightTables,
};

#[derive(Parser)]
#[command(name = "tilespline", version, about = "Cubic B-spline deformation field evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a control grid sized for a volume.
    Generate(GenerateArgs),
    /// Evaluate the deformation field of a grid file.
    Interp(InterpArgs),
    /// Compare strategies against the double-precision oracle.
    Accuracy(AccuracyArgs),
    /// Time strategies over a tile-size sweep.
    Bench(BenchArgs),
    /// Print the analytic transfer and operation counts.
    Model(ModelArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Constant,
    RampX,
    RampY,
    RampZ,
    /// φ(i, j, k) = (i, j, k)
    Ramp,
    /// Uniform noise in [lo, hi)
    Random,
    /// Smoothed noise in [-amplitude, amplitude)
    Smooth,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionArg {
    Single,
    Double,
}

#[derive(Clone, Copy, ValueEnum)]
enum AccuracyKind {
    Random,
    Smooth,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelFormat {
    Table,
    Csv,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Volume dimensions X,Y,Z in voxels.
    #[arg(long, value_parser = positive_triple)]
    dims: [usize; 3],
    /// Control-point spacing in voxels.
    #[arg(long, value_parser = positive_triple)]
    spacing: [usize; 3],
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Constant value for `--kind constant`.
    #[arg(long, value_parser = float_triple, default_value = "0,0,0")]
    value: [f64; 3],
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    lo: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    hi: f64,
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    #[arg(long, value_enum, default_value = "single")]
    precision: PrecisionArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ExecArgs {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    threads: Option<usize>,
    /// Tiles per work block.
    #[arg(long, value_parser = positive_triple, default_value = "4,4,4")]
    block: [usize; 3],
}

#[derive(Args)]
struct InterpArgs {
    #[arg(long)]
    grid: PathBuf,
    #[arg(long, value_parser = positive_triple)]
    dims: [usize; 3],
    #[arg(long, value_parser = strategy)]
    strategy: StrategyId,
    #[command(flatten)]
    exec: ExecArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AccuracyArgs {
    #[arg(long, value_parser = positive_triple)]
    dims: [usize; 3],
    #[arg(long, value_parser = positive_triple)]
    spacing: [usize; 3],
    /// One grid per seed.
    #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
    seeds: Vec<u64>,
    #[arg(long, value_parser = strategy, value_delimiter = ',')]
    strategies: Vec<StrategyId>,
    #[arg(long, value_enum, default_value = "smooth")]
    kind: AccuracyKind,
    #[command(flatten)]
    exec: ExecArgs,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_parser = positive_triple, default_value = "128,128,128")]
    dims: [usize; 3],
    /// Isotropic tile edges to sweep.
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6,7")]
    tilesizes: Vec<usize>,
    #[arg(long, value_parser = strategy, value_delimiter = ',')]
    strategies: Vec<StrategyId>,
    #[arg(long, default_value_t = 9)]
    reps: usize,
    #[arg(long, default_value_t = 2)]
    warmups: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    exec: ExecArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    voxels: u64,
    /// Voxels per tile.
    #[arg(long)]
    tile: u64,
    #[arg(long, value_parser = positive_triple_u64, default_value = "4,4,4")]
    block: [u64; 3],
    /// Words per transfer.
    #[arg(long, default_value_t = 1.0)]
    words: f64,
    #[arg(long, value_enum, default_value = "table")]
    format: ModelFormat,
}

fn triple<T: std::str::FromStr>(s: &str) -> Result<[T; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got {s:?}"));
    }
    let mut out = Vec::with_capacity(3);
    for p in parts {
        out.push(p.parse::<T>().map_err(|_| format!("invalid value {p:?}"))?);
    }
    out.try_into().map_err(|_| unreachable!())
}

fn positive_triple(s: &str) -> Result<[usize; 3], String> {
    let v = triple::<usize>(s)?;
    if v.contains(&0) {
        return Err(format!("values must be positive, got {s:?}"));
    }
    Ok(v)
}

fn positive_triple_u64(s: &str) -> Result<[u64; 3], String> {
    positive_triple(s).map(|v| v.map(|x| x as u64))
}

fn float_triple(s: &str) -> Result<[f64; 3], String> {
    triple::<f64>(s)
}

fn strategy(s: &str) -> Result<StrategyId, String> {
    s.parse::<StrategyId>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(PathBuf, io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Interp(a) => interp(a),
        Command::Accuracy(a) => accuracy(a),
        Command::Bench(a) => bench(a),
        Command::Model(a) => model(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(path, e)) => {
            eprintln!("error: {}: {e}", path.display());
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e.kind() {
                ErrorKind::Format => ExitCode::from(2),
                ErrorKind::Domain => ExitCode::from(3),
            }
        }
    }
}

fn exec_config(exec: &ExecArgs) -> Result<ExecutionConfig, Failure> {
    let threads = match exec.threads {
        Some(0) => return Err(Failure::Usage("--threads must be positive".into())),
        Some(n) => n,
        None => ExecutionConfig::default().parallelism,
    };
    Ok(ExecutionConfig::new(threads, exec.block)?)
}

fn engines_or_all(list: Vec<StrategyId>) -> Vec<StrategyId> {
    if list.is_empty() {
        StrategyId::ENGINES.to_vec()
    } else {
        list
    }
}

/// Runs `emit` against `path`, or stdout when absent.
fn with_output(
    path: Option<&Path>,
    emit: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CmdResult {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::Io(p.to_owned(), e))?;
            let mut w = BufWriter::new(file);
            emit(&mut w)
                .and_then(|()| w.flush())
                .map_err(|e| Failure::Io(p.to_owned(), e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock).map_err(|e| Failure::Io("<stdout>".into(), e))
        }
    }
}

fn generate(a: GenerateArgs) -> CmdResult {
    let kind = match a.kind {
        KindArg::Constant => GridKind::Constant(a.value),
        KindArg::RampX => GridKind::Ramp(Axis::X),
        KindArg::RampY => GridKind::Ramp(Axis::Y),
        KindArg::RampZ => GridKind::Ramp(Axis::Z),
        KindArg::Ramp => GridKind::RampXyz,
        KindArg::Random => {
            if a.lo.is_nan() || a.hi.is_nan() || a.lo >= a.hi {
                return Err(Failure::Usage(format!("--lo {} must be below --hi {}", a.lo, a.hi)));
            }
            GridKind::RandomUniform { seed: a.seed, lo: a.lo, hi: a.hi }
        }
        KindArg::Smooth => GridKind::RandomSmooth { seed: a.seed, amplitude: a.amplitude },
    };
    let geom = TileGeometry::new(a.dims, a.spacing)?;
    match a.precision {
        PrecisionArg::Single => write_grid(&a.out, &generate_for_volume::<f32>(&kind, &geom)?)?,
        PrecisionArg::Double => write_grid(&a.out, &generate_for_volume::<f64>(&kind, &geom)?)?,
    }
    Ok(())
}

fn interp(a: InterpArgs) -> CmdResult {
    let cfg = exec_config(&a.exec)?;
    let grid = read_grid(&a.grid)?;
    let geom = TileGeometry::new(a.dims, grid.spacing())?;
    if a.strategy == StrategyId::OracleDouble {
        let field = match &grid {
            AnyGrid::Single(g) => interpolate_oracle(g, &geom)?,
            AnyGrid::Double(g) => interpolate_oracle(g, &geom)?,
        };
        write_field(&a.out, &field)?;
    } else {
        let grid = grid.into_precision::<f32>();
        let tables = WeightTables::build(&geom);
        let field = interpolate(a.strategy, &grid, &geom, &tables, &cfg)?;
        write_field(&a.out, &field)?;
    }
    Ok(())
}

fn accuracy(a: AccuracyArgs) -> CmdResult {
    let cfg = exec_config(&a.exec)?;
    let geom = TileGeometry::new(a.dims, a.spacing)?;
    let grids = a
        .seeds
        .iter()
        .map(|&seed| {
            let kind = match a.kind {
                AccuracyKind::Random => GridKind::RandomUniform { seed, lo: -1.0, hi: 1.0 },
                AccuracyKind::Smooth => GridKind::RandomSmooth { seed, amplitude: 1.0 },
            };
            generate_for_volume::<f32>(&kind, &geom)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut meta = ReportMetadata::standard();
    meta.push(
        "grid_kind",
        match a.kind {
            AccuracyKind::Random => "random",
            AccuracyKind::Smooth => "smooth",
        },
    );
    meta.push(
        "seeds",
        a.seeds.iter().map(u64::to_string).collect::<Vec<_>>().join(" "),
    );
    let report = run_accuracy(&engines_or_all(a.strategies), &grids, &geom, &cfg, meta)?;
    with_output(a.out.as_deref(), |mut w| report.write_csv(&mut w))
}

fn bench(a: BenchArgs) -> CmdResult {
    let cfg = exec_config(&a.exec)?;
    if a.reps < 5 {
        return Err(Failure::Usage("--reps must be at least 5".into()));
    }
    if a.warmups < 1 {
        return Err(Failure::Usage("--warmups must be at least 1".into()));
    }
    if a.tilesizes.contains(&0) {
        return Err(Failure::Usage("--tilesizes must be positive".into()));
    }
    let mut plan = BenchPlan::new(engines_or_all(a.strategies), a.dims);
    plan.tile_sizes = a.tilesizes;
    plan.repetitions = a.reps;
    plan.warmups = a.warmups;
    plan.seed = a.seed;
    let report = run_bench(&plan, &cfg, ReportMetadata::standard())?;
    with_output(a.out.as_deref(), |mut w| report.write_csv(&mut w))
}

fn model(a: ModelArgs) -> CmdResult {
    let input = CostModelInput::new(a.voxels, a.tile, a.words, a.block)?;
    let rows = CostModelReport::evaluate(&input)?.rows();
    with_output(None, |w| match a.format {
        ModelFormat::Csv => {
            writeln!(w, "quantity,value")?;
            rows.iter().try_for_each(|(k, v)| writeln!(w, "{k},{v}"))
        }
        ModelFormat::Table => {
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            rows.iter().try_for_each(|(k, v)| writeln!(w, "{k:<width$}  {v}"))
        }
    })
}
