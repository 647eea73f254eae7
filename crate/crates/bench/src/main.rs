//! `rmb-bench`: prepare a map cache, sweep planners over it, pick a block
//! size and compare planners.
//!
//! Exit codes: 0 success, 1 usage error, 2 dataset or I/O error, 3 a
//! reference check did not hold.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rmb_core::bench::{
    cmd_prepare, cmd_run, compare_summary, from_csv, ranged_csv, read_records, reference_checks,
    select_from_summary, summarize, to_csv, OutputFormat, RunConfig, SummaryRow,
};
use rmb_core::evaluation::{ReferenceTables, DEFAULT_RANGE, PERFORMANCE_MAX};
use rmb_core::ingest::{read_pgm, threshold_bitmap, RawBitmap};
use rmb_core::planners::run_algorithm;
use rmb_core::render::render_svg;
use rmb_core::scenario::{corner_scenarios, ScenarioTable, DEFAULT_INSET};
use rmb_core::{synth, Algorithm, BenchError, Coord, DimensionClass, GridMap, IngestError, MapType, Scenario};

#[derive(Parser)]
#[command(name = "rmb-bench", version, about = "Motion-block A* benchmark runner")]
struct Cli {
    /// More log output (repeat for debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stitch, border and threshold dataset bitmaps into the map cache
    Prepare(PrepareArgs),
    /// Run planners over the prepared cache
    Run(RunArgs),
    /// Rescale a sweep and choose the block size
    Select(SelectArgs),
    /// Compare planners against conventional A*, or check the reference tables
    Compare(CompareArgs),
    /// Plan on one map and write an SVG
    Render(RenderArgs),
    /// Write a procedural stand-in dataset
    Synth(SynthArgs),
}

#[derive(Args)]
struct Filters {
    /// Restrict to these map types (repeatable)
    #[arg(long = "map-type")]
    map_types: Vec<MapType>,
    /// Restrict to these dimension classes, e.g. 261x261 (repeatable)
    #[arg(long = "dimension")]
    dimensions: Vec<DimensionClass>,
    /// Worker threads
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args)]
struct PrepareArgs {
    #[arg(long, default_value = "dataset")]
    dataset_dir: PathBuf,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Source bitmaps used per type
    #[arg(long)]
    cap: Option<usize>,
    #[command(flatten)]
    filters: Filters,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Planners to run (repeatable)
    #[arg(long = "algo", default_values = ["rmb-astar", "astar"])]
    algorithms: Vec<Algorithm>,
    /// Block sizes for rmb-astar (repeatable)
    #[arg(long = "n", default_values_t = [1u32, 2, 3, 4, 5, 6])]
    n_values: Vec<u32>,
    #[arg(long, default_value_t = rmb_core::kernel::DEFAULT_ALPHA)]
    alpha: f64,
    /// Prepared maps per (type, dimension) group
    #[arg(long)]
    cap: Option<usize>,
    /// Seed for choosing maps when --cap is set
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON list of start/goal overrides
    #[arg(long)]
    scenarios: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    filters: Filters,
}

#[derive(Args)]
struct SelectArgs {
    /// Summary, records (.csv/.json) from `run`
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    input: Option<PathBuf>,
    /// Use the shipped reference sweep instead of a run
    #[arg(long)]
    fixture: bool,
    /// Also write ranked.csv here
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Summary or records from `run`
    #[arg(long, conflicts_with = "fixture", required_unless_present = "fixture")]
    input: Option<PathBuf>,
    /// Recompute the reference figures and exit 3 on any mismatch
    #[arg(long)]
    fixture: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct RenderArgs {
    /// A prepared .pgm or a .png bitmap
    #[arg(long)]
    map: PathBuf,
    #[arg(long = "algo", default_value = "rmb-astar")]
    algorithm: Algorithm,
    #[arg(long = "n", default_value_t = 3)]
    n: u32,
    #[arg(long, default_value_t = rmb_core::kernel::DEFAULT_ALPHA)]
    alpha: f64,
    /// Default corner scenario 1..=4
    #[arg(long, default_value_t = 1)]
    direction: u8,
    /// Explicit start as x,y
    #[arg(long, value_parser = parse_coord, requires = "goal")]
    start: Option<Coord>,
    #[arg(long, value_parser = parse_coord, requires = "start")]
    goal: Option<Coord>,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value = "dataset")]
    dataset_dir: PathBuf,
    #[arg(long = "map-type")]
    map_types: Vec<MapType>,
    /// Bitmaps per type
    #[arg(long, default_value_t = 800)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn parse_coord(s: &str) -> Result<Coord, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<i32>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Coord::new(parse(x)?, parse(y)?))
}

fn output_format(f: Format) -> OutputFormat {
    match f {
        Format::Csv => OutputFormat::Csv,
        Format::Json => OutputFormat::Json,
    }
}

/// Accepts a summary CSV or records in CSV/JSON.
fn load_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    if path.extension().is_some_and(|e| e == "csv") {
        let text = fs::read_to_string(path).map_err(BenchError::from)?;
        if text.lines().next().is_some_and(|h| h.split(',').any(|c| c == "runs")) {
            return Ok(from_csv(&text)?);
        }
    }
    Ok(summarize(&read_records(path)?))
}

fn prepare(args: PrepareArgs) -> Result<ExitCode> {
    let config = RunConfig {
        dataset_dir: args.dataset_dir,
        out_dir: args.out_dir,
        map_types: args.filters.map_types,
        dimensions: args.filters.dimensions,
        cap: args.cap,
        jobs: args.filters.jobs,
        ..RunConfig::default()
    };
    let plan = cmd_prepare(&config)?;
    for ((t, d), n) in plan.counts() {
        println!("{t}\t{d}\t{n}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let config = RunConfig {
        out_dir: args.out_dir,
        map_types: args.filters.map_types,
        dimensions: args.filters.dimensions,
        algorithms: args.algorithms,
        n_values: args.n_values,
        alpha: args.alpha,
        cap: args.cap,
        scenarios: args.scenarios,
        jobs: args.filters.jobs,
        seed: args.seed,
        ..RunConfig::default()
    };
    // reject a bad alpha before touching the cache
    config.rmb_options()?;
    let out = cmd_run(&config, output_format(args.format))?;
    print!("{}", to_csv(&out.summary)?);
    for f in &out.files {
        info!("wrote {}", f.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn select(args: SelectArgs) -> Result<ExitCode> {
    let table = match &args.input {
        Some(path) => {
            let rows = load_summary(path)?;
            let mut ns: Vec<u32> =
                rows.iter().filter(|r| r.algorithm == Algorithm::RmbAstar).map(|r| r.rmb_n).collect();
            ns.sort_unstable();
            ns.dedup();
            if ns.is_empty() {
                bail!("{} has no rmb-astar rows", path.display());
            }
            select_from_summary(&rows, &ns, DEFAULT_RANGE)?
        }
        None => {
            let reference = ReferenceTables::builtin();
            rmb_core::evaluation::select(&reference.sweep_table(), reference.range)?
        }
    };
    let csv = ranged_csv(&table)?;
    print!("{csv}");
    println!("optimal n = {}", table.optimal_n);
    for g in table.dissenting() {
        println!("note: {} prefers n = {}", g.key, g.best_n);
    }
    for k in &table.excluded {
        println!("note: {k} left out, sweep incomplete");
    }
    if let Some(dir) = args.out_dir {
        fs::create_dir_all(&dir).map_err(BenchError::from)?;
        fs::write(dir.join("ranked.csv"), csv).map_err(BenchError::from)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn compare(args: CompareArgs) -> Result<ExitCode> {
    let Some(path) = args.input else {
        let lines = reference_checks(&ReferenceTables::builtin())?;
        let mut ok = true;
        for l in &lines {
            let mark = if l.ok() { "ok" } else { "MISMATCH" };
            println!("{mark}\t{}\texpected {}\tgot {:.4}\t(tolerance {})", l.name, l.expected, l.actual, l.tolerance);
            ok &= l.ok();
        }
        return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(3) });
    };
    let rows = compare_summary(&load_summary(&path)?, (Algorithm::Astar, 0), &PERFORMANCE_MAX)?;
    if rows.iter().all(|r| r.impact.is_none()) {
        log::warn!("no astar rows in {}, impact left empty", path.display());
    }
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
        Format::Csv => {
            println!("algorithm,rmb_n,impact_search_cells,impact_path_cost,impact_time_s,pc_search_cells,pc_path_cost,pc_time_s");
            for r in &rows {
                let ie = r.impact.map_or(",,".to_string(), |i| {
                    format!("{:.4},{:.4},{:.4}", i.search_cells, i.path_cost, i.time_s)
                });
                let pc = r.performance;
                println!(
                    "{},{},{ie},{:.4},{:.4},{:.4}",
                    r.algorithm, r.rmb_n, pc.search_cells, pc.path_cost, pc.time_s
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn load_map(path: &Path) -> Result<GridMap> {
    let map = match path.extension().and_then(|e| e.to_str()) {
        Some("pgm") => read_pgm(path)?,
        Some("png") => threshold_bitmap(&RawBitmap::decode_png(path)?)?,
        _ => bail!("{}: expected a .pgm or .png map", path.display()),
    };
    Ok(map)
}

fn render(args: RenderArgs) -> Result<ExitCode> {
    let map = load_map(&args.map)?;
    let scenario = match (args.start, args.goal) {
        (Some(start), Some(goal)) => Scenario::new(start, goal, 0),
        _ => {
            let dimension = map.dimension();
            let set = if dimension == DimensionClass::Raw {
                corner_scenarios(map.width() as i32, map.height() as i32, DEFAULT_INSET)
            } else {
                ScenarioTable::default().for_dimension(dimension)?
            };
            *set.iter()
                .find(|s| s.direction_id == args.direction)
                .with_context(|| format!("no scenario with direction {}", args.direction))?
        }
    };
    scenario.bind(&map)?;
    let config = RunConfig { alpha: args.alpha, ..RunConfig::default() };
    let result = run_algorithm(args.algorithm, &map, &scenario, args.n, &config.rmb_options()?)?;
    let svg = render_svg(&map, &scenario, &result)?;
    fs::write(&args.output, svg).map_err(BenchError::from)?;
    println!(
        "{} n={} {:?}: cost {:.3}, expanded {}, {:.2} ms",
        result.algorithm,
        result.rmb_n,
        result.status,
        result.path_cost,
        result.expanded_cells,
        result.wall_time * 1e3
    );
    Ok(ExitCode::SUCCESS)
}

fn synth_cmd(args: SynthArgs) -> Result<ExitCode> {
    let types = if args.map_types.is_empty() { MapType::ALL.to_vec() } else { args.map_types };
    synth::write_dataset(&args.dataset_dir, &types, args.count, args.seed)?;
    println!("wrote {} bitmaps per type under {}", args.count, args.dataset_dir.display());
    Ok(ExitCode::SUCCESS)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<BenchError>() {
        return if e.is_io() { 2 } else { 1 };
    }
    if let Some(e) = err.downcast_ref::<IngestError>() {
        return match e {
            IngestError::BlockedEndpoint { .. } | IngestError::NoScenarios(_) => 1,
            _ => 2,
        };
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = match cli.command {
        Command::Prepare(a) => prepare(a),
        Command::Run(a) => run(a),
        Command::Select(a) => select(a),
        Command::Compare(a) => compare(a),
        Command::Render(a) => render(a),
        Command::Synth(a) => synth_cmd(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
