//! Benchmark plumbing: building a prepared-map cache from a bitmap dataset,
//! sweeping planners over it, and aggregating the run records.
//!
//! Cache layout: `<out>/prepared/<type>/<dimension>/<id>.pgm` plus a
//! `manifest.json` naming the source bitmaps of every prepared map.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, EvalError};
use crate::evaluation::{
    impact_evaluation, performance_calc, select, GroupKey, Metric, MetricTriple, RangedTable, ReferenceTables,
    SweepTable,
};
use crate::grid::{DimensionClass, GridMap, MapType};
use crate::ingest::{load_dataset, prepare_map, read_pgm, write_atomic, write_pgm, DatasetInventory, Layout, RawBitmap};
use crate::kernel::{AdaptiveCostParams, DEFAULT_ALPHA};
use crate::planners::{run_algorithm, Algorithm, RmbOptions, SearchResult, SearchStatus};
use crate::scenario::{Scenario, ScenarioTable};

pub const PREPARED_DIR: &str = "prepared";
pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dataset_dir: PathBuf,
    pub out_dir: PathBuf,
    /// Empty means every type.
    pub map_types: Vec<MapType>,
    /// Empty means every prepared dimension.
    pub dimensions: Vec<DimensionClass>,
    pub algorithms: Vec<Algorithm>,
    pub n_values: Vec<u32>,
    pub alpha: f64,
    /// Source bitmaps per type for `prepare`, prepared maps per group for
    /// `run`.
    pub cap: Option<usize>,
    pub scenarios: Option<PathBuf>,
    /// Worker threads; `None` lets rayon decide.
    pub jobs: Option<usize>,
    /// Only used to subsample maps when `cap` is set.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dataset_dir: PathBuf::from("dataset"),
            out_dir: PathBuf::from("out"),
            map_types: Vec::new(),
            dimensions: Vec::new(),
            algorithms: vec![Algorithm::RmbAstar, Algorithm::Astar],
            n_values: (1..=6).collect(),
            alpha: DEFAULT_ALPHA,
            cap: None,
            scenarios: None,
            jobs: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn map_types(&self) -> Vec<MapType> {
        if self.map_types.is_empty() {
            MapType::ALL.to_vec()
        } else {
            self.map_types.clone()
        }
    }

    pub fn dimensions(&self) -> Vec<DimensionClass> {
        if self.dimensions.is_empty() {
            DimensionClass::PREPARED.to_vec()
        } else {
            self.dimensions.clone()
        }
    }

    pub fn rmb_options(&self) -> Result<RmbOptions, BenchError> {
        let params = AdaptiveCostParams::with_alpha_override(self.alpha)?;
        Ok(RmbOptions { params, ..RmbOptions::default() })
    }

    fn pool(&self) -> Result<rayon::ThreadPool, BenchError> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            builder = builder.num_threads(j.max(1));
        }
        builder.build().map_err(|e| BenchError::Io(std::io::Error::other(e)))
    }
}

/// One map the cache will hold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlannedMap {
    pub map_type: MapType,
    pub dimension: DimensionClass,
    pub id: String,
    pub sources: Vec<String>,
    #[serde(skip)]
    pub source_paths: Vec<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreparePlan {
    pub maps: Vec<PlannedMap>,
}

impl PreparePlan {
    pub fn counts(&self) -> BTreeMap<(MapType, DimensionClass), usize> {
        let mut out = BTreeMap::new();
        for m in &self.maps {
            *out.entry((m.map_type, m.dimension)).or_insert(0) += 1;
        }
        out
    }
}

/// Every bitmap becomes one square map, consecutive pairs one wide map and
/// consecutive quadruples one large map, in inventory order. Trailing
/// bitmaps that do not fill a group are dropped.
pub fn plan_prepare(inventory: &DatasetInventory, dimensions: &[DimensionClass]) -> PreparePlan {
    let mut maps = Vec::new();
    for map_type in MapType::ALL {
        let tiles: Vec<_> = inventory.of_type(map_type).collect();
        if tiles.is_empty() {
            continue;
        }
        for &dimension in dimensions {
            let Some(layout) = Layout::for_dimension(dimension) else {
                continue;
            };
            for (i, group) in tiles.chunks_exact(layout.tiles()).enumerate() {
                maps.push(PlannedMap {
                    map_type,
                    dimension,
                    id: format!("{i:04}"),
                    sources: group.iter().map(|e| e.source_id.clone()).collect(),
                    source_paths: group.iter().map(|e| e.path.clone()).collect(),
                });
            }
        }
    }
    PreparePlan { maps }
}

pub fn prepared_path(out_dir: &Path, map_type: MapType, dimension: DimensionClass, id: &str) -> PathBuf {
    out_dir.join(PREPARED_DIR).join(map_type.as_str()).join(dimension.as_str()).join(format!("{id}.pgm"))
}

/// Decodes the sources of `planned` and builds the prepared map.
pub fn build_planned(planned: &PlannedMap) -> Result<GridMap, BenchError> {
    let layout = Layout::for_dimension(planned.dimension).ok_or(BenchError::NotPrepared(planned.dimension))?;
    let tiles = planned.source_paths.iter().map(|p| RawBitmap::decode_png(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(prepare_map(&tiles, layout, Some(planned.map_type), planned.id.clone())?)
}

/// Builds the prepared cache. Re-running over unchanged input rewrites the
/// same bytes.
pub fn cmd_prepare(config: &RunConfig) -> Result<PreparePlan, BenchError> {
    let types = config.map_types();
    let inventory = load_dataset(&config.dataset_dir, Some(&types), config.cap)?;
    if inventory.is_empty() {
        return Err(BenchError::EmptyDataset(config.dataset_dir.clone()));
    }
    if inventory.skipped > 0 {
        warn!("{} unreadable entries skipped", inventory.skipped);
    }
    let plan = plan_prepare(&inventory, &config.dimensions());
    config.pool()?.install(|| {
        plan.maps.par_iter().try_for_each(|m| {
            let map = build_planned(m)?;
            write_pgm(&map, &prepared_path(&config.out_dir, m.map_type, m.dimension, &m.id))?;
            Ok::<_, BenchError>(())
        })
    })?;
    let manifest = serde_json::to_vec_pretty(&plan)?;
    write_atomic(&config.out_dir.join(PREPARED_DIR).join(MANIFEST), &manifest)?;
    for ((t, d), n) in plan.counts() {
        info!("prepared {n} {t} maps at {d}");
    }
    Ok(plan)
}

/// A prepared map on disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CachedMap {
    pub map_type: MapType,
    pub dimension: DimensionClass,
    pub id: String,
    pub path: PathBuf,
}

impl CachedMap {
    pub fn group(&self) -> GroupKey {
        GroupKey { map_type: self.map_type, dimension: self.dimension }
    }
}

/// Lists the cache in (type, dimension, id) order.
pub fn load_cache(
    out_dir: &Path,
    types: &[MapType],
    dimensions: &[DimensionClass],
) -> Result<Vec<CachedMap>, BenchError> {
    let root = out_dir.join(PREPARED_DIR);
    let mut out = Vec::new();
    for &map_type in types {
        for &dimension in dimensions {
            let dir = root.join(map_type.as_str()).join(dimension.as_str());
            let Ok(entries) = fs::read_dir(&dir) else {
                continue;
            };
            let mut found: Vec<CachedMap> = entries
                .filter_map(Result::ok)
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|e| e == "pgm"))
                .filter_map(|path| {
                    let id = path.file_stem()?.to_str()?.to_string();
                    Some(CachedMap { map_type, dimension, id, path })
                })
                .collect();
            found.sort_by(|a, b| a.id.cmp(&b.id));
            out.extend(found);
        }
    }
    if out.is_empty() {
        return Err(BenchError::MissingCache(root));
    }
    Ok(out)
}

/// Keeps at most `cap` maps per group, chosen with `seed`, in their
/// original order.
pub fn subsample(maps: Vec<CachedMap>, cap: Option<usize>, seed: u64) -> Vec<CachedMap> {
    let Some(cap) = cap else {
        return maps;
    };
    let mut groups: BTreeMap<GroupKey, Vec<CachedMap>> = BTreeMap::new();
    for m in maps {
        groups.entry(m.group()).or_default().push(m);
    }
    let mut out = Vec::new();
    for (key, group) in groups {
        if group.len() <= cap {
            out.extend(group);
            continue;
        }
        let salt = ((key.map_type as u64) << 8) | key.dimension as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut keep = rand::seq::index::sample(&mut rng, group.len(), cap).into_vec();
        keep.sort_unstable();
        out.extend(keep.into_iter().map(|i| group[i].clone()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordStatus {
    Found,
    NotFound,
    /// The planner rejected the input, e.g. an endpoint on an obstacle.
    Failed,
}

/// One planner execution, flat so it fits a CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub map_id: String,
    pub map_type: MapType,
    pub dimension: DimensionClass,
    pub direction_id: u8,
    pub start_x: i32,
    pub start_y: i32,
    pub goal_x: i32,
    pub goal_y: i32,
    pub algorithm: Algorithm,
    pub rmb_n: u32,
    pub status: RecordStatus,
    pub path_cost: f64,
    pub path_nodes: usize,
    pub expanded_cells: u64,
    pub inspected_cells: u64,
    pub wall_time: f64,
    pub error: String,
}

impl RunRecord {
    fn new(map: &GridMap, map_type: MapType, scenario: &Scenario, algorithm: Algorithm, rmb_n: u32) -> Self {
        Self {
            map_id: map.source_id().to_string(),
            map_type,
            dimension: map.dimension(),
            direction_id: scenario.direction_id,
            start_x: scenario.start.x,
            start_y: scenario.start.y,
            goal_x: scenario.goal.x,
            goal_y: scenario.goal.y,
            algorithm,
            rmb_n,
            status: RecordStatus::Failed,
            path_cost: 0.0,
            path_nodes: 0,
            expanded_cells: 0,
            inspected_cells: 0,
            wall_time: 0.0,
            error: String::new(),
        }
    }

    fn with_result(mut self, r: &SearchResult) -> Self {
        self.status = match r.status {
            SearchStatus::Found => RecordStatus::Found,
            SearchStatus::NotFound => RecordStatus::NotFound,
        };
        self.path_cost = r.path_cost;
        self.path_nodes = r.path.len();
        self.expanded_cells = r.expanded_cells;
        self.inspected_cells = r.inspected_cells;
        self.wall_time = r.wall_time;
        self
    }

    pub fn group(&self) -> GroupKey {
        GroupKey { map_type: self.map_type, dimension: self.dimension }
    }

    pub fn metrics(&self) -> MetricTriple {
        MetricTriple { search_cells: self.expanded_cells as f64, path_cost: self.path_cost, time_s: self.wall_time }
    }

    /// Same record with the timing zeroed, for determinism checks.
    pub fn without_time(&self) -> Self {
        Self { wall_time: 0.0, ..self.clone() }
    }
}

/// Runs every algorithm (every n for the motion-block planner) on one map.
/// Planner errors become `Failed` records.
pub fn run_on_map(
    map: &GridMap,
    map_type: MapType,
    scenario: &Scenario,
    algorithms: &[Algorithm],
    n_values: &[u32],
    options: &RmbOptions,
) -> Vec<RunRecord> {
    let mut out = Vec::new();
    for &algorithm in algorithms {
        let ns: &[u32] = if algorithm == Algorithm::RmbAstar { n_values } else { &[0] };
        for &n in ns {
            let record = RunRecord::new(map, map_type, scenario, algorithm, n);
            out.push(match run_algorithm(algorithm, map, scenario, n, options) {
                Ok(r) => record.with_result(&r),
                Err(e) => RunRecord { error: e.to_string(), ..record },
            });
        }
    }
    out
}

/// Pairs each map with a scenario, cycling through the directions of its
/// dimension in cache order.
pub fn assign_scenarios(
    maps: &[CachedMap],
    scenarios: &ScenarioTable,
) -> Result<Vec<(CachedMap, Scenario)>, BenchError> {
    let mut seen: BTreeMap<GroupKey, usize> = BTreeMap::new();
    let mut sets: BTreeMap<DimensionClass, Vec<Scenario>> = BTreeMap::new();
    let mut out = Vec::with_capacity(maps.len());
    for m in maps {
        let set = match sets.entry(m.dimension) {
            std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
            std::collections::btree_map::Entry::Vacant(e) => e.insert(scenarios.for_dimension(m.dimension)?),
        };
        let i = seen.entry(m.group()).or_insert(0);
        out.push((m.clone(), set[*i % set.len()]));
        *i += 1;
    }
    Ok(out)
}

/// Executes the sweep. Output order follows the cache order whatever the
/// thread count.
pub fn run_sweep(maps: &[CachedMap], config: &RunConfig) -> Result<Vec<RunRecord>, BenchError> {
    let table = match &config.scenarios {
        Some(p) => ScenarioTable::load(p)?,
        None => ScenarioTable::default(),
    };
    let jobs = assign_scenarios(maps, &table)?;
    let options = config.rmb_options()?;
    let per_map = config.pool()?.install(|| {
        jobs.par_iter()
            .map(|(m, scenario)| {
                let map = read_pgm(&m.path)?;
                let map = map.with_metadata(Some(m.map_type), m.dimension, m.id.clone());
                Ok(run_on_map(&map, m.map_type, scenario, &config.algorithms, &config.n_values, &options))
            })
            .collect::<Result<Vec<_>, BenchError>>()
    })?;
    Ok(per_map.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Everything a `run` writes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RunMeta {
    seed: u64,
    cap: Option<usize>,
    alpha: f64,
    n_values: Vec<u32>,
    algorithms: Vec<Algorithm>,
    maps: Vec<String>,
}

pub fn cmd_run(config: &RunConfig, format: OutputFormat) -> Result<RunOutput, BenchError> {
    let maps = load_cache(&config.out_dir, &config.map_types(), &config.dimensions())?;
    let maps = subsample(maps, config.cap, config.seed);
    info!("running {} maps", maps.len());
    let records = run_sweep(&maps, config)?;
    let summary = summarize(&records);

    let dir = config.out_dir.join("results");
    let mut files = Vec::new();
    let mut put = |name: &str, bytes: Vec<u8>| -> Result<(), BenchError> {
        let path = dir.join(name);
        write_atomic(&path, &bytes)?;
        files.push(path);
        Ok(())
    };
    match format {
        OutputFormat::Csv => put("records.csv", to_csv(&records)?.into_bytes())?,
        OutputFormat::Json => put("records.json", serde_json::to_vec_pretty(&records)?)?,
    }
    put("summary.csv", to_csv(&summary)?.into_bytes())?;
    let sweep = sweep_from_summary(&summary, &config.n_values);
    if !sweep.groups.is_empty() {
        put("sweep.csv", sweep_csv(&sweep)?.into_bytes())?;
    }
    let meta = RunMeta {
        seed: config.seed,
        cap: config.cap,
        alpha: config.alpha,
        n_values: config.n_values.clone(),
        algorithms: config.algorithms.clone(),
        maps: maps.iter().map(|m| format!("{}/{}/{}", m.map_type, m.dimension, m.id)).collect(),
    };
    put("meta.json", serde_json::to_vec_pretty(&meta)?)?;
    Ok(RunOutput { records, summary, files })
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

pub fn from_csv<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, BenchError> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect::<Result<Vec<T>, _>>().map_err(Into::into)
}

/// Reads records written as CSV or JSON, picked by extension.
pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let text = fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Ok(serde_json::from_str(&text)?),
        Some("csv") => from_csv(&text),
        _ => Err(BenchError::BadRecords { path: path.to_path_buf(), message: "expected .csv or .json".into() }),
    }
}

/// Means of one (group, algorithm, n) cell over its successful runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub map_type: MapType,
    pub dimension: DimensionClass,
    pub algorithm: Algorithm,
    pub rmb_n: u32,
    pub runs: usize,
    pub found: usize,
    /// Runs left out of the means.
    pub excluded: usize,
    pub search_cells: f64,
    pub path_cost: f64,
    pub time_s: f64,
}

impl SummaryRow {
    pub fn metrics(&self) -> MetricTriple {
        MetricTriple { search_cells: self.search_cells, path_cost: self.path_cost, time_s: self.time_s }
    }
}

pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<(GroupKey, Algorithm, u32), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((r.group(), r.algorithm, r.rmb_n)).or_default().push(r);
    }
    cells
        .into_iter()
        .map(|((key, algorithm, rmb_n), rs)| {
            let found: Vec<MetricTriple> =
                rs.iter().filter(|r| r.status == RecordStatus::Found).map(|r| r.metrics()).collect();
            let mean = MetricTriple::mean(&found).unwrap_or_default();
            SummaryRow {
                map_type: key.map_type,
                dimension: key.dimension,
                algorithm,
                rmb_n,
                runs: rs.len(),
                found: found.len(),
                excluded: rs.len() - found.len(),
                search_cells: mean.search_cells,
                path_cost: mean.path_cost,
                time_s: mean.time_s,
            }
        })
        .collect()
}

/// Motion-block rows of a summary as a sweep table. Cells without a
/// successful run are left out.
pub fn sweep_from_summary(rows: &[SummaryRow], n_values: &[u32]) -> SweepTable {
    let mut table = SweepTable::new(n_values.to_vec());
    for r in rows.iter().filter(|r| r.algorithm == Algorithm::RmbAstar && r.found > 0) {
        table.insert(GroupKey { map_type: r.map_type, dimension: r.dimension }, r.rmb_n, r.metrics());
    }
    table
}

/// Wide layout: one row per (group, metric), one column per n.
pub fn sweep_csv(table: &SweepTable) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["map_type".to_string(), "dimension".into(), "metric".into()];
    header.extend(table.n_values.iter().map(|n| format!("n{n}")));
    w.write_record(&header)?;
    for (key, by_n) in &table.groups {
        for metric in Metric::ALL {
            let mut row = vec![key.map_type.to_string(), key.dimension.to_string(), metric.as_str().to_string()];
            row.extend(table.n_values.iter().map(|n| by_n.get(n).map(|t| t.get(metric).to_string()).unwrap_or_default()));
            w.write_record(&row)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

/// Rescaled table with an `average` row per group and a final `overall`
/// row.
pub fn ranged_csv(table: &RangedTable) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["map_type".to_string(), "dimension".into(), "row".into()];
    header.extend(table.n_values.iter().map(|n| format!("n{n}")));
    header.push("best_n".into());
    w.write_record(&header)?;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>();
    for g in &table.groups {
        let rows = Metric::ALL.iter().map(|m| (m.as_str(), g.row(*m))).chain([("average", g.average.as_slice())]);
        for (name, values) in rows {
            let mut row = vec![g.key.map_type.to_string(), g.key.dimension.to_string(), name.to_string()];
            row.extend(fmt(values));
            row.push(if name == "average" { g.best_n.to_string() } else { String::new() });
            w.write_record(&row)?;
        }
    }
    let mut row = vec![String::new(), String::new(), "overall".to_string()];
    row.extend(fmt(&table.overall));
    row.push(table.optimal_n.to_string());
    w.write_record(&row)?;
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

/// Selection over the motion-block cells of a summary.
pub fn select_from_summary(rows: &[SummaryRow], n_values: &[u32], range: f64) -> Result<RangedTable, BenchError> {
    Ok(select(&sweep_from_summary(rows, n_values), range)?)
}

/// Baseline-relative figures for one planner configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub rmb_n: u32,
    /// Mean per dimension, pooled over map types.
    pub per_dimension: BTreeMap<DimensionClass, MetricTriple>,
    /// Reduction against the baseline, summed over shared dimensions.
    pub impact: Option<MetricTriple>,
    /// Mean of the per-dimension values as a share of the reference maxima.
    pub performance: MetricTriple,
}

fn pooled(rows: &[&SummaryRow]) -> Option<MetricTriple> {
    let found: usize = rows.iter().map(|r| r.found).sum();
    if found == 0 {
        return None;
    }
    let w = |f: fn(&SummaryRow) -> f64| rows.iter().map(|r| f(r) * r.found as f64).sum::<f64>() / found as f64;
    Some(MetricTriple { search_cells: w(|r| r.search_cells), path_cost: w(|r| r.path_cost), time_s: w(|r| r.time_s) })
}

/// Compares every (algorithm, n) in `rows` against `baseline`.
pub fn compare_summary(
    rows: &[SummaryRow],
    baseline: (Algorithm, u32),
    maxima: &MetricTriple,
) -> Result<Vec<ComparisonRow>, EvalError> {
    let mut by_config: BTreeMap<(Algorithm, u32), BTreeMap<DimensionClass, Vec<&SummaryRow>>> = BTreeMap::new();
    for r in rows {
        by_config.entry((r.algorithm, r.rmb_n)).or_default().entry(r.dimension).or_default().push(r);
    }
    let dims = |config: &BTreeMap<DimensionClass, Vec<&SummaryRow>>| -> BTreeMap<DimensionClass, MetricTriple> {
        config.iter().filter_map(|(d, rs)| pooled(rs).map(|t| (*d, t))).collect()
    };
    let base = by_config.get(&baseline).map(dims).unwrap_or_default();
    let mut out = Vec::new();
    for ((algorithm, rmb_n), config) in &by_config {
        let per_dimension = dims(config);
        let shared: Vec<DimensionClass> = per_dimension.keys().filter(|d| base.contains_key(d)).copied().collect();
        let impact = if shared.is_empty() {
            None
        } else {
            let ie = |m: Metric| {
                let x: Vec<f64> = shared.iter().map(|d| base[d].get(m)).collect();
                let y: Vec<f64> = shared.iter().map(|d| per_dimension[d].get(m)).collect();
                impact_evaluation(&x, &y)
            };
            Some(MetricTriple {
                search_cells: ie(Metric::SearchCells)?,
                path_cost: ie(Metric::PathCost)?,
                time_s: ie(Metric::TimeS)?,
            })
        };
        let pc = |m: Metric| {
            let v: Vec<f64> = per_dimension.values().map(|t| t.get(m)).collect();
            performance_calc(&v, maxima.get(m))
        };
        if per_dimension.is_empty() {
            continue;
        }
        let performance = MetricTriple {
            search_cells: pc(Metric::SearchCells)?,
            path_cost: pc(Metric::PathCost)?,
            time_s: pc(Metric::TimeS)?,
        };
        out.push(ComparisonRow { algorithm: *algorithm, rmb_n: *rmb_n, per_dimension, impact, performance });
    }
    Ok(out)
}

/// One numeric check against a published figure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub expected: f64,
    pub actual: f64,
    pub tolerance: f64,
}

impl CheckLine {
    pub fn ok(&self) -> bool {
        (self.actual - self.expected).abs() <= self.tolerance
    }
}

/// Recomputes the headline figures of the reference tables from their own
/// inputs.
pub fn reference_checks(reference: &ReferenceTables) -> Result<Vec<CheckLine>, EvalError> {
    let mut out = Vec::new();
    let mut line = |name: &str, expected: f64, actual: f64, tolerance: f64| {
        out.push(CheckLine { name: name.to_string(), expected, actual, tolerance });
    };
    let e = &reference.expected;
    if let (Some(a), Some(p)) = (reference.comparison_for("astar"), reference.comparison_for("rmb_astar_n3")) {
        for (m, expected) in [(Metric::SearchCells, e.impact_n3.search_cells), (Metric::TimeS, e.impact_n3.time_s)] {
            let ie = impact_evaluation(&a.per_dimension_values(m), &p.per_dimension_values(m))?;
            line(&format!("impact n=3 {}", m.as_str()), expected, ie, 0.01);
        }
    }
    let n1 = &reference.n1_comparison;
    for m in Metric::ALL {
        let ie = impact_evaluation(&[n1.astar.get(m)], &[n1.rmb_astar_n1.get(m)])?;
        line(&format!("impact n=1 {}", m.as_str()), e.impact_n1.get(m), ie, 0.01);
    }
    let ranked = select(&reference.sweep_table(), reference.range)?;
    line("optimal n from sweep", f64::from(e.optimal_n), f64::from(ranked.optimal_n), 0.0);
    let printed: Vec<Vec<f64>> = reference.ranged.iter().map(|g| g.average.clone()).collect();
    let n = crate::evaluation::optimal_rmb(&printed)?;
    line("optimal n from ranked averages", f64::from(e.optimal_n), n as f64, 0.0);
    Ok(out)
}
