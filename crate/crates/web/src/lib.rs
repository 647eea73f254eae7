//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and numbers and returns JSON, so the
//! page needs no glue beyond `JSON.parse`. The same functions are callable
//! from Rust.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use rmb_core::evaluation::{self, ReferenceTables, DEFAULT_RANGE};
use rmb_core::ingest::{prepare_map, Layout};
use rmb_core::planners::{run_algorithm, RmbOptions};
use rmb_core::render::render_svg;
use rmb_core::scenario::generate_scenarios;
use rmb_core::{synth, AdaptiveCostParams, Algorithm, DimensionClass, GridMap, MapType, Scenario, SearchResult};

#[derive(Debug, Serialize)]
pub struct Metrics {
    pub algorithm: String,
    pub n: u32,
    pub found: bool,
    pub path_cost: f64,
    pub path_nodes: usize,
    pub expanded_cells: u64,
    pub inspected_cells: u64,
    pub time_ms: f64,
}

impl From<&SearchResult> for Metrics {
    fn from(r: &SearchResult) -> Self {
        Self {
            algorithm: r.algorithm.to_string(),
            n: r.rmb_n,
            found: r.found(),
            path_cost: r.path_cost,
            path_nodes: r.path.len(),
            expanded_cells: r.expanded_cells,
            inspected_cells: r.inspected_cells,
            time_ms: r.wall_time * 1e3,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Plan {
    pub svg: String,
    pub metrics: Metrics,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// A procedural map of `map_type` at `dimension`, bordered like the
/// prepared cache, and its corner scenario `direction` (1..=4).
pub fn demo_map(map_type: &str, dimension: &str, seed: u64, direction: u8) -> Result<(GridMap, Scenario), String> {
    let map_type: MapType = map_type.parse().map_err(err)?;
    let dimension: DimensionClass = dimension.parse().map_err(err)?;
    let layout = Layout::for_dimension(dimension).ok_or_else(|| format!("{dimension} is not a prepared size"))?;
    let tiles: Vec<_> = (0..layout.tiles()).map(|i| synth::tile(map_type, i, seed)).collect();
    let map = prepare_map(&tiles, layout, Some(map_type), format!("seed{seed}")).map_err(err)?;
    let scenario = generate_scenarios(dimension)
        .map_err(err)?
        .into_iter()
        .find(|s| s.direction_id == direction)
        .ok_or_else(|| format!("direction must be 1..=4, got {direction}"))?;
    Ok((map, scenario))
}

fn options(alpha: f64) -> Result<RmbOptions, String> {
    let params = AdaptiveCostParams::new(alpha).map_err(err)?;
    Ok(RmbOptions { params, ..RmbOptions::default() })
}

pub fn plan(
    map_type: &str,
    dimension: &str,
    seed: u64,
    direction: u8,
    algorithm: &str,
    n: u32,
    alpha: f64,
) -> Result<Plan, String> {
    let (map, scenario) = demo_map(map_type, dimension, seed, direction)?;
    let algorithm: Algorithm = algorithm.parse()?;
    let result = run_algorithm(algorithm, &map, &scenario, n, &options(alpha)?).map_err(err)?;
    let svg = render_svg(&map, &scenario, &result).map_err(err)?;
    Ok(Plan { svg, metrics: Metrics::from(&result) })
}

/// Conventional A* followed by the motion-block planner at each `n`.
pub fn sweep(
    map_type: &str,
    dimension: &str,
    seed: u64,
    direction: u8,
    max_n: u32,
    alpha: f64,
) -> Result<Vec<Metrics>, String> {
    let (map, scenario) = demo_map(map_type, dimension, seed, direction)?;
    let options = options(alpha)?;
    let mut rows = vec![Metrics::from(&run_algorithm(Algorithm::Astar, &map, &scenario, 0, &options).map_err(err)?)];
    for n in 1..=max_n {
        let r = run_algorithm(Algorithm::RmbAstar, &map, &scenario, n, &options).map_err(err)?;
        rows.push(Metrics::from(&r));
    }
    Ok(rows)
}

/// Block-size selection over the shipped reference sweep.
pub fn select_reference() -> Result<evaluation::RangedTable, String> {
    let reference = ReferenceTables::builtin();
    evaluation::select(&reference.sweep_table(), DEFAULT_RANGE).map_err(err)
}

fn to_js<T: Serialize>(value: Result<T, String>) -> Result<String, JsError> {
    let value = value.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

/// JSON `{svg, metrics}` for one planner run.
#[wasm_bindgen(js_name = plan)]
pub fn plan_js(
    map_type: &str,
    dimension: &str,
    seed: u32,
    direction: u8,
    algorithm: &str,
    n: u32,
    alpha: f64,
) -> Result<String, JsError> {
    to_js(plan(map_type, dimension, u64::from(seed), direction, algorithm, n, alpha))
}

/// JSON array of metrics, A* first.
#[wasm_bindgen(js_name = sweep)]
pub fn sweep_js(
    map_type: &str,
    dimension: &str,
    seed: u32,
    direction: u8,
    max_n: u32,
    alpha: f64,
) -> Result<String, JsError> {
    to_js(sweep(map_type, dimension, u64::from(seed), direction, max_n, alpha))
}

/// JSON ranked table with `optimal_n`.
#[wasm_bindgen(js_name = selectReference)]
pub fn select_reference_js() -> Result<String, JsError> {
    to_js(select_reference())
}
