use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::grid::{euclidean, GridMap};
use crate::kernel::{expand, AdaptiveCostParams, MotionBlock};
use crate::scenario::Scenario;

use super::{check_endpoints, Algorithm, OpenList, SearchResult, Workspace};

/// How a node's stored cost relates to the movement costs from the kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CostMode {
    /// The stored cost is the geometric length travelled so far. Each move
    /// is priced by the kernel from the move alone (`d * (|q - cn| + alpha *
    /// |goal - q|)`) and that price, added to the stored cost, ranks the
    /// frontier.
    #[default]
    PerMove,
    /// The stored cost is the kernel's arrival cost with the parent's cost
    /// folded in, so the diagonal factor multiplies the whole history.
    Compounding,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RmbOptions {
    pub n: u32,
    pub params: AdaptiveCostParams,
    pub cost_mode: CostMode,
    /// Re-run with `n = 1` when the jump lattice finds nothing.
    pub fallback_to_n1: bool,
}

impl Default for RmbOptions {
    fn default() -> Self {
        Self { n: 3, params: AdaptiveCostParams::default(), cost_mode: CostMode::PerMove, fallback_to_n1: false }
    }
}

impl RmbOptions {
    pub fn with_n(n: u32) -> Self {
        Self { n, ..Self::default() }
    }
}

/// A* over the distance-`n` motion block with default options.
pub fn rmb_astar(
    map: &GridMap,
    scenario: &Scenario,
    n: u32,
    params: &AdaptiveCostParams,
) -> Result<SearchResult, PlanError> {
    rmb_astar_with(map, scenario, &RmbOptions { n, params: *params, ..RmbOptions::default() })
}

pub fn rmb_astar_with(
    map: &GridMap,
    scenario: &Scenario,
    options: &RmbOptions,
) -> Result<SearchResult, PlanError> {
    let first = search(map, scenario, options.n, options)?;
    if first.found() || !options.fallback_to_n1 || options.n == 1 {
        return Ok(first);
    }
    // Counts cover both attempts; the result keeps the requested n.
    let mut retry = search(map, scenario, 1, options)?;
    retry.expanded_cells += first.expanded_cells;
    retry.inspected_cells += first.inspected_cells;
    retry.wall_time += first.wall_time;
    retry.rmb_n = options.n;
    let mut expanded = first.expanded;
    expanded.append(&mut retry.expanded);
    retry.expanded = expanded;
    Ok(retry)
}

fn search(map: &GridMap, scenario: &Scenario, n: u32, options: &RmbOptions) -> Result<SearchResult, PlanError> {
    let block = MotionBlock::new(n)?;
    let (start, goal) = check_endpoints(map, scenario)?;
    let target = scenario.goal;
    let compounding = options.cost_mode == CostMode::Compounding;

    let mut ws = Workspace::new(map);
    let mut open = OpenList::new();
    let mut successors = Vec::with_capacity(8);
    ws.inspect(start);
    ws.g[start] = 0.0;
    open.push(start, 0.0, euclidean(scenario.start, target));

    while let Some(top) = open.pop() {
        if ws.closed[top.index] || top.g > ws.g[top.index] {
            continue;
        }
        ws.expand(top.index);
        if top.index == goal {
            return Ok(ws.finish(Some(goal), Algorithm::RmbAstar, n));
        }
        let at = map.coord_of(top.index);
        let node_cost = if compounding { top.g } else { 0.0 };
        successors.clear();
        expand(map, at, node_cost, target, &block, &options.params, &mut successors, |i| ws.inspect(i))?;
        for s in &successors {
            let idx = map.index(s.cell).expect("successors are in bounds");
            let (g, rank) = if compounding {
                (s.arrival_cost, s.arrival_cost)
            } else {
                (top.g + s.step, top.g + s.arrival_cost)
            };
            if ws.closed[idx] || g >= ws.g[idx] {
                continue;
            }
            ws.g[idx] = g;
            ws.parent[idx] = top.index as u32;
            open.push(idx, g, rank + s.to_goal);
        }
    }
    Ok(ws.finish(None, Algorithm::RmbAstar, n))
}
