//! Search algorithms over a [`GridMap`].
//!
//! All planners share the same bookkeeping so their counts are comparable:
//! a cell is *expanded* when it is popped and processed, and *inspected*
//! the first time its occupancy is read.

mod baseline;
mod open_list;
mod result;
mod rmb;

pub use baseline::{astar_conventional, baseline_search, Baseline, NEIGHBOUR_ORDER};
pub use open_list::{OpenList, Popped};
pub use result::{path_geometric_cost, Algorithm, SearchResult, SearchStatus};
pub use rmb::{rmb_astar, rmb_astar_with, CostMode, RmbOptions};

use web_time::Instant;

use crate::error::PlanError;
use crate::grid::{Coord, GridMap};
use crate::scenario::Scenario;

const NO_PARENT: u32 = u32::MAX;

/// Runs `algorithm` with its default options. `n` is ignored by the
/// baselines.
pub fn run_algorithm(
    algorithm: Algorithm,
    map: &GridMap,
    scenario: &Scenario,
    n: u32,
    options: &RmbOptions,
) -> Result<SearchResult, PlanError> {
    match algorithm {
        Algorithm::RmbAstar => rmb_astar_with(map, scenario, &RmbOptions { n, ..options.clone() }),
        Algorithm::Astar => astar_conventional(map, scenario),
        Algorithm::Dijkstra => baseline_search(Baseline::Dijkstra, map, scenario),
        Algorithm::Bfs => baseline_search(Baseline::Bfs, map, scenario),
        Algorithm::Dfs => baseline_search(Baseline::Dfs, map, scenario),
    }
}

fn check_endpoints(map: &GridMap, scenario: &Scenario) -> Result<(usize, usize), PlanError> {
    let start = map.index(scenario.start).filter(|_| map.is_free(scenario.start));
    let goal = map.index(scenario.goal).filter(|_| map.is_free(scenario.goal));
    match (start, goal) {
        (None, _) => Err(PlanError::StartNotFree(scenario.start)),
        (_, None) => Err(PlanError::GoalNotFree(scenario.goal)),
        (Some(s), Some(g)) => Ok((s, g)),
    }
}

/// Per-search scratch state, one slot per map cell.
struct Workspace<'m> {
    map: &'m GridMap,
    g: Vec<f64>,
    parent: Vec<u32>,
    closed: Vec<bool>,
    seen: Vec<bool>,
    inspected: u64,
    expanded: Vec<Coord>,
    clock: Instant,
}

impl<'m> Workspace<'m> {
    fn new(map: &'m GridMap) -> Self {
        let len = map.len();
        Self {
            map,
            g: vec![f64::INFINITY; len],
            parent: vec![NO_PARENT; len],
            closed: vec![false; len],
            seen: vec![false; len],
            inspected: 0,
            expanded: Vec::new(),
            clock: Instant::now(),
        }
    }

    fn inspect(&mut self, index: usize) {
        if !self.seen[index] {
            self.seen[index] = true;
            self.inspected += 1;
        }
    }

    fn expand(&mut self, index: usize) {
        self.closed[index] = true;
        self.expanded.push(self.map.coord_of(index));
    }

    fn path_to(&self, goal: usize) -> Vec<Coord> {
        let mut path = vec![self.map.coord_of(goal)];
        let mut at = goal;
        while self.parent[at] != NO_PARENT {
            at = self.parent[at] as usize;
            path.push(self.map.coord_of(at));
        }
        path.reverse();
        path
    }

    fn finish(self, goal: Option<usize>, algorithm: Algorithm, rmb_n: u32) -> SearchResult {
        let wall_time = self.clock.elapsed().as_secs_f64();
        let (status, path) = match goal {
            Some(g) => (SearchStatus::Found, self.path_to(g)),
            None => (SearchStatus::NotFound, Vec::new()),
        };
        let path_cost = path_geometric_cost(&path).expect("planners only join aligned cells");
        SearchResult {
            status,
            path,
            path_cost,
            expanded_cells: self.expanded.len() as u64,
            inspected_cells: self.inspected,
            wall_time,
            algorithm,
            rmb_n,
            expanded: self.expanded,
        }
    }
}
