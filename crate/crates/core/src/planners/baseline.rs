use std::collections::VecDeque;

use crate::error::PlanError;
use crate::grid::{euclidean, Coord, GridMap};
use crate::kernel::DirectionClass;
use crate::scenario::Scenario;

use super::{check_endpoints, Algorithm, OpenList, SearchResult, Workspace};

/// N, NE, E, SE, S, SW, W, NW with `y` growing downward.
pub const NEIGHBOUR_ORDER: [(i32, i32); 8] =
    [(0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Baseline {
    Dijkstra,
    Bfs,
    Dfs,
}

/// Eight-connected A* with unit / sqrt 2 step costs and a Euclidean
/// heuristic.
pub fn astar_conventional(map: &GridMap, scenario: &Scenario) -> Result<SearchResult, PlanError> {
    best_first(map, scenario, true)
}

pub fn baseline_search(
    algorithm: Baseline,
    map: &GridMap,
    scenario: &Scenario,
) -> Result<SearchResult, PlanError> {
    match algorithm {
        Baseline::Dijkstra => best_first(map, scenario, false),
        Baseline::Bfs => breadth_first(map, scenario),
        Baseline::Dfs => depth_first(map, scenario),
    }
}

/// Free in-bounds neighbours of `at` with their step lengths, inspecting
/// every in-bounds candidate.
fn neighbours(ws: &mut Workspace<'_>, at: Coord, mut visit: impl FnMut(&mut Workspace<'_>, usize, f64)) {
    for (dx, dy) in NEIGHBOUR_ORDER {
        let next = at.offset(dx, dy);
        let Some(idx) = ws.map.index(next) else { continue };
        ws.inspect(idx);
        if !ws.map.is_free(next) {
            continue;
        }
        let step = DirectionClass::of(Coord::new(dx, dy)).expect("unit offsets are aligned").base_cost();
        visit(ws, idx, step);
    }
}

fn best_first(map: &GridMap, scenario: &Scenario, heuristic: bool) -> Result<SearchResult, PlanError> {
    let (start, goal) = check_endpoints(map, scenario)?;
    let algorithm = if heuristic { Algorithm::Astar } else { Algorithm::Dijkstra };
    let h = |c: Coord| if heuristic { euclidean(c, scenario.goal) } else { 0.0 };

    let mut ws = Workspace::new(map);
    let mut open = OpenList::new();
    ws.inspect(start);
    ws.g[start] = 0.0;
    open.push(start, 0.0, h(scenario.start));

    while let Some(top) = open.pop() {
        if ws.closed[top.index] || top.g > ws.g[top.index] {
            continue;
        }
        ws.expand(top.index);
        if top.index == goal {
            return Ok(ws.finish(Some(goal), algorithm, 0));
        }
        let at = map.coord_of(top.index);
        neighbours(&mut ws, at, |ws, idx, step| {
            let g = top.g + step;
            if !ws.closed[idx] && g < ws.g[idx] {
                ws.g[idx] = g;
                ws.parent[idx] = top.index as u32;
                open.push(idx, g, g + h(ws.map.coord_of(idx)));
            }
        });
    }
    Ok(ws.finish(None, algorithm, 0))
}

fn breadth_first(map: &GridMap, scenario: &Scenario) -> Result<SearchResult, PlanError> {
    let (start, goal) = check_endpoints(map, scenario)?;
    let mut ws = Workspace::new(map);
    let mut queue = VecDeque::from([start]);
    ws.inspect(start);
    // `g` doubles as the discovered flag here
    ws.g[start] = 0.0;

    while let Some(index) = queue.pop_front() {
        ws.expand(index);
        if index == goal {
            return Ok(ws.finish(Some(goal), Algorithm::Bfs, 0));
        }
        let hops = ws.g[index] + 1.0;
        neighbours(&mut ws, map.coord_of(index), |ws, idx, _| {
            if ws.g[idx].is_infinite() {
                ws.g[idx] = hops;
                ws.parent[idx] = index as u32;
                queue.push_back(idx);
            }
        });
    }
    Ok(ws.finish(None, Algorithm::Bfs, 0))
}

fn depth_first(map: &GridMap, scenario: &Scenario) -> Result<SearchResult, PlanError> {
    let (start, goal) = check_endpoints(map, scenario)?;
    let mut ws = Workspace::new(map);
    let mut stack = vec![(start, super::NO_PARENT)];
    ws.inspect(start);

    while let Some((index, parent)) = stack.pop() {
        if ws.closed[index] {
            continue;
        }
        ws.parent[index] = parent;
        ws.expand(index);
        if index == goal {
            return Ok(ws.finish(Some(goal), Algorithm::Dfs, 0));
        }
        let mut pushed = Vec::with_capacity(8);
        neighbours(&mut ws, map.coord_of(index), |ws, idx, _| {
            if !ws.closed[idx] {
                pushed.push(idx);
            }
        });
        // reversed so the first direction in NEIGHBOUR_ORDER is popped first
        stack.extend(pushed.into_iter().rev().map(|idx| (idx, index as u32)));
    }
    Ok(ws.finish(None, Algorithm::Dfs, 0))
}
