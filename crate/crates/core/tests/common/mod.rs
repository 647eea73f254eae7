#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rmb_core::{Coord, GridMap, Occupancy, Scenario};

/// `count` random maps with roughly `density` obstacles and free, distinct
/// endpoints picked uniformly among the free cells.
pub fn random_corpus(count: usize, size: u32, density: f64, seed: u64) -> Vec<(GridMap, Scenario)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let cells: Vec<Occupancy> = (0..size * size)
                .map(|_| if rng.random_bool(density) { Occupancy::Obstacle } else { Occupancy::Free })
                .collect();
            let map = GridMap::new(size, size, cells).unwrap();
            let free: Vec<Coord> = (0..map.len()).map(|i| map.coord_of(i)).filter(|&c| map.is_free(c)).collect();
            let start = free[rng.random_range(0..free.len())];
            let goal = loop {
                let g = free[rng.random_range(0..free.len())];
                if g != start {
                    break g;
                }
            };
            (map, Scenario::new(start, goal, 1))
        })
        .collect()
}

/// Independent path check: endpoints match, every segment runs along one of
/// the eight directions, and every cell it touches is free.
pub fn path_violation(map: &GridMap, scenario: &Scenario, path: &[Coord]) -> Option<String> {
    let (first, last) = (path.first()?, path.last()?);
    if *first != scenario.start || *last != scenario.goal {
        return Some(format!("endpoints {first}..{last} do not match the scenario"));
    }
    for w in path.windows(2) {
        let (dx, dy) = (w[1].x - w[0].x, w[1].y - w[0].y);
        if (dx, dy) == (0, 0) || !(dx == 0 || dy == 0 || dx.abs() == dy.abs()) {
            return Some(format!("segment {} -> {} is not aligned", w[0], w[1]));
        }
        let steps = dx.abs().max(dy.abs());
        for k in 0..=steps {
            let c = Coord::new(w[0].x + dx.signum() * k, w[0].y + dy.signum() * k);
            if !map.is_free(c) {
                return Some(format!("cell {c} on segment {} -> {} is not free", w[0], w[1]));
            }
        }
    }
    None
}

/// Eight-connected shortest distance by a plain O(V^2) Dijkstra.
pub fn oracle_distance(map: &GridMap, scenario: &Scenario) -> Option<f64> {
    let n = map.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[map.index(scenario.start)?] = 0.0;
    loop {
        let mut best = None;
        for i in 0..n {
            if !done[i] && dist[i].is_finite() && best.is_none_or(|b: usize| dist[i] < dist[b]) {
                best = Some(i);
            }
        }
        let u = best?;
        done[u] = true;
        let c = map.coord_of(u);
        if c == scenario.goal {
            return Some(dist[u]);
        }
        for dy in -1..=1 {
            for dx in -1..=1 {
                let next = Coord::new(c.x + dx, c.y + dy);
                if (dx, dy) == (0, 0) || !map.is_free(next) {
                    continue;
                }
                let v = map.index(next).unwrap();
                let step = if dx != 0 && dy != 0 { std::f64::consts::SQRT_2 } else { 1.0 };
                if dist[u] + step < dist[v] {
                    dist[v] = dist[u] + step;
                }
            }
        }
    }
}

/// Sum of Euclidean segment lengths.
pub fn polyline_length(path: &[Coord]) -> f64 {
    path.windows(2).map(|w| f64::from(w[1].x - w[0].x).hypot(f64::from(w[1].y - w[0].y))).sum()
}
