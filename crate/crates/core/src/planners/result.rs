use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PlanError;
use crate::grid::{euclidean, Coord};
use crate::kernel::DirectionClass;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "rmb-astar")]
    RmbAstar,
    #[serde(rename = "astar")]
    Astar,
    #[serde(rename = "dijkstra")]
    Dijkstra,
    #[serde(rename = "bfs")]
    Bfs,
    #[serde(rename = "dfs")]
    Dfs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Algorithm::RmbAstar, Algorithm::Astar, Algorithm::Dijkstra, Algorithm::Bfs, Algorithm::Dfs];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::RmbAstar => "rmb-astar",
            Algorithm::Astar => "astar",
            Algorithm::Dijkstra => "dijkstra",
            Algorithm::Bfs => "bfs",
            Algorithm::Dfs => "dfs",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown algorithm {s:?} (expected rmb-astar|astar|dijkstra|bfs|dfs)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SearchStatus {
    Found,
    NotFound,
}

/// Outcome of one planner run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub status: SearchStatus,
    /// Start to goal, empty when nothing was found. Consecutive points are
    /// joined by straight axis or diagonal segments.
    pub path: Vec<Coord>,
    /// Geometric length of `path`, comparable across algorithms.
    pub path_cost: f64,
    /// Nodes popped from the frontier and processed.
    pub expanded_cells: u64,
    /// Distinct cells whose occupancy was read, ray intermediates included.
    pub inspected_cells: u64,
    pub wall_time: f64,
    pub algorithm: Algorithm,
    /// Motion block size; 0 for the baselines.
    pub rmb_n: u32,
    /// Expansion order, kept for rendering.
    #[serde(skip)]
    pub expanded: Vec<Coord>,
}

impl SearchResult {
    pub fn found(&self) -> bool {
        self.status == SearchStatus::Found
    }

    /// Number of unit moves along the path.
    pub fn hop_count(&self) -> u64 {
        self.path.windows(2).map(|w| w[0].chebyshev(w[1]) as u64).sum()
    }
}

/// Sum of Euclidean segment lengths. Every segment must be horizontal,
/// vertical or at 45 degrees.
pub fn path_geometric_cost(path: &[Coord]) -> Result<f64, PlanError> {
    path.windows(2).try_fold(0.0, |acc, w| {
        let d = Coord::new(w[1].x - w[0].x, w[1].y - w[0].y);
        if d != Coord::default() && DirectionClass::of(d).is_none() {
            return Err(PlanError::MisalignedSegment { from: w[0], to: w[1] });
        }
        Ok(acc + euclidean(w[0], w[1]))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn c(x: i32, y: i32) -> Coord {
        Coord::new(x, y)
    }

    #[test]
    fn geometric_cost_examples() {
        let v = path_geometric_cost(&[c(0, 0), c(1, 1), c(2, 1)]).unwrap();
        assert!((v - (SQRT_2 + 1.0)).abs() < 1e-12);
        let v = path_geometric_cost(&[c(0, 0), c(3, 3)]).unwrap();
        assert!((v - 3.0 * SQRT_2).abs() < 1e-12);
        assert_eq!(path_geometric_cost(&[]).unwrap(), 0.0);
        assert_eq!(path_geometric_cost(&[c(5, 5)]).unwrap(), 0.0);
    }

    #[test]
    fn knight_move_rejected() {
        assert!(matches!(
            path_geometric_cost(&[c(0, 0), c(1, 2)]),
            Err(PlanError::MisalignedSegment { .. })
        ));
    }

    #[test]
    fn algorithm_names() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("greedy".parse::<Algorithm>().is_err());
    }
}
