//! Grid path planning with distance-n robot motion blocks.
//!
//! The crate provides an occupancy grid, a motion-block successor kernel
//! with a goal-tracking movement cost, an A* that uses it, the usual
//! baselines (eight-connected A*, Dijkstra, BFS, DFS), the map preparation
//! pipeline, block-size selection and comparison metrics, and a benchmark
//! runner that ties them together.

pub mod bench;
pub mod error;
pub mod evaluation;
pub mod grid;
pub mod ingest;
pub mod kernel;
pub mod planners;
pub mod render;
pub mod scenario;
pub mod synth;

pub use error::{BenchError, EvalError, GridError, IngestError, KernelError, PlanError, RenderError};
pub use grid::{euclidean, ray_cells, CellState, Coord, DimensionClass, GridMap, MapType, Occupancy};
pub use kernel::{adaptive_cost, build_motion_block, move_cost, successors, AdaptiveCostParams, MotionBlock};
pub use planners::{
    astar_conventional, baseline_search, path_geometric_cost, rmb_astar, Algorithm, Baseline, SearchResult,
    SearchStatus,
};
pub use scenario::{generate_scenarios, Scenario};
