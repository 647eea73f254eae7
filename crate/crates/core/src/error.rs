use std::path::PathBuf;

use thiserror::Error;

use crate::grid::Coord;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid has zero width or height")]
    Empty,
    #[error("grid of {width}x{height} exceeds the signed coordinate range")]
    TooLarge { width: u32, height: u32 },
    #[error("expected {expected} cells, got {actual}")]
    CellCount { expected: usize, actual: usize },
    #[error("ascii grid rows have different lengths")]
    RaggedRows,
    #[error("unexpected glyph {0:?} in ascii grid")]
    BadGlyph(char),
    #[error("unit offset {0} must have components in -1..=1 and be nonzero")]
    BadUnitOffset(Coord),
    #[error("ray length must be at least 1")]
    ZeroLength,
    #[error("coordinate {0} is outside the map")]
    OutOfBounds(Coord),
    #[error("unknown map type {0:?}")]
    UnknownMapType(String),
    #[error("unknown dimension class {0:?}")]
    UnknownDimension(String),
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("bitmap has zero width or height")]
    EmptyBitmap,
    #[error("bitmap of {width}x{height} needs {expected} pixels, got {actual}")]
    PixelCount { width: u32, height: u32, expected: usize, actual: usize },
    #[error("layout {layout} needs {expected} tiles, got {actual}")]
    TileCount { layout: &'static str, expected: usize, actual: usize },
    #[error("tile {index} is {actual:?}, expected {expected:?}")]
    TileSize { index: usize, expected: (u32, u32), actual: (u32, u32) },
    #[error("dimension class {0} has no default scenarios")]
    NoScenarios(crate::grid::DimensionClass),
    #[error("dataset root {0} does not exist")]
    MissingRoot(PathBuf),
    #[error("malformed graymap {path}: {reason}")]
    BadGraymap { path: PathBuf, reason: String },
    #[error("failed to decode {path}: {source}")]
    Decode { path: PathBuf, source: image::ImageError },
    #[error("invalid scenario file: {0}")]
    ScenarioFile(#[from] serde_json::Error),
    #[error("scenario {direction_id} endpoint {coord} is not free on {map}")]
    BlockedEndpoint { direction_id: u8, coord: Coord, map: String },
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum KernelError {
    #[error("motion block size must be at least 1")]
    ZeroSize,
    #[error("alpha {0} is outside [0.001, 0.009]")]
    AlphaOutOfRange(f64),
    #[error("expansion node {0} is not a free cell")]
    NodeNotFree(Coord),
}

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("start {0} is not a free cell")]
    StartNotFree(Coord),
    #[error("goal {0} is not a free cell")]
    GoalNotFree(Coord),
    #[error("path segment {from} -> {to} is not axis or diagonal aligned")]
    MisalignedSegment { from: Coord, to: Coord },
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("input array is empty")]
    Empty,
    #[error("array lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("baseline sum is zero")]
    ZeroBaseline,
    #[error("reference maximum must be positive, got {0}")]
    NonPositiveMax(f64),
    #[error("group {group} is missing n={n}")]
    Incomplete { group: String, n: u32 },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("{what} {coord} lies outside the {width}x{height} map")]
    OutsideMap { what: &'static str, coord: Coord, width: u32, height: u32 },
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("no prepared maps under {0}")]
    MissingCache(PathBuf),
    #[error("dataset under {0} holds no bitmaps for the requested types")]
    EmptyDataset(PathBuf),
    #[error("{0} is not a prepared dimension")]
    NotPrepared(crate::grid::DimensionClass),
    #[error("bad record file {path}: {message}")]
    BadRecords { path: PathBuf, message: String },
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl BenchError {
    /// Input or output trouble, as opposed to bad arguments.
    pub fn is_io(&self) -> bool {
        match self {
            BenchError::Ingest(e) => !matches!(e, IngestError::BlockedEndpoint { .. } | IngestError::NoScenarios(_)),
            BenchError::MissingCache(_)
            | BenchError::EmptyDataset(_)
            | BenchError::BadRecords { .. }
            | BenchError::Csv(_)
            | BenchError::Json(_)
            | BenchError::Io(_) => true,
            BenchError::Kernel(_) | BenchError::Eval(_) | BenchError::NotPrepared(_) => false,
        }
    }
}
