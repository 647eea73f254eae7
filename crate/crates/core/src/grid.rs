//! Occupancy-grid primitives.
//!
//! Maps use the image convention: `x` grows to the right, `y` grows
//! downward, and cells are stored row-major, so a prepared map lines up
//! pixel-for-pixel with the bitmap it was decoded from.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::GridError;

/// Integer cell coordinate. Negative values are legal and simply fall
/// outside every map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Coord {
    pub x: i32,
    pub y: i32,
}

impl Coord {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    /// `max(|dx|, |dy|)`.
    pub fn chebyshev(self, other: Coord) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

impl From<(i32, i32)> for Coord {
    fn from((x, y): (i32, i32)) -> Self {
        Self::new(x, y)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Straight-line distance in cell units. The squared sum is exact for
/// offsets below 2^26, so the result is correctly rounded.
pub fn euclidean(p: Coord, q: Coord) -> f64 {
    let dx = f64::from(q.x - p.x);
    let dy = f64::from(q.y - p.y);
    (dx * dx + dy * dy).sqrt()
}

/// Occupancy of a stored cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Occupancy {
    Free,
    Obstacle,
}

/// Result of probing a coordinate against a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellState {
    Free,
    Obstacle,
    OutOfBounds,
}

impl CellState {
    pub fn is_free(self) -> bool {
        self == CellState::Free
    }
}

/// The five planning environments used for benchmarking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapType {
    AlternatingGaps,
    Forest,
    BugtrapForest,
    GapsAndForest,
    Mazes,
}

impl MapType {
    pub const ALL: [MapType; 5] = [
        MapType::AlternatingGaps,
        MapType::Forest,
        MapType::BugtrapForest,
        MapType::GapsAndForest,
        MapType::Mazes,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MapType::AlternatingGaps => "alternating_gaps",
            MapType::Forest => "forest",
            MapType::BugtrapForest => "bugtrap_forest",
            MapType::GapsAndForest => "gaps_and_forest",
            MapType::Mazes => "mazes",
        }
    }
}

impl fmt::Display for MapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MapType {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MapType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| GridError::UnknownMapType(s.to_string()))
    }
}

/// Prepared map size classes. `Raw` is anything that did not go through
/// the stitch-and-border pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DimensionClass {
    #[serde(rename = "261x261")]
    D261x261,
    #[serde(rename = "462x261")]
    D462x261,
    #[serde(rename = "462x462")]
    D462x462,
    #[serde(rename = "raw")]
    Raw,
}

impl DimensionClass {
    pub const PREPARED: [DimensionClass; 3] = [
        DimensionClass::D261x261,
        DimensionClass::D462x261,
        DimensionClass::D462x462,
    ];

    /// `(width, height)` of the class, `None` for raw maps.
    pub fn size(self) -> Option<(u32, u32)> {
        match self {
            DimensionClass::D261x261 => Some((261, 261)),
            DimensionClass::D462x261 => Some((462, 261)),
            DimensionClass::D462x462 => Some((462, 462)),
            DimensionClass::Raw => None,
        }
    }

    pub fn from_size(width: u32, height: u32) -> Self {
        match (width, height) {
            (261, 261) => DimensionClass::D261x261,
            (462, 261) => DimensionClass::D462x261,
            (462, 462) => DimensionClass::D462x462,
            _ => DimensionClass::Raw,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DimensionClass::D261x261 => "261x261",
            DimensionClass::D462x261 => "462x261",
            DimensionClass::D462x462 => "462x462",
            DimensionClass::Raw => "raw",
        }
    }
}

impl fmt::Display for DimensionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DimensionClass {
    type Err = GridError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "261x261" | "261" => Ok(DimensionClass::D261x261),
            "462x261" => Ok(DimensionClass::D462x261),
            "462x462" | "462" => Ok(DimensionClass::D462x462),
            "raw" => Ok(DimensionClass::Raw),
            other => Err(GridError::UnknownDimension(other.to_string())),
        }
    }
}

/// Immutable binary occupancy grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: u32,
    height: u32,
    cells: Vec<Occupancy>,
    map_type: Option<MapType>,
    dimension: DimensionClass,
    source_id: String,
}

impl GridMap {
    pub fn new(width: u32, height: u32, cells: Vec<Occupancy>) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::Empty);
        }
        if width > i32::MAX as u32 || height > i32::MAX as u32 {
            return Err(GridError::TooLarge { width, height });
        }
        let expected = width as usize * height as usize;
        if cells.len() != expected {
            return Err(GridError::CellCount { expected, actual: cells.len() });
        }
        Ok(Self {
            width,
            height,
            cells,
            map_type: None,
            dimension: DimensionClass::from_size(width, height),
            source_id: String::new(),
        })
    }

    /// An obstacle-free map.
    pub fn empty(width: u32, height: u32) -> Result<Self, GridError> {
        Self::new(width, height, vec![Occupancy::Free; width as usize * height as usize])
    }

    /// Parses rows of `.` (free) and `#` (obstacle). Whitespace-only lines
    /// are skipped so the input can be written as an indented literal.
    pub fn from_ascii(text: &str) -> Result<Self, GridError> {
        let rows: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let height = rows.len() as u32;
        let width = rows.first().map_or(0, |r| r.chars().count()) as u32;
        let mut cells = Vec::with_capacity(width as usize * height as usize);
        for row in &rows {
            if row.chars().count() as u32 != width {
                return Err(GridError::RaggedRows);
            }
            for ch in row.chars() {
                cells.push(match ch {
                    '#' => Occupancy::Obstacle,
                    '.' => Occupancy::Free,
                    other => return Err(GridError::BadGlyph(other)),
                });
            }
        }
        Self::new(width, height, cells)
    }

    pub fn with_metadata(
        mut self,
        map_type: Option<MapType>,
        dimension: DimensionClass,
        source_id: impl Into<String>,
    ) -> Self {
        self.map_type = map_type;
        self.dimension = dimension;
        self.source_id = source_id.into();
        self
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn map_type(&self) -> Option<MapType> {
        self.map_type
    }

    pub fn dimension(&self) -> DimensionClass {
        self.dimension
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn cells(&self) -> &[Occupancy] {
        &self.cells
    }

    pub fn in_bounds(&self, c: Coord) -> bool {
        c.x >= 0 && c.y >= 0 && (c.x as u32) < self.width && (c.y as u32) < self.height
    }

    /// Row-major index of an in-bounds coordinate.
    pub fn index(&self, c: Coord) -> Option<usize> {
        self.in_bounds(c)
            .then(|| c.y as usize * self.width as usize + c.x as usize)
    }

    pub fn coord_of(&self, index: usize) -> Coord {
        let w = self.width as usize;
        Coord::new((index % w) as i32, (index / w) as i32)
    }

    pub fn cell_state(&self, c: Coord) -> CellState {
        match self.index(c) {
            None => CellState::OutOfBounds,
            Some(i) => match self.cells[i] {
                Occupancy::Free => CellState::Free,
                Occupancy::Obstacle => CellState::Obstacle,
            },
        }
    }

    pub fn is_free(&self, c: Coord) -> bool {
        self.cell_state(c).is_free()
    }

    pub fn obstacle_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == Occupancy::Obstacle).count()
    }

    /// Copy of the map with one cell changed.
    pub fn with_cell(&self, c: Coord, occupancy: Occupancy) -> Result<Self, GridError> {
        let i = self.index(c).ok_or(GridError::OutOfBounds(c))?;
        let mut out = self.clone();
        out.cells[i] = occupancy;
        Ok(out)
    }
}

/// Cells `origin + k * unit` for `k = 1..=n`.
pub fn ray_cells(origin: Coord, unit: Coord, n: u32) -> Result<Vec<Coord>, GridError> {
    check_unit(unit)?;
    if n == 0 {
        return Err(GridError::ZeroLength);
    }
    Ok(RayIter::new(origin, unit, n).collect())
}

pub(crate) fn check_unit(unit: Coord) -> Result<(), GridError> {
    let ok = (-1..=1).contains(&unit.x) && (-1..=1).contains(&unit.y) && unit != Coord::default();
    if ok {
        Ok(())
    } else {
        Err(GridError::BadUnitOffset(unit))
    }
}

/// Allocation-free form of [`ray_cells`] used on the search hot path.
#[derive(Debug, Clone)]
pub(crate) struct RayIter {
    next: Coord,
    unit: Coord,
    remaining: u32,
}

impl RayIter {
    pub(crate) fn new(origin: Coord, unit: Coord, n: u32) -> Self {
        Self { next: origin.offset(unit.x, unit.y), unit, remaining: n }
    }
}

impl Iterator for RayIter {
    type Item = Coord;

    fn next(&mut self) -> Option<Coord> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let c = self.next;
        self.next = c.offset(self.unit.x, self.unit.y);
        Some(c)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl ExactSizeIterator for RayIter {}
