//! Start/goal pairs and their default placement on prepared maps.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::IngestError;
use crate::grid::{Coord, DimensionClass, GridMap};

/// Distance of default endpoints from the map edge. Lands inside the free
/// ring that preparation paints around every map.
pub const DEFAULT_INSET: i32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub start: Coord,
    pub goal: Coord,
    /// 1..=4
    pub direction_id: u8,
}

impl Scenario {
    pub fn new(start: Coord, goal: Coord, direction_id: u8) -> Self {
        Self { start, goal, direction_id }
    }

    /// Checks the scenario against a concrete map: distinct endpoints, both
    /// free.
    pub fn bind(&self, map: &GridMap) -> Result<(), IngestError> {
        for c in [self.start, self.goal] {
            if !map.is_free(c) {
                return Err(IngestError::BlockedEndpoint {
                    direction_id: self.direction_id,
                    coord: c,
                    map: map.source_id().to_string(),
                });
            }
        }
        if self.start == self.goal {
            return Err(IngestError::BlockedEndpoint {
                direction_id: self.direction_id,
                coord: self.start,
                map: format!("{} (start equals goal)", map.source_id()),
            });
        }
        Ok(())
    }
}

/// The four opposite-corner scenarios for a prepared dimension class.
pub fn generate_scenarios(dimension: DimensionClass) -> Result<Vec<Scenario>, IngestError> {
    let (w, h) = dimension.size().ok_or(IngestError::NoScenarios(dimension))?;
    Ok(corner_scenarios(w as i32, h as i32, DEFAULT_INSET))
}

/// Corner-to-corner pairs at `inset` from each edge, in direction order
/// top-left, top-right, bottom-left, bottom-right as start.
pub fn corner_scenarios(width: i32, height: i32, inset: i32) -> Vec<Scenario> {
    let (lo_x, hi_x) = (inset, width - 1 - inset);
    let (lo_y, hi_y) = (inset, height - 1 - inset);
    vec![
        Scenario::new(Coord::new(lo_x, lo_y), Coord::new(hi_x, hi_y), 1),
        Scenario::new(Coord::new(hi_x, lo_y), Coord::new(lo_x, hi_y), 2),
        Scenario::new(Coord::new(lo_x, hi_y), Coord::new(hi_x, lo_y), 3),
        Scenario::new(Coord::new(hi_x, hi_y), Coord::new(lo_x, lo_y), 4),
    ]
}

/// Maps allotted to each direction when a full prepared set is split
/// evenly across the four scenarios.
pub fn maps_per_direction(dimension: DimensionClass) -> Option<usize> {
    match dimension {
        DimensionClass::D261x261 => Some(200),
        DimensionClass::D462x261 => Some(100),
        DimensionClass::D462x462 => Some(50),
        DimensionClass::Raw => None,
    }
}

/// One entry of a scenario override file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioOverride {
    pub dimension_class: DimensionClass,
    pub direction_id: u8,
    pub start: [i32; 2],
    pub goal: [i32; 2],
}

/// Scenario sets per dimension class, defaults unless overridden.
#[derive(Debug, Clone, Default)]
pub struct ScenarioTable {
    overrides: Vec<ScenarioOverride>,
}

impl ScenarioTable {
    pub fn from_json(text: &str) -> Result<Self, IngestError> {
        let overrides: Vec<ScenarioOverride> = serde_json::from_str(text)?;
        Ok(Self { overrides })
    }

    pub fn load(path: &Path) -> Result<Self, IngestError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn for_dimension(&self, dimension: DimensionClass) -> Result<Vec<Scenario>, IngestError> {
        let mut out = generate_scenarios(dimension)?;
        for o in self.overrides.iter().filter(|o| o.dimension_class == dimension) {
            let s = Scenario::new(o.start.into(), o.goal.into(), o.direction_id);
            match out.iter_mut().find(|d| d.direction_id == o.direction_id) {
                Some(slot) => *slot = s,
                None => out.push(s),
            }
        }
        Ok(out)
    }
}

impl From<[i32; 2]> for Coord {
    fn from([x, y]: [i32; 2]) -> Self {
        Coord::new(x, y)
    }
}
