//! SVG rendering of a map with a search overlaid.
//!
//! One user unit per cell. Obstacles are emitted as horizontal runs, the
//! expanded cells as a single path of crosses, so a 462x462 render stays a
//! few megabytes at most.

use std::fmt::Write;

use crate::error::RenderError;
use crate::grid::{Coord, GridMap, Occupancy};
use crate::planners::SearchResult;
use crate::scenario::Scenario;

const FREE: &str = "#ffffff";
const OBSTACLE: &str = "#000000";
const EXPANDED: &str = "#00c8ff";
const PATH: &str = "#ff0000";
const START: &str = "#00a000";
const GOAL: &str = "#0000ff";

fn check(map: &GridMap, what: &'static str, coord: Coord) -> Result<(), RenderError> {
    if map.in_bounds(coord) {
        Ok(())
    } else {
        Err(RenderError::OutsideMap { what, coord, width: map.width(), height: map.height() })
    }
}

/// Renders `map` with the expanded cells, path and endpoints of `result`.
/// Every coordinate in `result` and `scenario` has to lie on the map.
pub fn render_svg(map: &GridMap, scenario: &Scenario, result: &SearchResult) -> Result<String, RenderError> {
    check(map, "start", scenario.start)?;
    check(map, "goal", scenario.goal)?;
    for &c in &result.path {
        check(map, "path cell", c)?;
    }
    for &c in &result.expanded {
        check(map, "expanded cell", c)?;
    }

    let (w, h) = (map.width(), map.height());
    let mut s = String::new();
    // writing into a String cannot fail
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {w} {h}" shape-rendering="crispEdges">"#,
        w * 4,
        h * 4
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="{FREE}"/>"#);

    let mut runs = String::new();
    for (y, row) in map.cells().chunks(w as usize).enumerate() {
        let mut x = 0;
        while x < row.len() {
            if row[x] != Occupancy::Obstacle {
                x += 1;
                continue;
            }
            let run = row[x..].iter().take_while(|&&c| c == Occupancy::Obstacle).count();
            if !runs.is_empty() {
                runs.push(' ');
            }
            let _ = write!(runs, "M{x} {y}h{run}v1h-{run}z");
            x += run;
        }
    }
    if !runs.is_empty() {
        let _ = writeln!(s, r#"<path fill="{OBSTACLE}" d="{runs}"/>"#);
    }

    if !result.expanded.is_empty() {
        let _ = write!(s, r#"<path stroke="{EXPANDED}" stroke-width="0.15" fill="none" d=""#);
        for (i, c) in result.expanded.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let (x, y) = (c.x, c.y);
            let _ = write!(s, "M{x}.2 {y}.2L{x}.8 {y}.8M{x}.8 {y}.2L{x}.2 {y}.8");
        }
        s.push_str("\"/>\n");
    }

    if result.path.len() > 1 {
        let points: Vec<String> = result.path.iter().map(|c| format!("{}.5,{}.5", c.x, c.y)).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{PATH}" stroke-width="0.5" stroke-linejoin="round"/>"#,
            points.join(" ")
        );
    }

    let radius = (f64::from(w.min(h)) / 80.0).max(0.4);
    for (c, colour) in [(scenario.start, START), (scenario.goal, GOAL)] {
        let _ = writeln!(s, r#"<circle cx="{}.5" cy="{}.5" r="{radius:.2}" fill="{colour}"/>"#, c.x, c.y);
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planners::{Algorithm, SearchStatus};

    fn result(path: Vec<Coord>, expanded: Vec<Coord>) -> SearchResult {
        SearchResult {
            status: if path.is_empty() { SearchStatus::NotFound } else { SearchStatus::Found },
            path,
            path_cost: 0.0,
            expanded_cells: expanded.len() as u64,
            inspected_cells: 0,
            wall_time: 0.0,
            algorithm: Algorithm::Astar,
            rmb_n: 0,
            expanded,
        }
    }

    #[test]
    fn not_found_has_no_polyline() {
        let map = GridMap::from_ascii("..\n..").unwrap();
        let sc = Scenario::new(Coord::new(0, 0), Coord::new(1, 1), 0);
        let svg = render_svg(&map, &sc, &result(vec![], vec![Coord::new(0, 0)])).unwrap();
        assert!(!svg.contains("<polyline"));
        assert!(svg.contains(EXPANDED));
    }

    #[test]
    fn rejects_foreign_coordinates() {
        let map = GridMap::from_ascii("...\n...").unwrap();
        let sc = Scenario::new(Coord::new(0, 0), Coord::new(2, 1), 0);
        let err = render_svg(&map, &sc, &result(vec![Coord::new(0, 0), Coord::new(4, 0)], vec![])).unwrap_err();
        assert_eq!(err, RenderError::OutsideMap { what: "path cell", coord: Coord::new(4, 0), width: 3, height: 2 });
        let far = Scenario::new(Coord::new(0, 0), Coord::new(0, 5), 0);
        assert!(render_svg(&map, &far, &result(vec![], vec![])).is_err());
    }
}
