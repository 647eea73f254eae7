use std::path::PathBuf;

use rmb_core::render::render_svg;
use rmb_core::{astar_conventional, Algorithm, Coord, GridMap, RenderError, Scenario, SearchResult, SearchStatus};

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn five_by_five_two_segment_path() {
    let map = GridMap::empty(5, 5).unwrap();
    let sc = Scenario::new(Coord::new(0, 0), Coord::new(4, 2), 1);
    let path = vec![Coord::new(0, 0), Coord::new(2, 2), Coord::new(4, 2)];
    let result = SearchResult {
        status: SearchStatus::Found,
        path,
        path_cost: 2.0 * std::f64::consts::SQRT_2 + 2.0,
        expanded_cells: 3,
        inspected_cells: 12,
        wall_time: 0.0,
        algorithm: Algorithm::RmbAstar,
        rmb_n: 2,
        expanded: vec![Coord::new(0, 0), Coord::new(2, 2), Coord::new(4, 2)],
    };
    let svg = render_svg(&map, &sc, &result).unwrap();
    let path = golden("empty_5x5.svg");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &svg).unwrap();
    }
    assert_eq!(svg, std::fs::read_to_string(path).unwrap());
}

#[test]
fn prepared_frame_is_drawn() {
    let map = GridMap::from_ascii("#####\n#...#\n#####").unwrap();
    let sc = Scenario::new(Coord::new(1, 1), Coord::new(3, 1), 1);
    let r = astar_conventional(&map, &sc).unwrap();
    let svg = render_svg(&map, &sc, &r).unwrap();
    assert!(svg.contains("M0 0h5v1h-5z M0 1h1v1h-1z M4 1h1v1h-1z M0 2h5v1h-5z"), "{svg}");
    assert!(svg.contains("<polyline points=\"1.5,1.5 2.5,1.5 3.5,1.5\""));
}

#[test]
fn result_from_another_map_is_rejected() {
    let big = GridMap::empty(8, 8).unwrap();
    let small = GridMap::empty(4, 4).unwrap();
    let sc = Scenario::new(Coord::new(0, 0), Coord::new(7, 7), 1);
    let r = astar_conventional(&big, &sc).unwrap();
    let inside = Scenario::new(Coord::new(0, 0), Coord::new(3, 3), 1);
    assert!(matches!(render_svg(&small, &inside, &r), Err(RenderError::OutsideMap { .. })));
    assert!(matches!(render_svg(&small, &sc, &r), Err(RenderError::OutsideMap { what: "goal", .. })));
}
