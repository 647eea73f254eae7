use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use proptest::prelude::*;
use rmb_core::bench::{
    cmd_prepare, cmd_run, from_csv, load_cache, read_records, run_sweep, summarize, to_csv, OutputFormat,
    RecordStatus, RunConfig, RunRecord,
};
use rmb_core::ingest::read_pgm;
use rmb_core::{synth, Algorithm, Coord, DimensionClass, MapType, Occupancy};
use walkdir::WalkDir;

fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    WalkDir::new(root)
        .sort_by_file_name()
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .map(|e| (e.path().strip_prefix(root).unwrap().display().to_string(), fs::read(e.path()).unwrap()))
        .collect()
}

fn config(root: &Path) -> RunConfig {
    RunConfig {
        dataset_dir: root.join("dataset"),
        out_dir: root.join("out"),
        map_types: vec![MapType::Forest, MapType::AlternatingGaps],
        ..RunConfig::default()
    }
}

#[test]
fn prepare_is_proportional_and_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    synth::write_dataset(&cfg.dataset_dir, &[MapType::Forest, MapType::AlternatingGaps], 9, 3).unwrap();

    let plan = cmd_prepare(&RunConfig { cap: Some(8), ..cfg.clone() }).unwrap();
    let counts = plan.counts();
    for t in [MapType::Forest, MapType::AlternatingGaps] {
        let got: Vec<usize> = DimensionClass::PREPARED.iter().map(|d| counts[&(t, *d)]).collect();
        assert_eq!(got, vec![8, 4, 2]);
    }
    let first = snapshot(&cfg.out_dir);
    assert!(first.keys().all(|k| !k.ends_with(".part")));
    cmd_prepare(&RunConfig { cap: Some(8), jobs: Some(1), ..cfg.clone() }).unwrap();
    assert_eq!(first, snapshot(&cfg.out_dir));

    for m in load_cache(&cfg.out_dir, &[MapType::Forest], &DimensionClass::PREPARED).unwrap() {
        let map = read_pgm(&m.path).unwrap();
        let (w, h) = m.dimension.size().unwrap();
        assert_eq!((map.width(), map.height()), (w, h));
        let (w, h) = (w as i32, h as i32);
        for c in [Coord::new(0, 0), Coord::new(w - 1, 0), Coord::new(0, h - 1), Coord::new(w - 1, h - 1)] {
            assert_eq!(map.cells()[map.index(c).unwrap()], Occupancy::Obstacle);
        }
        assert!(map.is_free(Coord::new(15, 15)) && map.is_free(Coord::new(w - 16, h - 16)));
    }
}

#[test]
fn missing_inputs_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    assert!(cmd_prepare(&cfg).unwrap_err().is_io());
    assert!(cmd_run(&cfg, OutputFormat::Csv).unwrap_err().is_io());
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        dimensions: vec![DimensionClass::D261x261],
        algorithms: vec![Algorithm::RmbAstar, Algorithm::Astar],
        n_values: vec![1, 3],
        ..config(dir.path())
    };
    synth::write_dataset(&cfg.dataset_dir, &cfg.map_types, 3, 1).unwrap();
    cmd_prepare(&cfg).unwrap();

    let maps = load_cache(&cfg.out_dir, &cfg.map_types, &cfg.dimensions).unwrap();
    let serial = run_sweep(&maps, &RunConfig { jobs: Some(1), ..cfg.clone() }).unwrap();
    let parallel = run_sweep(&maps, &RunConfig { jobs: Some(4), ..cfg.clone() }).unwrap();
    // 6 maps x (2 n values + A*)
    assert_eq!(serial.len(), 18);
    let strip = |rs: &[RunRecord]| rs.iter().map(RunRecord::without_time).collect::<Vec<_>>();
    assert_eq!(strip(&serial), strip(&parallel));
    assert!(serial.iter().all(|r| r.status == RecordStatus::Found));
    let dirs: Vec<u8> = serial.iter().filter(|r| r.algorithm == Algorithm::Astar).map(|r| r.direction_id).collect();
    assert_eq!(dirs, vec![1, 2, 3, 1, 2, 3]);

    let out = cmd_run(&cfg, OutputFormat::Csv).unwrap();
    assert_eq!(out.summary.len(), 2 * 3);
    let again = read_records(&cfg.out_dir.join("results/records.csv")).unwrap();
    assert_eq!(strip(&again), strip(&serial));
    assert_eq!(summarize(&again).len(), out.summary.len());
    let sweep = fs::read_to_string(cfg.out_dir.join("results/sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 1 + 2 * 3);

    cmd_run(&cfg, OutputFormat::Json).unwrap();
    let json = read_records(&cfg.out_dir.join("results/records.json")).unwrap();
    assert_eq!(strip(&json), strip(&serial));
}

fn any_record() -> impl Strategy<Value = RunRecord> {
    (
        "[a-z0-9_]{1,12}",
        0usize..5,
        0usize..3,
        1u8..=4,
        prop::array::uniform4(-5i32..500),
        0usize..5,
        0u32..7,
        0usize..3,
        (0.0f64..1e4, 0usize..100, 0u64..1_000_000, 0u64..1_000_000, 0.0f64..100.0),
        "[ -~]{0,20}",
    )
        .prop_map(|(map_id, t, d, direction_id, xy, a, rmb_n, s, (cost, nodes, exp, insp, time), error)| RunRecord {
            map_id,
            map_type: MapType::ALL[t],
            dimension: DimensionClass::PREPARED[d],
            direction_id,
            start_x: xy[0],
            start_y: xy[1],
            goal_x: xy[2],
            goal_y: xy[3],
            algorithm: Algorithm::ALL[a],
            rmb_n,
            status: [RecordStatus::Found, RecordStatus::NotFound, RecordStatus::Failed][s],
            path_cost: cost,
            path_nodes: nodes,
            expanded_cells: exp,
            inspected_cells: insp,
            wall_time: time,
            error,
        })
}

proptest! {
    #[test]
    fn records_round_trip_through_csv(records in prop::collection::vec(any_record(), 0..8)) {
        let text = to_csv(&records).unwrap();
        let back: Vec<RunRecord> = from_csv(&text).unwrap();
        prop_assert_eq!(back, records);
    }
}
