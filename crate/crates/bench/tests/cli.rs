use std::path::Path;
use std::process::{Command, Output};

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmb-bench")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(bench(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bench(&["run", "--n", "x"]).status.code(), Some(1));
    assert_eq!(bench(&["select"]).status.code(), Some(1));
    assert_eq!(bench(&["--help"]).status.code(), Some(0));
}

#[test]
fn missing_inputs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = bench(&["run", "--out-dir", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let o = bench(&["prepare", "--dataset-dir", path(&dir.path().join("none")), "--out-dir", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reference_figures_hold() {
    let o = bench(&["compare", "--fixture"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().all(|l| l.starts_with("ok\t")));

    let o = bench(&["select", "--fixture"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("optimal n = 3"));
}

#[test]
fn end_to_end_on_a_small_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let ds = dir.path().join("ds");
    let out = dir.path().join("out");
    let ok = |o: Output| {
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        stdout(&o)
    };

    ok(bench(&["synth", "--dataset-dir", path(&ds), "--count", "8", "--map-type", "forest"]));
    let counts = ok(bench(&["prepare", "--dataset-dir", path(&ds), "--out-dir", path(&out)]));
    assert_eq!(counts.lines().collect::<Vec<_>>(), ["forest\t261x261\t8", "forest\t462x261\t4", "forest\t462x462\t2"]);

    let summary = ok(bench(&[
        "run", "--out-dir", path(&out), "--dimension", "261x261", "--cap", "3", "--n", "1", "--n", "3", "--jobs", "2",
    ]));
    // header, two rmb-astar rows and one astar row
    assert_eq!(summary.lines().count(), 4);
    let results = out.join("results");
    for f in ["records.csv", "summary.csv", "sweep.csv", "meta.json"] {
        assert!(results.join(f).is_file(), "{f}");
    }

    let selected = ok(bench(&["select", "--input", path(&results.join("records.csv")), "--out-dir", path(&results)]));
    assert!(selected.contains("optimal n = "));
    assert!(results.join("ranked.csv").is_file());

    let compared = ok(bench(&["compare", "--input", path(&results.join("summary.csv")), "--format", "json"]));
    let rows: serde_json::Value = serde_json::from_str(&compared).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 3);

    let map = walk(&out.join("prepared"))
        .into_iter()
        .find(|p| p.extension().is_some_and(|e| e == "pgm"))
        .unwrap();
    let svg = dir.path().join("plan.svg");
    let line = ok(bench(&["render", "--map", path(&map), "--n", "3", "--direction", "2", "-o", path(&svg)]));
    assert!(line.starts_with("rmb-astar n=3"));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let o = bench(&["render", "--map", path(&map), "--start", "0,0", "--goal", "5,5", "-o", path(&svg)]);
    assert_eq!(o.status.code(), Some(1), "a start on the border ring is rejected");
}

fn walk(root: &Path) -> Vec<std::path::PathBuf> {
    let mut found = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap().flatten() {
            let p = e.path();
            if p.is_dir() {
                stack.push(p);
            } else {
                found.push(p);
            }
        }
    }
    found.sort();
    found
}
