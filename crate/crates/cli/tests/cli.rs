use std::process::{Command, Output};

use latvor::delone::OrbitSetReport;
use latvor::GramForm;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latvor")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn temp_file(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("latvor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn delone_tables() {
    let z2 = stdout(&["delone", "--lattice", "Zn", "--dim", "2"]);
    assert!(z2.contains("orbits 1\n") && z2.contains("covering density 1.570796\n"), "{z2}");
    let cut3 = stdout(&["delone", "--lattice", "CUT3"]);
    assert!(cut3.contains("orbits 2\n") && cut3.contains("covering density 2.094395\n"), "{cut3}");
}

#[test]
fn cover_is_a_summary() {
    let out = stdout(&["cover", "--lattice", "CUT4"]);
    assert!(out.contains("orbits 4\n") && out.contains("covering density 5.167712\n"), "{out}");
}

#[test]
fn quantize_tables() {
    let z3 = stdout(&["quantize", "--lattice", "Zn", "--dim", "3"]);
    assert!(z3.contains("G = 1/12 ~ 0.083333"), "{z3}");
    let a2 = stdout(&["quantize", "--lattice", "An", "--dim", "2"]);
    assert!(a2.contains("second moment 5/18") && a2.contains("G ~ 0.08018"), "{a2}");
}

#[test]
fn relevant_vector_counts() {
    for (name, dim, count) in [("Zn", "3", 6), ("An", "2", 6), ("Dn", "4", 24)] {
        let out = stdout(&["relvec", "--lattice", name, "--dim", dim]);
        assert!(out.starts_with(&format!("relevant vectors {count}\n")), "{out}");
        assert_eq!(out.lines().count(), count + 1);
    }
}

#[test]
fn graph_lattice_check() {
    for (text, count) in [("3 3\n1 2\n2 3\n1 3\n", 6), ("4 6\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n", 24), ("4 4\n1 2\n2 3\n3 4\n1 4\n", 14)] {
        let path = temp_file(&format!("g{count}.txt"), text);
        let out = stdout(&["graphlat", "--graph", path.to_str().unwrap()]);
        assert!(out.contains(&format!("Voronoi vertices {count}\nacyclic orientations {count}\n")), "{out}");
        assert!(out.trim_end().ends_with("PASS"));
    }
}

#[test]
fn exit_codes() {
    let bad = temp_file("bad.gram", "2\n1 x\n0 1\n");
    assert_eq!(run(&["delone", "--gram", bad.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["delone", "--gram", "/nonexistent/file"]).status.code(), Some(1));
    assert_eq!(run(&["delone", "--lattice", "Nope"]).status.code(), Some(1));
    assert_eq!(run(&["delone"]).status.code(), Some(1));
    let split = temp_file("split.txt", "4 2\n1 2\n3 4\n");
    assert_eq!(run(&["graphlat", "--graph", split.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["delone", "--lattice", "CUT4", "--orbit-cap", "3"]).status.code(), Some(2));
    assert_eq!(run(&["delone", "--lattice", "Zn", "--dim", "2"]).status.code(), Some(0));
}

#[test]
fn json_is_identical_across_thread_counts() {
    for cmd in ["delone", "quantize"] {
        let one = stdout(&[cmd, "--lattice", "CUT4", "--json", "--threads", "1", "--seed", "7"]);
        let four = stdout(&[cmd, "--lattice", "CUT4", "--json", "--threads", "4", "--seed", "7"]);
        assert_eq!(one, four, "{cmd}");
    }
}

#[test]
fn json_round_trips() {
    let text = stdout(&["delone", "--lattice", "Dn", "--dim", "4", "--json"]);
    let report: OrbitSetReport = serde_json::from_str(&text).unwrap();
    let g = GramForm::new(report.gram.clone()).unwrap();
    assert_eq!(report.orbit_count, report.cells.len());
    for c in &report.cells {
        assert!(c.cell().verify_empty_sphere(&g));
    }
    assert_eq!(serde_json::to_string_pretty(&report).unwrap(), text.trim_end());
}
