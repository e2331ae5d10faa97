//! End-to-end checks of the binary: exit codes, file round-trips, JSON
//! determinism, and the environment override for the state cap.

use std::path::PathBuf;
use std::process::{Command, Output};

use kga::format;
use kgraph::constructions;

fn kga() -> Command {
    Command::new(env!("CARGO_BIN_EXE_kga"))
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("kga-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    kga().args(args).output().expect("binary runs")
}

#[test]
fn fixture_files_round_trip() {
    for name in constructions::fixture_names() {
        let file = tmp(&format!("{name}.kg"));
        let out = run(&["build", "fixture", name, "-o", file.to_str().unwrap()]);
        assert!(out.status.success(), "{name}");
        let text = std::fs::read_to_string(&file).unwrap();
        let parsed = format::parse(&text).unwrap();
        assert_eq!(parsed, constructions::fixture(name).unwrap(), "{name}");
        // Printing the parsed skeleton reproduces the file bytes.
        assert_eq!(format::print(&parsed), text, "{name}");
    }
}

#[test]
fn exit_codes() {
    // 0: accepted input.
    let good = tmp("good.kg");
    std::fs::write(&good, "rank 1\nvertex v\nedge a 1 v v\n").unwrap();
    assert_eq!(run(&["validate", good.to_str().unwrap()]).status.code(), Some(0));

    // 1: parse error.
    let garbage = tmp("garbage.kg");
    std::fs::write(&garbage, "rank 1\nvertex v\nnonsense line\n").unwrap();
    assert_eq!(run(&["validate", garbage.to_str().unwrap()]).status.code(), Some(1));

    // 1: missing file.
    assert_eq!(run(&["validate", "/nonexistent/x.kg"]).status.code(), Some(1));

    // 2: validation failure with the duplicate-square diagnostic.
    let broken = tmp("broken.kg");
    std::fs::write(
        &broken,
        "rank 2\nvertex v\nedge e1 1 v v\nedge e2 1 v v\nedge f1 2 v v\n\
         square e1 f1 = f1 e1\nsquare e2 f1 = f1 e1\n",
    )
    .unwrap();
    let out = run(&["validate", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("duplicate square on target word: f1 e1"), "{text}");

    // 3: state cap exceeded, via the environment override.
    let torus = tmp("torus.kg");
    assert!(run(&["build", "fixture", "torus-2", "-o", torus.to_str().unwrap()])
        .status
        .success());
    let out = kga()
        .args(["analyze", torus.to_str().unwrap()])
        .env("KGA_MAX_STATES", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_reports_are_deterministic() {
    let feeder = tmp("feeder.kg");
    assert!(run(&["build", "fixture", "torus-feeder", "-o", feeder.to_str().unwrap()])
        .status
        .success());
    let ladder = tmp("ladder.kg");
    assert!(run(&["build", "fixture", "ladder-capped-4", "-o", ladder.to_str().unwrap()])
        .status
        .success());
    // The structure command needs a locally convex input; the feeder is not.
    let cases = [
        ("analyze", &feeder),
        ("classify", &feeder),
        ("structure", &ladder),
        ("trace", &feeder),
        ("ktheory", &feeder),
        ("sweep", &feeder),
    ];
    for (cmd, file) in cases {
        let one = run(&[cmd, file.to_str().unwrap(), "--json"]);
        let two = run(&[cmd, file.to_str().unwrap(), "--json"]);
        assert!(one.status.success(), "{cmd}");
        assert_eq!(one.stdout, two.stdout, "{cmd} not deterministic");
        // And it really is JSON with the fixed envelope keys.
        let value: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
        for key in ["graph", "checks", "certificates", "bounds", "version"] {
            assert!(value.get(key).is_some(), "{cmd} missing {key}");
        }
    }
}

#[test]
fn classify_pipeline_on_grid_fixture() {
    let file = tmp("omega.kg");
    assert!(run(&["build", "fixture", "omega-2-1-1", "-o", file.to_str().unwrap()])
        .status
        .success());
    let out = run(&["classify", file.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("status: AF"));
    assert!(text.contains("M_4"));
}

#[test]
fn sweep_reports_the_feeder_hit() {
    let file = tmp("feeder2.kg");
    assert!(run(&["build", "fixture", "torus-feeder", "-o", file.to_str().unwrap()])
        .status
        .success());
    let out = run(&["sweep", file.to_str().unwrap(), "--max-degree", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("H = {u}: (alpha, beta)"), "{text}");
}

#[test]
fn dot_export_writes_a_digraph() {
    let file = tmp("torus3.kg");
    assert!(run(&["build", "fixture", "torus-2", "-o", file.to_str().unwrap()])
        .status
        .success());
    let out_path = tmp("torus.dot");
    let out = run(&[
        "export-dot",
        file.to_str().unwrap(),
        "-o",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let dot = std::fs::read_to_string(&out_path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("label=\"a\""));
}

#[test]
fn reported_certificates_reverify() {
    let file = tmp("torus-rv.kg");
    assert!(run(&["build", "fixture", "torus-2", "-o", file.to_str().unwrap()])
        .status
        .success());
    let out = run(&["classify", file.to_str().unwrap(), "--json", "--max-degree", "1"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sk = constructions::fixture("torus-2").unwrap();
    let mut gen_cycles = 0;
    for cert in value["certificates"].as_array().unwrap() {
        if cert["kind"] == "generalised-cycle" {
            gen_cycles += 1;
            let path_of = |v: &serde_json::Value| -> kgraph::Path {
                let edges: Vec<String> = v["edges"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| e.as_str().unwrap().to_string())
                    .collect();
                if edges.is_empty() {
                    kgraph::Path::vertex(&sk, sk.vertex(v["range"].as_str().unwrap()).unwrap())
                } else {
                    let word: Vec<_> = edges.iter().map(|n| sk.edge(n).unwrap()).collect();
                    kgraph::paths::normalize(&sk, &word).unwrap()
                }
            };
            let mu = path_of(&cert["mu"]);
            let nu = path_of(&cert["nu"]);
            assert!(kgraph::cycles::is_generalised_cycle(&sk, &mu, &nu).unwrap());
        }
    }
    assert!(gen_cycles > 0);
}
