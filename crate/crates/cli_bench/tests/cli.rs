use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_spanner-forge");

fn forge(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not json ({e}): {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write(name: &str, text: &str) -> PathBuf {
    let p = scratch(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Independent shortest-path distances by repeated relaxation.
fn bellman_ford(n: usize, edges: &[(usize, usize, f64)], src: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; n];
    d[src] = 0.0;
    for _ in 0..n {
        for &(u, v, w) in edges {
            if d[u] + w < d[v] {
                d[v] = d[u] + w;
            }
            if d[v] + w < d[u] {
                d[u] = d[v] + w;
            }
        }
    }
    d
}

fn edge_list(v: &Value) -> Vec<(usize, usize, f64)> {
    v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_u64().unwrap() as usize, e[1].as_u64().unwrap() as usize, e[2].as_f64().unwrap()))
        .collect()
}

#[test]
fn gen_grid_three_by_three() {
    let out = forge(&["gen", "--family", "grid", "--rows", "3", "--cols", "3"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["vertices"], 9);
    assert_eq!(v["edges"].as_array().unwrap().len(), 12);
    assert_eq!(v["schema"], 1);
}

#[test]
fn gen_tree_is_acyclic() {
    let out = forge(&["gen", "--family", "tree", "-n", "10", "--seed", "4"]);
    let v = stdout_json(&out);
    let edges = edge_list(&v);
    assert_eq!(edges.len(), 9);
    let mut parent: Vec<usize> = (0..10).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    for (u, v, _) in edges {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        assert_ne!(a, b, "cycle through ({u}, {v})");
        parent[a] = b;
    }
}

#[test]
fn same_seed_same_bytes() {
    for family in ["grid", "random-geometric", "tree", "euclidean-points", "doubling-grid", "path-plus-clique"] {
        let args = ["gen", "--family", family, "--seed", "17", "--lo", "1", "--hi", "2"];
        let a = forge(&args);
        let b = forge(&args);
        assert!(a.status.success(), "{family}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{family}");
        let c = forge(&["gen", "--family", family, "--seed", "18", "--lo", "1", "--hi", "2"]);
        if family != "doubling-grid" && family != "path-plus-clique" {
            assert_ne!(a.stdout, c.stdout, "{family} ignores the seed");
        }
    }
}

#[test]
fn gen_formats() {
    let dot = forge(&["gen", "--rows", "2", "--cols", "2", "--format", "dot"]);
    assert!(String::from_utf8(dot.stdout).unwrap().contains("graph"));
    let csv = String::from_utf8(forge(&["gen", "--rows", "2", "--cols", "2", "--format", "csv"]).stdout).unwrap();
    assert_eq!(csv.lines().count(), 5);
    assert_eq!(csv.lines().next(), Some("u,v,w"));
}

#[test]
fn verify_graph_against_itself() {
    let g = scratch("self.json");
    assert!(forge(&["gen", "--family", "random-geometric", "-n", "25", "--seed", "3", "--out", s(&g)]).status.success());
    let out = forge(&["verify", "--graph", s(&g), "--spanner", s(&g), "--bound", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["max_stretch"], 1.0);
    assert_eq!(v["violations"], 0);
}

#[test]
fn verify_reports_violations_with_exit_one() {
    let g = write("square.json", r#"{"vertices":4,"edges":[[0,1,1],[1,2,1],[2,3,1],[3,0,1]],"terminals":[0,1,2,3]}"#);
    let path = write("path.json", r#"{"vertices":4,"edges":[[0,1,1],[1,2,1],[2,3,1]]}"#);
    let out = forge(&["verify", "--graph", s(&g), "--spanner", s(&path), "--bound", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["max_stretch"], 3.0);
    assert_eq!(v["violations"], 1);
    assert_eq!(forge(&["verify", "--graph", s(&g), "--spanner", s(&path), "--bound", "3"]).status.code(), Some(0));
}

#[test]
fn tsp_on_triangle() {
    let g = write("triangle.json", r#"{"vertices":3,"edges":[[0,1,1],[1,2,1],[0,2,1]],"terminals":[0,1,2]}"#);
    let out = forge(&["tsp", "--graph", s(&g)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["weight"], 3.0);
    let td = write("triangle.td", "s td 1 3 3\nb 1 1 2 3\n");
    let out = forge(&["tsp", "--graph", s(&g), "--td", s(&td)]);
    assert_eq!(stdout_json(&out)["weight"], 3.0);
}

#[test]
fn tsp_rejects_invalid_decomposition() {
    let g = write("triangle2.json", r#"{"vertices":3,"edges":[[0,1,1],[1,2,1],[0,2,1]],"terminals":[0,1,2]}"#);
    let td = write("bad.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    assert_eq!(forge(&["tsp", "--graph", s(&g), "--td", s(&td)]).status.code(), Some(3));
}

#[test]
fn spanner_then_verify_on_twenty_seeds() {
    let families = ["grid", "random-geometric", "tree", "euclidean-points"];
    for seed in 0..20u64 {
        let family = families[seed as usize % families.len()];
        let seed_s = seed.to_string();
        let g = scratch(&format!("inst{seed}.json"));
        let sp = scratch(&format!("span{seed}.json"));
        let gen = forge(&[
            "gen", "--family", family, "--seed", &seed_s, "-n", "40", "--lo", "1", "--hi", "3", "-k", "10", "--out", s(&g),
        ]);
        assert!(gen.status.success(), "{}", String::from_utf8_lossy(&gen.stderr));
        let oracle = if family == "euclidean-points" { "euclidean" } else { "doubling" };
        let build = forge(&["spanner", "--graph", s(&g), "--eps", "0.02", "--oracle", oracle, "--out", s(&sp)]);
        assert_eq!(build.status.code(), Some(0), "{}", String::from_utf8_lossy(&build.stderr));
        let ver = forge(&["verify", "--graph", s(&g), "--spanner", s(&sp), "--eps", "0.02"]);
        assert_eq!(ver.status.code(), Some(0), "seed {seed}");

        // Recompute the stretch from the written files with an independent oracle.
        let gv: Value = serde_json::from_str(&fs::read_to_string(&g).unwrap()).unwrap();
        let sv: Value = serde_json::from_str(&fs::read_to_string(&sp).unwrap()).unwrap();
        let n = gv["vertices"].as_u64().unwrap() as usize;
        let (ge, se) = (edge_list(&gv), edge_list(&sv));
        let terms: Vec<usize> = gv["terminals"].as_array().unwrap().iter().map(|t| t.as_u64().unwrap() as usize).collect();
        let bound = 1.0 + 465.0 * 0.02;
        for &a in &terms {
            let (dg, ds) = (bellman_ford(n, &ge, a), bellman_ford(n, &se, a));
            for &b in &terms {
                assert!(ds[b] <= bound * dg[b] * (1.0 + 1e-9) + 1e-9, "seed {seed}: ({a}, {b})");
            }
        }

        let again = scratch(&format!("span{seed}b.json"));
        forge(&["--sequential", "spanner", "--graph", s(&g), "--eps", "0.02", "--oracle", oracle, "--out", s(&again)]);
        assert_eq!(fs::read(&sp).unwrap(), fs::read(&again).unwrap(), "seed {seed}: output not stable");
    }
}

#[test]
fn golden_reports_match() {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let inst = forge(&["gen", "--family", "grid", "--rows", "4", "--cols", "4", "--lo", "1", "--hi", "2", "--seed", "11", "-k", "6"]);
    assert_eq!(String::from_utf8(inst.stdout.clone()).unwrap(), fs::read_to_string(golden.join("grid4.json")).unwrap());
    let g = write("grid4.json", std::str::from_utf8(&inst.stdout).unwrap());
    let sp = forge(&["spanner", "--graph", s(&g), "--eps", "0.03"]);
    assert_eq!(String::from_utf8(sp.stdout).unwrap(), fs::read_to_string(golden.join("grid4_spanner.json")).unwrap());
}

#[test]
fn every_oracle_answers_a_query() {
    let g = scratch("orc.json");
    forge(&["gen", "--family", "euclidean-points", "-n", "15", "--seed", "2", "-k", "8", "--out", s(&g)]);
    for oracle in ["euclidean", "doubling", "correlation", "minor", "separator"] {
        let out = forge(&["oracle", "--graph", s(&g), "--oracle", oracle, "--eps", "0.2"]);
        assert_eq!(out.status.code(), Some(0), "{oracle}: {}", String::from_utf8_lossy(&out.stderr));
        let v = stdout_json(&out);
        assert_eq!(v["violations"], 0, "{oracle}");
        assert_eq!(v["eq3"], true);
    }
}

#[test]
fn ptas_report_fields() {
    let g = scratch("ptas.json");
    forge(&["gen", "--rows", "3", "--cols", "4", "--lo", "1", "--hi", "2", "--seed", "5", "-k", "5", "--out", s(&g)]);
    for p in ["bfs", "greedy"] {
        let out = forge(&["ptas", "--graph", s(&g), "--partitioner", p]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v = stdout_json(&out);
        for key in ["spanner_lightness", "g", "w_x", "measured_width", "tour_weight", "lower_bound", "ratio"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert!(v["ratio"].as_f64().unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn batch_keeps_instance_order() {
    let out = forge(&["batch", "--family", "tree", "-n", "30", "--count", "6", "--seed", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let seeds: Vec<u64> = v["instances"].as_array().unwrap().iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, (100..106).collect::<Vec<_>>());
    let seq = forge(&["--sequential", "batch", "--family", "tree", "-n", "30", "--count", "6", "--seed", "100"]);
    assert_eq!(out.stdout, seq.stdout);
    let one = Command::new(BIN)
        .args(["batch", "--family", "tree", "-n", "30", "--count", "6", "--seed", "100"])
        .env("SPANNER_FORGE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.stdout, one.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(forge(&["--no-such-flag"]).status.code(), Some(2));
    assert_eq!(forge(&["spanner"]).status.code(), Some(2));
    assert_eq!(forge(&["gen", "--family", "hexagon"]).status.code(), Some(2));
    assert_eq!(forge(&["gen", "--rows", "0"]).status.code(), Some(2));
    assert_eq!(forge(&["gen", "--lo", "2", "--hi", "1"]).status.code(), Some(2));
    let bad = Command::new(BIN).args(["gen"]).env("SPANNER_FORGE_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let usage = forge(&["--no-such-flag"]);
    assert!(String::from_utf8_lossy(&usage.stderr).contains("Usage"));
}

#[test]
fn malformed_inputs_never_panic() {
    let cases = [
        ("trunc.json", "{\"vertices\": 3, \"edges\": [[0,1"),
        ("range.json", r#"{"vertices":2,"edges":[[0,5,1]],"terminals":[0]}"#),
        ("negw.json", r#"{"vertices":2,"edges":[[0,1,-1]],"terminals":[0,1]}"#),
        ("term.json", r#"{"vertices":2,"edges":[[0,1,1]],"terminals":[7]}"#),
        ("noterm.json", r#"{"vertices":2,"edges":[[0,1,1]]}"#),
        ("points.json", r#"{"vertices":2,"edges":[[0,1,1]],"terminals":[0,1],"points":[[0,0]]}"#),
        ("binary.json", "\u{0}\u{1}\u{2}"),
    ];
    for (name, text) in cases {
        let p = write(name, text);
        for cmd in ["spanner", "tsp", "ptas", "oracle"] {
            let out = forge(&[cmd, "--graph", s(&p)]);
            assert_eq!(out.status.code(), Some(3), "{cmd} {name}: {}", String::from_utf8_lossy(&out.stderr));
            assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
        }
    }
    assert_eq!(forge(&["tsp", "--graph", "/nonexistent/file.json"]).status.code(), Some(5));
    let disconnected = write("disc.json", r#"{"vertices":4,"edges":[[0,1,1],[2,3,1]],"terminals":[0,3]}"#);
    let out = forge(&["spanner", "--graph", s(&disconnected)]);
    assert!(matches!(out.status.code(), Some(3) | Some(4)));
    assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"));
}

#[test]
fn euclidean_oracle_needs_points() {
    let g = write("nopts.json", r#"{"vertices":3,"edges":[[0,1,1],[1,2,1]],"terminals":[0,2]}"#);
    assert_eq!(forge(&["spanner", "--graph", s(&g), "--oracle", "euclidean"]).status.code(), Some(2));
    let pts = write("line.csv", "0,0\n1,0\n2,0\n");
    let out = forge(&["spanner", "--graph", s(&g), "--oracle", "euclidean", "--points", s(&pts)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
