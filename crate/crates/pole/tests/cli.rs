use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use pole::formats::{load_embedding, load_matrix};
use pole_core::{autocovariance, ingest_edge_list, IngestOptions};

fn pole(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pole")).args(args).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().unwrap(), text)
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn balance_of_mixed_triangle_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "t.txt", "a b 1\nb c 1\na c -1\n");
    let (code, out) = pole(&["balance", "--graph", s(&g)]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"balance\":0.0"), "{out}");
}

#[test]
fn synth_defaults_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("synth");
    let (code, msg) = pole(&["synth", "--seed", "3", "--out", s(&out)]);
    assert_eq!(code, 0, "{msg}");
    let g = pole::edgelist::load_graph(&out.join("graph.txt"), false).unwrap().graph;
    assert_eq!(g.node_count(), 100);
    let communities = pole::formats::load_communities(&out.join("communities.csv")).unwrap();
    assert_eq!(communities.len(), 100);
    assert_eq!(communities.iter().filter(|c| c.1 == 0).count(), 50);
}

#[test]
fn polarize_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "pos.txt", "a b 1\nb c 2\nc d 1\na c 1\n");
    let out = dir.path().join("pol");
    let (code, msg) = pole(&["polarize", "--graph", s(&g), "--t", "2", "--out", s(&out)]);
    assert_eq!(code, 0, "{msg}");
    let csv = fs::read_to_string(out.join("scores.csv")).unwrap();
    for line in csv.lines().skip(2) {
        let score: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((score - 1.0).abs() < 1e-12);
    }
    let signed = write(dir.path(), "s.txt", "a b 1\nb c -1\nc d 1\na c 1\nd e -1\n");
    let out2 = dir.path().join("pol2");
    let (code, msg) = pole(&["polarize", "--graph", s(&signed), "--t-grid", "1,10", "--out", s(&out2)]);
    assert_eq!(code, 0, "{msg}");
    let csv = fs::read_to_string(out2.join("scores.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[1], "node_label,score_t=1,score_t=10");
    let firsts: Vec<f64> = rows[2..].iter().map(|r| r.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert!(firsts.windows(2).all(|w| w[0] <= w[1]));
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(out2.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["summaries"].as_array().unwrap().len(), 2);
    assert_eq!(summary["format_version"], "1");
}

#[test]
fn export_similarity_full_rank_is_autocovariance() {
    let dir = tempfile::tempdir().unwrap();
    let text = "a b 1\nb c -1\nc d 1\na c 1\nd e -1\ne a 2\nb d 1\n";
    let g = write(dir.path(), "g.txt", text);
    let out = dir.path().join("sim.csv");
    let (code, msg) = pole(&["export-similarity", "--graph", s(&g), "--t", "3", "--k", "5", "--out", s(&out)]);
    assert_eq!(code, 0, "{msg}");
    let (labels, m) = load_matrix(&out).unwrap();
    let recs = pole::edgelist::parse_edge_list(text, Path::new("g")).unwrap();
    let graph = ingest_edge_list(&recs, IngestOptions::default()).unwrap().graph;
    assert_eq!(labels, graph.labels());
    let r = autocovariance(&graph, 3.0, true, pole_core::DEFAULT_TOL).unwrap();
    assert!(m.max_abs_diff(&r.matrix) <= 1e-8);
}

#[test]
fn embed_unsigned_equals_signed_on_positive_graph() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "pos.txt", "a b 1\nb c 2\nc d 1\na c 1\nd e 1\n");
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    assert_eq!(pole(&["embed", "--graph", s(&g), "--t", "2", "--k", "3", "--out", s(&a)]).0, 0);
    assert_eq!(pole(&["embed", "--graph", s(&g), "--t", "2", "--k", "3", "--unsigned", "--out", s(&b)]).0, 0);
    let strip = |p: &Path| -> Vec<String> { fs::read_to_string(p).unwrap().lines().skip(2).map(String::from).collect() };
    assert_eq!(strip(&a), strip(&b));
    let e = load_embedding(&a).unwrap();
    assert_eq!(e.dimension(), 3);
    assert!(e.is_signed() && !load_embedding(&b).unwrap().is_signed());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let tree = write(dir.path(), "tree.txt", "a b 1\nb c 1\nc d -1\n");
    let bad = write(dir.path(), "bad.txt", "a b x\n");
    let out = dir.path().join("o");
    assert_eq!(pole(&["linkpred", "--graph", s(&tree), "--out", s(&out)]).0, 3);
    let (code, msg) = pole(&["polarize", "--graph", s(&bad), "--out", s(&out)]);
    assert_eq!(code, 2);
    assert!(msg.contains("line 1"), "{msg}");
    assert_eq!(pole(&["polarize", "--graph", s(&dir.path().join("missing.txt")), "--out", s(&out)]).0, 2);
    assert_eq!(pole(&["embed", "--graph", s(&tree), "--t", "1", "--k", "9", "--out", s(&out)]).0, 2);
    assert_eq!(pole(&["polarize", "--graph", s(&tree), "--t", "-1", "--out", s(&out)]).0, 2);
    assert_eq!(pole(&["frobnicate"]).0, 2);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "a b 1\nb c -1\nc d 1\na c 1\n");
    let cfg = write(dir.path(), "cfg.json", &format!(r#"{{"graph": "{}", "t": 1.0, "k": 2}}"#, s(&g)));
    let out = dir.path().join("e.txt");
    let (code, msg) = pole(&["embed", "--config", s(&cfg), "--k", "3", "--out", s(&out)]);
    assert_eq!(code, 0, "{msg}");
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# pole "));
    assert!(text.contains("\"k\":3"));
    assert_eq!(load_embedding(&out).unwrap().dimension(), 3);
    let bad = write(dir.path(), "bad.json", r#"{"kk": 2}"#);
    assert_eq!(pole(&["embed", "--config", s(&bad), "--out", s(&out)]).0, 2);
}

#[test]
fn linkpred_outputs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let synth = dir.path().join("synth");
    assert_eq!(pole(&["synth", "--seed", "4", "--out", s(&synth)]).0, 0);
    let graph = synth.join("graph.txt");
    let run = |name: &str| {
        let out = dir.path().join(name);
        let (code, msg) = pole(&["linkpred", "--graph", s(&graph), "--mode", "combined", "--t-grid", "1,3", "--seed", "9", "--out", s(&out)]);
        assert_eq!(code, 0, "{msg}");
        out
    };
    let (a, b) = (run("a"), run("b"));
    for f in ["report.json", "report.csv", "removed.txt", "pair_features.csv"] {
        let (x, y) = (fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
        // The output directory is part of the recorded config.
        let norm = |v: Vec<u8>, d: &str| String::from_utf8(v).unwrap().replace(d, "OUT");
        assert_eq!(norm(x, s(&a)), norm(y, s(&b)), "{f}");
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["precision_positive"].as_object().unwrap().len(), 10);
    assert!(report["precision_negative"]["1.0"].is_number());
    let features = fs::read_to_string(a.join("pair_features.csv")).unwrap();
    assert!(features.lines().nth(1).unwrap() == "u_label,v_label,signed_sim,unsigned_sim,class");
    let removed = fs::read_to_string(a.join("removed.txt")).unwrap();
    assert_eq!(removed.lines().filter(|l| !l.starts_with('#')).count(), (0.2 * pole::edgelist::load_graph(&graph, false).unwrap().graph.edge_count() as f64) as usize);
}
