//! Text artifacts other than edge lists: embeddings, community sidecars,
//! matrices, score tables and evaluation reports.

use std::fs;
use std::path::Path;

use pole_core::evaluation::{EvaluationReport, DECILES};
use pole_core::{DenseMatrix, Embedding, PolarizationReport};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::{fmt_f64, FORMAT_VERSION};

fn csv_writer(provenance: Option<&str>) -> csv::Writer<Vec<u8>> {
    let mut buf = Vec::new();
    if let Some(p) = provenance {
        buf.extend_from_slice(p.as_bytes());
        buf.push(b'\n');
    }
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf)
}

fn finish(w: csv::Writer<Vec<u8>>, path: &Path) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Header `n k t signed`, a line of spectral signs, then `label U_1 … U_k`
/// per node.
pub fn write_embedding(e: &Embedding, provenance: Option<&str>) -> String {
    let (n, k) = (e.node_count(), e.dimension());
    let mut s = String::new();
    if let Some(p) = provenance {
        s.push_str(p);
        s.push('\n');
    }
    s.push_str(&format!("{n} {k} {} {}\n", fmt_f64(e.markov_time()), u8::from(e.is_signed())));
    let signs: Vec<&str> = e
        .spectral_signs()
        .iter()
        .map(|&x| if x < 0.0 && !e.is_plain_dot() { "-1" } else { "1" })
        .collect();
    s.push_str(&signs.join(" "));
    s.push('\n');
    for u in 0..n {
        s.push_str(&e.labels()[u]);
        for &x in e.vector(u) {
            s.push(' ');
            s.push_str(&fmt_f64(x));
        }
        s.push('\n');
    }
    s
}

pub fn save_embedding(e: &Embedding, path: &Path, provenance: Option<&str>) -> Result<()> {
    fs::write(path, write_embedding(e, provenance)).map_err(|err| Error::io(path, err))
}

/// Inverse of [`write_embedding`]. Labels may contain spaces since each
/// row is split from the right.
pub fn parse_embedding(text: &str, path: &Path) -> Result<Embedding> {
    let bad = |line: usize, reason: String| Error::Parse { path: path.into(), line, reason };
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| bad(1, "missing header".into()))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 4 {
        return Err(bad(hl + 1, "header must be `n k t signed`".into()));
    }
    let n: usize = h[0].parse().map_err(|_| bad(hl + 1, "bad n".into()))?;
    let k: usize = h[1].parse().map_err(|_| bad(hl + 1, "bad k".into()))?;
    let t: f64 = h[2].parse().map_err(|_| bad(hl + 1, "bad t".into()))?;
    let signed = match h[3] {
        "1" | "true" => true,
        "0" | "false" => false,
        other => return Err(bad(hl + 1, format!("bad signed flag {other:?}"))),
    };
    let (sl, sign_line) = lines.next().ok_or_else(|| bad(hl + 2, "missing spectral signs".into()))?;
    let signs: Vec<f64> = sign_line
        .split_whitespace()
        .map(|s| s.parse::<f64>().map_err(|_| bad(sl + 1, format!("bad sign {s:?}"))))
        .collect::<Result<_>>()?;
    if signs.len() != k {
        return Err(bad(sl + 1, format!("expected {k} signs, got {}", signs.len())));
    }
    let mut labels = Vec::with_capacity(n);
    let mut cols = vec![Vec::with_capacity(n); k];
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.trim_end().rsplitn(k + 1, ' ').collect();
        if parts.len() != k + 1 {
            return Err(bad(i + 1, format!("expected a label and {k} values")));
        }
        for (j, p) in parts[..k].iter().rev().enumerate() {
            cols[j].push(p.parse::<f64>().map_err(|_| bad(i + 1, format!("bad value {p:?}")))?);
        }
        labels.push(parts[k].to_string());
    }
    if labels.len() != n {
        return Err(bad(hl + 1, format!("header says {n} nodes, found {}", labels.len())));
    }
    let vectors = DenseMatrix::from_columns(n, cols);
    Ok(Embedding::from_parts(vectors, signs, Vec::new(), t, signed, labels)?)
}

pub fn load_embedding(path: &Path) -> Result<Embedding> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_embedding(&text, path)
}

/// `label,community` sidecar.
pub fn save_communities(labels: &[String], communities: &[usize], path: &Path, provenance: Option<&str>) -> Result<()> {
    let mut w = csv_writer(provenance);
    w.write_record(["label", "community"])?;
    for (l, c) in labels.iter().zip(communities) {
        w.write_record([l.as_str(), &c.to_string()])?;
    }
    finish(w, path)
}

pub fn load_communities(path: &Path) -> Result<Vec<(String, usize)>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let c = rec.get(1).and_then(|s| s.trim().parse().ok()).ok_or_else(|| Error::Parse {
            path: path.into(),
            line: i + 2,
            reason: "expected `label,community`".into(),
        })?;
        out.push((rec[0].to_string(), c));
    }
    Ok(out)
}

/// Square matrix with a label header row and a label column.
pub fn save_matrix(m: &DenseMatrix, labels: &[String], path: &Path, provenance: Option<&str>) -> Result<()> {
    let mut w = csv_writer(provenance);
    let mut header = vec![String::new()];
    header.extend(labels.iter().cloned());
    w.write_record(&header)?;
    for r in 0..m.rows() {
        let mut row = vec![labels[r].clone()];
        row.extend((0..m.cols()).map(|c| fmt_f64(m.get(r, c))));
        w.write_record(&row)?;
    }
    finish(w, path)
}

/// Reads [`save_matrix`] output back as `(labels, matrix)`.
pub fn load_matrix(path: &Path) -> Result<(Vec<String>, DenseMatrix)> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let labels: Vec<String> = r.headers()?.iter().skip(1).map(String::from).collect();
    let n = labels.len();
    let mut data = Vec::with_capacity(n * n);
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        for f in rec.iter().skip(1) {
            data.push(f.parse::<f64>().map_err(|_| Error::Parse {
                path: path.into(),
                line: i + 2,
                reason: format!("bad value {f:?}"),
            })?);
        }
    }
    if data.len() != n * n {
        return Err(Error::Parse { path: path.into(), line: 1, reason: "matrix is not square".into() });
    }
    Ok((labels, DenseMatrix::from_row_major(n, n, &data)))
}

/// `node_label,score_t=…` with one score column per report, rows sorted
/// ascending by the first report's scores.
pub fn save_scores(reports: &[PolarizationReport], labels: &[String], path: &Path, provenance: Option<&str>) -> Result<()> {
    let mut w = csv_writer(provenance);
    let mut header = vec!["node_label".to_string()];
    header.extend(reports.iter().map(|r| format!("score_t={}", r.markov_time)));
    w.write_record(&header)?;
    for u in reports[0].ascending() {
        let mut row = vec![labels[u].clone()];
        row.extend(reports.iter().map(|r| fmt_f64(r.node_scores[u])));
        w.write_record(&row)?;
    }
    finish(w, path)
}

/// Graph-level polarization per Markov time.
pub fn polarization_summary(reports: &[PolarizationReport], labels: &[String], config: &Value) -> Value {
    let summaries: Vec<Value> = reports
        .iter()
        .map(|r| {
            let order = r.ascending();
            let (lo, hi) = (order[0], order[order.len() - 1]);
            json!({
                "markov_time": r.markov_time,
                "graph_score": r.graph_score,
                "min": { "label": labels[lo], "score": r.node_scores[lo] },
                "max": { "label": labels[hi], "score": r.node_scores[hi] },
                "zero_variance_nodes": r.zero_variance_nodes.iter().map(|&u| labels[u].clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "format_version": FORMAT_VERSION, "config": config, "summaries": summaries })
}

fn decile_key(r: f64) -> String {
    format!("{r:.1}")
}

fn curve_json(curve: &Option<[f64; 10]>) -> Value {
    match curve {
        None => Value::Null,
        Some(c) => {
            let mut m = Map::new();
            for (r, p) in DECILES.iter().zip(c) {
                m.insert(decile_key(*r), json!(p));
            }
            Value::Object(m)
        }
    }
}

pub fn evaluation_json(r: &EvaluationReport, config: &Value) -> Value {
    let classifiers: Vec<Value> = r
        .classifiers
        .iter()
        .map(|c| {
            json!({
                "target": c.target.as_str(),
                "features": ["signed_sim", "unsigned_sim"],
                "weights": c.weights,
                "bias": c.bias,
                "training_size": c.training_size,
                "iterations": c.iterations,
                "final_loss": c.final_loss,
            })
        })
        .collect();
    json!({
        "format_version": FORMAT_VERSION,
        "config": config,
        "method_tag": r.method_tag,
        "markov_time": r.markov_time,
        "unsigned_markov_time": r.unsigned_markov_time,
        "dimension": r.dimension,
        "seed": r.seed,
        "removal_fraction": r.removal_fraction,
        "removed_positive": r.removed_positive,
        "removed_negative": r.removed_negative,
        "candidate_count": r.candidate_count,
        "precision_positive": curve_json(&r.precision_positive),
        "precision_negative": curve_json(&r.precision_negative),
        "classifiers": classifiers,
    })
}

/// `sign,k_ratio,precision`; an undefined curve leaves the precision empty.
pub fn save_evaluation_csv(r: &EvaluationReport, path: &Path, provenance: Option<&str>) -> Result<()> {
    let mut w = csv_writer(provenance);
    w.write_record(["sign", "k_ratio", "precision"])?;
    for (sign, curve) in [("positive", &r.precision_positive), ("negative", &r.precision_negative)] {
        for (i, d) in DECILES.iter().enumerate() {
            let p = curve.map(|c| fmt_f64(c[i])).unwrap_or_default();
            w.write_record([sign, &decile_key(*d), &p])?;
        }
    }
    finish(w, path)
}

/// `u_label,v_label,signed_sim,unsigned_sim,class`.
pub fn save_pair_features(r: &EvaluationReport, labels: &[String], path: &Path, provenance: Option<&str>) -> Result<()> {
    let mut w = csv_writer(provenance);
    w.write_record(["u_label", "v_label", "signed_sim", "unsigned_sim", "class"])?;
    for p in r.pair_features.iter().flatten() {
        w.write_record([
            labels[p.u].as_str(),
            labels[p.v].as_str(),
            &fmt_f64(p.signed_similarity),
            &fmt_f64(p.unsigned_similarity),
            p.class.as_str(),
        ])?;
    }
    finish(w, path)
}

pub fn save_json(value: &Value, path: &Path) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::io(path, e))
}
