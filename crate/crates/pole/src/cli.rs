use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use pole_core::evaluation::{
    combined_signed_link_prediction, default_markov_grid, select_markov_time, select_unsigned_markov_time,
    signed_link_prediction, split_edges, SplitManifest, DEFAULT_DIMENSION, DEFAULT_FRACTION,
};
use pole_core::measures::graph_polarization_profile_with_tol;
use pole_core::synthesis::{synthesize, Scheme, SyntheticSpec};
use pole_core::{embed, social_balance, DEFAULT_TOL};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::edgelist::{load_graph, save_edge_list};
use crate::error::{Error, Result};
use crate::formats::*;
use crate::fmt_f64;

#[derive(Debug, Parser)]
#[command(name = "pole", version, about = "Signed random-walk polarization and polarized embedding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Node and graph polarization at one or more Markov times.
    Polarize(Flags),
    /// Write a signed (or unsigned) autocovariance embedding.
    Embed(Flags),
    /// Signed link prediction benchmark on a held-out split.
    Linkpred(Flags),
    /// Generate a two-community synthetic graph.
    Synth(Flags),
    /// Fraction of balanced triangles.
    Balance(Flags),
    /// Write the reconstructed similarity matrix.
    ExportSimilarity(Flags),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Edge-list file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Markov time.
    #[arg(long)]
    pub t: Option<f64>,
    /// Comma-separated Markov times.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub t_grid: Option<Vec<f64>>,
    /// Embedding dimension.
    #[arg(long)]
    pub k: Option<usize>,
    /// Share of links held out.
    #[arg(long)]
    pub fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// `signed-only` or `combined`.
    #[arg(long)]
    pub mode: Option<String>,
    /// Output directory (polarize, linkpred, synth) or file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Truncation tolerance of the matrix exponential.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Use the unsigned walk.
    #[arg(long)]
    pub unsigned: bool,
    /// JSON file with any of the above; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Keep every component instead of the largest one.
    #[arg(long)]
    pub all_components: bool,
    #[arg(long)]
    pub nodes_per_community: Option<usize>,
    #[arg(long)]
    pub mean_degree: Option<f64>,
    #[arg(long)]
    pub inter_community_ratio: Option<f64>,
    /// `polarized` or `unpolarized`.
    #[arg(long)]
    pub scheme: Option<String>,
}

impl Flags {
    fn resolve(&self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let top = RunConfig {
            graph: self.graph.clone(),
            t: self.t,
            t_grid: self.t_grid.clone(),
            k: self.k,
            fraction: self.fraction,
            seed: self.seed,
            mode: self.mode.clone(),
            out: self.out.clone(),
            tol: self.tol,
            unsigned: self.unsigned.then_some(true),
            largest_component: self.all_components.then_some(false),
            nodes_per_community: self.nodes_per_community,
            mean_degree: self.mean_degree,
            inter_community_ratio: self.inter_community_ratio,
            scheme: self.scheme.clone(),
        };
        Ok(base.overlay(top))
    }
}

struct Run {
    command: &'static str,
    config: RunConfig,
}

impl Run {
    fn config_json(&self) -> Value {
        let mut v = serde_json::to_value(&self.config).expect("config serializes");
        v["command"] = json!(self.command);
        v
    }

    /// First line of every text artifact.
    fn provenance(&self) -> String {
        format!("# pole {} config={}", env!("CARGO_PKG_VERSION"), self.config_json())
    }

    fn graph_path(&self) -> Result<&Path> {
        self.config.graph.as_deref().ok_or_else(|| Error::Config("--graph is required".into()))
    }

    fn out_path(&self) -> Result<&Path> {
        self.config.out.as_deref().ok_or_else(|| Error::Config("--out is required".into()))
    }

    fn out_dir(&self) -> Result<&Path> {
        let dir = self.out_path()?;
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        Ok(dir)
    }

    fn t(&self) -> Result<f64> {
        self.config.t.ok_or_else(|| Error::Config("--t is required".into()))
    }

    fn tol(&self) -> f64 {
        self.config.tol.unwrap_or(DEFAULT_TOL)
    }

    fn k(&self) -> usize {
        self.config.k.unwrap_or(DEFAULT_DIMENSION)
    }

    fn seed(&self) -> u64 {
        self.config.seed.unwrap_or(0)
    }

    fn load(&self, default_lcc: bool) -> Result<pole_core::SignedGraph> {
        let lcc = self.config.largest_component.unwrap_or(default_lcc);
        Ok(load_graph(self.graph_path()?, lcc)?.graph)
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command) -> Result<()> {
    match command {
        Command::Polarize(f) => polarize(Run { command: "polarize", config: f.resolve()? }),
        Command::Embed(f) => embed_cmd(Run { command: "embed", config: f.resolve()? }),
        Command::Linkpred(f) => linkpred(Run { command: "linkpred", config: f.resolve()? }),
        Command::Synth(f) => synth(Run { command: "synth", config: f.resolve()? }),
        Command::Balance(f) => balance(Run { command: "balance", config: f.resolve()? }),
        Command::ExportSimilarity(f) => export_similarity(Run { command: "export-similarity", config: f.resolve()? }),
    }
}

fn polarize(run: Run) -> Result<()> {
    let times = match (&run.config.t, &run.config.t_grid) {
        (Some(_), Some(_)) => return Err(Error::Config("give either --t or --t-grid".into())),
        (Some(t), None) => vec![*t],
        (None, Some(grid)) => grid.clone(),
        (None, None) => vec![10.0],
    };
    let g = run.load(true)?;
    let reports = graph_polarization_profile_with_tol(&g, &times, run.tol())?;
    let dir = run.out_dir()?;
    let prov = run.provenance();
    save_scores(&reports, g.labels(), &dir.join("scores.csv"), Some(&prov))?;
    save_json(&polarization_summary(&reports, g.labels(), &run.config_json()), &dir.join("summary.json"))?;
    for r in &reports {
        println!("t={} graph_polarization={}", r.markov_time, fmt_f64(r.graph_score));
    }
    Ok(())
}

fn embed_cmd(run: Run) -> Result<()> {
    let g = run.load(true)?;
    let signed = !run.config.unsigned.unwrap_or(false);
    let e = embed(&g, run.t()?, signed, run.k(), run.tol())?;
    save_embedding(&e, run.out_path()?, Some(&run.provenance()))
}

fn save_split(m: &SplitManifest, path: &Path, prov: &str) -> Result<()> {
    let labels = m.residual.labels();
    let mut s = format!("{prov}\n");
    for e in m.removed_positive.iter().chain(&m.removed_negative) {
        let sep = if labels[e.u].contains(char::is_whitespace) || labels[e.v].contains(char::is_whitespace) { "," } else { " " };
        s.push_str(&format!("{}{sep}{}{sep}{}\n", labels[e.u], labels[e.v], fmt_f64(e.weight)));
    }
    fs::write(path, s).map_err(|e| Error::io(path, e))
}

fn linkpred(run: Run) -> Result<()> {
    let combined = match run.config.mode.as_deref().unwrap_or("signed-only") {
        "signed-only" => false,
        "combined" => true,
        other => return Err(Error::Config(format!("unknown mode {other:?}"))),
    };
    let g = run.load(true)?;
    let (k, seed, tol) = (run.k(), run.seed(), run.tol());
    let manifest = split_edges(&g, run.config.fraction.unwrap_or(DEFAULT_FRACTION), seed)?;
    let grid = run.config.t_grid.clone().unwrap_or_else(default_markov_grid);
    let t = match run.config.t {
        Some(t) => t,
        None => select_markov_time(&manifest, &grid, k, seed, tol)?,
    };
    let report = if combined {
        let tu = match run.config.t {
            Some(t) => t,
            None => select_unsigned_markov_time(&manifest, &grid, k, seed, tol)?,
        };
        combined_signed_link_prediction(&manifest, t, tu, k, seed, tol)?
    } else {
        signed_link_prediction(&manifest, t, k, tol)?
    };
    let dir = run.out_dir()?;
    let prov = run.provenance();
    save_json(&evaluation_json(&report, &run.config_json()), &dir.join("report.json"))?;
    save_evaluation_csv(&report, &dir.join("report.csv"), Some(&prov))?;
    save_split(&manifest, &dir.join("removed.txt"), &prov)?;
    if combined {
        save_pair_features(&report, g.labels(), &dir.join("pair_features.csv"), Some(&prov))?;
    }
    let at = |c: &Option<[f64; 10]>| c.map(|c| fmt_f64(c[9])).unwrap_or_else(|| "undefined".into());
    println!(
        "t={t} precision@100% positive={} negative={}",
        at(&report.precision_positive),
        at(&report.precision_negative)
    );
    Ok(())
}

fn synth(run: Run) -> Result<()> {
    let d = SyntheticSpec::default();
    let scheme = match run.config.scheme.as_deref().unwrap_or("polarized") {
        "polarized" => Scheme::Polarized,
        "unpolarized" => Scheme::Unpolarized,
        other => return Err(Error::Config(format!("unknown scheme {other:?}"))),
    };
    let spec = SyntheticSpec {
        nodes_per_community: run.config.nodes_per_community.unwrap_or(d.nodes_per_community),
        mean_degree: run.config.mean_degree.unwrap_or(d.mean_degree),
        inter_community_ratio: run.config.inter_community_ratio.unwrap_or(d.inter_community_ratio),
        seed: run.seed(),
        scheme,
    };
    let s = synthesize(&spec)?;
    let dir = run.out_dir()?;
    let prov = run.provenance();
    save_edge_list(&s.graph, &dir.join("graph.txt"), Some(&prov))?;
    save_communities(s.graph.labels(), &s.communities, &dir.join("communities.csv"), Some(&prov))?;
    let mut meta = json!({
        "format_version": crate::FORMAT_VERSION,
        "config": run.config_json(),
        "node_count": s.graph.node_count(),
        "edge_count": s.graph.edge_count(),
        "negative_edge_count": s.graph.negative_edge_count(),
        "topology_attempts": s.topology_attempts,
    });
    if let Some(u) = &s.unpolarized {
        save_communities(s.graph.labels(), &u.partition, &dir.join("sign_partition.csv"), Some(&prov))?;
        meta["sign_partition"] = json!({
            "cut": u.cut,
            "target_cut": u.target_cut,
            "exact": u.exact,
            "attempts": u.attempts,
            "side_sizes": [u.partition.iter().filter(|&&c| c == 0).count(), u.partition.iter().filter(|&&c| c == 1).count()],
        });
    }
    save_json(&meta, &dir.join("synth.json"))
}

fn balance(run: Run) -> Result<()> {
    let g = run.load(false)?;
    let b = social_balance(&g);
    let v = json!({
        "format_version": crate::FORMAT_VERSION,
        "config": run.config_json(),
        "triangle_count": b.triangle_count,
        "balanced_count": b.balanced_count,
        "balance": b.balance,
    });
    if let Some(out) = &run.config.out {
        save_json(&v, out)?;
    }
    println!("{}", serde_json::to_string(&v)?);
    Ok(())
}

fn export_similarity(run: Run) -> Result<()> {
    let g = run.load(true)?;
    let signed = !run.config.unsigned.unwrap_or(false);
    let e = embed(&g, run.t()?, signed, run.k(), run.tol())?;
    let m = e.similarity_matrix()?;
    save_matrix(&m, g.labels(), run.out_path()?, Some(&run.provenance()))
}
