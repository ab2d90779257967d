use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ep4_core::audit::{cycle_parity, oct_equivalence, run_corpus, sandwich};
use ep4_core::certificate::verify_certificate;
use ep4_core::clouds::{cloud_decomposition, nu_exceeds_one};
use ep4_core::conflict::reduced_conflict_graph;
use ep4_core::generate::{corpus, gen_planar_map, GeneratorConfig};
use ep4_core::io::{dot_conflict, dot_graph, dot_vf, read_certificate, read_graph, write_certificate, write_graph, LabeledMap};
use ep4_core::oracles::{nu_exact_with, tau_exact_with, DEFAULT_VERTEX_BOUND};
use ep4_core::solver::solve;

#[derive(Parser)]
#[command(name = "ep4", version, about = "Odd cycle packings and transversals of plane graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a certificate with |T| <= 4|P|.
    Solve {
        #[command(flatten)]
        input: Input,
        /// Where to write the certificate (stdout if omitted). With --dir,
        /// a directory receiving <name>.cert.json files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against its graph.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Exact packing and transversal numbers of a small graph.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_VERTEX_BOUND)]
        max_vertices: usize,
    },
    /// Generate a random plane graph.
    Gen {
        #[arg(long, default_value_t = 20)]
        vertices: usize,
        #[arg(long, default_value_t = 1.0)]
        keep: f64,
        #[arg(long, default_value_t = 0.0)]
        subdivide: f64,
        #[arg(long, env = "EP4_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Face, cloud and parity statistics, or a DOT rendering.
    Stats {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Which graph to render with --format dot.
        #[arg(long, value_enum, default_value_t = View::Graph)]
        view: View,
    },
    /// Run the invariant suites on a generated corpus.
    Selftest {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 40)]
        max_vertices: usize,
        #[arg(long, env = "EP4_SEED", default_value_t = 1)]
        seed: u64,
    },
}

#[derive(clap::Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Graph JSON file.
    #[arg(long = "in")]
    file: Option<PathBuf>,
    /// Process every *.json file of a directory.
    #[arg(long)]
    dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum View {
    Graph,
    Vf,
    Conflict,
}

/// Outcome of one command: exit code and what to print.
enum Outcome {
    Ok(String),
    Rejected(String),
}

/// Unreadable or invalid input; exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input_err(e: impl Into<anyhow::Error>) -> anyhow::Error {
    InputError(e.into()).into()
}

fn load_graph(path: &Path) -> Result<LabeledMap> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input_err)?;
    read_graph(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(input_err)
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("listing {}", dir.display()))
        .map_err(input_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension().is_some_and(|x| x == "json")
                && !p.file_name().is_some_and(|n| n.to_string_lossy().ends_with(".cert.json"))
        })
        .collect();
    files.sort();
    Ok(files)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, text: &str) -> Result<String> {
    match out {
        Some(p) => {
            fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(text.to_string()),
    }
}

/// Runs `one` on a single file or on each file of a directory. Batch
/// results are collected as `{"file": ..., "result": ...}` lines.
fn per_input(input: &Input, mut one: impl FnMut(&Path, &LabeledMap) -> Result<(bool, Value, String)>) -> Result<Outcome> {
    if let Some(file) = &input.file {
        let lm = load_graph(file)?;
        let (ok, _, text) = one(file, &lm)?;
        return Ok(if ok { Outcome::Ok(text) } else { Outcome::Rejected(text) });
    }
    let dir = input.dir.as_ref().expect("clap requires one input");
    let mut all_ok = true;
    let mut lines = String::new();
    for path in json_files(dir)? {
        let entry = match load_graph(&path).and_then(|lm| one(&path, &lm)) {
            Ok((ok, summary, _)) => {
                all_ok &= ok;
                json!({"file": path.display().to_string(), "ok": ok, "result": summary})
            }
            Err(e) => {
                all_ok = false;
                json!({"file": path.display().to_string(), "ok": false, "error": format!("{e:#}")})
            }
        };
        lines.push_str(&entry.to_string());
        lines.push('\n');
    }
    Ok(if all_ok { Outcome::Ok(lines) } else { Outcome::Rejected(lines) })
}

fn cmd_solve(input: &Input, out: Option<&Path>) -> Result<Outcome> {
    let batch = input.dir.is_some();
    if let (true, Some(dir)) = (batch, out) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    per_input(input, |path, lm| {
        let cert = solve(&lm.map).context("solver failed")?;
        let report = verify_certificate(&lm.map, &cert);
        let text = write_certificate(lm, &cert);
        let printed = if batch {
            if let Some(dir) = out {
                let stem = path.file_stem().unwrap_or_default().to_string_lossy();
                fs::write(dir.join(format!("{stem}.cert.json")), &text)?;
            }
            String::new()
        } else {
            emit(out, &text)?
        };
        let summary = json!({
            "packing": cert.packing.len(),
            "transversal": cert.transversal.len(),
            "ratio_bound_ok": cert.ratio_bound_ok(),
            "verified": report.passed(),
        });
        Ok((report.passed(), summary, printed))
    })
}

fn cmd_verify(input: &Path, cert: &Path) -> Result<Outcome> {
    let lm = load_graph(input)?;
    let text = fs::read_to_string(cert)
        .with_context(|| format!("reading {}", cert.display()))
        .map_err(input_err)?;
    let cert = read_certificate(&lm, &text)
        .with_context(|| format!("parsing {}", cert.display()))
        .map_err(input_err)?;
    let report = verify_certificate(&lm.map, &cert);
    let out = pretty(&json!({"passed": report.passed(), "checks": report.checks}));
    Ok(if report.passed() { Outcome::Ok(out) } else { Outcome::Rejected(out) })
}

fn cmd_oracle(input: &Input, bound: usize) -> Result<Outcome> {
    per_input(input, |_, lm| {
        let nu = nu_exact_with(&lm.map, bound).map_err(input_err)?;
        let tau = tau_exact_with(&lm.map, bound).map_err(input_err)?;
        let v = json!({"nu": nu.value, "tau": tau.value});
        Ok((true, v.clone(), format!("{v}\n")))
    })
}

fn stats(lm: &LabeledMap) -> Result<Value> {
    let map = &lm.map;
    let odd = map.odd_faces();
    let clouds = cloud_decomposition(map, &odd).map_err(input_err)?;
    let degrees: Vec<usize> = map.faces().iter().map(|f| f.degree()).collect();
    let cloud_info: Vec<Value> = clouds
        .iter()
        .map(|c| {
            json!({
                "faces": c.faces.len(),
                "vertices": c.vertices.len(),
                "packing_number_one": nu_exceeds_one(map, &c.faces).is_none(),
            })
        })
        .collect();
    Ok(json!({
        "vertices": map.vertex_count(),
        "edges": map.edge_count(),
        "faces": map.face_count(),
        "components": map.component_count(),
        "bridges": map.bridge_count(),
        "odd_faces": odd.len(),
        "even_faces": map.face_count() - odd.len(),
        "max_face_degree": degrees.iter().max().copied().unwrap_or(0),
        "bipartite": odd.is_empty(),
        "clouds": cloud_info,
    }))
}

fn cmd_stats(input: &Input, format: Format, view: View) -> Result<Outcome> {
    per_input(input, |_, lm| {
        let summary = stats(lm)?;
        let text = match format {
            Format::Json => pretty(&summary),
            Format::Dot => match view {
                View::Graph => dot_graph(lm),
                View::Vf => dot_vf(lm),
                View::Conflict => {
                    let r = reduced_conflict_graph(&lm.map, &lm.map.odd_faces()).map_err(input_err)?;
                    dot_conflict(lm, &r)
                }
            },
        };
        Ok((true, summary, text))
    })
}

fn cmd_gen(config: GeneratorConfig, out: Option<&Path>) -> Result<Outcome> {
    if config.vertices == 0 {
        return Err(input_err(anyhow::anyhow!("--vertices must be at least 1")));
    }
    for p in [config.keep_probability, config.subdivide_probability] {
        if !(0.0..=1.0).contains(&p) {
            return Err(input_err(anyhow::anyhow!("probabilities must lie in [0, 1], got {p}")));
        }
    }
    let lm = LabeledMap::unlabeled(gen_planar_map(&config));
    Ok(Outcome::Ok(emit(out, &write_graph(&lm))?))
}

fn cmd_selftest(count: usize, max_vertices: usize, seed: u64) -> Result<Outcome> {
    if count == 0 {
        bail!(InputError(anyhow::anyhow!("--count must be positive")));
    }
    let instances = corpus(count, max_vertices, seed);
    let run = run_corpus(&instances, Duration::from_secs(1));
    let tiny: Vec<_> = instances.iter().map(|e| &e.map).filter(|m| m.vertex_count() <= 10).collect();
    let twelve: Vec<_> = instances.iter().map(|e| &e.map).filter(|m| m.vertex_count() <= 12).collect();
    let audits = [
        sandwich(&instances, &run.sizes, DEFAULT_VERTEX_BOUND),
        cycle_parity(&tiny, 2_000_000),
        oct_equivalence(&twelve, 4, 2_000_000),
    ];
    let obs = run.observer;
    let all = [
        &run.headline,
        &audits[0],
        &audits[1],
        &audits[2],
        &obs.min_degree,
        &obs.hitting,
        &obs.packing_one,
        &obs.base_case,
        &obs.surgery,
    ];
    // Suites with nothing to check on a small corpus are not failures.
    let ok = all.iter().all(|a| a.violations == 0);
    let text: String = all.iter().map(|a| format!("{a}\n")).collect();
    Ok(if ok { Outcome::Ok(text) } else { Outcome::Rejected(text) })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Solve { input, out } => cmd_solve(&input, out.as_deref()),
        Command::Verify { input, cert } => cmd_verify(&input, &cert),
        Command::Oracle { input, max_vertices } => cmd_oracle(&input, max_vertices),
        Command::Gen {
            vertices,
            keep,
            subdivide,
            seed,
            out,
        } => cmd_gen(
            GeneratorConfig {
                vertices,
                keep_probability: keep,
                subdivide_probability: subdivide,
                seed,
            },
            out.as_deref(),
        ),
        Command::Stats { input, format, view } => cmd_stats(&input, format, view),
        Command::Selftest {
            count,
            max_vertices,
            seed,
        } => cmd_selftest(count, max_vertices, seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Ok(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Rejected(text)) => {
            print!("{text}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
