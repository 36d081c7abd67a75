use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use stringsep::congestion::{congestion, decompose_to_paths, Caps, Mode};
use stringsep::cuts::{find_separator, fhl_sweep, ratio_f64};
use stringsep::embedding::{best_embedding, default_trials};
use stringsep::experiments::{
    drawing_conflict_experiment, duality_report, even_subword, pcr_lower_bound, REPORT_HEADER,
};
use stringsep::geometry::{
    expo_family, intersection_graph, parse_strings, parse_weak_realization, weak_realization_to_text,
    weak_to_strings,
};
use stringsep::graph::parse_graph;
use stringsep::metrics::{sparsity_exact, vertex_weight_metric};
use stringsep::{Error, Graph};

#[derive(Parser)]
#[command(name = "stringsep", version, about = "String graphs, flow congestion and balanced separators")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Intersection graph of a strings file.
    BuildIg {
        #[arg(long)]
        strings: PathBuf,
    },
    /// Balanced separator found by the embedding and sweep pipeline.
    Separator {
        #[arg(long, conflicts_with = "strings", required_unless_present = "strings")]
        graph: Option<PathBuf>,
        #[arg(long)]
        strings: Option<PathBuf>,
    },
    /// Edge congestion LP with optimal flows.
    Econg {
        #[arg(long)]
        graph: PathBuf,
        /// Lift the n <= 12, m <= 30 size cap.
        #[arg(long)]
        no_caps: bool,
    },
    /// Vertex congestion LP with optimal flows.
    Vcong {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        no_caps: bool,
    },
    /// Exact edge or vertex sparsity by enumeration.
    Sparsity {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "edge")]
        mode: Mode,
    },
    /// Best random line embedding of the shortest-path metric.
    Embed {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Threshold sweep over the best embedding.
    Sweep {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Weak realization of the exponential-crossing family.
    Expo {
        #[arg(long)]
        k: usize,
    },
    /// Strings realizing the incidence-and-crossing graph of a weak realization.
    Weak2str {
        #[arg(long)]
        weak: PathBuf,
    },
    /// Nonempty factor with all symbol counts even.
    Evensub {
        #[arg(long)]
        word: String,
    },
    /// Lower bound C(n,5)/(n-4) on the pair-crossing number of K_n.
    PcrBound {
        #[arg(long)]
        n: u64,
    },
    /// Random-path conflict experiment driven by the vertex congestion flow.
    Conflicts {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// CSV duality report, one row per graph file.
    Report {
        #[arg(long, required = true)]
        graph: Vec<PathBuf>,
        #[arg(long)]
        no_caps: bool,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => f.write_str(m),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: stringsep::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| match e {
        Error::Parse { .. } => CliError::Io(format!("{}: {e}", path.display())),
        e => CliError::Core(e),
    })
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    with_path(path, parse_graph(&read(path)?))
}

fn caps(no_caps: bool) -> Caps {
    if no_caps {
        Caps::UNLIMITED
    } else {
        Caps::default()
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn unit_metric(g: &Graph) -> stringsep::Result<stringsep::metrics::MetricMatrix> {
    vertex_weight_metric(g, &vec![1.0; g.n()])
}

fn run(cli: &Cli) -> Result<String, CliError> {
    let seed = cli.seed;
    Ok(match &cli.cmd {
        Command::BuildIg { strings } => {
            let rep = with_path(strings, parse_strings(&read(strings)?))?;
            intersection_graph(&rep)?.graph.to_text()
        }
        Command::Separator { graph, strings } => {
            let g = match (graph, strings) {
                (Some(p), _) => load_graph(p)?,
                (None, Some(p)) => intersection_graph(&with_path(p, parse_strings(&read(p)?))?)?.graph,
                (None, None) => unreachable!("clap requires one input"),
            };
            pretty(&find_separator(&g, seed)?)
        }
        Command::Econg { graph, no_caps } | Command::Vcong { graph, no_caps } => {
            let mode = if matches!(cli.cmd, Command::Econg { .. }) { Mode::Edge } else { Mode::Vertex };
            let g = load_graph(graph)?;
            let sol = congestion(&g, mode, caps(*no_caps))?;
            pretty(&json!({
                "mode": sol.mode,
                "congestion": sol.congestion,
                "commodities": sol.commodities,
            }))
        }
        Command::Sparsity { graph, mode } => {
            let g = load_graph(graph)?;
            let r = sparsity_exact(&g, *mode)?;
            pretty(&json!({
                "mode": mode,
                "sparsity": r.value.to_string(),
                "value": ratio_f64(r.value),
                "cut": r.cut,
            }))
        }
        Command::Embed { graph, trials } => {
            let g = load_graph(graph)?;
            let d = unit_metric(&g)?;
            pretty(&best_embedding(&d, trials.unwrap_or(default_trials(g.n())), seed)?)
        }
        Command::Sweep { graph, trials } => {
            let g = load_graph(graph)?;
            let d = unit_metric(&g)?;
            let emb = best_embedding(&d, trials.unwrap_or(default_trials(g.n())), seed)?;
            pretty(&fhl_sweep(&g, &vec![1.0; g.n()], &emb.embedding.f)?)
        }
        Command::Expo { k } => weak_realization_to_text(&expo_family(*k)?.realization),
        Command::Weak2str { weak } => {
            let w = with_path(weak, parse_weak_realization(&read(weak)?))?;
            weak_to_strings(&w)?.rep.to_text()
        }
        Command::Evensub { word } => {
            let chars: Vec<char> = word.chars().collect();
            match even_subword(&chars) {
                Some((s, e)) => format!("{s} {e} {}\n", chars[s..e].iter().collect::<String>()),
                None => "none\n".to_string(),
            }
        }
        Command::PcrBound { n } => format!("{}\n", pcr_lower_bound(*n)?),
        Command::Conflicts { graph, trials } => {
            let g = load_graph(graph)?;
            let sol = congestion(&g, Mode::Vertex, Caps::default())?;
            let phi = decompose_to_paths(&g, &sol)?;
            let stats = drawing_conflict_experiment(&g, &phi, sol.congestion, *trials, seed)?;
            pretty(&json!({
                "trials": stats.trials,
                "mean": stats.mean,
                "stddev": stats.stddev(),
                "min": stats.counts.iter().min(),
                "max": stats.counts.iter().max(),
                "vcong": stats.vcong,
                "upper_bound": stats.upper_bound,
                "lower_bound": stats.lower_bound,
            }))
        }
        Command::Report { graph, no_caps } => {
            let mut out = format!("{REPORT_HEADER}\n");
            for p in graph {
                let g = load_graph(p)?;
                let name = p.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
                out.push_str(&duality_report(&name, &g, caps(*no_caps), seed)?.to_csv());
                out.push('\n');
            }
            out
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = std::env::var("STRINGSEP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().ok();
    }
    let output = match run(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let written = match &cli.out {
        Some(path) => fs::write(path, output).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(output.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
