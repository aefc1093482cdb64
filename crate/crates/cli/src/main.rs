use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eigenratio::corona::scan_m0;
use eigenratio::edgelist::{parse_edge_list, write_edge_list};
use eigenratio::expander::hamiltonian;
use eigenratio::generators::{self as gen, Seed};
use eigenratio::linalg::{adjacency_spectrum, eigenratio_of, laplacian_spectrum};
use eigenratio::suite::{run_suite, SuiteParams, DEFAULT_SEED};
use eigenratio::{Error, Graph};

#[derive(Parser)]
#[command(name = "eigenratio", version, about = "Laplacian eigenratio laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph as an edge list.
    Gen {
        /// star, path, cycle, complete, star-plus, bipartite, circulant, petersen, heawood,
        /// random-regular, random-tree, corona
        #[arg(value_name = "FAMILY")]
        kind: String,
        #[command(flatten)]
        p: Params,
    },
    /// Laplacian (or adjacency) eigenvalues of an edge-list file, ascending.
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        adjacency: bool,
    },
    /// λ_2/λ_n of an edge-list file.
    Eigenratio { file: PathBuf },
    /// Scan m for the corona construction over K_{q,q}.
    CounterexampleScan {
        #[command(flatten)]
        p: Params,
    },
    /// Run a verification suite: unicyclic, trees, regular, corona, expander, haemers, theorem5.
    Verify {
        suite: String,
        #[command(flatten)]
        p: Params,
    },
    /// Search an edge-list file for a Hamilton cycle.
    Hamilton { file: PathBuf },
}

#[derive(Args, Clone)]
struct Params {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Report)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Report,
    Csv,
}

enum Failure {
    /// Ran to completion but some check failed.
    Checks,
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_graph(path: &PathBuf) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    parse_edge_list(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn generate(family: &str, p: &Params) -> Result<Graph, Failure> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("{family} needs --{flag}")));
    let g = match family {
        "star" => gen::star(need(p.n, "n")?)?,
        "path" => gen::path(need(p.n, "n")?)?,
        "cycle" => gen::cycle(need(p.n, "n")?)?,
        "complete" => gen::complete(need(p.n, "n")?)?,
        "star-plus" => gen::star_plus(need(p.n, "n")?)?,
        "bipartite" => {
            let q = need(p.q, "q")?;
            gen::complete_bipartite(q, q)?
        }
        "circulant" => {
            let offsets: Vec<usize> = (1..=p.k.unwrap_or(3)).collect();
            gen::circulant(need(p.n, "n")?, &offsets)?
        }
        "petersen" => gen::petersen(),
        "heawood" => gen::heawood(),
        "random-regular" => gen::random_regular(need(p.n, "n")?, p.q.unwrap_or(3), Seed(p.seed))?,
        "random-tree" => gen::random_tree(need(p.n, "n")?, Seed(p.seed))?,
        "corona" => {
            let q = need(p.q, "q")?;
            gen::corona(&gen::complete_bipartite(q, q)?, need(p.m, "m")?)?
        }
        other => return Err(Failure::Usage(format!("unknown family {other:?}"))),
    };
    Ok(g)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { kind, p } => emit(&p.out, &write_edge_list(&generate(&kind, &p)?)),
        Command::Spectrum { file, adjacency } => {
            let g = read_graph(&file)?;
            let spec = if adjacency { adjacency_spectrum(&g)? } else { laplacian_spectrum(&g)? };
            let text: String = spec.values().iter().map(|v| format!("{v:.12}\n")).collect();
            emit(&None, &text)
        }
        Command::Eigenratio { file } => {
            let g = read_graph(&file)?;
            let r = eigenratio_of(&g, &laplacian_spectrum(&g)?)?;
            emit(&None, &format!("{r:.15}\n"))
        }
        Command::CounterexampleScan { p } => {
            let q = p.q.unwrap_or(3);
            let table = scan_m0(q, p.m.unwrap_or(1000))?;
            let text = match p.format {
                Format::Csv => table.to_csv(),
                Format::Report => format!("q={q} m0={} m_max={}\n", table.m0, table.m_max),
            };
            emit(&p.out, &text)
        }
        Command::Verify { suite, p } => {
            let params = SuiteParams {
                n: p.n,
                q: p.q,
                m: p.m,
                k: p.k,
                s: p.s,
                c: p.c,
                eps: p.eps,
                family: p.family.clone(),
                seed: p.seed,
            };
            let report = run_suite(&suite, &params)?;
            let text = match p.format {
                Format::Report => report.to_jsonl(),
                Format::Csv => report.to_csv(),
            };
            emit(&p.out, &text)?;
            let s = report.summary();
            eprintln!(
                "{}: {} instances, {} pass, {} fail, {} hypothesis not met",
                report.suite, s.instances, s.pass, s.fail, s.hypothesis_not_met
            );
            if s.fail > 0 {
                return Err(Failure::Checks);
            }
            Ok(())
        }
        Command::Hamilton { file } => {
            let g = read_graph(&file)?;
            let text = match hamiltonian(&g)? {
                Some(cycle) => cycle.iter().map(usize::to_string).collect::<Vec<_>>().join(" ") + "\n",
                None => "none\n".to_string(),
            };
            emit(&None, &text)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
