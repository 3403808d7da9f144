use clap::Parser;
use iwagraph_cli::{run, Command, Format, RunConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact weighted complexities, characteristic elements and Iwasawa
/// invariants of Z_p^d-towers of weighted graphs.
///
/// Exit status: 0 on success, 1 when a checked identity fails, 2 on input
/// errors.
#[derive(Debug, Parser)]
#[command(name = "iwagraph", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Graph file (JSON).
    #[arg(long)]
    graph: PathBuf,
    /// Finite-group voltage file (JSON) for cover, kida and product-check.
    #[arg(long)]
    beta: Option<PathBuf>,
    /// Prime p; overrides the graph file.
    #[arg(long)]
    prime: Option<u64>,
    /// Rank d of the voltage group; overrides the graph file.
    #[arg(long)]
    dims: Option<usize>,
    /// Highest layer computed explicitly.
    #[arg(long, default_value_t = 2)]
    nmax: u32,
    /// Half-width of the direction box used for lambda when d >= 2.
    #[arg(long = "box", default_value_t = iwagraph::invariants::DEFAULT_BOX)]
    box_bound: u32,
    /// Rational evaluation point for qwalk.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Allow layers beyond |V| p^(d nmax) <= 2500.
    #[arg(long)]
    force_size: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = RunConfig {
        command: cli.command,
        graph: cli.graph,
        beta: cli.beta,
        prime: cli.prime,
        dims: cli.dims,
        nmax: cli.nmax,
        box_bound: cli.box_bound,
        a: cli.a,
        format: cli.format,
        jobs: cli.jobs,
        force_size: cli.force_size,
        out: cli.out,
    };
    let out = run(&config);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.exit_code as u8)
}
