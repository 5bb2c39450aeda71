use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use icspread::bench::{bench_graph, rows_to_csv};
use icspread::format::{parse_graph, parse_order, parse_pathdec, parse_seeds, read_file, FormatError, GraphFile};
use icspread::generate::{generate, Family, Probs};
use icspread::greedy::greedy;
use icspread::montecarlo::{monte_carlo, RNG_NAME};
use icspread::report::{RunReport, TraceRow, VertexRow};
use icspread::verify::{verify, verify_random};
use icspread_core::all_targets::Phase;
use icspread_core::oracle::brute_force;
use icspread_core::pipeline::{spread_observed, target_probability, OrderingSource, SpreadRun, DEFAULT_MAX_WIDTH};
use icspread_core::{OracleError, PathDecomposition, SeedSet, SpreadError, VertexId};

#[derive(Parser)]
#[command(name = "icspread", version, about = "Exact reachability probabilities and influence spread on uncertain digraphs")]
struct Cli {
    /// Graph file: vertex count, then `tail head p` lines.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Path decomposition file: one bag per line.
    #[arg(long, global = true, conflicts_with = "order")]
    pathdec: Option<PathBuf>,
    /// Edge order file: 0-based indices of the graph file's edge lines.
    #[arg(long, global = true)]
    order: Option<PathBuf>,
    /// Seed vertices, comma separated.
    #[arg(long, global = true)]
    seeds: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest frontier width to attempt.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_WIDTH)]
    max_width: usize,
    #[arg(long, global = true, default_value_t = 1)]
    rng_seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// P(S ⇝ v) for every vertex and the spread, with the shared algorithm.
    Spread,
    /// P(S ⇝ v) for one target with the per-target algorithm.
    Single {
        #[arg(long)]
        target: String,
    },
    /// Exhaustive enumeration of all edge subsets.
    Oracle {
        /// Also count the subsets in which this vertex is reached.
        #[arg(long)]
        target: Option<String>,
    },
    /// Monte-Carlo estimate with standard errors.
    Mc {
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
    },
    /// Compare the shared algorithm, the per-target algorithm and enumeration.
    Verify {
        /// Check this many random small graphs instead of --graph.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Time both algorithms on a generated family; prints CSV.
    Bench {
        #[arg(long, default_value = "path")]
        family: Family,
        /// Edge counts, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "1000,10000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        width: usize,
        /// Per-target runs timed per size; the rest is extrapolated.
        #[arg(long, default_value_t = 200)]
        max_targets: usize,
    },
    /// Greedy seed selection by exact spread.
    Greedy {
        #[arg(long)]
        k: usize,
    },
}

/// Failure classes with distinct exit codes.
enum Failure {
    Validation(String),
    Guard(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<SpreadError> for Failure {
    fn from(e: SpreadError) -> Self {
        match e {
            SpreadError::WidthExceeded { .. } => {
                Failure::Guard(format!("{e}; supply a narrower --order/--pathdec or raise --max-width"))
            }
            e => Failure::Validation(e.to_string()),
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Failure::Guard(e.to_string())
    }
}

struct Inputs {
    file: GraphFile,
    seeds: Option<SeedSet>,
    pathdec: Option<PathDecomposition>,
    order: Option<Vec<usize>>,
}

impl Inputs {
    fn load(cli: &Cli) -> Result<Self, Failure> {
        let path = cli.graph.as_ref().ok_or_else(|| Failure::Validation("--graph is required".into()))?;
        let file = parse_graph(&read_file(path)?)?;
        let seeds = cli.seeds.as_deref().map(|s| parse_seeds(s, &file.symbols)).transpose()?;
        let pathdec = cli.pathdec.as_ref().map(|p| parse_pathdec(&read_file(p)?, &file.symbols)).transpose()?;
        let order = cli.order.as_ref().map(|p| parse_order(&read_file(p)?, &file)).transpose()?;
        Ok(Inputs { file, seeds, pathdec, order })
    }

    fn seeds(&self) -> Result<&SeedSet, Failure> {
        self.seeds.as_ref().ok_or_else(|| Failure::Validation("--seeds is required".into()))
    }

    fn source(&self) -> OrderingSource<'_> {
        match (&self.pathdec, &self.order) {
            (Some(pd), _) => OrderingSource::Decomposition(pd),
            (None, Some(o)) => OrderingSource::Explicit(o),
            (None, None) => OrderingSource::Heuristic,
        }
    }

    fn vertex(&self, label: &str) -> Result<VertexId, Failure> {
        Ok(self.file.symbols.resolve(label)?)
    }

    fn report(&self, command: &str) -> RunReport {
        let g = &self.file.graph;
        let mut r = RunReport::new(command);
        r.n = g.n();
        r.m = g.m();
        r.self_loops_dropped = self.file.self_loops;
        r.omega_p = self.pathdec.as_ref().map(|pd| pd.width());
        if let Some(s) = &self.seeds {
            r.seeds = s.members().iter().map(|&v| self.file.symbols.label(v).to_string()).collect();
        }
        r
    }

    fn rows(&self, probs: &[f64], stderr: Option<&[f64]>) -> Vec<VertexRow> {
        let seeds = self.seeds.as_ref();
        (0..probs.len())
            .filter(|&v| seeds.is_none_or(|s| !s.contains(v as VertexId)))
            .map(|v| VertexRow {
                vertex: self.file.symbols.label(v as VertexId).to_string(),
                probability: probs[v],
                stderr: stderr.map(|s| s[v]),
            })
            .collect()
    }
}

fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::Diagrams => "diagrams",
        Phase::PForward => "p_forward",
        Phase::QBackward => "q_backward",
        Phase::RBackward => "r_backward",
        Phase::Assemble => "assemble",
    }
}

/// Runs the shared pipeline and accumulates wall time per phase.
fn timed_spread(inputs: &Inputs, seeds: &SeedSet, max_width: usize) -> Result<(SpreadRun, BTreeMap<String, f64>), Failure> {
    let mut seconds: BTreeMap<String, f64> = BTreeMap::new();
    let mut open: Option<(Phase, Instant)> = None;
    let start = Instant::now();
    let run = spread_observed(&inputs.file.graph, seeds, inputs.source(), max_width, &mut |p| {
        let now = Instant::now();
        if let Some((prev, at)) = open.replace((p, now)) {
            *seconds.entry(phase_name(prev).into()).or_default() += (now - at).as_secs_f64();
        }
    })?;
    if let Some((prev, at)) = open {
        *seconds.entry(phase_name(prev).into()).or_default() += at.elapsed().as_secs_f64();
    }
    seconds.insert("total".into(), start.elapsed().as_secs_f64());
    Ok((run, seconds))
}

fn fill_spread(r: &mut RunReport, inputs: &Inputs, run: &SpreadRun) {
    r.vertices = inputs.rows(&run.per_vertex, None);
    r.sigma = Some(run.result.sigma);
    r.sigma_with_seeds = Some(run.result.sigma_with_seeds);
    r.omega = Some(run.omega());
    let peak = |f: fn(&icspread_core::pipeline::ComponentStats) -> &Vec<usize>| {
        run.components.iter().flat_map(|c| f(c).iter().copied()).max().unwrap_or(0)
    };
    r.peak_states.insert("stc".into(), peak(|c| &c.stc_level_sizes));
    r.peak_states.insert("tc".into(), peak(|c| &c.tc_level_sizes));
}

enum Output {
    Report(Box<RunReport>),
    Csv(String),
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    Ok(Output::Report(Box::new(match &cli.command {
        Command::Spread => {
            let inputs = Inputs::load(cli)?;
            let (run, seconds) = timed_spread(&inputs, inputs.seeds()?, cli.max_width)?;
            let mut r = inputs.report("spread");
            fill_spread(&mut r, &inputs, &run);
            r.seconds = seconds;
            r.metadata.insert("mass_error".into(), format!("{:e}", run.mass_error()));
            r
        }
        Command::Single { target } => {
            let inputs = Inputs::load(cli)?;
            let v = inputs.vertex(target)?;
            let start = Instant::now();
            let (p, stats) = target_probability(&inputs.file.graph, inputs.seeds()?, inputs.source(), cli.max_width, v)?;
            let mut r = inputs.report("single");
            r.seconds.insert("total".into(), start.elapsed().as_secs_f64());
            r.vertices = vec![VertexRow { vertex: target.clone(), probability: p, stderr: None }];
            if let Some(s) = stats {
                r.omega = Some(s.omega);
                r.peak_states.insert("tc".into(), s.tc_level_sizes.iter().copied().max().unwrap_or(0));
                r.metadata.insert("levels".into(), s.tc_level_sizes.len().to_string());
            }
            r
        }
        Command::Oracle { target } => {
            let inputs = Inputs::load(cli)?;
            let seeds = inputs.seeds()?;
            let start = Instant::now();
            let o = brute_force(&inputs.file.graph, seeds)?;
            let mut r = inputs.report("oracle");
            r.seconds.insert("total".into(), start.elapsed().as_secs_f64());
            r.vertices = inputs.rows(&o.probs, None);
            r.sigma = Some(o.sigma);
            r.sigma_with_seeds = Some(o.sigma + seeds.len() as f64);
            r.metadata.insert("subsets_evaluated".into(), o.subsets_evaluated.to_string());
            r.metadata.insert("total_mass".into(), o.total_mass.to_string());
            if let Some(t) = target {
                let v = inputs.vertex(t)?;
                r.metadata.insert("contributing_subsets".into(), o.contributing[v as usize].to_string());
            }
            r
        }
        Command::Mc { samples } => {
            if *samples == 0 {
                return Err(Failure::Validation("--samples must be at least 1".into()));
            }
            let inputs = Inputs::load(cli)?;
            let start = Instant::now();
            let est = monte_carlo(&inputs.file.graph, inputs.seeds()?, *samples, cli.rng_seed);
            let mut r = inputs.report("mc");
            r.seconds.insert("total".into(), start.elapsed().as_secs_f64());
            r.vertices = inputs.rows(&est.mean, Some(&est.stderr));
            r.sigma = Some(est.sigma);
            r.sigma_with_seeds = Some(est.sigma + inputs.seeds()?.len() as f64);
            r.metadata.insert("rng".into(), RNG_NAME.into());
            r.metadata.insert("rng_seed".into(), cli.rng_seed.to_string());
            r.metadata.insert("samples".into(), samples.to_string());
            r.metadata.insert("sigma_stderr".into(), icspread::report::sig12(est.sigma_stderr).to_string());
            r
        }
        Command::Verify { random: Some(count) } => {
            let mut r = RunReport::new("verify");
            r.deltas = verify_random(*count, cli.rng_seed, cli.max_width)?;
            r.metadata.insert("graphs".into(), count.to_string());
            r.metadata.insert("rng".into(), RNG_NAME.into());
            r.metadata.insert("rng_seed".into(), cli.rng_seed.to_string());
            r
        }
        Command::Verify { random: None } => {
            let inputs = Inputs::load(cli)?;
            let v = verify(&inputs.file.graph, inputs.seeds()?, inputs.source(), cli.max_width)?;
            let mut r = inputs.report("verify");
            fill_spread(&mut r, &inputs, &v.all_targets);
            r.deltas = v.deltas;
            r
        }
        Command::Bench { family, sizes, width, max_targets } => {
            let mut rows = Vec::with_capacity(sizes.len());
            for &m in sizes {
                let g = generate(*family, m, *width, Probs::Random(cli.rng_seed));
                if g.n() < 2 {
                    continue;
                }
                rows.push(bench_graph(&g, *max_targets)?);
            }
            return Ok(Output::Csv(rows_to_csv(&rows)));
        }
        Command::Greedy { k } => {
            let inputs = Inputs::load(cli)?;
            let g = &inputs.file.graph;
            if *k > g.n() {
                return Err(Failure::Validation(format!("k = {k} exceeds n = {}", g.n())));
            }
            let start = Instant::now();
            let trace = greedy(g, *k, inputs.source(), cli.max_width)?;
            let mut r = inputs.report("greedy");
            r.seconds.insert("total".into(), start.elapsed().as_secs_f64());
            r.seeds = trace.iter().map(|s| inputs.file.symbols.label(s.vertex).to_string()).collect();
            r.trace = trace
                .iter()
                .map(|s| TraceRow {
                    vertex: inputs.file.symbols.label(s.vertex).to_string(),
                    sigma: s.sigma,
                    sigma_with_seeds: s.sigma_with_seeds,
                })
                .collect();
            r
        }
    })))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match run(&cli) {
        Ok(Output::Csv(text)) => text,
        Ok(Output::Report(r)) => match cli.format {
            Format::Text => r.to_text(),
            Format::Json => r.to_json() + "\n",
            Format::Csv => r.to_csv(),
        },
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("refused: {msg}");
            return ExitCode::from(2);
        }
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}
