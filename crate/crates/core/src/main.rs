use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hsim::bench::{
    self, EvaluationReport, NoiseConfig, ReportFormat, SweepConfig, DEFAULT_ERROR_RATES,
};
use hsim::circuit::trotterize;
use hsim::grouping::{build_commutation_graph, min_clique_cover};
use hsim::sequencer::sequence_cliques;
use hsim::simulation::{
    hellinger_distance, hellinger_infidelity, ideal_distribution, noisy_distribution,
    trotter_error, InfidelityConvention, InitialState, NoiseModel, MAX_UNITARY_WIDTH,
};
use hsim::tsp::{path_cost, tsp_path, TspInstance};
use hsim::{order, parse_hamiltonian, sequence_cnot_cost, Hamiltonian, HsimError, Strategy};

#[derive(Parser, Debug)]
#[command(
    name = "hsim",
    version,
    about = "Trotter circuit compiler and term-ordering evaluator"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Hamiltonian file (`<coefficient> <pauli-string>` per line). Repeat for
    /// multi-input sweeps.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    /// Seed for the random strategy.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    QasmLike,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Pair,
    Independent,
}

impl From<Model> for NoiseModel {
    fn from(m: Model) -> NoiseModel {
        match m {
            Model::Pair => NoiseModel::PairReplacement,
            Model::Independent => NoiseModel::IndependentQubits,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order the terms with one strategy.
    Order {
        #[arg(long, default_value = "mctsp")]
        strategy: String,
    },
    /// Greedy cover of the commutation graph by commuting cliques.
    Cover,
    /// Open TSP path through one clique under the CNOT distance.
    Tsp {
        #[arg(long, default_value_t = 0)]
        clique: usize,
    },
    /// Clique sequencing by greedy tree growth.
    Sequence,
    /// Emit the Trotter circuit.
    Compile {
        #[arg(long, default_value = "mctsp")]
        strategy: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, value_enum, default_value_t = Emit::QasmLike)]
        emit: Emit,
    },
    /// Noisy and noiseless output distributions of one circuit.
    Simulate {
        #[arg(long, default_value = "mctsp")]
        strategy: String,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// `ghz-like`, `zero` or `basis:<k>`.
        #[arg(long, default_value = "ghz-like")]
        init: String,
        #[arg(long, value_enum, default_value_t = Model::Pair)]
        noise_model: Model,
    },
    /// Smallest Trotter number meeting the diamond-distance threshold.
    Sweep {
        #[arg(long, value_delimiter = ',', default_value = "1.0")]
        t: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 64)]
        r_max: usize,
        /// Strategies to compare; all five by default.
        #[arg(long, value_delimiter = ',')]
        strategy: Vec<String>,
    },
    /// Hellinger metrics under depolarizing noise.
    Noise {
        #[arg(long, value_delimiter = ',')]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "lex,mag,mctsp")]
        strategy: Vec<String>,
        #[arg(long, default_value = "ghz-like")]
        init: String,
        #[arg(long, value_enum, default_value_t = Model::Pair)]
        noise_model: Model,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
}

enum Failure {
    Usage(String),
    Hsim(HsimError),
    Io(String),
}

impl From<HsimError> for Failure {
    fn from(e: HsimError) -> Failure {
        Failure::Hsim(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn load(path: &Path) -> CliResult<Hamiltonian> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    parse_hamiltonian(&text)
        .map_err(|e| Failure::Hsim(HsimError::Input(format!("{}: {e}", path.display()))))
}

fn single_input(g: &Global) -> CliResult<Hamiltonian> {
    match g.input.as_slice() {
        [p] => load(p),
        [] => Err(Failure::Usage("--input is required".into())),
        _ => Err(Failure::Usage(
            "this command takes exactly one --input".into(),
        )),
    }
}

fn strategy(name: &str, seed: u64) -> CliResult<Strategy> {
    Ok(Strategy::from_cli_name(name, seed)?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn structured(
    g: &Global,
    value: serde_json::Value,
    text: impl FnOnce() -> String,
) -> CliResult<String> {
    match g.format {
        Format::Json => Ok(pretty(&value)),
        Format::Text => Ok(text()),
        Format::Csv => Err(Failure::Usage(
            "csv output is only available for sweep and noise".into(),
        )),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn report_format(g: &Global) -> CliResult<ReportFormat> {
    match g.format {
        Format::Json => Ok(ReportFormat::Json),
        Format::Csv => Ok(ReportFormat::Csv),
        Format::Text => Err(Failure::Usage("reports are json or csv".into())),
    }
}

fn input_label(p: &Path) -> String {
    p.display().to_string()
}

fn run(cli: &Cli) -> CliResult<(String, bool)> {
    let g = &cli.global;
    let out = match &cli.command {
        Command::Order { strategy: name } => {
            let h = single_input(g)?;
            let o = order(&h, strategy(name, g.seed)?);
            let names: Vec<String> = o
                .ordered_strings(&h)
                .iter()
                .map(|s| s.to_string())
                .collect();
            let cost = o.cnot_cost(&h);
            let v = json!({
                "strategy": o.strategy.cli_name(),
                "permutation": o.permutation,
                "terms": names,
                "clique_boundaries": o.clique_boundaries,
                "cnot_cost": cost,
            });
            structured(g, v, || format!("{}\ncnot_cost {cost}\n", names.join("\n")))?
        }
        Command::Cover => {
            let h = single_input(g)?;
            let cover = min_clique_cover(&build_commutation_graph(&h));
            let v = json!({ "cliques": cover.cliques() });
            structured(g, v, || {
                cover.cliques().iter().map(|c| join(c) + "\n").collect()
            })?
        }
        Command::Tsp { clique } => {
            let h = single_input(g)?;
            let cover = min_clique_cover(&build_commutation_graph(&h));
            let members = cover.cliques().get(*clique).ok_or_else(|| {
                Failure::Hsim(HsimError::Input(format!(
                    "clique {clique} out of range ({} cliques)",
                    cover.len()
                )))
            })?;
            let strings = h.strings();
            let inst = TspInstance::new(members.iter().map(|&i| strings[i].clone()).collect())?;
            let lex = inst.lexicographic_order();
            let path = tsp_path(&inst);
            let order: Vec<usize> = path.iter().map(|&k| members[k]).collect();
            let names: Vec<String> = order.iter().map(|&i| strings[i].to_string()).collect();
            let seq = |p: &[usize]| {
                sequence_cnot_cost(
                    &p.iter()
                        .map(|&k| inst.nodes()[k].clone())
                        .collect::<Vec<_>>(),
                )
            };
            let v = json!({
                "clique": clique,
                "order": order,
                "terms": names,
                "path_cost": path_cost(&inst, &path)?,
                "lexicographic_path_cost": path_cost(&inst, &lex)?,
                "cnot_cost": seq(&path)?,
                "lexicographic_cnot_cost": seq(&lex)?,
            });
            let text = format!(
                "{}\npath_cost {}\ncnot_cost {}\n",
                names.join("\n"),
                v["path_cost"],
                v["cnot_cost"]
            );
            structured(g, v, || text)?
        }
        Command::Sequence => {
            let h = single_input(g)?;
            let graph = build_commutation_graph(&h);
            let cover = min_clique_cover(&graph);
            let res = sequence_cliques(&h, &cover, &graph);
            let v = json!({
                "cliques": cover.cliques(),
                "candidate_count": res.candidate_count,
                "permutation": res.permutation,
                "score": res.score,
            });
            structured(g, v, || {
                format!(
                    "{}\nscore {}\ncandidates {}\n",
                    join(&res.permutation),
                    res.score,
                    res.candidate_count
                )
            })?
        }
        Command::Compile {
            strategy: name,
            t,
            r,
            emit,
        } => {
            let h = single_input(g)?;
            let c = trotterize(&h, &order(&h, strategy(name, g.seed)?), *t, *r)?;
            match emit {
                Emit::QasmLike => c.to_text(),
                Emit::Json => pretty(&serde_json::to_value(&c).expect("circuit json")),
            }
        }
        Command::Simulate {
            strategy: name,
            t,
            r,
            noise,
            init,
            noise_model,
        } => {
            let h = single_input(g)?;
            let s = strategy(name, g.seed)?;
            let ordering = order(&h, s);
            let c = trotterize(&h, &ordering, *t, *r)?;
            let amps = init.parse::<InitialState>()?.amplitudes(h.width())?;
            let ideal = ideal_distribution(&c, &amps)?;
            let noisy = noisy_distribution(&c, &amps, *noise, (*noise_model).into())?;
            let trotter = if h.width() <= MAX_UNITARY_WIDTH {
                Some(trotter_error(&h, &ordering, *t, *r)?)
            } else {
                None
            };
            let d = hellinger_distance(&noisy, &ideal)?;
            let v = json!({
                "strategy": s.cli_name(),
                "t": t,
                "r": r,
                "p": noise,
                "cnot_count": c.cnot_count(),
                "trotter_error": trotter,
                "ideal": ideal.probabilities(),
                "noisy": noisy.probabilities(),
                "hellinger_distance": d,
                "hellinger_infidelity": hellinger_infidelity(&noisy, &ideal, InfidelityConvention::SquaredFidelity)?,
                "hellinger_infidelity_literal": hellinger_infidelity(&noisy, &ideal, InfidelityConvention::Literal)?,
            });
            let text = format!(
                "cnot_count {}\nhellinger_distance {d}\ninfidelity {}\n",
                c.cnot_count(),
                v["hellinger_infidelity"]
            );
            structured(g, v, || text)?
        }
        Command::Sweep {
            t,
            epsilon,
            r_max,
            strategy: names,
        } => {
            let fmt = report_format(g)?;
            let strategies = if names.is_empty() {
                Strategy::all(g.seed).to_vec()
            } else {
                names
                    .iter()
                    .map(|n| strategy(n, g.seed))
                    .collect::<CliResult<_>>()?
            };
            let config = SweepConfig {
                t_values: t.clone(),
                epsilon: *epsilon,
                r_max: *r_max,
                strategies,
                seed: g.seed,
            };
            if g.input.is_empty() {
                return Err(Failure::Usage("--input is required".into()));
            }
            let mut report = EvaluationReport::empty();
            report.sweep_config = Some(config.clone());
            for path in &g.input {
                report.merge(bench::sweep(&config, &load(path)?, &input_label(path))?);
            }
            report.stamp_now();
            return Ok((bench::report_emit(&report, fmt)?, report.has_errors()));
        }
        Command::Noise {
            p,
            strategy: names,
            init,
            noise_model,
            t,
            r,
        } => {
            let fmt = report_format(g)?;
            let config = NoiseConfig {
                p_values: if p.is_empty() {
                    DEFAULT_ERROR_RATES.to_vec()
                } else {
                    p.clone()
                },
                strategies: names
                    .iter()
                    .map(|n| strategy(n, g.seed))
                    .collect::<CliResult<_>>()?,
                init: init.parse()?,
                model: (*noise_model).into(),
                t: *t,
                r: *r,
            };
            if g.input.is_empty() {
                return Err(Failure::Usage("--input is required".into()));
            }
            let mut report = EvaluationReport::empty();
            report.noise_config = Some(config.clone());
            for path in &g.input {
                report.merge(bench::noise_run(&load(path)?, &config, &input_label(path))?);
            }
            report.stamp_now();
            return Ok((bench::report_emit(&report, fmt)?, report.has_errors()));
        }
    };
    Ok((out, false))
}

fn emit(g: &Global, text: &str) -> std::io::Result<()> {
    match &g.out {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("HSIM_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    configure_threads();
    match run(&cli) {
        Ok((text, cell_errors)) => {
            if let Err(e) = emit(&cli.global, &text) {
                eprintln!("hsim: {e}");
                return ExitCode::from(2);
            }
            if cell_errors {
                eprintln!("hsim: some cells failed; see the report's error fields");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("hsim: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("hsim: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Hsim(e)) => {
            eprintln!("hsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
