use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use buchi_min::ba::{parse_ba, serialize_ba};
use buchi_min::inclusion::{check_inclusion, InclusionConfig, InclusionVerdict, Outcome, Sizes, Stage, StageTimes};
use buchi_min::randgen::{derive_seed, saturation_probability, tabakov_vardi, to_f64, transitions_per_symbol, RandomSpec};
use buchi_min::reduce::{minimize, MinimizeConfig, MinimizeStats};
use buchi_min::Automaton;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

const SCHEMA: u32 = 1;

/// Minimization and language inclusion for Büchi automata.
#[derive(Parser)]
#[command(name = "buchi-min", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize an automaton with Heavy-k or Light-k.
    Minimize {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Heavy)]
        method: Method,
        #[arg(short = 'k', long = "lookahead", default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Output file; stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write run statistics as JSON.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// Decide L(A) ⊆ L(B). Exit 0 included, 1 not included, 3 unknown, 2 on error.
    Include {
        a: PathBuf,
        b: PathBuf,
        #[arg(short = 'k', long = "lookahead", default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Stem bound of the counterexample search.
        #[arg(long)]
        max_u: Option<usize>,
        /// Cycle bound of the counterexample search.
        #[arg(long)]
        max_v: Option<usize>,
        /// Budget of the counterexample search.
        #[arg(long, default_value_t = 10_000)]
        timeout_ms: u64,
    },
    /// Generate a Tabakov-Vardi random automaton.
    Generate {
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 2.0)]
        td: f64,
        #[arg(long, default_value_t = 0.5)]
        ad: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Probability that a random automaton has a transition for every state and symbol.
    Saturation {
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long)]
        td: f64,
    },
    /// Mean minimized size and time over random automata, as CSV.
    Sweep {
        /// A value or a range START..END[:STEP] (step 0.1 by default).
        #[arg(long, default_value = "1.0..3.0")]
        td: TdRange,
        /// Lookaheads to run, comma separated. Ignored by `--method rd`.
        #[arg(short = 'k', long = "lookahead", value_delimiter = ',', default_value = "12")]
        k: Vec<u32>,
        #[arg(long, value_enum, default_value_t = SweepMethod::Heavy)]
        method: SweepMethod,
        #[arg(long, default_value_t = 50)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 0.5)]
        ad: f64,
        #[arg(long, default_value_t = 30)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leave out the time column, making the output reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Heavy,
    Light,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SweepMethod {
    Heavy,
    Light,
    /// Remove dead states only.
    Rd,
}

impl Method {
    fn config(self, k: usize) -> MinimizeConfig {
        match self {
            Method::Heavy => MinimizeConfig::heavy(k),
            Method::Light => MinimizeConfig::light(k),
        }
    }
}

#[derive(Clone, Debug)]
struct TdRange(Vec<f64>);

impl std::str::FromStr for TdRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let Some((start, rest)) = s.split_once("..") else {
            return Ok(TdRange(vec![num(s)?]));
        };
        let (end, step) = match rest.split_once(':') {
            Some((e, st)) => (num(e)?, num(st)?),
            None => (num(rest)?, 0.1),
        };
        let start = num(start)?;
        if step <= 0.0 || end < start {
            return Err(format!("empty range {s:?}"));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize + 1;
        // values are rounded to 6 decimals so 1.0 + 3·0.1 prints as 1.3
        let values = (0..count)
            .map(|i| ((start + i as f64 * step) * 1e6).round() / 1e6)
            .collect();
        Ok(TdRange(values))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Minimize { input, method, k, output, stats } => cmd_minimize(&input, method, k as usize, output, stats),
        Command::Include { a, b, k, max_u, max_v, timeout_ms } => {
            let cfg = InclusionConfig {
                k: k as usize,
                max_u,
                max_v,
                timeout: Some(Duration::from_millis(timeout_ms)),
            };
            cmd_include(&a, &b, &cfg)
        }
        Command::Generate { states, alphabet, td, ad, seed, output } => {
            let spec = RandomSpec { states, symbols: alphabet, td, ad, seed };
            check_spec(&spec).and_then(|()| write_out(output.as_deref(), &serialize_ba(&tabakov_vardi(&spec))))
        }
        Command::Saturation { states, alphabet, td } => cmd_saturation(states, alphabet, td),
        Command::Sweep { td, k, method, states, alphabet, ad, samples, seed, no_timing, output } => {
            let ks: Vec<usize> = if method == SweepMethod::Rd { vec![0] } else { k.iter().map(|&k| k as usize).collect() };
            let sweep = Sweep { tds: td.0, ks, method, states, alphabet, ad, samples, seed, timing: !no_timing };
            cmd_sweep(&sweep, output.as_deref())
        }
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("buchi-min: {msg}");
            ExitCode::from(2)
        }
    }
}

type CmdResult = Result<ExitCode, String>;

fn read(path: &Path) -> Result<Automaton, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_ba(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn check_spec(spec: &RandomSpec) -> Result<(), String> {
    if spec.states == 0 || spec.symbols == 0 {
        return Err("--states and --alphabet must be positive".into());
    }
    if !(spec.td >= 0.0 && spec.td <= spec.states as f64) {
        return Err(format!("--td must lie in [0, {}]", spec.states));
    }
    if !(spec.ad > 0.0 && spec.ad <= 1.0) {
        return Err("--ad must lie in (0, 1]".into());
    }
    Ok(())
}

#[derive(Serialize)]
struct StatsFile<'a> {
    schema: u32,
    input: String,
    #[serde(flatten)]
    stats: &'a MinimizeStats,
}

fn cmd_minimize(input: &Path, method: Method, k: usize, output: Option<PathBuf>, stats: Option<PathBuf>) -> CmdResult {
    let a = read(input)?;
    let (m, st) = minimize(&a, &method.config(k));
    if m.num_states() == 0 {
        eprintln!("buchi-min: the language is empty; the output file is empty");
    }
    write_out(output.as_deref(), &serialize_ba(&m))?;
    if let Some(path) = stats {
        let file = StatsFile { schema: SCHEMA, input: input.display().to_string(), stats: &st };
        let text = serde_json::to_string_pretty(&file).map_err(|e| e.to_string())?;
        fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct Witness<'a> {
    u: Vec<&'a str>,
    v: Vec<&'a str>,
}

#[derive(Serialize)]
struct VerdictFile<'a> {
    schema: u32,
    outcome: Outcome,
    stage: Option<Stage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Witness<'a>>,
    /// Initial state of `A` and the initial state of `B` simulating it.
    #[serde(skip_serializing_if = "Option::is_none")]
    matching: Option<&'a [(String, String)]>,
    times_ms: &'a StageTimes,
    sizes: &'a Sizes,
}

fn verdict_file<'a>(a: &'a Automaton, v: &'a InclusionVerdict) -> VerdictFile<'a> {
    VerdictFile {
        schema: SCHEMA,
        outcome: v.outcome,
        stage: v.stage,
        witness: v.witness.as_ref().map(|w| {
            let (u, v) = w.labels(a.alphabet());
            Witness { u, v }
        }),
        matching: (v.outcome == Outcome::Included).then_some(v.matching.as_slice()),
        times_ms: &v.times_ms,
        sizes: &v.sizes,
    }
}

fn cmd_include(a: &Path, b: &Path, cfg: &InclusionConfig) -> CmdResult {
    let (a, b) = (read(a)?, read(b)?);
    let v = check_inclusion(&a, &b, cfg).map_err(|e| e.to_string())?;
    println!("{}", serde_json::to_string_pretty(&verdict_file(&a, &v)).map_err(|e| e.to_string())?);
    Ok(ExitCode::from(match v.outcome {
        Outcome::Included => 0,
        Outcome::NotIncluded => 1,
        Outcome::Unknown => 3,
    }))
}

fn cmd_saturation(n: usize, s: usize, td: f64) -> CmdResult {
    if n == 0 || s == 0 || td < 0.0 {
        return Err("--states and --alphabet must be positive, --td nonnegative".into());
    }
    let u = saturation_probability(n, s, td);
    println!("n={n} alphabet={s} td={td} T={}", transitions_per_symbol(n, td));
    println!("exact: {u}");
    println!("decimal: {:e}", to_f64(&u));
    Ok(ExitCode::SUCCESS)
}

struct Sweep {
    tds: Vec<f64>,
    ks: Vec<usize>,
    method: SweepMethod,
    states: usize,
    alphabet: usize,
    ad: f64,
    samples: u64,
    seed: u64,
    timing: bool,
}

impl Sweep {
    /// Size and milliseconds for one sample. Samples at the same `td` share
    /// automata across lookaheads.
    fn run(&self, row: usize, k: usize, i: u64) -> (usize, f64) {
        let spec = RandomSpec {
            states: self.states,
            symbols: self.alphabet,
            td: self.tds[row],
            ad: self.ad,
            seed: derive_seed(derive_seed(self.seed, row as u64), i),
        };
        let a = tabakov_vardi(&spec);
        let t = Instant::now();
        let size = match self.method {
            SweepMethod::Rd => a.remove_dead().num_states(),
            SweepMethod::Heavy => minimize(&a, &Method::Heavy.config(k)).0.num_states(),
            SweepMethod::Light => minimize(&a, &Method::Light.config(k)).0.num_states(),
        };
        (size, t.elapsed().as_secs_f64() * 1e3)
    }
}

fn cmd_sweep(sw: &Sweep, output: Option<&Path>) -> CmdResult {
    for &td in &sw.tds {
        check_spec(&RandomSpec { states: sw.states, symbols: sw.alphabet, td, ad: sw.ad, seed: 0 })?;
    }
    if sw.samples == 0 {
        return Err("--samples must be positive".into());
    }
    let jobs: Vec<(usize, usize)> = (0..sw.tds.len()).flat_map(|r| sw.ks.iter().map(move |&k| (r, k))).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(jobs.len());
    let mut results = vec![(0.0, 0.0); jobs.len()];
    std::thread::scope(|scope| {
        for (w, chunk) in results.chunks_mut(jobs.len().div_ceil(workers)).enumerate() {
            let start = w * jobs.len().div_ceil(workers);
            let jobs = &jobs;
            scope.spawn(move || {
                for (j, slot) in chunk.iter_mut().enumerate() {
                    let (row, k) = jobs[start + j];
                    let (mut size, mut ms) = (0usize, 0.0);
                    for i in 0..sw.samples {
                        let (s, t) = sw.run(row, k, i);
                        size += s;
                        ms += t;
                    }
                    *slot = (size as f64 / sw.samples as f64, ms / sw.samples as f64);
                }
            });
        }
    });
    let mut csv = String::from(if sw.timing { "td,k,mean_states,mean_ms\n" } else { "td,k,mean_states\n" });
    for (&(row, k), &(size, ms)) in jobs.iter().zip(&results) {
        csv += &format!("{:?},{k},{size:.4}", sw.tds[row]);
        if sw.timing {
            csv += &format!(",{ms:.3}");
        }
        csv.push('\n');
    }
    write_out(output, &csv)
}
