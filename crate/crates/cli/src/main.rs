//! `chancode`: check and generate error-detecting block codes for channels
//! given as transducers.
//!
//! Exit codes: 0 success, 1 usage, file or parse error, 2 invalid or
//! non-detecting input code, 3 property violated (or code not maximal).

mod experiment;
mod inputs;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use chancode::channels::serialize_channel;
use chancode::codegen::{format_ratio, parse_ratio, GenParams};
use chancode::properties::{
    correction_witness, detection_witness, maximality_index, maximality_witness,
};
use chancode::{make_code, Alphabet, Channel, GenReport, Trellis, Witness};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use inputs::{load_channel, load_channels, load_code, load_universe};

#[derive(Parser)]
#[command(
    name = "chancode",
    version,
    about = "Error-detecting block codes for transducer channels"
)]
struct Cli {
    /// Alphabet as a string of distinct symbols.
    #[arg(long, global = true, default_value = "01")]
    alphabet: String,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a random error-detecting code.
    Gen(GenArgs),
    /// Check that a code is error-detecting.
    Check(CodeArgs),
    /// Check that a code is error-correcting.
    CorrectCheck(CodeArgs),
    /// Print an addable word, or MAXIMAL.
    Maximal(MaximalArgs),
    /// Print the maximality index of an error-detecting code.
    Index(CodeArgs),
    /// Run repeated generations over a grid of cells.
    Experiment(ExperimentArgs),
    /// Inspect channels.
    #[command(subcommand)]
    Channel(ChannelCommand),
}

#[derive(Args)]
struct ChannelArgs {
    /// Registry name (see `channel list`) or transducer file; repeat to
    /// combine channels.
    #[arg(long = "channel", short = 'c', required = true)]
    channels: Vec<String>,
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Code file: one codeword per line, or an automaton.
    #[arg(long)]
    code: PathBuf,
    /// Word length; required only for an empty code.
    #[arg(long)]
    len: Option<usize>,
}

#[derive(Args)]
struct UniverseArgs {
    /// Sampling universe: `none`, `of` (overlap-free words) or a code file.
    #[arg(long)]
    universe: Option<String>,
    /// Restrict the universe to words ending with this suffix.
    #[arg(long)]
    end: Option<String>,
}

#[derive(Args)]
struct MaximalArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    universe: UniverseArgs,
}

#[derive(Args)]
struct RateArgs {
    /// Maximality threshold f, below 1.
    #[arg(long, default_value = "0.95")]
    f: String,
    /// Failure probability ε.
    #[arg(long, default_value = "0.05")]
    eps: String,
    /// RNG seed.
    #[arg(long, env = "CHANCODE_SEED", default_value_t = 0)]
    seed: u64,
    /// Append wall time to the output.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Word length.
    #[arg(long)]
    len: usize,
    /// Number of words to add.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[command(flatten)]
    rate: RateArgs,
    #[command(flatten)]
    universe: UniverseArgs,
    /// Error-detecting code to start from.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
    /// Also write the full final code, one word per line.
    #[arg(long)]
    code_out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Cell `CHANNEL,LEN,N[,end=SUFFIX][,of]`; join channels with `+`.
    #[arg(long = "cell")]
    cells: Vec<String>,
    /// Run the standard grid.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Repetitions per cell.
    #[arg(long, default_value_t = 21)]
    reps: usize,
    #[command(flatten)]
    rate: RateArgs,
    /// Allow lengths above 13 and N above 500.
    #[arg(long)]
    no_caps: bool,
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Table,
}

#[derive(Subcommand)]
enum ChannelCommand {
    /// List registry channels.
    List,
    /// Print a channel in the transducer text format.
    Show {
        /// Registry name or transducer file.
        channel: String,
        /// Show the inverse channel.
        #[arg(long)]
        inverse: bool,
    },
}

const EXIT_FAILURE: u8 = 1;
const EXIT_BAD_CODE: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_FAILURE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let bad_code = e.chain().any(|c| {
                matches!(
                    c.downcast_ref::<chancode::Error>(),
                    Some(chancode::Error::NotDetecting { .. })
                ) || c.downcast_ref::<BadCode>().is_some()
            });
            ExitCode::from(if bad_code {
                EXIT_BAD_CODE
            } else {
                EXIT_FAILURE
            })
        }
    }
}

/// The input code cannot be used (e.g. it violates a precondition).
#[derive(Debug)]
struct BadCode(String);

impl std::fmt::Display for BadCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadCode {}

fn run(cli: Cli) -> Result<u8> {
    let alphabet = Alphabet::from_chars(&cli.alphabet).context("parsing --alphabet")?;
    let format = cli.format;
    match cli.command {
        Command::Gen(args) => gen(&alphabet, format, args),
        Command::Check(args) => check(&alphabet, format, &args, false),
        Command::CorrectCheck(args) => check(&alphabet, format, &args, true),
        Command::Maximal(args) => maximal(&alphabet, format, &args),
        Command::Index(args) => index(&alphabet, format, &args),
        Command::Experiment(args) => run_experiment(&alphabet, format, args),
        Command::Channel(ChannelCommand::List) => {
            for (name, about) in Channel::registry() {
                println!("{name:<8} {about}");
            }
            Ok(0)
        }
        Command::Channel(ChannelCommand::Show { channel, inverse }) => {
            let mut ch = load_channel(&channel, &alphabet)?;
            if inverse {
                ch = ch.inverse();
            }
            print!("{}", serialize_channel(&ch));
            Ok(0)
        }
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load_inputs(alphabet: &Alphabet, args: &CodeArgs) -> Result<(Channel, Trellis)> {
    let channel = load_channels(&args.channel.channels, alphabet)?;
    let code = load_code(&args.code, alphabet, args.len)?;
    Ok((channel, code))
}

fn check(alphabet: &Alphabet, format: Format, args: &CodeArgs, correction: bool) -> Result<u8> {
    let (channel, code) = load_inputs(alphabet, args)?;
    let witness = if correction {
        correction_witness(&code, &channel)?
    } else {
        detection_witness(&code, &channel)?
    };
    let text = witness.render(alphabet);
    match format {
        Format::Text => println!("{text}"),
        Format::Json => print!(
            "{}",
            to_json(&json!({
                "channel": channel.name(),
                "property": if correction { "correcting" } else { "detecting" },
                "holds": witness.is_none(),
                "witness": text,
            }))?
        ),
    }
    Ok(if witness.is_none() { 0 } else { EXIT_VIOLATION })
}

fn require_detecting(code: &Trellis, channel: &Channel, alphabet: &Alphabet) -> Result<()> {
    let w = detection_witness(code, channel)?;
    if !w.is_none() {
        return Err(BadCode(format!(
            "code is not {}-detecting: {}",
            channel.name(),
            w.render(alphabet)
        ))
        .into());
    }
    Ok(())
}

fn maximal(alphabet: &Alphabet, format: Format, args: &MaximalArgs) -> Result<u8> {
    let (channel, code) = load_inputs(alphabet, &args.code)?;
    require_detecting(&code, &channel, alphabet)?;
    let universe = load_universe(
        args.universe.universe.as_deref(),
        args.universe.end.as_deref(),
        alphabet,
        code.len(),
    )?;
    let witness = maximality_witness(&code, &channel, universe.as_ref())?;
    let text = match &witness {
        Witness::None => "MAXIMAL".to_string(),
        w => w.render(alphabet),
    };
    match format {
        Format::Text => println!("{text}"),
        Format::Json => print!(
            "{}",
            to_json(&json!({
                "channel": channel.name(),
                "maximal": witness.is_none(),
                "witness": text,
            }))?
        ),
    }
    Ok(if witness.is_none() { 0 } else { EXIT_VIOLATION })
}

fn index(alphabet: &Alphabet, format: Format, args: &CodeArgs) -> Result<u8> {
    let (channel, code) = load_inputs(alphabet, args)?;
    require_detecting(&code, &channel, alphabet)?;
    let r = maximality_index(&code, &channel)?;
    let exact = if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    };
    let decimal = *r.numer() as f64 / *r.denom() as f64;
    match format {
        Format::Text => println!("{exact} {decimal:.6}"),
        Format::Json => print!(
            "{}",
            to_json(&json!({
                "channel": channel.name(),
                "numerator": r.numer().to_string(),
                "denominator": r.denom().to_string(),
                "index": exact,
                "decimal": decimal,
            }))?
        ),
    }
    Ok(0)
}

fn gen_params(rate: &RateArgs, count: usize) -> Result<GenParams> {
    let params = GenParams {
        count,
        f: parse_ratio(&rate.f).context("--f")?,
        eps: parse_ratio(&rate.eps).context("--eps")?,
        seed: rate.seed,
        stream: 0,
    };
    params.trial_bound()?;
    Ok(params)
}

#[derive(Serialize)]
struct JsonReport<'a> {
    channel: &'a str,
    alphabet: String,
    length: usize,
    n_target: usize,
    f: String,
    eps: String,
    seed: u64,
    rng: &'a str,
    trials_bound: u64,
    restricted_universe: bool,
    words: Vec<String>,
    trials_per_word: &'a [u64],
    size: String,
    exhausted: bool,
    empty_universe: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

fn json_report(report: &GenReport, seconds: Option<f64>) -> Result<String> {
    let alphabet = report.trellis.alphabet();
    to_json(&JsonReport {
        channel: &report.channel,
        alphabet: alphabet.to_string(),
        length: report.trellis.len(),
        n_target: report.params.count,
        f: format_ratio(&report.params.f),
        eps: format_ratio(&report.params.eps),
        seed: report.params.seed,
        rng: report.rng,
        trials_bound: report.bound,
        restricted_universe: report.restricted,
        words: report
            .words
            .iter()
            .map(|w| alphabet.format_word(w))
            .collect(),
        trials_per_word: &report.trials_per_word,
        size: report.size().to_string(),
        exhausted: report.exhausted,
        empty_universe: report.empty_universe,
        seconds,
    })
}

fn gen(alphabet: &Alphabet, format: Format, args: GenArgs) -> Result<u8> {
    if args.len == 0 {
        bail!("--len must be positive");
    }
    let start = Instant::now();
    let channel = load_channels(&args.channel.channels, alphabet)?;
    let params = gen_params(&args.rate, args.n)?;
    let seed_code = match &args.code {
        Some(path) => Some(load_code(path, alphabet, Some(args.len))?),
        None => None,
    };
    let universe = load_universe(
        args.universe.universe.as_deref(),
        args.universe.end.as_deref(),
        alphabet,
        args.len,
    )?;
    if let Some(code) = &seed_code {
        require_detecting(code, &channel, alphabet)?;
    }
    let report = make_code(
        &channel,
        seed_code.as_ref(),
        alphabet,
        args.len,
        &params,
        universe.as_ref(),
    )?;
    let elapsed = args.rate.timing.then(|| start.elapsed());
    let text = match format {
        Format::Text => report.to_text(elapsed),
        Format::Json => json_report(&report, elapsed.map(|d| d.as_secs_f64()))?,
    };
    emit(args.output.as_deref(), &text)?;
    if let Some(path) = &args.code_out {
        let mut words = report.trellis.word_strings().join("\n");
        words.push('\n');
        fs::write(path, words).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn run_experiment(alphabet: &Alphabet, format: Format, args: ExperimentArgs) -> Result<u8> {
    let mut cells = match args.preset {
        Some(Preset::Table) => experiment::preset_table(),
        None => Vec::new(),
    };
    for spec in &args.cells {
        cells.push(experiment::Cell::parse(spec)?);
    }
    if cells.is_empty() {
        bail!("give at least one --cell or --preset");
    }
    let params = gen_params(&args.rate, 1)?;
    let config = experiment::Config {
        alphabet: alphabet.clone(),
        f: params.f,
        eps: params.eps,
        seed: params.seed,
        reps: args.reps,
        caps: !args.no_caps,
        timing: args.rate.timing,
    };
    let results = experiment::run(&cells, &config)?;
    let text = match format {
        Format::Text => experiment::to_text(&results, &config),
        Format::Json => to_json(&results)?,
    };
    emit(args.output.as_deref(), &text)?;
    Ok(0)
}
