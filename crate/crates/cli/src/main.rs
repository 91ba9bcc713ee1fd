use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use pac_core::channel::{ebn0_to_sigma, parse_llrs};
use pac_core::code::{format_rate_profile, parse_rate_profile, rm_rate_profile, TieBreak};
use pac_core::config::ConfigMap;
use pac_core::sim::{run_fer, to_csv, SweepConfig};
use pac_core::{
    build_tables, AllowedTypes, ChunkPolicy, ConnPoly, DecodeOptions, DecoderKind, PacCodeSpec,
    ThresholdCombine,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "pacsim", version, about = "PAC code construction, decoding and FER simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a Reed-Muller rate profile.
    Profile(CodeArgs),
    /// Print the bit-channel construction table as CSV.
    Construct(ConstructArgs),
    /// Decode one frame of channel LLRs and print a JSON line.
    Decode(DecodeArgs),
    /// Run an FER / complexity sweep and write CSV.
    Simulate(SimulateArgs),
}

#[derive(Args, Clone)]
struct CodeArgs {
    /// Key = value file with defaults for any long flag.
    #[arg(long)]
    config: Option<PathBuf>,
    /// log2 of the code length.
    #[arg(long)]
    n: Option<u32>,
    /// Number of information bits (Reed-Muller profile).
    #[arg(long)]
    k: Option<usize>,
    /// Rate profile as a line of 0/1 characters; overrides --k.
    #[arg(long)]
    profile_file: Option<PathBuf>,
    /// Connection polynomial, binary c0..cm or 0x hex.
    #[arg(long)]
    poly: Option<String>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct ChannelArgs {
    /// Channel noise standard deviation.
    #[arg(long, conflicts_with = "ebn0")]
    sigma: Option<f64>,
    /// Eb/N0 in dB, converted with the code rate.
    #[arg(long)]
    ebn0: Option<f64>,
    /// Pruning parameter.
    #[arg(long)]
    pth: Option<f64>,
    /// How the two threshold arms combine: min or max.
    #[arg(long)]
    threshold_combine: Option<String>,
}

#[derive(Args, Clone)]
struct DecoderArgs {
    /// stack, pstackd_var or fast.
    #[arg(long)]
    decoder: Option<String>,
    #[arg(long)]
    stack_size: Option<usize>,
    #[arg(long)]
    max_cycles: Option<usize>,
    /// Comma-separated special node types: rate0, rep, type4, rate1, all, none.
    #[arg(long)]
    allowed_types: Option<String>,
    /// Largest special node, in leaves.
    #[arg(long)]
    max_chunk: Option<usize>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    channel: ChannelArgs,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Channel LLRs, one per line.
    #[arg(long)]
    llr_file: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    decoder: DecoderArgs,
    /// Pruning parameter; give once, or once per Eb/N0 point.
    #[arg(long)]
    pth: Vec<f64>,
    #[arg(long)]
    threshold_combine: Option<String>,
    #[arg(long)]
    ebn0_start: Option<f64>,
    #[arg(long)]
    ebn0_stop: Option<f64>,
    #[arg(long)]
    ebn0_step: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    min_frames: Option<usize>,
    #[arg(long)]
    min_errors: Option<usize>,
    #[arg(long)]
    max_frames: Option<usize>,
    /// Worker threads, 0 for all cores.
    #[arg(long)]
    workers: Option<usize>,
    /// Send the all-zero data word.
    #[arg(long)]
    all_zero: bool,
}

/// Command-line values take precedence over the config file.
struct Settings {
    file: ConfigMap,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                ConfigMap::parse(&text).with_context(|| format!("parsing {}", p.display()))?
            }
            None => ConfigMap::default(),
        };
        Ok(Self { file })
    }

    fn get<T>(&self, cli: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match cli {
            Some(v) => Ok(Some(v)),
            None => Ok(self.file.parsed(key)?),
        }
    }

    fn or<T>(&self, cli: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        Ok(self.get(cli, key)?.unwrap_or(default))
    }

    fn list(&self, cli: Vec<f64>, key: &str) -> Result<Vec<f64>> {
        if !cli.is_empty() {
            return Ok(cli);
        }
        self.file
            .get_all(key)
            .into_iter()
            .map(|v| v.parse::<f64>().with_context(|| format!("{key}: {v:?}")))
            .collect()
    }
}

fn code_spec(args: &CodeArgs, cfg: &Settings) -> Result<PacCodeSpec> {
    let poly: String = cfg.or(args.poly.clone(), "poly", pac_core::precoder::DEFAULT_POLY.to_string())?;
    let poly: ConnPoly = poly.parse()?;
    let profile_file: Option<PathBuf> = cfg.get(args.profile_file.clone(), "profile-file")?;
    if let Some(path) = profile_file {
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let profile = parse_rate_profile(&text)?;
        if let Some(n) = cfg.get(args.n, "n")? {
            if profile.len() != 1usize << n {
                bail!("profile length {} does not match --n {n}", profile.len());
            }
        }
        return Ok(PacCodeSpec::new(profile, poly)?);
    }
    let n: u32 = cfg.get(args.n, "n")?.context("--n is required")?;
    let k: usize = cfg.get(args.k, "k")?.context("--k or --profile-file is required")?;
    let profile = rm_rate_profile(n, k, TieBreak::default())?;
    Ok(PacCodeSpec::new(profile, poly)?)
}

fn combine(cli: Option<String>, cfg: &Settings) -> Result<ThresholdCombine> {
    Ok(cfg.or(cli, "threshold-combine", "min".to_string())?.parse()?)
}

fn channel_sigma(args: &ChannelArgs, cfg: &Settings, spec: &PacCodeSpec) -> Result<f64> {
    if let Some(s) = cfg.get(args.sigma, "sigma")? {
        return Ok(s);
    }
    let ebn0: f64 = cfg.get(args.ebn0, "ebn0")?.context("--sigma or --ebn0 is required")?;
    let rate = spec.k().max(1) as f64 / spec.len() as f64;
    Ok(ebn0_to_sigma(ebn0, rate)?)
}

fn decoder_setup(args: &DecoderArgs, cfg: &Settings) -> Result<(DecoderKind, DecodeOptions)> {
    let kind: DecoderKind = cfg.or(args.decoder.clone(), "decoder", "fast".to_string())?.parse()?;
    let stack_size = cfg.or(args.stack_size, "stack-size", 64)?;
    let max_cycles = cfg.or(args.max_cycles, "max-cycles", 1024)?;
    let allowed: AllowedTypes = cfg.or(args.allowed_types.clone(), "allowed-types", "all".to_string())?.parse()?;
    let max_chunk = cfg.or(args.max_chunk, "max-chunk", usize::MAX)?;
    let mut options = DecodeOptions::new(stack_size, max_cycles, kind.prunes());
    options.policy = ChunkPolicy { allowed, max_chunk };
    Ok((kind, options))
}

fn emit(out: Option<PathBuf>, cfg: &Settings, text: &str) -> Result<()> {
    match cfg.get(out, "out")? {
        Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn ebn0_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || stop < start {
        bail!("empty Eb/N0 grid: start {start}, stop {stop}, step {step}");
    }
    let points = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..points).map(|i| start + i as f64 * step).collect())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Profile(args) => {
            let cfg = Settings::load(args.config.as_deref())?;
            let spec = code_spec(&args, &cfg)?;
            emit(args.out.clone(), &cfg, &format!("{}\n", format_rate_profile(spec.rate_profile())))
        }
        Command::Construct(args) => {
            let cfg = Settings::load(args.code.config.as_deref())?;
            let spec = code_spec(&args.code, &cfg)?;
            let sigma = channel_sigma(&args.channel, &cfg, &spec)?;
            let pth = cfg.get(args.channel.pth, "pth")?;
            let tables = build_tables(sigma, spec.n(), pth, combine(args.channel.threshold_combine.clone(), &cfg)?)?;
            emit(args.code.out.clone(), &cfg, &tables.to_csv())
        }
        Command::Decode(args) => {
            let cfg = Settings::load(args.code.config.as_deref())?;
            let spec = code_spec(&args.code, &cfg)?;
            let sigma = channel_sigma(&args.channel, &cfg, &spec)?;
            let (kind, options) = decoder_setup(&args.decoder, &cfg)?;
            let pth = cfg.get(args.channel.pth, "pth")?;
            if kind.prunes() && pth.is_none() {
                bail!("decoder {kind} needs --pth");
            }
            let tables = build_tables(
                sigma,
                spec.n(),
                if kind.prunes() { pth } else { None },
                combine(args.channel.threshold_combine.clone(), &cfg)?,
            )?;
            let text = fs::read_to_string(&args.llr_file)
                .with_context(|| format!("reading {}", args.llr_file.display()))?;
            let llrs = parse_llrs(&text)?;
            let r = kind.decode(&spec, &tables, &llrs, &options)?;
            let line = json!({
                "status": r.status.to_string(),
                "v_hat": r.v_hat,
                "d_hat": r.d_hat,
                "metric": r.metric,
                "cycles": r.counters.cycles,
                "stack_used": r.counters.stack_used,
                "fg_ops": r.counters.fg_ops,
                "total_insertions": r.counters.total_insertions,
            });
            emit(args.code.out.clone(), &cfg, &format!("{line}\n"))
        }
        Command::Simulate(args) => {
            let cfg = Settings::load(args.code.config.as_deref())?;
            let spec = code_spec(&args.code, &cfg)?;
            let (kind, options) = decoder_setup(&args.decoder, &cfg)?;
            let start: f64 = cfg.get(args.ebn0_start, "ebn0-start")?.context("--ebn0-start is required")?;
            let stop = cfg.or(args.ebn0_stop, "ebn0-stop", start)?;
            let step = cfg.or(args.ebn0_step, "ebn0-step", 0.5)?;
            let mut sweep = SweepConfig::new(spec, kind, options);
            sweep.ebn0_db = ebn0_grid(start, stop, step)?;
            sweep.p_th = cfg.list(args.pth.clone(), "pth")?;
            sweep.threshold_combine = combine(args.threshold_combine.clone(), &cfg)?;
            sweep.seed = cfg.or(args.seed, "seed", 0)?;
            sweep.min_frames = cfg.or(args.min_frames, "min-frames", 1)?;
            sweep.min_errors = cfg.or(args.min_errors, "min-errors", 400)?;
            sweep.max_frames = cfg.or(args.max_frames, "max-frames", 1_000_000)?;
            sweep.workers = cfg.or(args.workers, "workers", 0)?;
            sweep.all_zero = args.all_zero || cfg.or(None, "all-zero", false)?;
            let reports = run_fer(&sweep)?;
            emit(args.code.out.clone(), &cfg, &to_csv(&reports))
        }
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
