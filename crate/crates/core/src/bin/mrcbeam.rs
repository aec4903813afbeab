use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mrcbeam::beam::{beam_pattern, mrc_weights};
use mrcbeam::montecarlo::{
    run_blockage_experiment, run_effectiveness_sweep, run_snr_sweep, trial_rng,
};
use mrcbeam::output::{
    array_param_table, blockage_table, effective_components_table, ineffectiveness_table,
    pattern_table, snr_table, to_json, write_output, ArrayParamRow, OutputFormat, Table,
};
use mrcbeam::theory::{estimate_array_parameter, HarmonicMode};
use mrcbeam::{ChannelRealization, Error, ExperimentConfig, Result};

/// Wideband MRC beam analysis on antenna arrays.
#[derive(Debug, Parser)]
#[command(name = "mrcbeam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the array parameter s (mean squared cross gain between the
    /// conjugate beams of two random directions).
    ArrayParam(ArrayParamArgs),
    /// Fraction of paths that are ineffective in the MRC beam vs. M, with the
    /// closed-form prediction.
    Ineffectiveness(SweepArgs),
    /// Mean number of effective paths vs. M, with the closed-form prediction.
    EffectiveComponents(SweepArgs),
    /// Band-averaged SNR of the MRC and strongest-path beams vs. M, simulated
    /// and predicted.
    SnrSweep(SweepArgs),
    /// Post-blockage SNR samples of both beams for building CDFs.
    BlockageCdf(BlockageArgs),
    /// MRC beam gain pattern |F(θ)|² in dB.
    BeamPattern(PatternArgs),
    /// Sample one channel realization and write it as JSON.
    DumpChannel(DumpArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Harmonic {
    Approx,
    Exact,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
struct CommonArgs {
    /// RNG seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo trials (channel realizations) per point.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Output file; standard output when omitted or `-`.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (results do not depend on this).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
}

#[derive(Debug, Args)]
struct ArrayArgs {
    /// Number of ULA elements.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    elements: u64,
    /// Rows of elements stacked along z (1 = ULA along x).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    rows: u64,
    /// Element spacing in wavelengths.
    #[arg(long, default_value_t = 0.5)]
    spacing: f64,
    /// Total field of view in degrees, centered on broadside.
    #[arg(long = "fov-deg", default_value_t = 180.0)]
    fov_deg: f64,
}

#[derive(Debug, Args)]
struct ChannelArgs {
    /// Maximum path delay, e.g. `100ns`, `0.1us` (plain numbers are ns).
    #[arg(long = "delay-max", default_value = "100ns", value_parser = parse_delay)]
    delay_max: f64,
    /// Averaging bandwidth, e.g. `1GHz`, `400MHz` (plain numbers are Hz).
    #[arg(long, default_value = "1GHz", value_parser = parse_frequency)]
    bandwidth: f64,
    /// Frequency points across the band.
    #[arg(long = "freq-points", default_value_t = 1024)]
    freq_points: usize,
    /// Per-antenna noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    sigma0: f64,
}

#[derive(Debug, Args)]
struct ArrayParamArgs {
    #[command(flatten)]
    array: ArrayArgs,
    /// Monte Carlo samples (direction pairs).
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    array: ArrayArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Smallest number of paths.
    #[arg(long = "m-min", default_value_t = 1)]
    m_min: usize,
    /// Largest number of paths.
    #[arg(long = "m-max", default_value_t = 15)]
    m_max: usize,
    /// Explicit comma-separated list of path counts (overrides --m-min/--m-max).
    #[arg(long = "m", value_delimiter = ',')]
    m_list: Option<Vec<usize>>,
    /// Samples for the array-parameter estimate behind the theory columns.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Use this array parameter instead of estimating it.
    #[arg(long = "array-param")]
    array_param: Option<f64>,
    /// Expected strongest-path power for the single-beam prediction:
    /// `approx` = ln M + γ, `exact` = harmonic number H_M.
    #[arg(long, value_enum, default_value_t = Harmonic::Approx)]
    harmonic: Harmonic,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct BlockageArgs {
    #[command(flatten)]
    array: ArrayArgs,
    #[command(flatten)]
    channel: ChannelArgs,
    /// Number of paths before blockage (at least 2).
    #[arg(long, default_value_t = 20)]
    paths: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct PatternArgs {
    #[command(flatten)]
    array: ArrayArgs,
    /// Channel JSON file ({components:[{re,im,kx,ky,kz,delay_ns}]}).
    #[arg(long = "channel-file", conflicts_with = "example_alpha4")]
    channel_file: Option<PathBuf>,
    /// Use the built-in four-path example channel with this fourth amplitude.
    #[arg(long = "example-alpha4")]
    example_alpha4: Option<f64>,
    /// Paths of the random channel drawn when no channel is given.
    #[arg(long, default_value_t = 4)]
    paths: usize,
    /// Maximum path delay of the random channel.
    #[arg(long = "delay-max", default_value = "100ns", value_parser = parse_delay)]
    delay_max: f64,
    /// Angular grid step in degrees over [-90°, 90°].
    #[arg(long = "grid-deg", default_value_t = 0.5)]
    grid_deg: f64,
    /// Also write the channel used to this JSON file.
    #[arg(long = "dump-channel")]
    dump_channel: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct DumpArgs {
    #[command(flatten)]
    array: ArrayArgs,
    /// Number of paths.
    #[arg(long, default_value_t = 4)]
    paths: usize,
    #[arg(long = "delay-max", default_value = "100ns", value_parser = parse_delay)]
    delay_max: f64,
    /// Index of the realization to draw.
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[command(flatten)]
    common: CommonArgs,
}

/// Splits `text` into a number and a unit suffix.
fn split_unit(text: &str) -> (&str, &str) {
    let t = text.trim();
    let idx = t
        .find(|c: char| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
        .unwrap_or(t.len());
    (t[..idx].trim(), t[idx..].trim())
}

fn parse_scaled(
    text: &str,
    units: &[(&str, i32)],
    default_exp: i32,
) -> std::result::Result<f64, String> {
    let (number, unit) = split_unit(text);
    let value: f64 = number
        .parse()
        .map_err(|_| format!("invalid number `{number}` in `{text}`"))?;
    let exp = if unit.is_empty() {
        default_exp
    } else {
        units
            .iter()
            .find(|(u, _)| u.eq_ignore_ascii_case(unit))
            .map(|(_, s)| *s)
            .ok_or_else(|| format!("unknown unit `{unit}` in `{text}`"))?
    };
    let v = if exp >= 0 {
        value * 10f64.powi(exp)
    } else {
        value / 10f64.powi(-exp)
    };
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("`{text}` must be finite and non-negative"))
    }
}

fn parse_frequency(text: &str) -> std::result::Result<f64, String> {
    parse_scaled(
        text,
        &[("hz", 0), ("khz", 3), ("mhz", 6), ("ghz", 9), ("thz", 12)],
        0,
    )
}

/// Delays in seconds; bare numbers are nanoseconds.
fn parse_delay(text: &str) -> std::result::Result<f64, String> {
    parse_scaled(
        text,
        &[("s", 0), ("ms", -3), ("us", -6), ("ns", -9), ("ps", -12)],
        -9,
    )
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn config_from(
    array: &ArrayArgs,
    channel: &ChannelArgs,
    common: &CommonArgs,
    m_values: Vec<usize>,
) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(to_usize(array.elements), m_values, common.seed);
    cfg.rows = to_usize(array.rows);
    cfg.spacing_wavelengths = array.spacing;
    cfg.fov_deg = array.fov_deg;
    cfg.trials = to_usize(common.trials);
    cfg.delay_max = channel.delay_max;
    cfg.bandwidth = channel.bandwidth;
    cfg.freq_points = channel.freq_points;
    cfg.sigma0 = channel.sigma0;
    cfg.workers = common.workers.map(to_usize);
    cfg
}

fn sweep_config(args: &SweepArgs) -> Result<ExperimentConfig> {
    let m_values = match &args.m_list {
        Some(list) => list.clone(),
        None => {
            if args.m_min == 0 || args.m_min > args.m_max {
                return Err(Error::InvalidArgument(format!(
                    "need 1 <= --m-min <= --m-max, got {}..{}",
                    args.m_min, args.m_max
                )));
            }
            (args.m_min..=args.m_max).collect()
        }
    };
    let mut cfg = config_from(&args.array, &args.channel, &args.common, m_values);
    cfg.array_param_samples = args.samples;
    cfg.array_parameter = args.array_param;
    cfg.harmonic_mode = match args.harmonic {
        Harmonic::Approx => HarmonicMode::ApproxLogGamma,
        Harmonic::Exact => HarmonicMode::ExactHarmonic,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn render<C: serde::Serialize, R: serde::Serialize>(
    common: &CommonArgs,
    command: &str,
    table: impl FnOnce() -> Table,
    config: &C,
    results: &R,
) -> Result<()> {
    let bytes = match OutputFormat::from(common.format) {
        OutputFormat::Csv => table().to_csv()?,
        OutputFormat::Json => to_json(command, config, results)?,
    };
    write_output(&bytes, common.output.as_deref())
}

#[derive(serde::Serialize)]
struct ArrayParamConfig {
    n_elements: usize,
    rows: usize,
    spacing_wavelengths: f64,
    fov_deg: f64,
    samples: usize,
    seed: u64,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ArrayParam(args) => {
            let cfg = ArrayParamConfig {
                n_elements: to_usize(args.array.elements),
                rows: to_usize(args.array.rows),
                spacing_wavelengths: args.array.spacing,
                fov_deg: args.array.fov_deg,
                samples: args.samples,
                seed: args.common.seed,
            };
            let mut exp = ExperimentConfig::new(cfg.n_elements, vec![], cfg.seed);
            exp.rows = cfg.rows;
            exp.spacing_wavelengths = cfg.spacing_wavelengths;
            exp.fov_deg = cfg.fov_deg;
            exp.array_param_samples = cfg.samples;
            exp.workers = args.common.workers.map(to_usize);
            exp.validate()?;
            let array = exp.array()?;
            let fov = exp.fov()?;
            let estimate =
                exp.install(|| estimate_array_parameter(&array, &fov, cfg.samples, cfg.seed))??;
            let rows = [ArrayParamRow {
                n_elements: cfg.n_elements * cfg.rows,
                fov_deg: cfg.fov_deg,
                estimate,
            }];
            render(
                &args.common,
                "array-param",
                || array_param_table(&rows),
                &cfg,
                &rows,
            )
        }
        Command::Ineffectiveness(args) => {
            let cfg = sweep_config(&args)?;
            let result = run_effectiveness_sweep(&cfg)?;
            render(
                &args.common,
                "ineffectiveness",
                || ineffectiveness_table(&result),
                &cfg,
                &result,
            )
        }
        Command::EffectiveComponents(args) => {
            let cfg = sweep_config(&args)?;
            let result = run_effectiveness_sweep(&cfg)?;
            render(
                &args.common,
                "effective-components",
                || effective_components_table(&result),
                &cfg,
                &result,
            )
        }
        Command::SnrSweep(args) => {
            let cfg = sweep_config(&args)?;
            let result = run_snr_sweep(&cfg)?;
            render(
                &args.common,
                "snr-sweep",
                || snr_table(&result),
                &cfg,
                &result,
            )
        }
        Command::BlockageCdf(args) => {
            let cfg = config_from(&args.array, &args.channel, &args.common, vec![args.paths]);
            let result = run_blockage_experiment(&cfg)?;
            render(
                &args.common,
                "blockage-cdf",
                || blockage_table(&result),
                &cfg,
                &result,
            )
        }
        Command::BeamPattern(args) => {
            let array = mrcbeam::AntennaArray::planar_xz(
                to_usize(args.array.elements),
                to_usize(args.array.rows),
                args.array.spacing,
            )?;
            let fov = mrcbeam::FieldOfView::from_total_degrees(args.array.fov_deg)?;
            let channel = if let Some(path) = &args.channel_file {
                ChannelRealization::from_json(&std::fs::read_to_string(path)?)?
            } else if let Some(alpha4) = args.example_alpha4 {
                ChannelRealization::four_path_example(alpha4)
            } else {
                let mut rng = trial_rng(args.common.seed, 0);
                ChannelRealization::sample(args.paths, &fov, args.delay_max, &mut rng)?
            };
            if let Some(path) = &args.dump_channel {
                write_output(channel.to_json()?.as_bytes(), Some(path))?;
            }
            let weights = mrc_weights(&channel, &array);
            let pattern = beam_pattern(&weights, &array, &fov, args.grid_deg)?;
            let cfg = serde_json::json!({
                "n_elements": args.array.elements,
                "rows": args.array.rows,
                "spacing_wavelengths": args.array.spacing,
                "grid_deg": args.grid_deg,
                "seed": args.common.seed,
                "channel": &channel,
            });
            render(
                &args.common,
                "beam-pattern",
                || pattern_table(&pattern),
                &cfg,
                &pattern,
            )
        }
        Command::DumpChannel(args) => {
            let fov = mrcbeam::FieldOfView::from_total_degrees(args.array.fov_deg)?;
            let mut rng = trial_rng(args.common.seed, args.trial);
            let channel = ChannelRealization::sample(args.paths, &fov, args.delay_max, &mut rng)?;
            write_output(channel.to_json()?.as_bytes(), args.common.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mrcbeam: {e}");
            ExitCode::FAILURE
        }
    }
}
