use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use wavemark::attacks::Attack;
use wavemark::bench::{load_covers, run_bench, run_gamma_sweep, BenchConfig, Preset};
use wavemark::codec::{
    bits_to_text, extract, parse_bits, read_side_info, EmbedParams, Embedder, Watermark,
};
use wavemark::complexity::CannyParams;
use wavemark::image_io::{read_pgm, write_pgm};
use wavemark::metrics::{ber, psnr};

#[derive(Parser)]
#[command(
    name = "wavemark",
    version,
    about = "Adaptive wavelet watermarking for grayscale PGM images"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embed a message into a cover image
    Embed(EmbedArgs),
    /// Recover the message from a (possibly attacked) image
    Extract(ExtractArgs),
    /// Apply one attack to an image
    Attack(AttackArgs),
    /// Run a robustness benchmark over a directory of covers
    Bench(BenchArgs),
    /// Sweep the strength exponent gamma at beta = 1
    GammaSweep(SweepArgs),
    /// PSNR between two images and/or BER between two message files
    Metrics(MetricsArgs),
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    input: PathBuf,
    /// Watermarked image
    #[arg(long, default_value = "watermarked.pgm")]
    output: PathBuf,
    #[arg(long, default_value = "side.wmsi")]
    side_info: PathBuf,
    /// Where the embedded bits are written, one per line
    #[arg(long, default_value = "message.txt")]
    message_out: PathBuf,
    /// Length of the random message
    #[arg(long, default_value_t = 128)]
    bits: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Embed these bits instead of a random message
    #[arg(long)]
    message_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.4)]
    gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    alpha_min: f64,
    /// Calibrate the global strength to this PSNR (dB)
    #[arg(long, default_value_t = 45.0, conflicts_with = "beta")]
    target_psnr: f64,
    /// Fixed global strength multiplier; disables calibration
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    canny: CannyArgs,
}

#[derive(Args)]
struct CannyArgs {
    #[arg(long, default_value_t = 1.4)]
    canny_sigma: f64,
    #[arg(long, default_value_t = 0.2)]
    canny_high: f64,
    #[arg(long, default_value_t = 0.08)]
    canny_low: f64,
}

impl CannyArgs {
    fn params(&self) -> CannyParams {
        CannyParams {
            gaussian_sigma: self.canny_sigma,
            high_fraction: self.canny_high,
            low_fraction: self.canny_low,
        }
    }
}

#[derive(Args)]
struct ExtractArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "side.wmsi")]
    side_info: PathBuf,
    #[arg(long, default_value = "extracted.txt")]
    output: PathBuf,
    /// Original message; when given, the BER is printed
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: PathBuf,
    /// median3, median5, gauss:<var>, sp:<density>, awgn:<var>, jpeg:<quality>
    #[arg(long)]
    spec: String,
    /// Noise seed (salt & pepper, AWGN)
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Table1,
    Table2,
}

impl From<PresetArg> for Preset {
    fn from(p: PresetArg) -> Self {
        match p {
            PresetArg::Table1 => Preset::Table1,
            PresetArg::Table2 => Preset::Table2,
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of 8-bit P5 PGM covers
    #[arg(long)]
    covers: PathBuf,
    #[arg(long, value_enum, default_value = "table1")]
    preset: PresetArg,
    /// Number of seeds, starting at --first-seed
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long, default_value_t = 0)]
    first_seed: u64,
    #[arg(long, default_value_t = 0.4)]
    gamma: f64,
    #[arg(long, default_value_t = 45.0)]
    target_psnr: f64,
    /// Override the preset message length
    #[arg(long)]
    bits: Option<usize>,
    /// Comma-separated attack list overriding the preset
    #[arg(long, value_delimiter = ',')]
    attacks: Vec<String>,
    /// Output prefix; writes <prefix>.csv and <prefix>.txt
    #[arg(long, default_value = "bench")]
    output: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated gamma values in [0, 1]
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"
    )]
    grid: Vec<f64>,
    #[arg(long, value_enum, default_value = "table1")]
    preset: PresetArg,
    #[arg(long)]
    bits: Option<usize>,
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, default_value = "gamma_sweep.csv")]
    output: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long, requires = "b")]
    a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    b: Option<PathBuf>,
    #[arg(long, requires = "received")]
    sent: Option<PathBuf>,
    #[arg(long, requires = "sent")]
    received: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Embed(a) => cmd_embed(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Attack(a) => cmd_attack(a),
        Command::Bench(a) => cmd_bench(a),
        Command::GammaSweep(a) => cmd_gamma_sweep(a),
        Command::Metrics(a) => cmd_metrics(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn read_bits(path: &Path) -> Result<Vec<bool>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_bits(&text)?)
}

fn cmd_embed(args: EmbedArgs) -> Result<()> {
    let cover =
        read_pgm(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let wm = match &args.message_file {
        Some(path) => {
            Watermark::read_file(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => Watermark::random(args.bits, args.seed)?,
    };
    let params = EmbedParams {
        gamma: args.gamma,
        alpha_min: args.alpha_min,
        beta: args.beta.unwrap_or(1.0),
        target_psnr: if args.beta.is_some() {
            None
        } else {
            Some(args.target_psnr)
        },
        canny: args.canny.params(),
    };
    let embedder = Embedder::from_params(&cover, &params)?;
    let out = embedder.embed(&wm, &params)?;

    write_pgm(&out.image, &args.output)?;
    out.side_info.write(&args.side_info)?;
    wm.write_file(&args.message_out)?;
    println!("bits {}", wm.len());
    println!("beta {}", out.side_info.beta);
    println!("psnr {:.4} dB", psnr(&cover, &out.image)?);
    Ok(())
}

fn cmd_extract(args: ExtractArgs) -> Result<()> {
    let img = read_pgm(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let side = read_side_info(&args.side_info)
        .with_context(|| format!("reading {}", args.side_info.display()))?;
    let bits = extract(&img, &side)?;
    fs::write(&args.output, bits_to_text(&bits))?;
    if let Some(reference) = &args.reference {
        let sent = read_bits(reference)?;
        println!("ber {:.4} %", ber(&sent, &bits)?);
    }
    Ok(())
}

fn cmd_attack(args: AttackArgs) -> Result<()> {
    let attack: Attack = args.spec.parse()?;
    let img = read_pgm(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let out = attack.apply(&img, args.seed)?;
    write_pgm(&out, &args.output)?;
    println!("psnr {:.4} dB", psnr(&img, &out)?);
    Ok(())
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_bench(args: BenchArgs) -> Result<()> {
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let covers = load_covers(&args.covers)?;
    let mut config = BenchConfig::preset(
        args.preset.into(),
        (args.first_seed..args.first_seed + args.seeds).collect(),
    );
    config.gamma = args.gamma;
    config.target_psnr = args.target_psnr;
    if let Some(bits) = args.bits {
        config.message_length = bits;
    }
    if !args.attacks.is_empty() {
        config.attacks = args
            .attacks
            .iter()
            .map(|s| s.parse())
            .collect::<wavemark::Result<_>>()?;
    }
    let report = run_bench(&covers, &config)?;
    let csv = with_extension(&args.output, "csv");
    let txt = with_extension(&args.output, "txt");
    fs::write(&csv, report.to_csv())?;
    fs::write(&txt, report.to_text())?;
    print!("{}", report.to_text());
    println!("wrote {} and {}", csv.display(), txt.display());
    Ok(())
}

fn cmd_gamma_sweep(args: SweepArgs) -> Result<()> {
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let cover =
        read_pgm(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let preset = BenchConfig::preset(args.preset.into(), Vec::new());
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let sweep = run_gamma_sweep(
        &cover,
        &args.grid,
        &preset.attacks,
        args.bits.unwrap_or(preset.message_length),
        &seeds,
    )?;
    fs::write(&args.output, sweep.to_csv())?;
    print!("{}", sweep.to_csv());
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<()> {
    let mut printed = false;
    if let (Some(a), Some(b)) = (&args.a, &args.b) {
        let (ia, ib) = (read_pgm(a)?, read_pgm(b)?);
        println!("psnr {:.4} dB", psnr(&ia, &ib)?);
        printed = true;
    }
    if let (Some(s), Some(r)) = (&args.sent, &args.received) {
        println!("ber {:.4} %", ber(&read_bits(s)?, &read_bits(r)?)?);
        printed = true;
    }
    if !printed {
        bail!("give --a/--b images and/or --sent/--received message files");
    }
    Ok(())
}
