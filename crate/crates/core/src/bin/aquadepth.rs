use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use aquadepth::filtering::GuidedFilterConfig;
use aquadepth::ifm::DepthProfile;
use aquadepth::pipeline::{
    cmd_bench, cmd_eval, cmd_fit, cmd_predict, cmd_synth, format_bench_report, PredictOptions,
};
use aquadepth::Error;

#[derive(Parser)]
#[command(
    name = "aquadepth",
    about = "Underwater attenuation-prior depth: fit, predict, eval, synth, bench"
)]
struct Cli {
    /// Worker pool width for corpus scans (fit/eval results do not depend on it)
    #[arg(short = 'j', long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FilterFlags {
    /// Guided filter window half-width
    #[arg(long, default_value_t = 8)]
    gf_radius: usize,

    /// Guided filter regularizer epsilon
    #[arg(long, default_value_t = 1e-4)]
    gf_eps: f64,

    /// Binary guide mask PNG (nonzero = salient); default guide is the RMI
    /// intensity channel
    #[arg(long)]
    mask: Option<PathBuf>,

    /// Skip guided filtering; emit the raw coarse prediction
    #[arg(long)]
    no_filter: bool,
}

impl FilterFlags {
    fn to_options(&self, dump_rmi: Option<PathBuf>) -> PredictOptions {
        PredictOptions {
            filter: GuidedFilterConfig {
                radius: self.gf_radius,
                epsilon: self.gf_eps,
            },
            no_filter: self.no_filter,
            mask: self.mask.clone(),
            dump_rmi,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fit projection coefficients over a dataset manifest
    Fit {
        /// Manifest CSV (header `rgb,depth`, paths relative to the manifest)
        manifest: PathBuf,
        /// Output coefficients JSON
        #[arg(long, default_value = "coefficients.json")]
        out: PathBuf,
        /// Override the manifest depth scale (meters at normalized 1.0)
        #[arg(long)]
        depth_scale: Option<f64>,
    },
    /// Predict a depth map for one RGB image
    Predict {
        image: PathBuf,
        /// Coefficients JSON from `fit` (or the bundled reference file)
        #[arg(long)]
        coeffs: PathBuf,
        /// Output 16-bit depth PNG; a colormapped `<out>.vis.png` is
        /// written next to it
        #[arg(long, default_value = "depth.png")]
        out: PathBuf,
        /// Also write the RMI-transformed input as an 8-bit PNG
        #[arg(long)]
        dump_rmi: Option<PathBuf>,
        #[command(flatten)]
        filter: FilterFlags,
    },
    /// Evaluate predictions against ground truth over a manifest
    Eval {
        manifest: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
        /// Directory for metrics.csv
        #[arg(long, default_value = "eval-out")]
        out: PathBuf,
        #[command(flatten)]
        filter: FilterFlags,
    },
    /// Generate a synthetic underwater scene (rgb.png, depth.png, params.json)
    Synth {
        #[arg(long, default_value_t = 640)]
        width: usize,
        #[arg(long, default_value_t = 480)]
        height: usize,
        /// Water type preset (oceanI, oceanII)
        #[arg(long, default_value = "oceanI")]
        preset: String,
        /// Depth field shape: linear-ramp, radial, random-smooth
        #[arg(long, default_value = "linear-ramp")]
        profile: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "synth-out")]
        out: PathBuf,
    },
    /// Time the coarse prediction chain on a synthetic frame
    Bench {
        #[arg(long, default_value_t = 640)]
        width: usize,
        #[arg(long, default_value_t = 480)]
        height: usize,
        #[arg(long, default_value_t = 100)]
        iterations: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        filter: FilterFlags,
    },
}

// 0 ok, 2 io/format, 3 empty data, 4 bad flags
fn error_code(err: &Error) -> u8 {
    match err {
        Error::EmptyAccumulator | Error::EmptyMask => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> aquadepth::Result<()> {
    match cli.command {
        Command::Fit {
            manifest,
            out,
            depth_scale,
        } => {
            cmd_fit(&manifest, &out, cli.threads, depth_scale)?;
        }
        Command::Predict {
            image,
            coeffs,
            out,
            dump_rmi,
            filter,
        } => {
            cmd_predict(&image, &coeffs, &out, &filter.to_options(dump_rmi))?;
        }
        Command::Eval {
            manifest,
            coeffs,
            out,
            filter,
        } => {
            cmd_eval(
                &manifest,
                &coeffs,
                &out,
                &filter.to_options(None),
                cli.threads,
            )?;
        }
        Command::Synth {
            width,
            height,
            preset,
            profile,
            seed,
            out,
        } => {
            let profile: DepthProfile = profile.parse().map_err(|reason: String| Error::Format {
                path: "<args>".into(),
                reason,
            })?;
            cmd_synth(width, height, &preset, profile, seed, &out)?;
            println!("wrote rgb.png, depth.png, params.json to {}", out.display());
        }
        Command::Bench {
            width,
            height,
            iterations,
            seed,
            filter,
        } => {
            if iterations < 10 {
                eprintln!("error: --iterations must be at least 10");
                std::process::exit(4);
            }
            let cfg = if filter.no_filter {
                None
            } else {
                Some(GuidedFilterConfig {
                    radius: filter.gf_radius,
                    epsilon: filter.gf_eps,
                })
            };
            let report = cmd_bench(width, height, iterations, cfg, seed)?;
            print!("{}", format_bench_report(&report));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(4);
        }
    };
    if cli.threads < 1 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(4);
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_code(&e))
        }
    }
}
