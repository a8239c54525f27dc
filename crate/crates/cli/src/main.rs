//! Single command-line entry point for the numerical laboratory: every
//! library operation is exposed as a subcommand with file-based input and
//! output, layered configuration, deterministic seeds, and a run manifest
//! alongside every output.

mod commands;
mod support;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use support::CliError;

#[derive(Parser)]
#[command(
    name = "snowflake",
    version,
    about = "Numerical laboratory for Holder embeddings, type/cotype diagnostics and reduction maps"
)]
struct Cli {
    /// Flat key=value configuration file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Manifest path (default: <out>.manifest.json).
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample the self-similar curve on [0,1] to CSV (t,x,y).
    Curve {
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the whole-line extension of the curve to CSV (t,x,y).
    Extend {
        #[arg(long)]
        r: Option<f64>,
        #[arg(long = "t-min")]
        t_min: Option<f64>,
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long = "max-steps")]
        max_steps: Option<u32>,
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample the composed Holder line map to CSV (t,x0,...).
    LineMap {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "t-min")]
        t_min: Option<f64>,
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lift a pointwise map to step functions (block layout).
    LiftLr {
        /// "identity", "line-map:ALPHA", or a tabulated-map JSON file.
        #[arg(long)]
        map: Option<String>,
        /// JSON array of step values.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lift a pointwise map to finite sequences (block pairing).
    LiftC0 {
        #[arg(long)]
        map: Option<String>,
        /// JSON array of sequence entries.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid-sample a family of step functions into l_r vectors.
    Discretize {
        /// JSON array of step-value arrays.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Embed a finite metric space isometrically into sup-norm coordinates.
    Kuratowski {
        /// FiniteMetricSpace JSON ({"labels": [...], "dist": [[...]]}).
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        recentered: Option<bool>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Round each entry down to its dyadic grid k/2^n.
    Round {
        /// JSON array of reals in [0,1].
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rademacher type ratio of a vector family.
    Type {
        /// JSON {"p": vector exponent, "vectors": [[...], ...]}.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        p: Option<f64>,
        /// "exact" or "sampled".
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rademacher cotype ratio of a vector family.
    Cotype {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Diagonal-to-edge metric-type ratio of a hypercube map.
    MetricType {
        /// "identity-lp:P" or a JSON images file {"p": .., "images": [[..]]}.
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        images: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Half-shift-to-step metric-cotype ratio of a torus map.
    MetricCotype {
        /// "identity-lp:P", "sigma", "koch-composite:ALPHA", or dense images.
        #[arg(long)]
        map: Option<String>,
        #[arg(long)]
        images: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map a torus point to the unit circle coordinatewise.
    Sigma {
        /// Comma-separated coordinates, e.g. "0,1,3".
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed-form type/cotype profile of a space descriptor.
    Profile {
        /// "lp:R", "Lp:R", "c0", or "seq:Q:<inner>".
        #[arg(long)]
        space: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// The three necessary reducibility conditions, evaluated literally.
    Conditions {
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// The if-and-only-if reducibility verdict (prints "reducible: ...").
    Verdict {
        #[arg(long)]
        r: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Apply a scaled family blockwise to a sequence pair and flatten.
    Theta {
        /// SequencePair JSON {"x": [[..]], "y": [[..]], "entry_p": p}.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the geometric thresholds of a scaled family to CSV.
    ScaleFamily {
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample pairs per index and check the three-regime contract.
    VerifyFamily {
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        d: Option<f64>,
        #[arg(long = "constant-a")]
        constant_a: Option<f64>,
        #[arg(long = "big-c")]
        big_c: Option<f64>,
        #[arg(long = "small-d")]
        small_d: Option<f64>,
        #[arg(long)]
        indices: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        lo: Option<f64>,
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Partial-sum / tail-sup membership trace for a planted d-sequence.
    PartialSums {
        /// "geometric:RATIO" or "power:EXPONENT".
        #[arg(long)]
        plant: Option<String>,
        /// Membership exponent; 0 selects the tail-sup trace.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Slice samples of a function on [1, N+1] into unit windows.
    Window {
        /// JSON array of uniform samples.
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "per-unit")]
        per_unit: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustive grid search for the least-distortion embedding.
    Brute {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        resolution: Option<f64>,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Multi-start local search for a low-distortion embedding.
    Search {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Hypercube growth experiment: measured constants next to the
    /// informational growth column.
    Obstruction {
        /// Comma-separated hypercube dimensions, e.g. "1,2,3".
        #[arg(long = "n-values")]
        n_values: Option<String>,
        #[arg(long = "p-src")]
        p_src: Option<f64>,
        #[arg(long = "p-tgt")]
        p_tgt: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long = "identity-candidate")]
        identity_candidate: Option<bool>,
        #[arg(long)]
        restarts: Option<usize>,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn init_thread_pool() -> Result<(), CliError> {
    if let Ok(raw) = std::env::var("SNOWFLAKE_THREADS") {
        let n: usize = raw.parse().map_err(|_| {
            CliError::Validation(format!("SNOWFLAKE_THREADS must be a positive integer, got {raw:?}"))
        })?;
        if n == 0 {
            return Err(CliError::Validation(
                "SNOWFLAKE_THREADS must be a positive integer".into(),
            ));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_thread_pool().and_then(|()| commands::dispatch(cli.cmd, cli.config, cli.manifest));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
