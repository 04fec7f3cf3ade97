use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dyncomm_cli::{
    cmd_detect, cmd_evaluate, cmd_export, Baseline, CliError, EvaluateOptions, RunConfig, Snapshot,
};
use dyncomm_core::detector::{Comparison, ModularityReference, TieRule};
use dyncomm_core::scoring::SimilarityMeasure;
use dyncomm_core::{CutFormula, DistanceMode, ModularityWeighting, Weighting};

#[derive(Parser)]
#[command(
    name = "dyncomm",
    version,
    about = "Overlapping community detection on message logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities and write communities.json, trace.json, summary.json.
    Detect {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Score a partition by modularity (and NMI with --truth); writes evaluation.json.
    Evaluate {
        #[command(flatten)]
        run: RunArgs,
        /// Partition file; defaults to <out>/communities.json.
        #[arg(long)]
        communities: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Export a snapshot of a completed run as GEXF and an edge list.
    Export {
        /// Directory of a previous detect run.
        #[arg(long)]
        out: PathBuf,
        /// initial, final, or an iteration number.
        #[arg(long, default_value = "final")]
        snapshot: Snapshot,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Message log: sender, receiver, timestamp[, characters].
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value = "messages")]
    weighting: Weighting,
    #[arg(long, default_value_t = 6)]
    phases: usize,
    #[arg(long, default_value_t = 0.65)]
    alpha1: f64,
    #[arg(long, default_value_t = 0.83)]
    alpha2: f64,
    #[arg(long, default_value_t = 0.43)]
    alpha3: f64,
    /// Weight multiplier for silent edges, in (0, 1).
    #[arg(long, default_value_t = 0.5)]
    decay: f64,
    #[arg(long, default_value_t = 2)]
    cut_after_idle: u32,
    #[arg(long, default_value = "inverse-weight")]
    distance: DistanceMode,
    #[arg(long)]
    no_split: bool,
    /// literal, exponent or betweenness.
    #[arg(long, default_value = "literal")]
    cut_formula: CutFormula,
    #[arg(long, default_value = "jaccard")]
    similarity: SimilarityMeasure,
    /// betweenness or normalized.
    #[arg(long, default_value = "betweenness")]
    comparison: Comparison,
    #[arg(long, default_value = "split")]
    tie_rule: TieRule,
    /// phase-start or pruned.
    #[arg(long, default_value = "phase-start")]
    modularity_reference: ModularityReference,
    #[arg(long, default_value = "unweighted")]
    modularity_weighting: ModularityWeighting,
    #[arg(long, default_value_t = 100_000)]
    max_iterations: usize,
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run a baseline instead of the detector.
    #[arg(long)]
    baseline: Option<Baseline>,
}

impl RunArgs {
    fn config(&self) -> Option<RunConfig> {
        let mut c = RunConfig::new(self.input.clone()?);
        c.weighting = self.weighting;
        c.truth = self.truth.clone();
        c.baseline = self.baseline;
        let d = &mut c.detector;
        d.n_phases = self.phases;
        d.scoring.alphas.alpha1 = self.alpha1;
        d.scoring.alphas.alpha2 = self.alpha2;
        d.scoring.alphas.alpha3 = self.alpha3;
        d.scoring.formula = self.cut_formula;
        d.scoring.similarity = self.similarity;
        d.policy.decay_factor = self.decay;
        d.policy.cut_after_idle = self.cut_after_idle;
        d.distance = self.distance;
        d.allow_splitting = !self.no_split;
        d.comparison = self.comparison;
        d.tie_rule = self.tie_rule;
        d.modularity_reference = self.modularity_reference;
        d.modularity_weighting = self.modularity_weighting;
        d.max_iterations = self.max_iterations;
        d.seed = self.seed;
        Some(c)
    }
}

fn set_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Detect { run, out, threads } => {
            set_threads(threads)?;
            let config = run
                .config()
                .ok_or_else(|| CliError::Usage("--input is required".into()))?;
            let result = cmd_detect(&config, &out)?;
            log::info!(
                "{} communities, best modularity {:?}, {} iterations",
                result.partition.len(),
                result.trace.best_modularity(),
                result.trace.records.len()
            );
            println!("wrote reports to {}", out.display());
        }
        Command::Evaluate {
            run,
            communities,
            out,
            threads,
        } => {
            set_threads(threads)?;
            let opts = EvaluateOptions {
                communities,
                input: run.input.clone(),
                truth: run.truth.clone(),
                inline: run.config(),
            };
            let e = cmd_evaluate(&opts, &out)?;
            match e.nmi {
                Some(nmi) => println!("modularity {:.6}, NMI {nmi:.6}", e.modularity),
                None => println!("modularity {:.6}", e.modularity),
            }
        }
        Command::Export {
            out,
            snapshot,
            threads,
        } => {
            set_threads(threads)?;
            let (gexf, edges) = cmd_export(&out, snapshot)?;
            println!("wrote {} and {}", gexf.display(), edges.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
