//! `qiopa` — simulated micro–macroscopic entanglement experiments from the
//! command line.
//!
//! Every subcommand assembles one [`ExperimentConfig`] (config file first,
//! then flag overrides), runs a pure-library computation, and emits
//! CSV/JSON artifacts plus a manifest into the output directory. Exit codes:
//! 0 success, 1 usage or configuration error, 2 numerical failure.

mod validate;

use clap::{Parser, Subcommand};
use qiopa::experiments::{
    run_chsh, run_entanglement_test, run_micro_macro_fringe, run_of_characterization,
    BobMeasurement, ExperimentConfig,
};
use qiopa::io::{self, RunManifest};
use qiopa::opa::{macro_single, macro_two_photon, GainParams, SingleSeed, TwoPhotonKind};
use qiopa::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qiopa",
    version,
    about = "Simulate entanglement experiments on optically amplified photonic qubits",
    propagate_version = true
)]
struct Cli {
    /// JSON configuration file; omitted fields take documented defaults.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master random seed (overrides the config).
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory for the emitted files.
    #[arg(long, global = true, value_name = "DIR", default_value = "qiopa_out")]
    out: PathBuf,
    /// Amplifier gain (overrides the config).
    #[arg(long, global = true, value_name = "REAL", allow_negative_numbers = true)]
    g: Option<f64>,
    /// Transmission × detection efficiency on the amplified beam
    /// (overrides the config).
    #[arg(long, global = true, value_name = "REAL", allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Filter threshold in detected-photon equivalents (overrides the config).
    #[arg(
        long = "threshold-k",
        global = true,
        value_name = "REAL",
        allow_negative_numbers = true
    )]
    threshold_k: Option<f64>,
    /// Conclusive events to collect per setting (overrides the config).
    #[arg(long, global = true, value_name = "N")]
    trials: Option<u64>,
    /// Report exact outcome probabilities instead of sampling counts.
    #[arg(long, global = true)]
    exact: bool,
    /// Worker threads for sampling; 0 picks automatically. Outputs are
    /// byte-identical for every worker count.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scan the trigger phase and record the coincidence fringe per basis.
    Fringe {
        /// Correlation bases to scan: 2 (circular) and/or 3 (±). Default:
        /// the equatorial bases listed in the config.
        #[arg(long, value_name = "2|3")]
        basis: Vec<u8>,
    },
    /// Measure matched-basis visibilities and the separability sum.
    Entanglement,
    /// Run the four-setting Bell test on the two-pair entangled state.
    Chsh {
        /// Replace the physical filter chain by ideal projective
        /// discrimination of the two amplified states (reference mode).
        #[arg(long)]
        ideal: bool,
    },
    /// Drive the filter with thermal light and sweep the threshold.
    Ofchar {
        /// Mean detected photon number of the thermal drive.
        /// Default: η·sinh²g, the detected mean of one spontaneous mode.
        #[arg(long, value_name = "REAL")]
        mean_n: Option<f64>,
        /// Largest threshold in the sweep. Default: max(12, ⌈threshold⌉).
        #[arg(long, value_name = "K")]
        k_max: Option<u32>,
    },
    /// Dump photon-number grids of the reference amplified states
    /// (pre-detection, no loss applied).
    State,
    /// Run the built-in invariant suite and print one pass/fail line each.
    Validate,
}

/// Why a run failed, for exit-code mapping.
enum Failure {
    Lib(Error),
    /// How many invariant checks failed under `validate`.
    Invariants(usize),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invariants(_) => 2,
            Failure::Lib(e) => match e {
                Error::Config(_)
                | Error::Io(_)
                | Error::InvalidGain { .. }
                | Error::InvalidEfficiency { .. }
                | Error::InvalidParameter { .. }
                | Error::Unsupported(_) => 1,
                Error::UnderTruncated { .. }
                | Error::ZeroProbability { .. }
                | Error::InvalidProbabilities { .. }
                | Error::InvalidDensityMatrix { .. }
                | Error::DegenerateFit { .. }
                | Error::NotNormalized { .. }
                | Error::BasisMismatch { .. } => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Invariants(n) => format!("{n} invariant check(s) failed"),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version print to stdout and succeed; real parse
            // errors print to stderr and are usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.exit_code())
        }
    }
}

/// Config file (or defaults) with the command-line overrides applied.
fn load_config(cli: &Cli) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => io::parse_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.rng_seed = seed;
    }
    if let Some(g) = cli.g {
        cfg.g = g;
    }
    if let Some(eta) = cli.eta {
        cfg.chain.eta = eta;
    }
    if let Some(k) = cli.threshold_k {
        cfg.chain.threshold_k = k;
    }
    if let Some(n) = cli.trials {
        cfg.n_trials = n;
    }
    if cli.exact {
        cfg.exact = true;
    }
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = load_config(cli)?;
    match &cli.command {
        Cmd::Fringe { basis } => fringe(cli, &cfg, basis),
        Cmd::Entanglement => entanglement(cli, &cfg),
        Cmd::Chsh { ideal } => chsh(cli, &cfg, *ideal),
        Cmd::Ofchar { mean_n, k_max } => ofchar(cli, &cfg, *mean_n, *k_max),
        Cmd::State => state(cli, &cfg),
        Cmd::Validate => validate::run(&cfg).map_err(Failure::Invariants),
    }
}

fn report(manifest: &RunManifest, cli: &Cli) {
    println!(
        "wrote {} + {} in {}",
        manifest.outputs.join(", "),
        io::MANIFEST_FILE,
        cli.out.display()
    );
}

fn fringe(cli: &Cli, cfg: &ExperimentConfig, basis: &[u8]) -> Result<(), Failure> {
    let bases: Vec<u8> = if basis.is_empty() {
        cfg.analysis_bases
            .iter()
            .copied()
            .filter(|&b| b == 2 || b == 3)
            .collect()
    } else {
        basis.to_vec()
    };
    if bases.is_empty() {
        return Err(Error::Config(
            "no equatorial basis to scan: pass --basis 2 and/or --basis 3".into(),
        )
        .into());
    }
    let mut scans = Vec::with_capacity(bases.len());
    for &b in &bases {
        scans.push(run_micro_macro_fringe(cfg, b)?);
    }
    let summary = io::RunSummary::for_fringe(cfg, &scans)?;
    for vis in summary.visibilities.as_deref().unwrap_or_default() {
        println!(
            "basis {}: V = {:.4} ± {:.4}",
            vis.basis_index, vis.visibility.value, vis.visibility.sigma
        );
    }
    let manifest = io::emit_fringe(&cli.out, cfg, &scans)?;
    report(&manifest, cli);
    Ok(())
}

fn entanglement(cli: &Cli, cfg: &ExperimentConfig) -> Result<(), Failure> {
    let res = run_entanglement_test(cfg)?;
    for record in &res.records {
        println!(
            "basis {}: V = {:.4} ± {:.4}",
            record.basis_index, record.visibility, record.sigma_visibility
        );
    }
    println!(
        "separability sum S = {:.4} ± {:.4} (assumed V1 = {}); bound 1 {}",
        res.s,
        res.sigma_s,
        res.v1_assumed,
        if res.violates_separability {
            "violated"
        } else {
            "respected"
        }
    );
    let manifest = io::emit_entanglement(&cli.out, cfg, &res)?;
    report(&manifest, cli);
    Ok(())
}

fn chsh(cli: &Cli, cfg: &ExperimentConfig, ideal: bool) -> Result<(), Failure> {
    let mut cfg = cfg.clone();
    if ideal {
        cfg.bob_measurement = BobMeasurement::IdealProjective;
    }
    let run = run_chsh(&cfg)?;
    for record in &run.records {
        println!(
            "E(phi_a = {:+.4}, phi_b = {:+.4}) = {:+.4} ± {:.4}",
            record.phi_a, record.phi_b, record.e, record.sigma_e
        );
    }
    println!(
        "S = {:.4} ± {:.4}; local bound 2 {}",
        run.s,
        run.sigma_s,
        if run.violates_chsh {
            "violated"
        } else {
            "respected"
        }
    );
    let manifest = io::emit_chsh(&cli.out, &cfg, &run)?;
    report(&manifest, cli);
    Ok(())
}

fn ofchar(
    cli: &Cli,
    cfg: &ExperimentConfig,
    mean_n: Option<f64>,
    k_max: Option<u32>,
) -> Result<(), Failure> {
    let mean = mean_n.unwrap_or_else(|| cfg.chain.eta * cfg.g.sinh().powi(2));
    let k_max = k_max.unwrap_or_else(|| (cfg.chain.threshold_k.ceil() as u32).max(12));
    let of = run_of_characterization(cfg, mean, k_max)?;
    let last = of.points.last().expect("sweep has at least threshold 0");
    println!(
        "thermal drive ⟨n⟩ = {:.4}: {} of {} trials reached k = {} (expected {:.1})",
        of.mean_n, last.counts, of.n_trials, last.k, last.expected
    );
    let manifest = io::emit_threshold(&cli.out, cfg, &of)?;
    report(&manifest, cli);
    Ok(())
}

fn state(cli: &Cli, cfg: &ExperimentConfig) -> Result<(), Failure> {
    // Reference gains: 1.6 for the amplified single-photon pair, 1.5 for the
    // amplified photon-pair state; --g overrides both.
    let g_single = cli.g.unwrap_or(1.6);
    let g_pair = cli.g.unwrap_or(1.5);
    let gp_single = GainParams::new(g_single)?;
    let gp_pair = GainParams::new(g_pair)?;
    let grids = vec![
        (
            "macro_plus".to_string(),
            macro_single(SingleSeed::Aligned, 0.0, &gp_single, cfg.cutoff)?
                .number_distribution(),
        ),
        (
            "macro_minus".to_string(),
            macro_single(SingleSeed::Orthogonal, 0.0, &gp_single, cfg.cutoff)?
                .number_distribution(),
        ),
        (
            "macro_pair".to_string(),
            macro_two_photon(TwoPhotonKind::OneEach, &gp_pair, cfg.cutoff)?
                .number_distribution(),
        ),
    ];
    for (name, dist) in &grids {
        println!(
            "{name}: grid {0}×{0}, tail mass {1:.2e}",
            dist.cutoff() + 1,
            dist.deficit()
        );
    }
    let manifest = io::emit_grids(&cli.out, cfg, &grids)?;
    report(&manifest, cli);
    Ok(())
}
