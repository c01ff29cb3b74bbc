//! Configuration ingestion and bit-stable result emission.
//!
//! Every file written here is plain text with `\n` line endings, UTF-8, and
//! numbers in shortest round-trip form, so a run with a fixed config and
//! seed produces byte-identical output files on every platform, locale, and
//! worker count. The one deliberate exception is the manifest's wall-clock
//! stamp, which records when the run happened and must be ignored when
//! comparing runs for reproducibility.

mod csv;
mod summary;

pub use csv::{fringe_csv, grid_csv, threshold_csv};
pub use summary::{BasisVisibility, RunSummary, SettingCorrelation, ValueWithSigma};

use crate::error::{Error, Result};
use crate::experiments::{
    ChshRun, EntanglementResult, ExperimentConfig, FringeScan, OfCharacterization,
};
use crate::fock::PhotonDistribution;
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// Read and validate an experiment configuration from a JSON file.
///
/// Missing fields take their documented defaults (an empty object `{}` is a
/// complete configuration); unknown keys and type mismatches are rejected
/// with the offending key named; values outside their physical domain are
/// rejected by the same validation the runners apply.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    cfg.validate()?;
    Ok(cfg)
}

/// What a command run produced: the exact configuration, the seed, the code
/// version, and every file written.
///
/// Two runs with the same config (hence seed) produce byte-identical listed
/// outputs; `wall_clock_unix_s` is the only field excluded from that
/// guarantee.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Version of this crate that produced the run.
    pub code_version: String,
    /// Master seed (copied out of the config for quick inspection).
    pub master_seed: u64,
    /// The full configuration the run used, after any command-line overrides.
    pub config: ExperimentConfig,
    /// Every file the command wrote (relative to the output directory),
    /// excluding this manifest itself.
    pub outputs: Vec<String>,
    /// Unix time (seconds) when the run finished. Not reproducible;
    /// ignore it when diffing runs.
    pub wall_clock_unix_s: u64,
}

impl RunManifest {
    /// Manifest for a finished run that wrote `outputs`.
    pub fn new(config: &ExperimentConfig, outputs: Vec<String>) -> RunManifest {
        RunManifest {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            master_seed: config.rng_seed,
            config: config.clone(),
            outputs,
            wall_clock_unix_s: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// File name of the manifest every emit function writes.
pub const MANIFEST_FILE: &str = "manifest.json";
/// File name of the JSON summary.
pub const SUMMARY_FILE: &str = "summary.json";

/// Create `dir` if needed and write one named file into it.
fn write_file(dir: &Path, name: &str, body: &str) -> Result<()> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, body)
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))
}

/// Serialize a value as pretty JSON with a trailing newline.
fn json_body<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Io(format!("cannot serialize: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Write the summary, then a manifest listing `outputs` + the summary;
/// returns the manifest.
fn finish(
    dir: &Path,
    cfg: &ExperimentConfig,
    mut outputs: Vec<String>,
    summary: &RunSummary,
) -> Result<RunManifest> {
    write_file(dir, SUMMARY_FILE, &json_body(summary)?)?;
    outputs.push(SUMMARY_FILE.to_string());
    let manifest = RunManifest::new(cfg, outputs);
    write_file(dir, MANIFEST_FILE, &json_body(&manifest)?)?;
    Ok(manifest)
}

/// Emit fringe scans: one CSV per scanned basis, a summary with the fitted
/// visibilities, and the manifest.
pub fn emit_fringe(
    dir: &Path,
    cfg: &ExperimentConfig,
    scans: &[FringeScan],
) -> Result<RunManifest> {
    let mut outputs = Vec::new();
    for scan in scans {
        let name = format!("fringe_basis{}.csv", scan.basis_index);
        write_file(dir, &name, &fringe_csv(scan))?;
        outputs.push(name);
    }
    let summary = RunSummary::for_fringe(cfg, scans)?;
    finish(dir, cfg, outputs, &summary)
}

/// Emit an entanglement run: the summary (visibilities and the separability
/// sum) and the manifest.
pub fn emit_entanglement(
    dir: &Path,
    cfg: &ExperimentConfig,
    res: &EntanglementResult,
) -> Result<RunManifest> {
    let summary = RunSummary::for_entanglement(cfg, res);
    finish(dir, cfg, Vec::new(), &summary)
}

/// Emit a Bell-test run: the summary (correlation table and Bell sum) and
/// the manifest.
pub fn emit_chsh(dir: &Path, cfg: &ExperimentConfig, run: &ChshRun) -> Result<RunManifest> {
    let summary = RunSummary::for_chsh(cfg, run);
    finish(dir, cfg, Vec::new(), &summary)
}

/// Emit a filter threshold sweep: the `k,counts` CSV, a summary, and the
/// manifest.
pub fn emit_threshold(
    dir: &Path,
    cfg: &ExperimentConfig,
    of: &OfCharacterization,
) -> Result<RunManifest> {
    let name = "threshold_scan.csv";
    write_file(dir, name, &threshold_csv(of))?;
    let summary = RunSummary::for_threshold(cfg, of);
    finish(dir, cfg, vec![name.to_string()], &summary)
}

/// Emit photon-number grids: one `m,n,p` CSV per named state and the
/// manifest (no summary; the grids are the payload).
pub fn emit_grids(
    dir: &Path,
    cfg: &ExperimentConfig,
    grids: &[(String, PhotonDistribution)],
) -> Result<RunManifest> {
    let mut outputs = Vec::new();
    for (name, dist) in grids {
        let file = format!("state_{name}.csv");
        write_file(dir, &file, &grid_csv(dist))?;
        outputs.push(file);
    }
    let manifest = RunManifest::new(cfg, outputs);
    write_file(dir, MANIFEST_FILE, &json_body(&manifest)?)?;
    Ok(manifest)
}
