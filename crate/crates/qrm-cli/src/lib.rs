//! Library surface of the sweep CLI, exposed so integration tests can drive
//! the commands in-process.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::Path;
use std::sync::Once;

use config::SweepConfig;
use error::Result;
use output::RunManifest;

static RUNTIME_INIT: Once = Once::new();

/// Process-wide runtime setup: single-threaded BLAS (parallelism lives at the
/// sweep-point level, and reproducibility matters more than per-call speed)
/// and the rayon pool size.
pub fn init_runtime(workers: Option<usize>) {
    RUNTIME_INIT.call_once(|| {
        qrm_core::linalg::set_blas_threads(1);
        if let Some(n) = workers {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    });
}

/// The five subcommands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Levels,
    Rates,
    Spectra,
    GaugeAudit,
    Compare,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Levels => "levels",
            CommandKind::Rates => "rates",
            CommandKind::Spectra => "spectra",
            CommandKind::GaugeAudit => "gauge-audit",
            CommandKind::Compare => "compare",
        }
    }
}

/// Run one command against a parsed config. Output files land in `out_dir`
/// (falling back to the config's `outputs` path); the manifest is written
/// even when the command fails with a flagged-point or audit error.
pub fn run_command(
    kind: CommandKind,
    config: &SweepConfig,
    out_dir: Option<&Path>,
    workers: Option<usize>,
    seedless: bool,
) -> Result<()> {
    init_runtime(workers);
    let out_dir = out_dir.unwrap_or(&config.outputs).to_path_buf();
    std::fs::create_dir_all(&out_dir)?;
    let effective_workers = workers.unwrap_or_else(rayon::current_num_threads);
    let mut manifest = RunManifest::new(kind.name(), &config.raw, effective_workers, seedless);

    let result = match kind {
        CommandKind::Levels => commands::levels::cmd_levels(config, &out_dir, &mut manifest),
        CommandKind::Rates => commands::rates::cmd_rates(config, &out_dir, &mut manifest),
        CommandKind::Spectra => commands::spectra::cmd_spectra(config, &out_dir, &mut manifest),
        CommandKind::GaugeAudit => commands::audit::cmd_gauge_audit(config, &out_dir, &mut manifest),
        CommandKind::Compare => commands::compare::cmd_compare(config, &out_dir, &mut manifest),
    };

    // every run leaves a manifest, including failed audits
    manifest.write(&out_dir)?;
    result
}
