//! Command-line experiment runner: parameter sweeps, figure presets and CSV
//! output for the `ris-ssm` engine.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;
use thiserror::Error;

pub mod presets;
pub mod spec;
pub mod sweep;

pub use presets::{Preset, PresetPlan, Series};
pub use spec::{ExperimentSpec, Metric, SnrGrid};
pub use sweep::{Job, RunOptions, COLUMNS};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] ris_ssm::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Model(_) => 2,
            Self::Io(_) | Self::Csv(_) => 3,
        }
    }
}

/// Sweep RIS-SSM error rate, capacity and throughput over SNR and write CSV.
///
/// Settings come from `--config`, then individual flags on top. `--preset`
/// runs a fixed figure configuration; only `--trials`, `--seed`,
/// `--output`, `--workers` and `--trace` may accompany it.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "ris-ssm", version)]
pub struct Cli {
    /// ris_ssm_sorted, ris_ssm_random, benchmark_max_beam or benchmark_min_beam
    #[arg(long)]
    pub scheme: Option<String>,
    /// Total number of scatterers L
    #[arg(long)]
    pub l_total: Option<usize>,
    /// Candidate scatterers L_s
    #[arg(long)]
    pub l_s: Option<usize>,
    /// Constellation order M
    #[arg(long)]
    pub mod_order: Option<usize>,
    /// psk or qam
    #[arg(long)]
    pub mod_scheme: Option<String>,
    /// gray or natural symbol labels
    #[arg(long)]
    pub symbol_mapping: Option<String>,
    /// SNR grid in dB, start:step:stop
    #[arg(long)]
    pub snr: Option<String>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma separated subset of pdf,mgf,qapprox,asymptotic (empty for none)
    #[arg(long)]
    pub methods: Option<String>,
    /// Comma separated subset of ber,capacity,throughput (empty for none)
    #[arg(long)]
    pub metrics: Option<String>,
    /// abstract or full_array
    #[arg(long)]
    pub mode: Option<String>,
    /// CSV destination; stdout when absent
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// fig4a, fig4b, fig5a, fig5b, fig6, fig7, fig8, fig9a, fig9b, fig10 or fig11
    #[arg(long)]
    pub preset: Option<String>,
    /// key = value settings file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for the simulation
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write a per-trial trace to this file
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Print the resolved settings in config file form and exit
    #[arg(long)]
    pub print_config: bool,
}

impl Cli {
    fn spec_flags(&self) -> Vec<(&'static str, String)> {
        let mut v = Vec::new();
        let mut push = |k, val: Option<String>| {
            if let Some(x) = val {
                v.push((k, x));
            }
        };
        push("scheme", self.scheme.clone());
        push("l_total", self.l_total.map(|x| x.to_string()));
        push("l_s", self.l_s.map(|x| x.to_string()));
        push("mod_order", self.mod_order.map(|x| x.to_string()));
        push("mod_scheme", self.mod_scheme.clone());
        push("symbol_mapping", self.symbol_mapping.clone());
        push("snr", self.snr.clone());
        push("methods", self.methods.clone());
        push("metrics", self.metrics.clone());
        push("mode", self.mode.clone());
        v
    }

    /// Resolves flags and config into a job.
    pub fn job(&self) -> Result<Job, CliError> {
        if let Some(name) = &self.preset {
            let mut conflicting: Vec<&str> = self.spec_flags().into_iter().map(|(k, _)| k).collect();
            if self.config.is_some() {
                conflicting.push("config");
            }
            if !conflicting.is_empty() {
                return Err(CliError::Usage(format!("--preset cannot be combined with {}", conflicting.join(", "))));
            }
            let mut plan = name.parse::<Preset>()?.plan();
            for s in &mut plan.series {
                self.apply_run_overrides(&mut s.spec);
            }
            let job = Job::preset(plan);
            job.validate()?;
            return Ok(job);
        }
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::from_config_str(&std::fs::read_to_string(path)?)?,
            None => ExperimentSpec::default(),
        };
        for (k, v) in self.spec_flags() {
            spec.set(k, &v)?;
        }
        self.apply_run_overrides(&mut spec);
        spec.validate()?;
        Ok(Job::single(spec))
    }

    fn apply_run_overrides(&self, spec: &mut ExperimentSpec) {
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(o) = &self.output {
            spec.output = Some(o.clone());
        }
    }
}

/// Runs the command line end to end.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let job = cli.job()?;
    if cli.print_config {
        let mut out = io::stdout().lock();
        for line in &job.header {
            writeln!(out, "{line}")?;
        }
        return Ok(());
    }
    let opts = RunOptions { workers: cli.workers };
    if let Some(path) = &cli.trace {
        let mut w = BufWriter::new(File::create(path)?);
        for (label, spec) in &job.series {
            sweep::write_spec_trace(label, spec, &opts, &mut w)?;
        }
        w.flush()?;
    }
    let output = job.series.first().and_then(|(_, s)| s.output.clone());
    match output {
        Some(path) => {
            let file = File::create(&path)?;
            job.write_csv(&opts, BufWriter::new(file))
        }
        None => job.write_csv(&opts, io::stdout().lock()),
    }
}
