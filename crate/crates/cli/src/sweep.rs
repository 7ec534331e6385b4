//! Runs experiment specs and writes their rows as CSV.

use std::io::Write;

use ris_ssm::analytics::{abep_union, system_throughput, LinkBudget, UpepMethod};
use ris_ssm::montecarlo::{simulate_abep, simulate_capacity, trace_trials, write_trace, SweepResult, TrialPlan};

use crate::presets::PresetPlan;
use crate::spec::{ExperimentSpec, Metric};
use crate::CliError;

/// Column order of every CSV this tool writes.
pub const COLUMNS: [&str; 13] = [
    "snr_db",
    "ber_mc",
    "bit_errors",
    "bits_sent",
    "abep_pdf",
    "abep_mgf",
    "abep_qapprox",
    "abep_asymptotic",
    "capacity_mc",
    "capacity_lb",
    "throughput_mc",
    "throughput_lb",
    "series",
];

/// Knobs that change how a sweep runs but not what it computes.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub workers: Option<usize>,
}

pub fn plan_for(spec: &ExperimentSpec, opts: &RunOptions) -> TrialPlan {
    let mut plan = TrialPlan::new(spec.trials, spec.seed).with_scheme(spec.scheme).with_mode(spec.mode);
    if let Some(w) = opts.workers {
        plan = plan.with_workers(w);
    }
    plan
}

/// Evaluates one SNR point.
pub fn run_point(spec: &ExperimentSpec, snr_db: f64, opts: &RunOptions) -> Result<SweepResult, CliError> {
    let cfg = spec.validate()?;
    let budget = LinkBudget::from_snr_db(snr_db);
    let plan = plan_for(spec, opts);

    let mut row = if spec.wants(Metric::Ber) || spec.wants(Metric::Throughput) {
        simulate_abep(&cfg, &budget, &plan)?
    } else {
        SweepResult::new(snr_db)
    };
    if !spec.wants(Metric::Ber) {
        row.ber_mc = None;
        row.bit_errors = None;
        row.bits_sent = None;
    }
    row.fill_analytics(&cfg, &budget, &spec.methods)?;
    if spec.wants(Metric::Throughput) {
        if row.throughput_lb.is_none() {
            let bound = abep_union(&cfg, &budget, UpepMethod::Mgf)?;
            row.throughput_lb = system_throughput(bound, &cfg).ok();
        }
    } else {
        row.throughput_mc = None;
        row.throughput_lb = None;
    }
    if spec.wants(Metric::Capacity) {
        row.capacity_mc = Some(simulate_capacity(&cfg, &budget, &plan)?);
        row.fill_capacity_bound(&cfg, &budget)?;
    }
    Ok(row)
}

pub fn run_spec(spec: &ExperimentSpec, opts: &RunOptions) -> Result<Vec<SweepResult>, CliError> {
    spec.validate()?;
    spec.snr.points().into_iter().map(|snr| run_point(spec, snr, opts)).collect()
}

/// Writes per-trial outcomes of every SNR point, each block headed by a
/// `# series = ..., snr_db = ...` line.
pub fn write_spec_trace<W: Write>(label: &str, spec: &ExperimentSpec, opts: &RunOptions, mut out: W) -> Result<(), CliError> {
    let cfg = spec.validate()?;
    let plan = plan_for(spec, opts);
    for snr in spec.snr.points() {
        writeln!(out, "# series = {label}, snr_db = {snr}")?;
        let outcomes = trace_trials(&cfg, &LinkBudget::from_snr_db(snr), &plan, 0..spec.trials)?;
        write_trace(&outcomes, &mut out)?;
    }
    Ok(())
}

/// Six significant digits in scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.5e}")
}

fn cells(row: &SweepResult, series: &str) -> Vec<String> {
    let f = |v: Option<f64>| v.map(format_float).unwrap_or_default();
    let i = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    vec![
        format_float(row.snr_db),
        f(row.ber_mc),
        i(row.bit_errors),
        i(row.bits_sent),
        f(row.abep_pdf),
        f(row.abep_mgf),
        f(row.abep_qapprox),
        f(row.abep_asymptotic),
        f(row.capacity_mc),
        f(row.capacity_lb),
        f(row.throughput_mc),
        f(row.throughput_lb),
        series.to_string(),
    ]
}

/// Resolved sweep ready to be written: header comment lines and the series
/// to run.
#[derive(Debug, Clone)]
pub struct Job {
    pub header: Vec<String>,
    pub series: Vec<(String, ExperimentSpec)>,
}

impl Job {
    pub fn single(spec: ExperimentSpec) -> Self {
        let label = spec.scheme.name().to_string();
        let mut header = vec![format!("series = {label}")];
        header.extend(spec.to_config_lines());
        Self { header, series: vec![(label, spec)] }
    }

    pub fn preset(plan: PresetPlan) -> Self {
        let mut header = vec![format!("preset = {}", plan.preset)];
        header.extend(plan.assumptions.iter().map(|a| format!("assumption = {a}")));
        let mut series = Vec::new();
        for s in plan.series {
            header.push(format!("series = {}", s.label));
            header.extend(s.spec.to_config_lines());
            series.push((s.label, s.spec));
        }
        Self { header, series }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        for (_, spec) in &self.series {
            spec.validate()?;
        }
        Ok(())
    }

    /// Runs every series and writes the CSV to `out`.
    pub fn write_csv<W: Write>(&self, opts: &RunOptions, mut out: W) -> Result<(), CliError> {
        self.validate()?;
        for line in &self.header {
            writeln!(out, "# {line}")?;
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(COLUMNS)?;
        for (label, spec) in &self.series {
            for row in run_spec(spec, opts)? {
                w.write_record(cells(&row, label))?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::SnrGrid;

    #[test]
    fn float_format() {
        assert_eq!(format_float(0.136634), "1.36634e-1");
        assert_eq!(format_float(20.0), "2.00000e1");
        assert_eq!(format_float(0.0), "0.00000e0");
        assert_eq!(format_float(-1.25e-7), "-1.25000e-7");
    }

    #[test]
    fn analytic_only_row() {
        let spec = ExperimentSpec {
            methods: vec![UpepMethod::Mgf, UpepMethod::Pdf],
            metrics: vec![],
            snr: SnrGrid::single(10.0),
            ..Default::default()
        };
        let row = run_point(&spec, 10.0, &RunOptions::default()).unwrap();
        assert!(row.ber_mc.is_none() && row.throughput_lb.is_none() && row.capacity_lb.is_none());
        assert!((row.abep_mgf.unwrap() - row.abep_pdf.unwrap()).abs() < 1e-12);
    }

    #[test]
    fn throughput_without_bound_methods() {
        let spec = ExperimentSpec { methods: vec![], metrics: vec![Metric::Throughput], trials: 2000, ..Default::default() };
        let row = run_point(&spec, 20.0, &RunOptions::default()).unwrap();
        assert!(row.ber_mc.is_none());
        assert!(row.abep_mgf.is_none());
        assert!(row.throughput_mc.is_some() && row.throughput_lb.is_some());
    }
}
