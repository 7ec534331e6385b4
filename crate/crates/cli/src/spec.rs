//! Experiment description and its flat `key = value` file format.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use ris_ssm::analytics::UpepMethod;
use ris_ssm::channel::ArrayGeometry;
use ris_ssm::modulation::{Constellation, SymbolMapping};
use ris_ssm::montecarlo::{Scheme, SimMode};
use ris_ssm::{ConstellationScheme, SsmConfig};

use crate::CliError;

/// Full-array runs are validation scale only.
pub const MAX_FULL_ARRAY_TRIALS: u64 = 100_000;

/// SNR grid `start:step:stop` in dB, both ends inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrGrid {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl SnrGrid {
    pub fn new(start: f64, step: f64, stop: f64) -> Result<Self, CliError> {
        if !(start.is_finite() && step.is_finite() && stop.is_finite()) {
            return Err(CliError::Usage(format!("SNR grid {start}:{step}:{stop} is not finite")));
        }
        if step <= 0.0 {
            return Err(CliError::Usage(format!("SNR step must be positive, got {step}")));
        }
        if stop < start {
            return Err(CliError::Usage(format!("SNR grid stops ({stop}) before it starts ({start})")));
        }
        Ok(Self { start, step, stop })
    }

    /// A one-point grid.
    pub fn single(snr_db: f64) -> Self {
        Self { start: snr_db, step: 1.0, stop: snr_db }
    }

    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl fmt::Display for SnrGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.step, self.stop)
    }
}

impl FromStr for SnrGrid {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad SNR value '{p}' in '{s}'")))
        };
        match parts.as_slice() {
            [one] => Ok(Self::single(num(one)?)),
            [a, b, c] => Self::new(num(a)?, num(b)?, num(c)?),
            _ => Err(CliError::Usage(format!("SNR grid '{s}' is not start:step:stop"))),
        }
    }
}

/// What a sweep measures besides the analytic ABEP bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Simulated BER with its error and bit counts.
    Ber,
    /// Simulated capacity and its lower bound.
    Capacity,
    /// Simulated throughput and the bound-based one.
    Throughput,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Self::Ber, Self::Capacity, Self::Throughput];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ber => "ber",
            Self::Capacity => "capacity",
            Self::Throughput => "throughput",
        }
    }
}

impl FromStr for Metric {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| CliError::Usage(format!("unknown metric '{s}' (ber, capacity, throughput)")))
    }
}

fn mapping_name(m: SymbolMapping) -> &'static str {
    match m {
        SymbolMapping::Gray => "gray",
        SymbolMapping::Natural => "natural",
    }
}

/// One sweep: a system configuration, an SNR grid and what to compute at
/// each point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub scheme: Scheme,
    pub l_total: usize,
    pub l_s: usize,
    pub mod_order: usize,
    pub mod_scheme: ConstellationScheme,
    pub symbol_mapping: SymbolMapping,
    pub snr: SnrGrid,
    pub trials: u64,
    pub seed: u64,
    pub methods: Vec<UpepMethod>,
    pub metrics: Vec<Metric>,
    pub mode: SimMode,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            scheme: Scheme::RisSsmSorted,
            l_total: 4,
            l_s: 2,
            mod_order: 2,
            mod_scheme: ConstellationScheme::Psk,
            symbol_mapping: SymbolMapping::Gray,
            snr: SnrGrid { start: 0.0, step: 2.0, stop: 30.0 },
            trials: 1_000_000,
            seed: 1,
            methods: vec![UpepMethod::Mgf],
            metrics: vec![Metric::Ber],
            mode: SimMode::Abstract,
            output: None,
        }
    }
}

const KEYS: [&str; 13] = [
    "scheme",
    "l_total",
    "l_s",
    "mod_order",
    "mod_scheme",
    "symbol_mapping",
    "snr",
    "trials",
    "seed",
    "methods",
    "metrics",
    "mode",
    "output",
];

impl ExperimentSpec {
    pub fn ssm_config(&self) -> Result<SsmConfig, CliError> {
        let c = Constellation::with_mapping(self.mod_scheme, self.mod_order, self.symbol_mapping)?;
        Ok(SsmConfig::new(self.l_total, self.l_s, c)?)
    }

    pub fn wants(&self, metric: Metric) -> bool {
        self.metrics.contains(&metric)
    }

    /// Checks everything a run would reject, before any work starts.
    pub fn validate(&self) -> Result<SsmConfig, CliError> {
        let cfg = self.ssm_config()?;
        if self.trials == 0 {
            return Err(CliError::Usage("trials must be >= 1".into()));
        }
        if self.scheme.is_benchmark() && self.l_s != 1 {
            return Err(CliError::Usage(format!("{} needs l_s = 1, got {}", self.scheme, self.l_s)));
        }
        if !self.methods.is_empty() && self.scheme != Scheme::RisSsmSorted {
            return Err(CliError::Usage(format!(
                "analytic methods describe {} only, not {}",
                Scheme::RisSsmSorted,
                self.scheme
            )));
        }
        let needs_labels = !self.methods.is_empty() || self.wants(Metric::Ber) || self.wants(Metric::Throughput);
        if needs_labels && !cfg.is_bit_labelled() {
            return Err(CliError::Usage(format!(
                "l_s = {} is not a power of two; only the capacity metric is defined",
                self.l_s
            )));
        }
        if matches!(self.mode, SimMode::FullArray(_)) && self.trials > MAX_FULL_ARRAY_TRIALS {
            return Err(CliError::Usage(format!(
                "full_array mode is limited to {MAX_FULL_ARRAY_TRIALS} trials, got {}",
                self.trials
            )));
        }
        Ok(cfg)
    }

    /// `key = value` lines, one per field, in a fixed order.
    pub fn to_config_lines(&self) -> Vec<String> {
        let join = |v: Vec<&str>| v.join(",");
        KEYS.iter()
            .map(|&k| {
                let v = match k {
                    "scheme" => self.scheme.name().to_string(),
                    "l_total" => self.l_total.to_string(),
                    "l_s" => self.l_s.to_string(),
                    "mod_order" => self.mod_order.to_string(),
                    "mod_scheme" => self.mod_scheme.name().to_string(),
                    "symbol_mapping" => mapping_name(self.symbol_mapping).to_string(),
                    "snr" => self.snr.to_string(),
                    "trials" => self.trials.to_string(),
                    "seed" => self.seed.to_string(),
                    "methods" => join(self.methods.iter().map(|m| m.name()).collect()),
                    "metrics" => join(self.metrics.iter().map(|m| m.name()).collect()),
                    "mode" => self.mode.name().to_string(),
                    "output" => self.output.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
                    _ => unreachable!(),
                };
                format!("{k} = {v}").trim_end().to_string()
            })
            .collect()
    }

    pub fn to_config_string(&self) -> String {
        let mut s = self.to_config_lines().join("\n");
        s.push('\n');
        s
    }

    /// Parses a config file. Missing keys keep their defaults; unknown or
    /// repeated keys are errors.
    pub fn from_config_str(text: &str) -> Result<Self, CliError> {
        let mut spec = Self::default();
        let mut seen = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("line {}: expected key = value, got '{line}'", n + 1)))?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(CliError::Usage(format!("line {}: '{key}' given twice", n + 1)));
            }
            seen.push(key);
            spec.set(key, value.trim()).map_err(|e| match e {
                CliError::Usage(msg) => CliError::Usage(format!("line {}: {msg}", n + 1)),
                other => other,
            })?;
        }
        Ok(spec)
    }

    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn int<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
            v.parse().map_err(|_| CliError::Usage(format!("{key}: '{v}' is not a non-negative integer")))
        }
        match key {
            "scheme" => self.scheme = value.parse()?,
            "l_total" => self.l_total = int(key, value)?,
            "l_s" => self.l_s = int(key, value)?,
            "mod_order" => self.mod_order = int(key, value)?,
            "mod_scheme" => self.mod_scheme = value.parse()?,
            "symbol_mapping" => self.symbol_mapping = value.parse()?,
            "snr" => self.snr = value.parse()?,
            "trials" => self.trials = int(key, value)?,
            "seed" => self.seed = int(key, value)?,
            "methods" => self.methods = parse_list(value)?,
            "metrics" => self.metrics = parse_list(value)?,
            "mode" => self.mode = parse_mode(value)?,
            "output" => self.output = (!value.is_empty()).then(|| PathBuf::from(value)),
            other => return Err(CliError::Usage(format!("unknown key '{other}'"))),
        }
        Ok(())
    }
}

fn parse_mode(value: &str) -> Result<SimMode, CliError> {
    match value.parse::<SimMode>()? {
        SimMode::FullArray(_) => Ok(SimMode::FullArray(ArrayGeometry::default())),
        m => Ok(m),
    }
}

/// Comma separated list without duplicates; empty means none.
pub fn parse_list<T>(value: &str) -> Result<Vec<T>, CliError>
where
    T: FromStr + PartialEq,
    CliError: From<T::Err>,
{
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let x: T = item.parse()?;
        if !out.contains(&x) {
            out.push(x);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_arithmetic() {
        assert_eq!("0:2:30".parse::<SnrGrid>().unwrap().points().len(), 16);
        assert_eq!("24".parse::<SnrGrid>().unwrap().points(), vec![24.0]);
        assert_eq!("0:0.1:1".parse::<SnrGrid>().unwrap().points().len(), 11);
        assert_eq!("-10:5:11".parse::<SnrGrid>().unwrap().points(), vec![-10.0, -5.0, 0.0, 5.0, 10.0]);
        assert!("0:0:10".parse::<SnrGrid>().is_err());
        assert!("10:1:0".parse::<SnrGrid>().is_err());
        assert!("0:1".parse::<SnrGrid>().is_err());
    }

    #[test]
    fn config_round_trip() {
        let spec = ExperimentSpec {
            scheme: Scheme::BenchmarkMinBeam,
            l_total: 12,
            l_s: 1,
            mod_order: 16,
            mod_scheme: ConstellationScheme::Qam,
            symbol_mapping: SymbolMapping::Natural,
            snr: SnrGrid::new(-3.5, 0.25, 7.0).unwrap(),
            trials: 12345,
            seed: u64::MAX,
            methods: vec![],
            metrics: vec![Metric::Throughput, Metric::Ber],
            mode: SimMode::FullArray(ArrayGeometry::default()),
            output: Some(PathBuf::from("out dir/run.csv")),
        };
        let text = spec.to_config_string();
        assert_eq!(ExperimentSpec::from_config_str(&text).unwrap(), spec);
        let d = ExperimentSpec::default();
        assert_eq!(ExperimentSpec::from_config_str(&d.to_config_string()).unwrap(), d);
    }

    #[test]
    fn config_comments_and_errors() {
        let s = ExperimentSpec::from_config_str("# sweep\n\nl_total = 8\n  l_s=4 \nmethods = pdf, mgf,pdf\n").unwrap();
        assert_eq!((s.l_total, s.l_s), (8, 4));
        assert_eq!(s.methods, vec![UpepMethod::Pdf, UpepMethod::Mgf]);
        assert!(ExperimentSpec::from_config_str("l_total = 4\nl_total = 5\n").is_err());
        assert!(ExperimentSpec::from_config_str("colour = red\n").is_err());
        assert!(ExperimentSpec::from_config_str("l_total 4\n").is_err());
        assert!(ExperimentSpec::from_config_str("trials = -1\n").is_err());
        assert!(ExperimentSpec::from_config_str("methods = exact\n").is_err());
    }

    #[test]
    fn validation() {
        assert!(ExperimentSpec::default().validate().is_ok());
        let bad = |f: fn(&mut ExperimentSpec)| {
            let mut s = ExperimentSpec::default();
            f(&mut s);
            s.validate().is_err()
        };
        assert!(bad(|s| s.trials = 0));
        assert!(bad(|s| s.scheme = Scheme::BenchmarkMaxBeam));
        assert!(bad(|s| s.scheme = Scheme::RisSsmRandom));
        assert!(bad(|s| s.l_s = 3));
        assert!(bad(|s| s.l_s = 5));
        assert!(bad(|s| s.mod_order = 3));
        assert!(bad(|s| s.mode = SimMode::FullArray(ArrayGeometry::default())));
        let mut cap = ExperimentSpec { l_total: 8, l_s: 3, methods: vec![], metrics: vec![Metric::Capacity], ..Default::default() };
        assert!(cap.validate().is_ok());
        cap.metrics.push(Metric::Ber);
        assert!(cap.validate().is_err());
    }
}
