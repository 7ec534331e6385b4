//! Trial-level simulation of the RIS-SSM link.
//!
//! Each trial owns a ChaCha8 stream keyed by `(master_seed, trial_index)`,
//! so estimates do not depend on how trials are spread over threads. Within a
//! trial the draws happen in a fixed order: path gains, angles (full-array
//! mode only), the transmitted label, noise, then the scatterer subset
//! (random selection only). Schemes and SNR points run with the same seed
//! therefore share channels, bits and normalized noise.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytics::{
    abep_union, ergodic_capacity_lb, system_throughput, CapacityVariant, LinkBudget, UpepMethod,
};
use crate::channel::{AngleDomain, ArrayGeometry, ArrayLink, ChannelRealization, CVector};
use crate::error::{config, Error, Result};
use crate::modulation::SsmConfig;
use crate::orderstats::{complex_gaussian, sorted_complex_gains};

/// Trials per work unit. Fixed so that floating-point reductions are
/// independent of the thread count.
const CHUNK: u64 = 1024;
/// Chunks between early-stop checks.
const CHUNKS_PER_BLOCK: u64 = 64;

/// Transmission strategy under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Scheme {
    /// RIS-SSM over the `L_s` strongest scatterers.
    #[default]
    RisSsmSorted,
    /// RIS-SSM over `L_s` scatterers picked uniformly at random.
    RisSsmRandom,
    /// All bits on the symbol, beam fixed on the strongest scatterer.
    BenchmarkMaxBeam,
    /// All bits on the symbol, beam fixed on the weakest scatterer.
    BenchmarkMinBeam,
}

impl Scheme {
    pub const ALL: [Scheme; 4] =
        [Self::RisSsmSorted, Self::RisSsmRandom, Self::BenchmarkMaxBeam, Self::BenchmarkMinBeam];

    pub fn name(self) -> &'static str {
        match self {
            Self::RisSsmSorted => "ris_ssm_sorted",
            Self::RisSsmRandom => "ris_ssm_random",
            Self::BenchmarkMaxBeam => "benchmark_max_beam",
            Self::BenchmarkMinBeam => "benchmark_min_beam",
        }
    }

    pub fn is_benchmark(self) -> bool {
        matches!(self, Self::BenchmarkMaxBeam | Self::BenchmarkMinBeam)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| config(format!("unknown scheme '{s}'")))
    }
}

/// Fixed-beam benchmark choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Benchmark {
    Max,
    Min,
}

/// How the received branch observations are produced.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SimMode {
    /// `y(l') = sqrt(P_s) h_l s_m [l' = l] + n_l'`, independent unit-variance
    /// noise per monitored branch.
    #[default]
    Abstract,
    /// Explicit arrays: steering vectors, RIS alignment, receive combining.
    FullArray(ArrayGeometry),
}

impl SimMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Abstract => "abstract",
            Self::FullArray(_) => "full_array",
        }
    }
}

impl FromStr for SimMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "abstract" => Ok(Self::Abstract),
            "full_array" => Ok(Self::FullArray(ArrayGeometry::default())),
            other => Err(config(format!("unknown mode '{other}' (abstract, full_array)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialPlan {
    pub trials: u64,
    pub master_seed: u64,
    pub mode: SimMode,
    pub scheme: Scheme,
    pub angle_domain: AngleDomain,
    /// Stop a point once this many bit errors are counted (checked every
    /// 65536 trials). `None` runs all trials.
    pub min_bit_errors: Option<u64>,
    /// Thread count; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl TrialPlan {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        Self {
            trials,
            master_seed,
            mode: SimMode::Abstract,
            scheme: Scheme::RisSsmSorted,
            angle_domain: AngleDomain::HalfPlane,
            min_bit_errors: None,
            workers: None,
        }
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_mode(mut self, mode: SimMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    pub fn with_early_stop(mut self, min_bit_errors: u64) -> Self {
        self.min_bit_errors = Some(min_bit_errors);
        self
    }

    fn validate(&self, cfg: &SsmConfig) -> Result<()> {
        if self.trials == 0 {
            return Err(config("trials must be >= 1"));
        }
        if self.scheme.is_benchmark() && cfg.l_s() != 1 {
            return Err(config(format!("benchmarks use a single fixed beam, got L_s = {}", cfg.l_s())));
        }
        if self.workers == Some(0) {
            return Err(config("workers must be >= 1"));
        }
        Ok(())
    }
}

impl Default for TrialPlan {
    fn default() -> Self {
        Self::new(1_000_000, 0)
    }
}

/// Bit error count over a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BerEstimate {
    pub bit_errors: u64,
    pub bits_sent: u64,
    pub trials: u64,
}

impl BerEstimate {
    pub fn ber(&self) -> f64 {
        self.bit_errors as f64 / self.bits_sent as f64
    }

    /// Binomial standard error `sqrt(p (1 - p) / bits_sent)`.
    pub fn std_error(&self) -> f64 {
        let p = self.ber();
        (p * (1.0 - p) / self.bits_sent as f64).sqrt()
    }
}

/// One SNR point of a sweep. Unset fields are `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepResult {
    pub snr_db: f64,
    pub ber_mc: Option<f64>,
    pub bit_errors: Option<u64>,
    pub bits_sent: Option<u64>,
    pub abep_pdf: Option<f64>,
    pub abep_mgf: Option<f64>,
    pub abep_qapprox: Option<f64>,
    pub abep_asymptotic: Option<f64>,
    pub capacity_mc: Option<f64>,
    pub capacity_lb: Option<f64>,
    pub throughput_mc: Option<f64>,
    pub throughput_lb: Option<f64>,
}

impl SweepResult {
    pub fn new(snr_db: f64) -> Self {
        Self { snr_db, ..Default::default() }
    }

    /// Fills the ABEP columns for `methods`. The bound-based throughput uses
    /// the MGF bound when requested, else the PDF bound; it is left empty
    /// when the bound exceeds 1.
    pub fn fill_analytics(&mut self, cfg: &SsmConfig, budget: &LinkBudget, methods: &[UpepMethod]) -> Result<()> {
        for &m in methods {
            let v = Some(abep_union(cfg, budget, m)?);
            match m {
                UpepMethod::Pdf => self.abep_pdf = v,
                UpepMethod::Mgf => self.abep_mgf = v,
                UpepMethod::QApprox => self.abep_qapprox = v,
                UpepMethod::Asymptotic => self.abep_asymptotic = v,
            }
        }
        if let Some(p) = self.abep_mgf.or(self.abep_pdf) {
            self.throughput_lb = system_throughput(p, cfg).ok();
        }
        Ok(())
    }

    /// Fills `capacity_lb` with the exact-MGF lower bound.
    pub fn fill_capacity_bound(&mut self, cfg: &SsmConfig, budget: &LinkBudget) -> Result<()> {
        self.capacity_lb = Some(ergodic_capacity_lb(cfg, budget, CapacityVariant::ExactMgf)?);
        Ok(())
    }

    fn set_ber(&mut self, est: &BerEstimate, cfg: &SsmConfig) {
        self.ber_mc = Some(est.ber());
        self.bit_errors = Some(est.bit_errors);
        self.bits_sent = Some(est.bits_sent);
        self.throughput_mc = Some((1.0 - est.ber()) * f64::from(cfg.bits_per_use()));
    }
}

/// What a single trial produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub trial: u64,
    /// Transmitted `(l, m)`, 1-based.
    pub sent: (usize, usize),
    /// Detected `(l_hat, m_hat)`, 1-based.
    pub detected: (usize, usize),
    pub bit_errors: u32,
    /// Instantaneous mutual-information bound of this channel draw.
    pub capacity: f64,
}

struct Engine<'a> {
    cfg: &'a SsmConfig,
    plan: &'a TrialPlan,
    sqrt_p: f64,
    sqrt_n0: f64,
    rho: f64,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a SsmConfig, budget: &LinkBudget, plan: &'a TrialPlan) -> Result<Self> {
        plan.validate(cfg)?;
        Ok(Self { cfg, plan, sqrt_p: budget.p_s().sqrt(), sqrt_n0: budget.n0().sqrt(), rho: budget.rho() })
    }

    fn trial(&self, trial: u64) -> TrialOutcome {
        let cfg = self.cfg;
        let (l_total, l_s) = (cfg.l_total(), cfg.l_s());
        let points = cfg.constellation().points();

        let mut rng = ChaCha8Rng::seed_from_u64(self.plan.master_seed);
        rng.set_stream(trial);

        let gains = sorted_complex_gains(l_total, &mut rng);
        let link = match self.plan.mode {
            SimMode::Abstract => None,
            SimMode::FullArray(geom) => {
                let angles = crate::channel::AngleSet::sample(l_total, self.plan.angle_domain, &mut rng);
                let real = ChannelRealization::new(gains.clone(), angles).expect("sampled realization is valid");
                Some((ArrayLink::new(&real, &geom), geom))
            }
        };
        let label = rng.random_range(0..cfg.alphabet_size() as u32);
        let (l, m) = cfg.split_label(label);

        let noise_len = match &link {
            None => l_s,
            Some((_, geom)) => geom.n_r,
        };
        let noise: Vec<Complex64> = (0..noise_len).map(|_| complex_gaussian(&mut rng) * self.sqrt_n0).collect();

        let selected: Vec<usize> = match self.plan.scheme {
            Scheme::RisSsmSorted => (0..l_s).collect(),
            Scheme::RisSsmRandom => index::sample(&mut rng, l_total, l_s).into_vec(),
            Scheme::BenchmarkMaxBeam => vec![0],
            Scheme::BenchmarkMinBeam => vec![l_total - 1],
        };

        let tx = points[m - 1] * self.sqrt_p;
        // per-branch observation and the channel coefficient the detector assumes
        let (y, coef): (Vec<Complex64>, Vec<Complex64>) = match &link {
            None => selected
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let signal = if i == l - 1 { gains[p] * tx } else { Complex64::new(0.0, 0.0) };
                    (signal + noise[i], gains[p])
                })
                .unzip(),
            Some((link, _)) => {
                let noise = CVector::from_vec(noise);
                let rx = link.received(selected[l - 1]) * tx + noise;
                selected
                    .iter()
                    .map(|&p| (link.rx_steering(p).dotc(&rx), link.branch_gain(p, p)))
                    .unzip()
            }
        };

        let mut best = (f64::INFINITY, 0, 0);
        for (i, (yi, gi)) in y.iter().zip(&coef).enumerate() {
            let g = gi * self.sqrt_p;
            for (j, s) in points.iter().enumerate() {
                let d = (yi - g * s).norm_sqr();
                if d < best.0 {
                    best = (d, i, j);
                }
            }
        }
        let detected = (best.1 + 1, best.2 + 1);
        let bit_errors = cfg.hamming_distance(l, m, detected.0, detected.1);

        let k = cfg.alphabet_size() as f64;
        let mult = ((l_s - 1) * (points.len() - 1)) as f64;
        let mut s = 0.0;
        if mult > 0.0 {
            for g in &coef {
                let g2 = g.norm_sqr();
                for p in points {
                    s += (-self.rho * g2 * p.norm_sqr() / 2.0).exp();
                }
            }
        }
        let capacity = 2.0 * k.log2() - (k + mult * s).log2();

        TrialOutcome { trial, sent: (l, m), detected, bit_errors, capacity }
    }

    fn chunk(&self, c: u64, end: u64) -> (u64, f64) {
        let lo = c * CHUNK;
        let hi = ((c + 1) * CHUNK).min(end);
        let mut errors = 0u64;
        let mut cap = 0.0;
        for t in lo..hi {
            let o = self.trial(t);
            errors += u64::from(o.bit_errors);
            cap += o.capacity;
        }
        (errors, cap)
    }

    /// Runs chunks `first..last` and returns their results in chunk order.
    fn chunks(&self, first: u64, last: u64) -> Vec<(u64, f64)> {
        let end = self.plan.trials;
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            let work = || (first..last).into_par_iter().map(|c| self.chunk(c, end)).collect();
            match self.plan.workers {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map(|pool| pool.install(work))
                    .unwrap_or_else(|_| (first..last).map(|c| self.chunk(c, end)).collect()),
                None => work(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            (first..last).map(|c| self.chunk(c, end)).collect()
        }
    }

    /// `(bit_errors, trials_run, capacity_sum)`.
    fn run(&self) -> (u64, u64, f64) {
        let n_chunks = self.plan.trials.div_ceil(CHUNK);
        let mut errors = 0u64;
        let mut cap = 0.0;
        let mut done = 0u64;
        let mut c = 0u64;
        while c < n_chunks {
            let last = (c + CHUNKS_PER_BLOCK).min(n_chunks);
            for (e, s) in self.chunks(c, last) {
                errors += e;
                cap += s;
            }
            done = (last * CHUNK).min(self.plan.trials);
            c = last;
            if self.plan.min_bit_errors.is_some_and(|min| errors >= min) {
                break;
            }
        }
        (errors, done, cap)
    }
}

/// Bit error count of `plan.scheme` at one SNR point.
pub fn simulate_ber(cfg: &SsmConfig, budget: &LinkBudget, plan: &TrialPlan) -> Result<BerEstimate> {
    cfg.require_bit_labels()?;
    let engine = Engine::new(cfg, budget, plan)?;
    let (bit_errors, trials, _) = engine.run();
    Ok(BerEstimate { bit_errors, bits_sent: trials * u64::from(cfg.bits_per_use()), trials })
}

/// Simulated BER (and throughput) of `plan.scheme` as a sweep row.
pub fn simulate_abep(cfg: &SsmConfig, budget: &LinkBudget, plan: &TrialPlan) -> Result<SweepResult> {
    let est = simulate_ber(cfg, budget, plan)?;
    let mut row = SweepResult::new(budget.snr_db());
    row.set_ber(&est, cfg);
    Ok(row)
}

/// Average over channel draws of the instantaneous capacity bound
/// `2 log2(L_s M) - log2(L_s M + sum_{l, m, l_hat != l, m_hat != m} exp(-rho |h_l_hat|^2 |s_m_hat|^2 / 2))`.
pub fn simulate_capacity(cfg: &SsmConfig, budget: &LinkBudget, plan: &TrialPlan) -> Result<f64> {
    let plan = TrialPlan { min_bit_errors: None, ..plan.clone() };
    let engine = Engine::new(cfg, budget, &plan)?;
    let (_, trials, cap) = engine.run();
    Ok(cap / trials as f64)
}

/// Fixed-beam benchmark; `cfg` must have `L_s = 1`.
pub fn simulate_benchmark(
    cfg: &SsmConfig,
    budget: &LinkBudget,
    plan: &TrialPlan,
    which: Benchmark,
) -> Result<SweepResult> {
    let scheme = match which {
        Benchmark::Max => Scheme::BenchmarkMaxBeam,
        Benchmark::Min => Scheme::BenchmarkMinBeam,
    };
    simulate_abep(cfg, budget, &plan.clone().with_scheme(scheme))
}

/// RIS-SSM with the `L_s` candidate scatterers drawn at random from all `L`.
pub fn simulate_random_selection(cfg: &SsmConfig, budget: &LinkBudget, plan: &TrialPlan) -> Result<SweepResult> {
    simulate_abep(cfg, budget, &plan.clone().with_scheme(Scheme::RisSsmRandom))
}

/// Replays trials `range` and returns their outcomes.
pub fn trace_trials(
    cfg: &SsmConfig,
    budget: &LinkBudget,
    plan: &TrialPlan,
    range: std::ops::Range<u64>,
) -> Result<Vec<TrialOutcome>> {
    let engine = Engine::new(cfg, budget, plan)?;
    Ok(range.map(|t| engine.trial(t)).collect())
}

/// Writes one line per trial: `trial l m l_hat m_hat bit_errors`.
pub fn write_trace<W: Write>(outcomes: &[TrialOutcome], mut out: W) -> std::io::Result<()> {
    for o in outcomes {
        writeln!(out, "{} {} {} {} {} {}", o.trial, o.sent.0, o.sent.1, o.detected.0, o.detected.1, o.bit_errors)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::ConstellationScheme;

    fn cfg(l: usize, ls: usize, m: usize) -> SsmConfig {
        SsmConfig::with_scheme(l, ls, ConstellationScheme::Psk, m).unwrap()
    }

    #[test]
    fn noiseless_detection_is_exact() {
        let c = cfg(4, 2, 4);
        let plan = TrialPlan::new(5000, 1);
        let est = simulate_ber(&c, &LinkBudget::from_snr_db(300.0), &plan).unwrap();
        assert_eq!(est.bit_errors, 0);
        assert_eq!(est.bits_sent, 5000 * 3);
        let q = SsmConfig::with_scheme(6, 1, ConstellationScheme::Qam, 16).unwrap();
        for w in [Benchmark::Max, Benchmark::Min] {
            let r = simulate_benchmark(&q, &LinkBudget::from_snr_db(300.0), &plan, w).unwrap();
            assert_eq!(r.bit_errors, Some(0));
        }
    }

    #[test]
    fn chunk_boundaries_do_not_matter() {
        let c = cfg(4, 2, 2);
        let b = LinkBudget::from_snr_db(5.0);
        let a = simulate_ber(&c, &b, &TrialPlan::new(3000, 9)).unwrap();
        let manual: u64 = trace_trials(&c, &b, &TrialPlan::new(3000, 9), 0..3000)
            .unwrap()
            .iter()
            .map(|o| u64::from(o.bit_errors))
            .sum();
        assert_eq!(a.bit_errors, manual);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let c = cfg(6, 4, 4);
        let b = LinkBudget::from_snr_db(8.0);
        let p1 = TrialPlan::new(20_000, 77).with_workers(1);
        let p4 = TrialPlan::new(20_000, 77).with_workers(4);
        assert_eq!(simulate_abep(&c, &b, &p1).unwrap(), simulate_abep(&c, &b, &p4).unwrap());
        assert_eq!(
            simulate_capacity(&c, &b, &p1).unwrap().to_bits(),
            simulate_capacity(&c, &b, &p4).unwrap().to_bits()
        );
    }

    #[test]
    fn early_stop_cuts_trials() {
        let c = cfg(4, 2, 2);
        let est = simulate_ber(&c, &LinkBudget::from_snr_db(0.0), &TrialPlan::new(1_000_000, 3).with_early_stop(2000))
            .unwrap();
        assert!(est.trials < 1_000_000 && est.bit_errors >= 2000);
        assert_eq!(est.trials % (CHUNK * CHUNKS_PER_BLOCK), 0);
    }

    #[test]
    fn benchmark_requires_single_beam() {
        let c = cfg(4, 2, 2);
        let plan = TrialPlan::new(10, 0);
        assert!(simulate_benchmark(&c, &LinkBudget::from_snr_db(10.0), &plan, Benchmark::Max).is_err());
        assert!(simulate_ber(&c, &LinkBudget::from_snr_db(10.0), &TrialPlan::new(0, 0)).is_err());
    }

    #[test]
    fn trace_format() {
        let c = cfg(2, 2, 2);
        let out = trace_trials(&c, &LinkBudget::from_snr_db(300.0), &TrialPlan::new(3, 0), 0..3).unwrap();
        let mut buf = Vec::new();
        write_trace(&out, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        for (i, line) in text.lines().enumerate() {
            let f: Vec<&str> = line.split(' ').collect();
            assert_eq!(f.len(), 6);
            assert_eq!(f[0], i.to_string());
            assert_eq!(f[1..3], f[3..5]);
        }
    }

    #[test]
    fn names_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.name().parse::<Scheme>().unwrap(), s);
        }
        assert_eq!("full_array".parse::<SimMode>().unwrap().name(), "full_array");
        assert!("fast".parse::<SimMode>().is_err());
    }

    #[test]
    fn full_array_runs_noiseless() {
        let c = cfg(3, 2, 2);
        let geom = ArrayGeometry::new(64, 64, 4, 4).unwrap();
        let plan = TrialPlan::new(300, 5).with_mode(SimMode::FullArray(geom));
        let est = simulate_ber(&c, &LinkBudget::from_snr_db(300.0), &plan).unwrap();
        // leakage can flip a rare trial even without noise
        assert!(est.ber() < 0.02, "{}", est.ber());
    }
}
