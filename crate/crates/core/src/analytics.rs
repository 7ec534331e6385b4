//! Closed-form error and rate expressions for RIS-SSM.
//!
//! Notation: `a = rho * delta_sq` for correct-beam events and
//! `b = rho * energy_hat` for wrong-beam events; `l`, `l_hat` are 1-based
//! ranks in the descending gain order of `L` paths.
//!
//! The PDF-based correct-beam UPEP is an alternating sum whose terms cancel
//! by tens of orders of magnitude at high SNR. Both it and the MGF-based
//! partial-fraction form equal `(L!/(2 (l-1)!)) |f[0, l, ..., L]|`, a
//! divided difference of `f(x) = (1 + 4x/a)^(-1/2)`, and each is evaluated
//! by whichever of the literal sum (in double-double) or a convergent
//! series of that divided difference is accurate for the given `a`. The two
//! methods use different series (about 0 and about `L/2`), so they stay
//! independent checks of each other.

use std::fmt;
use std::str::FromStr;

use crate::ddouble::DoubleDouble as Dd;
use crate::error::{config, domain, Error, Result};
use crate::mathutil::{factorial_f64, ln_factorial, q_function, wallis_ratio, db_to_linear};
use crate::modulation::{ErrorEvent, SsmConfig};

/// Series are cut after this many terms at the latest.
const MAX_SERIES_TERMS: usize = 600;

/// `rho = P_s / N_0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    p_s: f64,
    n0: f64,
}

impl LinkBudget {
    /// Unit transmit power, noise set by the SNR.
    pub fn from_snr_db(snr_db: f64) -> Self {
        Self { p_s: 1.0, n0: 1.0 / db_to_linear(snr_db) }
    }

    pub fn from_rho(rho: f64) -> Self {
        Self { p_s: 1.0, n0: 1.0 / rho }
    }

    pub fn with_powers(p_s: f64, n0: f64) -> Result<Self> {
        if !(p_s > 0.0 && n0 > 0.0) {
            return Err(domain(format!("powers must be positive, got P_s = {p_s}, N0 = {n0}")));
        }
        Ok(Self { p_s, n0 })
    }

    pub fn rho(&self) -> f64 {
        self.p_s / self.n0
    }

    pub fn snr_db(&self) -> f64 {
        10.0 * self.rho().log10()
    }

    pub fn p_s(&self) -> f64 {
        self.p_s
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }
}

/// An error event together with the diversity orders and partial-fraction
/// poles of its UPEP.
#[derive(Debug, Clone, PartialEq)]
pub struct PepTerm {
    pub event: ErrorEvent,
    /// `L - l + 1`
    pub l_dot: usize,
    /// `L - l_hat + 1`
    pub l_ddot: usize,
    /// `c_k = rho delta^2 / (4 (k + l - 1))`, `k = 1..=l_dot`.
    pub c: Vec<f64>,
}

impl PepTerm {
    pub fn new(event: ErrorEvent, l_total: usize, rho: f64) -> Result<Self> {
        check_rank(event.l, l_total)?;
        check_rank(event.l_hat, l_total)?;
        let l_dot = l_total - event.l + 1;
        let a = rho * event.delta_sq;
        let c = (1..=l_dot).map(|k| a / (4.0 * (k + event.l - 1) as f64)).collect();
        Ok(Self { event, l_dot, l_ddot: l_total - event.l_hat + 1, c })
    }
}

/// Which UPEP expression an ABEP bound is assembled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpepMethod {
    Pdf,
    Mgf,
    QApprox,
    Asymptotic,
}

impl UpepMethod {
    pub const ALL: [UpepMethod; 4] = [Self::Pdf, Self::Mgf, Self::QApprox, Self::Asymptotic];

    pub fn name(self) -> &'static str {
        match self {
            Self::Pdf => "pdf",
            Self::Mgf => "mgf",
            Self::QApprox => "qapprox",
            Self::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for UpepMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UpepMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| config(format!("unknown method '{s}' (pdf, mgf, qapprox, asymptotic)")))
    }
}

/// Correct or wrong beam detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamEvent {
    Correct,
    Wrong,
}

fn check_rank(l: usize, l_total: usize) -> Result<()> {
    if l == 0 || l > l_total {
        return Err(Error::Index { index: l, len: l_total });
    }
    Ok(())
}

fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(domain(format!("{name} must be finite and >= 0, got {x}")));
    }
    Ok(())
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(domain(format!("{name} must be finite and > 0, got {x}")));
    }
    Ok(())
}

/// `L! / (l-1)!`
fn rank_ratio(l: usize, l_total: usize) -> f64 {
    if l_total <= 22 {
        factorial_f64(l_total as u32) / factorial_f64(l as u32 - 1)
    } else {
        (ln_factorial(l_total as u32) - ln_factorial(l as u32 - 1)).exp()
    }
}

/// Conditional PEP when the beam is detected correctly, `Q(sqrt(rho |h_l|^2 delta^2 / 2))`.
pub fn cpep_correct_beam(rho: f64, gain_sq: f64, delta_sq: f64) -> Result<f64> {
    check_nonneg("rho", rho)?;
    check_nonneg("gain_sq", gain_sq)?;
    check_nonneg("delta_sq", delta_sq)?;
    q_function((rho * gain_sq * delta_sq / 2.0).sqrt())
}

/// Conditional PEP when the beam is detected wrongly, `exp(-rho |h_l_hat|^2 |s_m_hat|^2 / 2) / 2`.
pub fn cpep_wrong_beam(rho: f64, gain_sq_hat: f64, energy_hat: f64) -> Result<f64> {
    check_nonneg("rho", rho)?;
    check_nonneg("gain_sq_hat", gain_sq_hat)?;
    check_nonneg("energy_hat", energy_hat)?;
    Ok(0.5 * (-rho * gain_sq_hat * energy_hat / 2.0).exp())
}

/// `h_m(nodes)`, the complete homogeneous symmetric polynomials, for `m < len`.
fn complete_homogeneous(nodes: &[f64], len: usize) -> Vec<f64> {
    let mut h = vec![0.0; len];
    h[0] = 1.0;
    for &y in nodes {
        for m in 1..len {
            h[m] += y * h[m - 1];
        }
    }
    h
}

/// `sum_m sign^m w(n + m) h_m`, where `w(k)` is `|binom(-1/2, k)|` or 1.
/// Stops after two consecutive negligible terms (odd `h_m` vanish for
/// symmetric nodes).
fn homogeneous_series(nodes: &[f64], n: usize, alternating: bool, binom_weights: bool) -> f64 {
    let h = complete_homogeneous(nodes, MAX_SERIES_TERMS);
    // |binom(-1/2, k)| = (2k-1)!! / (2k)!!
    let mut w = if binom_weights { wallis_ratio(n as u32) } else { 1.0 };
    let mut sum = 0.0;
    let mut quiet = 0;
    for (m, hm) in h.iter().enumerate() {
        let sign = if alternating && m % 2 == 1 { -1.0 } else { 1.0 };
        let t = sign * w * hm;
        sum += t;
        if t.abs() <= 1e-18 * sum.abs() {
            quiet += 1;
            if quiet == 2 && m > 2 {
                break;
            }
        } else {
            quiet = 0;
        }
        if binom_weights {
            let k = (n + m + 1) as f64;
            w *= (2.0 * k - 1.0) / (2.0 * k);
        }
    }
    sum
}

/// `1 - (1 + t)^(-1/2)` without cancellation, in double-double.
fn one_minus_inv_sqrt(t: Dd) -> Dd {
    let u = Dd::ONE + t;
    t / (u + u.sqrt())
}

/// UPEP for a correct beam decision from the ordered-gain PDF:
/// `(L!/(2(l-1)!)) sum_k (-1)^k / (k! (L-l-k)! (k+l)) (1 - sqrt(a / (a + 4(k+l))))`.
pub fn upep_pdf_correct(rho: f64, l: usize, l_total: usize, delta_sq: f64) -> Result<f64> {
    check_rank(l, l_total)?;
    check_nonneg("rho", rho)?;
    check_positive("delta_sq", delta_sq)?;
    let a = rho * delta_sq;
    if a == 0.0 {
        return Ok(0.5);
    }
    let eps = 4.0 / a;
    let lead = rank_ratio(l, l_total) / 2.0;
    let n = l_total - l;
    if eps * l_total as f64 <= 0.5 {
        // Maclaurin series of the divided difference f[0, l..L]
        let nodes: Vec<f64> = (l..=l_total).map(|x| eps * x as f64).collect();
        let s = homogeneous_series(&nodes, n + 1, true, true);
        return Ok(lead * eps.powi(n as i32 + 1) * s.abs());
    }
    let eps = Dd::from(4.0) / Dd::from(a);
    let mut sum = Dd::ZERO;
    for k in 0..=n {
        let den = factorial_f64(k as u32) * factorial_f64((n - k) as u32) * (k + l) as f64;
        let term = one_minus_inv_sqrt(eps * Dd::from((k + l) as f64)) / Dd::from(den);
        sum = if k % 2 == 0 { sum + term } else { sum - term };
    }
    Ok(lead * sum.to_f64())
}

/// UPEP for a wrong beam decision from the ordered-gain PDF:
/// `(L!/(l_hat-1)!) sum_k (-1)^k / (k! (L-l_hat-k)! (2k + 2 l_hat + b))`.
pub fn upep_pdf_wrong(rho: f64, l_hat: usize, l_total: usize, energy_hat: f64) -> Result<f64> {
    check_rank(l_hat, l_total)?;
    check_nonneg("rho", rho)?;
    check_positive("energy_hat", energy_hat)?;
    let b = rho * energy_hat;
    let lead = rank_ratio(l_hat, l_total);
    let n = l_total - l_hat;
    if 2.0 * l_total as f64 <= 0.5 * b {
        // 1/(b + 2x) expanded in 2x/b; the n-th difference keeps h_{j-n}
        let nodes: Vec<f64> = (l_hat..=l_total).map(|x| 2.0 * x as f64 / b).collect();
        let s = homogeneous_series(&nodes, n, true, false);
        return Ok(lead / b * (2.0 / b).powi(n as i32) * s);
    }
    let b = Dd::from(b);
    let mut sum = Dd::ZERO;
    for k in 0..=n {
        let fact = Dd::from(factorial_f64(k as u32) * factorial_f64((n - k) as u32));
        let term = Dd::ONE / (fact * (Dd::from((2 * k + 2 * l_hat) as f64) + b));
        sum = if k % 2 == 0 { sum + term } else { sum - term };
    }
    Ok(lead * sum.to_f64())
}

/// UPEP for a correct beam decision from the ordered-gain MGF, by partial
/// fractions over the poles `c_k`:
/// `(1/2) sum_k (1 - sqrt(c_k / (1 + c_k))) prod_{v != k} c_k / (c_k - c_v)`.
pub fn upep_mgf_correct(rho: f64, l: usize, l_total: usize, delta_sq: f64) -> Result<f64> {
    check_rank(l, l_total)?;
    check_nonneg("rho", rho)?;
    check_positive("delta_sq", delta_sq)?;
    let a = rho * delta_sq;
    if a == 0.0 {
        return Ok(0.5);
    }
    let eps = 4.0 / a;
    let n_div = l_total - l + 1;
    if eps * (l_total as f64) < 4.0 {
        // Taylor series of f[0, l..L] about the centre of the nodes
        let centre = l_total as f64 / 2.0;
        let base = 1.0 + eps * centre;
        let q = eps / base;
        let nodes: Vec<f64> =
            std::iter::once(-centre).chain((l..=l_total).map(|x| x as f64 - centre)).map(|x| q * x).collect();
        let s = homogeneous_series(&nodes, n_div, true, true);
        let dd = q.powi(n_div as i32) / base.sqrt() * s.abs();
        return Ok(0.5 * rank_ratio(l, l_total) * dd);
    }
    let c: Vec<Dd> = (1..=n_div).map(|k| Dd::from(a) / Dd::from(4.0 * (k + l - 1) as f64)).collect();
    let mut sum = Dd::ZERO;
    for (k, &ck) in c.iter().enumerate() {
        let mut weight = Dd::ONE;
        for (v, &cv) in c.iter().enumerate() {
            if v != k {
                weight = weight * ck / (ck - cv);
            }
        }
        sum = sum + one_minus_inv_sqrt(Dd::ONE / ck) * weight;
    }
    Ok(0.5 * sum.to_f64())
}

/// UPEP for a wrong beam decision from the ordered-gain MGF,
/// `(1/2) prod_{xi = l_hat}^{L} 2 xi / (2 xi + b)`.
pub fn upep_mgf_wrong(rho: f64, l_hat: usize, l_total: usize, energy_hat: f64) -> Result<f64> {
    check_rank(l_hat, l_total)?;
    check_nonneg("rho", rho)?;
    check_positive("energy_hat", energy_hat)?;
    let b = rho * energy_hat;
    Ok(0.5 * (l_hat..=l_total).map(|xi| 2.0 * xi as f64 / (2.0 * xi as f64 + b)).product::<f64>())
}

/// Correct-beam UPEP under the two-exponential Q approximation:
/// `(1/12) prod 4 xi / (4 xi + a) + (1/4) prod 3 xi / (3 xi + a)`.
pub fn upep_qapprox_correct(rho: f64, l: usize, l_total: usize, delta_sq: f64) -> Result<f64> {
    check_rank(l, l_total)?;
    check_nonneg("rho", rho)?;
    check_positive("delta_sq", delta_sq)?;
    let a = rho * delta_sq;
    let prod = |k: f64| (l..=l_total).map(|xi| k * xi as f64 / (k * xi as f64 + a)).product::<f64>();
    Ok(prod(4.0) / 12.0 + prod(3.0) / 4.0)
}

/// The single-product form
/// `(1/12) prod (48 xi^2 + 13 a xi) / (12 xi^2 + 7 a xi + a^2)`.
///
/// It equals [`upep_qapprox_correct`] only when `l = L`; other ranks are
/// rejected, see [`qapprox_compaction_gap`].
pub fn upep_qapprox_compact(rho: f64, l: usize, l_total: usize, delta_sq: f64) -> Result<f64> {
    check_rank(l, l_total)?;
    if l != l_total {
        return Err(domain(format!(
            "single-product form only matches the Q approximation for l = L (got l = {l}, L = {l_total})"
        )));
    }
    check_nonneg("rho", rho)?;
    check_positive("delta_sq", delta_sq)?;
    Ok(compact_product(rho * delta_sq, l, l_total))
}

fn compact_product(a: f64, l: usize, l_total: usize) -> f64 {
    (l..=l_total)
        .map(|xi| {
            let xi = xi as f64;
            (48.0 * xi * xi + 13.0 * a * xi) / (12.0 * xi * xi + 7.0 * a * xi + a * a)
        })
        .product::<f64>()
        / 12.0
}

/// Both forms of the Q-approximated correct-beam UPEP side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QApproxCompaction {
    pub two_product: f64,
    pub single_product: f64,
    /// `single_product / two_product - 1`
    pub relative_gap: f64,
}

/// Compares the two-product Q-approximation UPEP with the single-product
/// compaction for any rank. The gap is zero exactly when `l = L`.
pub fn qapprox_compaction_gap(rho: f64, l: usize, l_total: usize, delta_sq: f64) -> Result<QApproxCompaction> {
    let two_product = upep_qapprox_correct(rho, l, l_total, delta_sq)?;
    let single_product = compact_product(rho * delta_sq, l, l_total);
    Ok(QApproxCompaction { two_product, single_product, relative_gap: single_product / two_product - 1.0 })
}

/// High-SNR UPEP.
///
/// Correct beam (`x = delta_sq`):
/// `((2L'-1)!! / (2 (2L')!!)) (L!/(l-1)!) (4/a)^L'` with `L' = L - l + 1`.
/// Wrong beam (`x = energy_hat`): `(L! / (2 (l_hat-1)!)) (2/b)^L''`.
///
/// Not clamped: values above 1 are returned as-is at low SNR.
pub fn upep_asymptotic(rho: f64, kind: BeamEvent, rank: usize, l_total: usize, x: f64) -> Result<f64> {
    check_rank(rank, l_total)?;
    check_nonneg("rho", rho)?;
    check_positive(if kind == BeamEvent::Correct { "delta_sq" } else { "energy_hat" }, x)?;
    let order = (l_total - rank + 1) as i32;
    let ln_ratio = ln_factorial(l_total as u32) - ln_factorial(rank as u32 - 1);
    let (coef, scale) = match kind {
        BeamEvent::Correct => (wallis_ratio(order as u32) / 2.0, 4.0 / (rho * x)),
        BeamEvent::Wrong => (0.5, 2.0 / (rho * x)),
    };
    Ok(coef * ln_ratio.exp() * scale.powi(order))
}

/// UPEP of one event by the chosen method. The Q approximation only changes
/// correct-beam events; wrong-beam events have an exact exponential CPEP.
pub fn upep(method: UpepMethod, event: &ErrorEvent, l_total: usize, rho: f64) -> Result<f64> {
    if event.is_correct_beam() {
        let (l, d) = (event.l, event.delta_sq);
        match method {
            UpepMethod::Pdf => upep_pdf_correct(rho, l, l_total, d),
            UpepMethod::Mgf => upep_mgf_correct(rho, l, l_total, d),
            UpepMethod::QApprox => upep_qapprox_correct(rho, l, l_total, d),
            UpepMethod::Asymptotic => upep_asymptotic(rho, BeamEvent::Correct, l, l_total, d),
        }
    } else {
        let (l, e) = (event.l_hat, event.energy_hat);
        match method {
            UpepMethod::Pdf => upep_pdf_wrong(rho, l, l_total, e),
            UpepMethod::Mgf | UpepMethod::QApprox => upep_mgf_wrong(rho, l, l_total, e),
            UpepMethod::Asymptotic => upep_asymptotic(rho, BeamEvent::Wrong, l, l_total, e),
        }
    }
}

/// Union bound on the average bit error probability,
/// `(1 / (M L_s log2(M L_s))) sum_{l,m,l_hat,m_hat} UPEP * hamming`,
/// with beam indices running over the `L_s` candidates.
pub fn abep_union(cfg: &SsmConfig, budget: &LinkBudget, method: UpepMethod) -> Result<f64> {
    cfg.require_bit_labels()?;
    let rho = budget.rho();
    let bits = cfg.bits_per_use();
    if bits == 0 {
        return Err(config("a one-point alphabet carries no bits"));
    }
    let mut total = 0.0;
    for ev in cfg.error_events().filter(|e| e.hamming > 0) {
        total += upep(method, &ev, cfg.l_total(), rho)? * f64::from(ev.hamming);
    }
    Ok(total / (cfg.alphabet_size() as f64 * f64::from(bits)))
}

/// `D = L - L_s + 1`.
pub fn diversity_gain(l_total: usize, l_s: usize) -> Result<usize> {
    if l_s == 0 || l_s > l_total {
        return Err(config(format!("need 1 <= L_s <= L, got L_s = {l_s}, L = {l_total}")));
    }
    Ok(l_total - l_s + 1)
}

/// Summand of the capacity lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CapacityVariant {
    /// High-SNR form `(L!/(l_hat-1)!) (2/b)^L''`; may give negative capacity at low SNR.
    PaperAsymptotic,
    /// Exact expectation `prod_{xi = l_hat}^{L} 2 xi / (2 xi + b)`.
    #[default]
    ExactMgf,
}

/// Lower bound on the ergodic capacity in bits per channel use:
/// `2 log2(L_s M) - log2(L_s M + sum_{l, m, l_hat != l, m_hat != m} T(l_hat, m_hat))`.
pub fn ergodic_capacity_lb(cfg: &SsmConfig, budget: &LinkBudget, variant: CapacityVariant) -> Result<f64> {
    let rho = budget.rho();
    let (l_total, l_s) = (cfg.l_total(), cfg.l_s());
    let k = cfg.alphabet_size() as f64;
    let points = cfg.constellation().points();
    let mut sum = 0.0;
    for l_hat in 1..=l_s {
        for s_hat in points {
            let b = rho * s_hat.norm_sqr();
            let t = match variant {
                CapacityVariant::PaperAsymptotic => {
                    upep_asymptotic(rho, BeamEvent::Wrong, l_hat, l_total, s_hat.norm_sqr())? * 2.0
                }
                CapacityVariant::ExactMgf => {
                    (l_hat..=l_total).map(|xi| 2.0 * xi as f64 / (2.0 * xi as f64 + b)).product()
                }
            };
            // (l, m) ranges over l != l_hat and m != m_hat
            sum += t * ((l_s - 1) * (points.len() - 1)) as f64;
        }
    }
    Ok(2.0 * k.log2() - (k + sum).log2())
}

/// `(1 - ABEP) log2(L_s M)`.
pub fn system_throughput(abep: f64, cfg: &SsmConfig) -> Result<f64> {
    cfg.require_bit_labels()?;
    if !(0.0..=1.0).contains(&abep) {
        return Err(domain(format!("ABEP must lie in [0, 1], got {abep}")));
    }
    Ok((1.0 - abep) * f64::from(cfg.bits_per_use()))
}
