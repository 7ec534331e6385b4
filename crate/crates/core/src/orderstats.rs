//! Marginal laws of the descending-sorted squared gains `|h_(1)|^2 > ... > |h_(L)|^2`
//! when the unsorted gains are i.i.d. `CN(0, 1)` (so `|h|^2 ~ Exp(1)`).

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{domain, Error, Result};
use crate::mathutil::{factorial_f64, ln_factorial, CompensatedSum};

/// Largest `L` accepted by the alternating-sum density.
const ALTERNATING_SUM_MAX_L: usize = 20;

/// Law of the `rank`-th largest (1 = largest) of `l_total` unit-mean
/// exponentials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderedGainLaw {
    rank: usize,
    l_total: usize,
}

impl OrderedGainLaw {
    pub fn new(rank: usize, l_total: usize) -> Result<Self> {
        if rank == 0 || rank > l_total {
            return Err(Error::Index { index: rank, len: l_total });
        }
        Ok(Self { rank, l_total })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn l_total(&self) -> usize {
        self.l_total
    }

    /// Density at `x >= 0`, evaluated as
    /// `L! / ((L-l)! (l-1)!) (1 - e^-x)^(L-l) e^(-l x)` in logs. This is the
    /// binomial expansion of [`Self::pdf_alternating`] without its cancellation.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain(format!("ordered pdf needs x >= 0, got {x}")));
        }
        let (l, big_l) = (self.rank, self.l_total);
        let n = big_l - l;
        if n > 0 && x == 0.0 {
            return Ok(0.0);
        }
        let ln_coef = ln_factorial(big_l as u32) - ln_factorial(n as u32) - ln_factorial(l as u32 - 1);
        let ln_one_minus = if n == 0 { 0.0 } else { n as f64 * (-(-x).exp_m1()).ln() };
        Ok((ln_coef + ln_one_minus - l as f64 * x).exp())
    }

    /// Density as the alternating sum
    /// `(L!/(l-1)!) sum_k (-1)^k / (k! (L-l-k)!) e^{-(k+l) x}`.
    ///
    /// Loses relative accuracy near `x = 0` as `L - l` grows; supported for
    /// `L <= 20`.
    pub fn pdf_alternating(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain(format!("ordered pdf needs x >= 0, got {x}")));
        }
        let (l, big_l) = (self.rank, self.l_total);
        if big_l > ALTERNATING_SUM_MAX_L {
            return Err(domain(format!("alternating form limited to L <= {ALTERNATING_SUM_MAX_L}")));
        }
        let n = big_l - l;
        let lead = factorial_f64(big_l as u32) / factorial_f64(l as u32 - 1);
        let sum: CompensatedSum = (0..=n)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign / (factorial_f64(k as u32) * factorial_f64((n - k) as u32))
                    * (-((k + l) as f64) * x).exp()
            })
            .collect();
        Ok(lead * sum.value())
    }

    /// `P(X_(l) <= x)`: at most `l - 1` of the `L` draws exceed `x`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return Err(domain(format!("ordered cdf needs x >= 0, got {x}")));
        }
        let big_l = self.l_total as u32;
        let p_above = (-x).exp();
        let p_below = -(-x).exp_m1();
        let mut total = 0.0;
        for j in 0..self.rank as u32 {
            let ln_c = ln_factorial(big_l) - ln_factorial(j) - ln_factorial(big_l - j);
            total += (ln_c + f64::from(j) * p_above.ln() + f64::from(big_l - j) * p_below.ln()).exp();
        }
        Ok(total.min(1.0))
    }

    /// `E[exp(s X)] = prod_{xi = l}^{L} xi / (xi - s)` for `s < l`.
    pub fn mgf(&self, s: f64) -> Result<f64> {
        if !(s < self.rank as f64) {
            return Err(domain(format!(
                "MGF of rank {} diverges at s = {s} (poles at s = {}..={})",
                self.rank, self.rank, self.l_total
            )));
        }
        Ok((self.rank..=self.l_total).map(|xi| xi as f64 / (xi as f64 - s)).product())
    }

    /// `E[X] = sum_{xi = l}^{L} 1 / xi`.
    pub fn mean(&self) -> f64 {
        (self.rank..=self.l_total).map(|xi| 1.0 / xi as f64).sum()
    }
}

/// Density of an unsorted squared gain, `e^-x`.
pub fn unsorted_pdf(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(format!("pdf needs x >= 0, got {x}")));
    }
    Ok((-x).exp())
}

/// One `CN(0, 1)` draw.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Draws `l_total` i.i.d. `CN(0, 1)` gains and sorts them by descending
/// squared magnitude, ties kept in draw order.
pub fn sorted_complex_gains<R: Rng + ?Sized>(l_total: usize, rng: &mut R) -> Vec<Complex64> {
    let mut gains: Vec<Complex64> = (0..l_total).map(|_| complex_gaussian(rng)).collect();
    // stable sort keeps draw order on exact ties
    gains.sort_by(|a, b| b.norm_sqr().total_cmp(&a.norm_sqr()));
    gains
}

/// Squared magnitudes of [`sorted_complex_gains`], descending.
pub fn sample_sorted_gains<R: Rng + ?Sized>(l_total: usize, rng: &mut R) -> Vec<f64> {
    sorted_complex_gains(l_total, rng).iter().map(|h| h.norm_sqr()).collect()
}
