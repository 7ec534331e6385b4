//! Scalar special functions used by the closed-form error-probability and
//! capacity expressions.
//!
//! Integer factorial-type quantities are exact in `u64` while they fit; ratios
//! of large factorials go through [`ln_factorial`] and are exponentiated once
//! at the end.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use num_rational::Ratio;

use crate::error::{domain, Result};

/// Largest `k` for which `k!` fits in a `u64`.
pub const MAX_EXACT_FACTORIAL: u32 = 20;

/// How the Gaussian tail function is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QApproxPolicy {
    /// `Q(x) = erfc(x / sqrt 2) / 2`.
    #[default]
    ExactIntegralForm,
    /// `Q(x) ~ exp(-x^2/2)/12 + exp(-2x^2/3)/4`.
    TwoExponentialApprox,
}

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> Result<f64> {
    q_function_with(QApproxPolicy::ExactIntegralForm, x)
}

pub fn q_function_with(policy: QApproxPolicy, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("Q-function argument must be finite, got {x}")));
    }
    Ok(match policy {
        QApproxPolicy::ExactIntegralForm => 0.5 * libm::erfc(x / SQRT_2),
        QApproxPolicy::TwoExponentialApprox => {
            let x2 = x * x;
            (-x2 / 2.0).exp() / 12.0 + (-2.0 * x2 / 3.0).exp() / 4.0
        }
    })
}

/// Q-function through its finite-range integral representation
/// `Q(x) = (1/pi) * int_0^{pi/2} exp(-x^2 / (2 sin^2 t)) dt`, evaluated with
/// composite Simpson on `panels` (rounded up to even) sub-intervals.
///
/// Slower than [`q_function`]; it exists as an independent cross-check.
pub fn q_function_integral(x: f64, panels: usize) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain(format!("Q-function argument must be finite, got {x}")));
    }
    if x < 0.0 {
        return q_function_integral(-x, panels).map(|q| 1.0 - q);
    }
    let n = panels.max(2).next_multiple_of(2);
    let h = FRAC_PI_2 / n as f64;
    let integrand = |t: f64| {
        let s = t.sin();
        if s == 0.0 {
            if x == 0.0 {
                1.0
            } else {
                0.0
            }
        } else {
            (-x * x / (2.0 * s * s)).exp()
        }
    };
    let mut acc = integrand(0.0) + integrand(FRAC_PI_2);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * integrand(i as f64 * h);
    }
    Ok(acc * h / 3.0 / PI)
}

/// `Gamma(k + 1) = k!`, exact for `k <= 20`.
///
/// Larger arguments overflow `u64`; use [`ln_factorial`] for those.
pub fn gamma_int(k: u32) -> Result<u64> {
    if k > MAX_EXACT_FACTORIAL {
        return Err(domain(format!(
            "{k}! overflows u64; use the log-domain factorial"
        )));
    }
    Ok((1..=u64::from(k)).product())
}

/// `ln(k!)`, accurate for all `k` used by the formulas (sum of logs).
pub fn ln_factorial(k: u32) -> f64 {
    (2..=k).map(|i| f64::from(i).ln()).sum()
}

/// `k!` as a float; exact up to `k = 22`, correctly rounded beyond via logs.
pub fn factorial_f64(k: u32) -> f64 {
    if k <= 22 {
        (1..=k).map(f64::from).product()
    } else {
        ln_factorial(k).exp()
    }
}

/// `k!! = k (k-2) (k-4) ...`, with `0!! = 1`.
pub fn double_factorial(k: u32) -> Result<u64> {
    let mut acc: u64 = 1;
    let mut i = u64::from(k);
    while i > 1 {
        acc = acc
            .checked_mul(i)
            .ok_or_else(|| domain(format!("{k}!! overflows u64")))?;
        i -= 2;
    }
    Ok(acc)
}

/// Wallis ratio `(2n-1)!! / (2n)!!`, equal to `(2/pi) int_0^{pi/2} sin^{2n}`.
pub fn wallis_ratio(n: u32) -> f64 {
    (1..=n)
        .map(|i| f64::from(2 * i - 1) / f64::from(2 * i))
        .product()
}

/// Binomial coefficient `n choose k`.
pub fn binomial(n: u32, k: u32) -> Result<u64> {
    if k > n {
        return Err(domain(format!("binomial({n}, {k}) requires k <= n")));
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..u128::from(k) {
        // acc * (n - i) / (i + 1) is an integer at every step
        acc = acc * (u128::from(n) - i) / (i + 1);
        if acc > u128::from(u64::MAX) {
            return Err(domain(format!("binomial({n}, {k}) overflows u64")));
        }
    }
    Ok(acc as u64)
}

/// Beta function at positive integers, `Gamma(a) Gamma(b) / Gamma(a + b)`,
/// as an exact reduced fraction.
///
/// Uses `B(a, b) = 1 / ((a + b - 1) * C(a + b - 2, a - 1))`.
pub fn beta_int(a: u32, b: u32) -> Result<Ratio<u64>> {
    if a == 0 || b == 0 {
        return Err(domain(format!("beta({a}, {b}) needs positive arguments")));
    }
    let c = binomial(a + b - 2, a - 1)?;
    let den = c
        .checked_mul(u64::from(a + b - 1))
        .ok_or_else(|| domain(format!("beta({a}, {b}) denominator overflows u64")))?;
    Ok(Ratio::new(1, den))
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}
