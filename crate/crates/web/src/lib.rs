//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every exported function returns a flat `Float64Array` laid out row by
//! row; the row width is given in each function's doc.

use ris_ssm::analytics::{abep_union, ergodic_capacity_lb, CapacityVariant, LinkBudget, UpepMethod};
use ris_ssm::orderstats::OrderedGainLaw;
use ris_ssm::{ConstellationScheme, Result, SsmConfig};
use wasm_bindgen::prelude::*;

/// Longest curve the page may request.
pub const MAX_POINTS: usize = 2001;

fn scheme(qam: bool) -> ConstellationScheme {
    if qam {
        ConstellationScheme::Qam
    } else {
        ConstellationScheme::Psk
    }
}

fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && stop >= start && start.is_finite() && stop.is_finite()) {
        return Err(ris_ssm::Error::Config(format!("bad grid {start}:{step}:{stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if n > MAX_POINTS {
        return Err(ris_ssm::Error::Config(format!("grid has {n} points, limit {MAX_POINTS}")));
    }
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

/// Rows `[snr_db, pdf, mgf, qapprox, asymptotic]`.
pub fn abep_rows(l_total: usize, l_s: usize, order: usize, qam: bool, start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    let cfg = SsmConfig::with_scheme(l_total, l_s, scheme(qam), order)?;
    let mut out = Vec::new();
    for snr in grid(start, stop, step)? {
        let b = LinkBudget::from_snr_db(snr);
        out.push(snr);
        for m in [UpepMethod::Pdf, UpepMethod::Mgf, UpepMethod::QApprox, UpepMethod::Asymptotic] {
            out.push(abep_union(&cfg, &b, m)?);
        }
    }
    Ok(out)
}

/// Rows `[x, f_1(x), ..., f_L(x)]`, the density of the l-th largest of `L`
/// unit-mean exponential gains.
pub fn ordered_pdf_rows(l_total: usize, x_max: f64, points: usize) -> Result<Vec<f64>> {
    if l_total == 0 || !(2..=MAX_POINTS).contains(&points) || !(x_max > 0.0) {
        return Err(ris_ssm::Error::Config(format!("need L >= 1, 2..={MAX_POINTS} points and x_max > 0")));
    }
    let laws = (1..=l_total).map(|l| OrderedGainLaw::new(l, l_total)).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(points * (l_total + 1));
    for i in 0..points {
        let x = x_max * i as f64 / (points - 1) as f64;
        out.push(x);
        for law in &laws {
            out.push(law.pdf(x)?);
        }
    }
    Ok(out)
}

/// Rows `[snr_db, exact, high_snr, log2(L_s M)]` of the capacity lower bound.
pub fn capacity_rows(l_total: usize, l_s: usize, order: usize, qam: bool, start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    let cfg = SsmConfig::with_scheme(l_total, l_s, scheme(qam), order)?;
    let ceiling = (cfg.alphabet_size() as f64).log2();
    let mut out = Vec::new();
    for snr in grid(start, stop, step)? {
        let b = LinkBudget::from_snr_db(snr);
        out.push(snr);
        out.push(ergodic_capacity_lb(&cfg, &b, CapacityVariant::ExactMgf)?);
        out.push(ergodic_capacity_lb(&cfg, &b, CapacityVariant::PaperAsymptotic)?);
        out.push(ceiling);
    }
    Ok(out)
}

fn js(r: Result<Vec<f64>>) -> std::result::Result<Vec<f64>, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = abepCurves)]
pub fn abep_curves(
    l_total: usize,
    l_s: usize,
    order: usize,
    qam: bool,
    start: f64,
    stop: f64,
    step: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    js(abep_rows(l_total, l_s, order, qam, start, stop, step))
}

#[wasm_bindgen(js_name = orderedPdfCurves)]
pub fn ordered_pdf_curves(l_total: usize, x_max: f64, points: usize) -> std::result::Result<Vec<f64>, JsError> {
    js(ordered_pdf_rows(l_total, x_max, points))
}

#[wasm_bindgen(js_name = capacityCurves)]
pub fn capacity_curves(
    l_total: usize,
    l_s: usize,
    order: usize,
    qam: bool,
    start: f64,
    stop: f64,
    step: f64,
) -> std::result::Result<Vec<f64>, JsError> {
    js(capacity_rows(l_total, l_s, order, qam, start, stop, step))
}
