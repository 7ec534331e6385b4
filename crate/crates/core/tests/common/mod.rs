#![allow(dead_code)]

use ris_ssm::mathutil::{ln_factorial, q_function};

/// Ordered-gain density written out independently of the crate:
/// `L!/((L-l)!(l-1)!) (1-e^-x)^(L-l) e^(-l x)`.
pub fn ordered_pdf(l: usize, big_l: usize, x: f64) -> f64 {
    let n = (big_l - l) as f64;
    let ln_c = ln_factorial(big_l as u32) - ln_factorial((big_l - l) as u32) - ln_factorial(l as u32 - 1);
    let base = -(-x).exp_m1();
    if base == 0.0 {
        return if n == 0.0 { ln_c.exp() } else { 0.0 };
    }
    (ln_c + n * base.ln() - l as f64 * x).exp()
}

// 15-point Kronrod nodes/weights and the embedded 7-point Gauss weights.
const XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let x = h * XK[i];
        let s = f(c - x) + f(c + x);
        k += WK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adaptive(f, a, m, tol / 2.0, depth - 1) + adaptive(f, m, b, tol / 2.0, depth - 1)
}

/// `int_0^inf f`, for integrands with most mass on `[0, ~scale]` and at most
/// exponential tails. Pieces are geometric in `x / scale`.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, scale: f64, rel_tol: f64) -> f64 {
    let mut edges = vec![0.0];
    let mut x = scale * 1e-12;
    while x < 200.0 {
        edges.push(x);
        x *= 2.0;
    }
    edges.push(200.0);
    // rough pass to set an absolute target
    let rough: f64 = edges.windows(2).map(|w| gk15(&f, w[0], w[1]).0.abs()).sum();
    let tol = rel_tol * rough / edges.len() as f64;
    edges.windows(2).map(|w| adaptive(&f, w[0], w[1], tol, 30)).sum()
}

/// Correct-beam UPEP by quadrature of `f(x) Q(sqrt(a x / 2))`.
pub fn upep_correct_quadrature(a: f64, l: usize, big_l: usize) -> f64 {
    integrate_half_line(
        |x| ordered_pdf(l, big_l, x) * q_function((a * x / 2.0).sqrt()).unwrap(),
        1.0 / (1.0 + a),
        1e-10,
    )
}

/// Wrong-beam UPEP by quadrature of `f(x) exp(-b x / 2) / 2`.
pub fn upep_wrong_quadrature(b: f64, l: usize, big_l: usize) -> f64 {
    integrate_half_line(|x| ordered_pdf(l, big_l, x) * 0.5 * (-b * x / 2.0).exp(), 1.0 / (1.0 + b), 1e-10)
}

/// `log10 y` against `x` least squares slope.
pub fn fitted_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.log10()).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1.log10() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// SNR (dB) where a decreasing curve crosses `target`, interpolating
/// `log10 y` linearly between grid points.
pub fn crossing_db(curve: &[(f64, f64)], target: f64) -> Option<f64> {
    curve.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y0 >= target && y1 < target && y1 > 0.0 {
            let t = (y0.log10() - target.log10()) / (y0.log10() - y1.log10());
            Some(x0 + t * (x1 - x0))
        } else {
            None
        }
    })
}
