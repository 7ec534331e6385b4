//! Array geometry, steering vectors and channel synthesis for the
//! Tx --LoS--> RIS --multipath--> Rx link.
//!
//! Conventions:
//! - spacings are in carrier wavelengths (`delta / lambda`);
//! - steering vectors are unit-norm with entry `k` equal to
//!   `exp(-j 2 pi spacing k sin(theta)) / sqrt(n)`;
//! - RIS (UPA) entries are stored row-major, index `m_h * n_v + m_v`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{config, Error, Result};
use crate::orderstats::sorted_complex_gains;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// Element counts and spacings of the Tx ULA, Rx ULA and RIS UPA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub n_t: usize,
    pub n_r: usize,
    pub n_h: usize,
    pub n_v: usize,
    pub spacing_t: f64,
    pub spacing_r: f64,
    pub spacing_ris: f64,
}

impl ArrayGeometry {
    /// Half-wavelength spacing everywhere.
    pub fn new(n_t: usize, n_r: usize, n_h: usize, n_v: usize) -> Result<Self> {
        Self::with_spacings(n_t, n_r, n_h, n_v, 0.5, 0.5, 0.5)
    }

    pub fn with_spacings(
        n_t: usize,
        n_r: usize,
        n_h: usize,
        n_v: usize,
        spacing_t: f64,
        spacing_r: f64,
        spacing_ris: f64,
    ) -> Result<Self> {
        if n_t == 0 || n_r == 0 || n_h == 0 || n_v == 0 {
            return Err(config("array element counts must be >= 1"));
        }
        if !(spacing_t > 0.0 && spacing_r > 0.0 && spacing_ris > 0.0) {
            return Err(config("array spacings must be > 0"));
        }
        Ok(Self { n_t, n_r, n_h, n_v, spacing_t, spacing_r, spacing_ris })
    }

    /// Number of RIS elements `N = n_h * n_v`.
    pub fn n_ris(&self) -> usize {
        self.n_h * self.n_v
    }
}

impl Default for ArrayGeometry {
    /// 256-element Tx and Rx arrays with an 8 x 8 RIS.
    fn default() -> Self {
        Self::new(256, 256, 8, 8).expect("valid default geometry")
    }
}

/// Range angles are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleDomain {
    /// `[-pi/2, pi/2]`: `sin` is injective so distinct paths stay distinct in beamspace.
    #[default]
    HalfPlane,
    /// `[-pi, pi]`.
    FullCircle,
}

impl AngleDomain {
    fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            Self::HalfPlane => rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
            Self::FullCircle => rng.random_range(-PI..=PI),
        }
    }
}

/// All angles of one channel realization (radians).
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSet {
    /// Tx angle of departure.
    pub theta_t: f64,
    /// RIS elevation angle of arrival.
    pub phi_r: f64,
    /// RIS azimuth angle of arrival.
    pub varphi_r: f64,
    /// Rx angle of arrival per path.
    pub theta_r: Vec<f64>,
    /// RIS elevation angle of departure per path.
    pub phi_t: Vec<f64>,
    /// RIS azimuth angle of departure per path.
    pub varphi_t: Vec<f64>,
}

impl AngleSet {
    /// Uniform draw; Rx arrival sines are kept pairwise distinct.
    pub fn sample<R: Rng + ?Sized>(l_total: usize, domain: AngleDomain, rng: &mut R) -> Self {
        let theta_t = domain.sample(rng);
        let phi_r = domain.sample(rng);
        let varphi_r = domain.sample(rng);
        let mut theta_r: Vec<f64> = Vec::with_capacity(l_total);
        while theta_r.len() < l_total {
            let t = domain.sample(rng);
            if theta_r.iter().all(|&o| o.sin() != t.sin()) {
                theta_r.push(t);
            }
        }
        let phi_t = (0..l_total).map(|_| domain.sample(rng)).collect();
        let varphi_t = (0..l_total).map(|_| domain.sample(rng)).collect();
        Self { theta_t, phi_r, varphi_r, theta_r, phi_t, varphi_t }
    }

    pub fn l_total(&self) -> usize {
        self.theta_r.len()
    }
}

/// Path gains sorted by descending magnitude, with their angles.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    gains: Vec<Complex64>,
    angles: AngleSet,
}

impl ChannelRealization {
    pub fn new(gains: Vec<Complex64>, angles: AngleSet) -> Result<Self> {
        if gains.is_empty() {
            return Err(config("a channel needs at least one path"));
        }
        let l = gains.len();
        if angles.theta_r.len() != l || angles.phi_t.len() != l || angles.varphi_t.len() != l {
            return Err(Error::Shape {
                expected: format!("{l} per-path angles"),
                found: format!(
                    "{}/{}/{}",
                    angles.theta_r.len(),
                    angles.phi_t.len(),
                    angles.varphi_t.len()
                ),
            });
        }
        if gains.windows(2).any(|w| w[0].norm_sqr() < w[1].norm_sqr()) {
            return Err(config("path gains must be in descending magnitude order"));
        }
        Ok(Self { gains, angles })
    }

    /// Fresh `CN(0, 1)` gains (sorted) and uniform angles.
    pub fn sample<R: Rng + ?Sized>(l_total: usize, domain: AngleDomain, rng: &mut R) -> Self {
        let gains = sorted_complex_gains(l_total, rng);
        let angles = AngleSet::sample(l_total, domain, rng);
        Self { gains, angles }
    }

    pub fn gains(&self) -> &[Complex64] {
        &self.gains
    }

    pub fn gains_sq(&self) -> Vec<f64> {
        self.gains.iter().map(|h| h.norm_sqr()).collect()
    }

    pub fn angles(&self) -> &AngleSet {
        &self.angles
    }

    pub fn l_total(&self) -> usize {
        self.gains.len()
    }
}

/// RIS phases and the incident/departing steering-vector phases they were
/// chosen against.
#[derive(Debug, Clone, PartialEq)]
pub struct RisPhaseProfile {
    /// Applied phase shifts, in `[0, 2 pi)`.
    pub psi: Vec<f64>,
    /// `arg` of the conjugated incident RIS steering vector.
    pub zeta_r: Vec<f64>,
    /// `arg` of the departing RIS steering vector for the targeted path.
    pub zeta_t: Vec<f64>,
}

impl RisPhaseProfile {
    /// `(1/N) sum_n exp(j (psi_n - zeta_t_n - zeta_r_n))`; equals 1 when aligned.
    pub fn composite_phase_factor(&self) -> Complex64 {
        let n = self.psi.len() as f64;
        self.psi
            .iter()
            .zip(&self.zeta_t)
            .zip(&self.zeta_r)
            .map(|((p, t), r)| Complex64::from_polar(1.0, p - t - r))
            .sum::<Complex64>()
            / n
    }

    /// Same reference phases, all shifts replaced by `psi`.
    pub fn with_uniform_shift(&self, psi: f64) -> Self {
        Self { psi: vec![psi.rem_euclid(TAU); self.psi.len()], ..self.clone() }
    }

    /// Reflection coefficients `exp(j psi_n)`.
    pub fn reflection(&self) -> CVector {
        CVector::from_iterator(self.psi.len(), self.psi.iter().map(|&p| Complex64::from_polar(1.0, p)))
    }
}

pub fn ula_steering(n: usize, spacing: f64, theta: f64) -> CVector {
    let norm = 1.0 / (n as f64).sqrt();
    let step = -TAU * spacing * theta.sin();
    CVector::from_iterator(n, (0..n).map(|k| Complex64::from_polar(norm, step * k as f64)))
}

/// RIS array response, row-major over `(m_h, m_v)`.
pub fn upa_steering(n_h: usize, n_v: usize, spacing: f64, phi: f64, varphi: f64) -> CVector {
    let norm = 1.0 / ((n_h * n_v) as f64).sqrt();
    let u = phi.sin() * varphi.cos();
    let v = phi.cos();
    CVector::from_iterator(
        n_h * n_v,
        (0..n_h).flat_map(|mh| {
            (0..n_v).map(move |mv| {
                Complex64::from_polar(norm, -TAU * spacing * (mh as f64 * u + mv as f64 * v))
            })
        }),
    )
}

fn tx_steering(geom: &ArrayGeometry, angles: &AngleSet) -> CVector {
    ula_steering(geom.n_t, geom.spacing_t, angles.theta_t)
}

fn ris_incident(geom: &ArrayGeometry, angles: &AngleSet) -> CVector {
    upa_steering(geom.n_h, geom.n_v, geom.spacing_ris, angles.phi_r, angles.varphi_r)
}

fn ris_departing(geom: &ArrayGeometry, angles: &AngleSet, l: usize) -> CVector {
    upa_steering(geom.n_h, geom.n_v, geom.spacing_ris, angles.phi_t[l], angles.varphi_t[l])
}

fn rx_steering(geom: &ArrayGeometry, angles: &AngleSet, l: usize) -> CVector {
    ula_steering(geom.n_r, geom.spacing_r, angles.theta_r[l])
}

/// Tx-RIS line-of-sight channel `a_ris(phi_r, varphi_r) a_t^H(theta_t)`, `N x n_t`.
pub fn los_channel(geom: &ArrayGeometry, angles: &AngleSet) -> CMatrix {
    ris_incident(geom, angles) * tx_steering(geom, angles).adjoint()
}

/// RIS-Rx multipath channel `sum_l h_l a_r(theta_l) a_ris^H(phi_l, varphi_l)`, `n_r x N`.
pub fn sv_channel(realization: &ChannelRealization, geom: &ArrayGeometry) -> CMatrix {
    let angles = realization.angles();
    let mut f = CMatrix::zeros(geom.n_r, geom.n_ris());
    for (l, h) in realization.gains().iter().enumerate() {
        f += (rx_steering(geom, angles, l) * *h) * ris_departing(geom, angles, l).adjoint();
    }
    f
}

/// RIS phases that make the reflection from the incident beam coherent along
/// path `target_path` (1-based).
pub fn align_ris_phases(
    target_path: usize,
    angles: &AngleSet,
    geom: &ArrayGeometry,
) -> Result<RisPhaseProfile> {
    let l_total = angles.l_total();
    if target_path == 0 || target_path > l_total {
        return Err(Error::Index { index: target_path, len: l_total });
    }
    let zeta_r: Vec<f64> = ris_incident(geom, angles).iter().map(|a| a.conj().arg()).collect();
    let zeta_t: Vec<f64> = ris_departing(geom, angles, target_path - 1).iter().map(|a| a.arg()).collect();
    let psi = zeta_t.iter().zip(&zeta_r).map(|(t, r)| (t + r).rem_euclid(TAU)).collect();
    Ok(RisPhaseProfile { psi, zeta_r, zeta_t })
}

/// End-to-end channel `F diag(exp(j psi)) B`, `n_r x n_t`.
pub fn composite_channel(
    realization: &ChannelRealization,
    geom: &ArrayGeometry,
    profile: &RisPhaseProfile,
) -> Result<CMatrix> {
    if profile.psi.len() != geom.n_ris() {
        return Err(Error::Shape {
            expected: format!("{} RIS phases", geom.n_ris()),
            found: format!("{}", profile.psi.len()),
        });
    }
    let mut f = sv_channel(realization, geom);
    for (mut col, w) in f.column_iter_mut().zip(profile.reflection().iter()) {
        col *= *w;
    }
    Ok(f * los_channel(geom, realization.angles()))
}

/// `|a^H(theta_a) a(theta_b)|` for an `n`-element ULA, in closed form
/// `|sin(pi d n) / (n sin(pi d))|` with `d = spacing (sin theta_b - sin theta_a)`.
pub fn orthogonality_leakage(n: usize, spacing: f64, theta_a: f64, theta_b: f64) -> f64 {
    let d = spacing * (theta_b.sin() - theta_a.sin());
    let den = n as f64 * (PI * d).sin();
    if den.abs() < 1e-300 || (PI * d).sin().abs() < 1e-15 {
        // grating lobe or identical direction: the vectors coincide up to phase
        return 1.0;
    }
    ((PI * d * n as f64).sin() / den).abs()
}

/// Upper envelope `1 / (n |sin(pi d)|)` of [`orthogonality_leakage`].
pub fn leakage_envelope(n: usize, spacing: f64, theta_a: f64, theta_b: f64) -> f64 {
    let d = spacing * (theta_b.sin() - theta_a.sin());
    1.0 / (n as f64 * (PI * d).sin().abs())
}

/// Per-realization cache of steering vectors for the explicit array model.
///
/// `received(l)` returns `H_l a_t(theta_t)`, where `H_l` is the composite
/// channel with the RIS aligned to path `l`; it is computed as
/// `sum_p h_p a_r(theta_p) [a_ris^H(p) diag(e^{j psi}) a_ris(incident)]
/// [a_t^H a_t]`, the same linear map as `composite_channel(..) * a_t`
/// without materializing the matrices.
#[derive(Debug, Clone)]
pub struct ArrayLink {
    gains: Vec<Complex64>,
    rx: Vec<CVector>,
    ris_out: Vec<CVector>,
    ris_in: CVector,
    tx_gain: Complex64,
    geom: ArrayGeometry,
    angles: AngleSet,
}

impl ArrayLink {
    pub fn new(realization: &ChannelRealization, geom: &ArrayGeometry) -> Self {
        let angles = realization.angles().clone();
        let l_total = realization.l_total();
        let a_t = tx_steering(geom, &angles);
        Self {
            gains: realization.gains().to_vec(),
            rx: (0..l_total).map(|l| rx_steering(geom, &angles, l)).collect(),
            ris_out: (0..l_total).map(|l| ris_departing(geom, &angles, l)).collect(),
            ris_in: ris_incident(geom, &angles),
            tx_gain: a_t.dotc(&a_t),
            geom: *geom,
            angles,
        }
    }

    /// Rx combining vector for path `l` (0-based).
    pub fn rx_steering(&self, l: usize) -> &CVector {
        &self.rx[l]
    }

    /// Noiseless received vector with the RIS aligned to path `l` (0-based).
    pub fn received(&self, l: usize) -> CVector {
        let profile = align_ris_phases(l + 1, &self.angles, &self.geom).expect("path index in range");
        let reflected = self.ris_in.component_mul(&profile.reflection());
        let mut y = CVector::zeros(self.geom.n_r);
        for ((h, rx), out) in self.gains.iter().zip(&self.rx).zip(&self.ris_out) {
            let beta = *h * out.dotc(&reflected) * self.tx_gain;
            y.axpy(beta, rx, Complex64::new(1.0, 0.0));
        }
        y
    }

    /// Combiner output `a_r^H(theta_branch) H_target a_t` (0-based indices).
    pub fn branch_gain(&self, branch: usize, target: usize) -> Complex64 {
        self.rx[branch].dotc(&self.received(target))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ula_examples() {
        let one = ula_steering(1, 0.5, 0.83);
        assert_abs_diff_eq!(one[0].re, 1.0);
        assert_abs_diff_eq!(one[0].im, 0.0);
        for e in ula_steering(4, 0.5, 0.0).iter() {
            assert_abs_diff_eq!(e.re, 0.5);
            assert_abs_diff_eq!(e.im, 0.0);
        }
        assert_abs_diff_eq!(ula_steering(64, 0.5, 0.7).norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn upa_examples() {
        let one = upa_steering(1, 1, 0.5, 0.2, -1.0);
        assert_abs_diff_eq!(one[0].re, 1.0);
        // phi = pi/2, varphi = 0: phase -2 pi 0.5 m_h = -pi m_h, no m_v dependence
        let v = upa_steering(2, 2, 0.5, FRAC_PI_2, 0.0);
        let expect = [c(0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(-0.5, 0.0)];
        for (a, b) in v.iter().zip(expect) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
            assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(upa_steering(8, 8, 0.5, 0.3, -0.4).norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn upa_row_major_order() {
        let (nh, nv, d, phi, varphi) = (3, 4, 0.5, 0.4, 0.9);
        let v = upa_steering(nh, nv, d, phi, varphi);
        let norm = 1.0 / 12f64.sqrt();
        for mh in 0..nh {
            for mv in 0..nv {
                let phase = -TAU * d * (mh as f64 * phi.sin() * varphi.cos() + mv as f64 * phi.cos());
                let e = Complex64::from_polar(norm, phase);
                assert_abs_diff_eq!((v[mh * nv + mv] - e).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    fn sample(l: usize, seed: u64) -> ChannelRealization {
        ChannelRealization::sample(l, AngleDomain::HalfPlane, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    #[test]
    fn los_channel_rank_one_unit_norm() {
        let geom = ArrayGeometry::new(1, 1, 1, 1).unwrap();
        let r = sample(1, 1);
        let b = los_channel(&geom, r.angles());
        assert_abs_diff_eq!(b[(0, 0)].re, 1.0, epsilon = 1e-12);

        let geom = ArrayGeometry::new(16, 8, 4, 3).unwrap();
        let r = sample(3, 2);
        let b = los_channel(&geom, r.angles());
        assert_eq!(b.shape(), (12, 16));
        assert_abs_diff_eq!(b.norm(), 1.0, epsilon = 1e-12);
        let sv = b.singular_values();
        assert!(sv[0] > 0.99 && sv.iter().skip(1).all(|s| *s < 1e-10));
    }

    #[test]
    fn sv_channel_examples() {
        let geom = ArrayGeometry::new(1, 1, 1, 1).unwrap();
        let r = sample(1, 3);
        let f = sv_channel(&r, &geom);
        assert_abs_diff_eq!((f[(0, 0)] - r.gains()[0]).norm(), 0.0, epsilon = 1e-12);

        let geom = ArrayGeometry::new(4, 16, 4, 4).unwrap();
        let f = sv_channel(&r, &geom);
        assert_abs_diff_eq!(f.norm(), r.gains()[0].norm(), epsilon = 1e-12);

        let r = sample(3, 4);
        let f = sv_channel(&r, &geom);
        let rank = f.singular_values().iter().filter(|s| **s > 1e-9).count();
        assert!(rank <= 3);
    }

    #[test]
    fn alignment_is_coherent() {
        for seed in 0..20 {
            let geom = ArrayGeometry::new(8, 8, 5, 3).unwrap();
            let r = sample(4, seed);
            for l in 1..=4 {
                let p = align_ris_phases(l, r.angles(), &geom).unwrap();
                assert!((p.composite_phase_factor() - c(1.0, 0.0)).norm() < 1e-12);
                assert!(p.psi.iter().all(|&x| (0.0..TAU).contains(&x)));
                assert!(p.with_uniform_shift(0.0).composite_phase_factor().norm() <= 1.0 + 1e-12);
            }
        }
        let geom = ArrayGeometry::new(2, 2, 1, 1).unwrap();
        let r = sample(2, 9);
        let p = align_ris_phases(1, r.angles(), &geom).unwrap();
        assert_abs_diff_eq!(p.psi[0], (p.zeta_t[0] + p.zeta_r[0]).rem_euclid(TAU), epsilon = 1e-15);
        assert!(matches!(align_ris_phases(3, r.angles(), &geom), Err(Error::Index { .. })));
        assert!(align_ris_phases(0, r.angles(), &geom).is_err());
    }

    #[test]
    fn single_path_composite_recovers_gain() {
        let geom = ArrayGeometry::new(16, 16, 4, 4).unwrap();
        let r = sample(1, 7);
        let p = align_ris_phases(1, r.angles(), &geom).unwrap();
        let h = composite_channel(&r, &geom, &p).unwrap();
        assert_eq!(h.shape(), (16, 16));
        let a_r = ula_steering(16, 0.5, r.angles().theta_r[0]);
        let a_t = ula_steering(16, 0.5, r.angles().theta_t);
        let g = (a_r.adjoint() * &h * &a_t)[(0, 0)];
        assert_abs_diff_eq!((g - r.gains()[0]).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn composite_rejects_wrong_profile_length() {
        let geom = ArrayGeometry::new(4, 4, 2, 2).unwrap();
        let r = sample(2, 1);
        let p = RisPhaseProfile { psi: vec![0.0; 3], zeta_r: vec![0.0; 3], zeta_t: vec![0.0; 3] };
        assert!(matches!(composite_channel(&r, &geom, &p), Err(Error::Shape { .. })));
    }

    #[test]
    fn leakage_bound_on_aligned_branch() {
        let geom = ArrayGeometry::new(256, 256, 4, 4).unwrap();
        for seed in 0..6 {
            let r = sample(4, 100 + seed);
            let a = r.angles();
            let p = align_ris_phases(2, a, &geom).unwrap();
            let h = composite_channel(&r, &geom, &p).unwrap();
            let a_r = ula_steering(256, 0.5, a.theta_r[1]);
            let a_t = ula_steering(256, 0.5, a.theta_t);
            let g = (a_r.adjoint() * &h * &a_t)[(0, 0)];
            let bound: f64 = (0..4)
                .filter(|&l| l != 1)
                .map(|l| r.gains()[l].norm() * orthogonality_leakage(256, 0.5, a.theta_r[1], a.theta_r[l]))
                .sum();
            assert!((g - r.gains()[1]).norm() <= bound + 1e-12);
        }
    }

    #[test]
    fn array_link_matches_explicit_product() {
        let geom = ArrayGeometry::new(32, 24, 3, 4).unwrap();
        let r = sample(3, 42);
        let link = ArrayLink::new(&r, &geom);
        let a_t = ula_steering(32, 0.5, r.angles().theta_t);
        for l in 0..3 {
            let p = align_ris_phases(l + 1, r.angles(), &geom).unwrap();
            let explicit = composite_channel(&r, &geom, &p).unwrap() * &a_t;
            assert!((explicit - link.received(l)).norm() < 1e-12);
        }
    }

    #[test]
    fn leakage_examples() {
        assert_abs_diff_eq!(orthogonality_leakage(64, 0.5, 0.4, 0.4), 1.0);
        let b = 0.3f64.asin();
        assert_abs_diff_eq!(orthogonality_leakage(64, 0.5, 0.0, b), 0.03273, epsilon = 1e-4);
        assert!(orthogonality_leakage(256, 0.5, 0.0, b) <= orthogonality_leakage(64, 0.5, 0.0, b));
        for n in [8, 64, 256, 1024] {
            assert!(orthogonality_leakage(n, 0.5, 0.0, b) <= leakage_envelope(n, 0.5, 0.0, b) + 1e-15);
        }
        // direct inner product
        let x = ula_steering(64, 0.5, 0.0).dotc(&ula_steering(64, 0.5, b)).norm();
        assert_abs_diff_eq!(x, orthogonality_leakage(64, 0.5, 0.0, b), epsilon = 1e-12);
    }

    #[test]
    fn realization_validation() {
        let r = sample(3, 5);
        let mut g = r.gains().to_vec();
        g.reverse();
        assert!(ChannelRealization::new(g, r.angles().clone()).is_err());
        assert!(ChannelRealization::new(r.gains()[..2].to_vec(), r.angles().clone()).is_err());
        let gs = r.gains_sq();
        assert!(gs.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn half_plane_angles_have_distinct_sines() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let a = AngleSet::sample(12, AngleDomain::HalfPlane, &mut rng);
            assert!(a.theta_r.iter().all(|t| t.abs() <= FRAC_PI_2));
            for i in 0..12 {
                for j in 0..i {
                    assert_ne!(a.theta_r[i].sin(), a.theta_r[j].sin());
                }
            }
        }
    }
}
