//! Constellations, the SSM bit mapping and Hamming bookkeeping.
//!
//! A transmitted block of `log2(L_s * M)` bits is split MSB-first: the leading
//! `log2(L_s)` bits pick the scatterer `l` (natural binary, `l = value + 1`),
//! the rest pick the symbol `m = value + 1`. Symbol points are stored indexed
//! by their bit label, so the Gray/natural choice lives entirely in the
//! constellation geometry.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{config, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstellationScheme {
    Psk,
    Qam,
}

impl ConstellationScheme {
    pub fn name(self) -> &'static str {
        match self {
            Self::Psk => "psk",
            Self::Qam => "qam",
        }
    }
}

impl std::str::FromStr for ConstellationScheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "psk" => Ok(Self::Psk),
            "qam" => Ok(Self::Qam),
            other => Err(config(format!("unknown constellation scheme '{other}'"))),
        }
    }
}

/// Bit labelling of the symbol constellation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SymbolMapping {
    #[default]
    Gray,
    Natural,
}

impl std::str::FromStr for SymbolMapping {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gray" => Ok(Self::Gray),
            "natural" => Ok(Self::Natural),
            other => Err(config(format!("unknown symbol mapping '{other}'"))),
        }
    }
}

/// Bit labelling of the scatterer index. Only natural binary is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpatialMapping {
    #[default]
    Natural,
}

fn gray(k: usize) -> usize {
    k ^ (k >> 1)
}

fn log2_exact(n: usize) -> Option<u32> {
    (n.is_power_of_two()).then(|| n.trailing_zeros())
}

/// Unit-average-energy symbol alphabet.
///
/// PSK points sit at `exp(j 2 pi k / M)`, except BPSK (`+1, -1`) and QPSK,
/// which is rotated to `exp(j (2k + 1) pi / 4)`. QAM is a square grid with
/// independent Gray (or natural) labelling per axis, the in-phase bits first.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<Complex64>,
    scheme: ConstellationScheme,
    mapping: SymbolMapping,
}

impl Constellation {
    pub fn new(scheme: ConstellationScheme, order: usize) -> Result<Self> {
        Self::with_mapping(scheme, order, SymbolMapping::Gray)
    }

    pub fn with_mapping(
        scheme: ConstellationScheme,
        order: usize,
        mapping: SymbolMapping,
    ) -> Result<Self> {
        let bits = log2_exact(order)
            .filter(|&b| b >= 1)
            .ok_or_else(|| config(format!("constellation order {order} is not a power of two >= 2")))?;
        let label = |k: usize| match mapping {
            SymbolMapping::Gray => gray(k),
            SymbolMapping::Natural => k,
        };
        let mut points = vec![Complex64::new(0.0, 0.0); order];
        match scheme {
            ConstellationScheme::Psk => {
                for k in 0..order {
                    let angle = match order {
                        2 => PI * k as f64,
                        4 => (2 * k + 1) as f64 * PI / 4.0,
                        _ => 2.0 * PI * k as f64 / order as f64,
                    };
                    points[label(k)] = Complex64::from_polar(1.0, angle);
                }
            }
            ConstellationScheme::Qam => {
                if bits % 2 != 0 {
                    return Err(config(format!("QAM order {order} is not a square grid")));
                }
                let axis_bits = bits / 2;
                let side = 1usize << axis_bits;
                let scale = (3.0 / (2.0 * (order as f64 - 1.0))).sqrt();
                let level = |i: usize| (2 * i) as f64 - (side - 1) as f64;
                for i in 0..side {
                    for q in 0..side {
                        let lab = (label(i) << axis_bits) | label(q);
                        points[lab] = Complex64::new(level(i), level(q)) * scale;
                    }
                }
            }
        }
        Ok(Self { points, scheme, mapping })
    }

    /// Points indexed by bit label (`m - 1`).
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn scheme(&self) -> ConstellationScheme {
        self.scheme
    }

    pub fn mapping(&self) -> SymbolMapping {
        self.mapping
    }

    pub fn bits(&self) -> u32 {
        self.order().trailing_zeros()
    }

    /// Symbol `m`, 1-based.
    pub fn symbol(&self, m: usize) -> Complex64 {
        self.points[m - 1]
    }

    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.order() as f64
    }
}

/// A hypothesis pair `(l, m) -> (l_hat, m_hat)` with the distances the
/// pairwise error probabilities depend on. Indices are 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEvent {
    pub l: usize,
    pub m: usize,
    pub l_hat: usize,
    pub m_hat: usize,
    /// `|s_m - s_m_hat|^2`
    pub delta_sq: f64,
    /// `|s_m_hat|^2`
    pub energy_hat: f64,
    pub hamming: u32,
}

impl ErrorEvent {
    pub fn is_correct_beam(&self) -> bool {
        self.l == self.l_hat
    }
}

/// SSM alphabet: `L_s` candidate scatterers out of `L`, times `M` symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SsmConfig {
    l_total: usize,
    l_s: usize,
    constellation: Constellation,
    spatial_mapping: SpatialMapping,
}

impl SsmConfig {
    pub fn new(l_total: usize, l_s: usize, constellation: Constellation) -> Result<Self> {
        if l_s == 0 || l_s > l_total {
            return Err(config(format!("need 1 <= L_s <= L, got L_s = {l_s}, L = {l_total}")));
        }
        Ok(Self { l_total, l_s, constellation, spatial_mapping: SpatialMapping::Natural })
    }

    /// Shorthand for a Gray-labelled PSK/QAM alphabet.
    pub fn with_scheme(
        l_total: usize,
        l_s: usize,
        scheme: ConstellationScheme,
        order: usize,
    ) -> Result<Self> {
        Self::new(l_total, l_s, Constellation::new(scheme, order)?)
    }

    pub fn l_total(&self) -> usize {
        self.l_total
    }

    pub fn l_s(&self) -> usize {
        self.l_s
    }

    pub fn order(&self) -> usize {
        self.constellation.order()
    }

    pub fn constellation(&self) -> &Constellation {
        &self.constellation
    }

    pub fn spatial_mapping(&self) -> SpatialMapping {
        self.spatial_mapping
    }

    pub fn symbol_mapping(&self) -> SymbolMapping {
        self.constellation.mapping()
    }

    /// Whether every `(l, m)` carries a whole bit label, i.e. `L_s` is a
    /// power of two. Capacity needs only the alphabet size; bit mapping, BER
    /// and the ABEP bound need labels.
    pub fn is_bit_labelled(&self) -> bool {
        self.l_s.is_power_of_two()
    }

    pub fn require_bit_labels(&self) -> Result<()> {
        if self.is_bit_labelled() {
            Ok(())
        } else {
            Err(config(format!("L_s = {} is not a power of two, so the alphabet has no bit labels", self.l_s)))
        }
    }

    /// Bits on the scatterer index; rounded up when `L_s` is not a power of two.
    pub fn spatial_bits(&self) -> u32 {
        self.l_s.next_power_of_two().trailing_zeros()
    }

    /// `log2(L_s * M)` for bit-labelled alphabets.
    pub fn bits_per_use(&self) -> u32 {
        self.spatial_bits() + self.constellation.bits()
    }

    /// Alphabet size `L_s * M`.
    pub fn alphabet_size(&self) -> usize {
        self.l_s * self.order()
    }

    /// Packs `(l, m)` into the integer label whose bits are transmitted.
    pub fn label(&self, l: usize, m: usize) -> u32 {
        (((l - 1) << self.constellation.bits()) | (m - 1)) as u32
    }

    /// Inverse of [`SsmConfig::label`].
    pub fn split_label(&self, label: u32) -> (usize, usize) {
        let sym_bits = self.constellation.bits();
        let l = (label >> sym_bits) as usize + 1;
        let m = (label & ((1 << sym_bits) - 1)) as usize + 1;
        (l, m)
    }

    /// Maps a bit block (MSB first, one bit per entry) to `(l, m)`.
    pub fn map_bits(&self, bits: &[u8]) -> Result<(usize, usize)> {
        self.require_bit_labels()?;
        let k = self.bits_per_use() as usize;
        if bits.len() != k {
            return Err(config(format!("bit block has {} bits, expected {k}", bits.len())));
        }
        let mut label = 0u32;
        for &b in bits {
            if b > 1 {
                return Err(config(format!("bit value {b} is not 0 or 1")));
            }
            label = (label << 1) | u32::from(b);
        }
        Ok(self.split_label(label))
    }

    /// Bits carried by `(l, m)`, MSB first.
    pub fn demap(&self, l: usize, m: usize) -> Result<Vec<u8>> {
        self.require_bit_labels()?;
        self.check_indices(l, m)?;
        let k = self.bits_per_use();
        let label = self.label(l, m);
        Ok((0..k).rev().map(|i| ((label >> i) & 1) as u8).collect())
    }

    /// Number of differing bits between the labels of `(l, m)` and
    /// `(l_hat, m_hat)`.
    pub fn hamming_distance(&self, l: usize, m: usize, l_hat: usize, m_hat: usize) -> u32 {
        (self.label(l, m) ^ self.label(l_hat, m_hat)).count_ones()
    }

    pub fn error_event(&self, l: usize, m: usize, l_hat: usize, m_hat: usize) -> Result<ErrorEvent> {
        self.check_indices(l, m)?;
        self.check_indices(l_hat, m_hat)?;
        let s = self.constellation.symbol(m);
        let s_hat = self.constellation.symbol(m_hat);
        Ok(ErrorEvent {
            l,
            m,
            l_hat,
            m_hat,
            delta_sq: if m == m_hat { 0.0 } else { (s - s_hat).norm_sqr() },
            energy_hat: s_hat.norm_sqr(),
            hamming: self.hamming_distance(l, m, l_hat, m_hat),
        })
    }

    /// Every ordered hypothesis pair, including the identical ones.
    pub fn error_events(&self) -> impl Iterator<Item = ErrorEvent> + '_ {
        let (ls, mm) = (self.l_s, self.order());
        (1..=ls).flat_map(move |l| {
            (1..=mm).flat_map(move |m| {
                (1..=ls).flat_map(move |lh| {
                    (1..=mm).map(move |mh| self.error_event(l, m, lh, mh).expect("indices in range"))
                })
            })
        })
    }

    fn check_indices(&self, l: usize, m: usize) -> Result<()> {
        if l == 0 || l > self.l_s {
            return Err(Error::Index { index: l, len: self.l_s });
        }
        if m == 0 || m > self.order() {
            return Err(Error::Index { index: m, len: self.order() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::collections::BTreeSet;

    #[test]
    fn bpsk_points() {
        let c = Constellation::new(ConstellationScheme::Psk, 2).unwrap();
        assert_abs_diff_eq!(c.symbol(1).re, 1.0);
        assert_abs_diff_eq!(c.symbol(2).re, -1.0);
        assert_abs_diff_eq!(c.symbol(1).im, 0.0);
        assert_abs_diff_eq!(c.symbol(2).im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn psk_has_unit_modulus() {
        for m in [2, 4, 8, 16, 32] {
            let c = Constellation::new(ConstellationScheme::Psk, m).unwrap();
            for p in c.points() {
                assert_abs_diff_eq!(p.norm(), 1.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn unit_average_energy() {
        for (scheme, orders) in [
            (ConstellationScheme::Psk, vec![2, 4, 8, 16, 64]),
            (ConstellationScheme::Qam, vec![4, 16, 64, 256]),
        ] {
            for m in orders {
                for mapping in [SymbolMapping::Gray, SymbolMapping::Natural] {
                    let c = Constellation::with_mapping(scheme, m, mapping).unwrap();
                    assert_abs_diff_eq!(c.average_energy(), 1.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn qam16_energy_by_direct_sum() {
        // unscaled grid {+-1, +-3}^2 has mean energy 10
        let raw: f64 = [-3.0f64, -1.0, 1.0, 3.0]
            .iter()
            .flat_map(|&i| [-3.0f64, -1.0, 1.0, 3.0].map(move |q| i * i + q * q))
            .sum::<f64>()
            / 16.0;
        assert_abs_diff_eq!(raw, 10.0);
        let c = Constellation::new(ConstellationScheme::Qam, 16).unwrap();
        let e: f64 = c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / 16.0;
        assert_abs_diff_eq!(e, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        for m in [4, 8, 16] {
            let c = Constellation::new(ConstellationScheme::Psk, m).unwrap();
            let dmin = (2.0 * (PI / m as f64).sin()).powi(2);
            for a in 0..m {
                for b in 0..m {
                    let d = (c.points()[a] - c.points()[b]).norm_sqr();
                    if a != b && (d - dmin).abs() < 1e-9 {
                        assert_eq!((a ^ b).count_ones(), 1);
                    }
                }
            }
        }
        let c = Constellation::new(ConstellationScheme::Qam, 16).unwrap();
        let dmin = 4.0 * 3.0 / (2.0 * 15.0);
        for a in 0..16usize {
            for b in 0..16usize {
                let d = (c.points()[a] - c.points()[b]).norm_sqr();
                if (d - dmin).abs() < 1e-9 {
                    assert_eq!((a ^ b).count_ones(), 1);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(Constellation::new(ConstellationScheme::Psk, 6).is_err());
        assert!(Constellation::new(ConstellationScheme::Psk, 1).is_err());
        assert!(Constellation::new(ConstellationScheme::Qam, 8).is_err());
        assert!(Constellation::new(ConstellationScheme::Qam, 2).is_err());
    }

    #[test]
    fn psk_distance_multiset_is_small() {
        for m in [4, 8, 16] {
            let c = Constellation::new(ConstellationScheme::Psk, m).unwrap();
            let distinct: BTreeSet<i64> = c
                .points()
                .iter()
                .flat_map(|a| c.points().iter().map(move |b| ((a - b).norm_sqr() * 1e9).round() as i64))
                .collect();
            assert!(distinct.len() <= m / 2 + 1);
        }
    }

    fn cfg(l: usize, ls: usize, m: usize) -> SsmConfig {
        SsmConfig::with_scheme(l, ls, ConstellationScheme::Psk, m).unwrap()
    }

    #[test]
    fn map_bits_examples() {
        let c = cfg(2, 2, 2);
        assert_eq!(c.map_bits(&[0, 0]).unwrap(), (1, 1));
        assert_eq!(c.map_bits(&[1, 0]).unwrap(), (2, 1));
        assert!(c.map_bits(&[1, 0, 1]).is_err());
        assert!(c.map_bits(&[2, 0]).is_err());
    }

    #[test]
    fn map_demap_round_trip() {
        let c = cfg(4, 4, 4);
        for word in 0u32..16 {
            let bits: Vec<u8> = (0..4).rev().map(|i| ((word >> i) & 1) as u8).collect();
            let (l, m) = c.map_bits(&bits).unwrap();
            assert_eq!(c.demap(l, m).unwrap(), bits);
        }
    }

    #[test]
    fn hamming_examples() {
        let c = cfg(2, 2, 2);
        assert_eq!(c.hamming_distance(1, 1, 1, 1), 0);
        assert_eq!(c.hamming_distance(1, 1, 2, 2), 2);
        let total: u32 = c.error_events().map(|e| e.hamming).sum();
        // exhaustive count: 4 labels, each at distances {1, 1, 2} from the others
        assert_eq!(total, 16);
    }

    #[test]
    fn error_event_invariants() {
        let c = SsmConfig::with_scheme(8, 4, ConstellationScheme::Qam, 16).unwrap();
        for e in c.error_events() {
            assert_eq!(e.hamming == 0, (e.l, e.m) == (e.l_hat, e.m_hat));
            assert_eq!(e.delta_sq == 0.0, e.m == e.m_hat);
        }
    }

    #[test]
    fn config_validation() {
        assert!(SsmConfig::with_scheme(4, 8, ConstellationScheme::Psk, 2).is_err());
        let odd = SsmConfig::with_scheme(4, 3, ConstellationScheme::Psk, 2).unwrap();
        assert!(!odd.is_bit_labelled());
        assert_eq!(odd.alphabet_size(), 6);
        assert!(odd.demap(1, 1).is_err());
        assert!(SsmConfig::with_scheme(4, 0, ConstellationScheme::Psk, 2).is_err());
        let c = cfg(12, 4, 4);
        assert_eq!(c.bits_per_use(), 4);
        assert!(c.error_event(5, 1, 1, 1).is_err());
    }
}
