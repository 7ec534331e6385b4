//! Named sweeps reproducing the published figure configurations.

use std::fmt;
use std::str::FromStr;

use ris_ssm::analytics::UpepMethod;
use ris_ssm::montecarlo::Scheme;
use ris_ssm::ConstellationScheme;

use crate::spec::{ExperimentSpec, Metric, SnrGrid};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig6,
    Fig7,
    Fig8,
    Fig9a,
    Fig9b,
    Fig10,
    Fig11,
}

/// One curve of a preset.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub spec: ExperimentSpec,
}

/// The resolved sweep of a preset: its curves plus the parameters that had
/// to be assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetPlan {
    pub preset: Preset,
    pub series: Vec<Series>,
    pub assumptions: Vec<&'static str>,
}

impl Preset {
    pub const ALL: [Preset; 11] = [
        Self::Fig4a,
        Self::Fig4b,
        Self::Fig5a,
        Self::Fig5b,
        Self::Fig6,
        Self::Fig7,
        Self::Fig8,
        Self::Fig9a,
        Self::Fig9b,
        Self::Fig10,
        Self::Fig11,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig4a => "fig4a",
            Self::Fig4b => "fig4b",
            Self::Fig5a => "fig5a",
            Self::Fig5b => "fig5b",
            Self::Fig6 => "fig6",
            Self::Fig7 => "fig7",
            Self::Fig8 => "fig8",
            Self::Fig9a => "fig9a",
            Self::Fig9b => "fig9b",
            Self::Fig10 => "fig10",
            Self::Fig11 => "fig11",
        }
    }

    pub fn plan(self) -> PresetPlan {
        use Metric::*;
        use UpepMethod::*;

        let ber_grid = SnrGrid { start: 0.0, step: 2.0, stop: 30.0 };
        let psk = |l_total, l_s, m| ExperimentSpec {
            l_total,
            l_s,
            mod_order: m,
            mod_scheme: ConstellationScheme::Psk,
            snr: ber_grid,
            methods: vec![],
            metrics: vec![],
            ..ExperimentSpec::default()
        };
        let with = |mut s: ExperimentSpec, methods: Vec<UpepMethod>, metrics: Vec<Metric>| {
            s.methods = methods;
            s.metrics = metrics;
            s
        };
        let one = |label: String, spec| Series { label, spec };

        let benchmarks = |l_total: usize| {
            [Scheme::BenchmarkMinBeam, Scheme::BenchmarkMaxBeam].map(|scheme| {
                let spec = ExperimentSpec {
                    scheme,
                    mod_scheme: ConstellationScheme::Qam,
                    ..with(psk(l_total, 1, 16), vec![], vec![Ber])
                };
                one(scheme.name().into(), spec)
            })
        };

        let (series, assumptions): (Vec<Series>, Vec<&'static str>) = match self {
            Self::Fig4a => (vec![one("ris_ssm_sorted".into(), with(psk(4, 2, 2), vec![Pdf, Mgf, Asymptotic], vec![Ber]))], vec![]),
            Self::Fig4b => (
                (1..=8)
                    .map(|l_s| {
                        let mut s = with(psk(18, l_s, 4), vec![], vec![Capacity]);
                        s.snr = SnrGrid::single(24.0);
                        one(format!("l_s={l_s}"), s)
                    })
                    .collect(),
                vec!["l_s swept over 1..8 at a fixed SNR"],
            ),
            Self::Fig5a | Self::Fig5b => {
                let l_total = if self == Self::Fig5a { 6 } else { 12 };
                let mut v = vec![one("ris_ssm_sorted".into(), with(psk(l_total, 4, 4), vec![Mgf], vec![Ber]))];
                v.extend(benchmarks(l_total));
                (v, vec!["benchmarks carry 4 bits on 16qam with l_s = 1"])
            }
            Self::Fig6 => {
                let sorted = with(psk(4, 2, 2), vec![Mgf, Asymptotic], vec![Ber]);
                let random = ExperimentSpec { scheme: Scheme::RisSsmRandom, ..with(psk(4, 2, 2), vec![], vec![Ber]) };
                (vec![one("ris_ssm_sorted".into(), sorted), one("ris_ssm_random".into(), random)], vec![])
            }
            Self::Fig7 => (
                [(2, 2), (2, 4), (4, 2)]
                    .map(|(l_s, m)| one(format!("l_s={l_s} m={m}"), with(psk(4, l_s, m), vec![Mgf, QApprox], vec![])))
                    .into(),
                vec!["l_total = 4", "2 bpcu reference is l_s = 2 with bpsk"],
            ),
            Self::Fig8 => (
                [6, 12].map(|l| one(format!("l_total={l}"), with(psk(l, 4, 4), vec![Mgf, Asymptotic], vec![Ber]))).into(),
                vec![],
            ),
            Self::Fig9a => (
                [2, 4, 8].map(|l_s| one(format!("l_s={l_s}"), with(psk(12, l_s, 4), vec![Mgf, Asymptotic], vec![Ber]))).into(),
                vec!["l_s values 2, 4, 8"],
            ),
            Self::Fig9b => (
                [4, 8].map(|m| one(format!("m={m}"), with(psk(12, 4, m), vec![Mgf, Asymptotic], vec![Ber]))).into(),
                vec![],
            ),
            Self::Fig10 => (
                [6, 12, 18]
                    .map(|l| {
                        let mut s = with(psk(l, 4, 4), vec![], vec![Capacity]);
                        s.snr = SnrGrid { start: -10.0, step: 2.0, stop: 40.0 };
                        one(format!("l_total={l}"), s)
                    })
                    .into(),
                vec!["l_s = 4 and m = 4"],
            ),
            Self::Fig11 => (
                [2, 4, 8].map(|m| one(format!("m={m}"), with(psk(12, 4, m), vec![Mgf], vec![Throughput]))).into(),
                vec!["l_total = 12 and l_s = 4", "m values 2, 4, 8"],
            ),
        };
        PresetPlan { preset: self, series, assumptions }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|p| p.name() == s.trim()).ok_or_else(|| {
            let names: Vec<_> = Self::ALL.iter().map(|p| p.name()).collect();
            CliError::Usage(format!("unknown preset '{s}' (one of {})", names.join(", ")))
        })
    }
}
