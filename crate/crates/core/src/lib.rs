//! Analytical and simulated error performance of RIS-assisted spatial
//! scattering modulation (SSM) over sparse mmWave channels.
//!
//! The transmitter picks one of the `L_s` strongest scatterers and one of
//! `M` constellation symbols per channel use; the RIS steers the Tx beam
//! toward the chosen scatterer. [`analytics`] gives closed forms for the
//! pairwise error probabilities, union-bound BER and a capacity lower bound;
//! [`montecarlo`] checks them by simulation.

mod ddouble;

pub mod analytics;
pub mod channel;
pub mod error;
pub mod mathutil;
pub mod modulation;
pub mod montecarlo;
pub mod orderstats;

pub use error::{Error, Result};
pub use modulation::{Constellation, ConstellationScheme, SsmConfig};
