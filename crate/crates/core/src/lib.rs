//! Exact computer algebra for modular-form q-expansions, Witten-genus
//! characteristic-class calculus, Clifford-algebra supertraces, and
//! finite-rank superconnections with their supersemigroup representations.
//!
//! All arithmetic is exact over ℚ(i) extended by the central symbol ι
//! (standing for 2πi) and, where spectra enter, by formal decaying
//! exponentials e^{−λt}. Nothing is ever evaluated in floating point except
//! the explicitly labeled numeric fallback paths.

pub mod error;
pub mod rat;
pub mod iota;
pub mod qseries;
pub mod special;
pub mod modforms;
pub mod cdga;
pub mod charclasses;
pub mod clifford;
pub mod grassmann;
pub mod superconn;
pub mod report;

pub use error::{WfError, WfResult};
pub use qseries::QSeries;
