//! Thermodynamics of a boson coupled to a boson bath through a PT-symmetric
//! non-Hermitian coupling.
//!
//! * [`spectrum`]: parameters, the mode-frequency pair `W±` and its
//!   time-dependent version.
//! * [`thermo`]: closed-form `Z, F, U, S, p` valid in both PT regimes.
//! * [`cycles`]: Carnot and Tλ cycles, isentrope tracing and heat/work
//!   bookkeeping.
//! * [`phase`]: Maxwell construction, binodal/spinodal regions and the
//!   heterogeneous free energy.
//! * [`numerics`]: root finding, quadrature, finite differences, contours.
//! * [`reproduce`]: the reference-value checks behind `ptcycle verify`.

pub mod cycles;
pub mod error;
pub mod numerics;
pub mod phase;
pub mod reproduce;
pub mod spectrum;
pub mod thermo;

pub use error::{Error, Result};
pub use numerics::NumericsConfig;
pub use spectrum::{GapKind, ModelParams, SpectralSplit, TimeDependence};
