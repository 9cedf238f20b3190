//! Near-field power transfer between an active multi-antenna feeder (AMAF)
//! and a passive reflective surface (RIS).
//!
//! Both arrays are uniform linear arrays of patch elements in a plane, with
//! distances in half-wavelength units. The crate builds the element-to-element
//! propagation matrix T, decomposes it into eigenmodes, and derives power
//! transfer figures, aperture excitations and array-theory radiation
//! patterns. [`sweep`] runs parameter grids and [`cli`] exposes everything as
//! a command-line tool.

pub mod cli;
pub mod coupling;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod modes;
pub mod patterns;
pub mod report;
pub mod sweep;

pub use coupling::{build_t, element_gain, PropagationMatrix};
pub use error::{Error, Result};
pub use geometry::{make_center_feed, make_end_feed, FeedStyle, Scenario, ScenarioSpec, TiltModel};
pub use modes::{svd_modes, BeamLabel, BeamVector, ModeAnalysis, ModeMetrics};
