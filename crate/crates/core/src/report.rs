//! Single-scenario mode report (JSON).

use serde::{Deserialize, Serialize};

use crate::coupling::build_t;
use crate::error::Result;
use crate::geometry::ScenarioSpec;
use crate::modes::{db, mode_metrics, power_transfer, svd_modes, BeamLabel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub scenario: ScenarioSpec,
    pub sigma_sq_db: Vec<f64>,
    pub sigma1_db: f64,
    pub sum_db: f64,
    pub cond: f64,
    pub l_iso_db: f64,
    pub f_over_d: f64,
    pub v1_re: Vec<f64>,
    pub v1_im: Vec<f64>,
    pub beam: BeamLabel,
    /// Power delivered to the RIS by `beam`, dB.
    pub beam_power_db: f64,
}

impl ModeReport {
    pub fn compute(spec: &ScenarioSpec, beam: BeamLabel) -> Result<Self> {
        let scenario = spec.build()?;
        let t = build_t(&scenario)?;
        let modes = svd_modes(&t)?;
        let metrics = mode_metrics(&modes, &scenario);
        let b = modes.beam(beam).unwrap_or_else(|| modes.pem());
        let v1 = &modes.right_vectors[0];
        Ok(ModeReport {
            scenario: *spec,
            sigma1_db: metrics.sigma_sq_db[0],
            sigma_sq_db: metrics.sigma_sq_db,
            sum_db: metrics.sum_db,
            cond: metrics.cond,
            l_iso_db: metrics.l_iso_db,
            f_over_d: metrics.f_over_d,
            v1_re: v1.iter().map(|z| z.re).collect(),
            v1_im: v1.iter().map(|z| z.im).collect(),
            beam: b.label(),
            beam_power_db: db(power_transfer(&t, &b)?),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}
