//! Array-theory radiation patterns and RIS excitation profiles.
//!
//! A pattern sample is |a(θ)ᴴ·x|²·E(θ) where a(θ) is the steering vector of
//! a λ/2-spaced line and E the patch element pattern. With the exp(+jπr)
//! phase used in T, positive θ leans toward the element-0 end of the array;
//! [`pattern_angle_toward`] converts a physical target to this convention.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::{element_gain, PropagationMatrix};
use crate::error::{Error, Result};
use crate::geometry::{ElementLayout, Vec2};
use crate::modes::{self, db, BeamVector};

/// dB value written for zero linear power.
pub const DB_FLOOR: f64 = -300.0;
pub const DEFAULT_STEP_DEG: f64 = 0.05;

fn to_db(p: f64) -> f64 {
    if p > 0.0 {
        db(p).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

/// Uniform angle grid in degrees, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleGrid {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
}

impl Default for AngleGrid {
    fn default() -> Self {
        AngleGrid { start_deg: -90.0, stop_deg: 90.0, step_deg: DEFAULT_STEP_DEG }
    }
}

impl AngleGrid {
    pub fn new(start_deg: f64, stop_deg: f64, step_deg: f64) -> Result<Self> {
        if !(step_deg > 0.0 && step_deg.is_finite()) {
            return Err(Error::invalid("grid_step", format!("must be positive, got {step_deg}")));
        }
        if !(start_deg.is_finite() && stop_deg.is_finite()) || start_deg > stop_deg {
            return Err(Error::Empty("angle grid"));
        }
        if start_deg < -90.0 || stop_deg > 90.0 {
            return Err(Error::invalid("grid", "angles must lie within [-90, 90] degrees"));
        }
        Ok(AngleGrid { start_deg, stop_deg, step_deg })
    }

    /// Full ±90° grid at `step_deg`.
    pub fn full(step_deg: f64) -> Result<Self> {
        Self::new(-90.0, 90.0, step_deg)
    }

    pub fn len(&self) -> usize {
        ((self.stop_deg - self.start_deg) / self.step_deg + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn angles_deg(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start_deg + i as f64 * self.step_deg).collect()
    }
}

/// a(θ): entries exp(jπk·sinθ), conjugated.
pub fn steering_vector(n: usize, theta: f64) -> Vec<Complex64> {
    let s = theta.sin();
    (0..n).map(|k| Complex64::from_polar(1.0, PI * k as f64 * s).conj()).collect()
}

/// |a(θ)ᴴ·w|²
pub fn array_factor(weights: &[Complex64], theta: f64) -> f64 {
    let s = theta.sin();
    weights
        .iter()
        .enumerate()
        .map(|(k, w)| Complex64::from_polar(1.0, PI * k as f64 * s) * w)
        .sum::<Complex64>()
        .norm_sqr()
}

/// Sampled power pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternCurve {
    pub angles_deg: Vec<f64>,
    pub power_dbi: Vec<f64>,
    pub power_norm_db: Vec<f64>,
    pub peak_angle_deg: f64,
    pub peak_dbi: f64,
}

impl PatternCurve {
    /// Builds a curve from linear samples; the first maximum is the peak.
    pub fn from_linear(angles_deg: Vec<f64>, linear: &[f64]) -> Result<Self> {
        if angles_deg.is_empty() || angles_deg.len() != linear.len() {
            return Err(Error::Empty("pattern"));
        }
        let power_dbi: Vec<f64> = linear.iter().map(|&p| to_db(p)).collect();
        let mut peak = 0;
        for (i, &p) in power_dbi.iter().enumerate() {
            if p > power_dbi[peak] {
                peak = i;
            }
        }
        let peak_dbi = power_dbi[peak];
        let power_norm_db = power_dbi.iter().map(|p| p - peak_dbi).collect();
        Ok(PatternCurve { peak_angle_deg: angles_deg[peak], angles_deg, power_dbi, power_norm_db, peak_dbi })
    }

    pub fn len(&self) -> usize {
        self.angles_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles_deg.is_empty()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "angle_deg,power_dbi,power_norm_db")?;
        for ((a, p), n) in self.angles_deg.iter().zip(&self.power_dbi).zip(&self.power_norm_db) {
            writeln!(w, "{a},{p},{n}")?;
        }
        Ok(())
    }
}

fn sample(weights: &[Complex64], grid: &AngleGrid) -> Result<PatternCurve> {
    let angles = grid.angles_deg();
    let linear: Vec<f64> = angles
        .par_iter()
        .map(|deg| {
            let th = deg.to_radians();
            array_factor(weights, th) * element_gain(th)
        })
        .collect();
    PatternCurve::from_linear(angles, &linear)
}

/// Feeder pattern for excitation `b`, element factor included.
pub fn amaf_pattern(b: &BeamVector, grid: &AngleGrid) -> Result<PatternCurve> {
    sample(b.weights(), grid)
}

/// Pattern of an arbitrary aperture distribution (not renormalized).
pub fn aperture_pattern(x: &[Complex64], grid: &AngleGrid) -> Result<PatternCurve> {
    if x.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroExcitation);
    }
    sample(x, grid)
}

/// |T·b| across the RIS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcitationProfile {
    pub magnitudes: Vec<f64>,
}

impl ExcitationProfile {
    pub fn total_power(&self) -> f64 {
        self.magnitudes.iter().map(|m| m * m).sum()
    }

    /// Standard deviation over mean of the magnitudes.
    pub fn coefficient_of_variation(&self) -> f64 {
        let n = self.magnitudes.len() as f64;
        let mean = self.magnitudes.iter().sum::<f64>() / n;
        let var = self.magnitudes.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / n;
        var.sqrt() / mean
    }

    /// 1-based index of the strongest element.
    pub fn peak_element(&self) -> usize {
        let mut best = 0;
        for (i, &m) in self.magnitudes.iter().enumerate() {
            if m > self.magnitudes[best] {
                best = i;
            }
        }
        best + 1
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "element_index,magnitude,magnitude_db")?;
        for (i, m) in self.magnitudes.iter().enumerate() {
            writeln!(w, "{},{},{}", i + 1, m, to_db(m * m))?;
        }
        Ok(())
    }
}

pub fn ris_excitation(t: &PropagationMatrix, b: &BeamVector) -> Result<ExcitationProfile> {
    let e = modes::excite(t, b)?;
    Ok(ExcitationProfile { magnitudes: e.iter().map(|z| z.norm()).collect() })
}

/// RIS phase setting applied to the incident field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cophase {
    /// Conjugate the incident phase: the aperture radiates |T·b|.
    Broadside,
    /// Leave the incident phases in place.
    None,
}

pub fn ris_pattern(t: &PropagationMatrix, b: &BeamVector, grid: &AngleGrid, cophase: Cophase) -> Result<PatternCurve> {
    let e = modes::excite(t, b)?;
    let x: Vec<Complex64> = match cophase {
        Cophase::Broadside => e.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect(),
        Cophase::None => e,
    };
    aperture_pattern(&x, grid)
}

/// Highest local maximum outside the main lobe, in dB below the peak.
///
/// The main lobe runs out from the peak to the nearest strict local minimum
/// on each side. `Ok(None)` when no such maximum exists.
pub fn sidelobe_level(curve: &PatternCurve) -> Result<Option<f64>> {
    let p = &curve.power_norm_db;
    if p.len() < 3 {
        return Err(Error::invalid("curve", "needs at least 3 samples"));
    }
    let peak = p.iter().position(|&v| v == 0.0).unwrap();
    let mut left = peak;
    while left > 0 && p[left - 1] < p[left] {
        left -= 1;
    }
    let mut right = peak;
    while right + 1 < p.len() && p[right + 1] < p[right] {
        right += 1;
    }
    let is_max = |j: usize| p[j] > p[j - 1] && p[j] >= p[j + 1];
    let best = (1..left)
        .chain(right + 1..p.len() - 1)
        .filter(|&j| is_max(j))
        .map(|j| p[j])
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.max(v))));
    Ok(best)
}

/// Pattern angle (degrees) at which `layout` sees `target` from its centroid.
pub fn pattern_angle_toward(layout: &ElementLayout, target: Vec2) -> f64 {
    let d = target - layout.centroid();
    (-d.dot(layout.axis)).atan2(d.dot(layout.broadside)).to_degrees()
}
