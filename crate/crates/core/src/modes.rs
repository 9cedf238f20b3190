//! Eigenmodes of the propagation matrix and the power metrics derived from them.
//!
//! The SVD T = U·S·Vᴴ is obtained from the N_a × N_a Gram matrix Tᴴ·T: its
//! eigenvectors are the right singular vectors. Singular values are then
//! taken as ‖T·vᵢ‖, which keeps the small ones accurate relative to their own
//! size, and left vectors follow as uᵢ = T·vᵢ/σᵢ.

use std::f64::consts::PI;
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupling::PropagationMatrix;
use crate::error::{Error, Result};
use crate::geometry::Scenario;
use crate::linalg::{self, JACOBI_MAX_SWEEPS, JACOBI_REL_TOL};

const UNIT_NORM_TOL: f64 = 1e-12;
const PHASE_TIE_REL: f64 = 1e-9;

/// 10·log₁₀ of a power ratio.
pub fn db(power: f64) -> f64 {
    10.0 * power.log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamLabel {
    Pem,
    Nonpem,
    Custom,
}

impl fmt::Display for BeamLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BeamLabel::Pem => "pem",
            BeamLabel::Nonpem => "nonpem",
            BeamLabel::Custom => "custom",
        })
    }
}

/// Unit-norm feeder excitation.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamVector {
    weights: Vec<Complex64>,
    label: BeamLabel,
}

impl BeamVector {
    /// Fails unless `weights` already has unit norm.
    pub fn new(weights: Vec<Complex64>, label: BeamLabel) -> Result<Self> {
        let n = linalg::norm(&weights);
        if weights.is_empty() || (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::invalid("beam", format!("weights must have unit norm, got {n}")));
        }
        Ok(BeamVector { weights, label })
    }

    /// Scales `weights` to unit norm.
    pub fn normalized(weights: Vec<Complex64>, label: BeamLabel) -> Result<Self> {
        let n = linalg::norm(&weights);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid("beam", "weights are zero or non-finite"));
        }
        Ok(BeamVector { weights: weights.into_iter().map(|w| w / n).collect(), label })
    }

    /// Equal-amplitude, equal-phase excitation.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::normalized(vec![Complex64::new(1.0, 0.0); n], BeamLabel::Custom)
    }

    /// Drives only element `k`.
    pub fn selector(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::IndexOutOfRange { what: "element", index: k, len: n });
        }
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        w[k] = Complex64::new(1.0, 0.0);
        Self::new(w, BeamLabel::Custom)
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn label(&self) -> BeamLabel {
        self.label
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Singular triplets of T, largest first.
#[derive(Debug, Clone)]
pub struct ModeAnalysis {
    pub sigma: Vec<f64>,
    pub right_vectors: Vec<Vec<Complex64>>,
    /// `None` where σᵢ = 0.
    pub left_vectors: Vec<Option<Vec<Complex64>>>,
    pub sweeps: usize,
}

impl ModeAnalysis {
    pub fn n_modes(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma_sq(&self) -> impl Iterator<Item = f64> + '_ {
        self.sigma.iter().map(|s| s * s)
    }

    /// Right singular vector `i` (0-based) as a beam.
    pub fn mode_beam(&self, i: usize) -> BeamVector {
        let label = if i == 0 { BeamLabel::Pem } else { BeamLabel::Custom };
        BeamVector { weights: self.right_vectors[i].clone(), label }
    }

    /// Principal eigenmode v₁.
    pub fn pem(&self) -> BeamVector {
        self.mode_beam(0)
    }

    pub fn beam(&self, label: BeamLabel) -> Option<BeamVector> {
        match label {
            BeamLabel::Pem => Some(self.pem()),
            BeamLabel::Nonpem => Some(nonpem_vector(&self.pem())),
            BeamLabel::Custom => None,
        }
    }
}

/// Rotates `v` so that its largest entry (lowest index within a relative
/// tie band) is real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let k = v.iter().position(|z| z.norm() >= max * (1.0 - PHASE_TIE_REL)).unwrap();
    let mag = v[k].norm();
    let rot = v[k].conj() / mag;
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[k] = Complex64::new(mag, 0.0);
}

pub fn svd_modes(t: &PropagationMatrix) -> Result<ModeAnalysis> {
    svd_of(&t.entries)
}

/// Thin SVD of any non-empty complex matrix with at least one column.
pub fn svd_of(t: &Array2<Complex64>) -> Result<ModeAnalysis> {
    if t.is_empty() {
        return Err(Error::Empty("propagation matrix"));
    }
    let g = linalg::gram(t);
    let eig = linalg::hermitian_jacobi(&g, JACOBI_REL_TOL, JACOBI_MAX_SWEEPS)?;

    let mut modes: Vec<(f64, Vec<Complex64>)> = (0..t.ncols())
        .map(|i| {
            let mut v: Vec<Complex64> = eig.vectors.column(i).to_vec();
            let n = linalg::norm(&v);
            v.iter_mut().for_each(|z| *z /= n);
            fix_phase(&mut v);
            let sigma = linalg::norm(&linalg::matvec(t, &v));
            (sigma, v)
        })
        .collect();
    // stable: equal σ keep eigensolver order
    modes.sort_by(|a, b| b.0.total_cmp(&a.0));

    let left_vectors = modes
        .iter()
        .map(|(s, v)| (*s > 0.0).then(|| linalg::matvec(t, v).into_iter().map(|z| z / *s).collect()))
        .collect();
    let (sigma, right_vectors) = modes.into_iter().unzip();
    Ok(ModeAnalysis { sigma, right_vectors, left_vectors, sweeps: eig.sweeps })
}

/// ‖T·b‖², the power reaching the RIS for unit transmit power.
pub fn power_transfer(t: &PropagationMatrix, b: &BeamVector) -> Result<f64> {
    Ok(excite(t, b)?.iter().map(|z| z.norm_sqr()).sum())
}

/// Incident field T·b on the RIS elements.
pub fn excite(t: &PropagationMatrix, b: &BeamVector) -> Result<Vec<Complex64>> {
    if b.len() != t.n_a() {
        return Err(Error::DimensionMismatch { expected: t.n_a(), found: b.len() });
    }
    Ok(linalg::matvec(&t.entries, b.weights()))
}

/// Element-wise magnitudes of v₁ (phases removed).
pub fn nonpem_vector(v1: &BeamVector) -> BeamVector {
    BeamVector { weights: v1.weights.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect(), label: BeamLabel::Nonpem }
}

/// Free-space loss between isotropic points f half-wavelengths apart:
/// −10·log₁₀((2πf)²).
pub fn isotropic_loss_db(f: f64) -> Result<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::invalid("f", format!("must be positive, got {f}")));
    }
    Ok(-db((2.0 * PI * f).powi(2)))
}

/// Distance at which f/D equals D (both in λ/2 units).
pub fn rayleigh_f(n_p: usize, spacing: f64) -> f64 {
    let d = n_p as f64 * spacing;
    d * d
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeMetrics {
    pub sigma_sq_db: Vec<f64>,
    pub sum_db: f64,
    /// σ₁/σ_{N_a}; infinite when the smallest singular value is zero.
    pub cond: f64,
    pub rank_deficient: bool,
    pub l_iso_db: f64,
    pub f_over_d: f64,
}

pub fn mode_metrics(modes: &ModeAnalysis, scenario: &Scenario) -> ModeMetrics {
    let sigma_sq_db = modes.sigma_sq().map(db).collect();
    let sum_db = db(modes.sigma_sq().sum());
    let first = modes.sigma[0];
    let last = *modes.sigma.last().unwrap();
    let rank_deficient = last == 0.0;
    let cond = if rank_deficient { f64::INFINITY } else { first / last };
    ModeMetrics {
        sigma_sq_db,
        sum_db,
        cond,
        rank_deficient,
        l_iso_db: -db((2.0 * PI * scenario.f).powi(2)),
        f_over_d: scenario.f_over_d(),
    }
}
