//! Element pattern and the feeder-to-surface propagation matrix.

use std::f64::consts::{FRAC_PI_2, PI};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{ElementLayout, Scenario};

/// Patch element power pattern 4·cos²θ, zero over the rear hemisphere.
/// Peak gain 6.02 dBi, half-power beamwidth 90°.
pub fn element_gain(theta: f64) -> f64 {
    if theta.abs() < FRAC_PI_2 {
        let c = theta.cos();
        4.0 * c * c
    } else {
        0.0
    }
}

/// Geometry entering one entry of T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingTerms {
    /// Element separation (λ/2 units).
    pub r: f64,
    /// Departure angle off the transmitting element's boresight.
    pub theta: f64,
    /// Arrival angle off the receiving element's boresight.
    pub phi: f64,
}

impl CouplingTerms {
    /// √(E_A(θ)·E_R(φ)) · e^{jπr} / (2πr)
    pub fn coefficient(&self) -> Complex64 {
        let amp = (element_gain(self.theta) * element_gain(self.phi)).sqrt() / (2.0 * PI * self.r);
        Complex64::from_polar(amp, PI * self.r)
    }
}

fn terms_between(tx: &ElementLayout, m: usize, rx: &ElementLayout, n: usize) -> Result<CouplingTerms> {
    let d = rx.positions[n] - tx.positions[m];
    let r = d.norm();
    if r == 0.0 {
        return Err(Error::CoincidentElements { amaf: m, ris: n });
    }
    Ok(CouplingTerms { r, theta: tx.boresights[m].angle_to(d), phi: rx.boresights[n].angle_to(-d) })
}

pub fn coupling_terms(amaf_element: usize, ris_element: usize, scenario: &Scenario) -> Result<CouplingTerms> {
    if amaf_element >= scenario.n_a() {
        return Err(Error::IndexOutOfRange { what: "AMAF element", index: amaf_element, len: scenario.n_a() });
    }
    if ris_element >= scenario.n_p() {
        return Err(Error::IndexOutOfRange { what: "RIS element", index: ris_element, len: scenario.n_p() });
    }
    terms_between(&scenario.amaf, amaf_element, &scenario.ris, ris_element)
}

/// Coupling matrix from `tx` to `rx`: rows are receive elements, columns
/// transmit elements.
pub fn coupling_matrix(tx: &ElementLayout, rx: &ElementLayout) -> Result<Array2<Complex64>> {
    let mut t = Array2::zeros((rx.len(), tx.len()));
    for ((n, m), entry) in t.indexed_iter_mut() {
        *entry = terms_between(tx, m, rx, n)?.coefficient();
    }
    Ok(t)
}

/// The N_p × N_a matrix T together with the scenario that produced it.
#[derive(Debug, Clone)]
pub struct PropagationMatrix {
    pub entries: Array2<Complex64>,
    pub scenario: Scenario,
}

impl PropagationMatrix {
    pub fn n_p(&self) -> usize {
        self.entries.nrows()
    }

    pub fn n_a(&self) -> usize {
        self.entries.ncols()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// One row per (n, m) pair: index pair, complex entry, and its geometry.
    pub fn dump_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,m,re,im,r,theta_deg,phi_deg")?;
        for n in 0..self.n_p() {
            for m in 0..self.n_a() {
                let z = self.entries[[n, m]];
                let t = terms_between(&self.scenario.amaf, m, &self.scenario.ris, n)
                    .expect("terms were valid when the matrix was built");
                writeln!(w, "{n},{m},{},{},{},{},{}", z.re, z.im, t.r, t.theta.to_degrees(), t.phi.to_degrees())?;
            }
        }
        Ok(())
    }
}

pub fn build_t(scenario: &Scenario) -> Result<PropagationMatrix> {
    let entries = coupling_matrix(&scenario.amaf, &scenario.ris)?;
    Ok(PropagationMatrix { entries, scenario: scenario.clone() })
}
