//! Scenario grids, convergence studies and exhaustive focal-distance scans.
//!
//! Grid points are evaluated in parallel and sorted afterwards, so output
//! order never depends on scheduling.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};

use log::debug;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coupling::build_t;
use crate::error::{Error, Result};
use crate::geometry::{FeedStyle, ScenarioSpec, TiltModel};
use crate::modes::{self, db, mode_metrics, svd_modes, BeamLabel, ModeMetrics};
use crate::patterns::{self, AngleGrid, Cophase};

/// One evaluated (scenario, beam) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub scenario: ScenarioSpec,
    pub beam: BeamLabel,
    #[serde(flatten)]
    pub metrics: ModeMetrics,
    /// ‖T·b‖² for this record's beam, dB.
    pub beam_power_db: f64,
    /// Peak sidelobe of the co-phased RIS pattern, when requested.
    pub sidelobe_db: Option<f64>,
}

impl SweepRecord {
    fn sort_key(&self, other: &Self) -> Ordering {
        let a = &self.scenario;
        let b = &other.scenario;
        a.n_p
            .cmp(&b.n_p)
            .then(a.f.total_cmp(&b.f))
            .then(a.feed.cmp(&b.feed))
            .then(a.tilted.cmp(&b.tilted))
            .then((self.beam as u8).cmp(&(other.beam as u8)))
    }

    pub fn feed_label(&self) -> &'static str {
        match (self.scenario.feed, self.scenario.tilted) {
            (FeedStyle::Center, _) => "center",
            (FeedStyle::End, false) => "end",
            (FeedStyle::End, true) => "end-tilted",
        }
    }
}

/// A Cartesian grid over N_p and f for one feed arrangement.
#[derive(Debug, Clone)]
pub struct Grid {
    pub n_a: usize,
    pub n_p: Vec<usize>,
    pub f: Vec<f64>,
    pub feed: FeedStyle,
    pub tilted: bool,
    pub tilt_model: TiltModel,
    pub beams: Vec<BeamLabel>,
    /// Evaluate RIS sidelobe levels on this grid.
    pub sidelobes: Option<AngleGrid>,
}

impl Grid {
    pub fn new(n_a: usize, n_p: Vec<usize>, f: Vec<f64>, feed: FeedStyle) -> Self {
        Grid {
            n_a,
            n_p,
            f,
            feed,
            tilted: false,
            tilt_model: TiltModel::default(),
            beams: vec![BeamLabel::Pem],
            sidelobes: None,
        }
    }

    fn points(&self) -> Vec<ScenarioSpec> {
        let mut pts = Vec::with_capacity(self.n_p.len() * self.f.len());
        for &n_p in &self.n_p {
            for &f in &self.f {
                pts.push(ScenarioSpec {
                    n_a: self.n_a,
                    n_p,
                    f,
                    feed: self.feed,
                    tilted: self.tilted && self.feed == FeedStyle::End,
                    tilt_model: self.tilt_model,
                });
            }
        }
        pts
    }

    pub fn run(&self) -> Result<Vec<SweepRecord>> {
        if self.n_p.is_empty() {
            return Err(Error::Empty("N_p list"));
        }
        if self.f.is_empty() {
            return Err(Error::Empty("f list"));
        }
        if self.beams.is_empty() || self.beams.contains(&BeamLabel::Custom) {
            return Err(Error::invalid("beam", "grid beams must be pem or nonpem"));
        }
        let per_point: Vec<Vec<SweepRecord>> = self
            .points()
            .into_par_iter()
            .map(|spec| {
                evaluate(&spec, &self.beams, self.sidelobes.as_ref())
                    .map_err(|e| Error::GridPoint { point: spec.to_string(), source: Box::new(e) })
            })
            .collect::<Result<_>>()?;
        let mut records: Vec<SweepRecord> = per_point.into_iter().flatten().collect();
        records.sort_by(|a, b| a.sort_key(b));
        Ok(records)
    }
}

fn evaluate(spec: &ScenarioSpec, beams: &[BeamLabel], sidelobes: Option<&AngleGrid>) -> Result<Vec<SweepRecord>> {
    let scenario = spec.build()?;
    let t = build_t(&scenario)?;
    let analysis = svd_modes(&t)?;
    let metrics = mode_metrics(&analysis, &scenario);
    beams
        .iter()
        .map(|&label| {
            let b = analysis.beam(label).expect("grid beams are pem or nonpem");
            let sidelobe_db = match sidelobes {
                Some(grid) => patterns::sidelobe_level(&patterns::ris_pattern(&t, &b, grid, Cophase::Broadside)?)?,
                None => None,
            };
            Ok(SweepRecord {
                scenario: *spec,
                beam: label,
                metrics: metrics.clone(),
                beam_power_db: db(modes::power_transfer(&t, &b)?),
                sidelobe_db,
            })
        })
        .collect()
}

/// PEM records for every (N_p, f) pair.
pub fn run_grid(n_a: usize, n_p_list: &[usize], f_list: &[f64], feed_style: FeedStyle) -> Result<Vec<SweepRecord>> {
    Grid::new(n_a, n_p_list.to_vec(), f_list.to_vec(), feed_style).run()
}

/// Table CSV: one row per record, singular values as sigma1_db..sigmaN_db.
pub fn write_table_csv<W: Write>(records: &[SweepRecord], mut w: W) -> io::Result<()> {
    let n_sigma = records.iter().map(|r| r.metrics.sigma_sq_db.len()).max().unwrap_or(0);
    write!(w, "sl_no,n_a,n_p,f,feed,beam")?;
    for i in 1..=n_sigma {
        write!(w, ",sigma{i}_db")?;
    }
    writeln!(w, ",sum_db,cond,l_iso_db,f_over_d")?;
    for (i, r) in records.iter().enumerate() {
        write!(w, "{},{},{},{},{},{}", i + 1, r.scenario.n_a, r.scenario.n_p, r.scenario.f, r.feed_label(), r.beam)?;
        for k in 0..n_sigma {
            match r.metrics.sigma_sq_db.get(k) {
                Some(v) => write!(w, ",{v}")?,
                None => write!(w, ",")?,
            }
        }
        let m = &r.metrics;
        writeln!(w, ",{},{},{},{}", m.sum_db, m.cond, m.l_iso_db, m.f_over_d)?;
    }
    Ok(())
}

/// Σσᵢ² (dB) against N_p for a centre feed at fixed f.
pub fn convergence_study(n_a: usize, f: f64, n_p_list: &[usize]) -> Result<Vec<(usize, f64)>> {
    let records = run_grid(n_a, n_p_list, &[f], FeedStyle::Center)?;
    Ok(records.iter().map(|r| (r.scenario.n_p, r.metrics.sum_db)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Maximize ‖T·b‖².
    MaxPower,
    /// Minimize the co-phased RIS peak sidelobe level.
    #[default]
    MinSll,
    /// Minimize the coefficient of variation of |T·b|.
    MinProfileVariation,
}

impl Objective {
    fn better(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Objective::MaxPower => candidate > incumbent,
            Objective::MinSll | Objective::MinProfileVariation => candidate < incumbent,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::MaxPower => "max_power",
            Objective::MinSll => "min_sll",
            Objective::MinProfileVariation => "min_profile_variation",
        })
    }
}

/// Inclusive range start, start+step, … ≤ stop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::invalid("f_step", format!("must be positive, got {step}")));
        }
        if !(start > 0.0 && start.is_finite() && stop.is_finite()) || stop < start {
            return Err(Error::Empty("f range"));
        }
        Ok(FRange { start, stop, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

/// Everything but f fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Family {
    pub n_a: usize,
    pub n_p: usize,
    pub feed: FeedStyle,
    pub tilted: bool,
    pub tilt_model: TiltModel,
    pub beam: BeamLabel,
    pub grid: AngleGrid,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub f: f64,
    /// `None` where the objective is undefined.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub objective: Objective,
    pub best_f: f64,
    pub best_value: f64,
    pub trace: Vec<TracePoint>,
}

impl Optimum {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "f,{},selected", self.objective)?;
        for p in &self.trace {
            let sel = u8::from(p.f == self.best_f);
            match p.value {
                Some(v) => writeln!(w, "{},{v},{sel}", p.f)?,
                None => writeln!(w, "{},,{sel}", p.f)?,
            }
        }
        Ok(())
    }
}

fn objective_at(family: &Family, f: f64, objective: Objective) -> Result<Option<f64>> {
    let spec = ScenarioSpec {
        n_a: family.n_a,
        n_p: family.n_p,
        f,
        feed: family.feed,
        tilted: family.tilted,
        tilt_model: family.tilt_model,
    };
    let t = build_t(&spec.build()?)?;
    let analysis = svd_modes(&t)?;
    let b = analysis.beam(family.beam).ok_or_else(|| Error::invalid("beam", "scan beam must be pem or nonpem"))?;
    Ok(match objective {
        Objective::MaxPower => Some(db(modes::power_transfer(&t, &b)?)),
        Objective::MinSll => {
            patterns::sidelobe_level(&patterns::ris_pattern(&t, &b, &family.grid, Cophase::Broadside)?)?
        }
        Objective::MinProfileVariation => {
            Some(patterns::ris_excitation(&t, &b)?.coefficient_of_variation()).filter(|v| v.is_finite())
        }
    })
}

/// Exhaustive scan over `range`; ties go to the smaller f.
pub fn optimize_f(family: &Family, range: &FRange, objective: Objective) -> Result<Optimum> {
    let trace: Vec<TracePoint> = range
        .values()
        .into_par_iter()
        .map(|f| {
            let value = objective_at(family, f, objective)
                .map_err(|e| Error::GridPoint { point: format!("f={f}"), source: Box::new(e) })?;
            Ok(TracePoint { f, value })
        })
        .collect::<Result<_>>()?;

    let mut best: Option<(f64, f64)> = None;
    for p in &trace {
        match p.value {
            None => debug!("{objective} undefined at f={}, skipped", p.f),
            Some(v) => {
                if best.is_none_or(|(_, b)| objective.better(v, b)) {
                    best = Some((p.f, v));
                }
            }
        }
    }
    let (best_f, best_value) = best.ok_or(Error::Empty("objective trace"))?;
    Ok(Optimum { objective, best_f, best_value, trace })
}
