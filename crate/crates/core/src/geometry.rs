//! Element layouts and feed scenarios.
//!
//! Everything lives in the x–z plane: x runs along the RIS, z points from the
//! RIS toward the feeder. Distances are in half-wavelength units, so the
//! default element spacing is 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default inter-element spacing (λ/2).
pub const DEFAULT_SPACING: f64 = 1.0;

const ORTHO_TOL: f64 = 1e-12;

/// A point or direction in the x–z plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub z: f64,
}

impl Vec2 {
    pub const fn new(x: f64, z: f64) -> Self {
        Vec2 { x, z }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.z * other.z
    }

    /// z-component of the 3-D cross product (signed area).
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.z - self.z * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.z)
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.z / n)
    }

    /// Counter-clockwise rotation by `angle` radians.
    pub fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * self.x - s * self.z, s * self.x + c * self.z)
    }

    /// Unsigned angle in [0, π] between two non-zero vectors.
    pub fn angle_to(self, other: Vec2) -> f64 {
        self.cross(other).abs().atan2(self.dot(other))
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.z + o.z)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.z - o.z)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.z)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.z)
    }
}

/// A uniform linear array.
///
/// `boresights` holds the per-element pattern reference direction.
/// `broadside` is the array normal; the two coincide except for a tilted
/// feeder under [`TiltModel::PositionsOnly`].
#[derive(Debug, Clone, PartialEq)]
pub struct ElementLayout {
    pub positions: Vec<Vec2>,
    pub boresights: Vec<Vec2>,
    pub axis: Vec2,
    pub broadside: Vec2,
    pub spacing: f64,
}

impl ElementLayout {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn centroid(&self) -> Vec2 {
        let n = self.positions.len() as f64;
        let sum = self.positions.iter().fold(Vec2::default(), |acc, &p| acc + p);
        (1.0 / n) * sum
    }

    /// Rotate the whole array about its centroid. Element boresights are
    /// rotated too only when `rotate_elements` is set.
    fn rotate_about_centroid(&mut self, angle: f64, rotate_elements: bool) {
        let c = self.centroid();
        for p in &mut self.positions {
            *p = c + (*p - c).rotated(angle);
        }
        self.axis = self.axis.rotated(angle);
        self.broadside = self.broadside.rotated(angle);
        if rotate_elements {
            for b in &mut self.boresights {
                *b = b.rotated(angle);
            }
        }
    }
}

/// Places `n` elements symmetrically about `centroid` with unit spacing.
pub fn build_linear_array(n: usize, centroid: Vec2, axis: Vec2, boresight: Vec2) -> Result<ElementLayout> {
    build_linear_array_spaced(n, centroid, axis, boresight, DEFAULT_SPACING)
}

pub fn build_linear_array_spaced(
    n: usize,
    centroid: Vec2,
    axis: Vec2,
    boresight: Vec2,
    spacing: f64,
) -> Result<ElementLayout> {
    if n == 0 {
        return Err(Error::invalid("n", "array needs at least one element"));
    }
    if !(spacing > 0.0 && spacing.is_finite()) {
        return Err(Error::invalid("spacing", format!("must be positive, got {spacing}")));
    }
    for (name, v) in [("axis", axis), ("boresight", boresight)] {
        if (v.norm() - 1.0).abs() > ORTHO_TOL {
            return Err(Error::invalid(name, format!("not a unit vector: {v:?}")));
        }
    }
    if axis.dot(boresight).abs() > ORTHO_TOL {
        return Err(Error::NotOrthogonal { axis: [axis.x, axis.z], boresight: [boresight.x, boresight.z] });
    }
    let mid = (n as f64 - 1.0) / 2.0;
    let positions = (0..n).map(|k| centroid + ((k as f64 - mid) * spacing) * axis).collect();
    Ok(ElementLayout { positions, boresights: vec![boresight; n], axis, broadside: boresight, spacing })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeedStyle {
    Center,
    End,
}

impl fmt::Display for FeedStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeedStyle::Center => "center",
            FeedStyle::End => "end",
        })
    }
}

/// How a tilted end feeder is rotated.
///
/// `PositionsOnly` turns the element positions (and so the array broadside)
/// toward the RIS centroid but leaves the element pattern reference along the
/// untilted normal. `Rigid` turns the element patterns with the array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TiltModel {
    #[default]
    PositionsOnly,
    Rigid,
}

impl fmt::Display for TiltModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TiltModel::PositionsOnly => "positions-only",
            TiltModel::Rigid => "rigid",
        })
    }
}

/// A complete feeder + surface arrangement.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub amaf: ElementLayout,
    pub ris: ElementLayout,
    pub feed_style: FeedStyle,
    pub f: f64,
    pub tilted: bool,
    pub tilt_model: TiltModel,
}

impl Scenario {
    pub fn n_a(&self) -> usize {
        self.amaf.len()
    }

    pub fn n_p(&self) -> usize {
        self.ris.len()
    }

    /// RIS aperture size D = N_p · spacing.
    pub fn aperture(&self) -> f64 {
        self.ris.len() as f64 * self.ris.spacing
    }

    pub fn f_over_d(&self) -> f64 {
        self.f / self.aperture()
    }

    /// Rotation applied to the feeder, radians (0 unless tilted).
    pub fn tilt_angle(&self) -> f64 {
        if self.tilted {
            self.amaf.broadside.angle_to(Vec2::new(0.0, -1.0))
        } else {
            0.0
        }
    }

    pub fn spec(&self) -> ScenarioSpec {
        ScenarioSpec {
            n_a: self.n_a(),
            n_p: self.n_p(),
            f: self.f,
            feed: self.feed_style,
            tilted: self.tilted,
            tilt_model: self.tilt_model,
        }
    }
}

/// Plain parameters from which a [`Scenario`] is built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub n_a: usize,
    pub n_p: usize,
    pub f: f64,
    pub feed: FeedStyle,
    #[serde(default)]
    pub tilted: bool,
    #[serde(default)]
    pub tilt_model: TiltModel,
}

impl ScenarioSpec {
    pub fn center(n_a: usize, n_p: usize, f: f64) -> Self {
        ScenarioSpec { n_a, n_p, f, feed: FeedStyle::Center, tilted: false, tilt_model: TiltModel::default() }
    }

    pub fn end(n_a: usize, n_p: usize, f: f64, tilted: bool) -> Self {
        ScenarioSpec { n_a, n_p, f, feed: FeedStyle::End, tilted, tilt_model: TiltModel::default() }
    }

    pub fn with_tilt_model(mut self, model: TiltModel) -> Self {
        self.tilt_model = model;
        self
    }

    pub fn build(&self) -> Result<Scenario> {
        match self.feed {
            FeedStyle::Center => make_center_feed(self.n_a, self.n_p, self.f),
            FeedStyle::End => make_end_feed_with(self.n_a, self.n_p, self.f, self.tilted, self.tilt_model),
        }
    }
}

impl fmt::Display for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} feed N_a={} N_p={} f={}", self.feed, self.n_a, self.n_p, self.f)?;
        if self.tilted {
            write!(f, " tilted ({})", self.tilt_model)?;
        }
        Ok(())
    }
}

fn check_counts(n_a: usize, n_p: usize, f: f64) -> Result<()> {
    if n_a == 0 {
        return Err(Error::invalid("n_a", "must be at least 1"));
    }
    if n_p == 0 {
        return Err(Error::invalid("n_p", "must be at least 1"));
    }
    if !(f > 0.0 && f.is_finite()) {
        return Err(Error::invalid("f", format!("must be positive and finite, got {f}")));
    }
    Ok(())
}

fn ris_layout(n_p: usize) -> Result<ElementLayout> {
    build_linear_array(n_p, Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0))
}

/// Feeder centred above the RIS at height `f`, the two arrays facing each other.
pub fn make_center_feed(n_a: usize, n_p: usize, f: f64) -> Result<Scenario> {
    check_counts(n_a, n_p, f)?;
    let ris = ris_layout(n_p)?;
    let amaf = build_linear_array(n_a, Vec2::new(0.0, f), Vec2::new(1.0, 0.0), Vec2::new(0.0, -1.0))?;
    Ok(Scenario { amaf, ris, feed_style: FeedStyle::Center, f, tilted: false, tilt_model: TiltModel::default() })
}

/// Lateral position of an end feeder's centroid: above the first RIS element.
pub fn end_feed_anchor_x(n_p: usize, spacing: f64) -> f64 {
    -(n_p as f64 - 1.0) / 2.0 * spacing
}

pub fn make_end_feed(n_a: usize, n_p: usize, f: f64, tilted: bool) -> Result<Scenario> {
    make_end_feed_with(n_a, n_p, f, tilted, TiltModel::default())
}

/// Feeder at height `f` above the edge of the RIS. When `tilted`, the feeder is
/// turned about its centroid by atan2(offset, f) so its broadside meets the
/// RIS centroid.
pub fn make_end_feed_with(n_a: usize, n_p: usize, f: f64, tilted: bool, tilt_model: TiltModel) -> Result<Scenario> {
    check_counts(n_a, n_p, f)?;
    let ris = ris_layout(n_p)?;
    let anchor = Vec2::new(end_feed_anchor_x(n_p, ris.spacing), f);
    let mut amaf = build_linear_array(n_a, anchor, Vec2::new(1.0, 0.0), Vec2::new(0.0, -1.0))?;
    if tilted {
        let offset = ris.centroid() - anchor;
        // counter-clockwise turns (0, -1) toward +x
        let alpha = offset.x.atan2(-offset.z);
        amaf.rotate_about_centroid(alpha, tilt_model == TiltModel::Rigid);
    }
    Ok(Scenario { amaf, ris, feed_style: FeedStyle::End, f, tilted, tilt_model })
}
