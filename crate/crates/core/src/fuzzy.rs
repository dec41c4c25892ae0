//! The five fuzzy spatial-relation memberships.
//!
//! An ordered region pair is described by three raw descriptors (angle,
//! boundary gap, bordered-perimeter ratio) which map to five membership
//! degrees: ABOVE, BELOW and BESIDE partition the directional relation,
//! NEAR is a decreasing sigmoid in the gap, and SUR (surrounded-by) is an
//! increasing sigmoid in the perimeter ratio. The five values together form
//! the relation vector used by the contextual energy.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::scene::PairDescriptors;

/// Sigmoid shape parameters for the distance and topology memberships.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzyParams {
    /// Crispness of the NEAR sigmoid.
    pub alpha1: f64,
    /// Gap cutoff separating near from far.
    pub beta1: f64,
    /// Crispness of the SUR sigmoid.
    pub alpha2: f64,
    /// Perimeter-ratio cutoff for surrounded-by.
    pub beta2: f64,
}

impl Default for FuzzyParams {
    fn default() -> Self {
        Self {
            alpha1: 20.0,
            beta1: 0.25,
            alpha2: 10.0,
            beta2: 0.6,
        }
    }
}

impl FuzzyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha1 > 0.0) {
            return Err(Error::BadParams(format!("alpha1 must be > 0, got {}", self.alpha1)));
        }
        if !(self.alpha2 > 0.0) {
            return Err(Error::BadParams(format!("alpha2 must be > 0, got {}", self.alpha2)));
        }
        if !(0.0..=1.0).contains(&self.beta1) {
            return Err(Error::BadParams(format!("beta1 must be in [0,1], got {}", self.beta1)));
        }
        if !(0.0..=1.0).contains(&self.beta2) {
            return Err(Error::BadParams(format!("beta2 must be in [0,1], got {}", self.beta2)));
        }
        Ok(())
    }
}

/// Dominant directional relation class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Above,
    Below,
    Beside,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Above => "ABOVE",
            Direction::Below => "BELOW",
            Direction::Beside => "BESIDE",
        })
    }
}

/// Directional memberships `(above, below, beside)` for an angle in
/// (-pi, pi]. The active half-plane membership is sin^2, beside is cos^2,
/// so the active one and beside always sum to 1. The boundary angles 0 and
/// pi belong to neither half-plane and yield above = below = 0 exactly.
pub fn directional_memberships(theta: f64) -> (f64, f64, f64) {
    let sin_sq = theta.sin().powi(2);
    let above = if theta > 0.0 && theta < PI { sin_sq } else { 0.0 };
    let below = if theta > -PI && theta < 0.0 { sin_sq } else { 0.0 };
    let beside = theta.cos().powi(2);
    (above, below, beside)
}

/// Distance membership: 1 / (1 + e^{alpha1 (d - beta1)}), strictly
/// decreasing in the gap, 0.5 exactly at the cutoff.
pub fn near_membership(d: f64, params: &FuzzyParams) -> f64 {
    1.0 / (1.0 + (params.alpha1 * (d - params.beta1)).exp())
}

/// Topology membership: 1 / (1 + e^{-alpha2 (rho - beta2)}), strictly
/// increasing in the bordered-perimeter ratio.
pub fn surrounded_membership(rho: f64, params: &FuzzyParams) -> f64 {
    1.0 / (1.0 + (-params.alpha2 * (rho - params.beta2)).exp())
}

/// The five fuzzy spatial memberships of an ordered region pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelationVector {
    pub mu_above: f64,
    pub mu_below: f64,
    pub mu_beside: f64,
    pub mu_near: f64,
    pub mu_sur: f64,
    /// Argmax of the directional memberships; ties resolved in the fixed
    /// order ABOVE < BELOW < BESIDE.
    pub dominant: Direction,
    pub descriptors: PairDescriptors,
}

impl RelationVector {
    /// The memberships as a 5-vector in the fixed order
    /// [above, below, beside, near, sur].
    pub fn memberships(&self) -> [f64; 5] {
        [
            self.mu_above,
            self.mu_below,
            self.mu_beside,
            self.mu_near,
            self.mu_sur,
        ]
    }
}

/// Maximum-membership argmax over the directional classes; exact ties keep
/// the earliest of ABOVE, BELOW, BESIDE.
pub fn dominant_direction(mu_above: f64, mu_below: f64, mu_beside: f64) -> Direction {
    let mut best = (mu_above, Direction::Above);
    for cand in [(mu_below, Direction::Below), (mu_beside, Direction::Beside)] {
        if cand.0 > best.0 {
            best = cand;
        }
    }
    best.1
}

/// Composes the three membership functions into a relation vector.
pub fn relation_vector(desc: PairDescriptors, params: &FuzzyParams) -> RelationVector {
    let (mu_above, mu_below, mu_beside) = directional_memberships(desc.theta);
    RelationVector {
        mu_above,
        mu_below,
        mu_beside,
        mu_near: near_membership(desc.d, params),
        mu_sur: surrounded_membership(desc.rho, params),
        dominant: dominant_direction(mu_above, mu_below, mu_beside),
        descriptors: desc,
    }
}

/// Euclidean distance between two 5-component membership vectors.
pub fn membership_distance(a: &[f64; 5], b: &[f64; 5]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
