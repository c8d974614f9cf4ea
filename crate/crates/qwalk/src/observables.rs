//! Scalar diagnostics of a position distribution: moments, variance, spread,
//! Shannon entropy, and the mirror-symmetry defect.

use crate::numerics;
use crate::state::PositionDistribution;
use crate::Result;

/// First and second moments with the derived variance and spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub m1: f64,
    pub m2: f64,
    pub variance: f64,
    pub spread: f64,
}

/// `sum_x x^m P(x)`.
pub fn moment(p: &PositionDistribution, m: u32) -> f64 {
    p.iter_xp()
        .map(|(x, prob)| (x as f64).powi(m as i32) * prob)
        .sum()
}

pub fn moments(p: &PositionDistribution) -> MomentSet {
    let m1 = moment(p, 1);
    let m2 = moment(p, 2);
    let variance = m2 - m1 * m1;
    MomentSet {
        m1,
        m2,
        variance,
        spread: variance.max(0.0).sqrt(),
    }
}

/// `V = <x^2> - <x>^2`, in lattice-site^2 units.
pub fn variance(p: &PositionDistribution) -> f64 {
    moments(p).variance
}

/// `max_x |P(x) - P(-x)|`.
pub fn symmetry_defect(p: &PositionDistribution) -> f64 {
    p.iter_xp()
        .map(|(x, prob)| (prob - p.prob_at(-x)).abs())
        .fold(0.0, f64::max)
}

/// Shannon entropy of the distribution in bits, zero entries contributing
/// zero, so parity structure does not affect the value.
pub fn entropy(p: &PositionDistribution) -> Result<f64> {
    numerics::shannon_entropy(&p.probabilities)
}
