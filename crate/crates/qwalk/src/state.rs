//! The joint walker-coin density matrix on a bounded position window.
//!
//! The window covers positions `x` in `[-t_max, t_max]`; the joint index is
//! position-major, `2 * (x + t_max) + c`, with coin index `c = 0` for `|+>`
//! and `c = 1` for `|->`. The window half-width is the planned horizon: the
//! walk's light cone (`|x| <= t`) never leaves it, so no resizing happens.
//! States are immutable snapshots; every operation returns a new value.

use ndarray::Array2;
use num_complex::Complex64;

use crate::numerics::{self, CMat};
use crate::{Error, Result};

/// A normalized coin state `a_plus |+> + a_minus |->`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinSpec {
    pub amplitude_plus: Complex64,
    pub amplitude_minus: Complex64,
}

impl CoinSpec {
    pub fn new(amplitude_plus: Complex64, amplitude_minus: Complex64) -> Result<Self> {
        let norm = amplitude_plus.norm_sqr() + amplitude_minus.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::UnnormalizedCoin { norm });
        }
        Ok(Self { amplitude_plus, amplitude_minus })
    }

    /// `(|+> + i|->)/sqrt(2)`: the balanced coin that keeps the walk
    /// left-right symmetric under the Hadamard flip.
    pub fn symmetric() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            amplitude_plus: Complex64::new(r, 0.0),
            amplitude_minus: Complex64::new(0.0, r),
        }
    }

    pub fn plus() -> Self {
        Self {
            amplitude_plus: Complex64::new(1.0, 0.0),
            amplitude_minus: Complex64::new(0.0, 0.0),
        }
    }

    pub fn minus() -> Self {
        Self {
            amplitude_plus: Complex64::new(0.0, 0.0),
            amplitude_minus: Complex64::new(1.0, 0.0),
        }
    }

    /// The 2x2 pure density matrix `|phi><phi|`.
    pub fn density(&self) -> CMat {
        let a = [self.amplitude_plus, self.amplitude_minus];
        let mut rho = CMat::zeros((2, 2));
        for i in 0..2 {
            for j in 0..2 {
                rho[(i, j)] = a[i] * a[j].conj();
            }
        }
        rho
    }
}

/// Probability vector over window positions, indexed from `x_min`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    pub x_min: i64,
    pub probabilities: Vec<f64>,
}

impl PositionDistribution {
    pub fn new(x_min: i64, probabilities: Vec<f64>) -> Result<Self> {
        let mut sum = 0.0;
        for &p in &probabilities {
            if p < -1e-12 {
                return Err(Error::InvalidProbabilities {
                    detail: format!("negative entry {p:.3e}"),
                });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidProbabilities {
                detail: format!("sum is {sum:.12}, expected 1"),
            });
        }
        Ok(Self { x_min, probabilities })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Probability at position `x`; zero outside the window.
    pub fn prob_at(&self, x: i64) -> f64 {
        let idx = x - self.x_min;
        if idx < 0 || idx as usize >= self.probabilities.len() {
            0.0
        } else {
            self.probabilities[idx as usize]
        }
    }

    pub fn iter_xp(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.x_min + i as i64, p))
    }

    /// Half the L1 distance to another distribution (total-variation
    /// distance); windows may differ.
    pub fn tv_distance(&self, other: &Self) -> f64 {
        let lo = self.x_min.min(other.x_min);
        let hi = (self.x_min + self.len() as i64).max(other.x_min + other.len() as i64);
        let mut acc = 0.0;
        for x in lo..hi {
            acc += (self.prob_at(x) - other.prob_at(x)).abs();
        }
        acc / 2.0
    }
}

/// Joint walker-coin density matrix at time `t` on the window
/// `[-t_max, t_max]`.
#[derive(Debug, Clone)]
pub struct JointState {
    t_max: usize,
    t: usize,
    rho: CMat,
}

impl JointState {
    /// `|0><0| (x) |phi><phi|` at `t = 0`.
    pub fn initial(coin: CoinSpec, t_max: usize) -> Result<Self> {
        if t_max < 1 {
            return Err(Error::InvalidConfig {
                detail: "window half-width must be >= 1".into(),
            });
        }
        // CoinSpec construction already guarantees normalization, but callers
        // may have built one long ago; re-check cheaply.
        let norm = coin.amplitude_plus.norm_sqr() + coin.amplitude_minus.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::UnnormalizedCoin { norm });
        }
        let dim = 2 * (2 * t_max + 1);
        let mut rho: CMat = Array2::zeros((dim, dim));
        let base = 2 * t_max; // index of (x = 0, coin = +)
        let amps = [coin.amplitude_plus, coin.amplitude_minus];
        for c in 0..2 {
            for cp in 0..2 {
                rho[(base + c, base + cp)] = amps[c] * amps[cp].conj();
            }
        }
        Ok(Self { t_max, t: 0, rho })
    }

    pub fn from_parts(t_max: usize, t: usize, rho: CMat) -> Result<Self> {
        let dim = 2 * (2 * t_max + 1);
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::InvalidConfig {
                detail: format!(
                    "density matrix is {}x{}, window expects {dim}x{dim}",
                    rho.nrows(),
                    rho.ncols()
                ),
            });
        }
        Ok(Self { t_max, t, rho })
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn rho(&self) -> &CMat {
        &self.rho
    }

    pub(crate) fn rho_mut(&mut self) -> &mut CMat {
        &mut self.rho
    }

    /// Flat index of `(x, coin)`.
    pub fn index(&self, x: i64, coin: usize) -> usize {
        debug_assert!(coin < 2);
        debug_assert!(x.unsigned_abs() as usize <= self.t_max);
        2 * (x + self.t_max as i64) as usize + coin
    }

    /// Number of window sites, `2 t_max + 1`.
    pub fn sites(&self) -> usize {
        2 * self.t_max + 1
    }

    /// `P(x) = sum_c <x,c| rho |x,c>`.
    pub fn position_distribution(&self) -> PositionDistribution {
        let sites = self.sites();
        let mut p = vec![0.0; sites];
        for (s, slot) in p.iter_mut().enumerate() {
            *slot = self.rho[(2 * s, 2 * s)].re + self.rho[(2 * s + 1, 2 * s + 1)].re;
        }
        PositionDistribution {
            x_min: -(self.t_max as i64),
            probabilities: p,
        }
    }

    /// Partial trace over the walker: the 2x2 reduced coin state.
    pub fn reduced_coin(&self) -> CMat {
        let mut rc = CMat::zeros((2, 2));
        for s in 0..self.sites() {
            for c in 0..2 {
                for cp in 0..2 {
                    rc[(c, cp)] += self.rho[(2 * s + c, 2 * s + cp)];
                }
            }
        }
        rc
    }

    /// Partial trace over the coin: the `(2 t_max + 1)`-dimensional reduced
    /// walker state.
    pub fn reduced_walker(&self) -> CMat {
        let sites = self.sites();
        let mut rw = CMat::zeros((sites, sites));
        for s in 0..sites {
            for sp in 0..sites {
                rw[(s, sp)] =
                    self.rho[(2 * s, 2 * sp)] + self.rho[(2 * s + 1, 2 * sp + 1)];
            }
        }
        rw
    }

    pub fn trace_defect(&self) -> f64 {
        let tr = numerics::trace(&self.rho);
        ((tr.re - 1.0).powi(2) + tr.im.powi(2)).sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        numerics::hermiticity_defect(&self.rho)
    }

    /// Smallest eigenvalue of the light-cone-cropped density matrix.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let cropped = self.cropped_rho();
        let vals = numerics::hermitian_eigenvalues(&cropped)?;
        Ok(vals.iter().copied().fold(f64::INFINITY, f64::min))
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += (self.rho[(i, j)] * self.rho[(j, i)]).re;
            }
        }
        acc
    }

    /// Indices whose diagonal weight is nonzero; structural zeros from the
    /// light cone and parity are exact, so this prunes aggressively.
    pub(crate) fn support_indices(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.rho[(i, i)].re > 1e-18)
            .collect()
    }

    /// Density matrix restricted to its support indices. PSD structure makes
    /// rows with zero diagonal identically zero, so the restriction loses
    /// nothing for spectra and entropies.
    pub(crate) fn cropped_rho(&self) -> CMat {
        crop(&self.rho, &self.support_indices())
    }

    /// Full-state validity check: trace one, Hermitian, PSD, light cone,
    /// parity.
    pub fn validate(&self) -> Result<()> {
        let td = self.trace_defect();
        if td > 1e-12 {
            return Err(Error::InvalidTrace {
                trace: numerics::trace(&self.rho).re,
            });
        }
        let hd = self.hermiticity_defect();
        if hd > 1e-12 {
            return Err(Error::NotHermitian { defect: hd });
        }
        let min = self.min_eigenvalue()?;
        if min < -1e-10 {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let p = self.position_distribution();
        for (x, prob) in p.iter_xp() {
            let outside_cone = x.unsigned_abs() as usize > self.t;
            let odd_parity = (x + self.t as i64).rem_euclid(2) == 1;
            if (outside_cone || odd_parity) && prob.abs() > 1e-14 {
                return Err(Error::InvalidConfig {
                    detail: format!(
                        "support violation at x = {x}, t = {}: P = {prob:.3e}",
                        self.t
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Restrict a matrix to the given row/column indices.
pub(crate) fn crop(m: &CMat, indices: &[usize]) -> CMat {
    let n = indices.len();
    let mut out = CMat::zeros((n, n));
    for (a, &i) in indices.iter().enumerate() {
        for (b, &j) in indices.iter().enumerate() {
            out[(a, b)] = m[(i, j)];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::von_neumann_entropy;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn initial_state_block() {
        let s = JointState::initial(CoinSpec::symmetric(), 2).unwrap();
        assert_eq!(s.dim(), 10);
        assert_eq!(s.t(), 0);
        // Only nonzero 2x2 block sits at x = x' = 0 and equals
        // (1/2) [[1, -i], [i, 1]] in (+, -) ordering.
        let b = s.index(0, 0);
        assert!((s.rho()[(b, b)] - c(0.5, 0.0)).norm() < 1e-15);
        assert!((s.rho()[(b, b + 1)] - c(0.0, -0.5)).norm() < 1e-15);
        assert!((s.rho()[(b + 1, b)] - c(0.0, 0.5)).norm() < 1e-15);
        assert!((s.rho()[(b + 1, b + 1)] - c(0.5, 0.0)).norm() < 1e-15);
        let total: f64 = s.rho().iter().map(|z| z.norm()).sum();
        assert!((total - 2.0).abs() < 1e-14, "mass outside the x=0 block");
        s.validate().unwrap();
    }

    #[test]
    fn initial_state_other_coins() {
        let s = JointState::initial(CoinSpec::plus(), 3).unwrap();
        let rc = s.reduced_coin();
        assert!((rc[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rc[(1, 1)].norm() < 1e-15);

        let r = std::f64::consts::FRAC_1_SQRT_2;
        let even = CoinSpec::new(c(r, 0.0), c(r, 0.0)).unwrap();
        let s = JointState::initial(even, 3).unwrap();
        let rc = s.reduced_coin();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rc[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_unnormalized_coin() {
        assert!(CoinSpec::new(c(1.0, 0.0), c(0.5, 0.0)).is_err());
    }

    #[test]
    fn initial_distribution_is_delta() {
        let s = JointState::initial(CoinSpec::symmetric(), 4).unwrap();
        let p = s.position_distribution();
        // |1/sqrt(2)|^2 lands one ulp off 1/2, so the origin weight is exact
        // only to machine precision; every other site is structurally zero.
        assert!((p.prob_at(0) - 1.0).abs() < 1e-15);
        for x in [-4i64, -3, -2, -1, 1, 2, 3, 4] {
            assert_eq!(p.prob_at(x), 0.0);
        }
        // Integer-amplitude coins place exactly unit weight.
        let s = JointState::initial(CoinSpec::plus(), 4).unwrap();
        assert_eq!(s.position_distribution().prob_at(0), 1.0);
    }

    #[test]
    fn reduced_walker_of_product_state() {
        let s = JointState::initial(CoinSpec::symmetric(), 2).unwrap();
        let rw = s.reduced_walker();
        assert!((rw[(2, 2)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((von_neumann_entropy(&rw).unwrap()).abs() < 1e-12);
        // Diagonal of the reduced walker equals the position distribution.
        let p = s.position_distribution();
        for i in 0..s.sites() {
            assert!((rw[(i, i)].re - p.probabilities[i]).abs() < 1e-15);
        }
    }

    #[test]
    fn tv_distance_basics() {
        let a = PositionDistribution::new(-1, vec![0.5, 0.0, 0.5]).unwrap();
        let b = PositionDistribution::new(-1, vec![0.0, 1.0, 0.0]).unwrap();
        assert!((a.tv_distance(&b) - 1.0).abs() < 1e-15);
        assert_eq!(a.tv_distance(&a), 0.0);
    }

    #[test]
    fn distribution_validation() {
        assert!(PositionDistribution::new(0, vec![0.5, 0.6]).is_err());
        assert!(PositionDistribution::new(0, vec![-0.1, 1.1]).is_err());
    }
}
