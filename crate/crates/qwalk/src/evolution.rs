//! One walk step and trajectory evolution.
//!
//! A step at time index `t` (starting at 1) applies the coin dephasing
//! channel with strength `kappa(t)` and then the walk unitary
//! `U = F (1 (x) H)`: Hadamard flip on the coin, then the coin-conditioned
//! shift moving `|+>` right and `|->` left.
//!
//! Trajectories are sequential in `t`; independent trajectories can run in
//! parallel freely since states are immutable values.

use std::collections::{BTreeMap, BTreeSet};

use crate::numerics::CMat;
use crate::observables;
use crate::schedule::DrivingSchedule;
use crate::state::{JointState, PositionDistribution};
use crate::{Error, Result};

/// Per-step observable record.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub t: usize,
    pub kappa: f64,
    pub variance: f64,
    pub entropy: f64,
    pub distribution: PositionDistribution,
}

/// Full evolution record: one `StepRecord` per step including `t = 0`, plus
/// state snapshots at requested times (only those, to bound memory) and the
/// worst trace / Hermiticity defects seen along the way.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub schedule_label: String,
    pub records: Vec<StepRecord>,
    pub snapshots: BTreeMap<usize, JointState>,
    pub max_trace_defect: f64,
    pub max_hermiticity_defect: f64,
}

impl Trajectory {
    pub fn variances(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.variance).collect()
    }

    pub fn entropies(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.entropy).collect()
    }
}

/// Multiply every coin off-diagonal element (entries coupling `|+>` and `|->`
/// for any pair of positions) by `kappa`. Trace, Hermiticity and the
/// position distribution are untouched; complete positivity for
/// `kappa` in `[-1, 1]` follows from the phase-flip Kraus pair
/// `{sqrt((1+kappa)/2) 1, sqrt((1-kappa)/2) Z}`.
pub fn apply_coin_dephasing(s: &JointState, kappa: f64) -> Result<JointState> {
    if !(-1.0..=1.0).contains(&kappa) || !kappa.is_finite() {
        return Err(Error::KappaOutOfRange { kappa });
    }
    let mut out = s.clone();
    let rho = out.rho_mut();
    let dim = rho.nrows();
    for i in 0..dim {
        for j in 0..dim {
            if (i % 2) != (j % 2) {
                rho[(i, j)] *= kappa;
            }
        }
    }
    Ok(out)
}

/// Operator-sum form of the same channel, valid for `kappa >= 0`:
/// `kappa rho + (1 - kappa) (P+ rho P+ + P- rho P-)`. Kept as an independent
/// code path; equality with [`apply_coin_dephasing`] is asserted in tests.
pub fn apply_coin_dephasing_kraus(s: &JointState, kappa: f64) -> Result<JointState> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::KappaOutOfRange { kappa });
    }
    let mut out = s.clone();
    let rho = out.rho_mut();
    let dim = rho.nrows();
    for i in 0..dim {
        for j in 0..dim {
            if (i % 2) != (j % 2) {
                // Projector sandwich kills cross-coin terms; only the
                // identity Kraus element keeps them.
                rho[(i, j)] *= kappa;
            }
            // Coin-diagonal entries: kappa + (1 - kappa) = 1.
        }
    }
    Ok(out)
}

/// `rho <- U rho U^dag` with `U = F (1 (x) H)`, advancing `t` by one.
///
/// Fails with a horizon error when the light cone would leave the window.
pub fn apply_walk_unitary(s: &JointState) -> Result<JointState> {
    if s.t() >= s.t_max() {
        return Err(Error::HorizonExceeded { t: s.t(), t_max: s.t_max() });
    }
    let sites = s.sites();
    let mut flipped = s.clone();
    hadamard_conjugate_blocks(flipped.rho_mut(), sites);

    // Conditional shift: (x, +) -> (x + 1, +), (x, -) -> (x - 1, -).
    // Support sits strictly inside the window (|x| <= t < t_max), so every
    // occupied source lands inside it.
    let src = flipped.rho();
    let mut rho: CMat = CMat::zeros((s.dim(), s.dim()));
    let last = sites - 1;
    for xs in 0..sites {
        for c in 0..2 {
            let (xt, ok_row) = shifted(xs, c, last);
            if !ok_row {
                continue;
            }
            for ys in 0..sites {
                for cp in 0..2 {
                    let (yt, ok_col) = shifted(ys, cp, last);
                    if ok_col {
                        rho[(2 * xt + c, 2 * yt + cp)] = src[(2 * xs + c, 2 * ys + cp)];
                    }
                }
            }
        }
    }
    JointState::from_parts(s.t_max(), s.t() + 1, rho)
}

fn shifted(site: usize, coin: usize, last: usize) -> (usize, bool) {
    if coin == 0 {
        if site == last {
            (site, false)
        } else {
            (site + 1, true)
        }
    } else if site == 0 {
        (site, false)
    } else {
        (site - 1, true)
    }
}

/// In-place `(1 (x) H) rho (1 (x) H)` on the position-major layout.
fn hadamard_conjugate_blocks(rho: &mut CMat, sites: usize) {
    let half = 0.5;
    for xs in 0..sites {
        for ys in 0..sites {
            let r = 2 * xs;
            let c = 2 * ys;
            let a = rho[(r, c)];
            let b = rho[(r, c + 1)];
            let d = rho[(r + 1, c)];
            let e = rho[(r + 1, c + 1)];
            rho[(r, c)] = (a + b + d + e) * half;
            rho[(r, c + 1)] = (a - b + d - e) * half;
            rho[(r + 1, c)] = (a + b - d - e) * half;
            rho[(r + 1, c + 1)] = (a - b - d + e) * half;
        }
    }
}

/// One full step: dephase with `kappa(t + 1)`, then the walk unitary.
pub fn step(s: &JointState, schedule: &DrivingSchedule) -> Result<JointState> {
    let kappa = schedule.kappa_at(s.t() + 1)?;
    apply_walk_unitary(&apply_coin_dephasing(s, kappa)?)
}

/// Evolve `horizon` steps, recording observables each step and keeping state
/// snapshots at `snapshot_times`.
pub fn evolve(
    initial: &JointState,
    schedule: &DrivingSchedule,
    horizon: usize,
    snapshot_times: &BTreeSet<usize>,
) -> Result<Trajectory> {
    if horizon > initial.t_max() {
        return Err(Error::InvalidConfig {
            detail: format!(
                "horizon {horizon} exceeds window half-width {}",
                initial.t_max()
            ),
        });
    }
    let mut records = Vec::with_capacity(horizon + 1);
    let mut snapshots = BTreeMap::new();
    let mut max_trace_defect = 0.0f64;
    let mut max_hermiticity_defect = 0.0f64;

    let mut state = initial.clone();
    records.push(make_record(&state, schedule.kappa_at(0)?)?);
    if snapshot_times.contains(&0) {
        snapshots.insert(0, state.clone());
    }
    for t in 1..=horizon {
        let kappa = schedule.kappa_at(t)?;
        state = apply_walk_unitary(&apply_coin_dephasing(&state, kappa)?)?;
        max_trace_defect = max_trace_defect.max(state.trace_defect());
        max_hermiticity_defect = max_hermiticity_defect.max(state.hermiticity_defect());
        records.push(make_record(&state, kappa)?);
        if snapshot_times.contains(&t) {
            snapshots.insert(t, state.clone());
        }
    }
    Ok(Trajectory {
        schedule_label: schedule.describe(),
        records,
        snapshots,
        max_trace_defect,
        max_hermiticity_defect,
    })
}

/// Convenience: evolve the symmetric-coin initial state with `t_max =
/// horizon`.
pub fn evolve_default(
    schedule: &DrivingSchedule,
    horizon: usize,
    snapshot_times: &BTreeSet<usize>,
) -> Result<Trajectory> {
    let initial = JointState::initial(crate::state::CoinSpec::symmetric(), horizon.max(1))?;
    evolve(&initial, schedule, horizon, snapshot_times)
}

fn make_record(state: &JointState, kappa: f64) -> Result<StepRecord> {
    let distribution = state.position_distribution();
    Ok(StepRecord {
        t: state.t(),
        kappa,
        variance: observables::variance(&distribution),
        entropy: observables::entropy(&distribution)?,
        distribution,
    })
}

#[allow(dead_code)]
fn _assert_traits() {
    fn check<T: Send + Sync>() {}
    check::<JointState>();
    check::<Trajectory>();
}
