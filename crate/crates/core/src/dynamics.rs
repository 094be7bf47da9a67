//! Replicator-dynamics simulation of multi-mutant invasions.
//!
//! The population is a mix of strains, each playing a fixed (possibly
//! mixed) strategy; shares evolve by `ẋ_a = x_a ((Mx)_a − xᵀMx)` where
//! `M_ab = u(s^a, s^b)` is the restricted game between the strains.
//! Floats enter the toolkit only here: the restricted game is built from
//! exact payoffs and converted once, and the integrator is a fixed-step
//! classical fourth-order scheme chosen for determinism.

use std::fmt;
use std::io::Write;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::game::{MixedStrategy, SymmetricGame};

pub const DEFAULT_DT: f64 = 0.01;
pub const DEFAULT_T_END: f64 = 200.0;
/// An order below typical integrator drift at the default step, an order
/// above machine noise.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-4;
/// Steps between recorded trajectory rows.
pub const OUTPUT_STRIDE: usize = 10;

/// An incumbent strain (first) plus mutant strains with their initial
/// population shares.
#[derive(Debug, Clone)]
pub struct InvasionScenario {
    pub game: SymmetricGame,
    /// `s^0 = p` first, then the mutants `s^1..s^m`.
    pub strategies: Vec<MixedStrategy>,
    /// Length m+1, nonnegative, summing to 1 (within 1e-9).
    pub initial_shares: Vec<f64>,
    pub dt: f64,
    pub t_end: f64,
}

impl InvasionScenario {
    pub fn new(
        game: SymmetricGame,
        strategies: Vec<MixedStrategy>,
        initial_shares: Vec<f64>,
        dt: f64,
        t_end: f64,
    ) -> Result<Self, Error> {
        if strategies.is_empty() {
            return Err(Error::InvalidScenario("no incumbent strategy".to_string()));
        }
        for s in &strategies {
            game.check_strategy(s)?;
        }
        for (i, s) in strategies.iter().enumerate().skip(1) {
            if s == &strategies[0] {
                return Err(Error::InvalidScenario(format!(
                    "mutant {i} equals the incumbent"
                )));
            }
        }
        if initial_shares.len() != strategies.len() {
            return Err(Error::InvalidScenario(format!(
                "expected {} shares, got {}",
                strategies.len(),
                initial_shares.len()
            )));
        }
        if initial_shares.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidScenario(
                "shares must be finite and nonnegative".to_string(),
            ));
        }
        let total: f64 = initial_shares.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidScenario(format!(
                "shares sum to {total}, expected 1"
            )));
        }
        if initial_shares[0] <= 0.0 {
            return Err(Error::InvalidScenario(
                "initial incumbent share must be positive".to_string(),
            ));
        }
        if !dt.is_finite() || dt <= 0.0 || !t_end.is_finite() || t_end <= 0.0 {
            return Err(Error::InvalidScenario(
                "dt and t_end must be positive".to_string(),
            ));
        }
        Ok(Self {
            game,
            strategies,
            initial_shares,
            dt,
            t_end,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Restored,
    Invaded,
    NeutralDrift,
    Undecided,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Outcome::Restored => "restored",
            Outcome::Invaded => "invaded",
            Outcome::NeutralDrift => "neutral_drift",
            Outcome::Undecided => "undecided",
        };
        f.write_str(label)
    }
}

/// Recorded invasion time series. Every shares vector is nonnegative and
/// sums to 1 within 1e-9.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub shares: Vec<Vec<f64>>,
    pub outcome: Outcome,
}

/// The strain-vs-strain payoff matrix `M_ab = u(s^a, s^b)`, computed
/// exactly and converted to floats once.
pub fn restricted_game(
    game: &SymmetricGame,
    strategies: &[MixedStrategy],
) -> Result<Vec<Vec<f64>>, Error> {
    strategies
        .iter()
        .map(|a| {
            strategies
                .iter()
                .map(|b| {
                    let exact = game.payoff(a, b)?;
                    Ok(exact.to_f64().expect("rational payoff fits in f64"))
                })
                .collect()
        })
        .collect()
}

fn replicator_derivative(m: &[Vec<f64>], x: &[f64], out: &mut [f64]) {
    let n = x.len();
    let mut fitness = vec![0.0; n];
    for a in 0..n {
        let mut acc = 0.0;
        for b in 0..n {
            acc += m[a][b] * x[b];
        }
        fitness[a] = acc;
    }
    let mean: f64 = x.iter().zip(&fitness).map(|(xa, fa)| xa * fa).sum();
    for a in 0..n {
        out[a] = x[a] * (fitness[a] - mean);
    }
}

/// Integrates the replicator dynamics with fixed-step classical RK4,
/// renormalizing shares each step, and classifies the outcome with the
/// default tolerance. Records every [`OUTPUT_STRIDE`]-th step plus the
/// final one.
pub fn simulate(scenario: &InvasionScenario) -> Result<Trajectory, Error> {
    let m = restricted_game(&scenario.game, &scenario.strategies)?;
    let n = scenario.strategies.len();
    let dt = scenario.dt;
    let steps = (scenario.t_end / dt).round().max(1.0) as usize;

    let mut x = scenario.initial_shares.clone();
    normalize(&mut x);
    let mut times = Vec::with_capacity(steps / OUTPUT_STRIDE + 2);
    let mut shares = Vec::with_capacity(steps / OUTPUT_STRIDE + 2);
    times.push(0.0);
    shares.push(x.clone());

    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut stage = vec![0.0; n];

    for step in 1..=steps {
        replicator_derivative(&m, &x, &mut k1);
        for a in 0..n {
            stage[a] = x[a] + 0.5 * dt * k1[a];
        }
        replicator_derivative(&m, &stage, &mut k2);
        for a in 0..n {
            stage[a] = x[a] + 0.5 * dt * k2[a];
        }
        replicator_derivative(&m, &stage, &mut k3);
        for a in 0..n {
            stage[a] = x[a] + dt * k3[a];
        }
        replicator_derivative(&m, &stage, &mut k4);
        for a in 0..n {
            x[a] += dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Diverged {
                t: (step - 1) as f64 * dt,
            });
        }
        normalize(&mut x);
        if step % OUTPUT_STRIDE == 0 || step == steps {
            times.push(step as f64 * dt);
            shares.push(x.clone());
        }
    }

    let outcome = classify(&shares, DEFAULT_CLASSIFY_TOL);
    Ok(Trajectory {
        times,
        shares,
        outcome,
    })
}

fn normalize(x: &mut [f64]) {
    for v in x.iter_mut() {
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let total: f64 = x.iter().sum();
    if total > 0.0 {
        for v in x.iter_mut() {
            *v /= total;
        }
    }
}

/// Labels a trajectory:
/// `restored` when the final incumbent share is ≥ 1 − tol; `invaded` when
/// it is ≤ initial − tol and still declining over the last 10% of the
/// horizon; `neutral_drift` when no share moved by tol over the whole
/// horizon; `undecided` otherwise.
pub fn classify_outcome(traj: &Trajectory, tol: f64) -> Outcome {
    classify(&traj.shares, tol)
}

fn classify(shares: &[Vec<f64>], tol: f64) -> Outcome {
    let first = shares.first().expect("nonempty trajectory");
    let last = shares.last().expect("nonempty trajectory");
    if last[0] >= 1.0 - tol {
        return Outcome::Restored;
    }
    let tail_start = shares.len().saturating_sub(shares.len().div_ceil(10).max(2));
    if last[0] <= first[0] - tol && last[0] < shares[tail_start][0] {
        return Outcome::Invaded;
    }
    let max_change = shares
        .iter()
        .flat_map(|row| {
            row.iter()
                .zip(first)
                .map(|(now, start)| (now - start).abs())
        })
        .fold(0.0, f64::max);
    if max_change < tol {
        return Outcome::NeutralDrift;
    }
    Outcome::Undecided
}

/// Writes the trajectory CSV: header `t,share_0,...,share_m`, one row per
/// recorded step with 12 significant digits, and a trailing comment line
/// `# outcome=<label>`.
pub fn write_csv<W: Write>(traj: &Trajectory, mut out: W) -> std::io::Result<()> {
    let n = traj.shares.first().map_or(0, Vec::len);
    write!(out, "t")?;
    for a in 0..n {
        write!(out, ",share_{a}")?;
    }
    writeln!(out)?;
    for (t, row) in traj.times.iter().zip(&traj.shares) {
        write!(out, "{}", sig12(*t))?;
        for v in row {
            write!(out, ",{}", sig12(*v))?;
        }
        writeln!(out)?;
    }
    writeln!(out, "# outcome={}", traj.outcome)
}

/// Plain decimal with 12 significant digits (scientific only for extreme
/// magnitudes).
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // Trim trailing zeros but keep at least one digit after the point.
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0');
        let trimmed = trimmed.strip_suffix('.').unwrap_or(trimmed);
        trimmed.to_string()
    } else {
        s
    }
}
