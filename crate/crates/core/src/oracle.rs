//! Brute-force verification at the definition level.
//!
//! The searches here enumerate grid strategies and proportion vectors and
//! look for direct violations of the stability definitions. They are the
//! independent ground truth the decision procedures are checked against:
//! margins are recomputed from the payoff definition (build the population
//! mixture, evaluate payoffs), sharing no code path with the barrier
//! module they certify.
//!
//! Absence of a counterexample at a resolution is evidence, never proof;
//! only the decision procedures prove stability. A found counterexample,
//! by contrast, is exact and replayable.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::barriers::{rat_serde, rat_vec_serde};
use crate::error::Error;
use crate::game::{MixedStrategy, SymmetricGame};
use crate::rat::{format_rat, Rat};

/// All integer compositions of `total` into `parts` nonnegative parts, in
/// ascending lexicographic order.
pub(crate) fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    assert!(parts >= 1);
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts);
            v.push(first);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Every strategy whose weights are multiples of `1/denom`, in
/// deterministic ascending lexicographic order. The count is
/// `C(denom + k - 1, k - 1)`.
pub fn simplex_grid(k: usize, denom: u32) -> Vec<MixedStrategy> {
    assert!(k >= 1 && denom >= 1);
    compositions(denom, k)
        .into_iter()
        .map(|comp| {
            let weights = comp
                .into_iter()
                .map(|c| Rat::new((c as i64).into(), (denom as i64).into()))
                .collect();
            MixedStrategy::new(weights).expect("grid point is on the simplex")
        })
        .collect()
}

/// Search resolution: mutant grid denominator, candidate proportions, and
/// the number of simultaneous mutants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub denom: u32,
    pub eps_list: Vec<Rat>,
    pub m: usize,
}

impl GridSpec {
    pub fn new(denom: u32, eps_list: Vec<Rat>, m: usize) -> Result<Self, Error> {
        if denom == 0 {
            return Err(Error::InvalidGridSpec("denominator must be ≥ 1".to_string()));
        }
        if m == 0 {
            return Err(Error::InvalidGridSpec("m must be ≥ 1".to_string()));
        }
        if eps_list.is_empty() {
            return Err(Error::InvalidGridSpec("eps list must be nonempty".to_string()));
        }
        if let Some(bad) = eps_list.iter().find(|e| **e <= Rat::zero()) {
            return Err(Error::InvalidGridSpec(format!(
                "proportions must be positive, got {}",
                format_rat(bad)
            )));
        }
        Ok(Self { denom, eps_list, m })
    }
}

/// A mutant tuple and proportion vector at which some mutant's margin is
/// ≤ 0. Replaying the proportions through the barrier module's `h_values`
/// reproduces `h_value` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub mutants: Vec<MixedStrategy>,
    #[serde(with = "rat_vec_serde")]
    pub proportions: Vec<Rat>,
    pub violated_index: usize,
    #[serde(with = "rat_serde")]
    pub h_value: Rat,
}

/// Margin check straight from the payoff definition: builds
/// `w = Σ ε_j r^j + (1 − Σ ε_j) p` and returns the first `i` with
/// `u(p, w) − u(r^i, w) ≤ 0`.
fn first_nonpositive_margin(
    game: &SymmetricGame,
    p: &MixedStrategy,
    mutants: &[&MixedStrategy],
    eps: &[Rat],
) -> Option<(usize, Rat)> {
    let k = p.k();
    let total: Rat = eps.iter().sum();
    let residual = Rat::one() - &total;
    let weights: Vec<Rat> = (0..k)
        .map(|j| {
            let mut w = &residual * p.weight(j);
            for (e, r) in eps.iter().zip(mutants) {
                w += e * r.weight(j);
            }
            w
        })
        .collect();
    let w = MixedStrategy::new(weights).expect("mixture stays on the simplex");
    let incumbent = game.payoff(p, &w).expect("dimensions checked by caller");
    for (i, r) in mutants.iter().enumerate() {
        let margin = &incumbent - game.payoff(r, &w).expect("dimensions checked");
        if margin <= Rat::zero() {
            return Some((i, margin));
        }
    }
    None
}

/// All multisets of size `m` over `0..n` (indices nondecreasing), in
/// ascending lexicographic order.
fn multisets(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; m];
    loop {
        out.push(current.clone());
        // Advance to the next nondecreasing index vector.
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if current[pos] + 1 < n {
                let next = current[pos] + 1;
                for slot in current.iter_mut().skip(pos) {
                    *slot = next;
                }
                break;
            }
        }
    }
}

/// Proportion vectors from `eps_list^m` with total ≤ 1, ordered
/// lexicographically by list index.
fn feasible_eps_tuples(eps_list: &[Rat], m: usize) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    let mut idx = vec![0usize; m];
    loop {
        let tuple: Vec<Rat> = idx.iter().map(|&i| eps_list[i].clone()).collect();
        if tuple.iter().sum::<Rat>() <= Rat::one() {
            out.push(tuple);
        }
        let mut pos = m;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] + 1 < eps_list.len() {
                idx[pos] += 1;
                for slot in idx.iter_mut().skip(pos + 1) {
                    *slot = 0;
                }
                break;
            }
        }
    }
}

/// Enumerates all `m`-multisets of grid mutants ≠ `p` and all feasible
/// proportion vectors; returns the first tuple (in deterministic search
/// order: multisets, then proportions) at which some margin is ≤ 0.
pub fn search_mess_counterexample(
    game: &SymmetricGame,
    p: &MixedStrategy,
    spec: &GridSpec,
) -> Result<Option<Counterexample>, Error> {
    search_mess_counterexample_with(game, p, spec, 1)
}

/// As [`search_mess_counterexample`], scanning multiset chunks on up to
/// `threads` threads. The lowest-index hit wins, so parallel and serial
/// runs return the same counterexample.
pub fn search_mess_counterexample_with(
    game: &SymmetricGame,
    p: &MixedStrategy,
    spec: &GridSpec,
    threads: usize,
) -> Result<Option<Counterexample>, Error> {
    game.check_strategy(p)?;
    let pool: Vec<MixedStrategy> = simplex_grid(game.k(), spec.denom)
        .into_iter()
        .filter(|q| q != p)
        .collect();
    if pool.is_empty() {
        return Ok(None);
    }
    let tuples = multisets(pool.len(), spec.m);
    let eps_tuples = feasible_eps_tuples(&spec.eps_list, spec.m);
    if eps_tuples.is_empty() {
        return Ok(None);
    }

    let scan = |range: std::ops::Range<usize>| -> Option<(usize, Counterexample)> {
        for tuple_idx in range {
            let mutant_refs: Vec<&MixedStrategy> =
                tuples[tuple_idx].iter().map(|&i| &pool[i]).collect();
            for eps in &eps_tuples {
                if let Some((i, h)) = first_nonpositive_margin(game, p, &mutant_refs, eps) {
                    let ce = Counterexample {
                        mutants: mutant_refs.iter().map(|r| (*r).clone()).collect(),
                        proportions: eps.clone(),
                        violated_index: i,
                        h_value: h,
                    };
                    return Some((tuple_idx, ce));
                }
            }
        }
        None
    };

    let threads = threads.clamp(1, tuples.len());
    if threads == 1 {
        return Ok(scan(0..tuples.len()).map(|(_, ce)| ce));
    }
    let chunk = tuples.len().div_ceil(threads);
    let hits = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = (lo + chunk).min(tuples.len());
            let scan = &scan;
            handles.push(scope.spawn(move || scan(lo..hi)));
        }
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("search thread panicked"))
            .collect::<Vec<_>>()
    });
    Ok(hits
        .into_iter()
        .min_by_key(|(idx, _)| *idx)
        .map(|(_, ce)| ce))
}

/// Runs searches of increasing resolution; the first counterexample wins.
pub fn escalating_search(
    game: &SymmetricGame,
    p: &MixedStrategy,
    schedule: &[GridSpec],
) -> Result<Option<Counterexample>, Error> {
    for spec in schedule {
        if let Some(ce) = search_mess_counterexample(game, p, spec)? {
            return Ok(Some(ce));
        }
    }
    Ok(None)
}

/// Direct neighborhood search against the local-dominance definition:
/// over grid points `s, r ≠ p` within L1 distance `radius` of `p`, returns
/// the first `(s, r)` with `u(p,r) < u(s,r)` or `u(p,r) ≤ u(r,r)`.
pub fn search_local_dominance_violation(
    game: &SymmetricGame,
    p: &MixedStrategy,
    radius: &Rat,
    denom: u32,
) -> Result<Option<(MixedStrategy, MixedStrategy)>, Error> {
    game.check_strategy(p)?;
    if *radius <= Rat::zero() {
        return Err(Error::InvalidGridSpec("radius must be positive".to_string()));
    }
    if denom == 0 {
        return Err(Error::InvalidGridSpec("denominator must be ≥ 1".to_string()));
    }
    let near: Vec<MixedStrategy> = simplex_grid(game.k(), denom)
        .into_iter()
        .filter(|q| q != p && q.l1_distance(p) <= *radius)
        .collect();
    // u(p,r) and u(r,r) only depend on r; precompute per column.
    let vs_incumbent: Vec<Rat> = near
        .iter()
        .map(|r| game.payoff(p, r))
        .collect::<Result<_, _>>()?;
    let vs_self: Vec<Rat> = near
        .iter()
        .map(|r| game.payoff(r, r))
        .collect::<Result<_, _>>()?;
    for s in &near {
        for (ri, r) in near.iter().enumerate() {
            if vs_incumbent[ri] < game.payoff(s, r)? || vs_incumbent[ri] <= vs_self[ri] {
                return Ok(Some((s.clone(), r.clone())));
            }
        }
    }
    Ok(None)
}
