//! Invasion barriers for mutation sets.
//!
//! For an incumbent `p` invaded by mutants `r^1..r^m` in proportions
//! `ε_1..ε_m`, the post-invasion population is
//! `w = Σ_j ε_j r^j + (1 − Σ_j ε_j) p` and the margin of mutant `i` is
//! `h_i(ε) = u(p, w) − u(r^i, w)`. Each `h_i` is affine in `ε`:
//! `h_i(ε) = B_i + Σ_j ε_j (A_ij − B_i)` with `B_i = u(p,p) − u(r^i,p)`
//! and `A_ij = u(p,r^j) − u(r^i,r^j)`. The incumbent repels the invasion
//! at every proportion vector in the half-open box `(0, ε̄]^m` iff all
//! `h_i` stay strictly positive there, which the affine structure decides
//! exactly at the box corners.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::game::{MixedStrategy, SymmetricGame};
use crate::rat::{format_rat, rat, Rat};
use crate::stability;

/// An incumbent with an ordered list of mutant strategies. Duplicates are
/// allowed; every mutant must differ from the incumbent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSet {
    incumbent: MixedStrategy,
    mutants: Vec<MixedStrategy>,
}

impl MutationSet {
    pub fn new(incumbent: MixedStrategy, mutants: Vec<MixedStrategy>) -> Result<Self, Error> {
        if mutants.is_empty() {
            return Err(Error::InvalidMutationSet(
                "at least one mutant is required".to_string(),
            ));
        }
        for (i, r) in mutants.iter().enumerate() {
            if r.k() != incumbent.k() {
                return Err(Error::DimensionMismatch {
                    expected: incumbent.k(),
                    got: r.k(),
                });
            }
            if r == &incumbent {
                return Err(Error::InvalidMutationSet(format!(
                    "mutant {i} equals the incumbent"
                )));
            }
        }
        Ok(Self { incumbent, mutants })
    }

    pub fn incumbent(&self) -> &MixedStrategy {
        &self.incumbent
    }

    pub fn mutants(&self) -> &[MixedStrategy] {
        &self.mutants
    }

    pub fn m(&self) -> usize {
        self.mutants.len()
    }
}

/// A concrete proportion vector at which some mutant's margin is ≤ 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrierFailure {
    #[serde(with = "rat_vec_serde")]
    pub proportions: Vec<Rat>,
    pub violated_index: usize,
    #[serde(with = "rat_serde")]
    pub h_value: Rat,
}

/// Rationals cross serde boundaries as exact `"a/b"` strings.
pub(crate) mod rat_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::rat::{format_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(value: &Rat, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rat(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rat("rational", &s).map_err(D::Error::custom)
    }
}

pub(crate) mod rat_vec_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rat::{format_rat, parse_rat, Rat};

    pub fn serialize<S: Serializer>(values: &[Rat], serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = values.iter().map(format_rat).collect();
        strings.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<Rat>, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        strings
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rat(&format!("proportions[{i}]"), s).map_err(D::Error::custom))
            .collect()
    }
}

/// Outcome of a barrier computation: either the supremal box size `ε̄`
/// (with `0 < ε̄ ≤ 1/m`), or an explicit violating proportion vector
/// proving no positive barrier exists.
///
/// `inclusive` records whether the margin stays strictly positive at the
/// supremum itself; when false, every `ε̄' < ε̄` works but `ε̄` does not.
/// `cap_applied` is set when the feasibility cap `1/m` (needed to keep
/// `Σ ε_j ≤ 1`) bound the answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BarrierResult {
    Barrier {
        #[serde(with = "rat_serde")]
        eps_bar: Rat,
        inclusive: bool,
        cap_applied: bool,
    },
    None {
        counterexample: BarrierFailure,
    },
}

impl BarrierResult {
    pub fn barrier_value(&self) -> Option<&Rat> {
        match self {
            BarrierResult::Barrier { eps_bar, .. } => Some(eps_bar),
            BarrierResult::None { .. } => None,
        }
    }
}

/// Uniform invasion barrier report: a per-mutant bound valid for any `m`
/// simultaneous mutants, plus the m-independent bound on the total mutant
/// fraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniformBarrier {
    pub barrier: BarrierResult,
    #[serde(with = "rat_serde")]
    pub total_fraction_bound: Rat,
}

/// `h_i(ε) = u(p, w) − u(r^i, w)` for `i = 1..m`, computed exactly by
/// building the population mixture and evaluating payoffs directly.
pub fn h_values(game: &SymmetricGame, ms: &MutationSet, eps: &[Rat]) -> Result<Vec<Rat>, Error> {
    game.check_strategy(ms.incumbent())?;
    if eps.len() != ms.m() {
        return Err(Error::DimensionMismatch {
            expected: ms.m(),
            got: eps.len(),
        });
    }
    if let Some(bad) = eps.iter().find(|e| **e <= Rat::zero()) {
        return Err(Error::InfeasibleProportions(format!(
            "proportions must be positive, got {}",
            format_rat(bad)
        )));
    }
    let total: Rat = eps.iter().sum();
    if total > Rat::one() {
        return Err(Error::InfeasibleProportions(format!(
            "total {} exceeds 1",
            format_rat(&total)
        )));
    }
    let p = ms.incumbent();
    let k = p.k();
    let residual = Rat::one() - &total;
    let weights: Vec<Rat> = (0..k)
        .map(|j| {
            let mut w = &residual * p.weight(j);
            for (e, r) in eps.iter().zip(ms.mutants()) {
                w += e * r.weight(j);
            }
            w
        })
        .collect();
    let w = MixedStrategy::new(weights).expect("mixture stays on the simplex");
    let incumbent_payoff = game.payoff(p, &w)?;
    ms.mutants()
        .iter()
        .map(|r| Ok(&incumbent_payoff - game.payoff(r, &w)?))
        .collect()
}

/// The affine form of the margins: `(B, A)` with
/// `h_i(ε) = B_i + Σ_j ε_j (A_ij − B_i)`. Exposed so callers can
/// cross-check `h_values` through an independent algebraic route.
pub fn affine_form(
    game: &SymmetricGame,
    ms: &MutationSet,
) -> Result<(Vec<Rat>, Vec<Vec<Rat>>), Error> {
    let p = ms.incumbent();
    let u_pp = game.payoff(p, p)?;
    let b = ms
        .mutants()
        .iter()
        .map(|r| Ok(&u_pp - game.payoff(r, p)?))
        .collect::<Result<Vec<_>, Error>>()?;
    let a = ms
        .mutants()
        .iter()
        .map(|ri| {
            ms.mutants()
                .iter()
                .map(|rj| Ok(game.payoff(p, rj)? - game.payoff(ri, rj)?))
                .collect::<Result<Vec<_>, Error>>()
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok((b, a))
}

/// Largest `ε̄ ∈ (0, 1/m]` such that every margin stays strictly positive
/// on the half-open box `(0, ε̄]^m`, or an explicit violating proportion
/// vector when no positive box exists.
///
/// Corner rule, per mutant `i` with coefficients `c_ij = A_ij − B_i` and
/// `s_i = Σ_j min(0, c_ij)`: the infimum of `h_i` over `(0, ε̄]^m` is
/// `B_i + ε̄·s_i`, attained inside the box iff no coefficient is strictly
/// positive. So the per-mutant supremum is `B_i / (−s_i)` when `s_i < 0`
/// (inclusive iff some positive coefficient keeps the infimum unattained),
/// unbounded when `B_i > 0` and `s_i ≥ 0`, and nonexistent when `B_i < 0`
/// or the margin degenerates to ≤ 0 near the origin.
pub fn max_box_barrier(game: &SymmetricGame, ms: &MutationSet) -> Result<BarrierResult, Error> {
    let (b, a) = affine_form(game, ms)?;
    let m = ms.m();

    // Minimal per-mutant supremum so far; None means unbounded so far.
    let mut sup: Option<(Rat, bool)> = None;
    for i in 0..m {
        let coeffs: Vec<Rat> = (0..m).map(|j| &a[i][j] - &b[i]).collect();
        let slope: Rat = coeffs
            .iter()
            .filter(|c| **c < Rat::zero())
            .cloned()
            .sum();
        let has_positive = coeffs.iter().any(|c| *c > Rat::zero());

        if b[i] < Rat::zero() {
            let eps = violating_eps_negative_base(&b[i], &coeffs, m);
            return no_barrier(game, ms, i, eps);
        }
        if b[i].is_zero() {
            if slope < Rat::zero() {
                let eps = violating_eps_negative_direction(&coeffs, m);
                return no_barrier(game, ms, i, eps);
            }
            if !has_positive {
                // h_i is identically zero: strict positivity fails everywhere.
                let eps = vec![rat(1, 2 * m as i64); m];
                return no_barrier(game, ms, i, eps);
            }
            continue; // unbounded for this mutant
        }
        // B_i > 0.
        if slope < Rat::zero() {
            let threshold = &b[i] / -&slope;
            merge_threshold(&mut sup, threshold, has_positive);
        }
    }

    let cap = rat(1, m as i64);
    Ok(match sup {
        None => BarrierResult::Barrier {
            eps_bar: cap,
            inclusive: true,
            cap_applied: true,
        },
        Some((threshold, inclusive)) => {
            if cap < threshold {
                BarrierResult::Barrier {
                    eps_bar: cap,
                    inclusive: true,
                    cap_applied: true,
                }
            } else {
                BarrierResult::Barrier {
                    eps_bar: threshold,
                    inclusive,
                    cap_applied: false,
                }
            }
        }
    })
}

fn merge_threshold(sup: &mut Option<(Rat, bool)>, threshold: Rat, inclusive: bool) {
    match sup {
        None => *sup = Some((threshold, inclusive)),
        Some((t, incl)) => {
            if threshold < *t {
                *sup = Some((threshold, inclusive));
            } else if threshold == *t {
                *incl = *incl && inclusive;
            }
        }
    }
}

fn no_barrier(
    game: &SymmetricGame,
    ms: &MutationSet,
    violated_index: usize,
    proportions: Vec<Rat>,
) -> Result<BarrierResult, Error> {
    let h = h_values(game, ms, &proportions)?;
    let h_value = h[violated_index].clone();
    debug_assert!(h_value <= Rat::zero());
    Ok(BarrierResult::None {
        counterexample: BarrierFailure {
            proportions,
            violated_index,
            h_value,
        },
    })
}

/// With `B_i < 0` the margin is already negative near the origin; equal
/// proportions `δ` small enough to keep any positive slope from rescuing it.
fn violating_eps_negative_base(b_i: &Rat, coeffs: &[Rat], m: usize) -> Vec<Rat> {
    let total_slope: Rat = coeffs.iter().sum();
    let cap = rat(1, m as i64);
    let delta = if total_slope <= Rat::zero() {
        cap
    } else {
        let safe = -b_i / (rat(2, 1) * &total_slope);
        if safe < cap {
            safe
        } else {
            cap
        }
    };
    vec![delta; m]
}

/// With `B_i = 0` and a negative coefficient, load the most harmful mutant
/// and keep the others small enough that positive coefficients cannot
/// compensate.
fn violating_eps_negative_direction(coeffs: &[Rat], m: usize) -> Vec<Rat> {
    let worst = coeffs
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.cmp(b))
        .map(|(j, _)| j)
        .expect("nonempty");
    let big = rat(1, 2 * m as i64);
    let positive_sum: Rat = coeffs
        .iter()
        .filter(|c| **c > Rat::zero())
        .cloned()
        .sum();
    let magnitude = -&coeffs[worst] * &big; // > 0
    let small = if positive_sum.is_zero() {
        big.clone()
    } else {
        let bound = &magnitude / (rat(2, 1) * &positive_sum);
        if bound < big {
            bound
        } else {
            big.clone()
        }
    };
    (0..coeffs.len())
        .map(|j| if j == worst { big.clone() } else { small.clone() })
        .collect()
}

/// Uniform invasion barrier for `m` simultaneous mutants, built from the
/// box barrier of the pure-mutation set `{e^j : j ≠ c}` around the pure
/// incumbent `e^c`: if `ε̄` bounds that box then `ε̄/m` is a valid
/// per-mutant bound for *any* `m` mutant strategies, and `ε̄` bounds the
/// total mutant fraction independently of `m`.
///
/// Requires the incumbent to be stable against multiple mutations (which
/// forces it to be pure).
///
/// The endpoint flag is recomputed for this construction: decomposing an
/// arbitrary mutant over the pure directions can drive some pure
/// proportions to zero, so the supremum is attained only when the binding
/// mutant's own diagonal coefficient is positive.
pub fn uniform_barrier(
    game: &SymmetricGame,
    p: &MixedStrategy,
    m: usize,
) -> Result<UniformBarrier, Error> {
    if m == 0 {
        return Err(Error::InvalidMutationSet(
            "mutation count must be at least 1".to_string(),
        ));
    }
    let mess = stability::is_mess(game, p)?;
    if !mess.holds {
        return Err(Error::NotMess("no uniform barrier guaranteed".to_string()));
    }
    let k = game.k();
    if k == 1 {
        // No rival strategies exist; any feasible proportion is harmless.
        return Ok(UniformBarrier {
            barrier: BarrierResult::Barrier {
                eps_bar: rat(1, m as i64),
                inclusive: true,
                cap_applied: true,
            },
            total_fraction_bound: Rat::one(),
        });
    }
    let c = p.as_pure().expect("a multi-mutation-stable strategy is pure");
    let mutants: Vec<MixedStrategy> = (0..k)
        .filter(|&j| j != c)
        .map(|j| MixedStrategy::pure(k, j))
        .collect();
    let ms = MutationSet::new(p.clone(), mutants)?;
    let (b, a) = affine_form(game, &ms)?;
    let m_pure = ms.m();

    let mut sup: Option<(Rat, bool)> = None;
    for i in 0..m_pure {
        let coeffs: Vec<Rat> = (0..m_pure).map(|j| &a[i][j] - &b[i]).collect();
        let slope: Rat = coeffs
            .iter()
            .filter(|c| **c < Rat::zero())
            .cloned()
            .sum();
        let diagonal_positive = coeffs[i] > Rat::zero();
        if b[i].is_zero() {
            // A best-reply vertex: vertex dominance makes every coefficient
            // nonnegative and diagonal superiority makes c_ii positive.
            assert!(
                slope.is_zero() && diagonal_positive,
                "multi-mutation stability violated by its own vertex structure"
            );
            continue;
        }
        assert!(b[i] > Rat::zero(), "Nash property violated");
        if slope < Rat::zero() {
            let threshold = &b[i] / -&slope;
            merge_threshold(&mut sup, threshold, diagonal_positive);
        }
    }

    let cap = rat(1, m_pure as i64);
    let (total, inclusive, cap_applied) = match sup {
        None => (cap, true, true),
        Some((threshold, incl)) => {
            if cap < threshold {
                (cap, true, true)
            } else {
                (threshold, incl, false)
            }
        }
    };
    let per_mutant = &total / rat(m as i64, 1);
    Ok(UniformBarrier {
        barrier: BarrierResult::Barrier {
            eps_bar: per_mutant,
            inclusive,
            cap_applied,
        },
        total_fraction_bound: total,
    })
}

/// True iff every mutant margin is strictly positive at the given
/// proportions.
pub fn check_robust_at(
    game: &SymmetricGame,
    ms: &MutationSet,
    eps: &[Rat],
) -> Result<bool, Error> {
    let h = h_values(game, ms, eps)?;
    Ok(h.iter().all(|v| *v > Rat::zero()))
}
