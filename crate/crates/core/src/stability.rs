//! Decision procedures for evolutionary stability.
//!
//! Six predicates are decided for a (game, strategy) pair, all by exact
//! rational arithmetic: symmetric Nash, strict Nash, ESS, stability against
//! multiple simultaneous mutations (M-ESS), local dominance, and strict
//! local dominance. M-ESS is equivalent to local dominance and reduces to
//! finitely many payoff comparisons on the best-response face; ESS needs a
//! quadratic-form test, exact whenever the face directions span a linear
//! subspace and certified by a Lipschitz-bounded grid otherwise.
//!
//! No tolerance parameters exist in this module; every comparison is exact.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::game::{MixedStrategy, SymmetricGame};
use crate::oracle::compositions;
use crate::rat::{rat, Rat};

/// Which predicate a witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Nash,
    StrictNash,
    Ess,
    Mess,
    LocallyDominant,
    StrictlyLocallyDominant,
}

/// Concrete evidence for a failed predicate. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A pure strategy earns strictly more against `p` than `p` does.
    BetterPureReply { index: usize },
    /// The strategy is mixed, so a purity-requiring predicate fails.
    NotPure,
    /// `p = e^c` but `rival` is also a best response to it.
    SharedBestReply { rival: usize },
    /// A best-response-face strategy `q ≠ p` with `u(p,q) ≤ u(q,q)`.
    FaceViolation { strategy: MixedStrategy },
    /// Best-reply vertex `mutant` beats `p` against pure `target`:
    /// `u(e^mutant, e^target) > u(p, e^target)`.
    VertexDominanceViolation { mutant: usize, target: usize },
    /// Best-reply vertex `mutant` is not strictly beaten on its own
    /// population: `u(p, e^mutant) ≤ u(e^mutant, e^mutant)`.
    DiagonalSuperiorityViolation { mutant: usize },
    /// Strict local dominance fails against pure `rival`; `target` is the
    /// pure population where the required strict inequality breaks, when
    /// the first-order comparison ties.
    StrictDominanceViolation {
        rival: usize,
        target: Option<usize>,
    },
}

/// A failed flag together with its evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureWitness {
    pub flag: Flag,
    pub detail: Witness,
}

/// Outcome of a single predicate: `holds`, with a witness whenever it
/// does not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn holds() -> Self {
        Verdict {
            holds: true,
            witness: None,
        }
    }

    fn fails(witness: Witness) -> Self {
        Verdict {
            holds: false,
            witness: Some(witness),
        }
    }
}

/// All decision flags for one (game, strategy) pair. The implication chain
/// `strict_nash ⇒ strictly_locally_dominant ⇒ locally_dominant`,
/// `mess ⇔ locally_dominant`, `mess ⇒ ess ⇒ nash` holds within a report,
/// and `witness` explains the first false flag in field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub is_nash: bool,
    pub is_strict_nash: bool,
    pub is_ess: bool,
    pub is_mess: bool,
    pub is_locally_dominant: bool,
    pub is_strictly_locally_dominant: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<FailureWitness>,
}

/// Grid denominators tried by the ESS boundary-cone fallback before
/// reporting indeterminate.
pub const ESS_GRID_DENOMS: [u32; 6] = [2, 4, 8, 16, 32, 64];

/// `p ∈ BR(p)` with a best deviation as witness on failure.
pub fn nash_verdict(game: &SymmetricGame, p: &MixedStrategy) -> Result<Verdict, Error> {
    let br = game.best_response_set(p)?;
    if p.support().iter().all(|i| br.binary_search(i).is_ok()) {
        Ok(Verdict::holds())
    } else {
        Ok(Verdict::fails(Witness::BetterPureReply { index: br[0] }))
    }
}

/// `p` pure and the unique best response to itself.
pub fn strict_nash_verdict(game: &SymmetricGame, p: &MixedStrategy) -> Result<Verdict, Error> {
    game.check_strategy(p)?;
    let Some(c) = p.as_pure() else {
        return Ok(Verdict::fails(Witness::NotPure));
    };
    let br = game.best_response_set(p)?;
    match br.iter().find(|&&j| j != c) {
        None => Ok(Verdict::holds()),
        Some(&rival) => Ok(Verdict::fails(Witness::SharedBestReply { rival })),
    }
}

/// Bilinear payoff extended to arbitrary rational vectors (not necessarily
/// on the simplex): `Σ_{i,j} x_i y_j U[i][j]`.
fn vector_payoff(game: &SymmetricGame, x: &[Rat], y: &[Rat]) -> Rat {
    let mut total = Rat::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let mut row = Rat::zero();
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                row += game.entry(i, j) * yj;
            }
        }
        total += xi * row;
    }
    total
}

/// ESS test. `p` is an ESS iff it is a Nash equilibrium and
/// `u(p,q) > u(q,q)` for every `q ≠ p` on the best-response face
/// `F = hull{e^j : j ∈ BR}`. On that face the difference equals
/// `-u(q-p, q-p)`, a quadratic form, so the decision is:
///
/// * one or two best replies: exact closed form;
/// * `support(p) = BR` (p interior to the face): exact strict negative
///   definiteness of the symmetrized form on the zero-sum subspace of the
///   face coordinates, via rational symmetric elimination;
/// * otherwise: a certified grid over the compact set where rays from `p`
///   exit the face, refuting on any nonpositive value and certifying via
///   an exact Lipschitz bound. If neither triggers up to denominator 64
///   the result is `Err(IndeterminateEss)` — never a silent guess.
pub fn is_ess(game: &SymmetricGame, p: &MixedStrategy) -> Result<Verdict, Error> {
    let nash = nash_verdict(game, p)?;
    if !nash.holds {
        return Ok(nash);
    }
    let br = game.best_response_set(p)?;
    match br.len() {
        1 => Ok(Verdict::holds()), // F \ {p} is empty
        2 => {
            let (a, b) = (br[0], br[1]);
            // Along the face segment, u(p,q) - u(q,q) = -(t - μ)^2 · c.
            let c = game.entry(a, a) - game.entry(a, b) - game.entry(b, a)
                + game.entry(b, b);
            if c < Rat::zero() {
                Ok(Verdict::holds())
            } else {
                let q = if p.as_pure() == Some(a) {
                    MixedStrategy::pure(p.k(), b)
                } else {
                    MixedStrategy::pure(p.k(), a)
                };
                Ok(Verdict::fails(Witness::FaceViolation { strategy: q }))
            }
        }
        _ => {
            let support = p.support();
            if support == br {
                Ok(interior_face_decision(game, p, &br))
            } else {
                boundary_face_decision(game, p, &br, &support)
            }
        }
    }
}

/// Exact decision when `p` lies in the relative interior of the face:
/// directions from `p` span the zero-sum subspace on the face coordinates,
/// so ESS holds iff the symmetrized payoff form is strictly negative
/// definite there. Symmetric Gaussian elimination over rationals decides
/// this and, on failure, produces an explicit non-negative direction.
fn interior_face_decision(game: &SymmetricGame, p: &MixedStrategy, br: &[usize]) -> Verdict {
    let k = p.k();
    let n = br.len() - 1;
    // Basis of the zero-sum subspace: b_i = e^{br[i+1]} - e^{br[0]}.
    let basis: Vec<Vec<Rat>> = (1..=n)
        .map(|i| {
            let mut v = vec![Rat::zero(); k];
            v[br[i]] += Rat::new(1.into(), 1.into());
            v[br[0]] -= Rat::new(1.into(), 1.into());
            v
        })
        .collect();
    let half = rat(1, 2);
    let gram: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (vector_payoff(game, &basis[i], &basis[j])
                        + vector_payoff(game, &basis[j], &basis[i]))
                        * &half
                })
                .collect()
        })
        .collect();
    match negative_definite_or_direction(gram) {
        None => Verdict::holds(),
        Some(y) => {
            // Direction with u(d,d) ≥ 0; push from p to the face boundary.
            let mut d = vec![Rat::zero(); k];
            for (i, coef) in y.iter().enumerate() {
                for (j, b) in basis[i].iter().enumerate() {
                    d[j] += coef * b;
                }
            }
            let t = d
                .iter()
                .enumerate()
                .filter(|(_, dj)| **dj < Rat::zero())
                .map(|(j, dj)| p.weight(j) / -dj)
                .min()
                .expect("a zero-sum nonzero direction has a negative entry");
            let weights = (0..k).map(|j| p.weight(j) + &t * &d[j]).collect();
            let q = MixedStrategy::new(weights).expect("stays on the simplex");
            Verdict::fails(Witness::FaceViolation { strategy: q })
        }
    }
}

/// Symmetric elimination testing strict negative definiteness. Returns
/// `None` when definite; otherwise a vector `y` with `yᵀGy ≥ 0` (the first
/// nonnegative pivot's direction, recovered from the unit-triangular
/// factors computed so far).
#[allow(clippy::needless_range_loop)]
fn negative_definite_or_direction(mut a: Vec<Vec<Rat>>) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut lower = vec![vec![Rat::zero(); n]; n];
    for r in 0..n {
        let pivot = a[r][r].clone();
        if pivot >= Rat::zero() {
            // Solve Lᵀ y = e_r with the columns filled in steps < r.
            let mut y = vec![Rat::zero(); n];
            y[r] = Rat::new(1.into(), 1.into());
            for i in (0..r).rev() {
                let mut acc = Rat::zero();
                for j in i + 1..=r {
                    acc += &lower[j][i] * &y[j];
                }
                y[i] = -acc;
            }
            return Some(y);
        }
        for i in r + 1..n {
            let factor = &a[i][r] / &pivot;
            for j in r..n {
                let delta = &factor * &a[r][j];
                a[i][j] -= delta;
            }
            lower[i][r] = factor;
        }
    }
    None
}

/// Certified grid for boundary cones (`support(p) ⊊ BR`, three or more
/// best replies). Every ray from `p` inside the face exits through a point
/// whose barycentric coordinate vanishes on some support index of `p`, and
/// the quadratic `q ↦ u(p,q) - u(q,q)` scales with the square of the ray
/// parameter; so strict positivity off `p` is equivalent to strict
/// negativity of `φ(λ) = Σ λ_a λ_b u(e^a - p, e^b - p)` on that compact
/// exit set. The grid refutes on any `φ ≥ 0` and certifies a sub-simplex
/// when `max φ + L · mesh < 0` for the exact Lipschitz constant `L`.
fn boundary_face_decision(
    game: &SymmetricGame,
    p: &MixedStrategy,
    br: &[usize],
    support: &[usize],
) -> Result<Verdict, Error> {
    let k = p.k();
    let face = br.len();
    // M[a][b] = u(e^{br[a]} - p, e^{br[b]} - p), exact.
    let dirs: Vec<Vec<Rat>> = br
        .iter()
        .map(|&a| {
            (0..k)
                .map(|j| {
                    let e = if j == a { rat(1, 1) } else { Rat::zero() };
                    e - p.weight(j)
                })
                .collect()
        })
        .collect();
    let m_mat: Vec<Vec<Rat>> = (0..face)
        .map(|a| {
            (0..face)
                .map(|b| vector_payoff(game, &dirs[a], &dirs[b]))
                .collect()
        })
        .collect();
    let half = rat(1, 2);
    let lipschitz = {
        let mut max_abs = Rat::zero();
        for (a, row) in m_mat.iter().enumerate() {
            for (b, value) in row.iter().enumerate() {
                let mut sym = (value + &m_mat[b][a]) * &half;
                if sym < Rat::zero() {
                    sym = -sym;
                }
                if sym > max_abs {
                    max_abs = sym;
                }
            }
        }
        max_abs * rat(2, 1)
    };

    for denom in ESS_GRID_DENOMS {
        let mut all_certified = true;
        for &drop in support {
            let coords: Vec<usize> = (0..face).filter(|&a| br[a] != drop).collect();
            let parts = coords.len();
            let mut max_phi: Option<Rat> = None;
            for comp in compositions(denom, parts) {
                // φ scaled by denom² keeps the scan in integers-over-one-denominator.
                let mut phi = Rat::zero();
                for (ai, &a) in coords.iter().enumerate() {
                    if comp[ai] == 0 {
                        continue;
                    }
                    for (bi, &b) in coords.iter().enumerate() {
                        if comp[bi] == 0 {
                            continue;
                        }
                        phi += &m_mat[a][b] * rat((comp[ai] as i64) * (comp[bi] as i64), 1);
                    }
                }
                phi /= rat((denom as i64) * (denom as i64), 1);
                if phi >= Rat::zero() {
                    let mut weights = vec![Rat::zero(); k];
                    for (ai, &a) in coords.iter().enumerate() {
                        weights[br[a]] += rat(comp[ai] as i64, denom as i64);
                    }
                    let q = MixedStrategy::new(weights).expect("grid point on the face");
                    return Ok(Verdict::fails(Witness::FaceViolation { strategy: q }));
                }
                if max_phi.as_ref().is_none_or(|m| &phi > m) {
                    max_phi = Some(phi);
                }
            }
            let mesh = rat(parts as i64, 2 * denom as i64);
            let bound = max_phi.expect("nonempty grid") + &lipschitz * mesh;
            if bound >= Rat::zero() {
                all_certified = false;
            }
        }
        if all_certified {
            return Ok(Verdict::holds());
        }
    }
    Err(Error::IndeterminateEss {
        max_denom: *ESS_GRID_DENOMS.last().unwrap(),
    })
}

/// Stability against multiple simultaneous mutations, decided by three
/// finite checks with `J = best_response_set(p)`:
///
/// 1. `p` is a Nash equilibrium;
/// 2. vertex dominance — for every `j ∈ J` with `e^j ≠ p` and every pure
///    `l`: `u(p, e^l) ≥ u(e^j, e^l)`;
/// 3. strict diagonal superiority — for every such `j`:
///    `u(p, e^j) > u(e^j, e^j)`.
///
/// Both quantified conditions are affine in the mutant and in the
/// population, so checking them at the vertices is lossless. The witness
/// on failure is the violating `j` (and `l` for condition 2).
pub fn is_mess(game: &SymmetricGame, p: &MixedStrategy) -> Result<Verdict, Error> {
    let nash = nash_verdict(game, p)?;
    if !nash.holds {
        return Ok(nash);
    }
    let k = game.k();
    let br = game.best_response_set(p)?;
    let pure_p = p.as_pure();
    let p_vs_pure: Vec<Rat> = (0..k)
        .map(|l| {
            p.weights()
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(i, w)| w * game.entry(i, l))
                .sum()
        })
        .collect();
    for &j in &br {
        if pure_p == Some(j) {
            continue;
        }
        for (l, incumbent_payoff) in p_vs_pure.iter().enumerate() {
            if incumbent_payoff < game.entry(j, l) {
                return Ok(Verdict::fails(Witness::VertexDominanceViolation {
                    mutant: j,
                    target: l,
                }));
            }
        }
    }
    for &j in &br {
        if pure_p == Some(j) {
            continue;
        }
        if &p_vs_pure[j] <= game.entry(j, j) {
            return Ok(Verdict::fails(Witness::DiagonalSuperiorityViolation {
                mutant: j,
            }));
        }
    }
    Ok(Verdict::holds())
}

/// Local dominance is equivalent to stability against multiple mutations;
/// the oracle module cross-validates the equivalence by direct
/// neighborhood search.
pub fn is_locally_dominant(game: &SymmetricGame, p: &MixedStrategy) -> Result<Verdict, Error> {
    is_mess(game, p)
}

/// Strict local dominance: `u(p,r) > u(s,r)` for all `s, r ≠ p` near `p`.
/// Expanding `s` and `r` along pure directions from a pure `p = e^c`
/// reduces this to: for every `j ≠ c`, either `U[j][c] < U[c][c]`, or
/// `U[j][c] = U[c][c]` and `U[j][l] < U[c][l]` for every `l ≠ c`. Mixed
/// strategies are never strictly locally dominant.
pub fn is_strictly_locally_dominant(
    game: &SymmetricGame,
    p: &MixedStrategy,
) -> Result<Verdict, Error> {
    game.check_strategy(p)?;
    let Some(c) = p.as_pure() else {
        return Ok(Verdict::fails(Witness::NotPure));
    };
    let k = game.k();
    for j in (0..k).filter(|&j| j != c) {
        if game.entry(j, c) > game.entry(c, c) {
            return Ok(Verdict::fails(Witness::StrictDominanceViolation {
                rival: j,
                target: None,
            }));
        }
        if game.entry(j, c) == game.entry(c, c) {
            for l in (0..k).filter(|&l| l != c) {
                if game.entry(j, l) >= game.entry(c, l) {
                    return Ok(Verdict::fails(Witness::StrictDominanceViolation {
                        rival: j,
                        target: Some(l),
                    }));
                }
            }
        }
    }
    Ok(Verdict::holds())
}

/// Result of the empirical disjoint-support strictness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointSupportCheck {
    pub holds: bool,
    /// Violating `(s, r)` pair when `holds` is false.
    pub counterexample: Option<(MixedStrategy, MixedStrategy)>,
}

/// Empirically verifies `u(p, r) > u(s, r)` for every grid point `r ≠ p`
/// within L1 distance `radius` of `p` and every grid strategy `s` whose
/// support is disjoint from `support(p)`. Grid denominator `denom`. This
/// is a spot check only — it is not used by any decision procedure.
///
/// Requires `p` to be stable against multiple mutations.
pub fn check_disjoint_support_strictness(
    game: &SymmetricGame,
    p: &MixedStrategy,
    radius: &Rat,
    denom: u32,
) -> Result<DisjointSupportCheck, Error> {
    if radius <= &Rat::zero() {
        return Err(Error::InvalidGridSpec("radius must be positive".to_string()));
    }
    if denom == 0 {
        return Err(Error::InvalidGridSpec("denominator must be ≥ 1".to_string()));
    }
    let mess = is_mess(game, p)?;
    if !mess.holds {
        return Err(Error::NotMess(
            "disjoint-support strictness is only guaranteed for a multi-mutation-stable strategy"
                .to_string(),
        ));
    }
    let grid = crate::oracle::simplex_grid(game.k(), denom);
    let support = p.support();
    let near: Vec<&MixedStrategy> = grid
        .iter()
        .filter(|r| *r != p && r.l1_distance(p) <= *radius)
        .collect();
    // s ranges over the whole disjoint-support face, not just the ball:
    // for a pure incumbent every disjoint-support strategy sits at L1
    // distance 2, so a radius filter on s would make the check vacuous.
    let disjoint: Vec<&MixedStrategy> = grid
        .iter()
        .filter(|s| support.iter().all(|&i| s.weight(i).is_zero()))
        .collect();
    for s in &disjoint {
        for r in &near {
            let lhs = game.payoff(p, r)?;
            let rhs = game.payoff(s, r)?;
            if lhs <= rhs {
                return Ok(DisjointSupportCheck {
                    holds: false,
                    counterexample: Some(((*s).clone(), (*r).clone())),
                });
            }
        }
    }
    Ok(DisjointSupportCheck {
        holds: true,
        counterexample: None,
    })
}

/// Runs all six predicates and assembles a [`StabilityReport`]. The
/// implication chain is asserted before returning; an indeterminate ESS
/// decision propagates as an error.
pub fn analyze(game: &SymmetricGame, p: &MixedStrategy) -> Result<StabilityReport, Error> {
    let nash = nash_verdict(game, p)?;
    let strict_nash = strict_nash_verdict(game, p)?;
    let ess = is_ess(game, p)?;
    let mess = is_mess(game, p)?;
    let locally_dominant = is_locally_dominant(game, p)?;
    let strictly_locally_dominant = is_strictly_locally_dominant(game, p)?;

    let report = StabilityReport {
        is_nash: nash.holds,
        is_strict_nash: strict_nash.holds,
        is_ess: ess.holds,
        is_mess: mess.holds,
        is_locally_dominant: locally_dominant.holds,
        is_strictly_locally_dominant: strictly_locally_dominant.holds,
        witness: first_failure(&[
            (Flag::Nash, &nash),
            (Flag::StrictNash, &strict_nash),
            (Flag::Ess, &ess),
            (Flag::Mess, &mess),
            (Flag::LocallyDominant, &locally_dominant),
            (Flag::StrictlyLocallyDominant, &strictly_locally_dominant),
        ]),
    };

    assert!(
        !report.is_strict_nash || report.is_strictly_locally_dominant,
        "strict Nash must be strictly locally dominant"
    );
    assert!(
        !report.is_strictly_locally_dominant || report.is_locally_dominant,
        "strict local dominance must imply local dominance"
    );
    assert_eq!(
        report.is_mess, report.is_locally_dominant,
        "multi-mutation stability must coincide with local dominance"
    );
    assert!(!report.is_mess || report.is_ess, "M-ESS must be an ESS");
    assert!(!report.is_ess || report.is_nash, "ESS must be a Nash equilibrium");
    let all_hold = report.is_nash
        && report.is_strict_nash
        && report.is_ess
        && report.is_mess
        && report.is_locally_dominant
        && report.is_strictly_locally_dominant;
    assert!(
        all_hold || report.witness.is_some(),
        "a false flag must carry a witness"
    );

    Ok(report)
}

fn first_failure(verdicts: &[(Flag, &Verdict)]) -> Option<FailureWitness> {
    verdicts.iter().find_map(|(flag, verdict)| {
        if verdict.holds {
            None
        } else {
            verdict.witness.clone().map(|detail| FailureWitness {
                flag: *flag,
                detail,
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{example1, example2, hawk_dove, random_game};
    use crate::rat::int;

    fn even_mix() -> MixedStrategy {
        MixedStrategy::parse("[1/2,1/2]").unwrap()
    }

    #[test]
    fn anticoordination_even_mix_is_ess_but_not_multi_mutation_stable() {
        let game = example1();
        let p = even_mix();
        assert!(is_ess(&game, &p).unwrap().holds);
        let mess = is_mess(&game, &p).unwrap();
        assert!(!mess.holds);
        // First vertex already violates vertex dominance (against e^2).
        assert_eq!(
            mess.witness,
            Some(Witness::VertexDominanceViolation { mutant: 0, target: 1 })
        );
    }

    #[test]
    fn anticoordination_vertices_are_not_ess() {
        let game = example1();
        let verdict = is_ess(&game, &MixedStrategy::pure(2, 0)).unwrap();
        assert!(!verdict.holds);
        assert!(matches!(verdict.witness, Some(Witness::BetterPureReply { index: 1 })));
    }

    #[test]
    fn degenerate_game_vertex_is_mess_and_strictly_locally_dominant() {
        let game = example2();
        let p = MixedStrategy::pure(2, 1);
        assert!(is_ess(&game, &p).unwrap().holds);
        assert!(is_mess(&game, &p).unwrap().holds);
        assert!(is_strictly_locally_dominant(&game, &p).unwrap().holds);
        assert!(!strict_nash_verdict(&game, &p).unwrap().holds);
    }

    #[test]
    fn mixed_strategies_are_never_multi_mutation_stable() {
        let hd = hawk_dove(&int(2), &int(4)).unwrap();
        assert!(!is_mess(&hd, &even_mix()).unwrap().holds);
        for seed in 0..20 {
            let game = random_game(3, seed);
            let p = MixedStrategy::parse("[1/3,1/3,1/3]").unwrap();
            assert!(!is_mess(&game, &p).unwrap().holds, "seed {seed}");
        }
    }

    #[test]
    fn strict_nash_is_strictly_locally_dominant() {
        let game = SymmetricGame::from_ints(&[&[1, 0, 0], &[0, 2, 0], &[-1, -1, 3]]);
        for c in 0..3 {
            let p = MixedStrategy::pure(3, c);
            assert!(game.is_strict_nash(&p).unwrap());
            assert!(is_strictly_locally_dominant(&game, &p).unwrap().holds);
        }
    }

    #[test]
    fn local_dominance_matches_multi_mutation_stability_on_the_examples() {
        assert!(!is_locally_dominant(&example1(), &even_mix()).unwrap().holds);
        assert!(
            is_locally_dominant(&example2(), &MixedStrategy::pure(2, 1))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn interior_face_decision_handles_classic_games() {
        // Uniform mix of the negative-identity game: every direction loses.
        let game = SymmetricGame::from_ints(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        let uniform = MixedStrategy::parse("[1/3,1/3,1/3]").unwrap();
        assert!(is_ess(&game, &uniform).unwrap().holds);

        // Coordination game: the uniform mix is invadable.
        let coord = SymmetricGame::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let verdict = is_ess(&coord, &uniform).unwrap();
        assert!(!verdict.holds);
        let Some(Witness::FaceViolation { strategy: q }) = verdict.witness else {
            panic!("expected a face witness");
        };
        // The witness replays: u(p,q) ≤ u(q,q).
        assert!(coord.payoff(&uniform, &q).unwrap() <= coord.payoff(&q, &q).unwrap());

        // Cyclic game: the quadratic form vanishes, so the uniform mix is a
        // Nash equilibrium but no ESS.
        let cyclic = SymmetricGame::from_ints(&[&[0, -1, 1], &[1, 0, -1], &[-1, 1, 0]]);
        assert!(cyclic.is_nash(&uniform).unwrap());
        let verdict = is_ess(&cyclic, &uniform).unwrap();
        assert!(!verdict.holds);
    }

    #[test]
    fn interior_face_decision_scales_to_four_strategies() {
        let uniform = MixedStrategy::parse("[1/4,1/4,1/4,1/4]").unwrap();
        let lose_everywhere = SymmetricGame::from_ints(&[
            &[-1, 0, 0, 0],
            &[0, -1, 0, 0],
            &[0, 0, -1, 0],
            &[0, 0, 0, -1],
        ]);
        assert!(is_ess(&lose_everywhere, &uniform).unwrap().holds);

        let coordination = SymmetricGame::from_ints(&[
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ]);
        let verdict = is_ess(&coordination, &uniform).unwrap();
        assert!(!verdict.holds);
        let Some(Witness::FaceViolation { strategy: q }) = verdict.witness else {
            panic!("expected a face witness");
        };
        assert!(
            coordination.payoff(&uniform, &q).unwrap()
                <= coordination.payoff(&q, &q).unwrap()
        );
    }

    #[test]
    fn boundary_cone_grid_certifies_and_refutes() {
        // e^3 with the whole simplex as best responses; both rivals lose
        // quadratically, so e^3 is an ESS (certified by the grid).
        let game = SymmetricGame::from_ints(&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 0]]);
        let p = MixedStrategy::pure(3, 2);
        assert_eq!(game.best_response_set(&p).unwrap(), vec![0, 1, 2]);
        assert!(is_ess(&game, &p).unwrap().holds);
        assert!(is_mess(&game, &p).unwrap().holds);

        // Flipping one diagonal entry makes e^1 profitable: refuted.
        let bad = SymmetricGame::from_ints(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, 0]]);
        let verdict = is_ess(&bad, &p).unwrap();
        assert!(!verdict.holds);
        let Some(Witness::FaceViolation { strategy: q }) = verdict.witness else {
            panic!("expected a face witness");
        };
        assert!(bad.payoff(&p, &q).unwrap() <= bad.payoff(&q, &q).unwrap());
        assert!(!is_mess(&bad, &p).unwrap().holds);
    }

    #[test]
    fn degenerate_boundary_cone_is_reported_indeterminate() {
        // Every strategy is a best response to e^3 and the face quadratic is
        // -(λ_1 - 2λ_2)^2, which vanishes along a line that never meets a
        // power-of-two grid: the fallback can neither refute nor certify and
        // must say so instead of guessing.
        let game = SymmetricGame::from_ints(&[&[-1, 2, 0], &[2, -4, 0], &[0, 0, 0]]);
        let p = MixedStrategy::pure(3, 2);
        assert_eq!(game.best_response_set(&p).unwrap(), vec![0, 1, 2]);
        let err = is_ess(&game, &p).unwrap_err();
        assert_eq!(err, Error::IndeterminateEss { max_denom: 64 });
        // The combined report propagates the indeterminate status.
        assert_eq!(
            analyze(&game, &p).unwrap_err(),
            Error::IndeterminateEss { max_denom: 64 }
        );
        // The multi-mutation decision is unaffected: vertex dominance fails.
        assert!(!is_mess(&game, &p).unwrap().holds);
    }

    #[test]
    fn disjoint_support_strictness_on_the_examples() {
        let game = example2();
        let p = MixedStrategy::pure(2, 1);
        let check = check_disjoint_support_strictness(&game, &p, &rat(1, 4), 8).unwrap();
        assert!(check.holds);

        let wide = SymmetricGame::from_ints(&[&[1, 1, 1], &[0, 0, 0], &[0, 0, 0]]);
        let p = MixedStrategy::pure(3, 0);
        let check = check_disjoint_support_strictness(&wide, &p, &rat(1, 4), 8).unwrap();
        assert!(check.holds);

        // Degenerate single-strategy game: no disjoint-support mutant exists.
        let tiny = SymmetricGame::from_ints(&[&[0]]);
        let check = check_disjoint_support_strictness(
            &tiny,
            &MixedStrategy::pure(1, 0),
            &rat(1, 4),
            8,
        )
        .unwrap();
        assert!(check.holds);

        // Precondition: the even mix of the anti-coordination game is not
        // multi-mutation stable.
        let err =
            check_disjoint_support_strictness(&example1(), &even_mix(), &rat(1, 4), 8)
                .unwrap_err();
        assert!(matches!(err, Error::NotMess(_)));
    }

    #[test]
    fn analyze_assembles_consistent_reports() {
        let report = analyze(&example1(), &even_mix()).unwrap();
        assert!(report.is_nash);
        assert!(!report.is_strict_nash);
        assert!(report.is_ess);
        assert!(!report.is_mess);
        assert!(!report.is_locally_dominant);
        assert!(!report.is_strictly_locally_dominant);
        assert_eq!(report.witness.as_ref().unwrap().flag, Flag::StrictNash);

        let report = analyze(&example2(), &MixedStrategy::pure(2, 1)).unwrap();
        assert!(report.is_nash && report.is_ess && report.is_mess);
        assert!(report.is_locally_dominant && report.is_strictly_locally_dominant);
        assert!(!report.is_strict_nash);
        assert_eq!(report.witness.as_ref().unwrap().flag, Flag::StrictNash);

        let trivial = SymmetricGame::from_ints(&[&[0]]);
        let report = analyze(&trivial, &MixedStrategy::pure(1, 0)).unwrap();
        assert!(
            report.is_nash
                && report.is_strict_nash
                && report.is_ess
                && report.is_mess
                && report.is_locally_dominant
                && report.is_strictly_locally_dominant
        );
        assert!(report.witness.is_none());
    }

    #[test]
    fn report_json_round_trips() {
        let report = analyze(&example1(), &even_mix()).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: StabilityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
    }
}
