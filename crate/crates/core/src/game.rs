//! Symmetric two-player games with exact rational payoffs.
//!
//! A game is a k×k matrix `U` with `U[i][j] = u(e^i, e^j)`, the payoff to a
//! player of pure strategy `i` against pure strategy `j`. Mixed strategies
//! live on the (k−1)-simplex and payoffs extend bilinearly:
//! `u(p, q) = Σ_{i,j} p_i q_j U[i][j]`, evaluated exactly.
//!
//! All types here are immutable after construction and safe to share
//! across threads.

use std::fmt;

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;
use crate::rat::{format_rat, parse_rat, Rat};

/// A point on the probability simplex with exact rational weights.
///
/// Invariants enforced at construction: every weight is ≥ 0, the weights
/// sum to exactly 1, and the vector is nonempty. Strategies compare by
/// exact weight equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MixedStrategy {
    weights: Vec<Rat>,
}

impl MixedStrategy {
    pub fn new(weights: Vec<Rat>) -> Result<Self, Error> {
        if weights.is_empty() {
            return Err(Error::InvalidStrategy("empty weight vector".to_string()));
        }
        if let Some(i) = weights.iter().position(|w| w < &Rat::zero()) {
            return Err(Error::InvalidStrategy(format!(
                "weight {i} is negative ({})",
                format_rat(&weights[i])
            )));
        }
        let total: Rat = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidStrategy(format!(
                "weights sum to {}, expected 1",
                format_rat(&total)
            )));
        }
        Ok(Self { weights })
    }

    /// The pure strategy `e^index` in a k-strategy game.
    pub fn pure(k: usize, index: usize) -> Self {
        assert!(index < k, "pure strategy index out of range");
        let mut weights = vec![Rat::zero(); k];
        weights[index] = Rat::one();
        Self { weights }
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rat {
        &self.weights[i]
    }

    /// Indices carrying positive weight. Never empty.
    pub fn support(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// `Some(i)` if the strategy is the pure strategy `e^i`.
    pub fn as_pure(&self) -> Option<usize> {
        let support = self.support();
        match support.as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }

    pub fn l1_distance(&self, other: &MixedStrategy) -> Rat {
        self.weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| {
                let d = a - b;
                if d < Rat::zero() {
                    -d
                } else {
                    d
                }
            })
            .sum()
    }

    /// Applies a relabeling of pure strategies: the returned strategy puts
    /// `perm[i]` where this one put `i`.
    pub fn permute(&self, perm: &[usize]) -> MixedStrategy {
        assert_eq!(perm.len(), self.k());
        let mut weights = vec![Rat::zero(); self.k()];
        for (i, w) in self.weights.iter().enumerate() {
            weights[perm[i]] = w.clone();
        }
        MixedStrategy { weights }
    }

    /// Parses a strategy literal `[r, r, ...]` of rationals summing to 1.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let trimmed = text.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse {
                field: "strategy".to_string(),
                message: format!("expected [r, r, ...], got {trimmed:?}"),
            })?;
        let weights = inner
            .split(',')
            .enumerate()
            .map(|(i, part)| parse_rat(&format!("strategy[{i}]"), part))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(weights)
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", format_rat(w))?;
        }
        write!(f, "]")
    }
}

impl Serialize for MixedStrategy {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.weights.iter().map(format_rat).collect();
        strings.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MixedStrategy {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(deserializer)?;
        let weights = strings
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rat(&format!("strategy[{i}]"), s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        MixedStrategy::new(weights).map_err(D::Error::custom)
    }
}

/// On-disk form of a game document.
#[derive(Serialize, Deserialize)]
struct RawGame {
    k: usize,
    payoffs: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

/// A finite symmetric two-player game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricGame {
    payoffs: Vec<Vec<Rat>>,
    labels: Option<Vec<String>>,
}

impl SymmetricGame {
    pub fn new(payoffs: Vec<Vec<Rat>>, labels: Option<Vec<String>>) -> Result<Self, Error> {
        let k = payoffs.len();
        if k == 0 {
            return Err(Error::Parse {
                field: "payoffs".to_string(),
                message: "matrix must have at least one row".to_string(),
            });
        }
        for (i, row) in payoffs.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Parse {
                    field: format!("payoffs[{i}]"),
                    message: format!("row has {} entries, expected {k} (matrix must be square)", row.len()),
                });
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != k {
                return Err(Error::Parse {
                    field: "labels".to_string(),
                    message: format!("expected {k} labels, got {}", labels.len()),
                });
            }
        }
        Ok(Self { payoffs, labels })
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let payoffs = rows
            .iter()
            .map(|row| row.iter().map(|&n| crate::rat::int(n)).collect())
            .collect();
        Self::new(payoffs, None).expect("square integer matrix")
    }

    /// Parses the JSON game document
    /// `{"k": <int>, "payoffs": [[<rat>, ...], ...], "labels": [...]?}`
    /// where `<rat>` is a string `"a/b"` or `"a"`. Entries are parsed
    /// exactly; no float round-trip is involved.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let raw: RawGame = serde_json::from_str(text).map_err(|e| Error::Parse {
            field: "document".to_string(),
            message: e.to_string(),
        })?;
        if raw.k == 0 {
            return Err(Error::Parse {
                field: "k".to_string(),
                message: "k must be at least 1".to_string(),
            });
        }
        if raw.payoffs.len() != raw.k {
            return Err(Error::Parse {
                field: "payoffs".to_string(),
                message: format!("expected {} rows, got {}", raw.k, raw.payoffs.len()),
            });
        }
        let mut payoffs = Vec::with_capacity(raw.k);
        for (i, row) in raw.payoffs.iter().enumerate() {
            if row.len() != raw.k {
                return Err(Error::Parse {
                    field: format!("payoffs[{i}]"),
                    message: format!("row has {} entries, expected {} (matrix must be square)", row.len(), raw.k),
                });
            }
            let mut parsed = Vec::with_capacity(raw.k);
            for (j, cell) in row.iter().enumerate() {
                parsed.push(parse_rat(&format!("payoffs[{i}][{j}]"), cell)?);
            }
            payoffs.push(parsed);
        }
        Self::new(payoffs, raw.labels)
    }

    pub fn to_json(&self) -> String {
        let raw = RawGame {
            k: self.k(),
            payoffs: self
                .payoffs
                .iter()
                .map(|row| row.iter().map(format_rat).collect())
                .collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("game serialization cannot fail")
    }

    pub fn k(&self) -> usize {
        self.payoffs.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// `u(e^i, e^j)`.
    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.payoffs[i][j]
    }

    pub fn check_strategy(&self, p: &MixedStrategy) -> Result<(), Error> {
        if p.k() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                got: p.k(),
            });
        }
        Ok(())
    }

    /// `u(e^i, q)` — payoff of pure strategy `i` against `q`.
    pub(crate) fn pure_payoff_against(&self, i: usize, q: &MixedStrategy) -> Rat {
        self.payoffs[i]
            .iter()
            .zip(q.weights())
            .filter(|(_, w)| !w.is_zero())
            .map(|(u, w)| u * w)
            .sum()
    }

    /// `u(p, q) = Σ_{i,j} p_i q_j U[i][j]`, exact.
    pub fn payoff(&self, p: &MixedStrategy, q: &MixedStrategy) -> Result<Rat, Error> {
        self.check_strategy(p)?;
        self.check_strategy(q)?;
        Ok(p.weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(i, w)| w * self.pure_payoff_against(i, q))
            .sum())
    }

    /// Vertex set of the best-response face: `argmax_j u(e^j, p)`, as sorted
    /// indices. Payoffs are affine in the first argument, so the full
    /// best-response set `BR(p)` is exactly the convex hull of these
    /// vertices and the index set is a lossless description.
    pub fn best_response_set(&self, p: &MixedStrategy) -> Result<Vec<usize>, Error> {
        self.check_strategy(p)?;
        let values: Vec<Rat> = (0..self.k())
            .map(|j| self.pure_payoff_against(j, p))
            .collect();
        let best = values.iter().max().expect("k >= 1").clone();
        Ok(values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == best)
            .map(|(j, _)| j)
            .collect())
    }

    /// Symmetric Nash equilibrium test: `p ∈ BR(p)`, equivalently
    /// `support(p) ⊆ best_response_set(p)`.
    pub fn is_nash(&self, p: &MixedStrategy) -> Result<bool, Error> {
        let br = self.best_response_set(p)?;
        Ok(p.support().iter().all(|i| br.binary_search(i).is_ok()))
    }

    /// Strict symmetric Nash equilibrium: `p` is pure, say `e^c`, and `c`
    /// is the unique best response to `e^c`.
    pub fn is_strict_nash(&self, p: &MixedStrategy) -> Result<bool, Error> {
        self.check_strategy(p)?;
        let Some(c) = p.as_pure() else {
            return Ok(false);
        };
        Ok(self.best_response_set(p)? == vec![c])
    }

    /// The affinely transformed game `α·U + c` (rational `α > 0`). Best
    /// responses and every stability verdict are invariant under this.
    pub fn scale_shift(&self, alpha: &Rat, shift: &Rat) -> SymmetricGame {
        assert!(alpha > &Rat::zero(), "scale must be positive");
        SymmetricGame {
            payoffs: self
                .payoffs
                .iter()
                .map(|row| row.iter().map(|u| alpha * u + shift).collect())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// Relabels pure strategies: entry (i, j) moves to (perm\[i\], perm\[j\]).
    pub fn permute(&self, perm: &[usize]) -> SymmetricGame {
        let k = self.k();
        assert_eq!(perm.len(), k);
        let mut payoffs = vec![vec![Rat::zero(); k]; k];
        for i in 0..k {
            for j in 0..k {
                payoffs[perm[i]][perm[j]] = self.payoffs[i][j].clone();
            }
        }
        let labels = self.labels.as_ref().map(|labels| {
            let mut out = vec![String::new(); k];
            for (i, label) in labels.iter().enumerate() {
                out[perm[i]] = label.clone();
            }
            out
        });
        SymmetricGame { payoffs, labels }
    }
}

impl Serialize for SymmetricGame {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let raw = RawGame {
            k: self.k(),
            payoffs: self
                .payoffs
                .iter()
                .map(|row| row.iter().map(format_rat).collect())
                .collect(),
            labels: self.labels.clone(),
        };
        raw.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymmetricGame {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawGame::deserialize(deserializer)?;
        let text = serde_json::to_string(&raw).map_err(D::Error::custom);
        SymmetricGame::parse(&text?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn mixed(parts: &[(i64, i64)]) -> MixedStrategy {
        MixedStrategy::new(parts.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap()
    }

    #[test]
    fn parses_the_anticoordination_example() {
        let game =
            SymmetricGame::parse(r#"{"k":2,"payoffs":[["-1","0"],["0","-1"]]}"#).unwrap();
        assert_eq!(game.k(), 2);
        assert_eq!(*game.entry(0, 0), int(-1));
        assert_eq!(*game.entry(0, 1), int(0));
    }

    #[test]
    fn parses_degenerate_single_strategy_game() {
        let game = SymmetricGame::parse(r#"{"k":1,"payoffs":[["0"]]}"#).unwrap();
        assert_eq!(game.k(), 1);
    }

    #[test]
    fn rejects_non_square_matrix() {
        let err = SymmetricGame::parse(r#"{"k":2,"payoffs":[["1"]]}"#).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err =
            SymmetricGame::parse(r#"{"k":2,"payoffs":[["1","2"],["3"]]}"#).unwrap_err();
        assert!(err.to_string().contains("payoffs[1]"), "{err}");
    }

    #[test]
    fn parse_error_names_the_offending_cell() {
        let err =
            SymmetricGame::parse(r#"{"k":2,"payoffs":[["1","x"],["3","4"]]}"#).unwrap_err();
        assert!(err.to_string().starts_with("payoffs[0][1]"), "{err}");
    }

    #[test]
    fn game_json_round_trips() {
        let text = r#"{"k":2,"payoffs":[["-1","0"],["0","-1"]],"labels":["a","b"]}"#;
        let game = SymmetricGame::parse(text).unwrap();
        let again = SymmetricGame::parse(&game.to_json()).unwrap();
        assert_eq!(game, again);
    }

    #[test]
    fn strategy_simplex_invariants() {
        assert!(MixedStrategy::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(MixedStrategy::new(vec![rat(3, 2), rat(-1, 2)]).is_err());
        assert!(MixedStrategy::new(vec![]).is_err());
        let p = mixed(&[(1, 2), (1, 2)]);
        assert_eq!(p.support(), vec![0, 1]);
        assert_eq!(p.as_pure(), None);
        assert_eq!(MixedStrategy::pure(3, 2).as_pure(), Some(2));
    }

    #[test]
    fn strategy_literals_parse_and_display() {
        let p = MixedStrategy::parse("[1/2, 1/2]").unwrap();
        assert_eq!(p, mixed(&[(1, 2), (1, 2)]));
        assert_eq!(p.to_string(), "[1/2,1/2]");
        assert!(MixedStrategy::parse("[1/2,1/3]").is_err());
        assert!(MixedStrategy::parse("1/2,1/2").is_err());
    }

    #[test]
    fn payoff_on_pure_strategies_is_the_matrix_entry() {
        let game = SymmetricGame::from_ints(&[&[-1, 0], &[0, -1]]);
        for i in 0..2 {
            for j in 0..2 {
                let p = MixedStrategy::pure(2, i);
                let q = MixedStrategy::pure(2, j);
                assert_eq!(game.payoff(&p, &q).unwrap(), *game.entry(i, j));
            }
        }
    }

    #[test]
    fn payoff_against_equal_mutant_mixture_is_exactly_minus_half() {
        // Anti-coordination game, even incumbent, two opposed mutants in
        // equal proportions ε: the population mixture collapses back to the
        // incumbent, so the payoff stays -1/2 for any ε.
        let game = SymmetricGame::from_ints(&[&[-1, 0], &[0, -1]]);
        let p = mixed(&[(1, 2), (1, 2)]);
        let r1 = mixed(&[(1, 4), (3, 4)]);
        let r2 = mixed(&[(3, 4), (1, 4)]);
        for eps in [rat(1, 10), rat(1, 4)] {
            let weights: Vec<Rat> = (0..2)
                .map(|i| {
                    &eps * r1.weight(i)
                        + &eps * r2.weight(i)
                        + (int(1) - &eps - &eps) * p.weight(i)
                })
                .collect();
            let w = MixedStrategy::new(weights).unwrap();
            assert_eq!(game.payoff(&p, &w).unwrap(), rat(-1, 2));
        }
    }

    #[test]
    fn degenerate_game_payoff_is_bilinear_product() {
        // U = [[-1,0],[0,0]] gives u(q, r) = -q_1 r_1.
        let game = SymmetricGame::from_ints(&[&[-1, 0], &[0, 0]]);
        let q = mixed(&[(1, 3), (2, 3)]);
        let r = mixed(&[(3, 5), (2, 5)]);
        assert_eq!(game.payoff(&q, &r).unwrap(), -(rat(1, 3) * rat(3, 5)));
    }

    #[test]
    fn best_response_sets_match_hand_computation() {
        // Full simplex of best responses at a degenerate vertex.
        let game = SymmetricGame::from_ints(&[&[-1, 0], &[0, 0]]);
        assert_eq!(
            game.best_response_set(&MixedStrategy::pure(2, 1)).unwrap(),
            vec![0, 1]
        );
        // A strictly dominant row is the unique best response everywhere.
        let dominant = SymmetricGame::from_ints(&[&[0, 0], &[1, 1]]);
        for p in [
            MixedStrategy::pure(2, 0),
            MixedStrategy::pure(2, 1),
            mixed(&[(1, 2), (1, 2)]),
        ] {
            assert_eq!(dominant.best_response_set(&p).unwrap(), vec![1]);
        }
        // Symmetry forces a tie at the even mix of the anti-coordination game.
        let anti = SymmetricGame::from_ints(&[&[-1, 0], &[0, -1]]);
        assert_eq!(
            anti.best_response_set(&mixed(&[(1, 2), (1, 2)])).unwrap(),
            vec![0, 1]
        );
    }

    #[test]
    fn nash_and_strict_nash() {
        let anti = SymmetricGame::from_ints(&[&[-1, 0], &[0, -1]]);
        assert!(anti.is_nash(&mixed(&[(1, 2), (1, 2)])).unwrap());
        assert!(!anti.is_nash(&MixedStrategy::pure(2, 0)).unwrap());

        // Non-unique best response at e^2 of the degenerate game: not strict.
        let degenerate = SymmetricGame::from_ints(&[&[-1, 0], &[0, 0]]);
        assert!(!degenerate.is_strict_nash(&MixedStrategy::pure(2, 1)).unwrap());
        assert!(degenerate.is_nash(&MixedStrategy::pure(2, 1)).unwrap());

        // Dominant diagonal: e^2 is strict.
        let strict = SymmetricGame::from_ints(&[&[1, 0], &[2, 3]]);
        assert!(strict.is_strict_nash(&MixedStrategy::pure(2, 1)).unwrap());
        assert!(!strict.is_strict_nash(&mixed(&[(1, 2), (1, 2)])).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let game = SymmetricGame::from_ints(&[&[0]]);
        let p = mixed(&[(1, 2), (1, 2)]);
        assert_eq!(
            game.payoff(&p, &p).unwrap_err(),
            Error::DimensionMismatch { expected: 1, got: 2 }
        );
        assert!(game.best_response_set(&p).is_err());
    }
}
