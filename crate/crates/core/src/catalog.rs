//! Built-in example games and deterministic random instances.

use num_traits::Zero;

use crate::error::Error;
use crate::game::SymmetricGame;
use crate::rat::{int, rat, Rat};

/// 2×2 anti-coordination game `[[-1,0],[0,-1]]`. Its unique ESS is the
/// even mix (1/2, 1/2), which is nonetheless defeated by a pair of opposed
/// mutants arriving together.
pub fn example1() -> SymmetricGame {
    SymmetricGame::from_ints(&[&[-1, 0], &[0, -1]])
}

/// 2×2 game `[[-1,0],[0,0]]`. The pure strategy e^2 is not a strict
/// equilibrium (every strategy is a best response to it) yet it repels any
/// number of simultaneous mutations.
pub fn example2() -> SymmetricGame {
    SymmetricGame::from_ints(&[&[-1, 0], &[0, 0]])
}

/// Hawk-Dove game `[[(V-C)/2, V], [0, V/2]]` for resource value `V` and
/// fight cost `C` with `0 < V < C`. Its unique ESS is mixed.
pub fn hawk_dove(v: &Rat, c: &Rat) -> Result<SymmetricGame, Error> {
    if v <= &Rat::zero() || v >= c {
        return Err(Error::Parse {
            field: "hawk-dove".to_string(),
            message: "parameters must satisfy 0 < V < C".to_string(),
        });
    }
    let half = rat(1, 2);
    let payoffs = vec![
        vec![(v - c) * &half, v.clone()],
        vec![Rat::zero(), v * &half],
    ];
    SymmetricGame::new(payoffs, Some(vec!["hawk".to_string(), "dove".to_string()]))
}

/// Minimal deterministic PRNG (splitmix64). Hand-rolled so that generated
/// games are reproducible across platforms and dependency upgrades.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..n` (n > 0), by rejection.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }
}

/// A k×k game with integer entries drawn uniformly from {-3, ..., 3},
/// deterministic in `seed`.
pub fn random_game(k: usize, seed: u64) -> SymmetricGame {
    let mut rng = SplitMix64::new(seed);
    let payoffs = (0..k)
        .map(|_| {
            (0..k)
                .map(|_| int(rng.next_below(7) as i64 - 3))
                .collect()
        })
        .collect();
    SymmetricGame::new(payoffs, None).expect("square by construction")
}
