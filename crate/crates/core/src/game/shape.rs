use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest player count accepted by [`GameShape::new`].
pub const MAX_PLAYERS: usize = 4;

/// Player count and per-player action counts of a finite game.
///
/// Profiles are indexed in mixed radix with player 0's action as the most
/// significant digit, so for a 2x3 game the profile `(1, 2)` has index `5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct GameShape {
    actions: Vec<usize>,
    strides: Vec<usize>,
    total_profiles: usize,
}

impl GameShape {
    pub fn new(actions: Vec<usize>) -> Result<Self> {
        if actions.len() < 2 {
            return Err(Error::InvalidShape(format!(
                "need at least 2 players, got {}",
                actions.len()
            )));
        }
        if actions.len() > MAX_PLAYERS {
            return Err(Error::InvalidShape(format!(
                "at most {MAX_PLAYERS} players are supported, got {}",
                actions.len()
            )));
        }
        if let Some(p) = actions.iter().position(|&m| m < 2) {
            return Err(Error::InvalidShape(format!(
                "player {p} has {} action(s); every player needs at least 2",
                actions[p]
            )));
        }
        let total_profiles = actions
            .iter()
            .try_fold(1usize, |acc, &m| acc.checked_mul(m))
            .ok_or_else(|| Error::InvalidShape("profile count overflows".into()))?;
        // edge count must be representable too
        let deviations: usize = actions.iter().map(|m| m - 1).sum();
        (total_profiles / 2)
            .checked_mul(deviations)
            .ok_or_else(|| Error::InvalidShape("edge count overflows".into()))?;

        let mut strides = vec![1usize; actions.len()];
        for i in (0..actions.len() - 1).rev() {
            strides[i] = strides[i + 1] * actions[i + 1];
        }
        Ok(Self {
            actions,
            strides,
            total_profiles,
        })
    }

    /// `n` players with `m` actions each.
    pub fn uniform(n: usize, m: usize) -> Result<Self> {
        Self::new(vec![m; n])
    }

    #[inline]
    pub fn num_players(&self) -> usize {
        self.actions.len()
    }

    #[inline]
    pub fn actions(&self) -> &[usize] {
        &self.actions
    }

    #[inline]
    pub fn num_actions(&self, player: usize) -> usize {
        self.actions[player]
    }

    #[inline]
    pub fn total_profiles(&self) -> usize {
        self.total_profiles
    }

    /// Number of unilateral deviations, `A/2 * sum_i (m_i - 1)`.
    pub fn total_edges(&self) -> usize {
        // each player contributes (A / m_i) * C(m_i, 2) edges; the sum equals
        // the closed form and is exact even when A is odd
        self.actions
            .iter()
            .map(|&m| (self.total_profiles / m) * (m * (m - 1) / 2))
            .sum()
    }

    /// Distance in profile-index space between consecutive actions of `player`.
    #[inline]
    pub fn stride(&self, player: usize) -> usize {
        self.strides[player]
    }

    #[inline]
    pub fn action_of(&self, index: usize, player: usize) -> usize {
        (index / self.strides[player]) % self.actions[player]
    }

    /// Index of the profile obtained from `index` by switching `player` to `action`.
    #[inline]
    pub fn with_action(&self, index: usize, player: usize, action: usize) -> usize {
        let current = self.action_of(index, player);
        index - current * self.strides[player] + action * self.strides[player]
    }

    pub fn profile_index(&self, profile: &PureProfile) -> Result<usize> {
        self.index_of(profile.actions())
    }

    pub fn index_of(&self, actions: &[usize]) -> Result<usize> {
        if actions.len() != self.num_players() {
            return Err(Error::InvalidProfile(format!(
                "profile has {} entries, game has {} players",
                actions.len(),
                self.num_players()
            )));
        }
        let mut index = 0;
        for (i, (&a, &m)) in actions.iter().zip(&self.actions).enumerate() {
            if a >= m {
                return Err(Error::InvalidProfile(format!(
                    "player {i} action {a} out of range 0..{m}"
                )));
            }
            index = index * m + a;
        }
        Ok(index)
    }

    pub fn profile_from_index(&self, index: usize) -> PureProfile {
        assert!(index < self.total_profiles, "profile index out of range");
        PureProfile(
            (0..self.num_players())
                .map(|i| self.action_of(index, i))
                .collect(),
        )
    }

    /// Compact label such as `3x3` or `2x2x2` (one entry per player).
    pub fn label(&self) -> String {
        self.actions
            .iter()
            .map(|m| m.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }
}

impl fmt::Display for GameShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl TryFrom<Vec<usize>> for GameShape {
    type Error = Error;

    fn try_from(actions: Vec<usize>) -> Result<Self> {
        Self::new(actions)
    }
}

impl From<GameShape> for Vec<usize> {
    fn from(shape: GameShape) -> Self {
        shape.actions
    }
}

/// One action index per player.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PureProfile(pub Vec<usize>);

impl PureProfile {
    pub fn new(actions: Vec<usize>) -> Self {
        Self(actions)
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for PureProfile {
    fn from(v: Vec<usize>) -> Self {
        Self(v)
    }
}

impl fmt::Display for PureProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}
