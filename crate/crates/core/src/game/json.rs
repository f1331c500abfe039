//! JSON form of a game: `{"players": N, "actions": [..], "payoffs": [[..], ..]}`
//! with payoffs in profile-index order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::normal_form::NormalFormGame;
use super::shape::GameShape;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameJson {
    pub players: usize,
    pub actions: Vec<usize>,
    pub payoffs: Vec<Vec<f64>>,
}

impl<T: Scalar> From<&NormalFormGame<T>> for GameJson {
    fn from(g: &NormalFormGame<T>) -> Self {
        Self {
            players: g.num_players(),
            actions: g.shape().actions().to_vec(),
            payoffs: g
                .all_payoffs()
                .iter()
                .map(|u| u.iter().map(|x| x.to_f64_lossy()).collect())
                .collect(),
        }
    }
}

impl GameJson {
    pub fn into_game<T: Scalar>(self) -> Result<NormalFormGame<T>> {
        if self.players != self.actions.len() {
            return Err(Error::InvalidShape(format!(
                "\"players\" is {} but \"actions\" lists {} entries",
                self.players,
                self.actions.len()
            )));
        }
        let shape = GameShape::new(self.actions)?;
        let payoffs = self
            .payoffs
            .into_iter()
            .map(|u| u.into_iter().map(T::of).collect())
            .collect();
        NormalFormGame::new(shape, payoffs)
    }
}

impl<T: Scalar> NormalFormGame<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GameJson::from(self)).expect("game serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str::<GameJson>(s)?.into_game()
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
