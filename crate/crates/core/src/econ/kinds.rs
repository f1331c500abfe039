use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::Scalar;

/// The five discretized contest and auction formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EconKind {
    /// First-price sealed bid.
    Fpsb,
    /// Second-price sealed bid.
    Spsb,
    AllPay,
    #[serde(rename = "woa")]
    WarOfAttrition,
    Tullock,
}

impl EconKind {
    pub const ALL: [EconKind; 5] = [
        EconKind::Fpsb,
        EconKind::Spsb,
        EconKind::AllPay,
        EconKind::WarOfAttrition,
        EconKind::Tullock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EconKind::Fpsb => "fpsb",
            EconKind::Spsb => "spsb",
            EconKind::AllPay => "allpay",
            EconKind::WarOfAttrition => "woa",
            EconKind::Tullock => "tullock",
        }
    }

    /// Payoff to `player` at bid profile `bids` when each player `j` values
    /// the prize at `values[j]`.
    pub fn ex_post_utility<T: Scalar>(self, bids: &[T], values: &[T], player: usize) -> T {
        let own = bids[player];
        let v = values[player];
        if self == EconKind::Tullock {
            let total: T = bids.iter().copied().sum();
            return if total > T::zero() {
                v * own / total - own
            } else {
                v / T::of_usize(bids.len())
            };
        }
        let x = allocation(bids).x[player];
        let highest_other = bids
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != player)
            .map(|(_, &b)| b)
            .fold(T::neg_infinity(), T::max);
        match self {
            EconKind::Fpsb => x * (v - own),
            EconKind::Spsb => x * (v - highest_other),
            EconKind::AllPay => x * v - own,
            EconKind::WarOfAttrition => x * (v - highest_other) - (T::one() - x) * own,
            EconKind::Tullock => unreachable!(),
        }
    }
}

impl fmt::Display for EconKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EconKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "fpsb" => Ok(EconKind::Fpsb),
            "spsb" => Ok(EconKind::Spsb),
            "allpay" | "all-pay" => Ok(EconKind::AllPay),
            "woa" | "war-of-attrition" => Ok(EconKind::WarOfAttrition),
            "tullock" => Ok(EconKind::Tullock),
            other => Err(Error::InvalidParameter(format!("unknown game kind `{other}`"))),
        }
    }
}

/// Winning shares under uniform random tie-breaking.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationOutcome<T> {
    pub x: Vec<T>,
}

/// `x_i = 1/n_max` for each of the `n_max` highest bidders, else 0.
pub fn allocation<T: Scalar>(bids: &[T]) -> AllocationOutcome<T> {
    let top = bids.iter().copied().fold(T::neg_infinity(), T::max);
    let winners = bids.iter().filter(|&&b| b == top).count();
    let share = T::one() / T::of_usize(winners);
    AllocationOutcome {
        x: bids
            .iter()
            .map(|&b| if b == top { share } else { T::zero() })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(kind: EconKind, bids: [f64; 2], v: [f64; 2]) -> [f64; 2] {
        [
            kind.ex_post_utility(&bids, &v, 0),
            kind.ex_post_utility(&bids, &v, 1),
        ]
    }

    #[test]
    fn allocation_cases() {
        assert_eq!(allocation(&[0.5, 0.3]).x, vec![1.0, 0.0]);
        assert_eq!(allocation(&[0.5, 0.5]).x, vec![0.5, 0.5]);
        assert_eq!(allocation(&[0.2, 0.2, 0.2]).x, vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn payoff_examples() {
        assert_eq!(u(EconKind::Fpsb, [0.5, 0.3], [1.0, 1.0]), [0.5, 0.0]);
        assert_eq!(u(EconKind::Spsb, [0.6, 0.4], [1.0, 1.0]), [0.6, 0.0]);
        assert_eq!(u(EconKind::AllPay, [0.5, 0.5], [1.0, 1.0]), [0.0, 0.0]);
        assert_eq!(u(EconKind::Tullock, [0.0, 0.0], [1.0, 1.0]), [0.5, 0.5]);
        let w = u(EconKind::WarOfAttrition, [0.4, 0.7], [1.0, 1.0]);
        assert_eq!(w[0], -0.4);
        assert!((w[1] - 0.6).abs() < 1e-15);
        // tie: half of (v - a_j) minus half of own bid
        let t = u(EconKind::WarOfAttrition, [0.4, 0.4], [1.0, 1.0]);
        assert!((t[0] - (0.5 * 0.6 - 0.2)).abs() < 1e-15);
    }

    #[test]
    fn names_round_trip() {
        for k in EconKind::ALL {
            assert_eq!(k.name().parse::<EconKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert!("dutch".parse::<EconKind>().is_err());
    }
}
