use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Non-decreasing map from type index to action index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MonotoneStrategy(pub Vec<usize>);

impl MonotoneStrategy {
    pub fn new(map: Vec<usize>, num_actions: usize) -> Result<Self> {
        if map.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter(format!(
                "strategy {map:?} is not non-decreasing"
            )));
        }
        if map.iter().any(|&a| a >= num_actions) {
            return Err(Error::InvalidParameter(format!(
                "strategy {map:?} uses an action outside 0..{num_actions}"
            )));
        }
        Ok(Self(map))
    }

    pub fn action(&self, type_index: usize) -> usize {
        self.0[type_index]
    }

    pub fn num_types(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for MonotoneStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `C(V + A - 1, A - 1)`, or an error when it does not fit in `usize`.
pub fn monotone_strategy_count(num_types: usize, num_actions: usize) -> Result<usize> {
    let overflow = || Error::CountOverflow {
        n: num_types + num_actions.saturating_sub(1),
        k: num_actions.saturating_sub(1),
    };
    if num_actions == 0 {
        return Ok(0);
    }
    let n = num_types.checked_add(num_actions - 1).ok_or_else(overflow)?;
    let k = (num_actions - 1).min(num_types);
    // multiplicative formula keeps every partial result an integer
    let mut c: u128 = 1;
    for j in 1..=k as u128 {
        c = c
            .checked_mul(n as u128 - k as u128 + j)
            .ok_or_else(overflow)?
            / j;
    }
    usize::try_from(c).map_err(|_| overflow())
}

/// All non-decreasing maps from `num_types` types to `num_actions` actions,
/// in lexicographic order.
pub fn enumerate_monotone_strategies(
    num_types: usize,
    num_actions: usize,
) -> Result<Vec<MonotoneStrategy>> {
    if num_types == 0 || num_actions == 0 {
        return Err(Error::InvalidParameter(
            "need at least one type and one action".into(),
        ));
    }
    let count = monotone_strategy_count(num_types, num_actions)?;
    let mut out = Vec::with_capacity(count);
    let mut current = vec![0usize; num_types];
    loop {
        out.push(MonotoneStrategy(current.clone()));
        // rightmost position that can still grow
        let Some(pos) = (0..num_types).rev().find(|&p| current[p] + 1 < num_actions) else {
            break;
        };
        let next = current[pos] + 1;
        for c in &mut current[pos..] {
            *c = next;
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}
