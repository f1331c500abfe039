use serde::Serialize;

use crate::scalar::Scalar;

use super::normal_form::NormalFormGame;
use super::shape::PureProfile;

/// Relative tolerance under which two payoffs count as tied.
///
/// Economic games on equidistant grids produce ties that floating-point
/// evaluation breaks at the last ulp; comparisons go through this tolerance
/// so that mathematically equal payoffs are treated as equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[inline]
pub(crate) fn tie_tol<T: Scalar>(a: T, b: T) -> T {
    T::of(TIE_TOLERANCE) * T::one().max(a.abs()).max(b.abs())
}

/// `alt` is strictly better than `base`, beyond the tie tolerance.
#[inline]
pub fn strictly_improves<T: Scalar>(alt: T, base: T) -> bool {
    alt > base + tie_tol(alt, base)
}

/// Pure Nash equilibria of a game, in profile-index order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumReport {
    pub pure_ne: Vec<PureProfile>,
    pub strict_pure_ne: Vec<PureProfile>,
}

impl EquilibriumReport {
    pub fn has_pure_ne(&self) -> bool {
        !self.pure_ne.is_empty()
    }

    pub fn has_strict_ne(&self) -> bool {
        !self.strict_pure_ne.is_empty()
    }

    /// Pure equilibria that are not strict.
    pub fn weak_only(&self) -> impl Iterator<Item = &PureProfile> {
        self.pure_ne
            .iter()
            .filter(|p| !self.strict_pure_ne.contains(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileStatus {
    NotEquilibrium,
    Weak,
    Strict,
}

/// Classify one profile by checking every unilateral deviation.
pub fn profile_status<T: Scalar>(g: &NormalFormGame<T>, index: usize) -> ProfileStatus {
    let shape = g.shape();
    let mut strict = true;
    for i in 0..shape.num_players() {
        let base = g.payoff(i, index);
        let own = shape.action_of(index, i);
        for k in 0..shape.num_actions(i) {
            if k == own {
                continue;
            }
            let alt = g.payoff(i, shape.with_action(index, i, k));
            if strictly_improves(alt, base) {
                return ProfileStatus::NotEquilibrium;
            }
            if !strictly_improves(base, alt) {
                strict = false;
            }
        }
    }
    if strict {
        ProfileStatus::Strict
    } else {
        ProfileStatus::Weak
    }
}

/// Exhaustive scan over all pure profiles.
pub fn pure_equilibria<T: Scalar>(g: &NormalFormGame<T>) -> EquilibriumReport {
    let shape = g.shape();
    let mut report = EquilibriumReport {
        pure_ne: Vec::new(),
        strict_pure_ne: Vec::new(),
    };
    for idx in 0..shape.total_profiles() {
        match profile_status(g, idx) {
            ProfileStatus::NotEquilibrium => {}
            ProfileStatus::Weak => report.pure_ne.push(shape.profile_from_index(idx)),
            ProfileStatus::Strict => {
                let p = shape.profile_from_index(idx);
                report.pure_ne.push(p.clone());
                report.strict_pure_ne.push(p);
            }
        }
    }
    report
}

/// Whether the game has at least one strict pure equilibrium; stops at the
/// first one found.
pub fn has_strict_pure_ne<T: Scalar>(g: &NormalFormGame<T>) -> bool {
    (0..g.shape().total_profiles()).any(|idx| profile_status(g, idx) == ProfileStatus::Strict)
}

pub fn is_pure_ne<T: Scalar>(g: &NormalFormGame<T>, profile: &PureProfile) -> bool {
    g.shape()
        .profile_index(profile)
        .map(|idx| profile_status(g, idx) != ProfileStatus::NotEquilibrium)
        .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::standard;

    #[test]
    fn prisoners_dilemma_single_strict() {
        let r = pure_equilibria(&standard::prisoners_dilemma::<f64>());
        assert_eq!(r.pure_ne, vec![PureProfile(vec![1, 1])]);
        assert_eq!(r.strict_pure_ne, r.pure_ne);
    }

    #[test]
    fn matching_pennies_has_none() {
        let r = pure_equilibria(&standard::matching_pennies::<f64>());
        assert!(r.pure_ne.is_empty());
    }

    #[test]
    fn battle_of_sexes_two_strict() {
        let r = pure_equilibria(&standard::battle_of_the_sexes::<f64>());
        assert_eq!(
            r.strict_pure_ne,
            vec![PureProfile(vec![0, 0]), PureProfile(vec![1, 1])]
        );
        assert_eq!(r.pure_ne, r.strict_pure_ne);
    }

    #[test]
    fn ties_are_weak() {
        let g = NormalFormGame::<f64>::bimatrix(
            &[vec![1.0, 0.0], vec![1.0, 0.0]],
            &[vec![1.0, 0.0], vec![1.0, 0.0]],
        )
        .unwrap();
        let r = pure_equilibria(&g);
        assert_eq!(r.pure_ne.len(), 2);
        assert!(r.strict_pure_ne.is_empty());
        assert_eq!(r.weak_only().count(), 2);
    }

    #[test]
    fn last_ulp_differences_count_as_ties() {
        let h = 1.0 / 20.0;
        let g = NormalFormGame::<f64>::bimatrix(
            &[vec![0.5 * (1.0 - (1.0 - 2.0 * h)), 0.0], vec![1.0 - (1.0 - h), 0.0]],
            &[vec![0.0, 0.0], vec![0.0, 0.0]],
        )
        .unwrap();
        assert_eq!(profile_status(&g, 0), ProfileStatus::Weak);
    }
}
