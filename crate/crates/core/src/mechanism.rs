//! Incentive allocation mechanisms.
//!
//! Each mechanism maps an effort profile to the expected proportion of the
//! pooled incentives every member receives. Report-level randomness is already
//! integrated out here; realizations per report live in [`crate::montecarlo`].

use serde::{Deserialize, Serialize};

use crate::accuracy::team_accuracy;
use crate::params::{EffortProfile, Member, MechanismKind, Params, ZeroShapleyRule};

/// Tolerance used when classifying budget balance.
pub const BALANCE_TOLERANCE: f64 = 1e-12;

/// Expected proportions of the pool received by each member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AllocationShares {
    pub high: f64,
    pub low: f64,
}

impl AllocationShares {
    pub fn new(high: f64, low: f64) -> Self {
        AllocationShares { high, low }
    }

    pub fn get(&self, member: Member) -> f64 {
        match member {
            Member::High => self.high,
            Member::Low => self.low,
        }
    }

    pub fn total(&self) -> f64 {
        self.high + self.low
    }
}

/// Shapley values of both members in the team-accuracy coalition game.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapleyPair {
    pub high: f64,
    pub low: f64,
}

impl ShapleyPair {
    pub fn get(&self, member: Member) -> f64 {
        match member {
            Member::High => self.high,
            Member::Low => self.low,
        }
    }
}

pub fn shares_ea(_effort: EffortProfile) -> AllocationShares {
    AllocationShares::new(0.5, 0.5)
}

/// Output agreement: the pool is split equally when reports agree and burned
/// otherwise. Agreement only rises above one half when both members exert
/// effort, giving `(2a²-2a+1)/2` each, and `1/4` each in every other case.
pub fn shares_oa(effort: EffortProfile, params: &Params) -> AllocationShares {
    let share = if effort.count() == 2 {
        let a = params.effort_accuracy;
        (2.0 * a * a - 2.0 * a + 1.0) / 2.0
    } else {
        0.25
    };
    AllocationShares::new(share, share)
}

/// Shapley value of each member, where a coalition's worth is the team
/// accuracy obtained when only its members' efforts count.
pub fn shapley(effort: EffortProfile, params: &Params) -> ShapleyPair {
    let worth = |high_in: bool, low_in: bool| team_accuracy(effort.restrict(high_in, low_in), params).value();
    // Two players: each of the two orderings has weight 1/2.
    let high = 0.5 * (worth(true, false) - worth(false, false)) + 0.5 * (worth(true, true) - worth(false, true));
    let low = 0.5 * (worth(false, true) - worth(false, false)) + 0.5 * (worth(true, true) - worth(true, false));
    ShapleyPair { high, low }
}

/// Shares proportional to Shapley values, using the default equal split when
/// both values vanish.
pub fn shares_sv(effort: EffortProfile, params: &Params) -> AllocationShares {
    shares_sv_with(effort, params, ZeroShapleyRule::EqualSplit)
}

pub fn shares_sv_with(effort: EffortProfile, params: &Params, rule: ZeroShapleyRule) -> AllocationShares {
    let phi = shapley(effort, params);
    let total = phi.high + phi.low;
    if total > 0.0 {
        AllocationShares::new(phi.high / total, phi.low / total)
    } else {
        match rule {
            ZeroShapleyRule::EqualSplit => AllocationShares::new(0.5, 0.5),
            ZeroShapleyRule::NoAllocation => AllocationShares::new(0.0, 0.0),
        }
    }
}

/// Expected shares under any mechanism.
pub fn shares(mechanism: MechanismKind, effort: EffortProfile, params: &Params) -> AllocationShares {
    match mechanism {
        MechanismKind::Ea => shares_ea(effort),
        MechanismKind::Oa => shares_oa(effort, params),
        MechanismKind::Sv(rule) => shares_sv_with(effort, params, rule),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BudgetBalance {
    Balanced,
    /// Part of the pool is not handed back; `deficit` is that fraction.
    WeaklyBalanced { deficit: f64 },
}

pub fn check_budget_balance(mechanism: MechanismKind, effort: EffortProfile, params: &Params) -> BudgetBalance {
    let deficit = 1.0 - shares(mechanism, effort, params).total();
    if deficit.abs() <= BALANCE_TOLERANCE {
        BudgetBalance::Balanced
    } else {
        BudgetBalance::WeaklyBalanced { deficit }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(a: f64) -> Params {
        Params::new(a, 0.1, 0.1, 2.0, 1.0)
    }

    const E00: EffortProfile = EffortProfile::new(false, false);
    const E10: EffortProfile = EffortProfile::new(true, false);
    const E01: EffortProfile = EffortProfile::new(false, true);
    const E11: EffortProfile = EffortProfile::new(true, true);

    /// Shapley values by averaging marginal contributions over all orderings
    /// of the players, with coalition worth from a literal accuracy table.
    fn permutation_shapley(effort: EffortProfile, a: f64) -> [f64; 2] {
        let worth = |members: &[usize]| {
            let exerting = members
                .iter()
                .filter(|&&m| if m == 0 { effort.high } else { effort.low })
                .count();
            [0.5, (2.0 * a + 1.0) / 4.0, a][exerting]
        };
        let orders = [[0usize, 1], [1, 0]];
        let mut phi = [0.0; 2];
        for order in orders {
            let mut seen = Vec::new();
            for &m in &order {
                let before = worth(&seen);
                seen.push(m);
                phi[m] += (worth(&seen) - before) / orders.len() as f64;
            }
        }
        phi
    }

    #[test]
    fn equal_allocation_is_constant() {
        for e in EffortProfile::ALL {
            assert_eq!(shares_ea(e), AllocationShares::new(0.5, 0.5));
        }
    }

    #[test]
    fn output_agreement_values() {
        let s = shares_oa(E11, &params(0.8));
        assert!((s.high - 0.34).abs() < 1e-12 && (s.low - 0.34).abs() < 1e-12);
        assert_eq!(shares_oa(E10, &params(0.8)), AllocationShares::new(0.25, 0.25));
        assert_eq!(shares_oa(E00, &params(1.0)), AllocationShares::new(0.25, 0.25));
        assert_eq!(shares_oa(E11, &params(1.0)), AllocationShares::new(0.5, 0.5));
    }

    #[test]
    fn shapley_values() {
        let p = params(0.8);
        let both = shapley(E11, &p);
        assert!((both.high - 0.15).abs() < 1e-12 && (both.low - 0.15).abs() < 1e-12);
        let one = shapley(E10, &p);
        assert!((one.high - 0.15).abs() < 1e-12);
        assert_eq!(one.low, 0.0);
        assert_eq!(shapley(E00, &params(0.7)), ShapleyPair { high: 0.0, low: 0.0 });
    }

    #[test]
    fn shapley_shares() {
        let p = params(0.8);
        assert_eq!(shares_sv(E10, &p), AllocationShares::new(1.0, 0.0));
        assert_eq!(shares_sv(E01, &p), AllocationShares::new(0.0, 1.0));
        assert_eq!(shares_sv(E11, &p), AllocationShares::new(0.5, 0.5));
        assert_eq!(shares_sv(E00, &p), AllocationShares::new(0.5, 0.5));
        assert_eq!(
            shares_sv_with(E00, &p, ZeroShapleyRule::NoAllocation),
            AllocationShares::new(0.0, 0.0)
        );
    }

    #[test]
    fn budget_balance() {
        let p = params(0.8);
        for e in EffortProfile::ALL {
            assert_eq!(check_budget_balance(MechanismKind::Ea, e, &p), BudgetBalance::Balanced);
        }
        let sv = MechanismKind::Sv(ZeroShapleyRule::EqualSplit);
        assert_eq!(check_budget_balance(sv, E00, &p), BudgetBalance::Balanced);
        match check_budget_balance(MechanismKind::Oa, E10, &p) {
            BudgetBalance::WeaklyBalanced { deficit } => assert!((deficit - 0.5).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(check_budget_balance(MechanismKind::Oa, E11, &params(1.0)), BudgetBalance::Balanced);
    }

    #[test]
    fn output_agreement_alone_gives_no_advantage() {
        let p = params(0.8);
        assert_eq!(shares_oa(E10, &p), shares_oa(E00, &p));
        assert_eq!(shares_oa(E01, &p), shares_oa(E00, &p));
    }

    proptest! {
        #[test]
        fn shapley_matches_permutation_average(a in 0.5f64..=1.0, idx in 0usize..4) {
            let e = EffortProfile::ALL[idx];
            let phi = shapley(e, &params(a));
            let oracle = permutation_shapley(e, a);
            prop_assert!((phi.high - oracle[0]).abs() < 1e-12);
            prop_assert!((phi.low - oracle[1]).abs() < 1e-12);
        }

        #[test]
        fn shapley_efficiency(a in 0.5f64..=1.0, idx in 0usize..4) {
            let p = params(a);
            let e = EffortProfile::ALL[idx];
            let phi = shapley(e, &p);
            prop_assert!(phi.high >= 0.0 && phi.low >= 0.0);
            let surplus = team_accuracy(e, &p).value() - team_accuracy(E00, &p).value();
            prop_assert!((phi.high + phi.low - surplus).abs() < 1e-12);
        }

        #[test]
        fn sv_share_rises_with_own_effort(a in 0.5f64..=1.0, other in any::<bool>()) {
            let p = params(a);
            for m in Member::BOTH {
                let base = EffortProfile::default().with(m.other(), other);
                let lazy = shares_sv(base, &p).get(m);
                let busy = shares_sv(base.with(m, true), &p).get(m);
                prop_assert!(busy >= lazy);
            }
        }

        #[test]
        fn oa_both_effort_share_bounds(a in 0.5f64..=1.0) {
            let s = shares_oa(E11, &params(a)).high;
            prop_assert!((0.25 - 1e-15..=0.5 + 1e-15).contains(&s));
        }

        #[test]
        fn shares_sum_by_mechanism(a in 0.5f64..=1.0, idx in 0usize..4) {
            let p = params(a);
            let e = EffortProfile::ALL[idx];
            prop_assert_eq!(shares_ea(e).total(), 1.0);
            prop_assert!((shares_sv(e, &p).total() - 1.0).abs() < 1e-12);
            prop_assert!(shares_oa(e, &p).total() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn oa_share_endpoints() {
        assert!((shares_oa(E11, &Params::new(0.5, 0.1, 0.1, 2.0, 1.0)).high - 0.25).abs() < 1e-15);
        assert_eq!(shares_oa(E11, &params(1.0)).high, 0.5);
    }
}
