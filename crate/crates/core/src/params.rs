//! Model constants, strategy profiles and parameter validation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::NonFiniteParam;

/// The two team members. `High` values the team solution more than `Low`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Member {
    High,
    Low,
}

impl Member {
    pub const BOTH: [Member; 2] = [Member::High, Member::Low];

    pub fn other(self) -> Member {
        match self {
            Member::High => Member::Low,
            Member::Low => Member::High,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Member::High => 0,
            Member::Low => 1,
        }
    }
}

impl fmt::Display for Member {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Member::High => "H",
            Member::Low => "L",
        })
    }
}

/// All constants of the two-member game.
///
/// Values are stored as given; use [`validate`] to check them against the
/// model's admissible ranges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Probability that a member's solution is correct when she exerts effort.
    pub effort_accuracy: f64,
    /// Cost of exerting effort.
    pub effort_cost: f64,
    /// Fixed incentive volume a contributing member puts into the pool.
    pub volume: f64,
    /// Valuation of team accuracy held by the high-valuation member.
    pub v_high: f64,
    /// Valuation of team accuracy held by the low-valuation member.
    pub v_low: f64,
}

impl Params {
    pub const DEFAULT_EFFORT_ACCURACY: f64 = 0.8;
    pub const DEFAULT_V_HIGH: f64 = 2.0;
    pub const DEFAULT_V_LOW: f64 = 1.0;
    pub const DEFAULT_EFFORT_COST: f64 = 0.18;
    pub const DEFAULT_VOLUME: f64 = 0.15;

    pub fn new(effort_accuracy: f64, effort_cost: f64, volume: f64, v_high: f64, v_low: f64) -> Self {
        Params {
            effort_accuracy,
            effort_cost,
            volume,
            v_high,
            v_low,
        }
    }

    pub fn valuation(&self, member: Member) -> f64 {
        match member {
            Member::High => self.v_high,
            Member::Low => self.v_low,
        }
    }

    pub fn with_cost(self, effort_cost: f64) -> Self {
        Params { effort_cost, ..self }
    }

    pub fn with_volume(self, volume: f64) -> Self {
        Params { volume, ..self }
    }

    /// Valuation ratio above which members count as holding diverse
    /// valuations: `max{(14a-5)/(6a-1), (2a+1)/(3-2a)}`.
    pub fn diverse_ratio_threshold(&self) -> f64 {
        let (first, second) = regime_thresholds(self.effort_accuracy);
        first.max(second)
    }

    pub fn diverse_valuations(&self) -> bool {
        self.v_high / self.v_low > self.diverse_ratio_threshold()
    }
}

impl Default for Params {
    fn default() -> Self {
        Params::new(
            Self::DEFAULT_EFFORT_ACCURACY,
            Self::DEFAULT_EFFORT_COST,
            Self::DEFAULT_VOLUME,
            Self::DEFAULT_V_HIGH,
            Self::DEFAULT_V_LOW,
        )
    }
}

/// The two expressions bounding the diverse-valuation regime, in order
/// `(14a-5)/(6a-1)` and `(2a+1)/(3-2a)`.
pub fn regime_thresholds(effort_accuracy: f64) -> (f64, f64) {
    let a = effort_accuracy;
    ((14.0 * a - 5.0) / (6.0 * a - 1.0), (2.0 * a + 1.0) / (3.0 - 2.0 * a))
}

/// Stage-I strategies. A contributing member always puts in exactly the
/// volume held by [`Params`], so the profile stores only who contributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct ContributionProfile {
    pub high: bool,
    pub low: bool,
}

impl ContributionProfile {
    pub const NONE: ContributionProfile = ContributionProfile {
        high: false,
        low: false,
    };

    /// All four profiles in lexicographic order `(0,0), (0,D), (D,0), (D,D)`.
    pub const ALL: [ContributionProfile; 4] = [
        ContributionProfile::new(false, false),
        ContributionProfile::new(false, true),
        ContributionProfile::new(true, false),
        ContributionProfile::new(true, true),
    ];

    pub const fn new(high: bool, low: bool) -> Self {
        ContributionProfile { high, low }
    }

    pub fn contributes(&self, member: Member) -> bool {
        match member {
            Member::High => self.high,
            Member::Low => self.low,
        }
    }

    pub fn amount(&self, member: Member, params: &Params) -> f64 {
        if self.contributes(member) {
            params.volume
        } else {
            0.0
        }
    }

    /// Size of the incentive pool.
    pub fn pool(&self, params: &Params) -> f64 {
        self.amount(Member::High, params) + self.amount(Member::Low, params)
    }

    pub fn any(&self) -> bool {
        self.high || self.low
    }

    pub fn with(self, member: Member, contributes: bool) -> Self {
        match member {
            Member::High => ContributionProfile { high: contributes, ..self },
            Member::Low => ContributionProfile { low: contributes, ..self },
        }
    }
}

impl fmt::Display for ContributionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = |b: bool| if b { "D" } else { "0" };
        write!(f, "({},{})", sym(self.high), sym(self.low))
    }
}

/// Stage-II strategies: whether each member exerts effort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct EffortProfile {
    pub high: bool,
    pub low: bool,
}

impl EffortProfile {
    /// All four profiles in lexicographic order `(0,0), (0,1), (1,0), (1,1)`.
    pub const ALL: [EffortProfile; 4] = [
        EffortProfile::new(false, false),
        EffortProfile::new(false, true),
        EffortProfile::new(true, false),
        EffortProfile::new(true, true),
    ];

    pub const fn new(high: bool, low: bool) -> Self {
        EffortProfile { high, low }
    }

    pub fn exerts(&self, member: Member) -> bool {
        match member {
            Member::High => self.high,
            Member::Low => self.low,
        }
    }

    /// Number of members exerting effort.
    pub fn count(&self) -> u8 {
        self.high as u8 + self.low as u8
    }

    pub fn with(self, member: Member, exerts: bool) -> Self {
        match member {
            Member::High => EffortProfile { high: exerts, ..self },
            Member::Low => EffortProfile { low: exerts, ..self },
        }
    }

    /// The profile seen by a coalition: members outside it exert no effort.
    pub fn restrict(self, keep_high: bool, keep_low: bool) -> Self {
        EffortProfile {
            high: self.high && keep_high,
            low: self.low && keep_low,
        }
    }
}

impl fmt::Display for EffortProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.high as u8, self.low as u8)
    }
}

/// How an all-zero Shapley profile splits the pool under SV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZeroShapleyRule {
    /// Split the pool equally, keeping SV budget balanced.
    #[default]
    EqualSplit,
    /// Allocate nothing; the pool is lost.
    NoAllocation,
}

/// Incentive allocation mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MechanismKind {
    /// Equal allocation.
    Ea,
    /// Output agreement.
    Oa,
    /// Shapley value.
    Sv(ZeroShapleyRule),
}

impl MechanismKind {
    pub const ALL: [MechanismKind; 3] = [
        MechanismKind::Ea,
        MechanismKind::Oa,
        MechanismKind::Sv(ZeroShapleyRule::EqualSplit),
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MechanismKind::Ea => "EA",
            MechanismKind::Oa => "OA",
            MechanismKind::Sv(_) => "SV",
        }
    }
}

impl fmt::Display for MechanismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Result of a single validation check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    /// Whether `v_high / v_low` lies above the diverse-valuation threshold.
    pub diverse_valuations: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Checks every parameter against its admissible range.
///
/// Range violations are reported in the returned report. Only non-finite
/// input is an error.
pub fn validate(params: &Params) -> Result<ValidationReport, NonFiniteParam> {
    let fields = [
        ("a", params.effort_accuracy),
        ("c", params.effort_cost),
        ("D", params.volume),
        ("V_H", params.v_high),
        ("V_L", params.v_low),
    ];
    for (name, value) in fields {
        if !value.is_finite() {
            return Err(NonFiniteParam { name, value });
        }
    }

    let check = |name: &'static str, passed: bool, message: String| Check {
        name,
        passed,
        message,
    };
    let a = params.effort_accuracy;
    let checks = vec![
        check(
            "a",
            a > 0.5 && a <= 1.0,
            format!("a out of (0.5, 1]: {a}"),
        ),
        check(
            "c",
            params.effort_cost > 0.0,
            format!("c must be positive: {}", params.effort_cost),
        ),
        check(
            "D",
            params.volume > 0.0,
            format!("D must be positive: {}", params.volume),
        ),
        check(
            "V_L",
            params.v_low > 0.0,
            format!("V_L must be positive: {}", params.v_low),
        ),
        check(
            "V_H",
            params.v_high > params.v_low,
            format!(
                "V_H must exceed V_L: V_H={}, V_L={}",
                params.v_high, params.v_low
            ),
        ),
    ];

    Ok(ValidationReport {
        diverse_valuations: params.v_low > 0.0 && params.diverse_valuations(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_settings_are_valid_and_diverse() {
        let p = Params::new(0.8, 0.18, 0.15, 2.0, 1.0);
        let report = validate(&p).unwrap();
        assert!(report.is_valid());
        assert!(report.diverse_valuations);
    }

    #[test]
    fn moderate_ratio_is_not_diverse() {
        let p = Params::new(0.8, 0.1, 0.1, 1.5, 1.0);
        let report = validate(&p).unwrap();
        assert!(report.is_valid());
        assert!(!report.diverse_valuations);
        let (first, second) = regime_thresholds(0.8);
        assert!((first - 6.2 / 3.8).abs() < 1e-12);
        assert!((second - 2.6 / 1.4).abs() < 1e-12);
    }

    #[test]
    fn accuracy_below_half_is_reported() {
        let p = Params::new(0.4, 0.1, 0.1, 2.0, 1.0);
        let report = validate(&p).unwrap();
        assert!(!report.is_valid());
        let failed: Vec<_> = report.failures().collect();
        assert_eq!(failed.len(), 1);
        assert!(failed[0].message.starts_with("a out of (0.5, 1]"));
    }

    #[test]
    fn boundary_accuracy() {
        assert!(validate(&Params::new(1.0, 0.1, 0.1, 2.0, 1.0)).unwrap().is_valid());
        assert!(!validate(&Params::new(0.5, 0.1, 0.1, 2.0, 1.0)).unwrap().is_valid());
    }

    #[test]
    fn valuation_order_and_positivity() {
        let report = validate(&Params::new(0.8, 0.1, 0.1, 1.0, 1.0)).unwrap();
        assert_eq!(report.failures().next().unwrap().name, "V_H");
        let report = validate(&Params::new(0.8, 0.0, -1.0, 2.0, 1.0)).unwrap();
        let names: Vec<_> = report.failures().map(|c| c.name).collect();
        assert_eq!(names, ["c", "D"]);
    }

    #[test]
    fn non_finite_is_an_error() {
        let err = validate(&Params::new(0.8, f64::NAN, 0.1, 2.0, 1.0)).unwrap_err();
        assert_eq!(err.name, "c");
        assert!(validate(&Params::new(0.8, 0.1, 0.1, f64::INFINITY, 1.0)).is_err());
    }

    #[test]
    fn regime_thresholds_over_accuracy_grid() {
        for i in 1..=500 {
            let a = 0.5 + 0.5 * i as f64 / 500.0;
            let (first, second) = regime_thresholds(a);
            assert!(first.is_finite() && second.is_finite());
            assert!(first >= 1.0 - 1e-12 && second >= 1.0 - 1e-12, "a={a}");
        }
        let (first, second) = regime_thresholds(0.8);
        assert!(second > first);
    }

    #[test]
    fn validation_does_not_touch_input() {
        let p = Params::new(0.8, 0.2, 0.3, 2.0, 1.0);
        let copy = p;
        let r1 = validate(&p).unwrap();
        let r2 = validate(&p).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(p, copy);
    }

    #[test]
    fn profile_display() {
        assert_eq!(ContributionProfile::new(false, true).to_string(), "(0,D)");
        assert_eq!(EffortProfile::new(true, false).to_string(), "(1,0)");
    }
}
