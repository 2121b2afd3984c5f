//! Payoffs, stage games and equilibrium solving.
//!
//! The two-stage game is solved by backward induction over pure strategies.
//! For every contribution profile the effort subgame is enumerated, one of its
//! pure equilibria is selected as the continuation, and the contribution game
//! built from those continuations is enumerated in turn.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::accuracy::team_accuracy;
use crate::error::SolveError;
use crate::mechanism::shares;
use crate::params::{ContributionProfile, EffortProfile, Member, MechanismKind, Params};

/// Slack allowed in the weak best-response inequalities.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PayoffVector {
    pub high: f64,
    pub low: f64,
}

impl PayoffVector {
    pub fn get(&self, member: Member) -> f64 {
        match member {
            Member::High => self.high,
            Member::Low => self.low,
        }
    }

    pub fn sum(&self) -> f64 {
        self.high + self.low
    }
}

/// Expected payoff of both members:
/// `V_m * P_T(e) + p_m(e) * pool - d_m - c * e_m`.
pub fn payoff(
    contribution: ContributionProfile,
    effort: EffortProfile,
    mechanism: MechanismKind,
    params: &Params,
) -> PayoffVector {
    let accuracy = team_accuracy(effort, params).value();
    let split = shares(mechanism, effort, params);
    let pool = contribution.pool(params);
    let member = |m: Member| {
        let cost = if effort.exerts(m) { params.effort_cost } else { 0.0 };
        params.valuation(m) * accuracy + split.get(m) * pool - contribution.amount(m, params) - cost
    };
    PayoffVector {
        high: member(Member::High),
        low: member(Member::Low),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    /// Stage I: incentive contribution.
    Contribution,
    /// Stage II: effort exertion.
    Effort,
}

/// A 2x2 game indexed `[high strategy][low strategy]`, strategy `1` being
/// "contribute" or "exert effort" depending on the stage.
#[derive(Debug, Clone, PartialEq)]
pub struct StageGame {
    pub stage: Stage,
    pub payoffs: [[PayoffVector; 2]; 2],
}

impl StageGame {
    pub fn cell(&self, high: usize, low: usize) -> PayoffVector {
        self.payoffs[high][low]
    }
}

/// The effort subgame reached after `contribution`.
pub fn stage2_game(contribution: ContributionProfile, mechanism: MechanismKind, params: &Params) -> StageGame {
    let mut payoffs = [[PayoffVector { high: 0.0, low: 0.0 }; 2]; 2];
    for (h, row) in payoffs.iter_mut().enumerate() {
        for (l, cell) in row.iter_mut().enumerate() {
            *cell = payoff(contribution, EffortProfile::new(h == 1, l == 1), mechanism, params);
        }
    }
    StageGame {
        stage: Stage::Effort,
        payoffs,
    }
}

/// Every cell where neither player gains more than `tolerance` by a
/// unilateral deviation, in lexicographic order.
pub fn pure_nash(game: &StageGame, tolerance: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for h in 0..2 {
        for l in 0..2 {
            let here = game.cell(h, l);
            let high_ok = here.high >= game.cell(1 - h, l).high - tolerance;
            let low_ok = here.low >= game.cell(h, 1 - l).low - tolerance;
            if high_ok && low_ok {
                out.push((h, l));
            }
        }
    }
    out
}

/// How to pick one equilibrium when a stage has several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionRule {
    /// Highest welfare, then higher team accuracy, then more effort (high
    /// member first), then less contribution.
    #[default]
    Canonical,
    /// Highest team accuracy first, then as `Canonical`.
    MaxAccuracy,
    /// The first equilibrium in lexicographic profile order.
    Lexicographic,
}

/// One candidate outcome considered by a selection rule.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    contribution: ContributionProfile,
    effort: EffortProfile,
    welfare: f64,
    accuracy: f64,
}

fn cmp_approx(a: f64, b: f64, tolerance: f64) -> Ordering {
    if (a - b).abs() <= tolerance {
        Ordering::Equal
    } else {
        a.partial_cmp(&b).unwrap_or(Ordering::Equal)
    }
}

impl SelectionRule {
    /// `Greater` means `x` is preferred over `y`.
    fn prefer(self, x: &Candidate, y: &Candidate, tolerance: f64) -> Ordering {
        let welfare = cmp_approx(x.welfare, y.welfare, tolerance);
        let accuracy = cmp_approx(x.accuracy, y.accuracy, tolerance);
        let structural = || {
            (x.effort.high, x.effort.low)
                .cmp(&(y.effort.high, y.effort.low))
                .then_with(|| (y.contribution.high, y.contribution.low).cmp(&(x.contribution.high, x.contribution.low)))
        };
        match self {
            SelectionRule::Canonical => welfare.then(accuracy).then_with(structural),
            SelectionRule::MaxAccuracy => accuracy.then(welfare).then_with(structural),
            SelectionRule::Lexicographic => Ordering::Equal,
        }
    }

    fn select(self, candidates: &[Candidate], tolerance: f64) -> Option<Candidate> {
        let mut iter = candidates.iter();
        let mut best = *iter.next()?;
        for c in iter {
            if self.prefer(c, &best, tolerance) == Ordering::Greater {
                best = *c;
            }
        }
        Some(best)
    }
}

/// A subgame-perfect equilibrium of the two-stage game.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumOutcome {
    pub mechanism: MechanismKind,
    pub params: Params,
    pub contribution: ContributionProfile,
    pub effort: EffortProfile,
    pub payoffs: PayoffVector,
    pub team_accuracy: f64,
    pub welfare: f64,
    /// Number of pure equilibria of the contribution stage.
    pub multiplicity: usize,
    /// Selected effort continuation per contribution profile, in
    /// [`ContributionProfile::ALL`] order.
    pub continuations: [EffortProfile; 4],
}

impl EquilibriumOutcome {
    pub fn label(&self) -> String {
        outcome_label(self.contribution, self.effort)
    }

    pub fn record(&self) -> EquilibriumRecord {
        EquilibriumRecord {
            mechanism: self.mechanism.name().to_string(),
            c: self.params.effort_cost,
            volume: self.params.volume,
            d_high: self.contribution.amount(Member::High, &self.params),
            d_low: self.contribution.amount(Member::Low, &self.params),
            e_high: self.effort.high as u8,
            e_low: self.effort.low as u8,
            u_high: self.payoffs.high,
            u_low: self.payoffs.low,
            accuracy: self.team_accuracy,
            welfare: self.welfare,
            label: self.label(),
            multiplicity: self.multiplicity,
        }
    }
}

/// Region label such as `d=(0,D),e=(1,0)`.
pub fn outcome_label(contribution: ContributionProfile, effort: EffortProfile) -> String {
    format!("d={contribution},e={effort}")
}

/// Flat JSON form of an [`EquilibriumOutcome`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumRecord {
    pub mechanism: String,
    pub c: f64,
    #[serde(rename = "D")]
    pub volume: f64,
    pub d_high: f64,
    pub d_low: f64,
    pub e_high: u8,
    pub e_low: u8,
    pub u_high: f64,
    pub u_low: f64,
    pub accuracy: f64,
    pub welfare: f64,
    pub label: String,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub selection: SelectionRule,
    pub tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            selection: SelectionRule::Canonical,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

/// Solves the two-stage game by backward induction with the given selection
/// rule and the default tolerance.
pub fn solve_spe(
    mechanism: MechanismKind,
    params: &Params,
    selection: SelectionRule,
) -> Result<EquilibriumOutcome, SolveError> {
    solve_spe_with(
        mechanism,
        params,
        SolverOptions {
            selection,
            ..SolverOptions::default()
        },
    )
}

pub fn solve_spe_with(
    mechanism: MechanismKind,
    params: &Params,
    options: SolverOptions,
) -> Result<EquilibriumOutcome, SolveError> {
    let tol = options.tolerance;
    let mut continuations = [EffortProfile::default(); 4];
    let mut stage1 = [[PayoffVector { high: 0.0, low: 0.0 }; 2]; 2];

    for (slot, &d) in ContributionProfile::ALL.iter().enumerate() {
        let game = stage2_game(d, mechanism, params);
        let candidates: Vec<Candidate> = pure_nash(&game, tol)
            .into_iter()
            .map(|(h, l)| {
                let cell = game.cell(h, l);
                let effort = EffortProfile::new(h == 1, l == 1);
                Candidate {
                    contribution: d,
                    effort,
                    welfare: cell.sum(),
                    accuracy: team_accuracy(effort, params).value(),
                }
            })
            .collect();
        let chosen = options
            .selection
            .select(&candidates, tol)
            .ok_or(SolveError::NoPureEffortEquilibrium(d))?;
        continuations[slot] = chosen.effort;
        stage1[d.high as usize][d.low as usize] = payoff(d, chosen.effort, mechanism, params);
    }

    let game = StageGame {
        stage: Stage::Contribution,
        payoffs: stage1,
    };
    let equilibria = pure_nash(&game, tol);
    let candidates: Vec<Candidate> = equilibria
        .iter()
        .map(|&(h, l)| {
            let d = ContributionProfile::new(h == 1, l == 1);
            let effort = continuations[slot_of(d)];
            Candidate {
                contribution: d,
                effort,
                welfare: game.cell(h, l).sum(),
                accuracy: team_accuracy(effort, params).value(),
            }
        })
        .collect();
    let chosen = options
        .selection
        .select(&candidates, tol)
        .ok_or(SolveError::NoPureContributionEquilibrium)?;

    let payoffs = game.cell(chosen.contribution.high as usize, chosen.contribution.low as usize);
    Ok(EquilibriumOutcome {
        mechanism,
        params: *params,
        contribution: chosen.contribution,
        effort: chosen.effort,
        payoffs,
        team_accuracy: chosen.accuracy,
        welfare: payoffs.sum(),
        multiplicity: equilibria.len(),
        continuations,
    })
}

fn slot_of(d: ContributionProfile) -> usize {
    2 * d.high as usize + d.low as usize
}

/// Effort-cost thresholds `((2a-1)/4 * V_L, (2a-1)/4 * V_H)` below which the
/// low (resp. high) member exerts effort without any incentive.
pub fn effort_cost_thresholds(params: &Params) -> (f64, f64) {
    let slope = (2.0 * params.effort_accuracy - 1.0) / 4.0;
    (slope * params.v_low, slope * params.v_high)
}

/// Closed-form equilibrium under equal allocation: nobody contributes, and
/// effort depends only on where `c` falls relative to the two thresholds.
/// Points within `tolerance` of a threshold belong to the cheaper side.
pub fn ea_closed_form(params: &Params, tolerance: f64) -> (ContributionProfile, EffortProfile) {
    let (c_low, c_high) = effort_cost_thresholds(params);
    let c = params.effort_cost;
    let effort = if c <= c_low + tolerance {
        EffortProfile::new(true, true)
    } else if c <= c_high + tolerance {
        EffortProfile::new(true, false)
    } else {
        EffortProfile::new(false, false)
    };
    (ContributionProfile::NONE, effort)
}

impl fmt::Display for EquilibriumOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} accuracy={:.4} welfare={:.4} u=({:.4},{:.4})",
            self.mechanism, self.label(), self.team_accuracy, self.welfare, self.payoffs.high, self.payoffs.low
        )
    }
}
