//! Two-member decentralized information elicitation without verification.
//!
//! Two members with different valuations of the team solution first decide
//! whether to put a fixed incentive volume into a shared pool, then whether
//! to exert costly effort on a binary task. Reports are aggregated by
//! majority and the pool is redistributed by one of three mechanisms: equal
//! allocation, output agreement or Shapley value.
//!
//! The crate provides the accuracy and allocation formulas, exact payoff
//! evaluation, pure-strategy equilibrium solving by backward induction, a
//! report-level Monte Carlo simulator used as an independent check, and
//! `(c, D)` parameter sweeps with mechanism comparison.

pub mod accuracy;
pub mod analysis;
pub mod error;
pub mod game;
pub mod mechanism;
pub mod montecarlo;
pub mod params;

pub use accuracy::{majority, member_accuracy, team_accuracy, Report, TeamAccuracy};
pub use error::{AnalysisError, NonFiniteParam, SolveError};
pub use game::{
    ea_closed_form, effort_cost_thresholds, payoff, pure_nash, solve_spe, solve_spe_with, stage2_game,
    EquilibriumOutcome, EquilibriumRecord, PayoffVector, SelectionRule, SolverOptions, Stage, StageGame,
    DEFAULT_TOLERANCE,
};
pub use mechanism::{check_budget_balance, shapley, shares, AllocationShares, BudgetBalance, ShapleyPair};
pub use montecarlo::{simulate, truthfulness_gap, ReportingStrategy, SimConfig, SimEstimate, TruthfulnessGap};
pub use params::{
    validate, ContributionProfile, EffortProfile, Member, MechanismKind, Params, ValidationReport, ZeroShapleyRule,
};
