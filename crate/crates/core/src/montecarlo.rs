//! Report-level simulation of the effort stage.
//!
//! Each sample draws a ground truth, each member's private solution and the
//! majority tie coin, then realizes the allocation from the actual reports.
//! The estimates are independent of the closed-form accuracy and share
//! formulas and serve as a check on them.
//!
//! Samples are drawn in fixed-size batches; batch `i` uses stream `i` of a
//! ChaCha8 generator seeded from the configured seed, so results do not depend
//! on how batches are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::accuracy::{majority, member_accuracy, Report};
use crate::mechanism::shares_sv_with;
use crate::params::{ContributionProfile, EffortProfile, Member, MechanismKind, Params};

pub const GENERATOR: &str = "ChaCha8Rng";

/// Samples per batch. Part of the reproducibility contract: changing it
/// changes every estimate.
pub const BATCH_SIZE: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportingStrategy {
    #[default]
    Truthful,
    AlwaysFlip,
}

impl ReportingStrategy {
    fn apply(self, private: Report) -> Report {
        match self {
            ReportingStrategy::Truthful => private,
            ReportingStrategy::AlwaysFlip => private.flipped(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub samples: u64,
    pub seed: u64,
    pub params: Params,
    pub reporting_high: ReportingStrategy,
    pub reporting_low: ReportingStrategy,
}

impl SimConfig {
    pub fn new(samples: u64, seed: u64, params: Params) -> Self {
        SimConfig {
            samples: samples.max(1),
            seed,
            params,
            reporting_high: ReportingStrategy::Truthful,
            reporting_low: ReportingStrategy::Truthful,
        }
    }

    pub fn reporting(&self, member: Member) -> ReportingStrategy {
        match member {
            Member::High => self.reporting_high,
            Member::Low => self.reporting_low,
        }
    }

    fn with_reporting(mut self, member: Member, strategy: ReportingStrategy) -> Self {
        match member {
            Member::High => self.reporting_high = strategy,
            Member::Low => self.reporting_low = strategy,
        }
        self
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub generator: String,
    pub seed: u64,
    pub samples: u64,
    pub mechanism: MechanismKind,
    pub effort: EffortProfile,
    pub contribution: ContributionProfile,
    pub team_accuracy: Stat,
    pub share_high: Stat,
    pub share_low: Stat,
    pub payoff_high: Stat,
    pub payoff_low: Stat,
}

impl SimEstimate {
    pub fn share(&self, member: Member) -> Stat {
        match member {
            Member::High => self.share_high,
            Member::Low => self.share_low,
        }
    }

    pub fn payoff(&self, member: Member) -> Stat {
        match member {
            Member::High => self.payoff_high,
            Member::Low => self.payoff_low,
        }
    }
}

/// Paired difference between truthful and flipped reporting for one member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub gap: f64,
    pub se: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthfulnessGap {
    pub generator: String,
    pub seed: u64,
    pub samples: u64,
    pub mechanism: MechanismKind,
    pub effort: EffortProfile,
    pub contribution: ContributionProfile,
    pub high: GapEstimate,
    pub low: GapEstimate,
}

impl TruthfulnessGap {
    pub fn get(&self, member: Member) -> GapEstimate {
        match member {
            Member::High => self.high,
            Member::Low => self.low,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    sum: f64,
    sum_sq: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    fn stat(&self) -> Stat {
        let n = self.n as f64;
        let mean = self.sum / n;
        let se = if self.n > 1 {
            let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Stat { mean, se }
    }
}

/// One sampled world: ground truth, both private solutions and the tie coin.
#[derive(Debug, Clone, Copy)]
struct Draw {
    truth: Report,
    private_high: Report,
    private_low: Report,
    coin: Report,
}

impl Draw {
    fn sample<R: Rng>(rng: &mut R, q_high: f64, q_low: f64) -> Draw {
        let truth = Report::from_sign(rng.gen::<bool>());
        let solve = |rng: &mut R, q: f64| if rng.gen_bool(q) { truth } else { truth.flipped() };
        let private_high = solve(rng, q_high);
        let private_low = solve(rng, q_low);
        let coin = Report::from_sign(rng.gen::<bool>());
        Draw {
            truth,
            private_high,
            private_low,
            coin,
        }
    }
}

/// Realized per-sample payoffs and shares for fixed strategies.
struct Realizer {
    mechanism: MechanismKind,
    params: Params,
    effort: EffortProfile,
    contribution: ContributionProfile,
}

struct Realized {
    correct: bool,
    shares: [f64; 2],
    payoffs: [f64; 2],
}

impl Realizer {
    fn realize(&self, draw: &Draw, high: ReportingStrategy, low: ReportingStrategy) -> Realized {
        let report_high = high.apply(draw.private_high);
        let report_low = low.apply(draw.private_low);
        let correct = majority(report_high, report_low, draw.coin) == draw.truth;
        let shares = match self.mechanism {
            MechanismKind::Ea => [0.5, 0.5],
            MechanismKind::Oa => {
                if report_high == report_low {
                    [0.5, 0.5]
                } else {
                    [0.0, 0.0]
                }
            }
            // Effort is observable, so Shapley shares follow effort, not reports.
            MechanismKind::Sv(rule) => {
                let s = shares_sv_with(self.effort, &self.params, rule);
                [s.high, s.low]
            }
        };
        let pool = self.contribution.pool(&self.params);
        let mut payoffs = [0.0; 2];
        for m in Member::BOTH {
            let i = m.index();
            let cost = if self.effort.exerts(m) { self.params.effort_cost } else { 0.0 };
            payoffs[i] = self.params.valuation(m) * f64::from(correct as u8) + shares[i] * pool
                - self.contribution.amount(m, &self.params)
                - cost;
        }
        Realized {
            correct,
            shares,
            payoffs,
        }
    }
}

/// Runs `samples` draws in deterministic batches and merges `K` running
/// moments in batch order.
fn run_batches<const K: usize, F>(cfg: &SimConfig, effort: EffortProfile, per_sample: F) -> [Moments; K]
where
    F: Fn(&Draw) -> [f64; K] + Sync,
{
    let q_high = member_accuracy(effort.high, &cfg.params);
    let q_low = member_accuracy(effort.low, &cfg.params);
    let batches = cfg.samples.div_ceil(BATCH_SIZE);
    let partials: Vec<[Moments; K]> = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(batch);
            let n = BATCH_SIZE.min(cfg.samples - batch * BATCH_SIZE);
            let mut acc = [Moments::default(); K];
            for _ in 0..n {
                let draw = Draw::sample(&mut rng, q_high, q_low);
                for (slot, x) in acc.iter_mut().zip(per_sample(&draw)) {
                    slot.push(x);
                }
            }
            acc
        })
        .collect();
    let mut total = [Moments::default(); K];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total
}

/// Estimates team accuracy, realized shares and payoffs for fixed strategies.
pub fn simulate(
    effort: EffortProfile,
    contribution: ContributionProfile,
    mechanism: MechanismKind,
    cfg: &SimConfig,
) -> SimEstimate {
    let realizer = Realizer {
        mechanism,
        params: cfg.params,
        effort,
        contribution,
    };
    let [acc, sh, sl, ph, pl] = run_batches(cfg, effort, |draw| {
        let r = realizer.realize(draw, cfg.reporting_high, cfg.reporting_low);
        [f64::from(r.correct as u8), r.shares[0], r.shares[1], r.payoffs[0], r.payoffs[1]]
    });
    SimEstimate {
        generator: GENERATOR.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        mechanism,
        effort,
        contribution,
        team_accuracy: acc.stat(),
        share_high: sh.stat(),
        share_low: sl.stat(),
        payoff_high: ph.stat(),
        payoff_low: pl.stat(),
    }
}

/// For each member, the expected payoff from truthful reporting minus the
/// payoff when she alone always flips her report, on common random numbers.
pub fn truthfulness_gap(
    mechanism: MechanismKind,
    effort: EffortProfile,
    contribution: ContributionProfile,
    cfg: &SimConfig,
) -> TruthfulnessGap {
    let realizer = Realizer {
        mechanism,
        params: cfg.params,
        effort,
        contribution,
    };
    let honest = [
        cfg.with_reporting(Member::High, ReportingStrategy::Truthful),
        cfg.with_reporting(Member::Low, ReportingStrategy::Truthful),
    ];
    let flipped = [
        cfg.with_reporting(Member::High, ReportingStrategy::AlwaysFlip),
        cfg.with_reporting(Member::Low, ReportingStrategy::AlwaysFlip),
    ];
    let [gh, gl] = run_batches(cfg, effort, |draw| {
        let mut out = [0.0; 2];
        for m in Member::BOTH {
            let i = m.index();
            let t = realizer.realize(draw, honest[i].reporting_high, honest[i].reporting_low);
            let f = realizer.realize(draw, flipped[i].reporting_high, flipped[i].reporting_low);
            out[i] = t.payoffs[i] - f.payoffs[i];
        }
        out
    });
    let gap = |m: Moments| {
        let s = m.stat();
        GapEstimate { gap: s.mean, se: s.se }
    };
    TruthfulnessGap {
        generator: GENERATOR.to_string(),
        seed: cfg.seed,
        samples: cfg.samples,
        mechanism,
        effort,
        contribution,
        high: gap(gh),
        low: gap(gl),
    }
}
