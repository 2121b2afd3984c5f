use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use elicit_core::analysis::{sweep, Range};
use elicit_core::{
    simulate, solve_spe, ContributionProfile, EffortProfile, MechanismKind, Params, SelectionRule, SimConfig,
    SolverOptions,
};

fn solve(c: &mut Criterion) {
    let p = Params::default().with_volume(0.4);
    let mut group = c.benchmark_group("solve_spe");
    for mech in MechanismKind::ALL {
        group.bench_with_input(BenchmarkId::from_parameter(mech), &mech, |b, &m| {
            b.iter(|| solve_spe(m, black_box(&p), SelectionRule::Canonical))
        });
    }
    group.finish();
}

fn grid(c: &mut Criterion) {
    let p = Params::default();
    let cr = Range::new(0.005, 0.5, 50);
    let dr = Range::new(0.008, 0.8, 50);
    c.bench_function("sweep_sv_50x50", |b| {
        b.iter(|| sweep(MechanismKind::ALL[2], &p, cr, dr, SolverOptions::default()))
    });
}

fn monte_carlo(c: &mut Criterion) {
    let cfg = SimConfig::new(100_000, 1, Params::default());
    c.bench_function("simulate_oa_100k", |b| {
        b.iter(|| {
            simulate(
                EffortProfile::new(true, true),
                ContributionProfile::new(true, false),
                MechanismKind::Oa,
                black_box(&cfg),
            )
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = solve, grid, monte_carlo
}
criterion_main!(benches);
