//! Sequential versus rayon execution of the batch workloads: a parameter
//! sweep of effective trajectories, a retarded-field snapshot, and a lattice
//! convergence study.

use std::hint::black_box;

use brl_core::dynamics::{integrate_model_b, SourceLaw};
use brl_core::field::field_snapshot_with;
use brl_core::lattice::{convergence_study, run_coupled};
use brl_core::{exec, Drive, Execution, InitialState, LatticeConfig, ModelParams, WaveInitialData};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn params() -> ModelParams {
    ModelParams {
        omega: 1.0,
        gamma: 0.1,
        gamma0: 1.0,
        alpha0: 1.0,
        ..ModelParams::default()
    }
}

fn modes() -> Vec<Execution> {
    if cfg!(feature = "parallel") {
        vec![Execution::Sequential, Execution::Parallel]
    } else {
        vec![Execution::Sequential]
    }
}

fn sweep(c: &mut Criterion) {
    let gammas: Vec<f64> = (1..=64).map(|k| 0.01 * k as f64).collect();
    let mut group = c.benchmark_group("sweep_model_b");
    for mode in modes() {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &mode,
            |b, &mode| {
                b.iter(|| {
                    exec::map(mode, &gammas, |&gamma| {
                        let p = ModelParams { gamma, ..params() };
                        integrate_model_b(
                            &p,
                            &InitialState::quiescent(1.0, 1.0),
                            &Drive::Zero,
                            20.0,
                            1e-3,
                        )
                        .map(|h| h.final_q())
                        .unwrap_or(f64::NAN)
                    })
                })
            },
        );
    }
    group.finish();
}

fn snapshot(c: &mut Criterion) {
    let p = params();
    let cfg = LatticeConfig::for_horizon(&p, 6.0, 0.01, 1.0);
    let run = run_coupled(
        &p,
        &InitialState::quiescent(1.0, 0.5),
        SourceLaw::B,
        &Drive::Zero,
        &cfg,
        6.0,
        &[],
    )
    .expect("lattice run");
    let data = WaveInitialData::new(|x: f64| (-x * x).exp(), |x: f64| x.sin() * (-x * x).exp());
    let x: Vec<f64> = (0..4000).map(|k| -6.0 + 0.003 * k as f64).collect();
    let mut group = c.benchmark_group("field_snapshot");
    for mode in modes() {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &mode,
            |b, &mode| {
                b.iter(|| {
                    field_snapshot_with(mode, &run.history.src, &data, 5.0, black_box(&x), &p)
                })
            },
        );
    }
    group.finish();
}

fn convergence(c: &mut Criterion) {
    let p = params();
    let base = LatticeConfig::for_horizon(&p, 4.0, 0.04, 1.0);
    let init = InitialState::quiescent(1.0, 0.5);
    let mut group = c.benchmark_group("convergence_study");
    group.sample_size(10);
    for mode in modes() {
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{mode:?}")),
            &mode,
            |b, &mode| {
                b.iter(|| {
                    convergence_study(mode, &p, &init, SourceLaw::B, &Drive::Zero, &base, 4.0, 4)
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, sweep, snapshot, convergence);
criterion_main!(benches);
