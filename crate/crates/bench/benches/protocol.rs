use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;

use vbqc::devices::{noisy_source_state, sample_device_errors, NoiseParams, ServerBehavior};
use vbqc::protocol::{run_protocol, run_round, Algorithm, ProtocolConfig, RoundType};
use vbqc::rng::round_rng;
use vbqc::{blindness_report, holevo_protocol_ensemble, BlindnessOptions};

fn single_round(c: &mut Criterion) {
    let noise = NoiseParams::measured();
    let source = noisy_source_state(&noise).unwrap();
    let alg = Algorithm::y_basis(false, false);
    let mut g = c.benchmark_group("round");
    for rt in [RoundType::Computation, RoundType::Test] {
        g.bench_function(format!("{rt:?}").to_lowercase(), |b| {
            let mut i = 0u64;
            b.iter(|| {
                let mut rng = round_rng(1, i);
                i += 1;
                let errors = sample_device_errors(&noise, &mut rng);
                run_round(alg, rt, &source, errors, &ServerBehavior::Honest, &mut rng).unwrap()
            })
        });
    }
    g.finish();
}

fn full_run(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_protocol");
    g.sample_size(10);
    for n in [1_000u64, 27_441] {
        g.throughput(Throughput::Elements(n));
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let cfg = ProtocolConfig::new(Algorithm::y_basis(false, false), n, NoiseParams::measured());
            b.iter(|| run_protocol(black_box(&cfg), 5).unwrap())
        });
    }
    g.finish();
}

fn blindness(c: &mut Criterion) {
    let source = noisy_source_state(&NoiseParams::measured()).unwrap();
    c.bench_function("holevo_protocol_ensemble", |b| b.iter(|| holevo_protocol_ensemble(black_box(&source)).unwrap()));
    c.bench_function("blindness_report", |b| {
        b.iter(|| blindness_report(black_box(&source), &BlindnessOptions::default()).unwrap())
    });
}

criterion_group!(benches, single_round, full_run, blindness);
criterion_main!(benches);
