use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64 as C64;
use std::hint::black_box;

use ioncav_core::evolution::{evolve, EvolutionRequest};
use ioncav_core::hamiltonian::{build_effective, EffectiveModel};
use ioncav_core::protocols::{run_entangled_coherent, run_phase_gate, run_squeezed_cat, run_su2_cat};
use ioncav_core::space::{HilbertSpec, Internal, StateVector};
use ioncav_core::{analysis, targets};

fn bench_evolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve_beam_splitter");
    for cutoff in [10usize, 20, 30] {
        let spec = HilbertSpec::new(cutoff, cutoff).unwrap();
        let h = build_effective(spec, EffectiveModel::BeamSplitter, 1.0).unwrap();
        let input = StateVector::fock(spec, 0, 1, Internal::E).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cutoff), &cutoff, |b, _| {
            b.iter(|| {
                let req = EvolutionRequest::new(&h, &input, 0.785);
                black_box(evolve(&req).unwrap())
            })
        });
    }
    group.finish();
}

fn bench_protocols(c: &mut Criterion) {
    let spec8 = HilbertSpec::new(8, 8).unwrap();
    c.bench_function("run_su2_cat_n5", |b| {
        b.iter(|| black_box(run_su2_cat(spec8, 5, 0.3).unwrap()))
    });

    let spec25 = HilbertSpec::new(25, 25).unwrap();
    c.bench_function("run_entangled_coherent_half_angle", |b| {
        b.iter(|| {
            black_box(
                run_entangled_coherent(
                    spec25,
                    C64::new(0.8, 0.0),
                    C64::new(0.0, 0.4),
                    targets::EcsVariant::HalfAngle,
                )
                .unwrap(),
            )
        })
    });

    let spec40 = HilbertSpec::new(40, 40).unwrap();
    c.bench_function("run_squeezed_cat_r05", |b| {
        b.iter(|| black_box(run_squeezed_cat(spec40, 0.5).unwrap()))
    });

    let spec2 = HilbertSpec::new(2, 2).unwrap();
    let input = [C64::new(0.5, 0.0); 4];
    c.bench_function("run_phase_gate", |b| {
        b.iter(|| black_box(run_phase_gate(spec2, &input).unwrap()))
    });
}

fn bench_analysis(c: &mut Criterion) {
    let spec = HilbertSpec::new(40, 40).unwrap();
    let state = targets::two_mode_squeezed_vacuum(spec, 0.5).unwrap();
    c.bench_function("schmidt_entropy_40", |b| {
        b.iter(|| black_box(analysis::schmidt_entropy(&state)))
    });
}

criterion_group!(benches, bench_evolve, bench_protocols, bench_analysis);
criterion_main!(benches);
