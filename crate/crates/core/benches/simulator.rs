use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use limqsp::bench::{random_clifford_t_state, vn_family_state};
use limqsp::limtdd::{from_statevector, DiagramStore};
use limqsp::sim::{run_with, DenseState, Parallelism};
use limqsp::synth::synthesize_preparation;

// Preparation circuits replayed on the dense simulator, both loop strategies.
fn prep_replay(c: &mut Criterion) {
    let mut group = c.benchmark_group("sim_prep_replay");
    group.sample_size(10);
    for n in [12usize, 16, 18] {
        let psi = if n <= 12 { random_clifford_t_state(n, 3 * n * n, 1) } else { vn_family_state(n) };
        let mut store = DiagramStore::new();
        let root = from_statevector(&mut store, &psi, 1e-10).unwrap();
        let prep = synthesize_preparation(&store, &root, false).unwrap();
        for (name, par) in [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, &n| {
                b.iter(|| {
                    let init = DenseState::basis(n + 1, 1 << n).unwrap();
                    black_box(run_with(&prep, init, par).unwrap())
                })
            });
        }
    }
    group.finish();
}

fn single_gate(c: &mut Criterion) {
    use limqsp::circuit::Gate;
    let mut group = c.benchmark_group("sim_single_gate");
    let m = 20;
    let g = Gate::x(3).ctrl(19).negctrl(7);
    for (name, par) in [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)] {
        let mut state = DenseState::zero(m).unwrap();
        group.bench_function(name, |b| b.iter(|| state.apply_gate_with(black_box(&g), par).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, prep_replay, single_gate);
criterion_main!(benches);
