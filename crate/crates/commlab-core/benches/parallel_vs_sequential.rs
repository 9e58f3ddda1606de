//! Sequential vs data-parallel execution on the hot sweep paths.
//!
//! Run with `cargo bench`; the `parallel` feature (default) enables the rayon
//! path, and `--no-default-features` pins everything to one thread for an
//! apples-to-apples comparison of the same code.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use commlab_core::catalog::build_group;
use commlab_core::graph::{build_ball, BallOptions};
use commlab_core::words::Runs;
use commlab_core::Exec;

/// All freely reduced words of length ≤ len over the group's alphabet,
/// generated without normal forms so the benchmark measures those.
fn raw_words(n_gens: usize, len: usize) -> Vec<Runs> {
    let mut frontier: Vec<Runs> = vec![Vec::new()];
    let mut all = frontier.clone();
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..n_gens {
                for s in [1i128, -1] {
                    if let Some(&(li, le)) = w.last() {
                        if li == i && (le > 0) != (s > 0) {
                            continue;
                        }
                    }
                    let mut v = w.clone();
                    v.push((i, s));
                    next.push(v);
                }
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

fn bench_nf_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("nf-sweep");
    for spec in ["bs:1,2", "ex3", "ex2hnn:2"] {
        let g = build_group(spec).unwrap();
        let words = raw_words(g.alphabet().len(), 7);
        for exec in [Exec::Seq, Exec::Par] {
            group.bench_with_input(
                BenchmarkId::new(spec, format!("{exec:?}")),
                &exec,
                |b, &exec| {
                    b.iter(|| {
                        let keys = exec.map(&words, |w| g.key(w));
                        criterion::black_box(keys.len())
                    })
                },
            );
        }
    }
    group.finish();
}

fn bench_ball_growth(c: &mut Criterion) {
    let mut group = c.benchmark_group("ball-growth");
    group.sample_size(10);
    for (spec, radius) in [("free:2", 8usize), ("bs:1,2", 9)] {
        let g = build_group(spec).unwrap();
        for exec in [Exec::Seq, Exec::Par] {
            group.bench_with_input(
                BenchmarkId::new(format!("{spec}-r{radius}"), format!("{exec:?}")),
                &exec,
                |b, &exec| {
                    b.iter(|| {
                        let ball = build_ball(
                            &g,
                            radius,
                            &BallOptions {
                                exec,
                                max_vertices: 2_000_000,
                            },
                        )
                        .unwrap();
                        criterion::black_box(ball.len())
                    })
                },
            );
        }
    }
    group.finish();
}

criterion_group!(benches, bench_nf_sweep, bench_ball_growth);
criterion_main!(benches);
