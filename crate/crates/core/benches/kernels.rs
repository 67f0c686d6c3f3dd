use criterion::{criterion_group, criterion_main, Criterion};
use ssom_core::homotopy::{quasi_fibration_certify_with, CertifyMode};
use ssom_core::io::corpus::{braid3_arrangement, corpus};
use ssom_core::oriented_matroid::from_arrangement_with;
use ssom_core::par::Execution;
use ssom_core::salvetti::SalvettiPoset;

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn bench_kernels(c: &mut Criterion) {
    let arr = braid3_arrangement();
    let np = corpus("non-pappus").unwrap();
    let sec3 = corpus("sec3-arrangement").unwrap();
    let x = sec3.parse_set("H1,H2,H3").unwrap();
    for exec in MODES {
        c.bench_function(&format!("from_arrangement/braid3/{exec:?}"), |b| {
            b.iter(|| from_arrangement_with(&arr, exec).unwrap())
        });
        c.bench_function(&format!("check_axioms/non-pappus/{exec:?}"), |b| {
            b.iter(|| assert!(np.check_axioms_with(exec).passed()))
        });
        c.bench_function(&format!("salvetti/non-pappus/{exec:?}"), |b| {
            b.iter(|| SalvettiPoset::new_with(&np, exec))
        });
    }
    let mut group = c.benchmark_group("certify-qf");
    group.sample_size(10);
    for exec in MODES {
        group.bench_function(format!("sec3/{exec:?}"), |b| {
            b.iter(|| {
                quasi_fibration_certify_with(&sec3, x, CertifyMode::Exhaustive, exec).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_kernels);
criterion_main!(benches);
