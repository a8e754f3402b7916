//! Throughput of the period pipeline with the data-parallel path on and
//! off, plus the two scalar kernels it leans on. The `parallel`/
//! `sequential` pair benches the same work through the runtime switch;
//! building without the `parallel` feature makes the pair coincide.

use criterion::{criterion_group, criterion_main, Criterion};

use abelint::closedform::c_of_h;
use abelint::cover::{continue_branch, TrackOptions, XPath};
use abelint::cycles::{fermat_basis, fermat_poly};
use abelint::periods::{period_matrix, QuadratureConfig};
use abelint::polyring::HomogeneousTop;
use abelint::{c64, Complex64};

fn period_matrix_par_vs_seq(c: &mut Criterion) {
    let n = 2;
    let h = fermat_poly(n);
    let basis = fermat_basis(n, 1e-2).unwrap();
    let base = QuadratureConfig {
        rel_tol: 1e-8,
        ..QuadratureConfig::default()
    };
    let mut group = c.benchmark_group("period_matrix_fermat_n2");
    group.sample_size(20);
    for (name, parallel) in [("parallel", true), ("sequential", false)] {
        let cfg = QuadratureConfig { parallel, ..base };
        group.bench_function(name, |b| {
            b.iter(|| period_matrix(&h, Complex64::ONE, &basis, cfg).unwrap())
        });
    }
    group.finish();
}

fn branch_tracking(c: &mut Criterion) {
    let h = fermat_poly(3);
    let path = XPath::polyline(&[c64(-0.49, 0.49), Complex64::ZERO, c64(0.97, 0.0)]).unwrap();
    let y0 = Complex64::ONE;
    c.bench_function("continue_branch_fermat_n3_corridor", |b| {
        b.iter(|| continue_branch(&h, Complex64::ONE, &path, y0, TrackOptions::default()).unwrap())
    });
}

fn closed_form_constant(c: &mut Criterion) {
    let top = HomogeneousTop::new(
        4,
        vec![
            c64(1.0, 0.1),
            c64(-0.4, 0.3),
            c64(0.2, -0.6),
            c64(0.7, 0.2),
            c64(-0.1, 0.5),
            c64(0.9, -0.2),
        ],
    )
    .unwrap();
    c.bench_function("c_of_h_n4", |b| b.iter(|| c_of_h(&top).unwrap()));
}

criterion_group!(
    benches,
    period_matrix_par_vs_seq,
    branch_tracking,
    closed_form_constant
);
criterion_main!(benches);
