use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;
use std::hint::black_box;

use nhqfi::oracle::{self, StencilConfig};
use nhqfi::pseudo_hermitian::{self, NMode, PseudoQubitParams};
use nhqfi::pt_symmetric::{self, PtInitialState, PtParams};
use nhqfi::qfi;
use nhqfi::StateFamily;

fn bench_expm(c: &mut Criterion) {
    let p = PtParams::new(0.4, 1.0, FRAC_PI_2).unwrap();
    let h = p.hamiltonian();
    c.bench_function("expm_2x2", |b| {
        b.iter(|| oracle::expm(&h.map(|z| z * Complex64::new(0.0, -black_box(1.3)))).unwrap())
    });
}

fn bench_pure_pipeline(c: &mut Criterion) {
    let p = PseudoQubitParams::new(1.0, 1.0, 0.0, NMode::Normalized).unwrap();
    let fam = pseudo_hermitian::right_state_family(&p);
    c.bench_function("qfi_pure_nonhermitian_pseudo", |b| {
        b.iter(|| qfi::qfi_pure_nonhermitian(&fam, black_box(0.7), 1e-5).unwrap().value)
    });
}

fn bench_oracle(c: &mut Criterion) {
    let p = PtParams::new(0.4, 1.0, FRAC_PI_2).unwrap();
    let init = PtInitialState::new(1.0, std::f64::consts::PI).unwrap();
    let psi0 = pt_symmetric::initial_state(&p, &init).unwrap();
    let h = p.hamiltonian();
    let fam = StateFamily::new(move |t: f64| {
        oracle::expm(&h.map(|z| z * Complex64::new(0.0, -t))).unwrap() * &psi0
    });
    c.bench_function("qfi_oracle_pt", |b| {
        b.iter(|| oracle::qfi_oracle(&fam, black_box(0.9), &StencilConfig::for_theta(0.9)).unwrap())
    });
}

fn bench_closed_forms(c: &mut Criterion) {
    let p = PtParams::new(0.4, 1.0, FRAC_PI_2).unwrap();
    let init = PtInitialState::new(1.0, std::f64::consts::PI).unwrap();
    c.bench_function("qfi_unbroken_full", |b| {
        b.iter(|| pt_symmetric::qfi_unbroken(&p, &init, black_box(2.1)).unwrap().generic.value)
    });
}

criterion_group!(benches, bench_expm, bench_pure_pipeline, bench_oracle, bench_closed_forms);
criterion_main!(benches);
