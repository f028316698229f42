use criterion::{criterion_group, criterion_main, Criterion};
use g2kit::identities::flat_g2;
use g2kit::models::flow::{sasaki_einstein_initial, HypoSystem};
use g2kit::models::samples::random_ansaetze;
use g2kit::models::su2su2::{su2su2_coframe, StandardForms};
use g2kit::models::InvariantAnsatz;
use g2kit::structures::g2_torsion;

fn exterior(c: &mut Criterion) {
    let g = flat_g2().unwrap();
    c.bench_function("wedge phi psi", |b| b.iter(|| g.phi.wedge(&g.psi)));
    c.bench_function("hodge star of phi", |b| b.iter(|| g.metric.hodge(&g.phi, 1).unwrap()));
}

fn torsion(c: &mut Criterion) {
    let std = StandardForms::new();
    let frame = InvariantAnsatz::frame(&su2su2_coframe().unwrap());
    let s = random_ansaetze(1, 1)[0].g2(&frame, &std).unwrap();
    c.bench_function("g2 torsion of a random ansatz", |b| b.iter(|| g2_torsion(&s).unwrap()));
}

fn flow(c: &mut Criterion) {
    let sys = HypoSystem::new(&su2su2_coframe().unwrap(), &StandardForms::new()).unwrap();
    let (eta, w) = sasaki_einstein_initial(1.0);
    c.bench_function("hypo flow, 1000 steps", |b| b.iter(|| sys.flow(eta, w, 1.0, 2.0, 1e-3).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = exterior, torsion, flow
}
criterion_main!(benches);
