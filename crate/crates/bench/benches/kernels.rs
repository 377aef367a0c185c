use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pwl_core::compare::compare_crystalline;
use pwl_core::drw::{lz_basis, DrwSpace};
use pwl_core::prism::{Precision, PrismModel};
use pwl_core::{RingDescriptor, WittVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn witt_mul(c: &mut Criterion) {
    let z8 = RingDescriptor::integers_mod(2, 8u64).compile().unwrap();
    let x = WittVector::from_ints(&z8, &[3, 5, 7]).unwrap();
    let y = WittVector::from_ints(&z8, &[1, 6, 2]).unwrap();
    c.bench_function("witt mul W_3(Z/8)", |b| b.iter(|| black_box(&x).mul(black_box(&y)).unwrap()));
}

fn rn(c: &mut Criterion) {
    let m = PrismModel::q_de_rham(2).unwrap();
    let x = WittVector::from_ints(&m.ring_mod_d().unwrap(), &[1, 1]).unwrap();
    c.bench_function("r_2 q-deRham", |b| b.iter(|| m.universal_map_rn(black_box(&x), Precision::for_level(2, 2)).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    c.bench_function("lambda square q-deRham r=2", |b| b.iter(|| m.lambda_square_check(2, 5, &mut rng).unwrap()));
}

fn drw(c: &mut Criterion) {
    let space = DrwSpace::polynomial(2, 2).unwrap();
    c.bench_function("lz basis k=2 r=2 i=1 cap 4", |b| b.iter(|| lz_basis(&space, 2, 1, 4).unwrap()));
    c.bench_function("compare crystalline k=2 n=2 cap 2", |b| b.iter(|| compare_crystalline(2, 2, 2, 2).unwrap()));
}

criterion_group!(benches, witt_mul, rn, drw);
criterion_main!(benches);
