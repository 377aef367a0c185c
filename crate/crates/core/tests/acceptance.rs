//! The twelve acceptance criteria. Prints one line per criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use pwl_core::compare::{base_change_suite, compare_crystalline};
use pwl_core::drw::{axiom_suite, basis_iso_check, enumerate_weights, filtration_check, higher_cartier_check, lz_basis, one_variable_decomposition, Base, DrwSpace};
use pwl_core::prism::{rn_hom_check, Precision, PrismModel};
use pwl_core::tilt::{commut_diagrams_check, xi_family, DiagramStatus, TiltModel};
use pwl_core::{Ring, RingDescriptor, RingElement, WittVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn int(x: &RingElement) -> BigInt {
    x.as_integer().expect("constant coordinate")
}

// ghost-lift oracle: lift to Z, add or multiply ghost components, invert the ghost map over Z

fn ghost_z(p: u64, x: &[BigInt]) -> Vec<BigInt> {
    let p = BigInt::from(p);
    (0..x.len())
        .map(|k| (0..=k).map(|i| p.pow(i as u32) * x[i].pow(p.to_u32().unwrap().pow((k - i) as u32))).sum())
        .collect()
}

fn unghost_z(p: u64, w: &[BigInt]) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    let mut x: Vec<BigInt> = Vec::new();
    for k in 0..w.len() {
        let lower: BigInt = (0..k).map(|i| pb.pow(i as u32) * x[i].pow((p as u32).pow((k - i) as u32))).sum();
        let (q, r) = (&w[k] - lower).div_rem(&pb.pow(k as u32));
        assert!(r.is_zero(), "ghost vector not integral at {k}");
        x.push(q);
    }
    x
}

fn oracle(p: u64, m: u64, x: &[i64], y: &[i64], mul: bool) -> Vec<i64> {
    let (gx, gy) = (ghost_z(p, &x.iter().map(|v| BigInt::from(*v)).collect::<Vec<_>>()), ghost_z(p, &y.iter().map(|v| BigInt::from(*v)).collect::<Vec<_>>()));
    let g: Vec<BigInt> = gx.iter().zip(&gy).map(|(a, b)| if mul { a * b } else { a + b }).collect();
    unghost_z(p, &g).iter().map(|c| c.mod_floor(&BigInt::from(m)).to_i64().unwrap()).collect()
}

fn witt_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut counts = Vec::new();
    for (m, label) in [(2u64, "F2"), (8, "Z/8")] {
        let ring: Ring = if m == 2 { RingDescriptor::prime_field(2) } else { RingDescriptor::integers_mod(2, 8u64) }.compile().unwrap();
        for n in 1..=3usize {
            let pairs: Vec<(Vec<i64>, Vec<i64>)> = if m == 2 && n <= 2 {
                let all: Vec<Vec<i64>> = (0..(1 << n)).map(|k| (0..n).map(|i| (k >> i) & 1).collect()).collect();
                all.iter().flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone()))).collect()
            } else {
                (0..1000).map(|_| ((0..n).map(|_| rng.gen_range(0..m as i64)).collect(), (0..n).map(|_| rng.gen_range(0..m as i64)).collect())).collect()
            };
            for (a, b) in &pairs {
                let (x, y) = (WittVector::from_ints(&ring, a).unwrap(), WittVector::from_ints(&ring, b).unwrap());
                for (mul, z) in [(false, x.add(&y).unwrap()), (true, x.mul(&y).unwrap())] {
                    let got: Vec<i64> = z.coords().iter().map(|c| int(c).mod_floor(&BigInt::from(m)).to_i64().unwrap()).collect();
                    ensure(got == oracle(2, m, a, b, mul), format!("{label} n={n} {a:?} {} {b:?}: {got:?}", if mul { "*" } else { "+" }))?;
                }
            }
            counts.push(format!("W_{n}({label}):{}", pairs.len()));
        }
    }
    ensure(counts.contains(&"W_2(F2):16".to_string()), "W_2(F_2) not exhaustive")?;
    Ok(format!("pairs per op {}", counts.join(" ")))
}

fn generator_formula() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3] {
        let m = PrismModel::q_de_rham(p).unwrap();
        let q_mod_d = RingElement::var(&m.ring_mod_d().unwrap(), "q").unwrap();
        let q = RingElement::var(m.ring(), "q").unwrap();
        for n in 1..=3usize {
            for j in 0..n {
                let mut x = WittVector::teichmuller(&q_mod_d, n - j);
                for _ in 0..j {
                    x = x.verschiebung();
                }
                let emb = m.rn_product_embedding(&x).unwrap();
                ensure(emb.len() == n, format!("p={p} n={n} j={j}: {} components", emb.len()))?;
                for (i, c) in emb.iter().enumerate() {
                    let expect = if i + j <= n - 1 { q.pow(p.pow((n - 1 - j) as u32)).scale_int(&BigInt::from(p).pow(j as u32)) } else { RingElement::zero(m.ring()) };
                    let expect = expect.coerce(c.ring()).unwrap();
                    ensure(c == &expect, format!("p={p} n={n} j={j} component {i}: {c} != {expect}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} components"))
}

/// Crystalline r_n as an integer mod p^n.
fn rn_int(m: &PrismModel, x: &WittVector) -> i64 {
    let v = m.universal_map_rn(x, Precision::for_level(m.p, x.len() as u32)).unwrap();
    int(&v.value).mod_floor(&BigInt::from(m.p.pow(x.len() as u32))).to_i64().unwrap()
}

fn rn_homomorphism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut notes = Vec::new();
    for (p, n, exhaustive) in [(2u64, 2usize, true), (3, 2, true), (2, 3, false)] {
        let m = PrismModel::crystalline(p).unwrap();
        let fp = m.ring_mod_d().unwrap();
        let modulus = p.pow(n as u32) as i64;
        let all: Vec<WittVector> = (0..modulus).map(|k| WittVector::from_ints(&fp, &(0..n).map(|i| (k / (p as i64).pow(i as u32)) % p as i64).collect::<Vec<_>>()).unwrap()).collect();
        let pairs: Vec<(usize, usize)> = if exhaustive {
            (0..all.len()).flat_map(|a| (0..all.len()).map(move |b| (a, b))).collect()
        } else {
            (0..500).map(|_| (rng.gen_range(0..all.len()), rng.gen_range(0..all.len()))).collect()
        };
        for (a, b) in &pairs {
            let (x, y) = (&all[*a], &all[*b]);
            let (rx, ry) = (rn_int(&m, x), rn_int(&m, y));
            ensure(rn_int(&m, &x.add(y).unwrap()) == (rx + ry) % modulus, format!("additivity fails on W_{n}(F_{p})"))?;
            ensure(rn_int(&m, &x.mul(y).unwrap()) == (rx * ry) % modulus, format!("multiplicativity fails on W_{n}(F_{p})"))?;
        }
        notes.push(format!("W_{n}(F_{p}):{}", pairs.len()));
    }
    let q = PrismModel::q_de_rham(2).unwrap();
    let h = rn_hom_check(&q, 2, Some(500), &mut rng).unwrap();
    ensure(h.pass && h.pairs >= 500, format!("q-deRham: {h:?}"))?;
    notes.push(format!("q-deRham n=2:{}", h.pairs));
    for (p, n) in [(2u64, 2usize), (2, 3), (3, 2)] {
        let m = PrismModel::crystalline(p).unwrap();
        let fp = m.ring_mod_d().unwrap();
        let size = p.pow(n as u32) as i64;
        let mut images: Vec<i64> = (0..size)
            .map(|k| rn_int(&m, &WittVector::from_ints(&fp, &(0..n).map(|i| (k / (p as i64).pow(i as u32)) % p as i64).collect::<Vec<_>>()).unwrap()))
            .collect();
        images.sort_unstable();
        images.dedup();
        ensure(images == (0..size).collect::<Vec<_>>(), format!("r_{n} on W_{n}(F_{p}) is not onto Z/{size}"))?;
    }
    notes.push("bijective (2,2) (2,3) (3,2)".into());
    Ok(notes.join(" "))
}

fn six_diagrams() -> Outcome {
    for r in 1..=3 {
        let m = TiltModel::charp(2, 3, r + 1).unwrap();
        let sample = m.generating_sample(4, 8, 7).unwrap();
        let rep = commut_diagrams_check(&m, r, &sample, 4).unwrap();
        ensure(rep.lambda.is_some(), format!("r={r}: lambda not found"))?;
        ensure(rep.diagrams.len() == 6 && rep.diagrams.iter().all(|d| d.status == DiagramStatus::Pass), format!("r={r}: {:?}", rep.diagrams))?;
    }
    Ok("charp m=3, degree ≤ 4, r = 1..3, λ found".into())
}

fn xi_kernels() -> Outcome {
    let mut notes = Vec::new();
    for r in 1..=3 {
        let charp = xi_family(&TiltModel::charp(2, 2, 4).unwrap(), r, 4, 2).unwrap();
        ensure(charp.pass && charp.xi_r_in_kernel && charp.generates, format!("charp r={r}: {charp:?}"))?;
        let cyclo = xi_family(&TiltModel::cyclo(2, 1, 3).unwrap(), r, 4, 2).unwrap();
        ensure(cyclo.pass && cyclo.xi_r_in_kernel && cyclo.generates, format!("cyclo r={r}: {cyclo:?}"))?;
        notes.push(format!("r={r}:{}={}", cyclo.kernel_length, cyclo.ideal_length));
    }
    Ok(format!("precision 2^4, cyclotomic lengths {}", notes.join(" ")))
}

fn basis_ranks() -> Outcome {
    let mut count = 0;
    for k in 1..=2usize {
        for r in 1..=2u32 {
            // weights with numerators at most 4 over p^r
            for w in enumerate_weights(2, k, r, 4, Base::Polynomial).unwrap() {
                if w.numerators().iter().any(|x| *x > 4) {
                    continue;
                }
                for i in 0..=k {
                    let c = basis_iso_check(&w, Base::Polynomial, i, r).unwrap();
                    ensure(c.pass, format!("k={k} r={r} {w} degree {i}: {c:?}"))?;
                    let lz_rank: u32 = lz_basis(&DrwSpace::polynomial(2, k).unwrap(), r, i, 4).unwrap().iter().filter(|e| e.weight == w).map(|e| e.coeff_len).sum();
                    ensure(lz_rank == c.quotient_length, format!("{w} degree {i}: rank {lz_rank} vs {}", c.quotient_length))?;
                    count += 1;
                }
            }
        }
    }
    let one = DrwSpace::polynomial(2, 1).unwrap();
    for r in 1..=2 {
        let rep = one_variable_decomposition(2, r, 4).unwrap();
        ensure(rep.pass, format!("one-variable r={r}: {:?}", rep.pieces.iter().find(|x| !x.pass)))?;
        ensure(lz_basis(&one, r, 2, 4).unwrap().is_empty(), "Ω^2 nonzero in one variable")?;
    }
    Ok(format!("{count} (weight, degree) pairs, one-variable decomposition reproduced"))
}

fn axioms() -> Outcome {
    let mut notes = Vec::new();
    for k in 1..=2 {
        let rep = axiom_suite(&DrwSpace::polynomial(2, k).unwrap(), 3, 1, 1000, 17 + k as u64, 10).unwrap();
        let bad: Vec<_> = rep.axioms.iter().filter(|a| a.checked == 0 || a.failures > 0).collect();
        ensure(rep.pass && bad.is_empty() && rep.random_elements >= 1000, format!("k={k}: {bad:?}"))?;
        notes.push(format!("k={k}: {} basis + {} random", rep.basis_elements, rep.random_elements));
    }
    Ok(notes.join(", "))
}

fn higher_cartier() -> Outcome {
    let mut notes = Vec::new();
    for (k, cap) in [(1usize, 8i64), (2, 3)] {
        for n in 1..=2 {
            let rep = higher_cartier_check(&DrwSpace::polynomial(2, k).unwrap(), n, cap).unwrap();
            ensure(rep.pass && !rep.weights.is_empty(), format!("k={k} n={n}: {:?}", rep.weights.iter().find(|w| !w.pass)))?;
            notes.push(format!("k={k},n={n}:{}", rep.weights.len()));
        }
    }
    Ok(format!("weights checked {}", notes.join(" ")))
}

fn filtration() -> Outcome {
    let rep = filtration_check(&DrwSpace::polynomial(2, 1).unwrap(), 2, 8).unwrap();
    ensure(rep.pass && !rep.kernels.is_empty() && !rep.graded.is_empty(), format!("{} failures", rep.failures))?;
    Ok(format!("{} kernel rows, {} graded rows", rep.kernels.len(), rep.graded.len()))
}

fn crystalline_comparison() -> Outcome {
    let mut notes = Vec::new();
    for vars in 1..=2 {
        let rep = compare_crystalline(2, vars, 2, 4).unwrap();
        ensure(rep.pass, format!("vars={vars}: {} failures", rep.failures))?;
        for e in &rep.entries {
            ensure(e.lhs_torsion == e.rhs_torsion, format!("{} degree {}: torsion differs", e.weight, e.degree))?;
            if vars == 1 {
                // H^0 and H^1 of Z/4 ─m→ Z/4 at weight m > 0 are Z/2^{min(v_2(m), 2)}; Z/4 and 0 at m = 0
                let m = e.target_weight[0];
                let v = if m == 0 { 2 } else { (m.trailing_zeros()).min(2) };
                let expect: Vec<u32> = match (m, e.degree) {
                    (0, 0) => vec![2],
                    (0, _) => vec![],
                    _ if v == 0 => vec![],
                    _ => vec![v],
                };
                ensure(e.rhs_torsion == expect, format!("backend at T^{m} degree {}: {:?}", e.degree, e.rhs_torsion))?;
            }
        }
        notes.push(format!("vars={vars}: {} entries, {} acyclic", rep.entries.len(), rep.acyclic.len()));
    }
    Ok(notes.join(", "))
}

fn lambda_square() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut units = Vec::new();
    for m in [PrismModel::crystalline(2).unwrap(), PrismModel::q_de_rham(2).unwrap()] {
        for r in 1..=2 {
            let rep = m.lambda_square_check(r, 50, &mut rng).unwrap();
            ensure(rep.pass && rep.consistent == 50 && rep.unit_is_unit, format!("{rep:?}"))?;
            units.push(format!("{}/r={r}: u={}", rep.preset.name(), rep.unit));
        }
    }
    Ok(units.join(", "))
}

fn base_change() -> Outcome {
    let suite = base_change_suite(20, 5).unwrap();
    ensure(suite.applicable == 20 && suite.conclusion_holds == 20, format!("{} of 20 hold", suite.conclusion_holds))?;
    ensure(suite.detector_fires && !suite.detector.conclusion, "detector did not fire")?;
    Ok("20 complexes, detector fires on Z/4 ─2→ Z/4 with Q = Z/2".into())
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 12] = [
        ("Witt sums and products vs ghost-lift oracle", 10, witt_oracle),
        ("product embedding of V^j([q]) in closed form", 5, generator_formula),
        ("r_n homomorphism and crystalline bijectivity", 60, rn_homomorphism),
        ("six tilting diagrams commute", 30, six_diagrams),
        ("ξ_r generates ker θ_r", 30, xi_kernels),
        ("basis ranks vs integral-forms ranks", 120, basis_ranks),
        ("F-V-procomplex axioms", 60, axioms),
        ("higher Cartier isomorphism", 120, higher_cartier),
        ("filtration kernels and graded pieces", 60, filtration),
        ("crystalline comparison", 180, crystalline_comparison),
        ("λ square with one unit", 30, lambda_square),
        ("base change under Tor vanishing", 10, base_change),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(*limit) => Err(format!("took {elapsed:.1?}, limit {limit}s")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        failed += usize::from(outcome.is_err());
        println!("criterion {:>2} {status} {name} ({elapsed:.2?}): {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} of 12 criteria failed");
        std::process::exit(1);
    }
}
