//! The acceptance gate: ten end-to-end criteria, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them on success).

mod common;

use heights_core::cech::{
    frobenius_scalar, ker_f_dim_cech, make_hypersurface, phi_tower, serre_d, verify_certificate,
    Verdict,
};
use heights_core::dieudonne::{d_model, f_is_zero, ker_f_dim, truncate};
use heights_core::field::Field;
use heights_core::fgl::{
    ec_fgl, fgl_check, hasse_invariant, height_of, lubin_tate, FormalGroupLaw, HeightKind,
};
use heights_core::laurent::LaurentPoly;
use heights_core::ring::Ring;
use heights_core::series::BiSeries;
use heights_core::strata::{deuring_mass, strata_table};
use heights_core::witt::{WittCtx, WittVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use std::panic::AssertUnwindSafe;
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Runs a criterion body, enforces its time budget, and prints the verdict.
fn criterion(n: usize, label: &str, budget: Duration, body: impl FnOnce()) {
    let start = Instant::now();
    let result = std::panic::catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let ok = result.is_ok() && elapsed <= budget;
    println!(
        "criterion {n} ({label}): {} [{elapsed:.2?} of {budget:.0?}]",
        if ok { "PASS" } else { "FAIL" }
    );
    if let Err(e) = result {
        std::panic::resume_unwind(e);
    }
    assert!(ok, "criterion {n} exceeded its {budget:?} budget: {elapsed:?}");
}

fn primes_to(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

fn fermat(arity: usize, field: &Field) -> LaurentPoly {
    let deg = arity as i32;
    let mut out = LaurentPoly::zero(arity);
    for v in 0..arity {
        let mut e = vec![0i32; arity];
        e[v] = deg;
        out = out.add(&LaurentPoly::monomial(arity, &e, field.one(), field), field);
    }
    out
}

#[test]
fn criterion_01_deuring_mass() {
    criterion(1, "Deuring mass, p <= 199", Duration::from_secs(60), || {
        for p in primes_to(199).into_iter().filter(|&p| p >= 5) {
            let report = deuring_mass(p).unwrap();
            assert_eq!(
                report.mass,
                BigRational::new(BigInt::from(p - 1), BigInt::from(24)),
                "p={p}"
            );
        }
    });
}

#[test]
fn criterion_02_dieudonne_height_criterion() {
    criterion(2, "Dieudonné truth table", Duration::from_secs(10), || {
        for p in [2u64, 3, 5] {
            for d in [1usize, 2] {
                let field = Field::new(p, d, None).unwrap();
                for h in 1..=10usize {
                    for i in 1..=12usize {
                        let module = d_model(h, i, &field).unwrap();
                        let t = truncate(&module, i).unwrap();
                        assert_eq!(t.dim(), i);
                        assert_eq!(f_is_zero(&t, &module), i <= h - 1, "p={p} d={d} h={h} i={i}");
                        assert_eq!(ker_f_dim(&t), i.min(h - 1), "p={p} d={d} h={h} i={i}");
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_03_witt_ring_laws() {
    criterion(3, "randomized Witt laws", Duration::from_secs(120), || {
        let mut rng = common::rng();
        let mut checks = 0usize;
        'outer: loop {
            for p in [2u64, 3, 5] {
                for d in [1usize, 2] {
                    let field = Field::new(p, d, None).unwrap();
                    for n in 1..=4usize {
                        let ctx = WittCtx::new(field.clone(), p, n).unwrap();
                        let rand_vec = |rng: &mut rand_chacha::ChaCha8Rng| {
                            WittVector::new(
                                (0..n).map(|_| common::random_elem(&field, rng)).collect(),
                            )
                        };
                        let a = rand_vec(&mut rng);
                        let b = rand_vec(&mut rng);
                        let c = rand_vec(&mut rng);
                        // Ring axioms.
                        assert_eq!(ctx.add(&a, &b).unwrap(), ctx.add(&b, &a).unwrap());
                        assert_eq!(ctx.mul(&a, &b).unwrap(), ctx.mul(&b, &a).unwrap());
                        assert_eq!(
                            ctx.add(&ctx.add(&a, &b).unwrap(), &c).unwrap(),
                            ctx.add(&a, &ctx.add(&b, &c).unwrap()).unwrap()
                        );
                        assert_eq!(
                            ctx.mul(&ctx.mul(&a, &b).unwrap(), &c).unwrap(),
                            ctx.mul(&a, &ctx.mul(&b, &c).unwrap()).unwrap()
                        );
                        assert_eq!(
                            ctx.mul(&a, &ctx.add(&b, &c).unwrap()).unwrap(),
                            ctx.add(&ctx.mul(&a, &b).unwrap(), &ctx.mul(&a, &c).unwrap())
                                .unwrap()
                        );
                        assert!(ctx.is_zero(&ctx.add(&a, &ctx.neg(&a).unwrap()).unwrap()));
                        assert_eq!(ctx.mul(&a, &ctx.one(n)).unwrap(), a);
                        // Operator relations RVF = FRV = RFV = p on W_n.
                        let pa = ctx.mul_p(&a).unwrap();
                        assert_eq!(
                            ctx.witt_r(&ctx.witt_v(&ctx.witt_f(&a).unwrap())).unwrap(),
                            pa
                        );
                        assert_eq!(
                            ctx.witt_f(&ctx.witt_r(&ctx.witt_v(&a)).unwrap()).unwrap(),
                            pa
                        );
                        assert_eq!(
                            ctx.witt_r(&ctx.witt_f(&ctx.witt_v(&a)).unwrap()).unwrap(),
                            pa
                        );
                        // Closed form of multiplication by p.
                        let mut acc = ctx.zero(n);
                        for _ in 0..p {
                            acc = ctx.add(&acc, &a).unwrap();
                        }
                        assert_eq!(acc, pa);
                        checks += 11;
                        if checks >= 10_000 {
                            break 'outer;
                        }
                    }
                }
            }
        }
        assert!(checks >= 10_000);
    });
}

#[test]
fn criterion_04_formal_group_heights() {
    criterion(4, "Lubin–Tate fixtures", Duration::from_secs(30), || {
        for p in [2u64, 3] {
            for h in 1..=4u32 {
                let n = (p as usize).pow(h) + 1;
                let fgl = lubin_tate(p, h, n).unwrap();
                let report = fgl_check(&fgl);
                assert!(report.identity_ok && report.commutative_ok && report.associative_ok);
                match height_of(&fgl, h).unwrap().kind {
                    HeightKind::Exact { h: found, .. } => assert_eq!(found, h, "p={p} h={h}"),
                    other => panic!("p={p} h={h}: {other:?}"),
                }
            }
        }
        // Multiplicative law x + y + xy has height 1.
        for p in [2u64, 3, 5] {
            let field = Field::new(p, 1, None).unwrap();
            let n = p as usize + 1;
            let mut series = BiSeries::zero(&field, n);
            series.set(1, 0, field.one());
            series.set(0, 1, field.one());
            series.set(1, 1, field.one());
            let fgl = FormalGroupLaw { field, series };
            match height_of(&fgl, 1).unwrap().kind {
                HeightKind::Exact { h, .. } => assert_eq!(h, 1),
                other => panic!("multiplicative law: {other:?}"),
            }
        }
        // Additive law x + y: [p](t) = 0 identically.
        for p in [2u64, 3] {
            let field = Field::new(p, 1, None).unwrap();
            let mut series = BiSeries::zero(&field, 40);
            series.set(1, 0, field.one());
            series.set(0, 1, field.one());
            let fgl = FormalGroupLaw { field, series };
            assert!(matches!(
                height_of(&fgl, 3).unwrap().kind,
                HeightKind::InfiniteWithinTruncation
            ));
        }
    });
}

#[test]
fn criterion_05_elliptic_cross_oracle() {
    criterion(5, "exhaustive elliptic heights", Duration::from_secs(60), || {
        for p in [5u64, 7] {
            let field = Field::new(p, 1, None).unwrap();
            let n = (p as usize).pow(2) + 1;
            for a4 in field.elements() {
                for a6 in field.elements() {
                    let hasse = match hasse_invariant(a4, a6, &field) {
                        Ok(h) => h,
                        Err(_) => continue, // singular
                    };
                    let fgl = ec_fgl(a4, a6, n, &field).unwrap();
                    let h = match height_of(&fgl, 2).unwrap().kind {
                        HeightKind::Exact { h, .. } => h,
                        other => panic!("p={p}: {other:?}"),
                    };
                    assert_eq!(h == 2, field.is_zero(&hasse), "p={p} a4={a4:?} a6={a6:?}");
                }
            }
        }
    });
}

#[test]
fn criterion_06_cech_base_case() {
    criterion(6, "Čech level-1 scalars", Duration::from_secs(60), || {
        let f5 = Field::new(5, 1, None).unwrap();
        let q5 = Arc::new(make_hypersurface(&fermat(4, &f5), &f5).unwrap());
        assert_eq!(frobenius_scalar(&q5).unwrap(), f5.from_int(4));

        let f3 = Field::new(3, 1, None).unwrap();
        let q3 = Arc::new(make_hypersurface(&fermat(4, &f3), &f3).unwrap());
        assert!(f3.is_zero(&frobenius_scalar(&q3).unwrap()));

        let f2 = Field::new(2, 1, None).unwrap();
        let c2 = Arc::new(make_hypersurface(&fermat(3, &f2), &f2).unwrap());
        assert!(f2.is_zero(&frobenius_scalar(&c2).unwrap()));
        // The Fermat cubic at p=2 is supersingular: the tower reaches h=2.
        match phi_tower(&c2, 2, None).unwrap().verdict {
            Verdict::Exact { h, .. } => assert_eq!(h, 2),
            other => panic!("Fermat cubic at p=2: {other:?}"),
        }
    });
}

#[test]
fn criterion_07_phi_tower() {
    criterion(7, "Fermat quartic tower at p=3", Duration::from_secs(600), || {
        let f3 = Field::new(3, 1, None).unwrap();
        let x = Arc::new(make_hypersurface(&fermat(4, &f3), &f3).unwrap());
        let cert = phi_tower(&x, 2, None).unwrap();
        assert_eq!(cert.verdict, Verdict::AtLeast { bound: 3 });
        assert!(verify_certificate(&x, &cert).unwrap());
        for i in 1..=2usize {
            assert_eq!(ker_f_dim_cech(&x, i).unwrap(), i);
        }
    });
}

#[test]
fn criterion_08_tower_dieudonne_consistency() {
    criterion(8, "tower vs Dieudonné kernels", Duration::from_secs(300), || {
        // Perturbed Fermat quartics over F_3 and F_5.
        let perturbations: &[&[(i64, [i32; 4])]] = &[
            &[],
            &[(1, [1, 1, 1, 1])],
            &[(1, [2, 1, 1, 0])],
            &[(1, [3, 1, 0, 0])],
            &[(1, [1, 1, 1, 1]), (1, [2, 2, 0, 0])],
            &[(2, [2, 0, 0, 2])],
            &[(1, [0, 2, 1, 1])],
        ];
        let mut exact = 0usize;
        for p in [3u64, 5] {
            let field = Field::new(p, 1, None).unwrap();
            for terms in perturbations {
                let mut f = fermat(4, &field);
                for (c, e) in *terms {
                    f = f.add(
                        &LaurentPoly::monomial(4, e, field.from_int(*c), &field),
                        &field,
                    );
                }
                let x = match make_hypersurface(&f, &field) {
                    Ok(x) => Arc::new(x),
                    Err(_) => continue,
                };
                let cert = match phi_tower(&x, 2, None) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let h = match cert.verdict {
                    Verdict::Exact { h, .. } => h,
                    _ => continue,
                };
                exact += 1;
                for i in 1..=2usize {
                    let cech_dim = ker_f_dim_cech(&x, i).unwrap();
                    assert_eq!(cech_dim, i.min(h - 1), "p={p} h={h} i={i}");
                    let module = d_model(h, i, &field).unwrap();
                    let t = truncate(&module, i).unwrap();
                    assert_eq!(ker_f_dim(&t), cech_dim, "p={p} h={h} i={i}");
                }
            }
        }
        assert!(exact >= 10, "only {exact} quartics got an exact verdict");
    });
}

#[test]
fn criterion_09_serre_map_identity() {
    criterion(9, "Serre map D_{i+1}∘V = D_i", Duration::from_secs(60), || {
        let mut rng = common::rng();
        for case in 0..100 {
            let p = [2u64, 3, 5][case % 3];
            let field = Field::new(p, 1, None).unwrap();
            let i = 1 + case % 3;
            let comps: Vec<LaurentPoly> = (0..i)
                .map(|_| {
                    let e = [
                        rng.gen_range(-3..4),
                        rng.gen_range(-3..4),
                        rng.gen_range(-3..4),
                    ];
                    let mut c = common::random_elem(&field, &mut rng);
                    if field.is_zero(&c) {
                        c = field.one();
                    }
                    LaurentPoly::monomial(3, &e, c, &field)
                })
                .collect();
            let w = WittVector::new(comps.clone());
            let mut vcomps = vec![LaurentPoly::zero(3)];
            vcomps.extend(comps);
            let vw = WittVector::new(vcomps);
            assert_eq!(serre_d(&vw, &field), serre_d(&w, &field), "case {case}");
        }
    });
}

#[test]
fn criterion_10_stratum_classes() {
    criterion(10, "stratum class table", Duration::from_secs(5), || {
        for p in [2u64, 3, 5] {
            let table = strata_table(p, 11).unwrap();
            assert_eq!(table.len(), 11);
            for (idx, row) in table.iter().enumerate() {
                let h = idx as u32 + 1;
                assert_eq!(row.h, h);
                assert_eq!(row.codim, h - 1);
                assert_eq!(row.open_dim, 20 - h);
                let mut expected = BigInt::from(1);
                for i in 1..h {
                    expected *= BigInt::from(p).pow(i) - BigInt::from(1);
                }
                assert_eq!(row.coefficient, expected, "p={p} h={h}");
            }
        }
    });
}
