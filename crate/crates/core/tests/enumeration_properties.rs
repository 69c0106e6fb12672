use std::collections::BTreeMap;
use std::sync::Arc;

use canonkac::enumerate::{
    count_abs_indec, decompose, end_basis, endo, is_abs_indec, is_indec, iterate_solutions, jordan_type,
    unit_count, EnumOptions,
};
use canonkac::gf::{Field, Matrix};
use canonkac::presentations::{AlgebraKind, AlgebraPresentation, Representation, WeightData};
use canonkac::torsionpair::sub_dims;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pres(kind: AlgebraKind, p: Vec<usize>, lambda: Vec<u32>, q: u64) -> AlgebraPresentation {
    let f = Arc::new(Field::with_order(q).unwrap());
    AlgebraPresentation::build(kind, &WeightData::new(p, lambda, f).unwrap()).unwrap()
}

fn random_invertible(rng: &mut ChaCha8Rng, n: usize, f: &Field) -> Matrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.order())).collect();
        let m = Matrix::from_vec(n, n, data);
        if m.is_invertible(f) {
            return m;
        }
    }
}

fn jordan_multiset(a: &AlgebraPresentation, m: &Representation) -> BTreeMap<Vec<Vec<usize>>, usize> {
    let f = a.field();
    let e = end_basis(a, m);
    let mut out = BTreeMap::new();
    e.scan(f, 1 << 20, |theta| {
        if endo::is_nilpotent(f, theta) {
            *out.entry(jordan_type(a, m, theta).unwrap()).or_insert(0) += 1;
        }
        false
    })
    .unwrap();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn invariants_constant_on_orbits(index in 0usize..4000, seed in any::<u64>(), squid in any::<bool>()) {
        let kind = if squid { AlgebraKind::Squid } else { AlgebraKind::Canonical };
        let a = pres(kind, vec![2, 2], vec![], 3);
        let f = a.field().clone();
        let o = EnumOptions::default().with_workers(1);
        let d = [1, 2, 1, 1];
        let sols: Vec<Representation> = iterate_solutions(&a, &d, &o).unwrap().collect();
        let m = &sols[index % sols.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g: Vec<Matrix> = d.iter().map(|&n| random_invertible(&mut rng, n, &f)).collect();
        let c = m.conjugate(&a, &g).unwrap();
        prop_assert!(a.satisfies(&c));
        let (em, ec) = (end_basis(&a, m), end_basis(&a, &c));
        prop_assert_eq!(em.rank(), ec.rank());
        prop_assert_eq!(unit_count(&f, &em, 1 << 20).unwrap(), unit_count(&f, &ec, 1 << 20).unwrap());
        prop_assert_eq!(is_abs_indec(&f, &em), is_abs_indec(&f, &ec));
        prop_assert_eq!(is_indec(&f, &em, &o).unwrap(), is_indec(&f, &ec, &o).unwrap());
        let dims = |x: &Representation| {
            let mut v: Vec<Vec<usize>> = decompose(&a, x, &o).unwrap().into_iter().map(|s| s.dim).collect();
            v.sort();
            v
        };
        prop_assert_eq!(dims(m), dims(&c));
        prop_assert_eq!(jordan_multiset(&a, m), jordan_multiset(&a, &c));
    }
}

#[test]
fn abs_indec_implies_indec_and_unit_criterion() {
    let o = EnumOptions::default();
    for kind in [AlgebraKind::Canonical, AlgebraKind::Squid] {
        for q in [2, 3] {
            let a = pres(kind, vec![2, 2], vec![], q);
            let f = a.field().clone();
            for d in sub_dims(&[2, 2, 1, 1]) {
                for m in iterate_solutions(&a, &d, &o).unwrap() {
                    let e = end_basis(&a, &m);
                    let abs = is_abs_indec(&f, &e);
                    assert_eq!(abs, endo::is_abs_indec_by_units(&f, &e, 1 << 20).unwrap(), "{m:?}");
                    if abs {
                        assert!(is_indec(&f, &e, &o).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn jordan_parts_sum_to_dimension() {
    let a = pres(AlgebraKind::Squid, vec![2, 2], vec![], 2);
    let o = EnumOptions::default();
    let d = [2, 2, 1, 1];
    for m in iterate_solutions(&a, &d, &o).unwrap().step_by(5) {
        for (jt, _) in jordan_multiset(&a, &m) {
            let mut total = vec![0; 4];
            for (i, part) in jt.iter().enumerate() {
                for (t, x) in total.iter_mut().zip(part) {
                    *t += (i + 1) * x;
                }
            }
            assert_eq!(total, d);
        }
    }
}

#[test]
fn abs_indec_survives_scalar_extension() {
    let o = EnumOptions::default();
    for (q, big) in [(2u64, 4u64), (3, 9)] {
        for kind in [AlgebraKind::Canonical, AlgebraKind::Squid] {
            let a = pres(kind, vec![2, 2], vec![], q);
            let bigf = Arc::new(Field::with_order(big).unwrap());
            let emb = bigf.embedding_from(a.field()).unwrap();
            let ab = a.extend_scalars(bigf.clone()).unwrap();
            let mut seen = 0;
            for d in [[1, 1, 1, 1], [1, 2, 1, 1], [1, 1, 2, 0]] {
                for m in iterate_solutions(&a, &d, &o).unwrap() {
                    if is_abs_indec(a.field(), &end_basis(&a, &m)) {
                        let mb = m.map_entries(&emb);
                        assert!(ab.satisfies(&mb));
                        assert!(is_abs_indec(&bigf, &end_basis(&ab, &mb)));
                        seen += 1;
                    }
                }
            }
            assert!(seen > 0);
        }
    }
}

#[test]
fn orbit_stabilizer_integrality() {
    let o = EnumOptions::default();
    let cases = [
        (pres(AlgebraKind::Canonical, vec![2, 2], vec![], 2), vec![2, 2, 2, 2]),
        (pres(AlgebraKind::Squid, vec![2, 2], vec![], 3), vec![2, 2, 1, 1]),
        (pres(AlgebraKind::Canonical, vec![2, 2, 2], vec![1], 3), vec![1, 2, 1, 1, 1]),
        (pres(AlgebraKind::Squid, vec![2, 3], vec![], 2), vec![1, 2, 1, 1, 1]),
    ];
    for (a, bound) in &cases {
        for d in sub_dims(bound) {
            count_abs_indec(a, &d, &o).unwrap();
        }
    }
}

#[test]
fn not_absolutely_indecomposable_found_by_scan() {
    // Over F_2 some indecomposable of canonical (2,2) at (2,2,2,2) has a
    // residue field F_4.
    let a = pres(AlgebraKind::Canonical, vec![2, 2], vec![], 2);
    let f = a.field().clone();
    let o = EnumOptions::default();
    let found = iterate_solutions(&a, &[2, 2, 2, 2], &o.clone().with_cap(1 << 16))
        .unwrap()
        .find(|m| {
            let e = end_basis(&a, m);
            !is_abs_indec(&f, &e) && is_indec(&f, &e, &o).unwrap()
        })
        .expect("an indecomposable that is not absolutely indecomposable");
    let e = end_basis(&a, &found);
    let k = e.rank() as u32;
    assert_eq!(unit_count(&f, &e, 1 << 20).unwrap(), 2u64.pow(k) - 2u64.pow(k - 2));
}
