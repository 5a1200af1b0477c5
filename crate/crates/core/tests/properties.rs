use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use supnorm_core::amplifier::{amplifier_coefficients, amplifier_value, corollary_big_check, EigenvalueTable};
use supnorm_core::arith::rat_frac;
use supnorm_core::coset::{determinantal_divisors, minor_gcds, IntMatrix};
use supnorm_core::diophantine::{
    constr_decompose, enumerate_s_delta, lembp_count, matrix_deviation, revalidate_witness, within_deviation,
    BinaryQuadratic, QuadraticForm,
};
use supnorm_core::linalg::Mat;
use supnorm_core::{HeckeAlgebra, HeckeElement, Partition};

fn int_matrix(n: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, n * n).prop_map(move |v| IntMatrix::new(n, v).unwrap())
}

fn partition(n: usize, max_part: u32) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..=max_part, n).prop_map(Partition::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_matches_minor_gcds(m in (1usize..=4).prop_flat_map(|n| int_matrix(n, 50))) {
        match determinantal_divisors(&m) {
            Ok(dd) => prop_assert_eq!(dd, minor_gcds(&m)),
            Err(_) => prop_assert_eq!(m.det(), 0),
        }
    }

    #[test]
    fn hermite_form_is_a_left_coset_invariant(
        m in int_matrix(3, 9),
        ops in prop::collection::vec((0usize..3, 0usize..3, -3i64..=3), 1..8),
    ) {
        prop_assume!(m.det() != 0);
        let mut u = IntMatrix::identity(3);
        for (i, j, c) in ops {
            if i != j {
                let mut e = IntMatrix::identity(3);
                e.set(i, j, c);
                u = e.mul(&u).unwrap();
            }
        }
        prop_assert_eq!(u.det(), 1);
        let h = m.hermite_form().unwrap();
        prop_assert_eq!(u.mul(&m).unwrap().hermite_form().unwrap(), h.clone());
        prop_assert_eq!(h.det(), m.det().abs());
    }

    #[test]
    fn hecke_multiplication_commutes(
        a in partition(3, 2),
        b in partition(3, 2),
        c in partition(3, 1),
        x in -5i64..=5,
        prime in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let alg = HeckeAlgebra::new(3, prime).unwrap();
        let e = alg.generator(&a).unwrap().add(&alg.generator(&c).unwrap().scale(&rat_frac(x, 7))).unwrap();
        let f = alg.generator(&b).unwrap();
        let ef = alg.multiply(&e, &f).unwrap();
        prop_assert_eq!(ef.clone(), alg.multiply(&f, &e).unwrap());
        prop_assert_eq!(alg.multiply(&HeckeElement::identity(3, prime), &ef).unwrap(), ef);
    }

    #[test]
    fn generator_products_are_counts(a in partition(4, 2), b in partition(4, 2)) {
        let alg = HeckeAlgebra::new(4, 2).unwrap();
        prop_assert!(alg.multiply_generators(&a, &b).is_ok());
    }

    #[test]
    fn decomposition_relation_holds(
        xs in prop::collection::vec(prop::collection::vec(-6i128..=6, 4), 1..=3),
        y in prop::collection::vec(-20i64..=20, 4),
        noise in prop::collection::vec(-1.0f64..1.0, 3),
        e in 0.0f64..2.0,
    ) {
        let k = xs.len();
        let q: Vec<f64> = xs
            .iter()
            .zip(&noise)
            .map(|(x, z)| x.iter().zip(&y).map(|(a, &b)| (*a as f64) * b as f64).sum::<f64>() + z * e)
            .collect();
        let Ok(dec) = constr_decompose(&xs, &q, e) else {
            return Ok(());
        };
        prop_assert_eq!(dec.constrained.len(), k);
        let free: Vec<f64> = dec.free.iter().map(|&i| y[i] as f64).collect();
        for (s, c) in dec.center(&free).iter().enumerate() {
            prop_assert!((y[dec.constrained[s]] as f64 - c).abs() <= dec.f + 1e-9 * (1.0 + c.abs()));
        }
    }

    #[test]
    fn deviation_is_invariant_under_orthogonal_left_factors(
        g in int_matrix(3, 5),
        perm in Just(vec![0usize, 1, 2]).prop_shuffle(),
        signs in prop::collection::vec(prop::bool::ANY, 3),
    ) {
        prop_assume!(g.det() > 0);
        let mut k = IntMatrix::new(3, vec![0; 9]).unwrap();
        for (i, &j) in perm.iter().enumerate() {
            k.set(i, j, if signs[i] { -1 } else { 1 });
        }
        prop_assume!(k.det() == 1);
        let id = QuadraticForm::identity(3);
        let before = matrix_deviation(&g, &id).unwrap();
        let after = matrix_deviation(&k.mul(&g).unwrap(), &id).unwrap();
        prop_assert!((before - after).abs() <= 1e-12 * (1.0 + before));
    }

    #[test]
    fn lembp_is_symmetric_under_swap(
        a in 1i32..5, c in 1i32..5, b in -1i32..=1, d in -4i32..=4, e in -4i32..=4, f in -30i32..=0,
    ) {
        let p = BinaryQuadratic { a: a as f64, b: b as f64, c: c as f64, d: d as f64, e: e as f64, f: f as f64 };
        prop_assume!(p.discriminant() < 0.0);
        let r = lembp_count(&p, 0.5, 1.0, None).unwrap();
        let s = lembp_count(&p.swapped(), 0.5, 1.0, None).unwrap();
        prop_assert_eq!(r.count, s.count);
        let mut swapped: Vec<(i64, i64)> = s.points.iter().map(|&(x, y)| (y, x)).collect();
        swapped.sort();
        prop_assert_eq!(swapped, r.points);
    }
}

fn brute_s_delta(form: &QuadraticForm, m: u64, l: u64, delta: f64, bound: i64) -> Vec<IntMatrix> {
    let n = form.dim();
    let mut out = Vec::new();
    let mut entries = vec![-bound; n * n];
    loop {
        let g = IntMatrix::new(n, entries.clone()).unwrap();
        if g.det() == m as i128 && revalidate_witness(&g, form, m, l, delta).unwrap().passes() {
            out.push(g);
        }
        let mut i = 0;
        while i < entries.len() {
            entries[i] += 1;
            if entries[i] <= bound {
                break;
            }
            entries[i] = -bound;
            i += 1;
        }
        if i == entries.len() {
            break;
        }
    }
    out.sort();
    out
}

#[test]
fn pruned_search_matches_brute_force() {
    let cases = [
        (QuadraticForm::identity(2), 5u64, 5u64, 0.5),
        (QuadraticForm::new(vec![vec![2, 1], vec![1, 2]], 2).unwrap(), 3, 3, 0.6),
        (QuadraticForm::identity(3), 8, 1, 0.3),
        (QuadraticForm::identity(3), 4, 2, 0.6),
    ];
    for (form, m, l, delta) in cases {
        let search = enumerate_s_delta(&form, m, l, delta, 1 << 26).unwrap();
        assert!(search.complete);
        let bound = search.box_bound.floor() as i64;
        assert!(search.count > 0, "m = {m}, l = {l}");
        assert_eq!(search.witnesses, brute_s_delta(&form, m, l, delta, bound), "m = {m}, l = {l}");
    }
}

#[test]
fn big_check_holds_on_the_tempered_torus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 2..=4 {
        let alg = HeckeAlgebra::new(n, 101).unwrap();
        let sol = amplifier_coefficients(&alg).unwrap();
        for _ in 0..1000 {
            let mut theta: Vec<f64> = (0..n).map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)).collect();
            let total: f64 = theta.iter().sum();
            theta[n - 1] -= total;
            let alpha: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
            let table = EigenvalueTable::from_satake(&alg, alpha).unwrap();
            let check = corollary_big_check(&table, &sol).unwrap();
            assert!(check.bound_holds, "{check:?}");
            assert!((check.identity_value - Complex64::new(1.0, 0.0)).norm() < 1e-6);
            assert!(check.contradiction >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn amplifier_value_ignores_positive_rescaling_of_the_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let primes = [11u64, 13, 17, 19];
    let random_table = |p: u64, rng: &mut ChaCha8Rng| {
        EigenvalueTable::from_values(p, (0..3).map(|_| Complex64::new(rng.gen_range(-9.0..9.0), rng.gen_range(-9.0..9.0))).collect())
    };
    let tables: Vec<_> = primes.iter().map(|&p| random_table(p, &mut rng)).collect();
    let reference: Vec<_> = primes.iter().map(|&p| random_table(p, &mut rng)).collect();
    let scaled: Vec<_> = reference
        .iter()
        .map(|t| EigenvalueTable::from_values(t.p, t.lam.iter().map(|z| z * rng.gen_range(0.1..10.0)).collect()))
        .collect();
    let a = amplifier_value(10, &tables, &reference).unwrap();
    let b = amplifier_value(10, &tables, &scaled).unwrap();
    assert!((a - b).abs() <= 1e-12 * a.max(1.0));

    // opposite signs at two primes cancel in the first coordinate
    let l1 = EigenvalueTable::from_values(11, vec![Complex64::new(5.0, 0.0); 3]);
    let l2 = EigenvalueTable::from_values(13, vec![Complex64::new(-5.0, 0.0); 3]);
    let reference = [l1.clone(), EigenvalueTable::from_values(13, vec![Complex64::new(5.0, 0.0); 3])];
    let both = amplifier_value(10, &[l1.clone(), l2.clone()], &reference).unwrap();
    let alone = |t: &EigenvalueTable| amplifier_value(10, std::slice::from_ref(t), std::slice::from_ref(t)).unwrap();
    let single = alone(&l1) + alone(&l2);
    assert!(both < 4.0 * single);
}

#[test]
fn cartan_and_matrix_deviation_vanish_together() {
    let g = Mat::identity(2, 2);
    let form = QuadraticForm::identity(2);
    let report = enumerate_s_delta(&form, 5, 5, 0.5, 1 << 20).unwrap();
    assert!(report.count > 0);
    let mut ratios = Vec::new();
    for w in &report.witnesses {
        let dev = matrix_deviation(w, &form).unwrap();
        let cartan = supnorm_core::diophantine::cartan_deviation(w, &g).unwrap();
        assert_eq!(dev == 0.0, cartan < 1e-12, "{w}");
        if dev > 0.0 {
            ratios.push(cartan / dev);
        }
    }
    // near-isometries with Q = I: Cartan distance and entrywise deviation agree up to a factor 4
    assert!(ratios.iter().all(|&r| (0.25..=4.0).contains(&r)), "{ratios:?}");
    assert!(within_deviation(&IntMatrix::from_rows(&[vec![2, 1], vec![-1, 2]]).unwrap(), &form, 1e-6).unwrap());
}
