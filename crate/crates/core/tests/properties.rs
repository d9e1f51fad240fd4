//! Randomized invariants. Every suite runs from a fixed seed.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use skein_core::annulus::{act_generator, apply_kappa, ModuleVector};
use skein_core::coeff::{qbinom, qbrace, rat, LaurentPoly, ScalarQ};
use skein_core::finite_rank::{
    apply_uv, macdonald_m1, sh_commutator_check, toda_ops, uv_embedding_check, whittaker_to_schur,
    SymPolyN, WhittakerCoeffs,
};
use skein_core::partitions::{partitions_of, partitions_up_to, strip_additions, Partition};
use skein_core::quantum_cluster::{
    cvec_mutate_signed, factorizations_agree, mutation_involutive, tropical_sign, CSeed, QLattice,
    QTElement, QuantumTorus,
};
use skein_core::torus_skein::{
    ad_apply_closed, conjugate, det, normal_order, normal_order_random, word_degree, BiSeries,
    SeriesVar, SkeinElement, Vec2,
};
use skein_core::wavefunction::{ad_kappa_check, wavefunction_framed};

fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(20261018),
        failure_persistence: None,
        ..Config::default()
    }
}

fn scalar() -> impl Strategy<Value = ScalarQ> {
    (
        prop::collection::vec((-3i32..=3, -2i32..=2, -3i64..=3), 1..4),
        prop::collection::vec(1i32..=4, 0..3),
    )
        .prop_map(|(terms, braces)| {
            let p = LaurentPoly::from_terms(
                terms.into_iter().map(|(s, a, c)| ([s, a, 0, 0], rat(c, 1))),
            );
            let mut x = ScalarQ::from_poly(p);
            for k in braces {
                x = x.div_brace(k).unwrap();
            }
            x
        })
}

fn letter() -> impl Strategy<Value = Vec2> {
    (-2i64..=2, -2i64..=2)
        .prop_filter("nonzero", |v| *v != (0, 0))
        .prop_map(|(a, b)| [a, b])
}

fn primitive() -> impl Strategy<Value = Vec2> {
    prop::sample::select(vec![
        [1, 0],
        [0, 1],
        [1, 1],
        [1, -1],
        [2, 1],
        [1, 2],
        [-1, 1],
        [0, -1],
        [-1, 0],
    ])
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn scalar_ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if !b.is_zero() && b.inv().is_ok() {
            prop_assert_eq!((&a * &b).div(&b).unwrap(), a);
        }
    }

    #[test]
    fn scalar_json_round_trip(a in scalar()) {
        let text = serde_json::to_string(&a).unwrap();
        let back: ScalarQ = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn confluence(word in prop::collection::vec(letter(), 1..=5), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let canonical = normal_order(&word, ScalarQ::one()).unwrap();
        prop_assert!(canonical.is_normal());
        prop_assert_eq!(normal_order_random(&word, &mut rng).unwrap(), canonical);
    }

    #[test]
    fn grading_preserved(u in prop::collection::vec(letter(), 1..=3), v in prop::collection::vec(letter(), 1..=2)) {
        let a = SkeinElement::word(&u, ScalarQ::one()).unwrap();
        let b = SkeinElement::word(&v, ScalarQ::one()).unwrap();
        let deg = word_degree(&[word_degree(&u), word_degree(&v)]);
        let prod = a.mul(&b);
        prop_assert!(prod.terms().keys().all(|w| word_degree(w) == deg));
        prop_assert!(normal_order(&u, ScalarQ::one()).unwrap().terms().keys().all(|w| word_degree(w) == word_degree(&u)));
    }

    #[test]
    fn antisymmetry(a in primitive(), b in letter()) {
        let ab = normal_order(&[a, b], ScalarQ::one()).unwrap();
        let ba = normal_order(&[b, a], ScalarQ::one()).unwrap();
        let d = det(a, b);
        let sum = [a[0] + b[0], a[1] + b[1]];
        let expected = if d == 0 || sum == [0, 0] {
            SkeinElement::zero()
        } else {
            SkeinElement::generator(sum).unwrap().scale(&qbrace(d as i32))
        };
        prop_assert_eq!(ab.sub(&ba), expected);
    }

    #[test]
    fn torus_associativity_and_exchange(
        f in -2i64..=2, g in -2i64..=2, h in -2i64..=2,
        u in prop::collection::vec(-2i64..=2, 3), v in prop::collection::vec(-2i64..=2, 3), w in prop::collection::vec(-2i64..=2, 3),
    ) {
        let lat = QLattice::new(vec![vec![0, f, g], vec![-f, 0, h], vec![-g, -h, 0]], None).unwrap();
        let t = QuantumTorus::new(lat.clone());
        let (xu, xv, xw) = (QTElement::x(u.clone()), QTElement::x(v.clone()), QTElement::x(w));
        prop_assert_eq!(t.mul(&t.mul(&xu, &xv), &xw), t.mul(&xu, &t.mul(&xv, &xw)));
        let k = lat.pairing(&u, &v);
        prop_assert_eq!(t.mul(&xu, &xv), t.mul(&xv, &xu).scale(&ScalarQ::q_pow(k as i32)));
    }

    #[test]
    fn mutation_exact(f in -2i64..=2, g in -2i64..=2, h in -2i64..=2, k in 0usize..3) {
        let lat = QLattice::new(vec![vec![0, f, g], vec![-f, 0, h], vec![-g, -h, 0]], None).unwrap();
        prop_assert!(factorizations_agree(&lat, k));
        prop_assert!(mutation_involutive(&lat, k));
    }

    #[test]
    fn sign_coherence(
        entries in prop::collection::vec(-2i64..=2, 15),
        n in 2usize..=6,
        seq in prop::collection::vec(0usize..6, 1..=12),
    ) {
        let mut b = vec![vec![0i64; n]; n];
        let mut it = entries.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().unwrap();
                b[i][j] = v;
                b[j][i] = -v;
            }
        }
        let mut seed = CSeed::new(b, Vec::new()).unwrap();
        for k in seq {
            match cvec_mutate_signed(&seed, k % n) {
                Ok((next, _)) => seed = next,
                Err(skein_core::quantum_cluster::ClusterError::Overflow) => break,
                Err(e) => prop_assert!(false, "{}", e),
            }
            prop_assert!((0..n).all(|j| tropical_sign(&seed.cvector(j)).is_some()));
        }
    }

    #[test]
    fn macdonald_preserves_symmetry(coeffs in prop::collection::vec(-2i64..=2, 4)) {
        let basis = [vec![0, 0], vec![1, 0], vec![2, 1], vec![3, 0]];
        let mut f = SymPolyN::zero(2);
        for (mu, c) in basis.iter().zip(&coeffs) {
            f = f.add(&SymPolyN::monomial_symmetric(2, mu).scale(&ScalarQ::from_int(*c)));
        }
        let m = macdonald_m1(&f).unwrap();
        prop_assert!(SymPolyN::from_poly(2, &m.to_poly()).is_ok());
        let back = SymPolyN::from_schur(2, &f.to_schur().unwrap()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn qbinom_identities() {
    for d in -5..=5i64 {
        for k in 0..=6u32 {
            let mut rhs = qbinom(d, k).mul_s(k as i32);
            if k > 0 {
                rhs = &rhs + &qbinom(d, k - 1).mul_s(k as i32 - d as i32 - 1);
            }
            assert_eq!(qbinom(d + 1, k), rhs, "Pascal d={d} k={k}");
        }
    }
    for d in 1..=4i64 {
        for n in 1..=8u32 {
            let mut acc = ScalarQ::zero();
            for k in 0..=n {
                acc = &acc + &(&qbinom(d, k) * &qbinom(-d, n - k));
            }
            assert!(acc.is_zero(), "reciprocal d={d} n={n}");
        }
    }
    for k in 0..=6u32 {
        for l in 0..=6u32 {
            let mut lhs = qbinom(-(l as i64 + 1), k);
            if k % 2 == 1 {
                lhs = -lhs;
            }
            assert_eq!(lhs, qbinom((k + l) as i64, l));
        }
    }
}

#[test]
fn content_sum_is_half_kappa() {
    for lambda in partitions_up_to(10) {
        assert_eq!(lambda.contents().iter().sum::<i64>() * 2, lambda.kappa());
    }
}

#[test]
fn strip_contents_are_runs() {
    for lambda in partitions_up_to(6) {
        for n in 1..=4 {
            for st in strip_additions(&lambda, n) {
                let mut c = st.contents.clone();
                c.sort_unstable();
                assert_eq!(c.len(), n as usize);
                assert!(c.windows(2).all(|w| w[1] == w[0] + 1));
            }
        }
    }
}

#[test]
fn module_commutators() {
    // [P_a, P_b] = {det(a|b)} P_{a+b}
    let pairs: [([i64; 2], [i64; 2]); 3] = [([1, 0], [0, 1]), ([0, 1], [1, 1]), ([1, 0], [1, 1])];
    for lambda in partitions_up_to(6) {
        let w = ModuleVector::basis(lambda);
        for (a, b) in pairs {
            let ab = act_generator(a[0], a[1], &act_generator(b[0], b[1], &w).unwrap()).unwrap();
            let ba = act_generator(b[0], b[1], &act_generator(a[0], a[1], &w).unwrap()).unwrap();
            let d = a[0] * b[1] - a[1] * b[0];
            let c = act_generator(a[0] + b[0], a[1] + b[1], &w)
                .unwrap()
                .scale(&qbrace(d as i32));
            assert_eq!(ab.sub(&ba), c, "{a:?} {b:?}");
        }
    }
}

#[test]
fn ad_kappa_all() {
    for p in -2..=2 {
        for n in 1..=3 {
            assert!(ad_kappa_check(p, n, 5).unwrap(), "p={p} n={n}");
        }
    }
}

#[test]
fn framing_composition() {
    let base = wavefunction_framed(0, 5).unwrap();
    for p in -1..=2 {
        assert_eq!(
            wavefunction_framed(p, 5).unwrap(),
            apply_kappa(p, &base),
            "p={p}"
        );
    }
}

#[test]
fn ad_is_multiplicative() {
    let order = 4;
    let x = [1, 0];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    use rand::Rng;
    for _ in 0..6 {
        let mut pick = || loop {
            let v: Vec2 = [rng.gen_range(-1..=1), rng.gen_range(-1..=1)];
            if v != [0, 0] {
                break v;
            }
        };
        let e1 = SkeinElement::generator(pick()).unwrap();
        let e2 = SkeinElement::generator(pick()).unwrap();
        let whole = conjugate(
            &[(x, SeriesVar::V)],
            &BiSeries::constant(e1.mul(&e2), order),
        )
        .unwrap();
        let parts = conjugate(&[(x, SeriesVar::V)], &BiSeries::constant(e1.clone(), order))
            .unwrap()
            .mul(&conjugate(&[(x, SeriesVar::V)], &BiSeries::constant(e2.clone(), order)).unwrap());
        assert_eq!(whole.first_difference(&parts), None);
        let closed = ad_apply_closed(x, SeriesVar::V, &e1.mul(&e2), order).unwrap();
        assert_eq!(whole.first_difference(&closed), None);
    }
}

#[test]
fn adjoint_pentagon_on_generators() {
    let order = 4;
    for (x, y) in [([1, 0], [0, 1]), ([1, 1], [0, 1])] {
        let xy = [x[0] + y[0], x[1] + y[1]];
        for g in [x, y, [-x[0], -x[1]], [-y[0], -y[1]]] {
            let e = BiSeries::constant(SkeinElement::generator(g).unwrap(), order);
            let left = conjugate(&[(x, SeriesVar::V), (y, SeriesVar::W)], &e).unwrap();
            let right = conjugate(
                &[(y, SeriesVar::W), (xy, SeriesVar::VW), (x, SeriesVar::V)],
                &e,
            )
            .unwrap();
            assert_eq!(left.first_difference(&right), None, "{x:?} {y:?} on {g:?}");
        }
    }
}

#[test]
fn eigenvalue_and_commutator_finite_rank() {
    assert!(skein_core::finite_rank::macdonald_eigen_check(4, 5).unwrap());
    for n in 1..=3 {
        assert!(sh_commutator_check(n, 4).unwrap(), "N={n}");
    }
}

#[test]
fn intertwined_ideal() {
    assert!(uv_embedding_check(6).unwrap().intertwined_ideal);
}

#[test]
fn toda_matches_pieri() {
    // multiplying sum phi R by e1 equals sum (H1 phi) R
    let (h1, h2) = toda_ops();
    for n in 0..=4i64 {
        for m in 0..=n {
            let phi = WhittakerCoeffs::from([([n, m], ScalarQ::one())]);
            let lhs = skein_core::finite_rank::module_to_sym(2, &whittaker_to_schur(&phi).unwrap())
                .unwrap()
                .mul(&SymPolyN::elementary(2, 1))
                .unwrap();
            let img: WhittakerCoeffs = apply_uv(&h1, &phi)
                .into_iter()
                .filter(|(k, _)| k[0] >= k[1] && k[1] >= 0)
                .collect();
            let rhs = skein_core::finite_rank::module_to_sym(2, &whittaker_to_schur(&img).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs, "lambda=({n},{m})");
            let img2 = apply_uv(&h2, &phi);
            let rhs2 =
                skein_core::finite_rank::module_to_sym(2, &whittaker_to_schur(&img2).unwrap())
                    .unwrap();
            let lhs2 =
                skein_core::finite_rank::module_to_sym(2, &whittaker_to_schur(&phi).unwrap())
                    .unwrap()
                    .mul(&SymPolyN::elementary(2, 2))
                    .unwrap();
            assert_eq!(lhs2, rhs2);
        }
    }
}

#[test]
fn partitions_counts() {
    let counts: Vec<usize> = (0..=8).map(|n| partitions_of(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    assert_eq!(
        Partition::from_slice(&[3, 1]).conjugate(),
        Partition::from_slice(&[2, 1, 1])
    );
}
