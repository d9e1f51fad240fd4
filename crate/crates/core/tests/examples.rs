//! Worked examples for the public operations.

use skein_core::annulus::{
    act_generator, apply_baxter_module, apply_kappa, unknot_value, ModuleVector,
};
use skein_core::coeff::{qbinom, qbrace, qint, LaurentPoly, ScalarQ, Var};
use skein_core::finite_rank::{
    abelian_baxter, apply_uv, charvar_relation_residuals, face_qde_residual, macdonald_m1, p_ops_n,
    toda_ops, uv_pentagon_check, uv_pentagon_without_q11, whittaker_to_schur, AbelianBaxter,
    CharvarCoeffs, SymPolyN, UV,
};
use skein_core::partitions::{
    hooks_contents_kappa, power_times_schur, principal_specialization, strip_additions, Partition,
};
use skein_core::quantum_cluster::{
    auto_series, cvec_mutate, cvec_sequence, dmod_check_with_pairing, face_relation,
    qt_pentagon_check, qt_pentagon_check_with_pairing, CSeed, QLattice, QTElement, QuantumTorus,
};
use skein_core::torus_skein::{
    ad_closed, baxter_coefficients, normal_order, pentagon_check_form, reduce_to_linking,
    slope_less, PentagonForm, SkeinElement,
};
use skein_core::wavefunction::{
    canoe_face_residual, canoe_face_residual_flipped, inverse_identity_check, topological_vertex,
    unknot_residual, unknot_residual_al_zero, wavefunction_framed,
};

fn p(parts: &[u32]) -> Partition {
    Partition::from_slice(parts)
}

fn s(k: i32) -> ScalarQ {
    ScalarQ::s_pow(k)
}

fn a(k: i32) -> ScalarQ {
    ScalarQ::var_pow(Var::A, k)
}

fn w(parts: &[u32]) -> ModuleVector {
    ModuleVector::basis(p(parts))
}

#[test]
fn brackets() {
    assert!(qbrace(0).is_zero());
    assert_eq!(qbrace(1), &s(1) - &s(-1));
    assert_eq!(qbrace(-2), -(&s(2) - &s(-2)));
    assert!(qint(0).unwrap().is_zero());
    assert_eq!(qint(2).unwrap(), &s(1) + &s(-1));
    assert_eq!(qint(3).unwrap(), &(&s(2) + &ScalarQ::one()) + &s(-2));
}

#[test]
fn binomials() {
    assert_eq!(qbinom(2, 1), &s(1) + &s(-1));
    for k in 0..6 {
        let expected = if k % 2 == 0 {
            ScalarQ::one()
        } else {
            -ScalarQ::one()
        };
        assert_eq!(qbinom(-1, k), expected);
    }
    assert_eq!(qbinom(-2, 1), -(&s(1) + &s(-1)));
}

#[test]
fn substitution() {
    let x = &a(1) - &a(-1);
    assert_eq!(
        x.substitute(&[(Var::A, LaurentPoly::s_pow(2))]).unwrap(),
        &s(2) - &s(-2)
    );
    let dim = unknot_value();
    assert_eq!(
        dim.substitute(&[(Var::A, LaurentPoly::s_pow(2))]).unwrap(),
        qint(2).unwrap()
    );
    assert_eq!(
        dim.substitute(&[(Var::A, LaurentPoly::s_pow(1))]).unwrap(),
        ScalarQ::one()
    );
    let inv = ScalarQ::one().div_brace(1).unwrap();
    assert!(inv.substitute(&[(Var::S, LaurentPoly::one())]).is_err());
}

#[test]
fn strips() {
    let one = strip_additions(&Partition::empty(), 1);
    assert_eq!(one.len(), 1);
    assert_eq!(
        (
            one[0].result.clone(),
            one[0].height,
            one[0].contents.clone()
        ),
        (p(&[1]), 2, vec![0])
    );

    let two = strip_additions(&Partition::empty(), 2);
    let mut got: Vec<_> = two
        .iter()
        .map(|b| (b.result.clone(), b.height, b.contents.clone()))
        .collect();
    got.sort();
    let mut expected = vec![(p(&[2]), 2, vec![0, 1]), (p(&[1, 1]), 3, vec![-1, 0])];
    expected.sort();
    assert_eq!(got, expected);

    let mut from_box: Vec<_> = strip_additions(&p(&[1]), 1)
        .iter()
        .map(|b| (b.result.clone(), b.height))
        .collect();
    from_box.sort();
    let mut expected = vec![(p(&[2]), 2), (p(&[1, 1]), 2)];
    expected.sort();
    assert_eq!(from_box, expected);
}

#[test]
fn hook_data() {
    assert_eq!(
        hooks_contents_kappa(&Partition::empty()),
        (vec![], vec![], 0)
    );
    let (mut h, mut c, k) = hooks_contents_kappa(&p(&[2]));
    h.sort();
    c.sort();
    assert_eq!((h, c, k), (vec![1, 2], vec![0, 1], 2));
    let (mut h, mut c, k) = hooks_contents_kappa(&p(&[1, 1]));
    h.sort();
    c.sort();
    assert_eq!((h, c, k), (vec![1, 2], vec![-1, 0], -2));
}

#[test]
fn power_sums_on_schur() {
    assert_eq!(power_times_schur(1, &Partition::empty()), w(&[1]));
    assert_eq!(
        power_times_schur(2, &Partition::empty()),
        w(&[2]).sub(&w(&[1, 1]))
    );
    assert_eq!(power_times_schur(1, &p(&[1])), w(&[2]).add(&w(&[1, 1])));
}

#[test]
fn specializations() {
    assert_eq!(
        principal_specialization(&Partition::empty()),
        ScalarQ::one()
    );
    assert_eq!(
        principal_specialization(&p(&[1])),
        ScalarQ::one().div_brace(1).unwrap()
    );
    assert_eq!(
        principal_specialization(&p(&[2])),
        s(1).div_brace(1).unwrap().div_brace(2).unwrap()
    );
}

#[test]
fn generators_on_vacuum() {
    let vac = ModuleVector::vacuum();
    assert_eq!(act_generator(0, 1, &vac).unwrap(), w(&[1]));
    assert_eq!(
        act_generator(1, 0, &vac).unwrap(),
        vac.scale(&unknot_value())
    );
    assert_eq!(act_generator(1, 1, &vac).unwrap(), w(&[1]).scale(&a(1)));
    let expected = w(&[2])
        .scale(&s(1))
        .sub(&w(&[1, 1]).scale(&s(-1)))
        .scale(&a(1));
    assert_eq!(act_generator(1, 2, &vac).unwrap(), expected);
}

#[test]
fn framing_twists() {
    assert_eq!(
        apply_kappa(1, &ModuleVector::vacuum()),
        ModuleVector::vacuum()
    );
    assert_eq!(apply_kappa(1, &w(&[2])), w(&[2]).scale(&ScalarQ::q_pow(1)));
    assert_eq!(
        apply_kappa(-1, &w(&[1, 1])),
        w(&[1, 1]).scale(&ScalarQ::q_pow(1))
    );
}

#[test]
fn baxter_on_vacuum() {
    let vac = ModuleVector::vacuum();
    let expected = vac.add(&w(&[1]).scale(&ScalarQ::one().div_brace(1).unwrap()));
    assert_eq!(
        apply_baxter_module((0, 1), &ScalarQ::one(), false, 1, &vac).unwrap(),
        expected
    );
    assert_eq!(
        apply_baxter_module((0, 1), &ScalarQ::zero(), false, 3, &w(&[2])).unwrap(),
        w(&[2])
    );
    assert_eq!(
        apply_baxter_module((1, 1), &a(-1), false, 1, &vac).unwrap(),
        expected
    );
}

#[test]
fn slopes() {
    assert!(slope_less([1, 0], [0, 1]).unwrap());
    assert!(slope_less([1, 1], [2, 2]).unwrap());
    assert!(!slope_less([0, -1], [1, 0]).unwrap());
}

#[test]
fn normal_ordering() {
    let gen = |v| SkeinElement::generator(v).unwrap();
    let expected = SkeinElement::word(&[[1, 0], [0, 1]], ScalarQ::one())
        .unwrap()
        .sub(&gen([1, 1]).scale(&qbrace(1)));
    assert_eq!(
        normal_order(&[[0, 1], [1, 0]], ScalarQ::one()).unwrap(),
        expected
    );
    let sorted = SkeinElement::word(&[[1, 0], [0, 1]], ScalarQ::one()).unwrap();
    assert_eq!(
        normal_order(&[[1, 0], [0, 1]], ScalarQ::one()).unwrap(),
        sorted
    );
    let expected = SkeinElement::word(&[[1, 0], [1, 1]], ScalarQ::one())
        .unwrap()
        .sub(&gen([2, 1]).scale(&qbrace(1)));
    assert_eq!(
        normal_order(&[[1, 1], [1, 0]], ScalarQ::one()).unwrap(),
        expected
    );
    assert_eq!(
        gen([0, 1]).mul(&gen([0, 2])),
        SkeinElement::word(&[[0, 1], [0, 2]], ScalarQ::one()).unwrap()
    );
    assert_eq!(SkeinElement::one().mul(&gen([2, 1])), gen([2, 1]));
}

#[test]
fn baxter_terms() {
    let c = baxter_coefficients([1, 0], false, 2).unwrap();
    assert_eq!(c[0], SkeinElement::one());
    let inv1 = ScalarQ::one().div_brace(1).unwrap();
    assert_eq!(c[1], SkeinElement::generator([1, 0]).unwrap().scale(&inv1));
    let half = ScalarQ::from_rat(skein_core::coeff::rat(1, 2));
    let sq = SkeinElement::word(&[[1, 0], [1, 0]], ScalarQ::one())
        .unwrap()
        .scale(&(&half * &(&inv1 * &inv1)));
    let p2 = SkeinElement::generator([2, 0])
        .unwrap()
        .scale(&(&half * &ScalarQ::one().div_brace(2).unwrap()));
    assert_eq!(c[2], sq.sub(&p2));
}

#[test]
fn ad_coefficients() {
    let c = ad_closed([1, 0], [0, 1], 4).unwrap();
    let coeffs: Vec<ScalarQ> = (0..=4)
        .map(|n| {
            c.iter()
                .find(|(k, _)| *k == n)
                .map(|(_, v)| v.clone())
                .unwrap_or_else(ScalarQ::zero)
        })
        .collect();
    assert_eq!(coeffs[0], ScalarQ::one());
    assert_eq!(coeffs[1], ScalarQ::one());
    assert!(coeffs[2..].iter().all(ScalarQ::is_zero));

    let c = ad_closed([0, 1], [1, 0], 4).unwrap();
    for (n, v) in c {
        assert_eq!(v, qbinom(-1, n));
    }
    let c = ad_closed([1, 0], [2, 0], 4).unwrap();
    for (n, v) in c {
        assert_eq!(v.is_one(), n == 0);
        assert!(n == 0 || v.is_zero());
    }
}

#[test]
fn pentagons() {
    assert!(
        pentagon_check_form([1, 0], [0, 1], 4, PentagonForm::Standard)
            .unwrap()
            .pass
    );
    assert!(
        pentagon_check_form([1, 1], [0, 1], 3, PentagonForm::Standard)
            .unwrap()
            .pass
    );
    let r = pentagon_check_form([1, 0], [0, 1], 2, PentagonForm::SwappedRhs).unwrap();
    assert!(!r.pass);
    assert_eq!(r.first_fail, Some([1, 1]));
}

#[test]
fn linking_reduction() {
    let t = QuantumTorus::new(QLattice::new(vec![vec![0, 1], vec![-1, 0]], None).unwrap());
    let gen = |v| SkeinElement::generator(v).unwrap();
    assert_eq!(
        reduce_to_linking(&gen([1, 0])).unwrap(),
        QTElement::x(vec![1, 0])
    );
    let word = SkeinElement::word(&[[1, 0], [0, 1]], ScalarQ::one()).unwrap();
    assert_eq!(
        reduce_to_linking(&word).unwrap(),
        QTElement::monomial(vec![1, 1], s(1))
    );

    let order = 5;
    let series = baxter_coefficients([0, 1], false, order).unwrap();
    let mut reduced = QTElement::zero();
    for c in &series {
        reduced = reduced.add(&reduce_to_linking(c).unwrap());
    }
    assert_eq!(
        reduced.truncate(&[1, 1], order as i64),
        t.dilog(&[0, 1], order as i64).unwrap()
    );
}

#[test]
fn dilogarithm_series() {
    let t = QuantumTorus::new(QLattice::new(vec![vec![0, 1], vec![-1, 0]], None).unwrap());
    assert_eq!(t.dilog(&[1, 0], 0).unwrap(), QTElement::one(2));
    let phi = t.dilog(&[1, 0], 3).unwrap();
    let expected = s(1).div(&(&ScalarQ::q_pow(1) - &ScalarQ::one())).unwrap();
    assert_eq!(phi.coeff(&[1, 0]), expected);
}

#[test]
fn face_relations() {
    let mut tri = QTElement::scalar(3, s(-1));
    tri.add_term(vec![1, 0, 0], ScalarQ::one());
    tri.add_term(vec![1, 1, 0], ScalarQ::one());
    assert_eq!(face_relation(3, &[0, 1, 2]).unwrap(), tri);
    let mut bigon = QTElement::scalar(2, s(-1));
    bigon.add_term(vec![1, 0], ScalarQ::one());
    assert_eq!(face_relation(2, &[0, 1]).unwrap(), bigon);
}

#[test]
fn flip_compatibility() {
    let r = dmod_check_with_pairing(6, 1);
    assert!(r.pass && r.exact_factorization);
    assert!(!dmod_check_with_pairing(6, 2).pass);
    assert!(dmod_check_with_pairing(0, 1).pass);
}

#[test]
fn dilogarithm_pentagon() {
    assert!(qt_pentagon_check(6).unwrap());
    assert!(qt_pentagon_check(1).unwrap());
    assert!(!qt_pentagon_check_with_pairing(6, 2).unwrap());
}

#[test]
fn cvectors() {
    let seed = CSeed::new(vec![vec![0, 1], vec![-1, 0]], Vec::new()).unwrap();
    let once = cvec_mutate(&seed, 0).unwrap();
    assert_eq!(once.cvector(0), vec![-1, 0]);
    assert_eq!(cvec_mutate(&once, 0).unwrap(), seed);

    let run = cvec_sequence(&seed, &[1, 2, 1, 2, 1]).unwrap();
    let mut start: Vec<_> = (0..2).map(|j| seed.cvector(j)).collect();
    start.sort();
    assert_eq!(run.cvectors, start);

    let empty = cvec_sequence(&seed, &[]).unwrap();
    assert_eq!(empty.seed, seed);

    let t = QuantumTorus::new(seed.lattice());
    assert_eq!(
        auto_series(&seed, &[2], 4).unwrap().elem,
        t.dilog(&[0, 1], 4).unwrap()
    );
}

#[test]
fn vertices() {
    assert_eq!(topological_vertex(&Partition::empty(), 3), ScalarQ::one());
    assert_eq!(
        topological_vertex(&p(&[1]), 0),
        ScalarQ::one().div_brace(1).unwrap()
    );
    assert_eq!(
        topological_vertex(&p(&[2]), -1),
        s(-1).div_brace(1).unwrap().div_brace(2).unwrap()
    );

    let w0 = wavefunction_framed(0, 4).unwrap();
    for (lambda, c) in w0.iter() {
        assert_eq!(*c, topological_vertex(lambda, -1));
    }
    for fr in -2..=2 {
        assert_eq!(
            wavefunction_framed(fr, 3)
                .unwrap()
                .coeff(&Partition::empty()),
            ScalarQ::one()
        );
    }
    assert_eq!(
        wavefunction_framed(1, 3).unwrap().coeff(&p(&[1])),
        ScalarQ::one().div_brace(1).unwrap()
    );
}

#[test]
fn canoe() {
    assert!(canoe_face_residual(0).unwrap().is_zero());
    assert!(canoe_face_residual(1).unwrap().is_zero());
    assert!(!canoe_face_residual_flipped(1).unwrap().is_zero());
}

#[test]
fn inverse_identity() {
    assert!(inverse_identity_check(0, 4).unwrap());
    assert!(inverse_identity_check(1, 4).unwrap());
    assert!(inverse_identity_check(0, 0).unwrap());
}

#[test]
fn unknot() {
    assert!(unknot_residual(0).unwrap().is_zero());
    assert!(unknot_residual(3).unwrap().is_zero());
    assert!(!unknot_residual_al_zero(1).unwrap().is_zero());
}

#[test]
fn kappa_conjugation() {
    use skein_core::wavefunction::ad_kappa_check;
    assert!(ad_kappa_check(1, 1, 0).unwrap());
    assert!(ad_kappa_check(1, 2, 4).unwrap());
    assert!(ad_kappa_check(-2, 3, 4).unwrap());
}

#[test]
fn macdonald() {
    let one = SymPolyN::one(2);
    assert_eq!(
        macdonald_m1(&one).unwrap(),
        one.scale(&(&ScalarQ::q_pow(1) + &ScalarQ::one()))
    );
    let s1 = SymPolyN::schur(2, &[1]).unwrap();
    assert_eq!(
        macdonald_m1(&s1).unwrap(),
        s1.scale(&(&ScalarQ::q_pow(2) + &ScalarQ::one()))
    );
    for m in 0..4 {
        let x = SymPolyN::monomial_symmetric(1, &[m]);
        assert_eq!(
            macdonald_m1(&x).unwrap(),
            x.scale(&ScalarQ::q_pow(m as i32))
        );
    }
}

#[test]
fn finite_rank_generators() {
    let one = SymPolyN::one(2);
    assert_eq!(
        p_ops_n((0, 1), &one).unwrap(),
        SymPolyN::monomial_symmetric(2, &[1, 0])
    );
    assert_eq!(p_ops_n((1, 0), &one).unwrap(), one.scale(&(&s(1) + &s(-1))));
    assert_eq!(
        p_ops_n((1, 1), &one).unwrap(),
        SymPolyN::schur(2, &[1]).unwrap().scale(&ScalarQ::q_pow(1))
    );
}

#[test]
fn charvar() {
    let res = charvar_relation_residuals(&CharvarCoeffs::default(), 1).unwrap();
    assert!(res.iter().all(|(_, r)| r.is_zero()));
    assert!(res
        .iter()
        .any(|(l, _)| l.is_empty() || l.iter().all(|x| *x == 0)));
    let mut bad = CharvarCoeffs::default();
    bad.p10p01p11 = ScalarQ::one();
    assert!(charvar_relation_residuals(&bad, 1)
        .unwrap()
        .iter()
        .any(|(_, r)| !r.is_zero()));
}

#[test]
fn face_difference_equation() {
    assert!(face_qde_residual(1, 5).unwrap().is_zero());
    assert!(face_qde_residual(2, 5).unwrap().is_zero());
    assert!(face_qde_residual(3, 4).unwrap().is_zero());
}

#[test]
fn whittaker_basis() {
    let r = |l: [i64; 2]| whittaker_to_schur(&[(l, ScalarQ::one())].into_iter().collect()).unwrap();
    assert_eq!(r([0, 0]), ModuleVector::vacuum());
    assert_eq!(r([1, 1]), w(&[1, 1]));
    assert_eq!(r([1, 0]), w(&[1]));
}

#[test]
fn toda() {
    let (h1, h2) = toda_ops();
    let delta = |l: [i64; 2]| {
        [(l, ScalarQ::one())]
            .into_iter()
            .collect::<std::collections::BTreeMap<_, _>>()
    };
    assert_eq!(apply_uv(&h1, &delta([0, 0])), delta([1, 0]));
    for l in [[0, 0], [2, 1], [3, -1]] {
        assert_eq!(apply_uv(&h2, &delta(l)), delta([l[0] + 1, l[1] + 1]));
    }
}

#[test]
fn abelian_baxter_series() {
    assert!(abelian_baxter(AbelianBaxter::Q01, 0)
        .unwrap()
        .terms()
        .keys()
        .all(|k| k.iter().all(|x| *x == 0)));
    let q01 = abelian_baxter(AbelianBaxter::Q01, 2).unwrap();
    let v1 = skein_core::finite_rank::uv_word(ScalarQ::one(), &[(UV::V1, 1)]);
    let key = v1.terms().keys().next().unwrap().clone();
    assert_eq!(
        q01.coeff(&key),
        s(1).div(&(&ScalarQ::q_pow(1) - &ScalarQ::one())).unwrap()
    );
    assert!(uv_pentagon_check(4).unwrap());
    assert!(uv_pentagon_check(0).unwrap());
    assert!(!uv_pentagon_without_q11(2).unwrap());
}
