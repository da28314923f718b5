use super::*;
use crate::catalog::{build_chv, build_csv, sym};
use crate::exactpoly::poly;
use proptest::prelude::*;

const L: Family = Family::L;
const M: Family = Family::M;
const Y: Family = Family::Y;

fn g(f: Family, i: i64) -> Generator {
    Generator::new(f, i)
}

#[test]
fn ad_images() {
    let csv = build_csv(sym("a"), sym("b"));
    let d = ad(&csv, &GenPoly::gen(g(L, 0)), 2).unwrap();
    assert_eq!(d.degree, Some(0));
    for j in -2..=2 {
        assert_eq!(d.image(g(L, j)).unwrap(), &GenPoly::term(g(L, j), poly("d + 2*l")));
    }
    let zero = ad(&csv, &GenPoly::zero(), 2).unwrap();
    assert!(zero.images().all(|(_, img)| img.is_zero()));
}

#[test]
fn ad_of_m_by_skew_symmetry() {
    // [M λ L] = -[L_{-λ-∂} M], with [L λ M] = (∂ + aλ + b)M
    let lm = poly("d + a*l + b");
    let by_skew = -&lm.substitute(Var::LAMBDA, &poly("-l - d"));
    assert_eq!(by_skew, poly("(a - 1)*d + a*l - b"));
    let at_10 = by_skew.substitute_all(&[(Var::new("a"), MPoly::one()), (Var::new("b"), MPoly::zero())]);
    assert_eq!(at_10, poly("l"));

    let csv = build_csv(1, 0);
    let d = ad(&csv, &GenPoly::gen(g(M, 2)), 2).unwrap();
    assert_eq!(d.image(g(L, -1)).unwrap(), &GenPoly::term(g(M, 1), at_10));
}

#[test]
fn d_vec_images() {
    let csv = build_csv(1, 0);
    let d = d_vec(&csv, &SeqC::delta(0, Scalar::one()), 2);
    assert_eq!(d.image(g(L, 1)).unwrap(), &GenPoly::gen(g(M, 1)));
    assert!(d.image(g(M, 1)).unwrap().is_zero());
    assert!(d.image(g(Y, 1)).unwrap().is_zero());

    let a = SeqC::new([(-1, Scalar::from_int(2)), (3, Scalar::from_int(5))]);
    let d = d_vec(&csv, &a, 2);
    assert_eq!(d.degree, None);
    let expected = GenPoly::from_terms([(g(M, -1), MPoly::int(2)), (g(M, 3), MPoly::int(5))]);
    assert_eq!(d.image(g(L, 0)).unwrap(), &expected);
    assert!(d_vec(&csv, &SeqC::default(), 2).images().all(|(_, i)| i.is_zero()));
}

#[test]
fn d_vec_is_a_derivation_only_at_a_one() {
    let a = SeqC::new([(-1, Scalar::from_int(2)), (0, Scalar::ratio(1, 3)), (2, Scalar::from_int(-4))]);
    for alg in [build_csv(1, sym("b")), build_chv(1, sym("b"))] {
        let d = d_vec(&alg, &a, 4);
        assert!(check_derivation(&alg, &d, 2).unwrap().all_zero(), "{}", alg.name);
    }
    let csv = build_csv(0, 0);
    let d = d_vec(&csv, &SeqC::delta(0, Scalar::one()), 3);
    let rep = check_derivation(&csv, &d, 2).unwrap();
    let ll = rep.nonzero.iter().find(|r| r.pair.0.family == L && r.pair.1.family == L).unwrap();
    // (∂ + λ + 2μ)M_{i+j}
    let (x, y) = ll.pair;
    assert_eq!(ll.residual, GenPoly::term(g(M, x.index + y.index), poly("d + l + 2*m")));
}

#[test]
fn window_must_cover_images() {
    let csv = build_csv(1, 0);
    let d = d_vec(&csv, &SeqC::delta(0, Scalar::one()), 1);
    assert!(matches!(check_derivation(&csv, &d, 2), Err(DerError::WindowTooSmall(_))));
}

#[test]
fn derivation_documents_round_trip() {
    let csv = build_csv(1, 0);
    let d = ad(&csv, &GenPoly::term(g(Y, 1), poly("d^2 + 1")), 1).unwrap();
    assert_eq!(DerivationSpec::from_text(&d.to_text()).unwrap(), d);
    assert_eq!(parse_generator("M_-2").unwrap(), g(M, -2));
    assert!(parse_generator("MM_2").is_err());
}

#[test]
fn apply_follows_the_derivative_rule() {
    let csv = build_csv(0, 0);
    let d = ad(&csv, &GenPoly::term(g(L, 1), poly("d")), 2).unwrap();
    let x = GenPoly::term(g(Y, -1), poly("d^2 + 3"));
    let dx = d.apply(&x).unwrap();
    let shifted = d.apply(&x.mul_poly(&poly("d"))).unwrap();
    assert_eq!(shifted, dx.mul_poly(&poly("d + l")));
}

#[test]
fn solver_examples() {
    let cases = [(build_csv(2, 3), 0, 0), (build_csv(1, 0), 0, 1), (build_csv(0, 0), 1, 0)];
    for (alg, c, extra) in cases {
        let s = solve_graded_derivations(&alg, c, 4, 2).unwrap();
        assert!(s.inner_contained);
        assert_eq!(s.quotient_dim(), extra, "{} c={c}", alg.name);
    }
    for (alg, extra) in [(build_chv(0, 0), 0), (build_chv(1, 0), 1)] {
        let s = solve_graded_derivations(&alg, 0, 4, 2).unwrap();
        assert_eq!(s.quotient_dim(), extra, "{}", alg.name);
    }
    assert!(matches!(
        solve_graded_derivations(&build_csv(sym("a"), 0), 0, 4, 2),
        Err(DerError::NotNumeric(_))
    ));
}

#[test]
fn solution_basis_elements_are_derivations() {
    let alg = build_chv(1, 2);
    let s = solve_graded_derivations(&alg, 1, 3, 2).unwrap();
    for d in s.basis_derivations() {
        assert!(d.respects_degree());
        assert!(check_derivation(&alg, &d, 2).unwrap().all_zero());
    }
}

#[test]
fn decomposition_examples() {
    let csv = build_csv(1, 0);
    let x = GenPoly::term(g(L, 1), poly("d^2"));
    let out = decompose(&csv, &ad(&csv, &x, 2).unwrap(), 1, 4, 2).unwrap();
    assert_eq!(out, Decomposition { x, q: Some(Scalar::zero()) });

    let m0 = GenPoly::gen(g(M, 0));
    let seven = d_vec(&csv, &SeqC::delta(0, Scalar::from_int(7)), 2);
    let d = ad(&csv, &m0, 2).unwrap().combine(&MPoly::one(), &seven, &MPoly::one());
    let out = decompose(&csv, &d, 0, 4, 2).unwrap();
    assert_eq!(out, Decomposition { x: m0, q: Some(Scalar::from_int(7)) });

    let csv15 = build_csv(1, 5);
    let d = d_vec(&csv15, &SeqC::delta(2, Scalar::one()), 2);
    let out = decompose(&csv15, &d, 2, 4, 2).unwrap();
    assert_eq!(out, Decomposition { x: GenPoly::zero(), q: Some(Scalar::one()) });

    // away from a = 1 the extra family is unavailable
    let csv0 = build_csv(0, 0);
    let d = d_vec(&csv0, &SeqC::delta(0, Scalar::one()), 2);
    assert_eq!(decompose(&csv0, &d, 0, 4, 2), Err(DerError::NotDecomposable));
}

fn arb_coeff() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec(-3i64..=3, 1..=4).prop_map(|cs| {
        let mut p = MPoly::zero();
        for (k, c) in cs.into_iter().enumerate() {
            p += &(&MPoly::var(Var::D).pow(k as u32) * &MPoly::int(c));
        }
        p
    })
}

fn arb_element() -> impl Strategy<Value = Element> {
    proptest::collection::vec((0usize..3, -2i64..=2, arb_coeff()), 1..=3).prop_map(|ts| {
        GenPoly::from_terms(ts.into_iter().map(|(f, i, p)| (Generator::new([L, M, Y][f], i), p)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn inner_derivations_satisfy_leibniz(x in arb_element()) {
        let csv = build_csv(sym("a"), sym("b"));
        let d = ad(&csv, &x, 5).unwrap();
        prop_assert!(check_derivation(&csv, &d, 3).unwrap().all_zero());
    }

    #[test]
    fn residual_is_linear(x in arb_element(), y in arb_element(), s in -3i64..=3, t in -3i64..=3) {
        let csv = build_csv(0, 0);
        let d1 = ad(&csv, &x, 2).unwrap();
        let d2 = d_vec(&csv, &SeqC::delta(1, Scalar::one()), 2).combine(&MPoly::one(), &ad(&csv, &y, 2).unwrap(), &MPoly::one());
        let (s, t) = (MPoly::int(s), MPoly::int(t));
        let mix = d1.combine(&s, &d2, &t);
        for (a, b) in window_pairs(&csv, 1) {
            let r = leibniz_residual(&csv, &mix, a, b).unwrap();
            let r1 = leibniz_residual(&csv, &d1, a, b).unwrap();
            let r2 = leibniz_residual(&csv, &d2, a, b).unwrap();
            prop_assert_eq!(r, &r1.mul_poly(&s) + &r2.mul_poly(&t));
        }
    }

    #[test]
    fn decompose_round_trips(c in -1i64..=1, f in arb_coeff(), h in arb_coeff(), q in -4i64..=4) {
        let csv = build_csv(1, 2);
        let x = GenPoly::from_terms([(g(L, c), f), (g(Y, c), h)]);
        let extra = d_vec(&csv, &SeqC::delta(c, Scalar::from_int(q)), 2);
        let d = ad(&csv, &x, 2).unwrap().combine(&MPoly::one(), &extra, &MPoly::one());
        let out = decompose(&csv, &d, c, 5, 2).unwrap();
        prop_assert_eq!(out, Decomposition { x, q: Some(Scalar::from_int(q)) });
    }
}
