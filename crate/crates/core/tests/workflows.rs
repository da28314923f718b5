use lieconf_core::catalog::{build_chv, build_csv, sym};
use lieconf_core::der::{ad, check_derivation, d_vec, decompose, DerivationSpec, SeqC};
use lieconf_core::repr::{
    build_graded, check_module_axioms, classify_rank1, relations_oracle, BitSeq, ClassifyOptions, GradedBase,
    ModuleSpec, Window,
};
use lieconf_core::{poly, Family, GenPoly, Generator, MPoly, Scalar};

#[test]
fn classified_extension_survives_a_document_round_trip() {
    let alg = build_csv(0, 0);
    let c = classify_rank1(&alg, &ClassifyOptions::default()).unwrap();
    assert!(c.matches(Some(Family::Y)));
    let outcome = c
        .outcomes
        .iter()
        .find(|o| o.extension_family() == Some(Family::Y))
        .expect("a Y extension branch");
    let module = outcome.module(&c.base).unwrap();
    let back = ModuleSpec::from_text(&module.to_text()).unwrap();
    assert_eq!(back, module);
    let rep = check_module_axioms(&alg, &back, Window { n: 0, k: 2 }).unwrap();
    assert!(rep.all_zero(), "{:?}", rep.nonzero.first());
}

#[test]
fn graded_module_verdicts_match_the_oracle() {
    let w = Window { n: 2, k: 1 };
    let alg = build_csv(0, 0);
    let bits = BitSeq::parse(-3, "0101101").unwrap();
    for d0 in [MPoly::zero(), MPoly::int(2)] {
        let m = build_graded(&alg, GradedBase::VAb { bits: bits.clone() }, sym("beta"), d0, w).unwrap();
        let checker = check_module_axioms(&alg, &m, w).unwrap().all_zero();
        let oracle = relations_oracle(&MPoly::zero(), &MPoly::zero(), &m, w).unwrap().all_zero();
        assert_eq!(checker, oracle);
    }
    let alpha = build_graded(&alg, GradedBase::Vab { alpha: sym("alpha") }, sym("beta"), sym("d0"), w).unwrap();
    assert!(check_module_axioms(&alg, &alpha, w).unwrap().all_zero());
}

#[test]
fn outer_derivation_decomposes_after_a_document_round_trip() {
    let alg = build_chv(1, 3);
    let x = GenPoly::from_terms([
        (Generator::new(Family::L, 1), poly("2*d")),
        (Generator::new(Family::M, 1), poly("1")),
    ]);
    let d = ad(&alg, &x, 2)
        .unwrap()
        .combine(&MPoly::one(), &d_vec(&alg, &SeqC::delta(1, Scalar::ratio(-5, 2)), 2), &MPoly::one());
    let back = DerivationSpec::from_text(&d.to_text()).unwrap();
    assert!(check_derivation(&alg, &back, 2).unwrap().all_zero());
    let dec = decompose(&alg, &back, 1, 4, 2).unwrap();
    assert_eq!(dec.x, x);
    assert_eq!(dec.q, Some(Scalar::ratio(-5, 2)));
}
