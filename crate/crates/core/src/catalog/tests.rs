use super::*;
use crate::lca::{check_all_axioms, GenPoly};

fn template(s: &AlgebraSpec, x: Family, y: Family) -> MPoly {
    s.bracket_terms(x, y)[0].template.clone()
}

#[test]
fn csv_specializations() {
    assert_eq!(template(&build_csv(1, 0), L, Y), poly("d + (3/2)*l"));
    assert_eq!(template(&build_csv(0, 0), L, M), poly("d"));
    assert_eq!(template(&build_cw(), L, L), poly("d + 2*l"));
    assert_eq!(template(&build_csv(sym("a"), sym("b")), M, L), poly("(a - 1)*d + a*l - b"));
}

#[test]
fn chv_is_loop_heisenberg_virasoro() {
    let chv = build_chv(1, 0);
    assert_eq!(chv.families, vec![L, M]);
    assert_eq!(template(&chv, L, L), poly("d + 2*l"));
    assert_eq!(template(&chv, L, M), poly("d + l"));
    assert_eq!(template(&chv, M, L), poly("l"));
    assert!(chv.bracket_terms(M, M).is_empty());
    assert!(check_all_axioms(&chv).unwrap().all_zero());
}

#[test]
fn symbolic_csv_and_chv_pass_axioms() {
    assert!(check_all_axioms(&build_csv(sym("a"), sym("b"))).unwrap().all_zero());
    assert!(check_all_axioms(&build_chv(sym("a"), sym("b"))).unwrap().all_zero());
    assert!(check_all_axioms(&build_csv(1, 0)).unwrap().all_zero());
    assert!(check_all_axioms(&build_sv(sym("a"), sym("b"))).unwrap().all_zero());
}

#[test]
fn subalgebras() {
    let csv = build_csv(sym("a"), sym("b"));
    assert!(subalgebra_check(&csv, &build_cw()));
    assert!(subalgebra_check(&csv, &build_hv(sym("a"), sym("b"))));
    assert!(subalgebra_check(&csv, &build_chv(sym("a"), sym("b"))));
    assert!(subalgebra_check(&build_chv(sym("a"), sym("b")), &build_cvir()));
    assert!(!subalgebra_check(&csv, &csv.restrict("ly", &[L, Y], Grading::Graded)));
    assert!(subalgebra_check(&csv, &csv.restrict("my", &[M, Y], Grading::Graded)));
    // different parameters are not a restriction
    assert!(!subalgebra_check(&csv, &build_hv(1, 0)));
}

#[test]
fn construction_family_at_solution_is_csv() {
    let c = build_construction(sym("a"), poly("a/2 + 1"), sym("b"), poly("b/2"));
    let mut csv = build_csv(sym("a"), sym("b"));
    csv.name = c.name.clone();
    assert_eq!(c, csv);
}

#[test]
fn construction_off_locus_fails() {
    let s = build_construction(0, 0, 0, 1);
    let r = check_jacobi(&s, L, Y, Y).unwrap();
    assert!(!r.is_zero());
    // hand expansion with a = b = a' = 0, b' = 1:
    // (∂+λ+2μ)∂ - (-λ-μ+1)(∂+2λ+2μ) - (∂+μ+1)(∂+2μ)
    let by_hand = poly("(d + l + 2*m)*d - (-l - m + 1)*(d + 2*l + 2*m) - (d + m + 1)*(d + 2*m)");
    assert_eq!(r, GenPoly::term(Generator::new(M, 6), by_hand.clone()));
    let at = |d: i64, l: i64, m: i64| {
        by_hand
            .eval(&[
                (Var::D, Scalar::from_int(d)),
                (Var::LAMBDA, Scalar::from_int(l)),
                (Var::MU, Scalar::from_int(m)),
            ])
            .as_constant()
            .unwrap()
    };
    assert_eq!(at(1, 0, 0), Scalar::from_int(-2));
    assert_eq!(at(1, 1, 1), Scalar::zero());
}

#[test]
fn dlambda_coefficient() {
    let eqs = construction_equations().unwrap();
    let dl = Monomial::from_pairs([(Var::D, 1), (Var::LAMBDA, 1)]);
    let e = eqs.iter().find(|e| e.monomial == dl).unwrap();
    assert_eq!(e.equation, poly("a + 1 - (2*a' - 1)"));
}

#[test]
fn construction_solver() {
    let sol = solve_construction().unwrap();
    assert_eq!(sol.a_prime, poly("a/2 + 1"));
    assert_eq!(sol.b_prime, poly("b/2"));
    let back = build_construction(sym("a"), sol.a_prime.clone(), sym("b"), sol.b_prime.clone());
    assert!(check_all_axioms(&back).unwrap().all_zero());

    let dl = Monomial::from_pairs([(Var::D, 1), (Var::LAMBDA, 1)]);
    let d = Monomial::var(Var::D);
    let partial = solve_construction_using(Some(&[dl, d])).unwrap();
    assert_eq!((partial.a_prime, partial.b_prime), (sol.a_prime, sol.b_prime));
    assert_eq!(partial.equations.len(), 2);

    let only_d = solve_construction_using(Some(&[Monomial::var(Var::D)]));
    assert!(matches!(only_d, Err(CatalogError::NotUnique(1))));
}

#[test]
fn algebra_ids() {
    for id in AlgebraId::ALL {
        assert_eq!(id.as_str().parse::<AlgebraId>().unwrap(), id);
    }
    assert!("xyz".parse::<AlgebraId>().is_err());
    let p = ConstructionFamily::symbolic();
    assert_eq!(build_named(AlgebraId::Hv, &p).unwrap(), build_hv(sym("a"), sym("b")));
    assert!(build_named(AlgebraId::Tsv, &p).is_err());
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

/// Structure constants typed in straight from the defining relations.
fn tsv_by_hand(u: Generator, v: Generator) -> Option<(Family, Scalar)> {
    let (m, n) = (u.index, v.index);
    match (u.family.0, v.family.0) {
        ('L', 'L') => Some((L, q(n - m, 1))),
        ('L', 'M') => Some((M, q(n, 1))),
        ('M', 'L') => Some((M, q(-m, 1))),
        ('L', 'Y') => Some((Y, q(2 * n - m, 2))),
        ('Y', 'L') => Some((Y, q(n - 2 * m, 2))),
        ('Y', 'Y') => Some((M, q(n - m, 1))),
        _ => None,
    }
}

#[test]
fn tsv_table_matches_hand_constants() {
    let s = build_tsv_lie();
    for fu in [L, M, Y] {
        for fv in [L, M, Y] {
            for i in -3..=3 {
                for j in -3..=3 {
                    let (u, v) = (Generator::new(fu, i), Generator::new(fv, j));
                    let mut expected = LieElement::new();
                    if let Some((t, c)) = tsv_by_hand(u, v) {
                        if !c.is_zero() {
                            expected.insert(Generator::new(t, i + j), c);
                        }
                    }
                    assert_eq!(s.bracket_generators(u, v), expected, "{u} {v}");
                }
            }
        }
    }
}

#[test]
fn tsv_relations() {
    let s = build_tsv_lie();
    let m3 = Generator::new(M, 3);
    assert_eq!(
        s.bracket_generators(Generator::new(L, 0), m3),
        LieElement::from([(m3, Scalar::from_int(3))])
    );
    assert!(s.bracket_generators(Generator::new(Y, 2), Generator::new(Y, 2)).is_empty());
    let rep = lie_jacobi_check(&s, 2);
    assert!(rep.all_zero());
    assert_eq!(rep.triples_checked, 15 * 15 * 15);
}

#[test]
fn broken_lie_table_is_caught() {
    let mut s = build_tsv_lie();
    s.set_bracket(Y, L, vec![(Y, poly("y - x"))]);
    let rep = lie_jacobi_check(&s, 1);
    assert!(!rep.antisymmetry_failures.is_empty());
    assert!(!rep.jacobi_failures.is_empty());
}
