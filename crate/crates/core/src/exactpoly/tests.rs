use super::*;
use proptest::prelude::*;

fn v(name: &str) -> Var {
    Var::new(name)
}

#[test]
fn cancellation_and_annihilator() {
    assert_eq!(poly("d + 2*l") + poly("-d"), poly("2*l"));
    assert!((poly("d + 2*l") * MPoly::zero()).is_zero());
    let p = poly("d^2 + a*l - 3");
    assert!((&p - &p).is_zero());
    assert_eq!((&p - &p).num_terms(), 0);
}

#[test]
fn product_of_case_one_zero_factor() {
    let lhs = poly("d + beta") * poly("d + beta + l");
    assert_eq!(lhs, poly("d^2 + 2*beta*d + l*d + beta^2 + beta*l"));
}

#[test]
fn substitution_examples() {
    let p = poly("d + 2*l").substitute(Var::LAMBDA, &poly("-d - l"));
    assert_eq!(p, poly("-d - 2*l"));
    let q = poly("d + a*l + b").substitute(Var::D, &poly("d + m"));
    assert_eq!(q, poly("d + m + a*l + b"));
    let c = MPoly::sym("c");
    let cube = &(&c * &c) * &c;
    assert_eq!(cube.substitute(v("c"), &MPoly::int(2)), MPoly::int(8));
}

#[test]
fn simultaneous_substitution_swaps() {
    let p = poly("d + 2*l");
    let swapped = p.substitute_all(&[(Var::D, poly("l")), (Var::LAMBDA, poly("d"))]);
    assert_eq!(swapped, poly("l + 2*d"));
}

#[test]
fn coefficient_extraction() {
    let p = poly("(a+1)*d*l + b*d");
    let dl = Monomial::from_pairs([(Var::D, 1), (Var::LAMBDA, 1)]);
    assert_eq!(p.coeff_extract(&[Var::D, Var::LAMBDA], &dl), poly("a + 1"));
    let l3 = Monomial::var_pow(Var::LAMBDA, 3);
    assert!(p.coeff_extract(&[Var::D, Var::LAMBDA], &l3).is_zero());
    let q = poly("2*(a'-1)*l^2");
    let l2 = Monomial::var_pow(Var::LAMBDA, 2);
    assert_eq!(q.coeff_extract(&[Var::LAMBDA], &l2), poly("2*a' - 2"));
}

#[test]
fn exact_division() {
    assert_eq!(
        poly("l*d + 2*l^2").divide_exact(&poly("l")).unwrap(),
        poly("d + 2*l")
    );
    let p = poly("(l - b)*(d + 1)");
    assert_eq!(p.divide_exact(&poly("l - b")).unwrap(), poly("d + 1"));
    assert_eq!(
        poly("d + 1").divide_exact(&poly("l")),
        Err(PolyError::NotDivisible)
    );
    assert_eq!(
        poly("d").divide_exact(&MPoly::zero()),
        Err(PolyError::DivisionByZero)
    );
}

#[test]
fn monic_remainder() {
    // (d + l + 5) mod (d + 5) in d is l
    let r = poly("d + l + 5").rem_monic(&poly("d + 5"), Var::D).unwrap();
    assert_eq!(r, poly("l"));
    let r = poly("d^2 + s*d").rem_monic(&poly("d + s"), Var::D).unwrap();
    assert!(r.is_zero());
    assert_eq!(
        poly("d").rem_monic(&poly("2*d"), Var::D),
        Err(PolyError::NotMonic)
    );
}

#[test]
fn printer_format() {
    assert_eq!(poly("d/2 + 3*l/2 - b/2").to_string(), "(1/2)*d + (3/2)*l - (1/2)*b");
    assert_eq!(poly("0").to_string(), "0");
    assert_eq!(poly("-d + 1").to_string(), "-d + 1");
    assert_eq!(poly("i*d^2 - (1/3)").to_string(), "(i)*d^2 - (1/3)");
    assert_eq!(poly("(1+2i)*l*d").to_string(), "(1+2i)*d*l");
    assert_eq!(poly("∂ + λ*μ + a′").to_string(), "l*m + d + a'");
}

#[test]
fn parser_errors() {
    assert!("".parse::<MPoly>().is_err());
    assert!("d +".parse::<MPoly>().is_err());
    assert!("d / l".parse::<MPoly>().is_err());
    assert!("(d + 1".parse::<MPoly>().is_err());
    assert!("d $ 2".parse::<MPoly>().is_err());
    assert!(matches!("1/0".parse::<MPoly>(), Err(PolyError::DivisionByZero)));
}

pub(crate) fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4, -2i64..=2).prop_map(|(n, d, im)| {
        let re = Scalar::ratio(n, d);
        if im == 0 {
            re
        } else {
            &re + &(&Scalar::i() * &Scalar::ratio(im, d))
        }
    })
}

pub(crate) fn arb_poly() -> impl Strategy<Value = MPoly> {
    let names = ["d", "l", "m", "a", "b"];
    let mono = proptest::collection::vec(0u32..=2, 5).prop_map(move |exps| {
        let mut pairs: Vec<(Var, u32)> = names.iter().map(|n| Var::new(n)).zip(exps).collect();
        // cap total degree at 4
        let mut total = 0;
        for p in pairs.iter_mut() {
            p.1 = p.1.min(4 - total);
            total += p.1;
        }
        Monomial::from_pairs(pairs)
    });
    proptest::collection::vec((mono, arb_scalar()), 0..6).prop_map(MPoly::from_terms)
}

proptest! {
    #[test]
    fn ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn divide_round_trip(p in arb_poly(), q in arb_poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).divide_exact(&q).unwrap(), p);
    }

    #[test]
    fn coefficient_reconstruction(p in arb_poly()) {
        let vars = [Var::D, Var::LAMBDA];
        let mut acc = MPoly::zero();
        for (m, c) in p.coefficients(&vars) {
            prop_assert_eq!(&p.coeff_extract(&vars, &m), &c);
            acc += &c.mul_monomial(&m);
        }
        prop_assert_eq!(acc, p);
    }

    #[test]
    fn text_round_trip(p in arb_poly()) {
        let s = p.to_string();
        let back: MPoly = s.parse().unwrap();
        prop_assert_eq!(back.to_string(), s);
        prop_assert_eq!(back, p);
    }

    #[test]
    fn solve_satisfies_system(
        a in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..5),
        rhs_seed in proptest::collection::vec(-3i64..=3, 3),
    ) {
        // rhs = A * x0 with x0 a parameter vector, so the system is consistent
        let x0: Vec<MPoly> = rhs_seed.iter().enumerate()
            .map(|(k, &c)| &MPoly::sym(["a", "b", "c"][k]) + &MPoly::int(c))
            .collect();
        let mat: Vec<Vec<Scalar>> = a.iter()
            .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
            .collect();
        let rhs: Vec<MPoly> = mat.iter()
            .map(|r| r.iter().zip(&x0).fold(MPoly::zero(), |acc, (c, x)| &acc + &x.scale(c)))
            .collect();
        let sol = linear_solve(&mat, &rhs).unwrap();
        for (r, b) in mat.iter().zip(&rhs) {
            let lhs = r.iter().zip(&sol.solution).fold(MPoly::zero(), |acc, (c, x)| &acc + &x.scale(c));
            prop_assert_eq!(&lhs, b);
            for k in &sol.kernel_basis {
                let dot = r.iter().zip(k).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y));
                prop_assert!(dot.is_zero());
            }
        }
        prop_assert_eq!(sol.kernel_basis.len() + rank_of(&mat), 3);
    }
}
