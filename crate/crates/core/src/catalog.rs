//! Named algebras: `CSV(a,b)`, its subalgebras, the four-parameter
//! construction family `M(a,a',b,b')` and the twisted Schrödinger-Virasoro
//! Lie algebra `tsv`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::exactpoly::{linear_solve, poly, MPoly, Monomial, PolyError, Scalar, Var};
use crate::lca::{check_jacobi, AlgebraSpec, Family, Generator, Grading, LcaError};

const L: Family = Family::L;
const M: Family = Family::M;
const Y: Family = Family::Y;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("coefficient equation `{0}` is not linear in a', b' with scalar coefficients")]
    NotLinear(String),
    #[error("construction system has {0} free directions, expected a unique solution")]
    NotUnique(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Lca(#[from] LcaError),
}

/// The symbolic parameter named `name`.
pub fn sym(name: &str) -> MPoly {
    MPoly::sym(name)
}

fn lm_template(a: &MPoly, b: &MPoly) -> MPoly {
    &(&poly("d") + &(a * &poly("l"))) + b
}

/// `CSV(a,b)`: `[L λ L] = (∂+2λ)L`, `[L λ M] = (∂+aλ+b)M`,
/// `[L λ Y] = (∂+(a/2+1)λ+b/2)Y`, `[Y λ Y] = (∂+2λ)M`.
pub fn build_csv(a: impl Into<MPoly>, b: impl Into<MPoly>) -> AlgebraSpec {
    let (a, b) = (a.into(), b.into());
    let half = MPoly::ratio(1, 2);
    let ap = &(&a * &half) + &MPoly::one();
    let bp = &b * &half;
    let mut s = build_construction(a, ap, b, bp);
    s.name = "csv".into();
    s
}

/// The construction family with `[L λ Y] = (∂+a'λ+b')Y` and every other
/// bracket as in `CSV(a,b)`.
pub fn build_construction(
    a: impl Into<MPoly>,
    a_prime: impl Into<MPoly>,
    b: impl Into<MPoly>,
    b_prime: impl Into<MPoly>,
) -> AlgebraSpec {
    let (a, ap, b, bp) = (a.into(), a_prime.into(), b.into(), b_prime.into());
    let mut s = AlgebraSpec::new("mfam", vec![L, M, Y], Grading::Graded);
    s.set_bracket(L, L, vec![(L, poly("d + 2*l"))]);
    s.set_bracket(L, M, vec![(M, lm_template(&a, &b))]);
    s.set_bracket(L, Y, vec![(Y, lm_template(&ap, &bp))]);
    s.set_bracket(Y, Y, vec![(M, poly("d + 2*l"))]);
    s.complete_by_skew();
    s
}

/// `CHV(a,b)`, the `{L, M}` part of `CSV(a,b)`.
pub fn build_chv(a: impl Into<MPoly>, b: impl Into<MPoly>) -> AlgebraSpec {
    build_csv(a, b).restrict("chv", &[L, M], Grading::Graded)
}

/// The loop Virasoro algebra `CW`.
pub fn build_cw() -> AlgebraSpec {
    build_csv(0, 0).restrict("cw", &[L], Grading::Graded)
}

/// The rank three algebra `SV(a,b)`: `CSV(a,b)` at index 0.
pub fn build_sv(a: impl Into<MPoly>, b: impl Into<MPoly>) -> AlgebraSpec {
    build_csv(a, b).restrict("sv", &[L, M, Y], Grading::IndexZero)
}

pub fn build_hv(a: impl Into<MPoly>, b: impl Into<MPoly>) -> AlgebraSpec {
    build_csv(a, b).restrict("hv", &[L, M], Grading::IndexZero)
}

/// The Virasoro conformal algebra.
pub fn build_cvir() -> AlgebraSpec {
    build_csv(0, 0).restrict("cvir", &[L], Grading::IndexZero)
}

/// Identifiers accepted by [`build_named`] and the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraId {
    Csv,
    Chv,
    Cw,
    Sv,
    Hv,
    Cvir,
    Mfam,
    Tsv,
}

impl AlgebraId {
    pub const ALL: [AlgebraId; 8] = [
        AlgebraId::Csv,
        AlgebraId::Chv,
        AlgebraId::Cw,
        AlgebraId::Sv,
        AlgebraId::Hv,
        AlgebraId::Cvir,
        AlgebraId::Mfam,
        AlgebraId::Tsv,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AlgebraId::Csv => "csv",
            AlgebraId::Chv => "chv",
            AlgebraId::Cw => "cw",
            AlgebraId::Sv => "sv",
            AlgebraId::Hv => "hv",
            AlgebraId::Cvir => "cvir",
            AlgebraId::Mfam => "mfam",
            AlgebraId::Tsv => "tsv",
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgebraId {
    type Err = CatalogError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AlgebraId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| CatalogError::UnknownAlgebra(s.to_string()))
    }
}

/// Parameters of the construction family; `CSV(a,b)` only reads `a, b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionFamily {
    pub a: MPoly,
    pub a_prime: MPoly,
    pub b: MPoly,
    pub b_prime: MPoly,
}

impl ConstructionFamily {
    pub fn symbolic() -> Self {
        ConstructionFamily {
            a: sym("a"),
            a_prime: sym("a'"),
            b: sym("b"),
            b_prime: sym("b'"),
        }
    }

    pub fn build(&self) -> AlgebraSpec {
        build_construction(
            self.a.clone(),
            self.a_prime.clone(),
            self.b.clone(),
            self.b_prime.clone(),
        )
    }
}

/// Builds a conformal algebra by identifier. `tsv` is a plain Lie algebra
/// and is rejected here; see [`build_tsv_lie`].
pub fn build_named(id: AlgebraId, params: &ConstructionFamily) -> Result<AlgebraSpec, CatalogError> {
    let (a, b) = (params.a.clone(), params.b.clone());
    Ok(match id {
        AlgebraId::Csv => build_csv(a, b),
        AlgebraId::Chv => build_chv(a, b),
        AlgebraId::Cw => build_cw(),
        AlgebraId::Sv => build_sv(a, b),
        AlgebraId::Hv => build_hv(a, b),
        AlgebraId::Cvir => build_cvir(),
        AlgebraId::Mfam => params.build(),
        AlgebraId::Tsv => return Err(CatalogError::UnknownAlgebra("tsv".into())),
    })
}

/// One coefficient of the `(L, Y, Y)` Jacobi residual: the monomial in
/// `∂, λ, μ` and its coefficient, a polynomial in `a, a', b, b'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientEquation {
    pub monomial: Monomial,
    pub equation: MPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionSolution {
    pub a_prime: MPoly,
    pub b_prime: MPoly,
    pub equations: Vec<CoefficientEquation>,
}

/// Coefficients of the symbolic `(L, Y, Y)` Jacobi residual.
pub fn construction_equations() -> Result<Vec<CoefficientEquation>, CatalogError> {
    let spec = ConstructionFamily::symbolic().build();
    let residual = check_jacobi(&spec, L, Y, Y)?;
    let mut eqs = Vec::new();
    for (_, coeff) in residual.terms() {
        for (monomial, equation) in coeff.coefficients(&[Var::D, Var::LAMBDA, Var::MU]) {
            eqs.push(CoefficientEquation { monomial, equation });
        }
    }
    eqs.sort_by(|x, y| y.monomial.grlex_cmp(&x.monomial));
    Ok(eqs)
}

/// Solves the construction family's Jacobi condition for `a', b'`.
pub fn solve_construction() -> Result<ConstructionSolution, CatalogError> {
    solve_construction_using(None)
}

/// As [`solve_construction`] but keeps only the equations whose monomial is
/// listed in `keep` (all of them when `None`).
pub fn solve_construction_using(
    keep: Option<&[Monomial]>,
) -> Result<ConstructionSolution, CatalogError> {
    let ap = Var::new("a'");
    let bp = Var::new("b'");
    let unknowns = [ap, bp];
    let equations: Vec<CoefficientEquation> = construction_equations()?
        .into_iter()
        .filter(|e| keep.is_none_or(|k| k.contains(&e.monomial)))
        .collect();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for e in &equations {
        if e.equation.degree_over(&unknowns) > 1 {
            return Err(CatalogError::NotLinear(e.equation.to_string()));
        }
        let mut row = Vec::new();
        for u in unknowns {
            let c = e.equation.coeff_extract(&unknowns, &Monomial::var(u));
            row.push(
                c.as_constant()
                    .ok_or_else(|| CatalogError::NotLinear(e.equation.to_string()))?,
            );
        }
        rows.push(row);
        rhs.push(-e.equation.coeff_extract(&unknowns, &Monomial::one()));
    }
    let sol = linear_solve(&rows, &rhs)?;
    if !sol.kernel_basis.is_empty() {
        return Err(CatalogError::NotUnique(sol.kernel_basis.len()));
    }
    Ok(ConstructionSolution {
        a_prime: sol.solution[0].clone(),
        b_prime: sol.solution[1].clone(),
        equations,
    })
}

/// True iff `sub`'s templates agree with `parent`'s on `sub`'s families and
/// the restriction is closed under the bracket.
pub fn subalgebra_check(parent: &AlgebraSpec, sub: &AlgebraSpec) -> bool {
    if !sub.families.iter().all(|f| parent.has_family(*f)) {
        return false;
    }
    if sub.grading == Grading::Graded && parent.grading == Grading::IndexZero {
        return false;
    }
    for &x in &sub.families {
        for &y in &sub.families {
            let p = parent.bracket_terms(x, y);
            if p != sub.bracket_terms(x, y) {
                return false;
            }
            if p.iter().any(|t| !sub.has_family(t.target)) {
                return false;
            }
        }
    }
    true
}

/// A `Z`-graded Lie algebra whose structure constants are polynomials in the
/// two indices: `[A_x, B_y] = Σ c(x, y) T_{x+y}`.
#[derive(Debug, Clone)]
pub struct LieAlgebraSpec {
    pub name: String,
    pub families: Vec<Family>,
    table: BTreeMap<(Family, Family), Vec<(Family, MPoly)>>,
}

/// Left index variable of [`LieAlgebraSpec`] structure constants.
pub fn lie_left() -> Var {
    Var::new("x")
}

/// Right index variable of [`LieAlgebraSpec`] structure constants.
pub fn lie_right() -> Var {
    Var::new("y")
}

/// A Lie algebra element: finitely many generators with scalar coefficients.
pub type LieElement = BTreeMap<Generator, Scalar>;

impl LieAlgebraSpec {
    pub fn new(name: impl Into<String>, families: Vec<Family>) -> Self {
        LieAlgebraSpec {
            name: name.into(),
            families,
            table: BTreeMap::new(),
        }
    }

    /// Sets `[A_x, B_y]`, with structure constants written in `x` and `y`.
    pub fn set_bracket(&mut self, a: Family, b: Family, terms: Vec<(Family, MPoly)>) {
        self.table.insert((a, b), terms);
    }

    pub fn bracket_generators(&self, u: Generator, v: Generator) -> LieElement {
        let mut out = LieElement::new();
        let point = [
            (lie_left(), Scalar::from_int(u.index)),
            (lie_right(), Scalar::from_int(v.index)),
        ];
        for (target, c) in self.table.get(&(u.family, v.family)).into_iter().flatten() {
            let value = c.eval(&point).as_constant().expect("index-only structure constant");
            lie_add(&mut out, Generator::new(*target, u.index + v.index), &value);
        }
        out
    }

    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let mut out = LieElement::new();
        for (u, cu) in x {
            for (v, cv) in y {
                for (w, c) in self.bracket_generators(*u, *v) {
                    lie_add(&mut out, w, &(&c * &(cu * cv)));
                }
            }
        }
        out
    }
}

fn lie_add(e: &mut LieElement, g: Generator, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = e.entry(g).or_default();
    *slot += c;
    if slot.is_zero() {
        e.remove(&g);
    }
}

/// The twisted Schrödinger-Virasoro algebra: `[L_m, L_n] = (n-m)L`,
/// `[L_m, M_n] = nM`, `[L_m, Y_p] = (p - m/2)Y`, `[Y_p, Y_q] = (q-p)M`,
/// all other brackets among `L, M, Y` zero. The reversed orders are written
/// out so that anti-symmetry is a checked property.
pub fn build_tsv_lie() -> LieAlgebraSpec {
    let mut s = LieAlgebraSpec::new("tsv", vec![L, M, Y]);
    s.set_bracket(L, L, vec![(L, poly("y - x"))]);
    s.set_bracket(L, M, vec![(M, poly("y"))]);
    s.set_bracket(M, L, vec![(M, poly("-x"))]);
    s.set_bracket(L, Y, vec![(Y, poly("y - x/2"))]);
    s.set_bracket(Y, L, vec![(Y, poly("y/2 - x"))]);
    s.set_bracket(Y, Y, vec![(M, poly("y - x"))]);
    s
}

#[derive(Debug, Clone, Default)]
pub struct LieCheckReport {
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub antisymmetry_failures: Vec<(Generator, Generator)>,
    pub jacobi_failures: Vec<[Generator; 3]>,
}

impl LieCheckReport {
    pub fn all_zero(&self) -> bool {
        self.antisymmetry_failures.is_empty() && self.jacobi_failures.is_empty()
    }
}

/// Anti-symmetry and the Jacobi identity for every generator pair and triple
/// with indices in `[-n, n]`.
pub fn lie_jacobi_check(spec: &LieAlgebraSpec, n: i64) -> LieCheckReport {
    let gens: Vec<Generator> = spec
        .families
        .iter()
        .flat_map(|f| (-n..=n).map(move |i| Generator::new(*f, i)))
        .collect();
    let single = |g: Generator| LieElement::from([(g, Scalar::one())]);
    let mut rep = LieCheckReport::default();
    for &u in &gens {
        for &v in &gens {
            rep.pairs_checked += 1;
            let mut sum = spec.bracket_generators(u, v);
            for (w, c) in spec.bracket_generators(v, u) {
                lie_add(&mut sum, w, &c);
            }
            if !sum.is_empty() {
                rep.antisymmetry_failures.push((u, v));
            }
        }
    }
    for &u in &gens {
        for &v in &gens {
            let uv = spec.bracket_generators(u, v);
            for &w in &gens {
                rep.triples_checked += 1;
                // [u,[v,w]] + [v,[w,u]] + [w,[u,v]]
                let mut sum = spec.bracket(&single(u), &spec.bracket_generators(v, w));
                for (g, c) in spec.bracket(&single(v), &spec.bracket_generators(w, u)) {
                    lie_add(&mut sum, g, &c);
                }
                for (g, c) in spec.bracket(&single(w), &uv) {
                    lie_add(&mut sum, g, &c);
                }
                if !sum.is_empty() {
                    rep.jacobi_failures.push([u, v, w]);
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests;
