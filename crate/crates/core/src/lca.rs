//! Graded Lie conformal algebras given by bracket templates.
//!
//! An algebra is a free `C[∂]`-module on generators `X_i` (a family tag and
//! an integer index). The λ-bracket of two generators is read from a table of
//! templates: `[A_i λ B_j] = Σ t(∂, λ) T_{i+j}`. Templates never depend on the
//! indices, which is what lets every axiom check run once per family tuple.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{MPoly, PolyError, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LcaError {
    #[error("family `{0}` is not part of the algebra")]
    UnknownFamily(Family),
    #[error("generator {0} lies outside the algebra's grading")]
    IndexOutsideGrading(Generator),
    #[error("invalid algebra document: {0}")]
    Document(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A generator family tag such as `L`, `M` or `Y`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Family(pub char);

impl Family {
    pub const L: Family = Family('L');
    pub const M: Family = Family('M');
    pub const Y: Family = Family('Y');
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub family: Family,
    pub index: i64,
}

impl Generator {
    pub fn new(family: Family, index: i64) -> Self {
        Generator { family, index }
    }

    pub fn shifted(&self, by: i64) -> Self {
        Generator::new(self.family, self.index + by)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.index)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite combination `Σ p_g · g` of generators with polynomial
/// coefficients. With coefficients in `∂` alone it is an algebra element;
/// with `∂, λ` it is a λ-bracket value.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GenPoly {
    terms: BTreeMap<Generator, MPoly>,
}

/// A member of the algebra.
pub type Element = GenPoly;
/// A member of `R[λ]`.
pub type LambdaPoly = GenPoly;

impl GenPoly {
    pub fn zero() -> Self {
        GenPoly::default()
    }

    pub fn gen(g: Generator) -> Self {
        GenPoly::term(g, MPoly::one())
    }

    pub fn term(g: Generator, p: MPoly) -> Self {
        let mut out = GenPoly::zero();
        out.add_term(g, &p);
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Generator, MPoly)>>(it: I) -> Self {
        let mut out = GenPoly::zero();
        for (g, p) in it {
            out.add_term(g, &p);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Generator, &MPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, g: &Generator) -> MPoly {
        self.terms.get(g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: Generator, p: &MPoly) {
        if p.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_default();
        *slot += p;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    /// Multiplies every coefficient by `p`.
    pub fn mul_poly(&self, p: &MPoly) -> GenPoly {
        GenPoly::from_terms(self.terms.iter().map(|(g, c)| (*g, c * p)))
    }

    pub fn map_coeffs(&self, f: impl Fn(&MPoly) -> MPoly) -> GenPoly {
        GenPoly::from_terms(self.terms.iter().map(|(g, c)| (*g, f(c))))
    }

    pub fn substitute(&self, v: Var, q: &MPoly) -> GenPoly {
        self.map_coeffs(|c| c.substitute(v, q))
    }

    /// Shifts every generator index by `by`.
    pub fn shift_indices(&self, by: i64) -> GenPoly {
        GenPoly::from_terms(self.terms.iter().map(|(g, c)| (g.shifted(by), c.clone())))
    }

    /// Distinct grading indices in the support.
    pub fn indices(&self) -> Vec<i64> {
        let mut v: Vec<i64> = self.terms.keys().map(|g| g.index).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

impl std::ops::Add for &GenPoly {
    type Output = GenPoly;
    fn add(self, rhs: &GenPoly) -> GenPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl std::ops::Sub for &GenPoly {
    type Output = GenPoly;
    fn sub(self, rhs: &GenPoly) -> GenPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl std::ops::Neg for &GenPoly {
    type Output = GenPoly;
    fn neg(self) -> GenPoly {
        self.map_coeffs(|c| -c)
    }
}

impl std::ops::AddAssign<&GenPoly> for GenPoly {
    fn add_assign(&mut self, rhs: &GenPoly) {
        for (g, p) in &rhs.terms {
            self.add_term(*g, p);
        }
    }
}

impl std::ops::SubAssign<&GenPoly> for GenPoly {
    fn sub_assign(&mut self, rhs: &GenPoly) {
        for (g, p) in &rhs.terms {
            self.add_term(*g, &-p);
        }
    }
}

impl fmt::Display for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (g, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if p == &MPoly::one() {
                write!(f, "{g}")?;
            } else {
                write!(f, "({p})*{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Keeps only the generators of grading index `i`.
pub fn grading_project(x: &GenPoly, i: i64) -> GenPoly {
    GenPoly::from_terms(
        x.terms()
            .filter(|(g, _)| g.index == i)
            .map(|(g, p)| (*g, p.clone())),
    )
}

/// How generator indices behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grading {
    /// All integer indices, brackets add them.
    Graded,
    /// Only index 0 exists (the finite rank subalgebras).
    IndexZero,
}

/// One summand `template(∂, λ) · target` of a generator bracket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketTerm {
    pub target: Family,
    pub template: MPoly,
}

/// A conformal algebra presented by bracket templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub families: Vec<Family>,
    pub grading: Grading,
    table: BTreeMap<(Family, Family), Vec<BracketTerm>>,
}

impl AlgebraSpec {
    pub fn new(name: impl Into<String>, families: Vec<Family>, grading: Grading) -> Self {
        AlgebraSpec {
            name: name.into(),
            families,
            grading,
            table: BTreeMap::new(),
        }
    }

    /// Sets `[A λ B]`; an empty list (or all-zero templates) means the
    /// bracket vanishes.
    pub fn set_bracket(&mut self, a: Family, b: Family, terms: Vec<(Family, MPoly)>) {
        let terms: Vec<BracketTerm> = terms
            .into_iter()
            .filter(|t| !t.1.is_zero())
            .map(|(target, template)| BracketTerm { target, template })
            .collect();
        if terms.is_empty() {
            self.table.remove(&(a, b));
        } else {
            self.table.insert((a, b), terms);
        }
    }

    /// Fills every missing `[B λ A]` from a present `[A λ B]` by
    /// skew-symmetry: `t'(∂, λ) = -t(∂, -λ-∂)`.
    pub fn complete_by_skew(&mut self) {
        let present: Vec<(Family, Family)> = self.table.keys().copied().collect();
        for (a, b) in present {
            if self.table.contains_key(&(b, a)) {
                continue;
            }
            let flipped = self.table[&(a, b)]
                .iter()
                .map(|t| (t.target, -skew_image(&t.template)))
                .collect();
            self.set_bracket(b, a, flipped);
        }
    }

    pub fn bracket_terms(&self, a: Family, b: Family) -> &[BracketTerm] {
        self.table.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn table(&self) -> impl Iterator<Item = (&(Family, Family), &Vec<BracketTerm>)> {
        self.table.iter()
    }

    pub fn has_family(&self, f: Family) -> bool {
        self.families.contains(&f)
    }

    fn check_generator(&self, g: Generator) -> Result<(), LcaError> {
        if !self.has_family(g.family) {
            return Err(LcaError::UnknownFamily(g.family));
        }
        if self.grading == Grading::IndexZero && g.index != 0 {
            return Err(LcaError::IndexOutsideGrading(g));
        }
        Ok(())
    }

    /// A representative index for template-level checks.
    pub fn sample_index(&self, k: i64) -> i64 {
        match self.grading {
            Grading::Graded => k,
            Grading::IndexZero => 0,
        }
    }

    /// `[x_lam y]` for two generators, with the bracket variable replaced
    /// by the polynomial `lam`.
    pub fn generator_bracket(
        &self,
        x: Generator,
        y: Generator,
        lam: &MPoly,
    ) -> Result<GenPoly, LcaError> {
        self.check_generator(x)?;
        self.check_generator(y)?;
        let mut out = GenPoly::zero();
        for t in self.bracket_terms(x.family, y.family) {
            let coeff = t.template.substitute(Var::LAMBDA, lam);
            out.add_term(Generator::new(t.target, x.index + y.index), &coeff);
        }
        Ok(out)
    }

    /// Substitutes parameters in every template.
    pub fn specialize(&self, subs: &[(Var, MPoly)]) -> AlgebraSpec {
        let mut out = self.clone();
        for terms in out.table.values_mut() {
            for t in terms.iter_mut() {
                t.template = t.template.substitute_all(subs);
            }
            terms.retain(|t| !t.template.is_zero());
        }
        out.table.retain(|_, v| !v.is_empty());
        out
    }

    /// The families `fams` with every bracket among them, targets kept as
    /// they are (so the result need not be closed).
    pub fn restrict(&self, name: &str, fams: &[Family], grading: Grading) -> AlgebraSpec {
        let mut out = AlgebraSpec::new(name, fams.to_vec(), grading);
        for ((a, b), terms) in &self.table {
            if fams.contains(a) && fams.contains(b) {
                out.table.insert((*a, *b), terms.clone());
            }
        }
        out
    }

    /// Variables other than `∂, λ, μ, ν` used by the templates.
    pub fn parameters(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self
            .table
            .values()
            .flatten()
            .flat_map(|t| t.template.vars())
            .filter(|v| !v.is_bracket_var())
            .collect();
        vars.sort_by_key(|v| v.order_key());
        vars.dedup();
        vars
    }

    pub fn to_text(&self) -> String {
        let doc = SpecDoc {
            name: self.name.clone(),
            families: self.families.iter().map(|f| f.0.to_string()).collect(),
            grading: self.grading,
            brackets: self
                .table
                .iter()
                .flat_map(|((a, b), terms)| {
                    terms.iter().map(move |t| BracketDoc {
                        left: a.0.to_string(),
                        right: b.0.to_string(),
                        target: t.target.0.to_string(),
                        template: t.template.to_string(),
                    })
                })
                .collect(),
        };
        toml::to_string(&doc).expect("algebra document serializes")
    }

    pub fn from_text(s: &str) -> Result<AlgebraSpec, LcaError> {
        let doc: SpecDoc = toml::from_str(s).map_err(|e| LcaError::Document(e.to_string()))?;
        let fam = |s: &str| -> Result<Family, LcaError> {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(Family(c)),
                _ => Err(LcaError::Document(format!("bad family tag `{s}`"))),
            }
        };
        let families = doc.families.iter().map(|s| fam(s)).collect::<Result<Vec<_>, _>>()?;
        let mut spec = AlgebraSpec::new(doc.name, families, doc.grading);
        let mut grouped: BTreeMap<(Family, Family), Vec<(Family, MPoly)>> = BTreeMap::new();
        for b in &doc.brackets {
            let (l, r, t) = (fam(&b.left)?, fam(&b.right)?, fam(&b.target)?);
            for f in [l, r, t] {
                if !spec.has_family(f) {
                    return Err(LcaError::UnknownFamily(f));
                }
            }
            grouped.entry((l, r)).or_default().push((t, b.template.parse()?));
        }
        for ((l, r), terms) in grouped {
            spec.set_bracket(l, r, terms);
        }
        Ok(spec)
    }
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    name: String,
    families: Vec<String>,
    grading: Grading,
    #[serde(default)]
    brackets: Vec<BracketDoc>,
}

#[derive(Serialize, Deserialize)]
struct BracketDoc {
    left: String,
    right: String,
    target: String,
    template: String,
}

/// `Q(∂, λ) ↦ Q(∂, -∂-λ)`.
pub fn skew_image(q: &MPoly) -> MPoly {
    q.substitute(Var::LAMBDA, &-(MPoly::var(Var::D) + MPoly::var(Var::LAMBDA)))
}

/// Outer action shift `p(∂, ..) ↦ p(∂ + lam, ..)`, used for
/// `u_lam (q(∂)·w) = q(∂+lam)·(u_lam w)`.
pub fn outer_shift(p: &MPoly, lam: &MPoly) -> MPoly {
    p.substitute(Var::D, &(MPoly::var(Var::D) + lam))
}

/// Bracket argument evaluation `p(∂, ..) ↦ p(-nu, ..)`, used for
/// `[p(∂)u _nu w] = p(-nu)[u _nu w]`.
pub fn argument_eval(p: &MPoly, nu: &MPoly) -> MPoly {
    p.substitute(Var::D, &-nu)
}

/// `[x_lam y]` extended from generators by conformal sesquilinearity:
/// `[p(∂)u _lam q(∂)v] = p(-lam) q(∂+lam) [u _lam v]`. Coefficients may
/// carry other bracket variables; only `∂` is acted on.
pub fn bracket_at(
    spec: &AlgebraSpec,
    x: &GenPoly,
    y: &GenPoly,
    lam: &MPoly,
) -> Result<GenPoly, LcaError> {
    let mut out = GenPoly::zero();
    for (u, p) in x.terms() {
        let p_eval = argument_eval(p, lam);
        if p_eval.is_zero() {
            continue;
        }
        for (w, q) in y.terms() {
            let base = spec.generator_bracket(*u, *w, lam)?;
            if base.is_zero() {
                continue;
            }
            let factor = &p_eval * &outer_shift(q, lam);
            out += &base.mul_poly(&factor);
        }
    }
    Ok(out)
}

/// `[x λ y]`.
pub fn bracket(spec: &AlgebraSpec, x: &Element, y: &Element) -> Result<LambdaPoly, LcaError> {
    bracket_at(spec, x, y, &MPoly::var(Var::LAMBDA))
}

/// Skew-symmetry residual `[A λ B] + [B_{-λ-∂} A]`; zero iff the axiom holds
/// for every pair of generators of these families.
pub fn check_skew(spec: &AlgebraSpec, a: Family, b: Family) -> Result<GenPoly, LcaError> {
    let x = GenPoly::gen(Generator::new(a, spec.sample_index(1)));
    let y = GenPoly::gen(Generator::new(b, spec.sample_index(2)));
    let ab = bracket(spec, &x, &y)?;
    let ba = bracket_at(spec, &y, &x, &MPoly::var(Var::MU))?;
    let flipped = ba.substitute(Var::MU, &-(MPoly::var(Var::D) + MPoly::var(Var::LAMBDA)));
    Ok(&ab + &flipped)
}

/// Jacobi residual `[A λ [B μ C]] - [[A λ B]_{λ+μ} C] - [B μ [A λ C]]` as a
/// generator combination with coefficients in `∂, λ, μ`.
pub fn check_jacobi(
    spec: &AlgebraSpec,
    a: Family,
    b: Family,
    c: Family,
) -> Result<GenPoly, LcaError> {
    let lam = MPoly::var(Var::LAMBDA);
    let mu = MPoly::var(Var::MU);
    let x = GenPoly::gen(Generator::new(a, spec.sample_index(1)));
    let y = GenPoly::gen(Generator::new(b, spec.sample_index(2)));
    let z = GenPoly::gen(Generator::new(c, spec.sample_index(3)));
    let lhs = bracket_at(spec, &x, &bracket_at(spec, &y, &z, &mu)?, &lam)?;
    let t1 = bracket_at(spec, &bracket_at(spec, &x, &y, &lam)?, &z, &(&lam + &mu))?;
    let t2 = bracket_at(spec, &y, &bracket_at(spec, &x, &z, &lam)?, &mu)?;
    Ok(&(&lhs - &t1) - &t2)
}

#[derive(Debug, Clone)]
pub struct SkewRecord {
    pub pair: (Family, Family),
    pub residual: GenPoly,
}

#[derive(Debug, Clone)]
pub struct JacobiRecord {
    /// Sorted family triple.
    pub triple: [Family; 3],
    /// First nonzero residual over all orderings of the triple, or zero.
    pub residual: GenPoly,
    pub orderings_checked: usize,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub skew: Vec<SkewRecord>,
    pub jacobi: Vec<JacobiRecord>,
}

impl AxiomReport {
    pub fn all_zero(&self) -> bool {
        self.skew.iter().all(|r| r.residual.is_zero())
            && self.jacobi.iter().all(|r| r.residual.is_zero())
    }

    pub fn failing_triples(&self) -> Vec<[Family; 3]> {
        self.jacobi
            .iter()
            .filter(|r| !r.residual.is_zero())
            .map(|r| r.triple)
            .collect()
    }
}

/// Skew-symmetry for every unordered family pair and the Jacobi identity for
/// every family multiset of size three (all orderings of each).
pub fn check_all_axioms(spec: &AlgebraSpec) -> Result<AxiomReport, LcaError> {
    let fams = &spec.families;
    let n = fams.len();
    let mut skew = Vec::new();
    for i in 0..n {
        for j in i..n {
            skew.push(SkewRecord {
                pair: (fams[i], fams[j]),
                residual: check_skew(spec, fams[i], fams[j])?,
            });
        }
    }
    let mut jacobi = Vec::new();
    for i in 0..n {
        for j in i..n {
            for k in j..n {
                let triple = [fams[i], fams[j], fams[k]];
                let mut orders: Vec<[Family; 3]> = PERMUTATIONS
                    .iter()
                    .map(|p| [triple[p[0]], triple[p[1]], triple[p[2]]])
                    .collect();
                orders.dedup();
                orders.sort();
                orders.dedup();
                let mut residual = GenPoly::zero();
                for o in &orders {
                    let r = check_jacobi(spec, o[0], o[1], o[2])?;
                    if !r.is_zero() {
                        residual = r;
                        break;
                    }
                }
                jacobi.push(JacobiRecord {
                    triple,
                    residual,
                    orderings_checked: orders.len(),
                });
            }
        }
    }
    Ok(AxiomReport { skew, jacobi })
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];
