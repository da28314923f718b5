//! Conformal derivations: maps `D_λ : R → R[λ]` with
//! `D_λ(∂a) = (∂+λ)D_λ(a)` and
//! `D_λ([a μ b]) = [(D_λ a)_{λ+μ} b] + [a μ (D_λ b)]`.
//!
//! A derivation is stored by its images of generators over a finite index
//! window; everything else follows from the ∂-rule.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{linear_solve, MPoly, PolyError, RowEchelon, Scalar, SparseRow, Var};
use crate::lca::{bracket, bracket_at, outer_shift, AlgebraSpec, Element, Family, GenPoly, Generator, LcaError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerError {
    #[error("no image recorded for {0}; enlarge the window")]
    WindowTooSmall(Generator),
    #[error("derivation is not ad(x) plus a multiple of the extra family at the given bounds")]
    NotDecomposable,
    #[error("decomposition is not unique: {0} free directions")]
    NotUnique(usize),
    #[error("inner derivation images exceed the degree bound {0}")]
    DegreeBoundExceeded(u32),
    #[error("solver needs numeric algebra parameters, found `{0}`")]
    NotNumeric(String),
    #[error("invalid derivation document: {0}")]
    Document(String),
    #[error("equation is not linear in the unknowns: {0}")]
    NotLinear(String),
    #[error(transparent)]
    Lca(#[from] LcaError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Generator images of a derivation. `degree = Some(c)` records that every
/// image of an index `i` generator lies in index `i + c`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DerivationSpec {
    pub degree: Option<i64>,
    images: BTreeMap<Generator, GenPoly>,
}

impl DerivationSpec {
    pub fn new(degree: Option<i64>) -> Self {
        DerivationSpec {
            degree,
            images: BTreeMap::new(),
        }
    }

    pub fn set_image(&mut self, g: Generator, image: GenPoly) {
        self.images.insert(g, image);
    }

    pub fn image(&self, g: Generator) -> Result<&GenPoly, DerError> {
        self.images.get(&g).ok_or(DerError::WindowTooSmall(g))
    }

    pub fn images(&self) -> impl Iterator<Item = (&Generator, &GenPoly)> {
        self.images.iter()
    }

    pub fn generators(&self) -> BTreeSet<Generator> {
        self.images.keys().copied().collect()
    }

    /// True when every image of `X_i` lies in index `i + c`.
    pub fn respects_degree(&self) -> bool {
        match self.degree {
            None => true,
            Some(c) => self
                .images
                .iter()
                .all(|(g, img)| img.indices().iter().all(|k| *k == g.index + c)),
        }
    }

    /// `s·self + t·other` on the generators both record.
    pub fn combine(&self, s: &MPoly, other: &DerivationSpec, t: &MPoly) -> DerivationSpec {
        let degree = if self.degree == other.degree { self.degree } else { None };
        let mut out = DerivationSpec::new(degree);
        for (g, a) in &self.images {
            if let Some(b) = other.images.get(g) {
                out.images.insert(*g, &a.mul_poly(s) + &b.mul_poly(t));
            }
        }
        out
    }

    /// `D_λ(x)` for an algebra element, using `D_λ(p(∂)g) = p(∂+λ)D_λ(g)`.
    pub fn apply(&self, x: &Element) -> Result<GenPoly, DerError> {
        let lam = MPoly::var(Var::LAMBDA);
        let mut out = GenPoly::zero();
        for (g, p) in x.terms() {
            out += &self.image(*g)?.mul_poly(&outer_shift(p, &lam));
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let doc = DerivationDoc {
            degree: self.degree,
            images: self
                .images
                .iter()
                .flat_map(|(g, img)| {
                    img.terms().map(move |(t, p)| ImageDoc {
                        source: g.to_string(),
                        target: t.to_string(),
                        coeff: p.to_string(),
                    })
                })
                .collect(),
            zero: self
                .images
                .iter()
                .filter(|(_, img)| img.is_zero())
                .map(|(g, _)| g.to_string())
                .collect(),
        };
        toml::to_string(&doc).expect("derivation document serializes")
    }

    pub fn from_text(s: &str) -> Result<DerivationSpec, DerError> {
        let doc: DerivationDoc = toml::from_str(s).map_err(|e| DerError::Document(e.to_string()))?;
        let mut out = DerivationSpec::new(doc.degree);
        for g in &doc.zero {
            out.images.insert(parse_generator(g)?, GenPoly::zero());
        }
        for im in &doc.images {
            let src = parse_generator(&im.source)?;
            let tgt = parse_generator(&im.target)?;
            let p: MPoly = im.coeff.parse()?;
            out.images.entry(src).or_default().add_term(tgt, &p);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct DerivationDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degree: Option<i64>,
    #[serde(default)]
    zero: Vec<String>,
    #[serde(default)]
    images: Vec<ImageDoc>,
}

#[derive(Serialize, Deserialize)]
struct ImageDoc {
    source: String,
    target: String,
    coeff: String,
}

/// Parses `L_3`, `M_-2`.
pub fn parse_generator(s: &str) -> Result<Generator, DerError> {
    let bad = || DerError::Document(format!("bad generator `{s}`"));
    let (fam, idx) = s.trim().split_once('_').ok_or_else(bad)?;
    let mut chars = fam.chars();
    let (Some(ch), None) = (chars.next(), chars.next()) else {
        return Err(bad());
    };
    Ok(Generator::new(Family(ch), idx.parse().map_err(|_| bad())?))
}

fn homogeneous_index(x: &Element) -> Option<i64> {
    let idx = x.indices();
    match idx.as_slice() {
        [] => None,
        [first, rest @ ..] => rest.iter().all(|k| k == first).then_some(*first),
    }
}

/// `ad_x`, recorded on every generator `X_i` with `|i| ≤ window`.
pub fn ad(algebra: &AlgebraSpec, x: &Element, window: i64) -> Result<DerivationSpec, DerError> {
    let mut out = DerivationSpec::new(homogeneous_index(x));
    for &f in &algebra.families {
        for i in -window..=window {
            let g = Generator::new(f, algebra.sample_index(i));
            out.images.insert(g, bracket(algebra, x, &GenPoly::gen(g))?);
        }
    }
    Ok(out)
}

/// A finitely supported scalar sequence `(a_c)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SeqC(BTreeMap<i64, Scalar>);

impl SeqC {
    pub fn new<I: IntoIterator<Item = (i64, Scalar)>>(entries: I) -> Self {
        SeqC(entries.into_iter().filter(|e| !e.1.is_zero()).collect())
    }

    /// `value` at position `c`, zero elsewhere.
    pub fn delta(c: i64, value: Scalar) -> Self {
        SeqC::new([(c, value)])
    }

    pub fn entries(&self) -> impl Iterator<Item = (&i64, &Scalar)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

/// `L_i ↦ Σ a_c M_{i+c}`, every other generator to zero; recorded for
/// `|i| ≤ window`.
pub fn d_vec(algebra: &AlgebraSpec, a: &SeqC, window: i64) -> DerivationSpec {
    let degree = match a.0.len() {
        0 => Some(0),
        1 => a.0.keys().next().copied(),
        _ => None,
    };
    let mut out = DerivationSpec::new(degree);
    for &f in &algebra.families {
        for i in -window..=window {
            let mut img = GenPoly::zero();
            if f == Family::L {
                for (c, v) in a.entries() {
                    img.add_term(Generator::new(Family::M, i + c), &MPoly::constant(v.clone()));
                }
            }
            out.images.insert(Generator::new(f, i), img);
        }
    }
    out
}

/// `D_λ([x μ y]) - [(D_λ x)_{λ+μ} y] - [x μ (D_λ y)]`.
pub fn leibniz_residual(
    algebra: &AlgebraSpec,
    d: &DerivationSpec,
    x: Generator,
    y: Generator,
) -> Result<GenPoly, DerError> {
    let lam = MPoly::var(Var::LAMBDA);
    let mu = MPoly::var(Var::MU);
    let (gx, gy) = (GenPoly::gen(x), GenPoly::gen(y));
    let inner = bracket_at(algebra, &gx, &gy, &mu)?;
    let lhs = d.apply(&inner)?;
    let t1 = bracket_at(algebra, d.image(x)?, &gy, &(&lam + &mu))?;
    let t2 = bracket_at(algebra, &gx, d.image(y)?, &mu)?;
    Ok(&(&lhs - &t1) - &t2)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerResidual {
    pub pair: (Generator, Generator),
    pub residual: GenPoly,
}

#[derive(Debug, Clone, Default)]
pub struct DerReport {
    pub checked: usize,
    pub nonzero: Vec<DerResidual>,
}

impl DerReport {
    pub fn all_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}

/// Generator pairs `(X_i, Z_j)` with `|i|, |j|, |i+j| ≤ window`.
pub fn window_pairs(algebra: &AlgebraSpec, window: i64) -> Vec<(Generator, Generator)> {
    let mut out = Vec::new();
    for &x in &algebra.families {
        for &y in &algebra.families {
            for i in -window..=window {
                for j in -window..=window {
                    if (i + j).abs() <= window {
                        out.push((Generator::new(x, i), Generator::new(y, j)));
                    }
                }
            }
        }
    }
    if algebra.sample_index(1) == 0 {
        out.retain(|(x, y)| x.index == 0 && y.index == 0);
        out.dedup();
    }
    out
}

/// The Leibniz rule on every generator pair inside the window.
pub fn check_derivation(algebra: &AlgebraSpec, d: &DerivationSpec, window: i64) -> Result<DerReport, DerError> {
    let mut rep = DerReport::default();
    for (x, y) in window_pairs(algebra, window) {
        rep.checked += 1;
        let r = leibniz_residual(algebra, d, x, y)?;
        if !r.is_zero() {
            rep.nonzero.push(DerResidual { pair: (x, y), residual: r });
        }
    }
    Ok(rep)
}

/// Column layout for derivations of a fixed degree: one column per
/// coefficient of `∂^p λ^q` in the `W_{i+c}` component of `D(X_i)`.
#[derive(Debug, Clone)]
pub struct Coordinates {
    pub degree_c: i64,
    pub degree_bound: u32,
    pub window: i64,
    columns: Vec<(Generator, Family, u32, u32)>,
    index: BTreeMap<(Generator, Family, u32, u32), usize>,
}

impl Coordinates {
    pub fn new(algebra: &AlgebraSpec, degree_c: i64, degree_bound: u32, window: i64) -> Self {
        let mut columns = Vec::new();
        for &f in &algebra.families {
            for i in -window..=window {
                for &w in &algebra.families {
                    for p in 0..=degree_bound {
                        for q in 0..=(degree_bound - p) {
                            columns.push((Generator::new(f, i), w, p, q));
                        }
                    }
                }
            }
        }
        let index = columns.iter().enumerate().map(|(k, c)| (*c, k)).collect();
        Coordinates {
            degree_c,
            degree_bound,
            window,
            columns,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    fn var(k: usize) -> Var {
        Var::new(&format!("u{k}"))
    }

    /// The derivation whose coefficients are the unknowns `u0, u1, ...`.
    fn symbolic(&self) -> DerivationSpec {
        let mut out = DerivationSpec::new(Some(self.degree_c));
        let d = MPoly::var(Var::D);
        let l = MPoly::var(Var::LAMBDA);
        for (k, (g, w, p, q)) in self.columns.iter().enumerate() {
            let mono = &d.pow(*p) * &l.pow(*q);
            out.images
                .entry(*g)
                .or_default()
                .add_term(Generator::new(*w, g.index + self.degree_c), &(&mono * &MPoly::var(Self::var(k))));
        }
        out
    }

    /// Coordinates of a degree `c` derivation, or `None` when an image
    /// leaves the coordinate space.
    pub fn vector(&self, d: &DerivationSpec) -> Result<Option<Vec<Scalar>>, DerError> {
        let mut v = vec![Scalar::zero(); self.len()];
        let gens: BTreeSet<Generator> = self.columns.iter().map(|c| c.0).collect();
        for g in gens {
            for (t, p) in d.image(g)?.terms() {
                if t.index != g.index + self.degree_c {
                    return Ok(None);
                }
                for (m, s) in p.terms() {
                    let (pd, pl) = (m.exponent(Var::D), m.exponent(Var::LAMBDA));
                    if m.degree() != pd + pl {
                        return Ok(None);
                    }
                    match self.index.get(&(g, t.family, pd, pl)) {
                        Some(&k) => v[k] = s.clone(),
                        None => return Ok(None),
                    }
                }
            }
        }
        Ok(Some(v))
    }

    /// The derivation with the given coordinates.
    pub fn derivation(&self, v: &[Scalar]) -> DerivationSpec {
        let mut out = DerivationSpec::new(Some(self.degree_c));
        let d = MPoly::var(Var::D);
        let l = MPoly::var(Var::LAMBDA);
        for (k, (g, w, p, q)) in self.columns.iter().enumerate() {
            let entry = out.images.entry(*g).or_default();
            if !v[k].is_zero() {
                let mono = (&d.pow(*p) * &l.pow(*q)).scale(&v[k]);
                entry.add_term(Generator::new(*w, g.index + self.degree_c), &mono);
            }
        }
        out
    }
}

/// Splits a polynomial that is affine in `u0, u1, ...` into a sparse row and
/// a constant.
fn affine_row(p: &MPoly, unknowns: &BTreeMap<Var, usize>) -> Result<(SparseRow, Scalar), DerError> {
    let mut row = BTreeMap::new();
    let mut constant = Scalar::zero();
    for (m, s) in p.terms() {
        match m.pairs() {
            [] => constant = s.clone(),
            [(v, 1)] if unknowns.contains_key(v) => {
                row.insert(unknowns[v], s.clone());
            }
            _ => return Err(DerError::NotLinear(p.to_string())),
        }
    }
    Ok((row.into_iter().collect(), constant))
}

/// Coefficients over `∂, λ, μ` of every generator component.
fn component_equations(r: &GenPoly) -> Vec<MPoly> {
    r.terms()
        .flat_map(|(_, p)| p.coefficients(&[Var::D, Var::LAMBDA, Var::MU]).into_values())
        .collect()
}

/// Outcome of [`solve_graded_derivations`].
#[derive(Debug, Clone)]
pub struct DerivationSolve {
    pub coordinates: Coordinates,
    pub equations: usize,
    /// Basis of all degree `c` derivations on the window.
    pub basis: Vec<Vec<Scalar>>,
    /// Rank of `ad(∂^k X_c)` for `k < degree_bound`.
    pub inner_dim: usize,
    /// Whether every inner vector lies in the solution space.
    pub inner_contained: bool,
}

impl DerivationSolve {
    pub fn solution_dim(&self) -> usize {
        self.basis.len()
    }

    /// `dim(solutions) - dim(inner)`.
    pub fn quotient_dim(&self) -> i64 {
        self.solution_dim() as i64 - self.inner_dim as i64
    }

    pub fn basis_derivations(&self) -> Vec<DerivationSpec> {
        self.basis.iter().map(|v| self.coordinates.derivation(v)).collect()
    }
}

fn require_numeric(algebra: &AlgebraSpec) -> Result<(), DerError> {
    match algebra.parameters().first() {
        Some(p) => Err(DerError::NotNumeric(p.name().to_string())),
        None => Ok(()),
    }
}

/// All degree `c` derivations whose images have `∂, λ` degree at most
/// `degree_bound` on generators `|i| ≤ window`, with the Leibniz rule imposed
/// on every pair inside the window.
pub fn solve_graded_derivations(
    algebra: &AlgebraSpec,
    degree_c: i64,
    degree_bound: u32,
    window: i64,
) -> Result<DerivationSolve, DerError> {
    require_numeric(algebra)?;
    let coords = Coordinates::new(algebra, degree_c, degree_bound, window);
    let unknowns: BTreeMap<Var, usize> = (0..coords.len()).map(|k| (Coordinates::var(k), k)).collect();
    let sym = coords.symbolic();
    let mut ech = RowEchelon::new(coords.len());
    let mut equations = 0;
    for (x, y) in window_pairs(algebra, window) {
        for eq in component_equations(&leibniz_residual(algebra, &sym, x, y)?) {
            let (row, constant) = affine_row(&eq, &unknowns)?;
            debug_assert!(constant.is_zero());
            equations += 1;
            ech.insert(row);
        }
    }
    let basis = ech.kernel_basis();

    let mut inner = RowEchelon::new(coords.len());
    let mut span = RowEchelon::new(coords.len());
    for v in &basis {
        span.insert(crate::exactpoly::to_sparse(v));
    }
    let mut inner_contained = true;
    for &f in &algebra.families {
        for k in 0..degree_bound {
            let x = GenPoly::term(
                Generator::new(f, algebra.sample_index(degree_c)),
                MPoly::var(Var::D).pow(k),
            );
            let Some(v) = coords.vector(&ad(algebra, &x, window)?)? else {
                return Err(DerError::DegreeBoundExceeded(degree_bound));
            };
            let sparse = crate::exactpoly::to_sparse(&v);
            inner.insert(sparse.clone());
            inner_contained &= span.reduce(sparse).is_empty();
        }
    }
    Ok(DerivationSolve {
        coordinates: coords,
        equations,
        basis,
        inner_dim: inner.rank(),
        inner_contained,
    })
}

/// `D = ad(x) + q·d_vec(δ_c)` with `x` of index `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub x: Element,
    /// Coefficient of `d_vec(δ_c)`; `None` when that map is not a
    /// derivation of the algebra.
    pub q: Option<Scalar>,
}

/// Writes a degree `c` derivation as `ad(x) + q·d_vec(δ_c)`, where `x` has
/// coefficients of degree below `degree_bound`. The `d_vec` term is offered
/// only when `d_vec(δ_c)` passes the Leibniz check on the window.
pub fn decompose(
    algebra: &AlgebraSpec,
    d: &DerivationSpec,
    degree_c: i64,
    degree_bound: u32,
    window: i64,
) -> Result<Decomposition, DerError> {
    let c = algebra.sample_index(degree_c);
    let mut unknowns = BTreeMap::new();
    let mut x = GenPoly::zero();
    for &f in &algebra.families {
        for k in 0..degree_bound {
            let v = Var::new(&format!("x{}{k}", f.0.to_ascii_lowercase()));
            unknowns.insert(v, unknowns.len());
            x.add_term(Generator::new(f, c), &(&MPoly::var(Var::D).pow(k) * &MPoly::var(v)));
        }
    }
    let delta = d_vec(algebra, &SeqC::delta(c, Scalar::one()), window);
    let with_q = algebra.has_family(Family::M) && check_derivation(algebra, &delta, window)?.all_zero();
    let q_var = Var::new("q");
    if with_q {
        unknowns.insert(q_var, unknowns.len());
    }
    let model = ad(algebra, &x, window)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for g in model.generators() {
        let mut diff = d.image(g)? - model.image(g)?;
        if with_q {
            diff -= &delta.image(g)?.mul_poly(&MPoly::var(q_var));
        }
        for (_, p) in diff.terms() {
            for eq in p.coefficients(&[Var::D, Var::LAMBDA]).into_values() {
                let (row, constant) = affine_row(&eq, &unknowns)?;
                let mut dense = vec![Scalar::zero(); unknowns.len()];
                for (k, s) in row {
                    dense[k] = s;
                }
                // diff = constant + row·u = 0
                rows.push(dense);
                rhs.push(MPoly::constant(-constant));
            }
        }
    }
    if rows.is_empty() {
        return Ok(Decomposition {
            x: GenPoly::zero(),
            q: with_q.then(Scalar::zero),
        });
    }
    let sol = match linear_solve(&rows, &rhs) {
        Ok(s) => s,
        Err(PolyError::Inconsistent) => return Err(DerError::NotDecomposable),
        Err(e) => return Err(e.into()),
    };
    if !sol.kernel_basis.is_empty() {
        return Err(DerError::NotUnique(sol.kernel_basis.len()));
    }
    let value = |v: &Var| sol.solution[unknowns[v]].as_constant().expect("numeric solution");
    let mut out = GenPoly::zero();
    for (g, p) in x.terms() {
        let subs: Vec<(Var, MPoly)> = p
            .vars()
            .into_iter()
            .filter(|v| unknowns.contains_key(v))
            .map(|v| (v, MPoly::constant(value(&v))))
            .collect();
        out.add_term(*g, &p.substitute_all(&subs));
    }
    Ok(Decomposition {
        x: out,
        q: with_q.then(|| value(&q_var)),
    })
}

#[cfg(test)]
mod tests;
