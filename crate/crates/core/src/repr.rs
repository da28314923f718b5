//! Conformal modules: rank one modules `C[∂]v` and graded intermediate
//! series modules `⊕ C[∂]v_m`, the module axiom checker, and the
//! classification and reducibility searches built on top of them.
//!
//! A module is described by its structure coefficients: `X_i λ v_m =
//! F_X(i, m)(∂, λ) v_{i+m}` (for rank one modules the basis index is
//! ignored and `v_{i+m}` is just `v`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{MPoly, PolyError, Scalar, Var};
use crate::lca::{AlgebraSpec, Element, Family, LcaError};
use crate::solve::SolveError;

mod classify;
mod witness;

pub use classify::{
    classify_graded, classify_rank1, Classification, ClassifyOptions, ExtensionShape, FamilyOutcome,
    StepRecord,
};
pub use witness::{reducibility_witness, WitnessOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReprError {
    #[error("bit sequence covers [{have_lo}, {have_hi}] but [{need_lo}, {need_hi}] is needed")]
    WindowTooSmall {
        need_lo: i64,
        need_hi: i64,
        have_lo: i64,
        have_hi: i64,
    },
    #[error("parameter `{0}` must be a number or a single symbol to raise it to a negative power")]
    UnsupportedParameter(String),
    #[error("algebra parameters must be numeric for classification, found `{0}`")]
    NotNumeric(String),
    #[error("solution reaches the degree bound {0}; rerun with a larger bound")]
    DegreeBoundExceeded(u32),
    #[error("elimination got stuck in step `{0}`")]
    Stuck(String),
    #[error("invalid module document: {0}")]
    Document(String),
    #[error(transparent)]
    Lca(#[from] LcaError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Index window: generators `X_i` with `|i| ≤ k`, basis vectors `v_m` with
/// `|m| ≤ n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub n: i64,
    pub k: i64,
}

impl Default for Window {
    fn default() -> Self {
        Window { n: 3, k: 2 }
    }
}

impl Window {
    pub fn basis(&self) -> std::ops::RangeInclusive<i64> {
        -self.n..=self.n
    }

    pub fn generators(&self) -> std::ops::RangeInclusive<i64> {
        -self.k..=self.k
    }

    fn in_basis(&self, m: i64) -> bool {
        m.abs() <= self.n
    }

    /// Index triples `(i, j, m)` whose generators and basis vectors all stay
    /// inside the window.
    pub fn triples(&self, graded: bool) -> Vec<(i64, i64, i64)> {
        let mut out = Vec::new();
        for i in self.generators() {
            for j in self.generators() {
                if (i + j).abs() > self.k {
                    continue;
                }
                if !graded {
                    out.push((i, j, 0));
                    continue;
                }
                for m in self.basis() {
                    if [i + m, j + m, i + j + m].iter().all(|x| self.in_basis(*x)) {
                        out.push((i, j, m));
                    }
                }
            }
        }
        out
    }
}

/// A 0/1 sequence on the integer interval `[lo, lo + len)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSeq {
    lo: i64,
    bits: Vec<bool>,
}

impl BitSeq {
    pub fn new(lo: i64, bits: Vec<bool>) -> Self {
        BitSeq { lo, bits }
    }

    /// Parses a `0`/`1` string starting at index `lo`.
    pub fn parse(lo: i64, s: &str) -> Result<Self, ReprError> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(ReprError::Document(format!("bad bit `{ch}` in `{s}`"))),
            })
            .collect::<Result<_, _>>()?;
        Ok(BitSeq { lo, bits })
    }

    pub fn random<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> Self {
        BitSeq {
            lo,
            bits: (lo..=hi).map(|_| rng.gen_bool(0.5)).collect(),
        }
    }

    pub fn constant(lo: i64, hi: i64, bit: bool) -> Self {
        BitSeq {
            lo,
            bits: vec![bit; (hi - lo + 1).max(0) as usize],
        }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.bits.len() as i64 - 1
    }

    pub fn get(&self, i: i64) -> Option<bool> {
        if i < self.lo {
            return None;
        }
        self.bits.get((i - self.lo) as usize).copied()
    }

    pub fn is_constant(&self) -> bool {
        self.bits.windows(2).all(|w| w[0] == w[1])
    }
}

impl fmt::Display for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModuleKind {
    /// `L_i λ v = c^i(∂+αλ+β)v`.
    RankOne,
    /// `L_i λ v_m = (∂+αλ+β)v_{i+m}`.
    Vab,
    /// The four-case action selected by a bit sequence.
    VAb,
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModuleKind::RankOne => "rank-one",
            ModuleKind::Vab => "vab",
            ModuleKind::VAb => "vab-bits",
        })
    }
}

impl FromStr for ModuleKind {
    type Err = ReprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rank-one" | "rank1" => Ok(ModuleKind::RankOne),
            "vab" => Ok(ModuleKind::Vab),
            "vab-bits" | "vAb" => Ok(ModuleKind::VAb),
            _ => Err(ReprError::Document(format!("unknown module kind `{s}`"))),
        }
    }
}

/// Anything that provides structure coefficients.
pub trait Action {
    /// Coefficient of `X_i λ v_m`, a polynomial in `∂, λ`.
    fn coeff(&self, fam: Family, i: i64, m: i64) -> Result<MPoly, ReprError>;
    /// Whether generator `X_i` moves `v_m` to `v_{i+m}`.
    fn graded(&self) -> bool;

    fn target(&self, i: i64, m: i64) -> i64 {
        if self.graded() {
            i + m
        } else {
            0
        }
    }
}

/// A concrete module from one of the standard families. The family receiving
/// the extra constant action (`Y` over `CSV`, `M` over `CHV`) is stored in
/// `extension`; its coefficient is `d0·c^i` (rank one) or `d0` (graded).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleSpec {
    pub kind: ModuleKind,
    pub alpha: MPoly,
    pub beta: MPoly,
    pub c: MPoly,
    pub d0: MPoly,
    pub extension: Option<Family>,
    pub bits: Option<BitSeq>,
}

fn default_extension(algebra: &AlgebraSpec) -> Option<Family> {
    if algebra.has_family(Family::Y) {
        Some(Family::Y)
    } else if algebra.has_family(Family::M) {
        Some(Family::M)
    } else {
        None
    }
}

/// `M_{α,β,c}` extended by `d0·c^i` on the algebra's extension family.
pub fn build_rank1(
    algebra: &AlgebraSpec,
    alpha: impl Into<MPoly>,
    beta: impl Into<MPoly>,
    c: impl Into<MPoly>,
    d0: impl Into<MPoly>,
) -> ModuleSpec {
    ModuleSpec {
        kind: ModuleKind::RankOne,
        alpha: alpha.into(),
        beta: beta.into(),
        c: c.into(),
        d0: d0.into(),
        extension: default_extension(algebra),
        bits: None,
    }
}

/// Base of a graded intermediate series module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GradedBase {
    Vab { alpha: MPoly },
    VAb { bits: BitSeq },
}

/// `V_{α,β,d0}` or `V_{A,β,d0}`. A bit sequence must cover
/// `[-n-k, n+k]` so every action from the window is defined.
pub fn build_graded(
    algebra: &AlgebraSpec,
    base: GradedBase,
    beta: impl Into<MPoly>,
    d0: impl Into<MPoly>,
    window: Window,
) -> Result<ModuleSpec, ReprError> {
    let mut spec = build_graded_unchecked(base, beta.into(), window)?;
    spec.d0 = d0.into();
    spec.extension = default_extension(algebra);
    Ok(spec)
}

/// The `L`-part of a graded module, with no extension.
pub(crate) fn build_graded_unchecked(base: GradedBase, beta: MPoly, window: Window) -> Result<ModuleSpec, ReprError> {
    let (kind, alpha, bits) = match base {
        GradedBase::Vab { alpha } => (ModuleKind::Vab, alpha, None),
        GradedBase::VAb { bits } => {
            let (lo, hi) = (-window.n - window.k, window.n + window.k);
            if bits.lo() > lo || bits.hi() < hi {
                return Err(ReprError::WindowTooSmall {
                    need_lo: lo,
                    need_hi: hi,
                    have_lo: bits.lo(),
                    have_hi: bits.hi(),
                });
            }
            (ModuleKind::VAb, MPoly::zero(), Some(bits))
        }
    };
    Ok(ModuleSpec {
        kind,
        alpha,
        beta,
        c: MPoly::one(),
        d0: MPoly::zero(),
        extension: None,
        bits,
    })
}

/// Name of the variable standing for `v^{-1}`.
fn inverse_name(name: &str) -> String {
    format!("{name}_inv")
}

/// `c^i` for a numeric or single-symbol `c`. Negative powers of a symbol use
/// the companion variable `c_inv`; `0^i` is taken to be `0` for `i ≠ 0`.
pub fn index_power(c: &MPoly, i: i64) -> Result<MPoly, ReprError> {
    if let Some(s) = c.as_constant() {
        if s.is_zero() {
            return Ok(if i == 0 { MPoly::one() } else { MPoly::zero() });
        }
        return Ok(MPoly::constant(s.pow(i)?));
    }
    let vars = c.vars();
    if vars.len() == 1 {
        let v = *vars.iter().next().unwrap();
        if c == &MPoly::var(v) {
            if i >= 0 {
                return Ok(c.pow(i as u32));
            }
            let inv = Var::new(&inverse_name(&v.name()));
            return Ok(MPoly::var(inv).pow((-i) as u32));
        }
    }
    if i >= 0 {
        Ok(c.pow(i as u32))
    } else {
        Err(ReprError::UnsupportedParameter(c.to_string()))
    }
}

/// Cancels `v · v_inv = 1` in every term.
pub fn laurent_reduce(p: &MPoly) -> MPoly {
    let pairs: Vec<(Var, Var)> = p
        .vars()
        .into_iter()
        .filter_map(|w| {
            let name = w.name();
            name.strip_suffix("_inv").map(|base| (Var::new(base), w))
        })
        .collect();
    if pairs.is_empty() {
        return p.clone();
    }
    MPoly::from_terms(p.terms().map(|(m, c)| {
        let mut exps: Vec<(Var, u32)> = m.pairs().to_vec();
        for (v, w) in &pairs {
            let e = m.exponent(*v);
            let f = m.exponent(*w);
            let k = e.min(f);
            if k > 0 {
                for x in exps.iter_mut() {
                    if x.0 == *v || x.0 == *w {
                        x.1 -= k;
                    }
                }
            }
        }
        (crate::exactpoly::Monomial::from_pairs(exps), c.clone())
    }))
}

impl ModuleSpec {
    fn l_coeff(&self, i: i64, m: i64) -> Result<MPoly, ReprError> {
        let d = MPoly::var(Var::D);
        let l = MPoly::var(Var::LAMBDA);
        let db = &d + &self.beta;
        match self.kind {
            ModuleKind::RankOne => {
                let base = &db + &(&self.alpha * &l);
                Ok(&index_power(&self.c, i)? * &base)
            }
            ModuleKind::Vab => Ok(&db + &(&self.alpha * &l)),
            ModuleKind::VAb => {
                let bits = self.bits.as_ref().expect("bit sequence present");
                let at = |x: i64| {
                    bits.get(x).ok_or(ReprError::WindowTooSmall {
                        need_lo: x.min(bits.lo()),
                        need_hi: x.max(bits.hi()),
                        have_lo: bits.lo(),
                        have_hi: bits.hi(),
                    })
                };
                Ok(match (at(m)?, at(i + m)?) {
                    (false, false) => db,
                    (true, true) => &db + &l,
                    (false, true) => MPoly::one(),
                    (true, false) => &db * &(&db + &l),
                })
            }
        }
    }

    /// Every structure coefficient on the window, keyed by
    /// `(family, generator index, basis index)`.
    pub fn action_table(
        &self,
        families: &[Family],
        window: Window,
    ) -> Result<BTreeMap<(Family, i64, i64), MPoly>, ReprError> {
        let ms: Vec<i64> = if self.graded() {
            window.basis().collect()
        } else {
            vec![0]
        };
        let mut out = BTreeMap::new();
        for &f in families {
            for i in window.generators() {
                for &m in &ms {
                    out.insert((f, i, m), self.coeff(f, i, m)?);
                }
            }
        }
        Ok(out)
    }

    pub fn to_text(&self) -> String {
        let doc = ModuleDoc {
            kind: self.kind.to_string(),
            alpha: self.alpha.to_string(),
            beta: self.beta.to_string(),
            c: self.c.to_string(),
            d0: self.d0.to_string(),
            extension: self.extension.map(|f| f.0.to_string()),
            bits: self.bits.as_ref().map(|b| b.to_string()),
            bits_start: self.bits.as_ref().map(|b| b.lo()),
        };
        toml::to_string(&doc).expect("module document serializes")
    }

    pub fn from_text(s: &str) -> Result<ModuleSpec, ReprError> {
        let doc: ModuleDoc = toml::from_str(s).map_err(|e| ReprError::Document(e.to_string()))?;
        let parse = |x: &str| x.parse::<MPoly>().map_err(ReprError::from);
        let kind: ModuleKind = doc.kind.parse()?;
        let bits = match (doc.bits, doc.bits_start) {
            (Some(b), Some(lo)) => Some(BitSeq::parse(lo, &b)?),
            (None, _) => None,
            (Some(_), None) => return Err(ReprError::Document("`bits` needs `bits_start`".into())),
        };
        if kind == ModuleKind::VAb && bits.is_none() {
            return Err(ReprError::Document("kind `vab-bits` needs `bits`".into()));
        }
        let extension = match doc.extension.as_deref() {
            None => None,
            Some(s) if s.chars().count() == 1 => Some(Family(s.chars().next().unwrap())),
            Some(s) => return Err(ReprError::Document(format!("bad family `{s}`"))),
        };
        Ok(ModuleSpec {
            kind,
            alpha: parse(&doc.alpha)?,
            beta: parse(&doc.beta)?,
            c: parse(&doc.c)?,
            d0: parse(&doc.d0)?,
            extension,
            bits,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModuleDoc {
    kind: String,
    #[serde(default = "zero_text")]
    alpha: String,
    #[serde(default = "zero_text")]
    beta: String,
    #[serde(default = "one_text")]
    c: String,
    #[serde(default = "zero_text")]
    d0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    extension: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bits: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bits_start: Option<i64>,
}

fn zero_text() -> String {
    "0".into()
}

fn one_text() -> String {
    "1".into()
}

impl Action for ModuleSpec {
    fn coeff(&self, fam: Family, i: i64, m: i64) -> Result<MPoly, ReprError> {
        if fam == Family::L {
            return self.l_coeff(i, m);
        }
        if Some(fam) == self.extension {
            return Ok(match self.kind {
                ModuleKind::RankOne => &self.d0 * &index_power(&self.c, i)?,
                _ => self.d0.clone(),
            });
        }
        Ok(MPoly::zero())
    }

    fn graded(&self) -> bool {
        self.kind != ModuleKind::RankOne
    }
}

/// `F(∂ + shift, lam)`.
fn shifted(f: &MPoly, shift: &MPoly, lam: &MPoly) -> MPoly {
    f.substitute_all(&[
        (Var::D, &MPoly::var(Var::D) + shift),
        (Var::LAMBDA, lam.clone()),
    ])
}

/// `A_i λ (B_j μ v_m) - B_j μ (A_i λ v_m) - [A_i λ B_j]_{λ+μ} v_m` as a
/// polynomial in `∂, λ, μ`.
pub fn module_residual<A: Action + ?Sized>(
    algebra: &AlgebraSpec,
    module: &A,
    x: Family,
    i: i64,
    y: Family,
    j: i64,
    m: i64,
) -> Result<MPoly, ReprError> {
    let zero = MPoly::zero();
    let lam = MPoly::var(Var::LAMBDA);
    let mu = MPoly::var(Var::MU);
    let nu = &lam + &mu;
    let fb = module.coeff(y, j, m)?;
    let fa_after = module.coeff(x, i, module.target(j, m))?;
    let t1 = &shifted(&fb, &lam, &mu) * &fa_after;
    let fa = module.coeff(x, i, m)?;
    let fb_after = module.coeff(y, j, module.target(i, m))?;
    let t2 = &shifted(&fa, &mu, &lam) * &shifted(&fb_after, &zero, &mu);
    let mut rhs = MPoly::zero();
    for t in algebra.bracket_terms(x, y) {
        let outer = t.template.substitute(Var::D, &-&nu);
        let ft = module.coeff(t.target, i + j, m)?;
        rhs += &(&outer * &shifted(&ft, &zero, &nu));
    }
    Ok(laurent_reduce(&(&(&t1 - &t2) - &rhs)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleResidual {
    pub pair: (Family, Family),
    pub i: i64,
    pub j: i64,
    pub m: i64,
    pub residual: MPoly,
}

#[derive(Debug, Clone, Default)]
pub struct ModuleReport {
    pub checked: usize,
    pub nonzero: Vec<ModuleResidual>,
}

impl ModuleReport {
    pub fn all_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}

/// The module axiom for every ordered family pair and every index triple
/// inside the window.
pub fn check_module_axioms<A: Action + ?Sized>(
    algebra: &AlgebraSpec,
    module: &A,
    window: Window,
) -> Result<ModuleReport, ReprError> {
    let mut rep = ModuleReport::default();
    for (i, j, m) in window.triples(module.graded()) {
        for &x in &algebra.families {
            for &y in &algebra.families {
                rep.checked += 1;
                let r = module_residual(algebra, module, x, i, y, j, m)?;
                if !r.is_zero() {
                    rep.nonzero.push(ModuleResidual {
                        pair: (x, y),
                        i,
                        j,
                        m,
                        residual: r,
                    });
                }
            }
        }
    }
    Ok(rep)
}

/// A module element `Σ p_m(∂) v_m`, or with coefficients in `∂, λ` the value
/// of a λ-action.
pub type ModElement = BTreeMap<i64, MPoly>;

/// `x λ w` extended from generators by `(p(∂)X) λ (q(∂)v) = p(-λ) q(∂+λ) X λ v`.
pub fn act<A: Action + ?Sized>(module: &A, x: &Element, w: &ModElement) -> Result<ModElement, ReprError> {
    let lam = MPoly::var(Var::LAMBDA);
    let mut out = ModElement::new();
    for (g, p) in x.terms() {
        let p_eval = p.substitute(Var::D, &-&lam);
        for (&m, q) in w {
            let f = module.coeff(g.family, g.index, m)?;
            let term = &(&p_eval * &q.substitute(Var::D, &(&MPoly::var(Var::D) + &lam))) * &f;
            let slot = out.entry(module.target(g.index, m)).or_default();
            *slot += &laurent_reduce(&term);
        }
    }
    out.retain(|_, p| !p.is_zero());
    Ok(out)
}

/// Residuals of the five structure-coefficient relations for a graded module
/// over `CSV(a,b)`, written out directly from `f = L`, `g = M`, `h = Y`
/// coefficients. Serves as an independent check of [`check_module_axioms`].
#[derive(Debug, Clone, Default)]
pub struct OracleReport {
    pub checked: usize,
    /// `(relation, i, j, m, residual)` for every nonzero residual.
    pub nonzero: Vec<(&'static str, i64, i64, i64, MPoly)>,
}

impl OracleReport {
    pub fn all_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}

pub fn relations_oracle<A: Action + ?Sized>(
    a: &MPoly,
    b: &MPoly,
    module: &A,
    window: Window,
) -> Result<OracleReport, ReprError> {
    let zero = MPoly::zero();
    let lam = MPoly::var(Var::LAMBDA);
    let mu = MPoly::var(Var::MU);
    let nu = &lam + &mu;
    let half = Scalar::ratio(1, 2);
    let f = |i, m| module.coeff(Family::L, i, m);
    let g = |i, m| module.coeff(Family::M, i, m);
    let h = |i, m| module.coeff(Family::Y, i, m);
    // u_{j,m}(∂+λ,μ) w_{i,j+m}(∂,λ) - w_{i,m}(∂+μ,λ) u_{j,i+m}(∂,μ)
    let commutator = |u: &dyn Fn(i64, i64) -> Result<MPoly, ReprError>,
                      w: &dyn Fn(i64, i64) -> Result<MPoly, ReprError>,
                      i: i64,
                      j: i64,
                      m: i64|
     -> Result<MPoly, ReprError> {
        let left = &shifted(&u(j, m)?, &lam, &mu) * &w(i, j + m)?;
        let right = &shifted(&w(i, m)?, &mu, &lam) * &shifted(&u(j, i + m)?, &zero, &mu);
        Ok(&left - &right)
    };
    let lm_factor = &(&(&(a - &MPoly::one()) * &lam) - &mu) + b;
    let ly_factor = &(&(&a.scale(&half) * &lam) - &mu) + &b.scale(&half);
    let yy_factor = &lam - &mu;
    let mut rep = OracleReport::default();
    for (i, j, m) in window.triples(true) {
        let g_sum = shifted(&g(i + j, m)?, &zero, &nu);
        let h_sum = shifted(&h(i + j, m)?, &zero, &nu);
        let rels: [(&'static str, MPoly); 5] = [
            ("LM", &commutator(&g, &f, i, j, m)? - &(&lm_factor * &g_sum)),
            ("LY", &commutator(&h, &f, i, j, m)? - &(&ly_factor * &h_sum)),
            ("YY", &commutator(&h, &h, i, j, m)? - &(&yy_factor * &g_sum)),
            ("MY", commutator(&h, &g, i, j, m)?),
            ("MM", commutator(&g, &g, i, j, m)?),
        ];
        for (name, r) in rels {
            rep.checked += 1;
            let r = laurent_reduce(&r);
            if !r.is_zero() {
                rep.nonzero.push((name, i, j, m, r));
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests;
