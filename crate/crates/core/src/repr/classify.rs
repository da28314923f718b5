//! Guided classification of extensions of a known `L`-action.
//!
//! The `L`-coefficients are fixed to a rank one or graded base module with
//! symbolic parameters. Every other family gets unknown coefficient
//! polynomials of bounded degree in `∂, λ`. The module axiom is then imposed
//! one relation group at a time in the order used by the hand proofs:
//! self-brackets at index zero, `L_0` against index zero, `L_i` against
//! index zero, and finally every relation inside the window as a closure
//! check. Each group is eliminated exactly with [`peel`].

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::exactpoly::{MPoly, Var};
use crate::lca::{AlgebraSpec, Family};
use crate::solve::{apply_map, peel};

use super::{
    build_graded_unchecked, index_power, laurent_reduce, module_residual, Action, GradedBase, ModuleKind,
    ModuleSpec, ReprError, Window,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifyOptions {
    /// Bound on the total `∂, λ` degree of every unknown coefficient.
    pub degree: u32,
    pub window: Window,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            degree: 6,
            window: Window::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub label: String,
    pub relations: usize,
    pub equations: usize,
    pub branches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionShape {
    /// Every coefficient vanishes.
    Zero,
    /// One free constant `d0`, acting by `d0·c^i` (rank one) or `d0`
    /// (graded).
    Extension,
    /// Anything else; the coefficients are kept for inspection.
    Other,
}

impl fmt::Display for ExtensionShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionShape::Zero => "zero",
            ExtensionShape::Extension => "extension",
            ExtensionShape::Other => "other",
        })
    }
}

/// One consistent branch of the elimination.
#[derive(Debug, Clone)]
pub struct FamilyOutcome {
    pub shapes: Vec<(Family, ExtensionShape)>,
    /// Window coefficients of the non-`L` families, with the free constant
    /// of an extension renamed `d0`.
    pub coefficients: BTreeMap<(Family, i64, i64), MPoly>,
    /// Parameter polynomials assumed nonzero.
    pub nonzero: Vec<MPoly>,
    /// Equations left on the parameters alone.
    pub conditions: Vec<MPoly>,
}

impl FamilyOutcome {
    pub fn shape(&self, fam: Family) -> Option<&ExtensionShape> {
        self.shapes.iter().find(|s| s.0 == fam).map(|s| &s.1)
    }

    /// The family carrying the free constant, if this branch is an
    /// extension.
    pub fn extension_family(&self) -> Option<Family> {
        self.shapes
            .iter()
            .find(|s| s.1 == ExtensionShape::Extension)
            .map(|s| s.0)
    }

    pub fn is_clean(&self) -> bool {
        self.conditions.is_empty() && self.shapes.iter().all(|s| s.1 != ExtensionShape::Other)
    }

    /// Rebuilds the classified module from the base with `d0` symbolic.
    pub fn module(&self, base: &ModuleSpec) -> Option<ModuleSpec> {
        if !self.is_clean() || self.shapes.iter().filter(|s| s.1 == ExtensionShape::Extension).count() > 1 {
            return None;
        }
        let mut out = base.clone();
        match self.extension_family() {
            Some(f) => {
                out.extension = Some(f);
                out.d0 = MPoly::sym("d0");
            }
            None => {
                out.extension = None;
                out.d0 = MPoly::zero();
            }
        }
        Some(out)
    }
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub algebra: String,
    pub kind: ModuleKind,
    pub options: ClassifyOptions,
    /// The base module with symbolic parameters.
    pub base: ModuleSpec,
    pub steps: Vec<StepRecord>,
    pub outcomes: Vec<FamilyOutcome>,
}

impl Classification {
    /// Families that carry an extension in some clean branch.
    pub fn extension_families(&self) -> BTreeSet<Family> {
        self.outcomes
            .iter()
            .filter(|o| o.is_clean())
            .filter_map(FamilyOutcome::extension_family)
            .collect()
    }

    /// True when every branch is clean and either carries the extension on
    /// `expected` or, when `expected` is `None`, is entirely zero.
    pub fn matches(&self, expected: Option<Family>) -> bool {
        if self.outcomes.is_empty() || !self.outcomes.iter().all(FamilyOutcome::is_clean) {
            return false;
        }
        match expected {
            None => self
                .outcomes
                .iter()
                .all(|o| o.shapes.iter().all(|s| s.1 == ExtensionShape::Zero)),
            Some(f) => self.outcomes.iter().any(|o| o.extension_family() == Some(f)),
        }
    }
}

struct Unknowns<'a> {
    base: &'a ModuleSpec,
    extension: Vec<Family>,
    degree: u32,
    templates: RefCell<BTreeMap<(Family, i64, i64), MPoly>>,
    /// Total `∂, λ` degree of the monomial each unknown multiplies.
    created: RefCell<BTreeMap<Var, u32>>,
}

fn index_label(n: i64) -> String {
    if n < 0 {
        format!("n{}", -n)
    } else {
        n.to_string()
    }
}

impl<'a> Unknowns<'a> {
    fn key(&self, fam: Family, i: i64, m: i64) -> (Family, i64, i64) {
        if self.base.graded() {
            (fam, i, m)
        } else {
            (fam, i, 0)
        }
    }

    fn template(&self, fam: Family, i: i64, m: i64) -> MPoly {
        let key = self.key(fam, i, m);
        if let Some(t) = self.templates.borrow().get(&key) {
            return t.clone();
        }
        let mut t = MPoly::zero();
        let mut created = self.created.borrow_mut();
        let prefix = fam.0.to_ascii_lowercase();
        for k in 0..=self.degree {
            for l in 0..=(self.degree - k) {
                let v = Var::new(&format!(
                    "{prefix}{}_{}_{k}{l}",
                    index_label(key.1),
                    index_label(key.2)
                ));
                created.insert(v, k + l);
                let mono = &MPoly::var(Var::D).pow(k) * &MPoly::var(Var::LAMBDA).pow(l);
                t += &(&mono * &MPoly::var(v));
            }
        }
        self.templates.borrow_mut().insert(key, t.clone());
        t
    }

    fn free(&self, assign: &BTreeMap<Var, MPoly>) -> BTreeSet<Var> {
        self.created
            .borrow()
            .keys()
            .filter(|v| !assign.contains_key(v))
            .copied()
            .collect()
    }
}

struct View<'u, 'a> {
    unknowns: &'u Unknowns<'a>,
    assign: &'u BTreeMap<Var, MPoly>,
}

impl Action for View<'_, '_> {
    fn coeff(&self, fam: Family, i: i64, m: i64) -> Result<MPoly, ReprError> {
        if fam == Family::L {
            return self.unknowns.base.coeff(fam, i, m);
        }
        if !self.unknowns.extension.contains(&fam) {
            return Ok(MPoly::zero());
        }
        let t = self.unknowns.template(fam, i, m);
        Ok(laurent_reduce(&apply_map(&t, self.assign)))
    }

    fn graded(&self) -> bool {
        self.unknowns.base.graded()
    }
}

#[derive(Clone, Default)]
struct State {
    assign: BTreeMap<Var, MPoly>,
    nonzero: Vec<MPoly>,
    conditions: Vec<MPoly>,
}

type Relation = (Family, i64, Family, i64, i64);

struct Stage {
    label: String,
    groups: Vec<Vec<Relation>>,
}

/// Upper bound on simultaneously tracked branches.
const MAX_STATES: usize = 64;

struct Runner<'u, 'a> {
    algebra: &'u AlgebraSpec,
    unknowns: &'u Unknowns<'a>,
}

impl Runner<'_, '_> {
    fn equations(&self, state: &State, rels: &[Relation]) -> Result<Vec<MPoly>, ReprError> {
        let view = View {
            unknowns: self.unknowns,
            assign: &state.assign,
        };
        let mut out = Vec::new();
        for &(x, i, y, j, m) in rels {
            let r = module_residual(self.algebra, &view, x, i, y, j, m)?;
            out.extend(r.coefficients(&[Var::D, Var::LAMBDA, Var::MU]).into_values());
        }
        Ok(out)
    }

    /// Imposes one relation group on one state.
    fn impose(&self, state: &State, rels: &[Relation], label: &str) -> Result<(usize, Vec<State>), ReprError> {
        let eqs = self.equations(state, rels)?;
        let count = eqs.len();
        if eqs.iter().all(MPoly::is_zero) {
            return Ok((count, vec![state.clone()]));
        }
        let free = self.unknowns.free(&state.assign);
        let mut out = Vec::new();
        for br in peel(eqs, &free)? {
            if !br.is_solved() {
                return Err(ReprError::Stuck(label.to_string()));
            }
            let mut next = state.clone();
            for v in next.assign.values_mut() {
                *v = laurent_reduce(&apply_map(v, &br.assignments));
            }
            for (u, v) in &br.assignments {
                next.assign.insert(*u, laurent_reduce(v));
            }
            next.nonzero.extend(br.nonzero.iter().cloned());
            let mut dead = false;
            for n in next.nonzero.iter_mut() {
                *n = laurent_reduce(&apply_map(n, &br.assignments));
                dead |= n.is_zero();
            }
            if dead {
                continue;
            }
            next.conditions.extend(br.conditions.iter().cloned());
            out.push(next);
        }
        Ok((count, out))
    }

    fn run(&self, stages: &[Stage]) -> Result<(Vec<StepRecord>, Vec<State>), ReprError> {
        let mut states = vec![State::default()];
        let mut records = Vec::new();
        for stage in stages {
            let mut rec = StepRecord {
                label: stage.label.clone(),
                relations: 0,
                equations: 0,
                branches: 0,
            };
            for group in &stage.groups {
                rec.relations += group.len();
                let mut next = Vec::new();
                for st in &states {
                    let (n, out) = self.impose(st, group, &stage.label)?;
                    rec.equations += n;
                    next.extend(out);
                }
                if next.len() > MAX_STATES {
                    return Err(ReprError::Solve(crate::solve::SolveError::TooManyBranches(MAX_STATES)));
                }
                states = next;
            }
            rec.branches = states.len();
            records.push(rec);
        }
        Ok((records, states))
    }
}

/// Non-`L` families ordered so that abelian ones (zero self-bracket) come
/// first.
fn extension_order(algebra: &AlgebraSpec) -> Vec<Family> {
    let mut fams: Vec<Family> = algebra.families.iter().copied().filter(|f| *f != Family::L).collect();
    fams.sort_by_key(|f| (!algebra.bracket_terms(*f, *f).is_empty(), *f));
    fams
}

fn stages(algebra: &AlgebraSpec, ext: &[Family], window: Window, graded: bool) -> Vec<Stage> {
    let ms: Vec<i64> = if graded { window.basis().collect() } else { vec![0] };
    let inside = |i: i64, m: i64| !graded || (i + m).abs() <= window.n;
    let mut out = Vec::new();
    for &x in ext {
        out.push(Stage {
            label: format!("[{x} {x}] at index 0"),
            groups: ms.iter().map(|&m| vec![(x, 0, x, 0, m)]).collect(),
        });
        out.push(Stage {
            label: format!("[L {x}] at index 0"),
            groups: ms.iter().map(|&m| vec![(Family::L, 0, x, 0, m)]).collect(),
        });
        let mut groups = Vec::new();
        for i in window.generators().filter(|i| *i != 0) {
            for &m in &ms {
                if inside(i, m) {
                    groups.push(vec![(Family::L, i, x, 0, m)]);
                }
            }
        }
        out.push(Stage {
            label: format!("[L_i {x}_0]"),
            groups,
        });
    }
    let mut closure = Vec::new();
    for (i, j, m) in window.triples(graded) {
        for &x in &algebra.families {
            for &y in &algebra.families {
                if x == Family::L && y == Family::L {
                    continue;
                }
                closure.push(vec![(x, i, y, j, m)]);
            }
        }
    }
    out.push(Stage {
        label: "closure on the window".into(),
        groups: closure,
    });
    out
}

fn classify(algebra: &AlgebraSpec, base: ModuleSpec, opts: &ClassifyOptions) -> Result<Classification, ReprError> {
    if let Some(p) = algebra.parameters().first() {
        return Err(ReprError::NotNumeric(p.name().to_string()));
    }
    let graded = base.graded();
    let ext = extension_order(algebra);
    let unknowns = Unknowns {
        base: &base,
        extension: ext.clone(),
        degree: opts.degree,
        templates: RefCell::new(BTreeMap::new()),
        created: RefCell::new(BTreeMap::new()),
    };
    let runner = Runner {
        algebra,
        unknowns: &unknowns,
    };
    let (steps, states) = runner.run(&stages(algebra, &ext, opts.window, graded))?;

    let ms: Vec<i64> = if graded {
        opts.window.basis().collect()
    } else {
        vec![0]
    };
    let mut outcomes = Vec::new();
    for st in states {
        let view = View {
            unknowns: &unknowns,
            assign: &st.assign,
        };
        let free = unknowns.free(&st.assign);
        let mut coefficients = BTreeMap::new();
        let mut shapes = Vec::new();
        for &x in &ext {
            let mut table = BTreeMap::new();
            for i in opts.window.generators() {
                for &m in &ms {
                    if !graded || (i + m).abs() <= opts.window.n {
                        table.insert((x, i, m), view.coeff(x, i, m)?);
                    }
                }
            }
            if table.values().any(|p| p.degree_over(&[Var::D, Var::LAMBDA]) >= opts.degree) {
                return Err(ReprError::DegreeBoundExceeded(opts.degree));
            }
            let used: BTreeSet<Var> = table
                .values()
                .flat_map(|p| p.vars())
                .filter(|v| free.contains(v))
                .collect();
            let shape = if table.values().all(MPoly::is_zero) {
                ExtensionShape::Zero
            } else if used.len() == 1 {
                let t = *used.iter().next().unwrap();
                let tv = MPoly::var(t);
                let mut ok = true;
                for (&(_, i, _), p) in &table {
                    let expected = if graded {
                        tv.clone()
                    } else {
                        &tv * &index_power(&base.c, i)?
                    };
                    ok &= *p == expected;
                }
                if ok {
                    let d0 = MPoly::sym("d0");
                    for p in table.values_mut() {
                        *p = p.substitute(t, &d0);
                    }
                    ExtensionShape::Extension
                } else {
                    ExtensionShape::Other
                }
            } else {
                ExtensionShape::Other
            };
            shapes.push((x, shape));
            coefficients.extend(table);
        }
        let mut conditions = st.conditions;
        conditions.sort_by_key(|p| p.to_string());
        conditions.dedup();
        let mut nonzero = st.nonzero;
        nonzero.sort_by_key(|p| p.to_string());
        nonzero.dedup();
        outcomes.push(FamilyOutcome {
            shapes,
            coefficients,
            nonzero,
            conditions,
        });
    }
    Ok(Classification {
        algebra: algebra.name.clone(),
        kind: base.kind,
        options: *opts,
        base,
        steps,
        outcomes,
    })
}

/// Classifies rank one modules whose `L`-action is `c^i(∂+αλ+β)` with
/// symbolic `α, β, c`, over an algebra with numeric parameters.
pub fn classify_rank1(algebra: &AlgebraSpec, opts: &ClassifyOptions) -> Result<Classification, ReprError> {
    let base = ModuleSpec {
        kind: ModuleKind::RankOne,
        alpha: MPoly::sym("alpha"),
        beta: MPoly::sym("beta"),
        c: MPoly::sym("c"),
        d0: MPoly::zero(),
        extension: None,
        bits: None,
    };
    classify(algebra, base, opts)
}

/// Classifies graded modules over the given base with symbolic `β` (and
/// whatever `α` the base carries).
pub fn classify_graded(
    algebra: &AlgebraSpec,
    base: GradedBase,
    opts: &ClassifyOptions,
) -> Result<Classification, ReprError> {
    let mut spec = build_graded_unchecked(base, MPoly::sym("beta"), opts.window)?;
    spec.extension = None;
    classify(algebra, spec, opts)
}
