//! Exact elimination for small polynomial systems.
//!
//! The equations are polynomials in a set of unknowns whose coefficients may
//! involve free parameters. The solver repeatedly applies three rules:
//!
//! * an equation `p · u^k = 0` with a single unknown monomial forces `u = 0`
//!   (recording `p ≠ 0` when `p` is not a number);
//! * an unknown that occurs only linearly, with a numeric coefficient, in
//!   some equation is eliminated by substitution;
//! * an equation whose unknown monomials share a factor `u` splits the
//!   search into `u = 0` and `u ≠ 0`.
//!
//! Equations with no unknowns left become parameter conditions. A branch
//! where none of the rules applies is returned with its remaining equations
//! marked as stuck, never guessed.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::exactpoly::{MPoly, Monomial, Scalar, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("elimination split into more than {0} branches")]
    TooManyBranches(usize),
}

/// One consistent outcome of [`peel`].
#[derive(Debug, Clone, Default)]
pub struct PeelBranch {
    /// Solved unknowns, each expressed in free unknowns and parameters.
    pub assignments: BTreeMap<Var, MPoly>,
    /// Polynomials assumed nonzero along the way.
    pub nonzero: Vec<MPoly>,
    /// Equations left over in the parameters alone.
    pub conditions: Vec<MPoly>,
    /// Equations no rule could reduce.
    pub stuck: Vec<MPoly>,
}

impl PeelBranch {
    pub fn is_solved(&self) -> bool {
        self.stuck.is_empty()
    }

    /// Applies the assignments to `p`.
    pub fn apply(&self, p: &MPoly) -> MPoly {
        apply_map(p, &self.assignments)
    }
}

/// Substitutes every assigned variable occurring in `p`.
pub fn apply_map(p: &MPoly, map: &BTreeMap<Var, MPoly>) -> MPoly {
    let subs: Vec<(Var, MPoly)> = p
        .vars()
        .into_iter()
        .filter_map(|v| map.get(&v).map(|q| (v, q.clone())))
        .collect();
    if subs.is_empty() {
        p.clone()
    } else {
        p.substitute_all(&subs)
    }
}

/// Groups the terms of `p` by their unknown part.
pub fn split_unknowns(p: &MPoly, unknowns: &BTreeSet<Var>) -> BTreeMap<Monomial, MPoly> {
    let mut out: BTreeMap<Monomial, MPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (inside, rest): (Vec<_>, Vec<_>) = m.pairs().iter().partition(|(v, _)| unknowns.contains(v));
        let key = Monomial::from_pairs(inside);
        let entry = out.entry(key).or_default();
        *entry += &MPoly::term(c.clone(), Monomial::from_pairs(rest));
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn normalize(p: MPoly) -> MPoly {
    match p.leading_term() {
        Some((_, c)) if !c.is_one() => {
            let inv = c.inv().expect("nonzero leading coefficient");
            p.scale(&inv)
        }
        _ => p,
    }
}

#[derive(Clone)]
struct State {
    eqs: Vec<MPoly>,
    branch: PeelBranch,
}

enum Step {
    Done,
    Dead,
    Split(Vec<State>),
}

impl State {
    fn dedupe(&mut self) {
        let mut seen = HashSet::new();
        let eqs = std::mem::take(&mut self.eqs);
        for e in eqs {
            if e.is_zero() {
                continue;
            }
            let n = normalize(e);
            if seen.insert(n.clone()) {
                self.eqs.push(n);
            }
        }
    }

    /// Returns false when the branch became inconsistent.
    fn assign(&mut self, u: Var, value: MPoly) -> bool {
        for e in self.eqs.iter_mut() {
            if e.contains_var(u) {
                *e = e.substitute(u, &value);
            }
        }
        for v in self.branch.assignments.values_mut() {
            if v.contains_var(u) {
                *v = v.substitute(u, &value);
            }
        }
        for n in self.branch.nonzero.iter_mut() {
            if n.contains_var(u) {
                *n = n.substitute(u, &value);
                if n.is_zero() {
                    return false;
                }
            }
        }
        self.branch.assignments.insert(u, value);
        true
    }

    fn step(&mut self, unknowns: &BTreeSet<Var>) -> Step {
        loop {
            self.dedupe();
            // parameter-only equations and forced zeros
            let mut zeros: BTreeSet<Var> = BTreeSet::new();
            let mut keep = Vec::with_capacity(self.eqs.len());
            let mut grouped = Vec::with_capacity(self.eqs.len());
            for e in std::mem::take(&mut self.eqs) {
                let g = split_unknowns(&e, unknowns);
                if g.len() == 1 && g.contains_key(&Monomial::one()) {
                    if e.is_constant() {
                        return Step::Dead;
                    }
                    self.branch.conditions.push(e);
                    continue;
                }
                if g.len() == 1 {
                    let (m, p) = g.iter().next().unwrap();
                    if m.pairs().len() == 1 {
                        if !p.is_constant() {
                            self.branch.nonzero.push(p.clone());
                        }
                        zeros.insert(m.pairs()[0].0);
                        continue;
                    }
                }
                keep.push(e);
                grouped.push(g);
            }
            self.eqs = keep;
            if !zeros.is_empty() {
                for u in zeros {
                    if !self.assign(u, MPoly::zero()) {
                        return Step::Dead;
                    }
                }
                continue;
            }
            if self.eqs.is_empty() {
                return Step::Done;
            }
            if let Some((k, u, c)) = linear_pivot(&grouped) {
                let e = &self.eqs[k];
                let rest = e - &MPoly::var(u).scale(&c);
                let value = rest.scale(&-c.inv().expect("nonzero pivot"));
                if !self.assign(u, value) {
                    return Step::Dead;
                }
                continue;
            }
            if let Some((k, u)) = common_factor(&grouped) {
                let mut nonzero = self.clone();
                let quotient = nonzero.eqs[k]
                    .divide_exact(&MPoly::var(u))
                    .expect("common unknown factor divides");
                nonzero.eqs[k] = quotient;
                nonzero.branch.nonzero.push(MPoly::var(u));
                let mut children = vec![nonzero];
                let mut zero = self.clone();
                if zero.assign(u, MPoly::zero()) {
                    children.push(zero);
                }
                return Step::Split(children);
            }
            self.branch.stuck = std::mem::take(&mut self.eqs);
            return Step::Done;
        }
    }
}

fn linear_pivot(grouped: &[BTreeMap<Monomial, MPoly>]) -> Option<(usize, Var, Scalar)> {
    let mut best: Option<(usize, usize, Var, Scalar)> = None;
    for (k, g) in grouped.iter().enumerate() {
        let size: usize = g.values().map(MPoly::num_terms).sum();
        if best.as_ref().is_some_and(|b| b.0 <= size) {
            continue;
        }
        for (m, p) in g {
            if m.degree() != 1 {
                continue;
            }
            let Some(c) = p.as_constant() else { continue };
            let u = m.pairs()[0].0;
            if g.keys().filter(|other| other.exponent(u) > 0).count() == 1 {
                best = Some((size, k, u, c));
                break;
            }
        }
    }
    best.map(|(_, k, u, c)| (k, u, c))
}

fn common_factor(grouped: &[BTreeMap<Monomial, MPoly>]) -> Option<(usize, Var)> {
    grouped.iter().enumerate().find_map(|(k, g)| {
        let first = g.keys().next()?;
        first
            .pairs()
            .iter()
            .map(|p| p.0)
            .find(|u| g.keys().all(|m| m.exponent(*u) > 0))
            .map(|u| (k, u))
    })
}

/// Upper bound on the number of branches explored by [`peel`].
pub const MAX_BRANCHES: usize = 64;

/// Solves `equations = 0` for `unknowns`. Every returned branch is
/// consistent as far as the rules can tell; branches proven inconsistent are
/// dropped, so an empty result means no solution.
pub fn peel(equations: Vec<MPoly>, unknowns: &BTreeSet<Var>) -> Result<Vec<PeelBranch>, SolveError> {
    let mut stack = vec![State {
        eqs: equations,
        branch: PeelBranch::default(),
    }];
    let mut out = Vec::new();
    let mut explored = 0;
    while let Some(mut st) = stack.pop() {
        explored += 1;
        if explored > MAX_BRANCHES {
            return Err(SolveError::TooManyBranches(MAX_BRANCHES));
        }
        match st.step(unknowns) {
            Step::Done => {
                st.branch.conditions.sort_by_key(|p| p.to_string());
                st.branch.conditions.dedup();
                out.push(st.branch);
            }
            Step::Dead => {}
            Step::Split(children) => stack.extend(children),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::poly;

    fn unknowns(names: &[&str]) -> BTreeSet<Var> {
        names.iter().map(|n| Var::new(n)).collect()
    }

    #[test]
    fn linear_system_with_parameters() {
        let u = unknowns(&["x", "y"]);
        let out = peel(vec![poly("x + y - a"), poly("x - y - b")], &u).unwrap();
        assert_eq!(out.len(), 1);
        let br = &out[0];
        assert!(br.is_solved());
        assert_eq!(br.assignments[&Var::new("x")], poly("a/2 + b/2"));
        assert_eq!(br.assignments[&Var::new("y")], poly("a/2 - b/2"));
    }

    #[test]
    fn squares_force_zero() {
        let u = unknowns(&["x", "y"]);
        let out = peel(vec![poly("x^2"), poly("x*y + y^3")], &u).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].assignments[&Var::new("x")], MPoly::zero());
        assert_eq!(out[0].assignments[&Var::new("y")], MPoly::zero());
    }

    #[test]
    fn inconsistent_system_has_no_branch() {
        let u = unknowns(&["x"]);
        assert!(peel(vec![poly("x - 1"), poly("x - 2")], &u).unwrap().is_empty());
    }

    #[test]
    fn parameter_coefficient_becomes_assumption() {
        let u = unknowns(&["x"]);
        let out = peel(vec![poly("c*x")], &u).unwrap();
        assert_eq!(out[0].nonzero, vec![poly("c")]);
        assert_eq!(out[0].assignments[&Var::new("x")], MPoly::zero());
    }

    #[test]
    fn common_factor_branches() {
        let u = unknowns(&["x", "y"]);
        let out = peel(vec![poly("x*y - x")], &u).unwrap();
        assert_eq!(out.len(), 2);
        let mut ys: Vec<String> = out
            .iter()
            .map(|b| b.assignments.get(&Var::new("y")).map_or("free".into(), |p| p.to_string()))
            .collect();
        ys.sort();
        assert_eq!(ys, vec!["1", "free"]);
    }

    #[test]
    fn stuck_is_reported() {
        let u = unknowns(&["x", "y"]);
        let out = peel(vec![poly("x^2 + y^2 - 1")], &u).unwrap();
        assert_eq!(out.len(), 1);
        assert!(!out[0].is_solved());
    }

    #[test]
    fn parameter_conditions_are_kept() {
        let u = unknowns(&["x"]);
        let out = peel(vec![poly("x - 1"), poly("x - a")], &u).unwrap();
        assert_eq!(out[0].conditions, vec![poly("a - 1")]);
    }
}
