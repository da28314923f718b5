//! Bounded search for proper submodules `C[∂]q(∂)v` of a rank one module.

use std::collections::BTreeSet;

use crate::exactpoly::{MPoly, Var};
use crate::lca::AlgebraSpec;
use crate::solve::peel;

use super::{Action, ModuleKind, ModuleSpec, ReprError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessOutcome {
    /// A monic `q(∂)` of positive degree generating a proper submodule.
    Found(MPoly),
    /// No witness of degree at most the bound.
    NoneUpTo(u32),
    /// `c = 0`: every generator with nonzero index acts trivially.
    Trivial,
    /// The elimination could not decide at this degree.
    Undecided(u32),
}

/// Searches monic `q` of degree `1..=max_degree` such that every generator
/// `X_i` with `|i| ≤ gen_bound` maps `q(∂)v` into `C[∂,λ]q(∂)v`, that is
/// `q(∂+λ)·F_X(i)(∂,λ) ≡ 0 mod q(∂)`. Returns the first witness by degree,
/// then by printed form.
pub fn reducibility_witness(
    algebra: &AlgebraSpec,
    module: &ModuleSpec,
    max_degree: u32,
    gen_bound: i64,
) -> Result<WitnessOutcome, ReprError> {
    if module.kind != ModuleKind::RankOne {
        return Err(ReprError::Document("witness search needs a rank one module".into()));
    }
    for p in [&module.alpha, &module.beta, &module.c, &module.d0] {
        if !p.is_constant() {
            return Err(ReprError::NotNumeric(p.to_string()));
        }
    }
    if module.c.is_zero() {
        return Ok(WitnessOutcome::Trivial);
    }
    let d = MPoly::var(Var::D);
    let shift = &d + &MPoly::var(Var::LAMBDA);
    for k in 1..=max_degree {
        let coeffs: Vec<Var> = (0..k).map(|j| Var::new(&format!("q{j}"))).collect();
        let mut q = d.pow(k);
        for (j, v) in coeffs.iter().enumerate() {
            q += &(&d.pow(j as u32) * &MPoly::var(*v));
        }
        let q_shift = q.substitute(Var::D, &shift);
        let mut eqs = Vec::new();
        for &fam in &algebra.families {
            for i in -gen_bound..=gen_bound {
                let f = module.coeff(fam, i, 0)?;
                if f.is_zero() {
                    continue;
                }
                let r = (&q_shift * &f).rem_monic(&q, Var::D)?;
                eqs.extend(r.coefficients(&[Var::D, Var::LAMBDA]).into_values());
            }
        }
        let unknowns: BTreeSet<Var> = coeffs.iter().copied().collect();
        let branches = peel(eqs, &unknowns)?;
        let mut candidates: Vec<MPoly> = branches
            .iter()
            .filter(|b| b.is_solved() && b.conditions.is_empty())
            .map(|b| {
                let fixed = b.apply(&q);
                let zeros: Vec<(Var, MPoly)> = fixed
                    .vars()
                    .into_iter()
                    .filter(|v| unknowns.contains(v))
                    .map(|v| (v, MPoly::zero()))
                    .collect();
                fixed.substitute_all(&zeros)
            })
            .collect();
        candidates.sort_by_key(|p| p.to_string());
        if let Some(q) = candidates.into_iter().next() {
            return Ok(WitnessOutcome::Found(q));
        }
        if branches.iter().any(|b| !b.is_solved()) {
            return Ok(WitnessOutcome::Undecided(k));
        }
    }
    Ok(WitnessOutcome::NoneUpTo(max_degree))
}
