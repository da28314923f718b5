use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use super::{Monomial, PolyError, Scalar, Var};

/// Sparse multivariate polynomial over the Gaussian rationals.
///
/// The term map never stores a zero coefficient, so two polynomials are
/// mathematically equal exactly when they compare equal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        MPoly::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        MPoly::constant(Scalar::from_int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        MPoly::constant(Scalar::ratio(num, den))
    }

    pub fn var(v: Var) -> Self {
        MPoly::term(Scalar::one(), Monomial::var(v))
    }

    /// Shorthand for `MPoly::var(Var::new(name))`.
    pub fn sym(name: &str) -> Self {
        MPoly::var(Var::new(name))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.is_constant() {
            Some(self.coeff(&Monomial::one()))
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.pairs().iter().map(|p| p.0))
            .collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Total degree counting only `vars`.
    pub fn degree_over(&self, vars: &[Var]) -> u32 {
        self.terms
            .keys()
            .map(|m| m.split(vars).0.degree())
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, x)| (m.mul(mono), x.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces `v` by `q`.
    pub fn substitute(&self, v: Var, q: &MPoly) -> MPoly {
        self.substitute_all(&[(v, q.clone())])
    }

    /// Simultaneous substitution: every listed variable is replaced by its
    /// image in one pass, so images may mention the substituted variables.
    pub fn substitute_all(&self, subs: &[(Var, MPoly)]) -> MPoly {
        let vars: Vec<Var> = subs.iter().map(|s| s.0).collect();
        if !self.terms.keys().any(|m| m.pairs().iter().any(|p| vars.contains(&p.0))) {
            return self.clone();
        }
        let mut powers: Vec<Vec<MPoly>> = vec![vec![MPoly::one()]; subs.len()];
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let (inside, rest) = m.split(&vars);
            if inside.is_one() {
                out.add_term(rest, c);
                continue;
            }
            let mut factor = MPoly::term(c.clone(), rest);
            for &(v, e) in inside.pairs() {
                let k = vars.iter().position(|x| *x == v).unwrap();
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().unwrap() * &subs[k].1;
                    powers[k].push(next);
                }
                factor = &factor * &powers[k][e as usize];
            }
            out += &factor;
        }
        out
    }

    /// Evaluates the listed variables at scalar values.
    pub fn eval(&self, point: &[(Var, Scalar)]) -> MPoly {
        let subs: Vec<(Var, MPoly)> = point
            .iter()
            .map(|(v, s)| (*v, MPoly::constant(s.clone())))
            .collect();
        self.substitute_all(&subs)
    }

    /// Coefficient of the monomial `m` (over `vars`) as a polynomial in the
    /// remaining variables.
    pub fn coeff_extract(&self, vars: &[Var], m: &Monomial) -> MPoly {
        let mut out = MPoly::zero();
        for (mono, c) in &self.terms {
            let (inside, rest) = mono.split(vars);
            if &inside == m {
                out.add_term(rest, c);
            }
        }
        out
    }

    /// All coefficients with respect to `vars`, keyed by monomials over
    /// `vars`. Summing `coeff * monomial` reconstructs `self`.
    pub fn coefficients(&self, vars: &[Var]) -> BTreeMap<Monomial, MPoly> {
        let mut out: BTreeMap<Monomial, MPoly> = BTreeMap::new();
        for (mono, c) in &self.terms {
            let (inside, rest) = mono.split(vars);
            out.entry(inside).or_default().add_term(rest, c);
        }
        out
    }

    /// Leading term under the graded lexicographic display order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Terms sorted for display, leading term first.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    /// Exact quotient `self / q` by multivariate long division against the
    /// single divisor `q`.
    pub fn divide_exact(&self, q: &MPoly) -> Result<MPoly, PolyError> {
        let (lm, lc) = match q.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(PolyError::DivisionByZero),
        };
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(PolyError::NotDivisible);
            }
            let t = MPoly::term(c * &lc_inv, lm.quotient_of(m));
            rem -= &(&t * q);
            quot += &t;
        }
        Ok(quot)
    }

    /// Remainder of `self` modulo `q`, where `q` is monic in `v`, treating
    /// every other variable as a coefficient.
    pub fn rem_monic(&self, q: &MPoly, v: Var) -> Result<MPoly, PolyError> {
        let k = q.degree_in(v);
        let lead = q.coeff_extract(&[v], &Monomial::var_pow(v, k));
        if !lead.as_constant().is_some_and(|c| c.is_one()) {
            return Err(PolyError::NotMonic);
        }
        let mut rem = self.clone();
        loop {
            let e = rem.degree_in(v);
            if e < k || rem.is_zero() {
                return Ok(rem);
            }
            let top = rem.coeff_extract(&[v], &Monomial::var_pow(v, e));
            let shift = &top * &MPoly::term(Scalar::one(), Monomial::var_pow(v, e - k));
            rem -= &(&shift * q);
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

impl AddAssign<&MPoly> for MPoly {
    fn add_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl SubAssign<&MPoly> for MPoly {
    fn sub_assign(&mut self, rhs: &MPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &-c);
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl From<Scalar> for MPoly {
    fn from(c: Scalar) -> Self {
        MPoly::constant(c)
    }
}

impl From<Var> for MPoly {
    fn from(v: Var) -> Self {
        MPoly::var(v)
    }
}

impl From<i64> for MPoly {
    fn from(n: i64) -> Self {
        MPoly::int(n)
    }
}
