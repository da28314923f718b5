use std::cmp::Ordering;
use std::fmt;

use super::Var;

/// A power product of variables. Stored sorted by variable id with no zero
/// exponents, so the empty monomial is `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn var_pow(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, e)])
        }
    }

    /// Builds a monomial from arbitrary (var, exponent) pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(Var, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|p| p.0);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(v.len());
        for (var, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == var => last.1 += e,
                _ => out.push((var, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by_key(&v, |p| p.0)
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    /// `other / self`, assuming [`Monomial::divides`].
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(
            other
                .0
                .iter()
                .filter_map(|&(v, e)| {
                    let r = e - self.exponent(v);
                    (r > 0).then_some((v, r))
                })
                .collect(),
        )
    }

    /// Splits into the part over `vars` and the rest.
    pub fn split(&self, vars: &[Var]) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) =
            self.0.iter().partition(|p| vars.contains(&p.0));
        (Monomial(inside), Monomial(outside))
    }

    /// Drops the variable `v`, returning its exponent.
    pub fn remove(&self, v: Var) -> (u32, Monomial) {
        let e = self.exponent(v);
        (e, Monomial(self.0.iter().copied().filter(|p| p.0 != v).collect()))
    }

    fn keyed(&self) -> Vec<((u32, std::sync::Arc<str>), u32)> {
        let mut k: Vec<_> = self.0.iter().map(|&(v, e)| (v.order_key(), e)).collect();
        k.sort();
        k
    }

    /// Graded lexicographic comparison under the display variable order.
    /// `Greater` means `self` is printed first.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (self.keyed(), other.keyed());
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    // x's variable comes earlier and y lacks it
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if x.1 != y.1 {
                            return x.1.cmp(&y.1);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut sorted: Vec<(Var, u32)> = self.0.clone();
        sorted.sort_by_key(|p| p.0.order_key());
        for (k, (v, e)) in sorted.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let d = Monomial::var(Var::D);
        let l = Monomial::var(Var::LAMBDA);
        let b = Monomial::var(Var::new("b"));
        assert_eq!(d.grlex_cmp(&l), Ordering::Greater);
        assert_eq!(l.grlex_cmp(&b), Ordering::Greater);
        assert_eq!(d.mul(&l).grlex_cmp(&d), Ordering::Greater);
        assert_eq!(l.mul(&l).grlex_cmp(&d.mul(&b)), Ordering::Less);
        assert_eq!(Monomial::one().grlex_cmp(&Monomial::one()), Ordering::Equal);
    }

    #[test]
    fn division_helpers() {
        let m = Monomial::from_pairs([(Var::D, 2), (Var::LAMBDA, 1), (Var::D, 1)]);
        assert_eq!(m.exponent(Var::D), 3);
        let d = Monomial::var(Var::D);
        assert!(d.divides(&m));
        assert_eq!(d.quotient_of(&m).exponent(Var::D), 2);
        assert_eq!(m.to_string(), "d^3*l");
    }
}
