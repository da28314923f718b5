//! Exact Gaussian elimination.

use std::collections::BTreeMap;

use super::{MPoly, PolyError, Scalar};

/// General solution of `A x = rhs`: a particular solution (free unknowns
/// set to zero) plus a basis of the scalar kernel of `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub solution: Vec<MPoly>,
    pub kernel_basis: Vec<Vec<Scalar>>,
}

/// Solves `A x = rhs` where `A` has scalar entries and the right-hand side
/// entries are polynomials (typically in free parameters).
pub fn linear_solve(a: &[Vec<Scalar>], rhs: &[MPoly]) -> Result<LinearSolution, PolyError> {
    if a.len() != rhs.len() {
        return Err(PolyError::DimensionMismatch);
    }
    let ncols = a.first().map_or(0, Vec::len);
    if a.iter().any(|r| r.len() != ncols) {
        return Err(PolyError::DimensionMismatch);
    }
    let mut m: Vec<Vec<Scalar>> = a.to_vec();
    let mut b: Vec<MPoly> = rhs.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        b.swap(row, p);
        let inv = m[row][col].inv()?;
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        b[row] = b[row].scale(&inv);
        for r in 0..m.len() {
            if r == row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            let pivot = m[row].clone();
            for (x, p) in m[r].iter_mut().zip(&pivot).skip(col) {
                if !p.is_zero() {
                    *x -= &(p * &f);
                }
            }
            let t = b[row].scale(&f);
            b[r] -= &t;
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return Err(PolyError::Inconsistent);
    }
    let mut solution = vec![MPoly::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        solution[c] = b[r].clone();
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let kernel_basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -&m[r][f];
            }
            v
        })
        .collect();
    Ok(LinearSolution {
        solution,
        kernel_basis,
    })
}

/// A sparse row: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Scalar)>;

fn axpy(row: &SparseRow, f: &Scalar, pivot: &SparseRow) -> SparseRow {
    // row - f * pivot
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(f * &pivot[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(f * &pivot[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incrementally built row echelon form over the scalars.
#[derive(Debug, Clone, Default)]
pub struct RowEchelon {
    ncols: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl RowEchelon {
    pub fn new(ncols: usize) -> Self {
        RowEchelon {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `row` against the current pivots.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        row.retain(|e| !e.1.is_zero());
        let mut start = 0;
        while start < row.len() {
            let (c, v) = row[start].clone();
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => start += 1,
            }
        }
        row
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = row;
        row.retain(|e| !e.1.is_zero());
        loop {
            let Some((c, v)) = row.first().cloned() else {
                return false;
            };
            match self.pivots.get(&c) {
                Some(p) => row = axpy(&row, &v, p),
                None => {
                    let inv = v.inv().expect("nonzero leading entry");
                    let normalized = row.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
                    self.pivots.insert(c, normalized);
                    return true;
                }
            }
        }
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        // back substitution into reduced form, last pivot first
        let mut reduced: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&c, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let mut k = 1;
            while k < r.len() {
                let (col, v) = r[k].clone();
                match reduced.get(&col) {
                    Some(p) => r = axpy(&r, &v, p),
                    None => k += 1,
                }
            }
            reduced.insert(c, r);
        }
        let free: Vec<usize> = (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.ncols];
                v[f] = Scalar::one();
                for (&c, r) in &reduced {
                    if let Some((_, x)) = r.iter().find(|e| e.0 == f) {
                        v[c] = -x;
                    }
                }
                v
            })
            .collect()
    }
}

/// Rank of a family of dense vectors.
pub fn rank_of(vectors: &[Vec<Scalar>]) -> usize {
    let ncols = vectors.first().map_or(0, Vec::len);
    let mut ech = RowEchelon::new(ncols);
    for v in vectors {
        ech.insert(to_sparse(v));
    }
    ech.rank()
}

pub fn to_sparse(v: &[Scalar]) -> SparseRow {
    v.iter()
        .enumerate()
        .filter(|e| !e.1.is_zero())
        .map(|(k, x)| (k, x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::poly;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn solves_with_parameter_rhs() {
        let sol = linear_solve(&[vec![s(2)]], &[poly("a + 2")]).unwrap();
        assert_eq!(sol.solution[0], poly("(1/2)*a + 1"));
        assert!(sol.kernel_basis.is_empty());
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let sol = linear_solve(
            &[vec![s(1), s(0)], vec![s(0), s(1)]],
            &[MPoly::zero(), MPoly::zero()],
        )
        .unwrap();
        assert!(sol.solution.iter().all(MPoly::is_zero));
        assert!(sol.kernel_basis.is_empty());
    }

    #[test]
    fn inconsistent_and_underdetermined() {
        let a = vec![vec![s(1), s(1)], vec![s(2), s(2)]];
        assert_eq!(
            linear_solve(&a, &[poly("1"), poly("3")]),
            Err(PolyError::Inconsistent)
        );
        let sol = linear_solve(&a, &[poly("b"), poly("2*b")]).unwrap();
        assert_eq!(sol.kernel_basis, vec![vec![s(-1), s(1)]]);
        assert_eq!(sol.solution, vec![poly("b"), MPoly::zero()]);
    }

    #[test]
    fn echelon_kernel_matches_dense() {
        let rows = vec![
            vec![s(1), s(2), s(0), s(-1)],
            vec![s(0), s(1), s(1), s(0)],
            vec![s(1), s(3), s(1), s(-1)],
        ];
        let mut ech = RowEchelon::new(4);
        for r in &rows {
            ech.insert(to_sparse(r));
        }
        assert_eq!(ech.rank(), 2);
        let ker = ech.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in &rows {
                let dot = r.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y));
                assert!(dot.is_zero());
            }
        }
    }
}
