//! Exact sparse row echelon elimination over a field.
//!
//! Rows are fed one at a time; each is reduced against the existing pivots
//! and either becomes a new pivot row, vanishes, or exposes an inconsistency
//! (`0 = c` with `c != 0`). Pivot columns are always the smallest surviving
//! column, so for a fixed row order the result is deterministic.

use crate::scalar::Coeff;

/// Sparse row: `(column, value)` sorted by column, no zeros.
pub type SparseRow<C> = Vec<(usize, C)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOutcome {
    Pivot(usize),
    Redundant,
    Inconsistent,
}

#[derive(Clone, Debug)]
struct PivotRow<C> {
    /// Entries after the (unit) pivot.
    tail: SparseRow<C>,
    rhs: C,
}

/// Incrementally built echelon form of `A x = b`.
#[derive(Clone, Debug)]
pub struct Echelon<C> {
    ncols: usize,
    pivots: Vec<Option<PivotRow<C>>>,
    rank: usize,
    inconsistent: bool,
}

impl<C: Coeff> Echelon<C> {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, pivots: vec![None; ncols], rank: 0, inconsistent: false }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank == self.ncols
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots[col].is_some()
    }

    /// Adds the equation `row . x = rhs`. The row need not be sorted.
    pub fn push(&mut self, mut row: SparseRow<C>, mut rhs: C) -> RowOutcome {
        row.retain(|(_, c)| !c.is_zero());
        row.sort_unstable_by_key(|(j, _)| *j);
        let mut start = 0;
        loop {
            let Some(pos) = (start..row.len()).find(|&i| !row[i].1.is_zero()) else {
                if rhs.is_zero() {
                    return RowOutcome::Redundant;
                }
                self.inconsistent = true;
                return RowOutcome::Inconsistent;
            };
            let (col, lead) = row[pos].clone();
            match &self.pivots[col] {
                Some(p) => {
                    rhs -= lead.clone() * &p.rhs;
                    row = axpy(&row[pos + 1..], &p.tail, &lead);
                    start = 0;
                }
                None => {
                    let inv = C::one() / lead;
                    let tail: SparseRow<C> =
                        row[pos + 1..].iter().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (*j, c.clone() * &inv)).collect();
                    self.pivots[col] = Some(PivotRow { tail, rhs: rhs * &inv });
                    self.rank += 1;
                    return RowOutcome::Pivot(col);
                }
            }
        }
    }

    /// Back substitution with every free column set from `free` (default 0)
    /// and the right-hand side either kept or replaced by zero.
    pub fn back_substitute(&self, free: &[(usize, C)], homogeneous: bool) -> Vec<C> {
        let mut x = vec![C::zero(); self.ncols];
        for (j, v) in free {
            debug_assert!(self.pivots[*j].is_none());
            x[*j] = v.clone();
        }
        for col in (0..self.ncols).rev() {
            if let Some(p) = &self.pivots[col] {
                let mut v = if homogeneous { C::zero() } else { p.rhs.clone() };
                for (j, c) in &p.tail {
                    if !x[*j].is_zero() {
                        v -= c.clone() * &x[*j];
                    }
                }
                x[col] = v;
            }
        }
        x
    }

    /// Particular solution with all free columns zero.
    pub fn solve(&self) -> Vec<C> {
        self.back_substitute(&[], false)
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&j| self.pivots[j].is_none()).collect()
    }

    /// Basis of the null space, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<C>> {
        self.free_columns().into_iter().map(|f| self.back_substitute(&[(f, C::one())], true)).collect()
    }
}

/// `a - lead * b` for rows sorted by column.
fn axpy<C: Coeff>(a: &[(usize, C)], b: &[(usize, C)], lead: &C) -> SparseRow<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|t| t.0);
        let cb = b.get(j).map(|t| t.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = a[i].1.clone() - lead.clone() * &b[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            _ => {
                out.push((b[j].0, -(lead.clone() * &b[j].1)));
                j += 1;
            }
        }
    }
    out
}

/// Rank of a dense matrix.
pub fn rank<C: Coeff>(rows: &[Vec<C>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.push(r.iter().cloned().enumerate().collect(), C::zero());
    }
    e.rank()
}
