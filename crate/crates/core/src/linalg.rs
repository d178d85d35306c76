//! Small dense linear algebra over GF(q).

use crate::gf::{Elem, FieldCtx};

/// Row echelon basis grown one vector at a time.
#[derive(Clone, Debug)]
pub(crate) struct RowBasis {
    width: usize,
    /// (pivot column, row normalized so the pivot is 1)
    rows: Vec<(usize, Vec<Elem>)>,
}

impl RowBasis {
    pub fn new(width: usize) -> Self {
        RowBasis {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, f: &FieldCtx, v: &mut [Elem]) {
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != Elem::ZERO {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
    }

    /// Adds `v` if it is independent of the current rows.
    pub fn insert(&mut self, f: &FieldCtx, v: &[Elem]) -> bool {
        debug_assert_eq!(v.len(), self.width);
        let mut v = v.to_vec();
        self.reduce(f, &mut v);
        let Some(pivot) = v.iter().position(|&c| c != Elem::ZERO) else {
            return false;
        };
        let inv = f.inv(v[pivot]).expect("pivot is nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        // keep existing rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot];
            if c != Elem::ZERO {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }
}

pub(crate) fn rank(f: &FieldCtx, rows: &[Vec<Elem>]) -> usize {
    let width = rows.first().map_or(0, |r| r.len());
    let mut basis = RowBasis::new(width);
    for r in rows {
        basis.insert(f, r);
    }
    basis.rank()
}

/// Gauss-Jordan inverse of a square matrix given as rows.
pub(crate) fn invert(f: &FieldCtx, mat: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = mat.len();
    let mut a: Vec<Vec<Elem>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r][col] != Elem::ZERO)?;
        a.swap(col, pivot);
        let inv = f.inv(a[col][col]).ok()?;
        for x in a[col].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col {
                continue;
            }
            let c = row[col];
            if c != Elem::ZERO {
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(c, p));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) fn mat_vec(f: &FieldCtx, mat: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    mat.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_times_matrix_is_identity() {
        let f = FieldCtx::new(5, 1, None).unwrap();
        let m: Vec<Vec<Elem>> = [[1, 2, 0], [3, 1, 4], [0, 2, 2]]
            .iter()
            .map(|r| r.iter().map(|&v| Elem(v)).collect())
            .collect();
        let inv = invert(&f, &m).unwrap();
        for i in 0..3 {
            let col: Vec<Elem> = inv.iter().map(|row| row[i]).collect();
            let e = mat_vec(&f, &m, &col);
            for (j, x) in e.iter().enumerate() {
                assert_eq!(*x, if i == j { Elem::ONE } else { Elem::ZERO });
            }
        }
    }

    #[test]
    fn rank_detects_dependence() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        let rows = vec![
            vec![Elem(1), Elem(2)],
            vec![Elem(2), Elem(3)], // 2 * (1, 2) = (2, 2*2) = (2, 3)
        ];
        assert_eq!(rank(&f, &rows), 1);
        assert!(invert(&f, &rows).is_none());
    }
}
