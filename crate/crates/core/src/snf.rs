//! Smith normal form of small integer matrices, with unimodular transforms.
//!
//! `left * a * right = diag` where `diag` has the same shape as `a`, its
//! nonzero diagonal entries are positive and form a divisibility chain, and
//! all four transforms (`left`, `left_inv`, `right`, `right_inv`) are exact.

pub type IntMatrix = Vec<Vec<i128>>;

#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Vec<i128>,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IntMatrix, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

struct Work {
    a: IntMatrix,
    left: IntMatrix,
    left_inv: IntMatrix,
    right: IntMatrix,
    right_inv: IntMatrix,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.left.swap(i, j);
        for row in self.left_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        for row in self.right.iter_mut() {
            row.swap(i, j);
        }
        self.right_inv.swap(i, j);
    }

    // row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: i128) {
        if c == 0 {
            return;
        }
        for k in 0..self.cols {
            let v = self.a[j][k];
            self.a[i][k] += c * v;
        }
        for k in 0..self.rows {
            let v = self.left[j][k];
            self.left[i][k] += c * v;
        }
        // inverse: col_j -= c * col_i
        for r in 0..self.rows {
            let v = self.left_inv[r][i];
            self.left_inv[r][j] -= c * v;
        }
    }

    // col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: i128) {
        if c == 0 {
            return;
        }
        for r in 0..self.rows {
            let v = self.a[r][j];
            self.a[r][i] += c * v;
        }
        for r in 0..self.cols {
            let v = self.right[r][j];
            self.right[r][i] += c * v;
        }
        // inverse: row_j -= c * row_i
        for k in 0..self.cols {
            let v = self.right_inv[i][k];
            self.right_inv[j][k] -= c * v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.a[i].iter_mut() {
            *v = -*v;
        }
        for v in self.left[i].iter_mut() {
            *v = -*v;
        }
        for row in self.left_inv.iter_mut() {
            row[i] = -row[i];
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.a[i][j].abs();
                if v != 0 && best.is_none_or(|(bi, bj)| v < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut w = Work {
        a: a.clone(),
        left: identity(rows),
        left_inv: identity(rows),
        right: identity(cols),
        right_inv: identity(cols),
        rows,
        cols,
    };

    let steps = rows.min(cols);
    for t in 0..steps {
        let Some((pi, pj)) = w.min_entry(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = w.a[i][t].div_euclid(w.a[t][t]);
                w.add_row(i, t, -q);
                if w.a[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = w.a[t][j].div_euclid(w.a[t][t]);
                w.add_col(j, t, -q);
                if w.a[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest nonzero entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    let v = w.a[i][t].abs();
                    if v != 0 && v < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    let v = w.a[t][j].abs();
                    if v != 0 && v < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            // divisibility of the remaining block by the pivot
            let p = w.a[t][t];
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| w.a[i][j] % p != 0);
            match offender {
                Some((i, _)) => {
                    w.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if w.a[t][t] < 0 {
            w.negate_row(t);
        }
    }

    let diag = (0..steps).map(|i| w.a[i][i]).collect();
    Snf {
        diag,
        left: w.left,
        left_inv: w.left_inv,
        right: w.right,
        right_inv: w.right_inv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: IntMatrix) -> Snf {
        let s = smith_normal_form(&a);
        let d = mat_mul(&mat_mul(&s.left, &a), &s.right);
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if i == j {
                    assert_eq!(v, s.diag[i]);
                } else {
                    assert_eq!(v, 0, "off-diagonal entry in {d:?}");
                }
            }
        }
        assert_eq!(mat_mul(&s.left, &s.left_inv), identity(a.len()));
        assert_eq!(mat_mul(&s.right_inv, &s.right), identity(a[0].len()));
        for w in s.diag.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "chain broken: {:?}", s.diag);
            }
        }
        s
    }

    #[test]
    fn diagonalizes_small_matrices() {
        assert_eq!(check(vec![vec![2, 0], vec![0, 3]]).diag, vec![1, 6]);
        assert_eq!(check(vec![vec![0, 4], vec![-4, 0]]).diag, vec![4, 4]);
        assert_eq!(check(vec![vec![6, 4, 2], vec![4, 8, 0]]).diag, vec![2, 4]);
        assert_eq!(check(vec![vec![0, 0], vec![0, 0]]).diag, vec![0, 0]);
        check(vec![
            vec![0, 3, -2, 1],
            vec![-3, 0, 5, 4],
            vec![2, -5, 0, -1],
            vec![-1, -4, 1, 0],
        ]);
    }
}
