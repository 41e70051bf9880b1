//! Dense matrices over a fixed cyclotomic field.

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use rand::Rng;

use crate::roots::{CycField, CycNumber, QmodZ};

pub type Vector = Vec<CycNumber>;

#[derive(Clone, PartialEq, Eq)]
pub struct CycMatrix {
    field: Arc<CycField>,
    rows: usize,
    cols: usize,
    data: Vec<CycNumber>,
}

impl fmt::Debug for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over level {}]", self.rows, self.cols, self.field.level())?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        Ok(())
    }
}

impl CycMatrix {
    pub fn zeros(field: &Arc<CycField>, rows: usize, cols: usize) -> Self {
        CycMatrix {
            field: Arc::clone(field),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Arc<CycField>, n: usize) -> Self {
        let mut m = CycMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: &Arc<CycField>,
        rows: usize,
        cols: usize,
        f: impl Fn(usize, usize) -> CycNumber,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).relevel(field));
            }
        }
        CycMatrix {
            field: Arc::clone(field),
            rows,
            cols,
            data,
        }
    }

    pub fn from_columns(field: &Arc<CycField>, rows: usize, cols: &[Vector]) -> Self {
        CycMatrix::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    /// The matrix sending `e_j` to `e^{2πi·phase[j]} e_{perm[j]}`.
    pub fn monomial(field: &Arc<CycField>, perm: &[usize], phase: &[QmodZ]) -> Self {
        let n = perm.len();
        let mut m = CycMatrix::zeros(field, n, n);
        for (j, (&i, &q)) in perm.iter().zip(phase).enumerate() {
            m.set(i, j, field.root(q).expect("phase lives in the field"));
        }
        m
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNumber {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CycNumber) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNumber::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == CycMatrix::identity(&self.field, self.rows)
    }

    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = CycMatrix::zeros(&self.field, self.rows, other.cols);
        let nonzero_rows: Vec<Vec<usize>> = (0..other.rows)
            .map(|k| (0..other.cols).filter(|&j| !other.get(k, j).is_zero()).collect())
            .collect();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in &nonzero_rows[k] {
                    let idx = i * out.cols + j;
                    let prod = a * other.get(k, j);
                    out.data[idx] += &prod;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CycMatrix {
            field: Arc::clone(&self.field),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CycMatrix {
            field: Arc::clone(&self.field),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &CycNumber) -> CycMatrix {
        CycMatrix {
            field: Arc::clone(&self.field),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| if a.is_zero() { a.clone() } else { a * c })
                .collect(),
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> CycMatrix {
        CycMatrix {
            field: Arc::clone(&self.field),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.scale(r)).collect(),
        }
    }

    /// `self += c · other`, skipping zero entries of `other`.
    pub fn add_scaled(&mut self, c: &CycNumber, other: &CycMatrix) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
    }

    pub fn trace(&self) -> CycNumber {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t += self.get(i, i);
        }
        t
    }

    /// `tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &CycMatrix) -> CycNumber {
        let mut t = self.field.zero();
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                let b = other.get(k, i);
                if !b.is_zero() {
                    t += &(a * b);
                }
            }
        }
        t
    }

    pub fn apply(&self, v: &[CycNumber]) -> Vector {
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, k: u64) -> CycMatrix {
        let mut acc = CycMatrix::identity(&self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn block_diagonal(field: &Arc<CycField>, blocks: &[&CycMatrix]) -> CycMatrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = CycMatrix::zeros(field, n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).relevel(field));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (CycMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let pr = m.get(r, j);
                    if pr.is_zero() {
                        continue;
                    }
                    let v = m.get(i, j) - &(&f * pr);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the column space, taken from the columns themselves.
    pub fn column_space(&self) -> Vec<Vector> {
        let (_, pivots) = self.rref();
        pivots.into_iter().map(|j| self.column(j)).collect()
    }

    pub fn inverse(&self) -> Option<CycMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = CycMatrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(CycMatrix::from_fn(&self.field, n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn conjugate_by(&self, p: &CycMatrix, p_inv: &CycMatrix) -> CycMatrix {
        p.mul(self).mul(p_inv)
    }
}

/// A random monomial matrix with phases in `μ_e`, and its inverse.
pub fn random_monomial<R: Rng>(
    field: &Arc<CycField>,
    n: usize,
    e: u64,
    rng: &mut R,
) -> (CycMatrix, CycMatrix) {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let phase: Vec<QmodZ> = (0..n)
        .map(|_| QmodZ::new(rng.gen_range(0..e as i64), e as i64))
        .collect();
    let p = CycMatrix::monomial(field, &perm, &phase);
    let mut inv_perm = vec![0; n];
    for (j, &i) in perm.iter().enumerate() {
        inv_perm[i] = j;
    }
    let inv_phase: Vec<QmodZ> = (0..n).map(|i| -phase[inv_perm[i]]).collect();
    let p_inv = CycMatrix::monomial(field, &inv_perm, &inv_phase);
    (p, p_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn f4() -> Arc<CycField> {
        CycField::new(4)
    }

    #[test]
    fn inverse_and_rank() {
        let f = f4();
        let i = f.zeta_pow(1);
        let m = CycMatrix::from_fn(&f, 2, 2, |r, c| match (r, c) {
            (0, 0) => f.one(),
            (0, 1) => i.clone(),
            (1, 0) => i.clone(),
            _ => f.one(),
        });
        // det = 1 - i² = 2
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert_eq!(m.rank(), 2);
        let sing = CycMatrix::from_fn(&f, 2, 2, |r, _| if r == 0 { f.one() } else { i.clone() });
        assert_eq!(sing.rank(), 1);
        assert!(sing.inverse().is_none());
        assert_eq!(sing.column_space().len(), 1);
    }

    #[test]
    fn random_monomial_inverts() {
        let f = CycField::new(6);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (p, pi) = random_monomial(&f, 5, 6, &mut rng);
        assert!(p.mul(&pi).is_identity());
        assert!(pi.mul(&p).is_identity());
    }

    #[test]
    fn trace_of_product_matches() {
        let f = CycField::new(3);
        let a = CycMatrix::from_fn(&f, 3, 3, |r, c| f.zeta_pow((r + 2 * c) as i64));
        let b = CycMatrix::from_fn(&f, 3, 3, |r, c| f.integer((r as i64) - (c as i64)));
        assert_eq!(a.trace_of_product(&b), a.mul(&b).trace());
    }
}
