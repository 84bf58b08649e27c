use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::arith::{inv_mod, mul_mod, residue};
use crate::{Error, Result};

/// A dense matrix over `F_p`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: alloc::vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    pub fn scalar(p: u64, n: usize, c: i64) -> Self {
        let mut m = Self::zeros(p, n, n);
        let c = residue(c, p);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    /// From signed rows; entries are reduced mod `p`.
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| residue(x, p)).collect();
        Ok(Self { p, rows: rows.len(), cols, data })
    }

    /// The permutation matrix sending `e_i` to `e_{σ(i)}`.
    pub fn permutation(p: u64, sigma: &[usize]) -> Self {
        let n = sigma.len();
        let mut m = Self::zeros(p, n, n);
        for (i, &j) in sigma.iter().enumerate() {
            m.set(j, i, 1);
        }
        m
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.p, self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = residue(c, self.p);
        let data = self.data.iter().map(|&x| mul_mod(x, c, self.p)).collect();
        Self { data, ..self.clone() }
    }

    /// Copies `block` into `self` with its top-left corner at `(r, c)`.
    pub fn put(&mut self, r: usize, c: usize, block: &FpMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r + i) * self.cols + c + j] = block.get(i, j);
            }
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(0, |acc, (&a, &b)| (acc + mul_mod(a, b, self.p)) % self.p))
            .collect()
    }

    pub fn rref(&self) -> Rref {
        let p = self.p;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            m.swap_rows(r, pr);
            let inv = inv_mod(m.get(r, c), p).expect("nonzero residue mod a prime");
            for j in c..m.cols {
                let v = mul_mod(m.get(r, j), inv, p);
                m.data[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) != 0 {
                    let f = m.get(i, c);
                    for j in c..m.cols {
                        let v = (m.get(i, j) + p - mul_mod(f, m.get(r, j), p)) % p;
                        m.data[i * m.cols + j] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, as the columns of the returned matrix.
    pub fn kernel(&self) -> FpMatrix {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FpMatrix::zeros(self.p, self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k.set(f, col, 1);
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, col, (self.p - matrix.get(r, f)) % self.p);
            }
        }
        k
    }

    pub fn det(&self) -> u64 {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let p = self.p;
        let mut m = self.clone();
        let mut det = 1 % p;
        for c in 0..m.cols {
            let Some(pr) = (c..m.rows).find(|&i| m.get(i, c) != 0) else { return 0 };
            if pr != c {
                m.swap_rows(c, pr);
                det = (p - det) % p;
            }
            let piv = m.get(c, c);
            det = mul_mod(det, piv, p);
            let inv = inv_mod(piv, p).expect("nonzero residue mod a prime");
            for i in c + 1..m.rows {
                let f = mul_mod(m.get(i, c), inv, p);
                if f != 0 {
                    for j in c..m.cols {
                        let v = (m.get(i, j) + p - mul_mod(f, m.get(c, j), p)) % p;
                        m.data[i * m.cols + j] = v;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<FpMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        aug.put(0, 0, self);
        aug.put(0, n, &FpMatrix::identity(self.p, n));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = matrix.get(i, n + j);
            }
        }
        Some(inv)
    }

    /// `self^e`; negative exponents need an invertible matrix.
    pub fn pow(&self, e: i64) -> Option<FpMatrix> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = FpMatrix::identity(self.p, self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Some(acc)
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}{:?}", self.p, self.to_rows())
    }
}

impl Mul for &FpMatrix {
    type Output = FpMatrix;

    fn mul(self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        assert_eq!(self.p, rhs.p, "prime mismatch");
        let p = self.p;
        let mut out = FpMatrix::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] = (out.data[idx] + mul_mod(a, rhs.get(k, j), p)) % p;
                }
            }
        }
        out
    }
}

impl Add for &FpMatrix {
    type Output = FpMatrix;

    fn add(self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| (a + b) % self.p).collect();
        FpMatrix { data, ..self.clone() }
    }
}

impl Sub for &FpMatrix {
    type Output = FpMatrix;

    fn sub(self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "dimension mismatch");
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| (a + self.p - b) % self.p).collect();
        FpMatrix { data, ..self.clone() }
    }
}

impl Neg for &FpMatrix {
    type Output = FpMatrix;

    fn neg(self) -> FpMatrix {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u64, rows: &[&[i64]]) -> FpMatrix {
        FpMatrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn basics() {
        let a = m(5, &[&[1, 2], &[3, 4]]);
        assert_eq!(a.det(), 3); // -2 mod 5
        let inv = a.inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert_eq!(a.pow(-1).unwrap(), inv);
        let sing = m(5, &[&[1, 2], &[2, 4]]);
        assert_eq!(sing.rank(), 1);
        assert!(sing.inverse().is_none());
        let k = sing.kernel();
        assert_eq!(k.cols(), 1);
        assert!((&sing * &k).is_zero());
    }

    #[test]
    fn degenerate_shapes() {
        let z = FpMatrix::zeros(3, 0, 4);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel().cols(), 4);
        let e = FpMatrix::identity(7, 0);
        assert_eq!(e.det(), 1);
        assert!(e.inverse().unwrap().is_identity());
        assert_eq!(FpMatrix::identity(2, 3).scale(2), FpMatrix::zeros(2, 3, 3));
    }

    fn arb_matrix(p: u64, r: usize, c: usize) -> impl Strategy<Value = FpMatrix> {
        proptest::collection::vec(0..p as i64, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c.max(1)).take(r).map(<[i64]>::to_vec).collect();
            FpMatrix::from_rows(p, &rows).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(a in arb_matrix(3, 4, 5)) {
            let k = a.kernel();
            prop_assert_eq!(a.rank() + k.cols(), 5);
            prop_assert!((&a * &k).is_zero());
            prop_assert_eq!(k.rank(), k.cols());
        }

        #[test]
        fn det_multiplicative(a in arb_matrix(7, 3, 3), b in arb_matrix(7, 3, 3)) {
            prop_assert_eq!((&a * &b).det(), mul_mod(a.det(), b.det(), 7));
            prop_assert_eq!(a.det() != 0, a.rank() == 3);
            prop_assert_eq!(a.transpose().det(), a.det());
        }

        #[test]
        fn pow_agrees_with_repeated_product(a in arb_matrix(5, 3, 3), e in 0i64..9) {
            let mut acc = FpMatrix::identity(5, 3);
            for _ in 0..e {
                acc = &acc * &a;
            }
            prop_assert_eq!(a.pow(e).unwrap(), acc);
        }
    }
}
