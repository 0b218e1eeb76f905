//! Linear algebra over F_p on coordinate vectors.

use super::modp::{inv_mod, mul_mod};

/// Dense square-or-rectangular matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        Matrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Matrix::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1 % p);
        }
        m
    }

    /// Builds the matrix whose j-th column is `columns[j]`.
    pub fn from_columns(p: u32, columns: &[Vec<u32>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, |c| c.len());
        let mut m = Matrix::zero(p, rows, cols);
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let p = self.p as u64;
        let mut out = Matrix::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = 0u64;
                for l in 0..self.cols {
                    acc += self.get(i, l) as u64 * other.get(l, j) as u64;
                    if acc >= 1 << 62 {
                        acc %= p;
                    }
                }
                out.set(i, j, (acc % p) as u32);
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let p = self.p;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (a + b) % p).collect();
        Matrix { p, rows: self.rows, cols: self.cols, data }
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        assert_eq!(self.rows, self.cols);
        let mut result = Matrix::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `self + c * I`.
    pub fn add_scaled_identity(&self, c: u32) -> Matrix {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = (m.get(i, i) + c) % self.p;
            m.set(i, i, v);
        }
        m
    }

    /// Computes `out = self * v`.
    #[inline]
    pub fn apply_into(&self, v: &[u32], out: &mut [u32]) {
        let p = self.p as u64;
        for (i, o) in out.iter_mut().enumerate().take(self.rows) {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let mut acc = 0u64;
            for (&a, &b) in row.iter().zip(v) {
                acc += a as u64 * b as u64;
            }
            *o = (acc % p) as u32;
        }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let mut out = vec![0; self.rows];
        self.apply_into(v, &mut out);
        out
    }
}

/// Row-reduces `rows` in place; returns the pivot column of each nonzero row.
/// Afterwards the first `pivots.len()` rows are the reduced echelon basis.
fn rref_rows(rows: &mut [Vec<u32>], p: u32, companion: Option<&mut [Vec<u32>]>) -> Vec<usize> {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut comp = companion;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        if let Some(cm) = comp.as_deref_mut() {
            cm.swap(r, sel);
        }
        let inv = inv_mod(rows[r][c], p);
        for v in rows[r].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        if let Some(cm) = comp.as_deref_mut() {
            for v in cm[r].iter_mut() {
                *v = mul_mod(*v, inv, p);
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c] == 0 {
                continue;
            }
            let f = rows[i][c];
            for j in 0..cols {
                let sub = mul_mod(f, rows[r][j], p);
                rows[i][j] = (rows[i][j] + p - sub) % p;
            }
            if let Some(cm) = comp.as_deref_mut() {
                let width = cm[r].len();
                for j in 0..width {
                    let sub = mul_mod(f, cm[r][j], p);
                    cm[i][j] = (cm[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// An F_p-subspace of F_p^n held as a canonical reduced echelon basis.
///
/// Two subspaces are equal as sets iff their bases are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    p: u32,
    dim_ambient: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(p: u32, dim_ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let mut rows: Vec<Vec<u32>> = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
        let pivots = if rows.is_empty() { Vec::new() } else { rref_rows(&mut rows, p, None) };
        rows.truncate(pivots.len());
        Subspace { p, dim_ambient, basis: rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let p = self.p;
        let mut r: Vec<u32> = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let f = r[c];
            if f == 0 {
                continue;
            }
            for (x, &b) in r.iter_mut().zip(row) {
                *x = (*x + p - mul_mod(f, b, p)) % p;
            }
        }
        r.iter().all(|&x| x == 0)
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }
}

/// A linear endomorphism of F_p^n, reduced once so that image membership,
/// preimages and the kernel are cheap afterwards.
#[derive(Debug, Clone)]
pub struct LinearMap {
    p: u32,
    n: usize,
    /// Reduced echelon form R = E * A.
    reduced: Vec<Vec<u32>>,
    /// The row operations E.
    ops: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl LinearMap {
    pub fn new(matrix: &Matrix) -> Self {
        let p = matrix.p;
        let n = matrix.rows();
        assert_eq!(n, matrix.cols());
        let mut reduced: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| matrix.get(i, j)).collect()).collect();
        let mut ops: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        let pivots = rref_rows(&mut reduced, p, Some(&mut ops));
        LinearMap { p, n, reduced, ops, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel_dim(&self) -> usize {
        self.n - self.rank()
    }

    /// Rows of E past the rank annihilate exactly the image.
    #[inline]
    pub fn image_contains(&self, b: &[u32]) -> bool {
        let p = self.p as u64;
        self.ops[self.rank()..].iter().all(|row| {
            let acc: u64 = row.iter().zip(b).map(|(&e, &v)| e as u64 * v as u64).sum();
            acc.is_multiple_of(p)
        })
    }

    /// Some `y` with `A y = b`, if one exists.
    pub fn preimage(&self, b: &[u32]) -> Option<Vec<u32>> {
        if !self.image_contains(b) {
            return None;
        }
        let p = self.p as u64;
        let mut y = vec![0u32; self.n];
        for (r, &c) in self.pivots.iter().enumerate() {
            let acc: u64 = self.ops[r].iter().zip(b).map(|(&e, &v)| e as u64 * v as u64).sum();
            y[c] = (acc % p) as u32;
        }
        Some(y)
    }

    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let free: Vec<usize> = (0..self.n).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u32; self.n];
                v[f] = 1;
                for (r, &c) in self.pivots.iter().enumerate() {
                    v[c] = (p - self.reduced[r][f]) % p;
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_and_kernel_agree_with_matrix() {
        let p = 5;
        // Rank-2 map on F_5^3.
        let a = Matrix::from_columns(p, &[vec![1, 2, 3], vec![0, 1, 1], vec![1, 3, 4]]);
        let map = LinearMap::new(&a);
        assert_eq!(map.rank(), 2);
        for k in map.kernel_basis() {
            assert!(a.apply(&k).iter().all(|&x| x == 0));
        }
        let b = a.apply(&[1, 1, 0]);
        let y = map.preimage(&b).unwrap();
        assert_eq!(a.apply(&y), b);
        // Exhaustive: image membership matches the actual image.
        let image: Vec<Vec<u32>> = (0..125u32).map(|i| a.apply(&[i % 5, i / 5 % 5, i / 25])).collect();
        for i in 0..125u32 {
            let v = vec![i % 5, i / 5 % 5, i / 25];
            assert_eq!(map.image_contains(&v), image.contains(&v));
        }
    }

    #[test]
    fn subspace_span_is_canonical() {
        let s1 = Subspace::span(3, 3, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let s2 = Subspace::span(3, 3, &[vec![1, 2, 1], vec![2, 0, 1], vec![1, 1, 0]]);
        assert_eq!(s1, s2);
        assert!(s1.contains(&[1, 2, 1]));
        assert!(!s1.contains(&[1, 0, 0]));
    }
}
