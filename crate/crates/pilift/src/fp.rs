//! Dense linear algebra over a small prime field F_p.
//!
//! Used by the table builder to split class-sum matrices into common
//! eigenspaces. Everything is deterministic: rows are processed in index
//! order and bases are kept in reduced row-echelon form.

#[derive(Debug, Clone, Copy)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Fp {
        Fp { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }

    pub fn reduce_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Smallest primitive root mod p.
    pub fn primitive_root(&self) -> u64 {
        let phi = self.p - 1;
        let primes = crate::primes::prime_divisors(phi);
        'cand: for g in 2..self.p {
            for &q in &primes {
                if self.pow(g, phi / q) == 1 {
                    continue 'cand;
                }
            }
            return g;
        }
        1 // p == 2
    }
}

/// Matrix in row-major order.
#[derive(Debug, Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Reduce in place to reduced row-echelon form; returns pivot columns.
    pub fn rref(&mut self, f: Fp) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(sel) = (row..self.rows).find(|&r| self.at(r, col) != 0) else {
                continue;
            };
            if sel != row {
                for c in 0..self.cols {
                    let tmp = self.at(row, c);
                    let v = self.at(sel, c);
                    self.set(row, c, v);
                    self.set(sel, c, tmp);
                }
            }
            let inv = f.inv(self.at(row, col));
            for c in col..self.cols {
                let v = f.mul(self.at(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && self.at(r, col) != 0 {
                    let factor = self.at(r, col);
                    for c in col..self.cols {
                        let v = f.sub(self.at(r, c), f.mul(factor, self.at(row, c)));
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Basis of the right kernel, in reduced echelon form over the free
    /// variables (deterministic).
    pub fn kernel(&self, f: Fp) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref(f);
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u64; self.cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.sub(0, m.at(r, fc));
            }
            basis.push(v);
        }
        basis
    }
}

/// A subspace of F_p^n stored as a reduced row-echelon basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub basis: Mat,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn full(n: usize) -> Subspace {
        let mut basis = Mat::zero(n, n);
        for i in 0..n {
            basis.set(i, i, 1);
        }
        Subspace {
            basis,
            pivots: (0..n).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, n: usize, f: Fp) -> Subspace {
        let mut m = Mat::zero(rows.len(), n);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        let pivots = m.rref(f);
        let dim = pivots.len();
        m.data.truncate(dim * n);
        m.rows = dim;
        Subspace { basis: m, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    /// Restriction of the operator `op` (n x n, acting on column vectors) to
    /// this subspace, in basis coordinates. Requires the subspace to be
    /// op-invariant; with an RREF basis the coordinates of a vector in the
    /// span are its entries at the pivot columns.
    pub fn restrict_operator(&self, op: &Mat, f: Fp) -> Mat {
        let k = self.dim();
        let n = self.basis.cols;
        let mut out = Mat::zero(k, k);
        for s in 0..k {
            // image op * B_s of basis vector s
            let mut img = vec![0u64; n];
            for (j, im) in img.iter_mut().enumerate() {
                let mut acc = 0u64;
                for c in 0..n {
                    let b = self.basis.at(s, c);
                    if b != 0 {
                        acc = f.add(acc, f.mul(op.at(j, c), b));
                    }
                }
                *im = acc;
            }
            // column t of the restricted matrix holds the coordinates of img
            for (t, &pc) in self.pivots.iter().enumerate() {
                out.set(t, s, img[pc]);
            }
        }
        out
    }

    /// Split into eigenspaces of the restricted operator `r` (k x k in basis
    /// coordinates). Eigenvalues are scanned in ascending order over F_p.
    pub fn split_by(&self, r: &Mat, f: Fp) -> Vec<Subspace> {
        let k = self.dim();
        let n = self.basis.cols;
        let mut pieces = Vec::new();
        let mut found = 0;
        for lambda in 0..f.p {
            if found == k {
                break;
            }
            let mut shifted = r.clone();
            for i in 0..k {
                let v = f.sub(shifted.at(i, i), lambda);
                shifted.set(i, i, v);
            }
            let ker = shifted.kernel(f);
            if ker.is_empty() {
                continue;
            }
            found += ker.len();
            // map kernel coordinates back to ambient vectors
            let rows: Vec<Vec<u64>> = ker
                .iter()
                .map(|coords| {
                    let mut v = vec![0u64; n];
                    for (s, &c) in coords.iter().enumerate() {
                        if c != 0 {
                            for (j, vj) in v.iter_mut().enumerate() {
                                *vj = f.add(*vj, f.mul(c, self.basis.at(s, j)));
                            }
                        }
                    }
                    v
                })
                .collect();
            pieces.push(Subspace::from_rows(rows, n, f));
        }
        debug_assert_eq!(found, k, "operator not diagonalizable over F_p");
        pieces
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let f = Fp::new(127);
        assert_eq!(f.mul(f.inv(5), 5), 1);
        assert_eq!(f.pow(3, 126), 1);
        let g = f.primitive_root();
        assert_eq!(f.pow(g, 126), 1);
        assert_ne!(f.pow(g, 63), 1);
        assert_ne!(f.pow(g, 42), 1);
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let f = Fp::new(7);
        // rows (1,2,3), (2,4,6) -> rank 1, kernel dim 2
        let m = Mat {
            rows: 2,
            cols: 3,
            data: vec![1, 2, 3, 2, 4, 6],
        };
        let ker = m.kernel(f);
        assert_eq!(ker.len(), 2);
        for v in ker {
            for r in 0..2 {
                let s = (0..3).fold(0, |acc, c| f.add(acc, f.mul(m.at(r, c), v[c])));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn eigen_split_diagonal() {
        let f = Fp::new(5);
        // diag(1,1,2) splits the full space into dims 2 and 1
        let op = Mat {
            rows: 3,
            cols: 3,
            data: vec![1, 0, 0, 0, 1, 0, 0, 0, 2],
        };
        let full = Subspace::full(3);
        let r = full.restrict_operator(&op, f);
        let parts = full.split_by(&r, f);
        let mut dims: Vec<usize> = parts.iter().map(|s| s.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
    }
}
