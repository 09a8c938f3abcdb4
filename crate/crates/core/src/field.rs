//! Exact dense linear algebra over a prime field F_p.

use crate::error::{Error, Result};

pub const DEFAULT_PRIME: u64 = 32003;

#[inline]
pub fn fp_add(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn fp_sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn fp_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn fp_neg(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// Inverse by Fermat; p is prime.
pub fn fp_inv(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero");
    fp_pow(a, p - 2, p)
}

pub fn fp_pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = fp_mul(acc, a, p);
        }
        a = fp_mul(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    pub rows: usize,
    pub cols: usize,
    pub p: u64,
    pub data: Vec<u64>,
}

impl std::fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FMatrix {}x{} mod {}", self.rows, self.cols, self.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl FMatrix {
    pub fn zero(rows: usize, cols: usize, p: u64) -> Self {
        FMatrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = Self::zero(n, n, p);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, p: u64) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c);
            for x in row {
                data.push(x % p);
            }
        }
        FMatrix { rows: r, cols: c, p, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix::zero(self.cols, self.rows, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    pub fn mul(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape");
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = FMatrix::zero(self.rows, other.cols, p);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = fp_mul(a, other[(k, c)], p);
                    out[(r, c)] = fp_add(out[(r, c)], v, p);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = fp_add(*a, b, self.p);
        }
        out
    }

    pub fn sub(&self, other: &FMatrix) -> FMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = fp_sub(*a, b, self.p);
        }
        out
    }

    pub fn scale(&self, s: u64) -> FMatrix {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = fp_mul(*a, s, self.p);
        }
        out
    }

    pub fn neg(&self) -> FMatrix {
        self.scale(fp_neg(1, self.p))
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = FMatrix::zero(self.rows, self.cols + other.cols, self.p);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)];
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)];
            }
        }
        out
    }

    pub fn vstack(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = FMatrix::zero(self.rows + other.rows, self.cols, self.p);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> FMatrix {
        let mut out = FMatrix::zero(rows.len(), cols.len(), self.p);
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)];
            }
        }
        out
    }

    /// Reduced row echelon form. Returns (R, pivot columns, T) with T * self = R
    /// and T invertible.
    pub fn rref(&self) -> (FMatrix, Vec<usize>, FMatrix) {
        let p = self.p;
        let mut r = self.clone();
        let mut t = FMatrix::identity(self.rows, p);
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            // find pivot row
            let mut pivot = None;
            for row in lead..self.rows {
                if r[(row, col)] != 0 {
                    pivot = Some(row);
                    break;
                }
            }
            let Some(prow) = pivot else { continue };
            r.swap_rows(prow, lead);
            t.swap_rows(prow, lead);
            let inv = fp_inv(r[(lead, col)], p);
            r.scale_row(lead, inv);
            t.scale_row(lead, inv);
            for row in 0..self.rows {
                if row != lead && r[(row, col)] != 0 {
                    let factor = r[(row, col)];
                    r.add_scaled_row(lead, row, fp_neg(factor, p));
                    t.add_scaled_row(lead, row, fp_neg(factor, p));
                }
            }
            pivots.push(col);
            lead += 1;
            if lead == self.rows {
                break;
            }
        }
        (r, pivots, t)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns span ker(self); column count = cols - rank.
    pub fn kernel_basis(&self) -> FMatrix {
        let p = self.p;
        let (r, pivots, _) = self.rref();
        let free: Vec<usize> =
            (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FMatrix::zero(self.cols, free.len(), p);
        for (j, &fc) in free.iter().enumerate() {
            k[(fc, j)] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                k[(pc, j)] = fp_neg(r[(i, fc)], p);
            }
        }
        debug_assert!(self.mul(&k).is_zero());
        k
    }

    /// Solve self * x = b; None iff inconsistent.
    pub fn solve(&self, b: &[u64]) -> Result<Option<Vec<u64>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "solve: {} rows vs b of length {}",
                self.rows,
                b.len()
            )));
        }
        let p = self.p;
        let bm = FMatrix::from_rows(b.iter().map(|&x| vec![x]).collect(), p);
        let aug = self.hstack(&bm);
        let (r, pivots, _) = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u64; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)];
        }
        Ok(Some(x))
    }

    /// Solve self * X = B for a matrix B; None iff some column is inconsistent.
    pub fn solve_matrix(&self, b: &FMatrix) -> Result<Option<FMatrix>> {
        if b.rows != self.rows {
            return Err(Error::Dimension("solve_matrix".into()));
        }
        let p = self.p;
        let aug = self.hstack(b);
        let (r, pivots, _) = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = FMatrix::zero(self.cols, b.cols, p);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(pc, j)] = r[(i, self.cols + j)];
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, if any.
    pub fn inverse(&self) -> Option<FMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let (r, pivots, t) = self.rref();
        if pivots.len() != self.rows {
            return None;
        }
        debug_assert_eq!(r, FMatrix::identity(self.rows, self.p));
        Some(t)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, r: usize, s: u64) {
        for c in 0..self.cols {
            self[(r, c)] = fp_mul(self[(r, c)], s, self.p);
        }
    }

    /// row[dst] += s * row[src]
    fn add_scaled_row(&mut self, src: usize, dst: usize, s: u64) {
        for c in 0..self.cols {
            let v = fp_mul(self[(src, c)], s, self.p);
            self[(dst, c)] = fp_add(self[(dst, c)], v, self.p);
        }
    }
}

impl std::ops::Index<(usize, usize)> for FMatrix {
    type Output = u64;
    fn index(&self, (r, c): (usize, usize)) -> &u64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut u64 {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    /// Naive forward-elimination rank, independent of rref.
    fn naive_rank(m: &FMatrix) -> usize {
        let p = m.p;
        let mut a = m.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let mut piv = None;
            for r in rank..a.rows {
                if a[(r, col)] != 0 {
                    piv = Some(r);
                    break;
                }
            }
            if let Some(pr) = piv {
                a.swap_rows(pr, rank);
                for r in (rank + 1)..a.rows {
                    if a[(r, col)] != 0 {
                        let f = fp_mul(a[(r, col)], fp_inv(a[(rank, col)], p), p);
                        a.add_scaled_row(rank, r, fp_neg(f, p));
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn rref_identity() {
        let m = FMatrix::identity(2, DEFAULT_PRIME);
        let (r, piv, t) = m.rref();
        assert_eq!(r, m);
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(t.mul(&m), r);
    }

    #[test]
    fn rref_zero() {
        let m = FMatrix::zero(3, 4, DEFAULT_PRIME);
        let (r, piv, _) = m.rref();
        assert!(r.is_zero());
        assert!(piv.is_empty());
    }

    #[test]
    fn rref_rank_matches_naive_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut m = FMatrix::zero(5, 7, DEFAULT_PRIME);
            for x in m.data.iter_mut() {
                *x = rng.gen_range(0..DEFAULT_PRIME);
            }
            let (r, piv, t) = m.rref();
            assert_eq!(piv.len(), naive_rank(&m));
            assert_eq!(t.mul(&m), r);
            // T invertible: rref of [T | I] has full pivots
            assert!(t.inverse().is_some());
        }
    }

    #[test]
    fn kernel_identity_and_zero() {
        let id = FMatrix::identity(4, DEFAULT_PRIME);
        assert_eq!(id.kernel_basis().cols, 0);
        let z = FMatrix::zero(3, 3, DEFAULT_PRIME);
        assert_eq!(z.kernel_basis().cols, 3);
    }

    #[test]
    fn kernel_of_row_vector() {
        let p = DEFAULT_PRIME;
        let m = FMatrix::from_rows(vec![vec![1, 1]], p);
        let k = m.kernel_basis();
        assert_eq!(k.cols, 1);
        // spanned by (1, p-1) up to scalar
        let s = k[(0, 0)];
        assert_ne!(s, 0);
        let scaled = k.scale(fp_inv(s, p));
        assert_eq!(scaled[(0, 0)], 1);
        assert_eq!(scaled[(1, 0)], p - 1);
    }

    #[test]
    fn solve_identity_zero_and_random() {
        let p = DEFAULT_PRIME;
        let id = FMatrix::identity(3, p);
        let b = vec![5, 6, 7];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);

        let z = FMatrix::zero(2, 2, p);
        assert!(z.solve(&[1, 0]).unwrap().is_none());

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let mut m = FMatrix::zero(4, 6, p);
            for x in m.data.iter_mut() {
                *x = rng.gen_range(0..p);
            }
            let xs: Vec<u64> = (0..6).map(|_| rng.gen_range(0..p)).collect();
            let xm = FMatrix::from_rows(xs.iter().map(|&v| vec![v]).collect(), p);
            let b = m.mul(&xm);
            let bv: Vec<u64> = (0..4).map(|r| b[(r, 0)]).collect();
            let sol = m.solve(&bv).unwrap().expect("consistent");
            let sm = FMatrix::from_rows(sol.iter().map(|&v| vec![v]).collect(), p);
            assert_eq!(m.mul(&sm), b, "residual must vanish");
        }
    }

    #[test]
    fn rank_equals_rank_of_transpose() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let mut m = FMatrix::zero(4, 6, DEFAULT_PRIME);
            for x in m.data.iter_mut() {
                *x = if rng.gen_bool(0.5) { rng.gen_range(0..DEFAULT_PRIME) } else { 0 };
            }
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn solve_dimension_mismatch_is_error() {
        let m = FMatrix::identity(3, DEFAULT_PRIME);
        assert!(m.solve(&[1, 2]).is_err());
    }
}
