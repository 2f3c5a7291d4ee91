//! Arbitrary-precision integer matrices, Smith normal form, and the lattice
//! arithmetic (integer kernels, membership tests) that the homology and
//! exactness machinery is built on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(*v));
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = IntegerMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<BigInt>>) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                out.set(i, j, v.clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(dst, j) + q * self.get(src, j);
            self.set(dst, j, v);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, dst) + q * self.get(i, src);
            self.set(i, dst, v);
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `u * m * v = d` with all four transforms tracked.
///
/// `d` is diagonal with nonnegative entries in a divisibility chain
/// d1 | d2 | ... ; `u`, `v` are unimodular and `u_inv`, `v_inv` are their
/// exact inverses.
pub struct Smith {
    pub u: IntegerMatrix,
    pub u_inv: IntegerMatrix,
    pub v: IntegerMatrix,
    pub v_inv: IntegerMatrix,
    pub d: IntegerMatrix,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Smith normal form by gcd-minimizing pivot selection.
pub fn smith_normal_form(m: &IntegerMatrix) -> Smith {
    let rows = m.rows;
    let cols = m.cols;
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut u_inv = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let mut v_inv = IntegerMatrix::identity(cols);

    // Row op: d <- E d means u <- E u and u_inv <- u_inv E^{-1}.
    // Column op: d <- d E means v <- v E and v_inv <- E^{-1} v_inv.
    let mut t = 0usize;
    while t < rows.min(cols) {
        // Pick the nonzero entry of smallest absolute value in the remaining block.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d.get(i, j).is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some((pi, pj)) => {
                        if d.get(i, j).abs() < d.get(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        u_inv.swap_cols(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        'reduce: loop {
            // Clear column t below/above using the pivot.
            for i in (t + 1)..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                let q = -q;
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                u_inv.add_col_multiple(t, i, &(-&q));
                if !d.get(i, t).is_zero() {
                    // Remainder smaller than the pivot: swap it up and restart.
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    u_inv.swap_cols(t, i);
                    continue 'reduce;
                }
            }
            for j in (t + 1)..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                let q = -q;
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                v_inv.add_row_multiple(t, j, &(-&q));
                if !d.get(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    continue 'reduce;
                }
            }
            break;
        }

        // Pivot must divide every entry of the remaining block.
        let mut clean = true;
        'divis: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(d.get(i, j) % d.get(t, t)).is_zero() {
                    // Fold that row into column t and redo this step.
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    u_inv.add_col_multiple(i, t, &(-&one));
                    clean = false;
                    break 'divis;
                }
            }
        }
        if !clean {
            continue;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            for i in 0..rows {
                let w = -u_inv.get(i, t).clone();
                u_inv.set(i, t, w);
            }
        }
        t += 1;
    }
    let rank = t;
    Smith { u, u_inv, v, v_inv, d, rank }
}

/// Determinant by fraction-free (Bareiss) elimination. Used as an
/// independent check on unimodularity in tests.
pub fn determinant(m: &IntegerMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let swap = ((k + 1)..n).find(|&i| !a.get(i, k).is_zero());
            match swap {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                a.set(i, j, &num / &prev);
            }
        }
        prev = a.get(k, k).clone();
    }
    sign * a.get(n - 1, n - 1).clone()
}

/// Basis of the integer kernel `{x : m x = 0}`, returned as matrix columns.
pub fn kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let s = smith_normal_form(m);
    let n = m.cols;
    let free = n - s.rank;
    let mut out = IntegerMatrix::zeros(n, free);
    for (k, j) in ((s.rank)..n).enumerate() {
        for i in 0..n {
            out.set(i, k, s.v.get(i, j).clone());
        }
    }
    out
}

/// A finitely generated sublattice of Z^n with solvers for membership.
pub struct Lattice {
    dim: usize,
    smith: Smith,
}

impl Lattice {
    /// Lattice spanned by the columns of `gens`.
    pub fn from_columns(gens: &IntegerMatrix) -> Lattice {
        Lattice { dim: gens.rows, smith: smith_normal_form(gens) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Does `x` lie in the lattice? Solves `gens y = x` over the integers.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        assert_eq!(x.len(), self.dim);
        // u G v = d, G y = x  <=>  d (v^{-1} y) = u x
        let ux = self.smith.u.mul_vec(x);
        for (i, val) in ux.iter().enumerate() {
            if i < self.smith.rank {
                if !(val % self.smith.d.get(i, i)).is_zero() {
                    return false;
                }
            } else if !val.is_zero() {
                return false;
            }
        }
        true
    }

    /// Does this lattice contain every column of `other`?
    pub fn contains_columns(&self, other: &IntegerMatrix) -> bool {
        (0..other.cols).all(|j| self.contains(&other.column(j)))
    }

    /// Is this the full lattice Z^dim?
    pub fn is_full(&self) -> bool {
        self.smith.rank == self.dim
            && (0..self.dim).all(|i| self.smith.d.get(i, i).is_one())
    }
}

/// Equality of the sublattices spanned by the columns of `a` and of `b`.
pub fn lattices_equal(a: &IntegerMatrix, b: &IntegerMatrix) -> bool {
    assert_eq!(a.rows, b.rows);
    let la = Lattice::from_columns(a);
    let lb = Lattice::from_columns(b);
    la.contains_columns(b) && lb.contains_columns(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntegerMatrix) -> Smith {
        let s = smith_normal_form(m);
        // u m v = d
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "u*m*v != d");
        // inverses are exact
        assert_eq!(s.u.mul(&s.u_inv), IntegerMatrix::identity(m.rows));
        assert_eq!(s.v.mul(&s.v_inv), IntegerMatrix::identity(m.cols));
        // unimodular
        assert!(determinant(&s.u).abs().is_one());
        assert!(determinant(&s.v).abs().is_one());
        // diagonal, nonnegative, divisibility chain
        for i in 0..s.d.rows {
            for j in 0..s.d.cols {
                if i != j {
                    assert!(s.d.get(i, j).is_zero(), "off-diagonal entry");
                }
            }
        }
        for i in 0..s.rank {
            assert!(s.d.get(i, i) > &BigInt::zero());
            if i + 1 < s.rank {
                assert!((s.d.get(i + 1, i + 1) % s.d.get(i, i)).is_zero(), "divisibility");
            }
        }
        s
    }

    #[test]
    fn snf_worked_example() {
        // gcd of entries is 2 and |det| = 8, so the invariant factors are 2, 4.
        let m = IntegerMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let s = check_snf(&m);
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_zero_and_identity() {
        let z = IntegerMatrix::zeros(3, 2);
        let s = check_snf(&z);
        assert_eq!(s.rank, 0);
        let id = IntegerMatrix::identity(4);
        let s = check_snf(&id);
        assert_eq!(s.rank, 4);
        assert!(s.diagonal().iter().all(|d| d.is_one()));
    }

    #[test]
    fn snf_empty_shapes() {
        for (r, c) in [(0, 0), (0, 3), (3, 0)] {
            let m = IntegerMatrix::zeros(r, c);
            let s = check_snf(&m);
            assert_eq!(s.rank, 0);
        }
    }

    #[test]
    fn kernel_of_projection() {
        // x + y + z = 0 has a rank-2 kernel.
        let m = IntegerMatrix::from_rows(vec![vec![1, 1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.cols, 2);
        for j in 0..k.cols {
            let col = k.column(j);
            let img = m.mul_vec(&col);
            assert!(img.iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn lattice_membership() {
        // lattice spanned by (2,0) and (0,3)
        let g = IntegerMatrix::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let l = Lattice::from_columns(&g);
        assert!(l.contains(&[BigInt::from(4), BigInt::from(-3)]));
        assert!(!l.contains(&[BigInt::from(1), BigInt::from(0)]));
        assert!(!l.is_full());
        assert!(Lattice::from_columns(&IntegerMatrix::identity(2)).is_full());
    }

    #[test]
    fn lattice_equality_is_basis_independent() {
        let a = IntegerMatrix::from_rows(vec![vec![1, 0], vec![0, 2]]);
        let b = IntegerMatrix::from_rows(vec![vec![1, 1], vec![2, 0]]);
        // b's columns: (1,2), (1,0): span contains (0,2) = (1,2)-(1,0) and (1,0).
        assert!(lattices_equal(&a, &b));
        let c = IntegerMatrix::from_rows(vec![vec![1, 0], vec![0, 4]]);
        assert!(!lattices_equal(&a, &c));
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntegerMatrix::from_rows(vec![vec![2, 4], vec![6, 8]]);
        assert_eq!(determinant(&m), BigInt::from(-8));
        let m = IntegerMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&m), BigInt::from(-1));
    }
}
