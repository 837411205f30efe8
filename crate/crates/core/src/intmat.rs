//! Dense integer matrices and Smith normal form with unimodular transforms.
//!
//! Everything downstream (Tate cohomology, kernels of equivariant maps,
//! flasque resolutions, the integer cross-check of the DVR oracle) reduces to
//! [`smith`], so that routine is the one place that has to be right.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl fmt::Debug for IMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IMat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for IMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Scalar multiple of the identity.
    pub fn scalar(n: usize, c: i128) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c;
        }
        m
    }

    /// Builds from rows; panics on ragged input.
    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix rows");
            data.extend_from_slice(r.as_ref());
        }
        IMat {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// `rows × cols` matrix from a flat row-major vector.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<i128>) -> Self {
        assert_eq!(data.len(), rows * cols);
        IMat { rows, cols, data }
    }

    pub fn diagonal(entries: &[i128]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i128]) -> Vec<i128> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &IMat) -> IMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IMat) -> IMat {
        assert_eq!(self.rows, other.rows);
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// `self` above `other`.
    pub fn vstack(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Concatenates blocks horizontally; `rows` fixes the height when the
    /// list is empty.
    pub fn hcat(rows: usize, blocks: &[IMat]) -> IMat {
        blocks
            .iter()
            .fold(IMat::zeros(rows, 0), |acc, b| acc.hstack(b))
    }

    /// Concatenates blocks vertically.
    pub fn vcat(cols: usize, blocks: &[IMat]) -> IMat {
        blocks
            .iter()
            .fold(IMat::zeros(0, cols), |acc, b| acc.vstack(b))
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &IMat) -> IMat {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Columns `range` as a new matrix.
    pub fn columns(&self, range: core::ops::Range<usize>) -> IMat {
        let mut out = Self::zeros(self.rows, range.len());
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    /// Rows `range` as a new matrix.
    pub fn row_block(&self, range: core::ops::Range<usize>) -> IMat {
        IMat {
            rows: range.len(),
            cols: self.cols,
            data: self.data[range.start * self.cols..range.end * self.cols].to_vec(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// `row[dst] += c·row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, c: i128) {
        for j in 0..self.cols {
            let v = self[(src, j)];
            self[(dst, j)] = checked(self[(dst, j)], c, v);
        }
    }

    /// `col[dst] += c·col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, c: i128) {
        for i in 0..self.rows {
            let v = self[(i, src)];
            self[(i, dst)] = checked(self[(i, dst)], c, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

fn checked(acc: i128, c: i128, v: i128) -> i128 {
    c.checked_mul(v)
        .and_then(|x| acc.checked_add(x))
        .expect("integer overflow in exact matrix reduction")
}

/// `P·A·Q = D` with `P`, `Q` unimodular and `D` diagonal, `d_1 | d_2 | …`,
/// all diagonal entries nonnegative and the nonzero ones first.
#[derive(Clone, Debug)]
pub struct Smith {
    pub d: IMat,
    pub p: IMat,
    pub q: IMat,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<i128> {
        (0..self.rank).map(|i| self.d[(i, i)]).collect()
    }

    /// Invariant factors different from 1: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<i128> {
        self.invariant_factors().into_iter().filter(|&x| x != 1).collect()
    }
}

/// Smith normal form with transforms.
pub fn smith(a: &IMat) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut p = IMat::identity(m);
    let mut q = IMat::identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // Pivot: smallest nonzero absolute value in the trailing block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let v = d[(i, j)];
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < d[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        p.swap_rows(t, pi);
        d.swap_cols(t, pj);
        q.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                let v = d[(i, t)];
                if v == 0 {
                    continue;
                }
                let c = v.div_euclid(d[(t, t)]);
                d.add_row(i, t, -c);
                p.add_row(i, t, -c);
                if d[(i, t)] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let v = d[(t, j)];
                if v == 0 {
                    continue;
                }
                let c = v.div_euclid(d[(t, t)]);
                d.add_col(j, t, -c);
                q.add_col(j, t, -c);
                if d[(t, j)] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                move_min_to_pivot(&mut d, &mut p, &mut q, t);
                continue;
            }
            // Row and column clear; enforce divisibility of the rest.
            let piv = d[(t, t)];
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[(i, j)] % piv != 0));
            match bad {
                Some(i) => {
                    d.add_row(t, i, 1);
                    p.add_row(t, i, 1);
                }
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            p.negate_row(t);
        }
        t += 1;
    }
    Smith { d, p, q, rank: t }
}

/// Moves the smallest nonzero entry of row `t` / column `t` onto `(t, t)`.
fn move_min_to_pivot(d: &mut IMat, p: &mut IMat, q: &mut IMat, t: usize) {
    let mut best = (t, t);
    for i in t..d.rows {
        let v = d[(i, t)];
        if v != 0 && v.abs() < d[best].abs() {
            best = (i, t);
        }
    }
    for j in t..d.cols {
        let v = d[(t, j)];
        if v != 0 && v.abs() < d[best].abs() {
            best = (t, j);
        }
    }
    if best.0 != t {
        d.swap_rows(t, best.0);
        p.swap_rows(t, best.0);
    }
    if best.1 != t {
        d.swap_cols(t, best.1);
        q.swap_cols(t, best.1);
    }
}

pub fn rank(a: &IMat) -> usize {
    smith(a).rank
}

/// Nonzero invariant factors of `a` in divisibility order.
pub fn smith_diagonal(a: &IMat) -> Vec<i128> {
    smith(a).invariant_factors()
}

/// Torsion invariant factors (those `> 1`) of `ℤ^rows / im(a)`.
pub fn cokernel_torsion(a: &IMat) -> Vec<i128> {
    smith(a).torsion()
}

/// Basis of `{x : a·x = 0}` as columns. The basis is saturated: it extends
/// to a basis of `ℤ^cols`.
pub fn kernel(a: &IMat) -> IMat {
    let s = smith(a);
    s.q.columns(s.rank..a.cols)
}

/// Some integer `x` with `a·x = b`, or `None`.
pub fn solve(a: &IMat, b: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(a.rows, b.len());
    solve_with(&smith(a), b)
}

fn solve_with(s: &Smith, b: &[i128]) -> Option<Vec<i128>> {
    let pb = s.p.mul_vec(b);
    let mut y = vec![0i128; s.q.rows];
    for (i, &v) in pb.iter().enumerate() {
        if i < s.rank {
            let di = s.d[(i, i)];
            if v % di != 0 {
                return None;
            }
            y[i] = v / di;
        } else if v != 0 {
            return None;
        }
    }
    Some(s.q.mul_vec(&y))
}

/// Integer `X` with `a·X = b` (column by column), or `None`.
pub fn solve_matrix(a: &IMat, b: &IMat) -> Option<IMat> {
    assert_eq!(a.rows, b.rows);
    let s = smith(a);
    let mut x = IMat::zeros(a.cols, b.cols);
    for j in 0..b.cols {
        let col = solve_with(&s, &b.column(j))?;
        for (i, v) in col.into_iter().enumerate() {
            x[(i, j)] = v;
        }
    }
    Some(x)
}

/// Inverse of a unimodular matrix; `None` if `a` is not invertible over ℤ.
pub fn inverse(a: &IMat) -> Option<IMat> {
    if !a.is_square() {
        return None;
    }
    let s = smith(a);
    if s.rank != a.rows || s.invariant_factors().iter().any(|&x| x != 1) {
        return None;
    }
    // P·A·Q = I, so A⁻¹ = Q·P.
    Some(s.q.mul(&s.p))
}

/// Determinant by fraction-free elimination (Bareiss).
pub fn det(a: &IMat) -> i128 {
    assert!(a.is_square());
    let n = a.rows;
    if n == 0 {
        return 1;
    }
    let mut m = a.clone();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[(k, k)] == 0 {
            match (k + 1..n).find(|&i| m[(i, k)] != 0) {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[(i, j)] = (m[(i, j)] * m[(k, k)] - m[(i, k)] * m[(k, j)]) / prev;
            }
        }
        prev = m[(k, k)];
    }
    sign * m[(n - 1, n - 1)]
}

/// True when the columns of `a` span a saturated sublattice of rank
/// `a.cols()` (all invariant factors equal to 1).
pub fn is_primitive(a: &IMat) -> bool {
    let s = smith(a);
    s.rank == a.cols && s.invariant_factors().iter().all(|&x| x == 1)
}

/// True when the columns of `a` generate `ℤ^rows`.
pub fn is_surjective(a: &IMat) -> bool {
    let s = smith(a);
    s.rank == a.rows && s.invariant_factors().iter().all(|&x| x == 1)
}
