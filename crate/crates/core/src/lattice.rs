//! Integer solutions of linear systems `A x = b`.
//!
//! The matrix is brought to column echelon form `A U = H` by unimodular
//! column operations, so `x = U y` with `H y = b` solved by forward
//! substitution. Columns of `U` past the rank span the integer kernel.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense integer matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols, "row length must match");
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &x[j]).sum())
            .collect()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = -&self.data[idx];
        }
    }

    /// `col[dst] -= q * col[src]`
    fn axpy_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src) * q;
            let idx = i * self.cols + dst;
            self.data[idx] -= s;
        }
    }
}

/// Column echelon form: `H = A U` with `U` unimodular.
#[derive(Debug, Clone)]
pub struct ColumnEchelon {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// `pivots[j]` is the row of the leading entry of column `j`, for `j < rank`.
    pub pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Reduce `a` to lower column echelon form. Pivots are positive and entries
/// to the left of each pivot are reduced into `[0, pivot)`.
pub fn column_echelon(a: &IntMatrix) -> ColumnEchelon {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.cols());
    let mut pivots = Vec::new();
    let mut c = 0;
    for i in 0..h.rows() {
        if c == h.cols() {
            break;
        }
        loop {
            // smallest nonzero entry of row i among columns c..
            let best = (c..h.cols())
                .filter(|&j| !h.get(i, j).is_zero())
                .min_by_key(|&j| h.get(i, j).abs());
            let Some(best) = best else { break };
            h.swap_cols(c, best);
            u.swap_cols(c, best);
            let mut done = true;
            for j in c + 1..h.cols() {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).div_floor(h.get(i, c));
                h.axpy_col(j, c, &q);
                u.axpy_col(j, c, &q);
                if !h.get(i, j).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(i, c).is_zero() {
            continue;
        }
        if h.get(i, c).is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        for j in 0..c {
            let q = h.get(i, j).div_floor(h.get(i, c));
            h.axpy_col(j, c, &q);
            u.axpy_col(j, c, &q);
        }
        pivots.push(i);
        c += 1;
    }
    ColumnEchelon { h, u, pivots }
}

/// The solution set `particular + span_Z(kernel)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineLattice {
    pub particular: Vec<BigInt>,
    /// Kernel basis in lower column echelon form (see [`echelon_basis`]).
    pub kernel: Vec<Vec<BigInt>>,
    pub kernel_pivots: Vec<usize>,
}

/// Why `A x = b` has no integer solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Row `row` is a rational combination of earlier rows, but `b` disagrees.
    Inconsistent { row: usize },
    /// Row `row` forces a non-integer value: `residual / pivot`.
    NonIntegral { row: usize, residual: BigInt, pivot: BigInt },
}

pub fn solve(a: &IntMatrix, b: &[BigInt]) -> Result<AffineLattice, Obstruction> {
    assert_eq!(a.rows(), b.len(), "right-hand side length must match rows");
    let ech = column_echelon(a);
    let rank = ech.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    let mut next = 0;
    for (i, bi) in b.iter().enumerate() {
        let partial: BigInt = (0..next.min(rank)).map(|j| ech.h.get(i, j) * &y[j]).sum();
        let residual = bi - partial;
        if next < rank && ech.pivots[next] == i {
            let pivot = ech.h.get(i, next).clone();
            let (q, rem) = residual.div_rem(&pivot);
            if !rem.is_zero() {
                return Err(Obstruction::NonIntegral { row: i, residual, pivot });
            }
            y[next] = q;
            next += 1;
        } else if !residual.is_zero() {
            return Err(Obstruction::Inconsistent { row: i });
        }
    }
    let particular = ech.u.mul_vec(&y);
    let kernel: Vec<Vec<BigInt>> = (rank..a.cols()).map(|j| ech.u.column(j)).collect();
    let (kernel, kernel_pivots) = echelon_basis(&kernel, a.cols());
    let particular = reduce_by(&particular, &kernel, &kernel_pivots);
    Ok(AffineLattice {
        particular,
        kernel,
        kernel_pivots,
    })
}

/// Re-basis a lattice so that generator `j` has its first nonzero entry at
/// `pivots[j]`, strictly increasing, with a positive pivot. Entries of later
/// generators at earlier pivot rows are zero.
pub fn echelon_basis(gens: &[Vec<BigInt>], dim: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut m = IntMatrix::zeros(dim, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, v) in g.iter().enumerate() {
            m.set(i, j, v.clone());
        }
    }
    let ech = column_echelon(&m);
    let basis = (0..ech.rank()).map(|j| ech.h.column(j)).collect();
    (basis, ech.pivots)
}

/// Reduce `x` modulo the lattice so that its pivot coordinates lie in
/// `[0, pivot)`. This gives a canonical coset representative.
pub fn reduce_by(x: &[BigInt], basis: &[Vec<BigInt>], pivots: &[usize]) -> Vec<BigInt> {
    let mut x = x.to_vec();
    for (b, &p) in basis.iter().zip(pivots) {
        let q = x[p].div_floor(&b[p]);
        if !q.is_zero() {
            for (xi, bi) in x.iter_mut().zip(b) {
                *xi -= &q * bi;
            }
        }
    }
    x
}

impl AffineLattice {
    pub fn dimension(&self) -> usize {
        self.kernel.len()
    }

    /// The point `particular + sum c_j kernel_j`.
    pub fn point(&self, coords: &[BigInt]) -> Vec<BigInt> {
        let mut x = self.particular.clone();
        for (c, k) in coords.iter().zip(&self.kernel) {
            for (xi, ki) in x.iter_mut().zip(k) {
                *xi += c * ki;
            }
        }
        x
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        if x.len() != self.particular.len() {
            return false;
        }
        let diff: Vec<BigInt> = x.iter().zip(&self.particular).map(|(a, b)| a - b).collect();
        let reduced = reduce_by(&diff, &self.kernel, &self.kernel_pivots);
        reduced.iter().all(Zero::is_zero)
    }

    /// Every lattice point with all coordinates in `[-bound, bound]`, in
    /// lexicographic order of the kernel coordinates.
    pub fn points_in_box(&self, bound: i64) -> Vec<Vec<BigInt>> {
        let mut out = Vec::new();
        let mut x = self.particular.clone();
        self.box_rec(0, &mut x, &BigInt::from(bound), &mut out);
        out
    }

    fn box_rec(&self, j: usize, x: &mut Vec<BigInt>, bound: &BigInt, out: &mut Vec<Vec<BigInt>>) {
        // rows before the next pivot are fixed by the generators chosen so far
        let upto = self.kernel_pivots.get(j).copied().unwrap_or(x.len());
        let start = if j == 0 { 0 } else { self.kernel_pivots[j - 1] + 1 };
        if x[start..upto].iter().any(|v| v.abs() > *bound) {
            return;
        }
        if j == self.kernel.len() {
            out.push(x.clone());
            return;
        }
        let p = self.kernel_pivots[j];
        let step = &self.kernel[j][p];
        // need -bound <= x[p] + c*step <= bound
        let lo = (-bound - &x[p]).div_ceil(step);
        let hi = (bound - &x[p]).div_floor(step);
        let mut c = lo.clone();
        while c <= hi {
            for (xi, ki) in x.iter_mut().zip(&self.kernel[j]) {
                *xi += &c * ki;
            }
            self.box_rec(j + 1, x, bound, out);
            for (xi, ki) in x.iter_mut().zip(&self.kernel[j]) {
                *xi -= &c * ki;
            }
            c += 1;
        }
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn box_points_match_brute_force(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..=2),
            rhs in proptest::collection::vec(-4i64..=4, 2),
        ) {
            let a = IntMatrix::from_rows(&rows);
            let b: Vec<BigInt> = rhs[..rows.len()].iter().map(|&v| BigInt::from(v)).collect();
            let bound = 3;
            let mut brute = Vec::new();
            for x in -bound..=bound {
                for y in -bound..=bound {
                    for z in -bound..=bound {
                        let v = vec![BigInt::from(x), BigInt::from(y), BigInt::from(z)];
                        if a.mul_vec(&v) == b {
                            brute.push(v);
                        }
                    }
                }
            }
            match solve(&a, &b) {
                Ok(sol) => {
                    let mut pts = sol.points_in_box(bound);
                    pts.sort();
                    let n = pts.len();
                    pts.dedup();
                    prop_assert_eq!(n, pts.len());
                    prop_assert_eq!(pts, brute);
                }
                Err(_) => prop_assert!(brute.is_empty()),
            }
        }
    }
}
