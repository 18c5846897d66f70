//! Smith normal form over the integers.
//!
//! Matrices are dense row-major `BigInt` arrays. The reduction tracks both
//! transforms and their inverses so callers can move between the original
//! coordinates and the diagonal ones.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
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
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x.into();
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

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant of a square matrix by cofactor expansion; only used on
    /// the 2×2 and 3×3 matrices that show up in cone data.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        match self.rows {
            0 => BigInt::one(),
            1 => self[(0, 0)].clone(),
            n => {
                let mut acc = BigInt::zero();
                for j in 0..n {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let minor = self.minor(0, j);
                    let term = &self[(0, j)] * minor.det();
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
        }
    }

    fn minor(&self, row: usize, col: usize) -> IntMatrix {
        let mut m = Self::zeros(self.rows - 1, self.cols - 1);
        let mut ii = 0;
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let mut jj = 0;
            for j in 0..self.cols {
                if j == col {
                    continue;
                }
                m[(ii, jj)] = self[(i, j)].clone();
                jj += 1;
            }
            ii += 1;
        }
        m
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

    /// row[target] += q * row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * &self[(source, j)];
            self[(target, j)] += delta;
        }
    }

    /// col[target] += q * col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * &self[(i, source)];
            self[(i, target)] += delta;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = -&self[(i, j)];
            self[(i, j)] = x;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
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

/// Result of a Smith reduction: `u * a * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Number of zero diagonal slots plus the excess rows: the free rank of
    /// the cokernel `Z^rows / image(a)`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.d.rows() - self.invariant_factors().len()
    }
}

struct Reduction {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Reduction {
    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[t] += q * row[s]
    fn row_add(&mut self, t: usize, s: usize, q: &BigInt) {
        self.a.add_row(t, s, q);
        self.u.add_row(t, s, q);
        self.u_inv.add_col(s, t, &-q);
    }

    /// col[t] += q * col[s]
    fn col_add(&mut self, t: usize, s: usize, q: &BigInt) {
        self.a.add_col(t, s, q);
        self.v.add_col(t, s, q);
        self.v_inv.add_row(s, t, &-q);
    }

    fn row_negate(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        let n = self.u_inv.rows();
        for k in 0..n {
            let x = -&self.u_inv[(k, i)];
            self.u_inv[(k, i)] = x;
        }
    }

    fn pivot_position(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some(b) if self.a[b].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let rows = self.a.rows();
        let cols = self.a.cols();
        for t in 0..rows.min(cols) {
            loop {
                let Some((pi, pj)) = self.pivot_position(t) else {
                    return;
                };
                self.row_swap(t, pi);
                self.col_swap(t, pj);

                let mut dirty = false;
                for i in t + 1..rows {
                    if self.a[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.a[(i, t)].div_floor(&self.a[(t, t)]);
                    self.row_add(i, t, &-q);
                    dirty |= !self.a[(i, t)].is_zero();
                }
                for j in t + 1..cols {
                    if self.a[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.a[(t, j)].div_floor(&self.a[(t, t)]);
                    self.col_add(j, t, &-q);
                    dirty |= !self.a[(t, j)].is_zero();
                }
                if dirty {
                    continue;
                }

                // Row and column are clear; enforce divisibility of the rest.
                let pivot = self.a[(t, t)].clone();
                let offender = (t + 1..rows).find(|&i| {
                    (t + 1..cols).any(|j| !self.a[(i, j)].is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.row_negate(t);
            }
        }
    }
}

/// Computes unimodular `u`, `v` with `u * a * v` diagonal and each diagonal
/// entry dividing the next.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let mut red = Reduction {
        a: a.clone(),
        u: IntMatrix::identity(a.rows()),
        u_inv: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
        v_inv: IntMatrix::identity(a.cols()),
    };
    red.run();
    let form = SmithForm {
        u: red.u,
        u_inv: red.u_inv,
        d: red.a,
        v: red.v,
        v_inv: red.v_inv,
    };
    debug_assert!(verify(a, &form), "Smith form failed verification for {a:?}");
    form
}

/// Re-checks every identity a Smith form must satisfy.
pub fn verify(a: &IntMatrix, form: &SmithForm) -> bool {
    let product = form.u.mul(a).mul(&form.v);
    if product != form.d || !form.d.is_diagonal() {
        return false;
    }
    if form.u.mul(&form.u_inv) != IntMatrix::identity(a.rows())
        || form.v.mul(&form.v_inv) != IntMatrix::identity(a.cols())
    {
        return false;
    }
    let diag: Vec<BigInt> = (0..a.rows().min(a.cols()))
        .map(|i| form.d[(i, i)].clone())
        .collect();
    let nonneg = diag.iter().all(|x| !x.is_negative());
    let divides = diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    });
    nonneg && divides
}
