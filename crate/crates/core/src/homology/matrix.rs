//! Dense integer matrices with arbitrary-precision entries and Smith normal
//! form.

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
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect()
    }

    /// Panics on a dimension mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
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

    /// `row[dst] += factor · row[src]`.
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j];
            if !v.is_zero() {
                let delta = v * factor;
                self.data[dst * self.cols + j] += delta;
            }
        }
    }

    /// `col[dst] += factor · col[src]`.
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src];
            if !v.is_zero() {
                let delta = v * factor;
                self.data[i * self.cols + dst] += delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = -v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries(self.to_rows().iter().map(|r| {
                r.iter().map(ToString::to_string).collect::<Vec<_>>()
            }))
            .finish()
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with positive
/// invariant factors `d_1 | d_2 | … | d_r` followed by zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }
}

struct Transforms<'a> {
    u: &'a mut IntMatrix,
    v: &'a mut IntMatrix,
}

/// Reduces `m` in place to Smith form, mirroring row operations into `U` and
/// column operations into `V` when given. Pivots are chosen by least absolute
/// value.
fn reduce(m: &mut IntMatrix, mut tf: Option<Transforms<'_>>) {
    let (rows, cols) = (m.rows, m.cols);
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(m, t, t..rows, t..cols) else {
            break;
        };
        move_pivot(m, &mut tf, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m.get(i, t).is_zero() {
                    continue;
                }
                let q = m.get(i, t) / m.get(t, t);
                if !q.is_zero() {
                    let neg = -q;
                    m.add_row(i, t, &neg);
                    if let Some(tf) = tf.as_mut() {
                        tf.u.add_row(i, t, &neg);
                    }
                }
                if !m.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m.get(t, j).is_zero() {
                    continue;
                }
                let q = m.get(t, j) / m.get(t, t);
                if !q.is_zero() {
                    let neg = -q;
                    m.add_col(j, t, &neg);
                    if let Some(tf) = tf.as_mut() {
                        tf.v.add_col(j, t, &neg);
                    }
                }
                if !m.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // A remainder smaller than the pivot is left in row or column t.
                let (pi, pj) = smallest_in_cross(m, t);
                move_pivot(m, &mut tf, t, pi, pj);
                continue;
            }
            // Row and column t are clear; enforce divisibility of the rest.
            let pivot = m.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !m.get(i, j).is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    m.add_row(t, i, &one);
                    if let Some(tf) = tf.as_mut() {
                        tf.u.add_row(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if m.get(t, t).is_negative() {
            m.negate_row(t);
            if let Some(tf) = tf.as_mut() {
                tf.u.negate_row(t);
            }
        }
    }
}

fn min_abs_entry(
    m: &IntMatrix,
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < m.get(bi, bj).abs()) {
                best = Some((i, j));
                if v.abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

fn smallest_in_cross(m: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut consider = |i: usize, j: usize| {
        let v = m.get(i, j);
        if !v.is_zero() && v.abs() < m.get(best.0, best.1).abs() {
            best = (i, j);
        }
    };
    for i in t + 1..m.rows {
        consider(i, t);
    }
    for j in t + 1..m.cols {
        consider(t, j);
    }
    best
}

fn move_pivot(m: &mut IntMatrix, tf: &mut Option<Transforms<'_>>, t: usize, i: usize, j: usize) {
    m.swap_rows(t, i);
    m.swap_cols(t, j);
    if let Some(tf) = tf.as_mut() {
        tf.u.swap_rows(t, i);
        tf.v.swap_cols(t, j);
    }
}

/// Full Smith decomposition with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    reduce(
        &mut d,
        Some(Transforms {
            u: &mut u,
            v: &mut v,
        }),
    );
    SmithDecomposition { u, d, v }
}

/// Non-zero invariant factors only; cheaper than [`smith_normal_form`].
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut d = m.clone();
    reduce(&mut d, None);
    (0..d.rows.min(d.cols))
        .map(|i| d.get(i, i).clone())
        .take_while(|x| !x.is_zero())
        .collect()
}
