//! Coefficient fields and dense matrices over them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::matrix::IntMatrix;

/// A field given by a context value, so that `Z/p` can carry its modulus.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, v: &BigInt) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_int(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

/// `Z/p` for a prime `p < 2^32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::InvalidArgument(format!(
                "{p} is not a prime below 2^32"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_int(&self, v: &BigInt) -> u64 {
        v.mod_floor_u64(self.p)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| self.pow(*a, self.p - 2))
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u64().expect("residue fits")
    }
}

/// Coefficient choice for homology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficients {
    Integers,
    Rationals,
    Prime(PrimeField),
}

impl FromStr for Coefficients {
    type Err = Error;

    /// `z`, `q`, `z2` or `zp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "z" => Ok(Coefficients::Integers),
            "q" => Ok(Coefficients::Rationals),
            "z2" => Ok(Coefficients::Prime(PrimeField::new(2)?)),
            _ => match s.strip_prefix("zp:") {
                Some(p) => {
                    let p = p.parse::<u64>().map_err(|_| {
                        Error::InvalidArgument(format!("bad modulus in `{s}`"))
                    })?;
                    Ok(Coefficients::Prime(PrimeField::new(p)?))
                }
                None => Err(Error::InvalidArgument(format!(
                    "unknown coefficients `{s}`; expected z, q, z2 or zp:<p>"
                ))),
            },
        }
    }
}

impl fmt::Display for Coefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficients::Integers => f.write_str("z"),
            Coefficients::Rationals => f.write_str("q"),
            Coefficients::Prime(p) if p.modulus() == 2 => f.write_str("z2"),
            Coefficients::Prime(p) => write!(f, "zp:{}", p.modulus()),
        }
    }
}

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone + fmt::Display> fmt::Debug for FieldMatrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldMatrix {}x{} {:?}", self.rows, self.cols, self.to_strings())
    }
}

impl<E: Clone + fmt::Display> FieldMatrix<E> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    /// Row-major entries rendered as strings (`p/q` for non-integral
    /// rationals).
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<E> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }
}

impl<E: Clone + fmt::Display> FieldMatrix<E> {
    pub fn zeros<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        let mut m = FieldMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_int<F: Field<Elem = E>>(field: &F, m: &IntMatrix) -> Self {
        FieldMatrix {
            rows: m.rows(),
            cols: m.cols(),
            data: (0..m.rows())
                .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                .map(|(i, j)| field.from_int(m.get(i, j)))
                .collect(),
        }
    }

    pub fn from_columns<F: Field<Elem = E>>(field: &F, rows: usize, columns: &[Vec<E>]) -> Self {
        let mut m = FieldMatrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.data.iter().all(|v| field.is_zero(v))
    }

    /// Panics on a dimension mismatch.
    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = FieldMatrix::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !field.is_zero(b) {
                        let v = field.add(out.get(i, j), &field.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(field.zero(), |acc, j| {
                    field.add(&acc, &field.mul(self.get(i, j), &v[j]))
                })
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, field: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !field.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = field.inv(m.get(r, c)).expect("non-zero pivot");
            for j in 0..m.cols {
                let v = field.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || field.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = field.sub(m.get(i, j), &field.mul(&factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of the null space, one vector per free column in increasing
    /// order, with a one in that free position.
    pub fn kernel<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let (r, pivots) = self.rref(field);
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(r.get(row, free));
            }
            out.push(v);
        }
        out
    }

    /// Some `x` with `self · x = b`, if one exists.
    pub fn solve<F: Field<Elem = E>>(&self, field: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let mut aug = FieldMatrix::zeros(field, self.rows, self.cols + 1);
        for (i, bi) in b.iter().enumerate() {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, bi.clone());
        }
        let (r, pivots) = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = FieldMatrix::zeros(field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, field.one());
        }
        let (r, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n.saturating_sub(1)..].iter().any(|&p| p >= n) {
            return None;
        }
        let mut out = FieldMatrix::zeros(field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(out)
    }
}

impl FieldMatrix<BigRational> {
    /// Entries as integers when all are integral.
    pub fn to_integers(&self) -> Option<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let v = self.get(i, j);
                        v.is_integer().then(|| v.to_integer())
                    })
                    .collect()
            })
            .collect()
    }
}
