//! Exact inertia of symmetric rational matrices.
//!
//! The signature is computed by symmetric congruence elimination. Rational
//! input is first scaled to an integer matrix (a positive scalar does not
//! change the inertia), then eliminated fraction-free: after each pivot the
//! remaining block equals the current leading principal minor times the true
//! Schur complement, so every division is exact and the sign of each LDLᵀ
//! pivot is the sign of the ratio of consecutive minors.
//!
//! Pivots are chosen as the largest diagonal entry in absolute value. When
//! the remaining diagonal vanishes but an off-diagonal entry `a` does not,
//! the hyperbolic block `[[0, a], [a, 0]]` is split by the unimodular
//! congruence `row_i += row_j`, which puts `2a` on the diagonal; the two
//! pivots it produces have opposite signs.
//!
//! Arithmetic runs in `i64`, escalating to `i128` and then to `BigInt` on
//! overflow, so the result is always exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::rank_q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InertiaError {
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

/// Counts of positive, zero and negative eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_zero: usize,
    pub n_minus: usize,
}

impl Inertia {
    pub fn new(n_plus: usize, n_zero: usize, n_minus: usize) -> Self {
        Inertia { n_plus, n_zero, n_minus }
    }

    /// The inertia after adding one negative direction.
    pub fn with_extra_negative(self) -> Self {
        Inertia { n_minus: self.n_minus + 1, ..self }
    }

    pub fn dimension(&self) -> usize {
        self.n_plus + self.n_zero + self.n_minus
    }
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n_plus, self.n_zero, self.n_minus)
    }
}

/// A symmetric matrix with exact rational entries, stored as its upper triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricRationalMatrix {
    n: usize,
    upper: Vec<BigRational>,
}

impl SymmetricRationalMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricRationalMatrix { n, upper: vec![BigRational::zero(); n * (n + 1) / 2] }
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Result<Self, InertiaError> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(InertiaError::DimensionMismatch(n, row.len()));
            }
            for j in i..n {
                if rows[i][j] != rows[j][i] {
                    return Err(InertiaError::NotSymmetric(i, j));
                }
                m.set(i, j, rows[i][j].clone());
            }
        }
        Ok(m)
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self, InertiaError> {
        let q: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(&q)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.upper[self.index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        let k = self.index(i, j);
        self.upper[k] = value;
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    /// Entries as integers, when every entry is integral and fits in `i64`.
    pub fn to_integer_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let x = self.get(i, j);
                        if x.is_integer() {
                            x.to_integer().to_i64()
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// The principal submatrix on `indices`, in the given order.
    pub fn principal(&self, indices: &[usize]) -> Self {
        let mut m = Self::zeros(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate().skip(a) {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }
}

impl fmt::Display for SymmetricRationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

trait ExactInt: Clone {
    fn one() -> Self;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
    /// Division known to be exact.
    fn exact_div(&self, o: &Self) -> Option<Self>;
    fn signum(&self) -> i8;
    fn cmp_abs(&self, o: &Self) -> Ordering;
}

macro_rules! exact_prim {
    ($t:ty) => {
        impl ExactInt for $t {
            fn one() -> Self {
                1
            }
            fn checked_add(&self, o: &Self) -> Option<Self> {
                <$t>::checked_add(*self, *o)
            }
            fn checked_sub(&self, o: &Self) -> Option<Self> {
                <$t>::checked_sub(*self, *o)
            }
            fn checked_mul(&self, o: &Self) -> Option<Self> {
                <$t>::checked_mul(*self, *o)
            }
            fn exact_div(&self, o: &Self) -> Option<Self> {
                debug_assert_eq!(self % o, 0, "fraction-free division must be exact");
                <$t>::checked_div(*self, *o)
            }
            fn signum(&self) -> i8 {
                <$t>::signum(*self) as i8
            }
            fn cmp_abs(&self, o: &Self) -> Ordering {
                self.unsigned_abs().cmp(&o.unsigned_abs())
            }
        }
    };
}

exact_prim!(i64);
exact_prim!(i128);

impl ExactInt for BigInt {
    fn one() -> Self {
        One::one()
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        debug_assert!(self.is_multiple_of(o), "fraction-free division must be exact");
        Some(self / o)
    }
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn cmp_abs(&self, o: &Self) -> Ordering {
        self.abs().cmp(&o.abs())
    }
}

/// Fraction-free symmetric elimination on a full row-major `n × n` matrix,
/// using `active` (length at least `n`) as scratch.
/// Returns `None` when an intermediate value overflows `T`.
fn eliminate<T: ExactInt>(a: &mut [T], n: usize, active: &mut [usize]) -> Option<Inertia> {
    for (k, slot) in active.iter_mut().take(n).enumerate() {
        *slot = k;
    }
    let mut len = n;
    let mut prev = T::one();
    let mut prev_sign = 1i8;
    let mut out = Inertia::default();

    while len > 0 {
        let live = &active[..len];
        let mut p = live[0];
        for &i in &live[1..] {
            if a[i * n + i].cmp_abs(&a[p * n + p]) == Ordering::Greater {
                p = i;
            }
        }
        if a[p * n + p].signum() == 0 {
            let mut best: Option<(usize, usize)> = None;
            for (x, &i) in live.iter().enumerate() {
                for &j in &live[x + 1..] {
                    if a[i * n + j].signum() != 0
                        && best.is_none_or(|(bi, bj)| {
                            a[i * n + j].cmp_abs(&a[bi * n + bj]) == Ordering::Greater
                        })
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((i, j)) = best else {
                out.n_zero += len;
                break;
            };
            // row_i += row_j, col_i += col_j; the diagonal becomes 2·a_ij
            let new_ii = a[i * n + j].checked_add(&a[i * n + j])?;
            for &k in live {
                if k == i {
                    continue;
                }
                let v = a[i * n + k].checked_add(&a[j * n + k])?;
                a[i * n + k] = v.clone();
                a[k * n + i] = v;
            }
            a[i * n + i] = new_ii;
            p = i;
        }

        let piv = a[p * n + p].clone();
        let piv_sign = piv.signum();
        if piv_sign * prev_sign > 0 {
            out.n_plus += 1;
        } else {
            out.n_minus += 1;
        }
        let at = active[..len].iter().position(|&x| x == p).expect("pivot is active");
        active.copy_within(at + 1..len, at);
        len -= 1;
        let live = &active[..len];
        for (x, &i) in live.iter().enumerate() {
            for &j in &live[x..] {
                let lhs = piv.checked_mul(&a[i * n + j])?;
                let rhs = a[i * n + p].checked_mul(&a[p * n + j])?;
                let v = lhs.checked_sub(&rhs)?.exact_div(&prev)?;
                a[i * n + j] = v.clone();
                a[j * n + i] = v;
            }
        }
        prev = piv;
        prev_sign = piv_sign;
    }
    Some(out)
}

/// Largest dimension handled on the stack by [`inertia_of_integer`].
const SMALL: usize = 16;

/// Inertia of a symmetric integer matrix given in full row-major order.
///
/// Symmetry is the caller's responsibility; this is the fast path used by
/// the search.
pub fn inertia_of_integer(n: usize, entries: &[i64]) -> Inertia {
    debug_assert_eq!(entries.len(), n * n);
    if n <= SMALL {
        let mut a = [0i64; SMALL * SMALL];
        let mut active = [0usize; SMALL];
        a[..n * n].copy_from_slice(entries);
        if let Some(r) = eliminate(&mut a[..n * n], n, &mut active) {
            return r;
        }
    }
    let mut active = vec![0usize; n];
    if n > SMALL {
        if let Some(r) = eliminate(&mut entries.to_vec(), n, &mut active) {
            return r;
        }
    }
    let mut wide: Vec<i128> = entries.iter().map(|&x| x as i128).collect();
    if let Some(r) = eliminate(&mut wide, n, &mut active) {
        return r;
    }
    let mut big: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
    eliminate(&mut big, n, &mut active).expect("big integer elimination cannot overflow")
}

/// Exact signature of a symmetric rational matrix.
pub fn inertia(m: &SymmetricRationalMatrix) -> Inertia {
    let n = m.dimension();
    let den = m.upper.iter().fold(<BigInt as One>::one(), |acc, x| acc.lcm(x.denom()));
    let mut big = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j);
            big.push(x.numer() * (&den / x.denom()));
        }
    }
    let small: Option<Vec<i64>> = big.iter().map(|x| x.to_i64()).collect();
    match small {
        Some(entries) => inertia_of_integer(n, &entries),
        None => {
            let mut active = vec![0usize; n];
            eliminate(&mut big, n, &mut active).expect("big integer elimination cannot overflow")
        }
    }
}

/// Inertia of the principal submatrix on `indices`.
///
/// By Cauchy interlacing, `n_plus` of a principal submatrix never exceeds
/// `n_plus` of the whole matrix.
pub fn principal_inertia(m: &SymmetricRationalMatrix, indices: &[usize]) -> Inertia {
    inertia(&m.principal(indices))
}

/// Inertia of the leading `k × k` principal submatrix.
pub fn leading_principal_inertia(m: &SymmetricRationalMatrix, k: usize) -> Inertia {
    let idx: Vec<usize> = (0..k.min(m.dimension())).collect();
    principal_inertia(m, &idx)
}

/// `C · M · Cᵀ` for an invertible square `C`.
pub fn congruence(
    m: &SymmetricRationalMatrix,
    c: &[Vec<BigRational>],
) -> Result<SymmetricRationalMatrix, InertiaError> {
    let n = m.dimension();
    if c.len() != n {
        return Err(InertiaError::DimensionMismatch(n, c.len()));
    }
    if let Some(row) = c.iter().find(|r| r.len() != n) {
        return Err(InertiaError::DimensionMismatch(n, row.len()));
    }
    if rank_q(c, n) != n {
        return Err(InertiaError::Singular);
    }
    // (C M)_ik
    let cm: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| (0..n).map(|l| &c[i][l] * m.get(l, k)).sum())
                .collect()
        })
        .collect();
    let mut out = SymmetricRationalMatrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let v: BigRational = (0..n).map(|k| &cm[i][k] * &c[j][k]).sum();
            out.set(i, j, v);
        }
    }
    Ok(out)
}
