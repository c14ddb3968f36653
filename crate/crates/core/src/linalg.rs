//! Exact dense linear algebra over ℚ and ℤ: rank, reduced row echelon
//! form, rational kernels, saturated integer kernels and Hermite normal form.
//!
//! Everything here is sized for the small systems that arise from a single
//! complex (tens to low hundreds of unknowns), so plain dense storage is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QVec = Vec<BigRational>;
pub type ZVec = Vec<BigInt>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_q_rows(rows: &[Vec<i64>]) -> Vec<QVec> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Vec<QVec>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// Rank over ℚ of an integer matrix.
pub fn rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    let mut m = to_q_rows(rows);
    rref(&mut m, ncols).len()
}

pub fn rank_q(rows: &[QVec], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// A basis of `{x : M x = 0}` read off the reduced row echelon form:
/// one vector per free column, with a 1 in that column.
pub fn rational_kernel(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![BigRational::zero(); ncols];
            v[free] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][free].clone();
            }
            v
        })
        .collect()
}

/// Scales a rational vector to a primitive integer vector (same direction).
pub fn primitive(v: &[BigRational]) -> ZVec {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: ZVec = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The result has no zero rows, strictly increasing pivot columns, positive
/// pivots and every entry above a pivot reduced into `[0, pivot)`. It depends
/// only on the lattice, not on the generating set.
pub fn hermite(rows: Vec<ZVec>, ncols: usize) -> Vec<ZVec> {
    let mut m: Vec<ZVec> = rows.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        loop {
            // smallest nonzero entry in this column at or below `row`
            let Some(p) = (row..m.len())
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
            else {
                break;
            };
            m.swap(row, p);
            let mut done = true;
            for r in row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let quot = m[r][col].div_floor(&m[row][col]);
                let pivot_row = m[row].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                    *x -= &quot * p;
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if row < m.len() && !m[row][col].is_zero() {
            if m[row][col].is_negative() {
                for x in m[row].iter_mut() {
                    *x = -x.clone();
                }
            }
            pivots.push(col);
            row += 1;
        }
    }
    m.truncate(row);
    for (k, &col) in pivots.iter().enumerate() {
        let pivot_row = m[k].clone();
        for r in 0..k {
            let quot = m[r][col].div_floor(&pivot_row[col]);
            if quot.is_zero() {
                continue;
            }
            for (x, p) in m[r].iter_mut().zip(&pivot_row) {
                *x -= &quot * p;
            }
        }
    }
    m
}

/// A ℤ-basis, in Hermite normal form, of `{x ∈ ℤⁿ : M x = 0}`.
///
/// The lattice is saturated: its rank equals the dimension of the rational
/// kernel.
pub fn integer_kernel(rows: &[QVec], ncols: usize) -> Vec<ZVec> {
    let mut reduced = rows.to_vec();
    rref(&mut reduced, ncols);
    let constraints: Vec<ZVec> = reduced.iter().map(|r| primitive(r)).collect();
    let m = constraints.len();

    // Unimodular row operations on [Mᵀ | I]; rows whose left block vanishes
    // carry a basis of the integer kernel in their right block.
    let mut aug: Vec<ZVec> = (0..ncols)
        .map(|i| {
            let mut r: ZVec = constraints.iter().map(|c| c[i].clone()).collect();
            r.extend((0..ncols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut row = 0;
    for col in 0..m {
        loop {
            let Some(p) = (row..ncols)
                .filter(|&r| !aug[r][col].is_zero())
                .min_by(|&a, &b| aug[a][col].abs().cmp(&aug[b][col].abs()))
            else {
                break;
            };
            aug.swap(row, p);
            let mut done = true;
            for r in row + 1..ncols {
                if aug[r][col].is_zero() {
                    continue;
                }
                let quot = aug[r][col].div_floor(&aug[row][col]);
                let pivot_row = aug[row].clone();
                for (x, p) in aug[r].iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x -= &quot * p;
                    }
                }
                if !aug[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if row < ncols && !aug[row][col].is_zero() {
            row += 1;
        }
    }
    let basis = aug[row..].iter().map(|r| r[m..].to_vec()).collect();
    hermite(basis, ncols)
}

/// Solves `Σ c_i · columns[i] = rhs` when the columns are independent.
pub fn solve_in_span(columns: &[QVec], rhs: &[BigRational]) -> Option<QVec> {
    let n = rhs.len();
    let k = columns.len();
    let mut m: Vec<QVec> = (0..n)
        .map(|r| {
            let mut row: QVec = columns.iter().map(|c| c[r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, k + 1);
    if pivots.last() == Some(&k) || pivots.len() != k {
        return None;
    }
    Some(m.iter().map(|r| r[k].clone()).collect())
}

pub fn dot_z(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
