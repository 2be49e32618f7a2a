//! Small dense matrices over residue rings.
//!
//! Key generation inverts matrices modulo the semiprime pq by inverting over
//! the prime fields mod p and mod q and recombining; the attack paths, which
//! know only pq, use an exact integer determinant instead.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{add_mod, crt_pair, mod_inverse, mul_mod, sub_mod};

/// Row-major matrix of residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigUint>,
}

impl ModMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ModMatrix {
            rows,
            cols,
            data: vec![BigUint::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigUint::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigUint>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        ModMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Build from column vectors.
    pub fn from_cols(cols: Vec<Vec<BigUint>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged matrix");
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[BigUint] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn reduce(&self, m: &BigUint) -> ModMatrix {
        ModMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v % m).collect(),
        }
    }

    pub fn mul_mod(&self, other: &ModMatrix, m: &BigUint) -> ModMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = ModMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigUint::zero();
                for l in 0..self.cols {
                    acc += &self[(i, l)] * &other[(l, j)];
                }
                out[(i, j)] = acc % m;
            }
        }
        out
    }

    pub fn mul_vec_mod(&self, v: &[BigUint], m: &BigUint) -> Vec<BigUint> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigUint::zero();
                for (l, x) in v.iter().enumerate() {
                    acc += &self[(i, l)] * x;
                }
                acc % m
            })
            .collect()
    }

    /// Gauss-Jordan inverse over the field Z_p (p prime). `None` when singular.
    pub fn invert_mod_prime(&self, p: &BigUint) -> Option<ModMatrix> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.reduce(p);
        let mut inv = ModMatrix::identity(n);
        for col in 0..n {
            let pivot_row = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot_row != col {
                a.swap_rows(col, pivot_row);
                inv.swap_rows(col, pivot_row);
            }
            let pivot_inv = mod_inverse(&a[(col, col)], p)?;
            for j in 0..n {
                a[(col, j)] = mul_mod(&a[(col, j)], &pivot_inv, p);
                inv[(col, j)] = mul_mod(&inv[(col, j)], &pivot_inv, p);
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let factor = a[(r, col)].clone();
                for j in 0..n {
                    let t = mul_mod(&factor, &a[(col, j)], p);
                    a[(r, j)] = sub_mod(&a[(r, j)], &t, p);
                    let t = mul_mod(&factor, &inv[(col, j)], p);
                    inv[(r, j)] = sub_mod(&inv[(r, j)], &t, p);
                }
            }
        }
        Some(inv)
    }

    /// Inverse modulo the semiprime pq, via the prime-field inverses.
    /// Available only to the party that knows the factorisation.
    pub fn invert_mod_semiprime(&self, p: &BigUint, q: &BigUint) -> Option<ModMatrix> {
        let inv_p = self.invert_mod_prime(p)?;
        let inv_q = self.invert_mod_prime(q)?;
        let mut out = ModMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = crt_pair(&inv_p[(i, j)], p, &inv_q[(i, j)], q);
            }
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ModMatrix {
    type Output = BigUint;
    fn index(&self, (i, j): (usize, usize)) -> &BigUint {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ModMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigUint {
        &mut self.data[i * self.cols + j]
    }
}

/// Exact integer determinant by fraction-free (Bareiss) elimination, reduced
/// modulo `m`. Usable without knowing the factorisation of `m`.
pub fn det_mod(columns: &[Vec<BigUint>], m: &BigUint) -> BigUint {
    let n = columns.len();
    assert!(columns.iter().all(|c| c.len() == n), "determinant of non-square matrix");
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(columns[j][i].clone())).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigUint::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact division in Bareiss elimination
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let mut det = a[n - 1][n - 1].clone();
    if sign < 0 {
        det = -det;
    }
    let m_int = BigInt::from(m.clone());
    let r = det.mod_floor(&m_int);
    r.to_biguint().expect("reduced determinant is nonnegative")
}

/// Solve the row system x^T * c = rhs^T over Z_p (p prime), i.e. c^T x = rhs.
pub fn solve_row_system_mod_prime(
    c: &ModMatrix,
    rhs: &[BigUint],
    p: &BigUint,
) -> Option<Vec<BigUint>> {
    assert_eq!(c.rows, rhs.len());
    let inv = c.invert_mod_prime(p)?;
    // x^T = rhs^T * c^{-1}
    let n = c.rows;
    Some(
        (0..n)
            .map(|j| {
                let mut acc = BigUint::zero();
                for (i, r) in rhs.iter().enumerate() {
                    acc = add_mod(&acc, &mul_mod(r, &inv[(i, j)], p), p);
                }
                acc
            })
            .collect(),
    )
}
