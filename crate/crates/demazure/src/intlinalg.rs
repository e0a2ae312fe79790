//! Exact integer matrices: Smith normal form, unimodular completion of a
//! row, lattice indices, and linear Diophantine solving over Z or Z/m.
//!
//! Pivoting always picks the smallest nonzero absolute value to bound
//! coefficient growth; all arithmetic is on `BigInt`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "dimensions must be positive");
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        IntMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[i * n + k].is_zero());
                match swap {
                    None => return BigInt::zero(),
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j])
                        / &prev;
                    a[i * n + j] = v;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        sign * a[n * n - 1].clone()
    }

    /// Inverse of a matrix with determinant ±1, via the adjugate.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        assert_eq!(self.rows, self.cols);
        let d = self.det();
        if !d.abs().is_one() {
            return Err(Error::NotUnimodularRow { gcd: d.to_string() });
        }
        let n = self.rows;
        if n == 1 {
            return Ok(self.clone());
        }
        let adj = IntMatrix::from_fn(n, n, |i, j| {
            // cofactor C_ji
            let minor = IntMatrix::from_fn(n - 1, n - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                self[(rr, cc)].clone()
            });
            let sgn = if (i + j) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            sgn * minor.det()
        });
        Ok(IntMatrix::from_fn(n, n, |i, j| &adj[(i, j)] * &d))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect())
            .collect();
        serde_json::json!(rows)
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

/// Smith normal form: `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal with each entry dividing the next.
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let mut d = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut v = IntMatrix::identity(a.cols);
    let n = a.rows.min(a.cols);

    for k in 0..n {
        loop {
            // smallest-absolute-value pivot in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..d.rows {
                for j in k..d.cols {
                    if !d[(i, j)].is_zero()
                        && pivot.map_or(true, |p| d[(i, j)].abs() < d[p].abs())
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish_snf(u, d, v, k);
            };
            swap_rows(&mut d, &mut u, k, pi);
            swap_cols(&mut d, &mut v, k, pj);

            let mut dirty = false;
            for i in k + 1..d.rows {
                let q = rounded_div(&d[(i, k)], &d[(k, k)]);
                if !q.is_zero() {
                    add_row(&mut d, &mut u, i, k, &-&q);
                }
                if !d[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..d.cols {
                let q = rounded_div(&d[(k, j)], &d[(k, k)]);
                if !q.is_zero() {
                    add_col(&mut d, &mut v, j, k, &-&q);
                }
                if !d[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot divides the rest of the block?
            let mut bad: Option<usize> = None;
            'scan: for i in k + 1..d.rows {
                for j in k + 1..d.cols {
                    if !(&d[(i, j)] % &d[(k, k)]).is_zero() {
                        bad = Some(i);
                        break 'scan;
                    }
                }
            }
            match bad {
                Some(i) => {
                    // fold the offending row into row k and restart
                    add_row(&mut d, &mut u, k, i, &BigInt::one());
                }
                None => break,
            }
        }
    }
    finish_snf(u, d, v, n)
}

fn finish_snf(mut u: IntMatrix, mut d: IntMatrix, v: IntMatrix, rank: usize) -> Snf {
    for k in 0..rank.min(d.rows.min(d.cols)) {
        if d[(k, k)].is_negative() {
            for j in 0..d.cols {
                let x = -&d[(k, j)];
                d[(k, j)] = x;
            }
            for j in 0..u.cols {
                let x = -&u[(k, j)];
                u[(k, j)] = x;
            }
        }
    }
    Snf { u, d, v }
}

fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    // quotient minimizing |a - q*b|
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn swap_rows(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..d.cols {
        let x = d[(a, j)].clone();
        d[(a, j)] = d[(b, j)].clone();
        d[(b, j)] = x;
    }
    for j in 0..u.cols {
        let x = u[(a, j)].clone();
        u[(a, j)] = u[(b, j)].clone();
        u[(b, j)] = x;
    }
}

fn swap_cols(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..d.rows {
        let x = d[(i, a)].clone();
        d[(i, a)] = d[(i, b)].clone();
        d[(i, b)] = x;
    }
    for i in 0..v.rows {
        let x = v[(i, a)].clone();
        v[(i, a)] = v[(i, b)].clone();
        v[(i, b)] = x;
    }
}

/// row a += c * row b, mirrored on u.
fn add_row(d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize, c: &BigInt) {
    for j in 0..d.cols {
        let x = &d[(a, j)] + c * &d[(b, j)];
        d[(a, j)] = x;
    }
    for j in 0..u.cols {
        let x = &u[(a, j)] + c * &u[(b, j)];
        u[(a, j)] = x;
    }
}

/// col a += c * col b, mirrored on v.
fn add_col(d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize, c: &BigInt) {
    for i in 0..d.rows {
        let x = &d[(i, a)] + c * &d[(i, b)];
        d[(i, a)] = x;
    }
    for i in 0..v.rows {
        let x = &v[(i, a)] + c * &v[(i, b)];
        v[(i, a)] = x;
    }
}

/// Complete an integer row of gcd 1 to a square matrix of determinant ±1
/// whose first row is the given one.
pub fn complete_unimodular_row(k: &[BigInt]) -> Result<IntMatrix> {
    let n = k.len();
    let row = IntMatrix::from_fn(1, n, |_, j| k[j].clone());
    let snf = smith_normal_form(&row);
    let g = snf.d[(0, 0)].clone();
    if !g.is_one() {
        return Err(Error::NotUnimodularRow { gcd: g.to_string() });
    }
    // k * V = ±e1, so k is ± the first row of V^{-1}; fix the sign.
    let mut m = snf.v.inverse_unimodular()?;
    if (0..n).any(|j| m[(0, j)] != k[j]) {
        for j in 0..n {
            let x = -&m[(0, j)];
            m[(0, j)] = x;
        }
    }
    assert!((0..n).all(|j| m[(0, j)] == k[j]), "completion must start with the row");
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

/// |det A| as the index of the sublattice spanned by the rows/columns,
/// `Infinite` when the determinant vanishes.
pub fn lattice_index(a: &IntMatrix) -> LatticeIndex {
    let d = a.det();
    if d.is_zero() {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(d.abs())
    }
}

/// Solve `a * x = b` over Z (modulus `None`) or Z/m.  Returns the
/// canonical solution: minimal nonnegative in the SNF parameterization,
/// free parameters zero.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt], modulus: Option<&BigInt>) -> Result<Vec<BigInt>> {
    assert_eq!(a.rows, b.len());
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let n = a.rows.min(a.cols);
    let mut y = vec![BigInt::zero(); a.cols];
    for i in 0..a.rows {
        let di = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        match modulus {
            None => {
                if di.is_zero() {
                    if !c[i].is_zero() {
                        return Err(Error::NoSolution);
                    }
                } else {
                    let (q, r) = c[i].div_rem(&di);
                    if !r.is_zero() {
                        return Err(Error::NoSolution);
                    }
                    if i < a.cols {
                        y[i] = q;
                    }
                }
            }
            Some(m) => {
                // d_i y_i = c_i (mod m)
                let g = di.gcd(m);
                let ci = c[i].mod_floor(m);
                if !(&ci % &g).is_zero() {
                    return Err(Error::NoSolution);
                }
                if di.is_zero() || i >= a.cols {
                    continue;
                }
                let m1 = m / &g;
                if m1.is_one() {
                    continue;
                }
                let d1 = (&di / &g).mod_floor(&m1);
                let c1 = (&ci / &g).mod_floor(&m1);
                let e = d1.extended_gcd(&m1);
                debug_assert!(e.gcd.is_one());
                y[i] = (c1 * e.x).mod_floor(&m1);
            }
        }
    }
    let mut x = snf.v.mul_vec(&y);
    if let Some(m) = modulus {
        for xi in &mut x {
            *xi = xi.mod_floor(m);
        }
    }
    // verify exactly
    let ax = a.mul_vec(&x);
    let ok = match modulus {
        None => ax == b,
        Some(m) => ax
            .iter()
            .zip(b)
            .all(|(l, r)| (l - r).mod_floor(m).is_zero()),
    };
    assert!(ok, "solver postcondition A x = b violated");
    Ok(x)
}

/// The invariant factors of the image lattice of `a`, i.e. the nonzero
/// diagonal of the SNF.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let snf = smith_normal_form(a);
    let n = a.rows.min(a.cols);
    (0..n)
        .map(|i| snf.d[(i, i)].clone())
        .filter(|d| !d.is_zero())
        .collect()
}

/// Smallest positive integer `t` such that `a x = t b` is solvable over Z,
/// or `None` when no multiple of `b` lies in the image.
pub fn obstruction_multiplier(a: &IntMatrix, b: &[BigInt]) -> Option<BigInt> {
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let n = a.rows.min(a.cols);
    let mut t = BigInt::one();
    for i in 0..a.rows {
        let di = if i < n { snf.d[(i, i)].clone() } else { BigInt::zero() };
        if di.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
        } else {
            let g = di.gcd(&c[i]);
            t = t.lcm(&(di / g));
        }
    }
    Some(t)
}
