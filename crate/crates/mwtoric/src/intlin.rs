//! Exact integer linear algebra: Smith normal form with transforms, integer
//! linear solving, lattice-basis tests and chain-complex homology over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Dense integer matrix, row major, arbitrary precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
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

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero());
                    a[i][j] = q;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }
}

/// U * M * V = D with U, V unimodular and D diagonal with a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `d`, nonnegative, each entry dividing the next.
    pub diagonal: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|x| !x.is_zero()).count()
    }

    /// Elementary divisors strictly greater than 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|x| x.abs() > BigInt::one()).cloned().collect()
    }
}

/// Finitely generated abelian group: free rank plus torsion coefficients in
/// divisibility order, all >= 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{}", t));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntLinError {
    DimensionMismatch { expected: usize, got: usize },
    NotComposable,
}

impl fmt::Display for IntLinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntLinError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            IntLinError::NotComposable => write!(f, "boundary maps do not compose to zero"),
        }
    }
}

impl std::error::Error for IntLinError {}

/// Smith normal form with unimodular transforms.
///
/// Pivot choice is smallest nonzero absolute value in the remaining block,
/// which keeps entry growth moderate; signs are absorbed into `u` so the
/// diagonal is nonnegative.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let steps = rows.min(cols);
    for k in 0..steps {
        if !reduce_block(&mut a, &mut u, &mut v, k) {
            break;
        }
    }

    enforce_divisibility(&mut a, &mut u, &mut v);

    // Normalize diagonal signs into u.
    for k in 0..steps {
        if a.get(k, k).is_negative() {
            for j in 0..cols {
                let neg = -a.get(k, j).clone();
                a.set(k, j, neg);
            }
            for j in 0..rows {
                let neg = -u.get(k, j).clone();
                u.set(k, j, neg);
            }
        }
    }

    let diagonal = (0..steps).map(|k| a.get(k, k).clone()).collect();
    SmithDecomposition { u, d: a, v, diagonal }
}

/// Clears row k and column k of `a` using the smallest pivot; returns false
/// when the trailing block is entirely zero.
fn reduce_block(a: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, k: usize) -> bool {
    loop {
        let pivot = find_min_pivot(a, k);
        let (pi, pj) = match pivot {
            Some(p) => p,
            None => return false,
        };
        swap_rows(a, u, k, pi);
        swap_cols(a, v, k, pj);

        let mut dirty = false;
        for i in k + 1..a.rows {
            if !a.get(i, k).is_zero() {
                let q = div_nearest(a.get(i, k), a.get(k, k));
                row_op(a, u, i, k, &q);
                if !a.get(i, k).is_zero() {
                    dirty = true;
                }
            }
        }
        for j in k + 1..a.cols {
            if !a.get(k, j).is_zero() {
                let q = div_nearest(a.get(k, j), a.get(k, k));
                col_op(a, v, j, k, &q);
                if !a.get(k, j).is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue;
        }
        let clean = (k + 1..a.rows).all(|i| a.get(i, k).is_zero())
            && (k + 1..a.cols).all(|j| a.get(k, j).is_zero());
        if clean {
            return true;
        }
    }
}

fn find_min_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            let val = a.get(i, j).abs();
            if val.is_zero() {
                continue;
            }
            match &best {
                Some((_, _, b)) if *b <= val => {}
                _ => best = Some((i, j, val)),
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Rounded division so remainders satisfy |r| <= |b|/2.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r = r.abs() * 2;
    if two_r > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        let tmp = a.get(i, c).clone();
        a.set(i, c, a.get(j, c).clone());
        a.set(j, c, tmp);
    }
    for c in 0..u.cols {
        let tmp = u.get(i, c).clone();
        u.set(i, c, u.get(j, c).clone());
        u.set(j, c, tmp);
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.rows {
        let tmp = a.get(r, i).clone();
        a.set(r, i, a.get(r, j).clone());
        a.set(r, j, tmp);
    }
    for r in 0..v.rows {
        let tmp = v.get(r, i).clone();
        v.set(r, i, v.get(r, j).clone());
        v.set(r, j, tmp);
    }
}

/// row_i -= q * row_k, mirrored on u.
fn row_op(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    for c in 0..a.cols {
        let val = a.get(i, c) - q * a.get(k, c);
        a.set(i, c, val);
    }
    for c in 0..u.cols {
        let val = u.get(i, c) - q * u.get(k, c);
        u.set(i, c, val);
    }
}

/// col_j -= q * col_k, mirrored on v.
fn col_op(a: &mut IntMatrix, v: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    for r in 0..a.rows {
        let val = a.get(r, j) - q * a.get(r, k);
        a.set(r, j, val);
    }
    for r in 0..v.rows {
        let val = v.get(r, j) - q * v.get(r, k);
        v.set(r, j, val);
    }
}

fn enforce_divisibility(a: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix) {
    let steps = a.rows.min(a.cols);
    loop {
        let mut fixed = true;
        for i in 0..steps.saturating_sub(1) {
            let di = a.get(i, i).clone();
            let dj = a.get(i + 1, i + 1).clone();
            if di.is_zero() {
                if !dj.is_zero() {
                    swap_rows(a, u, i, i + 1);
                    swap_cols(a, v, i, i + 1);
                    fixed = false;
                }
                continue;
            }
            if dj.is_zero() {
                continue;
            }
            if dj.mod_floor(&di).is_zero() {
                continue;
            }
            // col_i += col_{i+1}, then re-diagonalize the 2x2 block.
            for r in 0..a.rows {
                let val = a.get(r, i) + a.get(r, i + 1);
                a.set(r, i, val);
            }
            for r in 0..v.rows {
                let val = v.get(r, i) + v.get(r, i + 1);
                v.set(r, i, val);
            }
            reduce_block(a, u, v, i);
            fixed = false;
        }
        if fixed {
            break;
        }
    }
}

/// Solves A x = b over the integers. Returns None when no integral solution
/// exists. When the columns of A are linearly independent the solution is
/// unique.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>, IntLinError> {
    if b.len() != a.rows {
        return Err(IntLinError::DimensionMismatch { expected: a.rows, got: b.len() });
    }
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); a.cols];
    for i in 0..a.rows {
        let d = if i < snf.diagonal.len() { snf.diagonal[i].clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !ub[i].is_zero() {
                return Ok(None);
            }
        } else {
            let (q, r) = ub[i].div_rem(&d);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        }
    }
    Ok(Some(snf.v.mul_vec(&y)))
}

/// True when the columns of `a` extend to a Z-basis of Z^rows, i.e. all
/// elementary divisors are 1.
pub fn is_lattice_basis_part(a: &IntMatrix) -> bool {
    if a.cols > a.rows {
        return false;
    }
    let snf = smith_normal_form(a);
    snf.diagonal.len() == a.cols && snf.diagonal.iter().all(|d| d.is_one())
}

/// Homology at the middle term of  C_in --d_in--> C --d_out--> C_out.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<HomologyGroup, IntLinError> {
    if d_out.cols != d_in.rows {
        return Err(IntLinError::DimensionMismatch { expected: d_out.cols, got: d_in.rows });
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(IntLinError::NotComposable);
    }
    let s_in = smith_normal_form(d_in);
    let s_out = smith_normal_form(d_out);
    let ker = d_out.cols - s_out.rank();
    let free_rank = ker - s_in.rank();
    Ok(HomologyGroup { free_rank, torsion: s_in.torsion() })
}
