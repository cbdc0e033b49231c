//! Dense exact matrices, fraction-free elimination and linear solving.
//!
//! Pivoting is deterministic everywhere: columns are scanned left to right and
//! the pivot is the nonzero entry with the smallest row index.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::Scalar;

/// Errors raised by the linear-algebra layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinAlgError {
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    Singular,
}

impl fmt::Display for LinAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinAlgError::DimensionMismatch { expected, found } => write!(
                f,
                "dimension mismatch: expected {}x{}, found {}x{}",
                expected.0, expected.1, found.0, found.1
            ),
            LinAlgError::Singular => f.write_str("matrix is singular"),
        }
    }
}

/// A dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::scalar(n, &Scalar::one())
    }

    /// `c·Id`.
    pub fn scalar(n: usize, c: &Scalar) -> Self {
        let mut m = Matrix::zeros(n, n);
        for k in 0..n {
            m.set(k, k, c.clone());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    /// The matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        Matrix::from_fn(rows, cols.len(), |r, c| cols[c][r].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    let v = self.get(r, c);
                    if r == c {
                        v.is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// Panics on shape mismatch.
    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Panics on shape mismatch.
    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.shape(), o.shape(), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Panics on shape mismatch.
    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let mut out = Matrix::zeros(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let b = o.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = r * out.cols + c;
                    out.data[idx] += &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                let mut acc = Scalar::zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.get(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u32) -> Matrix {
        let mut r = Matrix::identity(self.rows);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for k in 0..self.rows.min(self.cols) {
            t += self.get(k, k);
        }
        t
    }

    /// Kronecker (tensor) product `self ⊗ o`.
    pub fn kron(&self, o: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows * o.rows, self.cols * o.cols, |r, c| {
            self.get(r / o.rows, c / o.cols) * o.get(r % o.rows, c % o.cols)
        })
    }

    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut m = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    m.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Horizontal concatenation; panics on row mismatch.
    pub fn hstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.rows, o.rows, "row mismatch in hstack");
        Matrix::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                o.get(r, c - self.cols).clone()
            }
        })
    }

    /// Vertical concatenation; panics on column mismatch.
    pub fn vstack(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.cols, "column mismatch in vstack");
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix {
            rows: self.rows + o.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |r, c| self.get(r, cols[c]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), self.cols, |r, c| self.get(rows[r], c).clone())
    }

    pub fn rank(&self) -> usize {
        bareiss(self).pivots.len()
    }

    /// Determinant by fraction-free elimination; panics if not square.
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return Scalar::one();
        }
        let e = bareiss(self);
        if e.pivots.len() < self.rows {
            return Scalar::zero();
        }
        let last = e.matrix.get(self.rows - 1, self.cols - 1).clone();
        if e.swaps % 2 == 1 {
            -last
        } else {
            last
        }
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::DimensionMismatch {
                expected: (self.rows, self.rows),
                found: self.shape(),
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let aug = self.hstack(&Matrix::identity(n));
        let r = rref(&aug);
        if r.pivots.len() < n || r.pivots[n - 1] >= n {
            return Err(LinAlgError::Singular);
        }
        Ok(Matrix::from_fn(n, n, |i, j| r.matrix.get(i, n + j).clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let r = rref(self);
        kernel_from_rref(&r, self.cols)
    }

    /// A basis of the column space taken from the pivot columns of `self`.
    pub fn column_space(&self) -> Vec<Vec<Scalar>> {
        let r = bareiss(self);
        r.pivots.iter().map(|&c| self.column(c)).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Row echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    swaps: usize,
}

/// Bareiss fraction-free forward elimination.
///
/// Every update `a_ij ← (p·a_ij − a_ic·a_kj) / p_prev` is exact; on integral
/// input all intermediate entries are minors of the input.
pub fn bareiss(m: &Matrix) -> Echelon {
    let (rows, cols) = m.shape();
    let mut a = m.to_rows();
    let mut pivots = Vec::new();
    let mut prev = Scalar::one();
    let mut k = 0;
    let mut swaps = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        if p != k {
            a.swap(p, k);
            swaps += 1;
        }
        let pivot = a[k][c].clone();
        let prev_inv = prev.inv().expect("nonzero previous pivot");
        for r in k + 1..rows {
            let factor = a[r][c].clone();
            if factor.is_zero() {
                if !prev.is_one() || !pivot.is_one() {
                    let scale = &pivot * &prev_inv;
                    for j in c + 1..cols {
                        if !a[r][j].is_zero() {
                            a[r][j] = &a[r][j] * &scale;
                        }
                    }
                }
                continue;
            }
            for j in c + 1..cols {
                let v = &(&pivot * &a[r][j]) - &(&factor * &a[k][j]);
                a[r][j] = &v * &prev_inv;
            }
            a[r][c] = Scalar::zero();
        }
        prev = pivot;
        pivots.push(c);
        k += 1;
    }
    Echelon {
        matrix: Matrix::from_rows_shape(a, rows, cols),
        pivots,
        swaps,
    }
}

impl Matrix {
    fn from_rows_shape(rows_v: Vec<Vec<Scalar>>, rows: usize, cols: usize) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in rows_v {
            data.extend(r);
        }
        Matrix { rows, cols, data }
    }
}

/// Reduced row echelon form (pivots equal to one, zero above and below).
pub fn rref(m: &Matrix) -> Echelon {
    let mut e = bareiss(m);
    let cols = m.cols();
    let mut a = e.matrix.to_rows();
    for (k, &c) in e.pivots.iter().enumerate().rev() {
        let inv = a[k][c].inv().expect("pivot is nonzero");
        for j in c..cols {
            if !a[k][j].is_zero() {
                a[k][j] = &a[k][j] * &inv;
            }
        }
        for r in 0..k {
            let factor = a[r][c].clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..cols {
                if !a[k][j].is_zero() {
                    let v = &factor * &a[k][j];
                    a[r][j] -= &v;
                }
            }
        }
    }
    e.matrix = Matrix::from_rows_shape(a, m.rows(), cols);
    e
}

fn kernel_from_rref(r: &Echelon, cols: usize) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &c in &r.pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (k, &pc) in r.pivots.iter().enumerate() {
            v[pc] = -r.matrix.get(k, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolutionSet {
    Inconsistent,
    Solutions {
        particular: Vec<Scalar>,
        kernel: Vec<Vec<Scalar>>,
    },
}

impl SolutionSet {
    pub fn particular(&self) -> Option<&[Scalar]> {
        match self {
            SolutionSet::Inconsistent => None,
            SolutionSet::Solutions { particular, .. } => Some(particular),
        }
    }
}

/// Solves `A·x = b` exactly.
pub fn solve_linear(a: &Matrix, b: &[Scalar]) -> Result<SolutionSet, LinAlgError> {
    if b.len() != a.rows() {
        return Err(LinAlgError::DimensionMismatch {
            expected: (a.rows(), 1),
            found: (b.len(), 1),
        });
    }
    let n = a.cols();
    let bcol = Matrix::from_columns(a.rows(), &[b.to_vec()]);
    let r = rref(&a.hstack(&bcol));
    if r.pivots.last() == Some(&n) {
        return Ok(SolutionSet::Inconsistent);
    }
    let mut particular = vec![Scalar::zero(); n];
    for (k, &c) in r.pivots.iter().enumerate() {
        particular[c] = r.matrix.get(k, n).clone();
    }
    let coef = Echelon {
        matrix: Matrix::from_fn(r.matrix.rows(), n, |i, j| r.matrix.get(i, j).clone()),
        pivots: r.pivots.clone(),
        swaps: 0,
    };
    Ok(SolutionSet::Solutions {
        particular,
        kernel: kernel_from_rref(&coef, n),
    })
}

/// Solves `A·X = B` for a matrix unknown; `None` if inconsistent.
pub fn solve_matrix(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "row mismatch in solve_matrix");
    let n = a.cols();
    let r = rref(&a.hstack(b));
    if r.pivots.iter().any(|&c| c >= n) {
        return None;
    }
    let mut x = Matrix::zeros(n, b.cols());
    for (k, &c) in r.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x.set(c, j, r.matrix.get(k, n + j).clone());
        }
    }
    Some(x)
}

/// Reduces a spanning set to a basis (pivot vectors of the stacked columns).
pub fn span_basis(dim: usize, vecs: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if vecs.is_empty() {
        return Vec::new();
    }
    Matrix::from_columns(dim, vecs).column_space()
}

/// Basis of `span(u) ∩ span(w)` inside `K^dim`.
pub fn intersect_spans(dim: usize, u: &[Vec<Scalar>], w: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if u.is_empty() || w.is_empty() {
        return Vec::new();
    }
    let um = Matrix::from_columns(dim, u);
    let wm = Matrix::from_columns(dim, w);
    let k = um.hstack(&wm.scale(&-Scalar::one())).kernel();
    let images: Vec<Vec<Scalar>> = k.iter().map(|v| um.mul_vec(&v[..u.len()])).collect();
    span_basis(dim, &images)
}

/// Extends `basis` (assumed independent) by standard vectors to a basis of
/// `K^dim`; returns only the added vectors.
pub fn complement_basis(dim: usize, basis: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut cols: Vec<Vec<Scalar>> = basis.to_vec();
    for k in 0..dim {
        let mut e = vec![Scalar::zero(); dim];
        e[k] = Scalar::one();
        cols.push(e);
    }
    let m = Matrix::from_columns(dim, &cols);
    let piv = bareiss(&m).pivots;
    piv.into_iter()
        .filter(|&c| c >= basis.len())
        .map(|c| cols[c].clone())
        .collect()
}

/// Incremental elimination for sparse systems `Σ a_j x_j = b`.
///
/// Rows are kept fully reduced against earlier pivots as they arrive, so
/// memory and work stay proportional to the fill of the actual system.
#[derive(Clone, Debug, Default)]
pub struct SparseSystem {
    unknowns: usize,
    /// pivot column → (row with pivot coefficient 1, right-hand side)
    rows: BTreeMap<usize, (BTreeMap<usize, Scalar>, Scalar)>,
    inconsistent: bool,
}

impl SparseSystem {
    pub fn new(unknowns: usize) -> Self {
        SparseSystem {
            unknowns,
            rows: BTreeMap::new(),
            inconsistent: false,
        }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    /// Adds the equation `Σ coeffs[j]·x_j = rhs`.
    pub fn add_equation(&mut self, coeffs: BTreeMap<usize, Scalar>, rhs: Scalar) {
        let mut row: BTreeMap<usize, Scalar> =
            coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut rhs = rhs;
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, factor)) = hit else { break };
            let (prow, prhs) = &self.rows[&c];
            for (j, v) in prow {
                let e = row.entry(*j).or_insert_with(Scalar::zero);
                *e -= &(&factor * v);
                if e.is_zero() {
                    row.remove(j);
                }
            }
            rhs -= &(&factor * prhs);
        }
        let Some((&pc, pv)) = row.iter().next() else {
            if !rhs.is_zero() {
                self.inconsistent = true;
            }
            return;
        };
        let inv = pv.inv().expect("nonzero pivot");
        let row: BTreeMap<usize, Scalar> = row.iter().map(|(j, v)| (*j, v * &inv)).collect();
        let rhs = &rhs * &inv;
        // keep earlier rows free of the new pivot
        for (prow, prhs) in self.rows.values_mut() {
            if let Some(f) = prow.get(&pc).cloned() {
                for (j, v) in &row {
                    let e = prow.entry(*j).or_insert_with(Scalar::zero);
                    *e -= &(&f * v);
                    if e.is_zero() {
                        prow.remove(j);
                    }
                }
                *prhs -= &(&f * &rhs);
            }
        }
        self.rows.insert(pc, (row, rhs));
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The solution set of all equations added so far.
    pub fn solve(&self) -> SolutionSet {
        if self.inconsistent {
            return SolutionSet::Inconsistent;
        }
        let mut particular = vec![Scalar::zero(); self.unknowns];
        for (pc, (_, rhs)) in &self.rows {
            particular[*pc] = rhs.clone();
        }
        let mut kernel = Vec::new();
        for free in (0..self.unknowns).filter(|c| !self.rows.contains_key(c)) {
            let mut v = vec![Scalar::zero(); self.unknowns];
            v[free] = Scalar::one();
            for (pc, (row, _)) in &self.rows {
                if let Some(x) = row.get(&free) {
                    v[*pc] = -x.clone();
                }
            }
            kernel.push(v);
        }
        SolutionSet::Solutions { particular, kernel }
    }
}
