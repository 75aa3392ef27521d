//! Dense matrices over ℚ and exact Gaussian elimination.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{axpy, is_zero_vector, zero_vector, Scalar, Vector};

/// A dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|c| c.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vector>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "row length mismatch");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, c) in col.iter().enumerate() {
                if !c.is_zero() {
                    m.set(i, j, c.clone());
                }
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

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.data[r * self.cols + c] = value;
    }

    pub fn add_at(&mut self, r: usize, c: usize, value: &Scalar) {
        if !value.is_zero() {
            self.data[r * self.cols + c] += value;
        }
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = zero_vector(self.rows);
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    pub fn scale(&self, a: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| a * x).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Reduced row-echelon form with unit pivots.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        Echelon { reduced: m, pivots }
    }

    /// Reduces the leading `limit` columns to reduced row-echelon form, applying the
    /// same row operations to any remaining columns. Returns pivot columns.
    fn reduce_in_place(&mut self, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..limit {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = Scalar::one() / self.get(row, col);
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            let pivot_row: Vector = self.row(row).to_vec();
            for r in 0..self.rows {
                if r == row {
                    continue;
                }
                let factor = self.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                let start = r * self.cols;
                for c in col..self.cols {
                    let pv = &pivot_row[c];
                    if !pv.is_zero() {
                        self.data[start + c] -= &factor * pv;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the null space, one vector per free column, in the standard form read
    /// off the reduced echelon matrix.
    pub fn kernel(&self) -> Vec<Vector> {
        let e = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &e.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vector(self.cols);
            v[free] = Scalar::one();
            for (r, &p) in e.pivots.iter().enumerate() {
                let a = e.reduced.get(r, free);
                if !a.is_zero() {
                    v[p] = -a.clone();
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Row-reduced basis of the column space.
    pub fn image(&self) -> Vec<Vector> {
        row_basis(&self.transpose())
    }

    /// Reduced echelon of `[self | I]`: returns the echelon of `self` together with the
    /// transform `T` satisfying `T * self = reduced`.
    pub fn echelon_with_transform(&self) -> (Echelon, Matrix) {
        let mut aug = Matrix::zeros(self.rows, self.cols + self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols + r, Scalar::one());
        }
        let pivots = aug.reduce_in_place(self.cols);
        let mut reduced = Matrix::zeros(self.rows, self.cols);
        let mut transform = Matrix::zeros(self.rows, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                reduced.set(r, c, aug.get(r, c).clone());
            }
            for c in 0..self.rows {
                transform.set(r, c, aug.get(r, self.cols + c).clone());
            }
        }
        (Echelon { reduced, pivots }, transform)
    }

    /// Some solution of `self * x = b`, or `None` if `b` is not in the image.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let solver = LinearSolver::new(self);
        solver.solve(b)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let (e, t) = self.echelon_with_transform();
        (e.rank() == self.rows).then_some(t)
    }
}

/// Reduced row-echelon basis of the row space spanned by `m`.
pub fn row_basis(m: &Matrix) -> Vec<Vector> {
    let e = m.echelon();
    (0..e.rank()).map(|r| e.reduced.row(r).to_vec()).collect()
}

/// Reduced row-echelon basis of the span of `vectors` (all of length `dim`).
pub fn span_basis(dim: usize, vectors: &[Vector]) -> Vec<Vector> {
    row_basis(&Matrix::from_rows(dim, vectors.to_vec()))
}

pub fn rank_of(dim: usize, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_rows(dim, vectors.to_vec()).rank()
}

/// Reduces `v` against a reduced row-echelon basis (rows with unit pivots).
pub fn reduce_against(v: &[Scalar], basis: &[Vector], pivots: &[usize]) -> Vector {
    let mut out = v.to_vec();
    for (row, &p) in basis.iter().zip(pivots) {
        let c = out[p].clone();
        if !c.is_zero() {
            axpy(&mut out, &-c, row);
        }
    }
    out
}

pub fn pivots_of(basis: &[Vector]) -> Vec<usize> {
    basis
        .iter()
        .map(|row| row.iter().position(|c| !c.is_zero()).expect("zero row in echelon basis"))
        .collect()
}

/// Precomputed solver for `A x = b` with a fixed `A`.
///
/// Consistency conditions for `b` are the rows of the transform below the rank.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    cols: usize,
    pivots: Vec<usize>,
    transform: Matrix,
}

impl LinearSolver {
    pub fn new(a: &Matrix) -> Self {
        let (e, transform) = a.echelon_with_transform();
        LinearSolver { cols: a.cols(), pivots: e.pivots, transform }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Left-kernel vectors `y` with `y A = 0`; `b` is in the image iff `y b = 0` for all.
    pub fn cokernel_functionals(&self) -> Vec<Vector> {
        (self.rank()..self.transform.rows()).map(|r| self.transform.row(r).to_vec()).collect()
    }

    /// Writes a particular solution as a linear map of `b`: `x = P b` when consistent.
    pub fn particular_map(&self) -> Matrix {
        let mut p = Matrix::zeros(self.cols, self.transform.rows());
        for (r, &col) in self.pivots.iter().enumerate() {
            for c in 0..self.transform.cols() {
                p.set(col, c, self.transform.get(r, c).clone());
            }
        }
        p
    }

    pub fn solve(&self, b: &[Scalar]) -> Option<Vector> {
        let tb = self.transform.apply(b);
        if !is_zero_vector(&tb[self.rank()..]) {
            return None;
        }
        let mut x = zero_vector(self.cols);
        for (r, &col) in self.pivots.iter().enumerate() {
            x[col] = tb[r].clone();
        }
        Some(x)
    }
}

/// Sparse vector keyed by an ordered index type.
pub type SparseVector<K> = BTreeMap<K, Scalar>;

pub fn sparse_axpy<K: Ord + Clone>(y: &mut SparseVector<K>, a: &Scalar, x: &SparseVector<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let entry = y.entry(k.clone()).or_insert_with(Scalar::zero);
        *entry += a * v;
        if entry.is_zero() {
            y.remove(k);
        }
    }
}

/// Incrementally built echelon basis of sparse vectors, tracking how each stored row
/// is expressed through the inserted generators.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, (SparseVector<K>, SparseVector<usize>)>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon { rows: BTreeMap::new(), inserted: 0 }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v`; returns the remainder and the combination of stored generators
    /// that was subtracted.
    fn reduce(&self, v: &SparseVector<K>) -> (SparseVector<K>, SparseVector<usize>) {
        let mut rem = v.clone();
        let mut used: SparseVector<usize> = BTreeMap::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => rem.iter().next(),
                Some(c) => rem.range((std::ops::Bound::Excluded(c.clone()), std::ops::Bound::Unbounded)).next(),
            };
            let Some((key, coeff)) = next else { break };
            let key = key.clone();
            let coeff = coeff.clone();
            if let Some((row, comb)) = self.rows.get(&key) {
                sparse_axpy(&mut rem, &-coeff.clone(), row);
                sparse_axpy(&mut used, &coeff, comb);
            }
            cursor = Some(key);
        }
        (rem, used)
    }

    /// Inserts a generator; returns whether it was independent of those before it.
    /// Generators are numbered by insertion order, counting only independent ones.
    pub fn insert(&mut self, v: &SparseVector<K>) -> bool {
        let (rem, used) = self.reduce(v);
        let Some((pivot, lead)) = rem.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Scalar::one() / lead;
        let row: SparseVector<K> = rem.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        // row = (v - used) / lead, expressed through generators.
        let mut comb: SparseVector<usize> = BTreeMap::new();
        comb.insert(self.inserted, inv.clone());
        sparse_axpy(&mut comb, &-inv, &used);
        self.rows.insert(pivot, (row, comb));
        self.inserted += 1;
        true
    }

    pub fn contains(&self, v: &SparseVector<K>) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Coordinates of `v` with respect to the independent generators, if `v` lies in
    /// their span.
    pub fn coordinates(&self, v: &SparseVector<K>) -> Option<SparseVector<usize>> {
        let (rem, used) = self.reduce(v);
        rem.is_empty().then_some(used)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }
}
