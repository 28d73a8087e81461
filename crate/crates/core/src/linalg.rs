//! Exact sparse linear algebra over the rationals.
//!
//! Elimination runs on integer rows (each rational row is cleared of
//! denominators first) and is fraction-free: a row is combined with the
//! pivot row through integer cofactors and then divided by its content, so
//! no rational arithmetic happens in the inner loop. Rows are bucketed by
//! leading column; inside a bucket the pivot with the smallest bit length
//! is chosen, fewest nonzeros breaking ties.
//!
//! [`Subspace`] keeps a reduced row echelon basis with unit pivots, so two
//! subspaces are equal exactly when their bases are equal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::gradedpoly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("map is not well defined on the quotient: source relation {0} does not land in the target relations")]
    NotWellDefined(usize),
}

/// Sparse rational vector: `(index, value)` pairs, indices strictly
/// increasing, values nonzero.
pub type SparseVec = Vec<(usize, Rational)>;

/// Sparse integer row used by the elimination kernel.
pub(crate) type IntRow = Vec<(usize, BigInt)>;

pub fn sparse_from_dense(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn dense_from_sparse(v: &SparseVec, dim: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// Clears denominators, returning a primitive integer row spanning the same
/// line.
pub(crate) fn integer_row(v: &SparseVec) -> IntRow {
    let lcm = v.iter().fold(BigInt::one(), |acc, (_, x)| acc.lcm(x.denom()));
    let mut row: IntRow = v
        .iter()
        .map(|(i, x)| (*i, x.numer() * (&lcm / x.denom())))
        .collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, x) in row.iter() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// `a * lhs - b * rhs`, merged over sorted indices.
fn combine(a: &BigInt, lhs: &IntRow, b: &BigInt, rhs: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(lhs.len() + rhs.len());
    let (mut i, mut j) = (0, 0);
    while i < lhs.len() || j < rhs.len() {
        let take_left = j >= rhs.len() || (i < lhs.len() && lhs[i].0 < rhs[j].0);
        let take_right = i >= lhs.len() || (j < rhs.len() && rhs[j].0 < lhs[i].0);
        if take_left {
            out.push((lhs[i].0, a * &lhs[i].1));
            i += 1;
        } else if take_right {
            out.push((rhs[j].0, -(b * &rhs[j].1)));
            j += 1;
        } else {
            let v = a * &lhs[i].1 - b * &rhs[j].1;
            if !v.is_zero() {
                out.push((lhs[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Eliminates the leading entry of `row` against `pivot` (same leading
/// column), returning a primitive row.
fn eliminate_lead(row: &IntRow, pivot: &IntRow) -> IntRow {
    let a = &pivot[0].1;
    let b = &row[0].1;
    let g = a.gcd(b);
    let mut out = combine(&(a / &g), row, &(b / &g), pivot);
    debug_assert!(out.first().map_or(true, |(c, _)| *c > row[0].0));
    make_primitive(&mut out);
    out
}

/// Fraction-free row echelon form. Output rows are primitive, have a
/// positive pivot entry and are sorted by pivot column.
pub(crate) fn echelon_int(ncols: usize, rows: Vec<IntRow>) -> Vec<IntRow> {
    let mut buckets: Vec<Vec<IntRow>> = vec![Vec::new(); ncols];
    for mut r in rows {
        r.retain(|(_, x)| !x.is_zero());
        if r.is_empty() {
            continue;
        }
        make_primitive(&mut r);
        let lead = r[0].0;
        buckets[lead].push(r);
    }
    let mut out = Vec::new();
    for c in 0..ncols {
        let mut bucket = std::mem::take(&mut buckets[c]);
        if bucket.is_empty() {
            continue;
        }
        let best = bucket
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| (r[0].1.bits(), r.len()))
            .map(|(i, _)| i)
            .expect("nonempty bucket");
        let pivot = bucket.swap_remove(best);
        for r in bucket {
            let reduced = eliminate_lead(&r, &pivot);
            if let Some(&(lead, _)) = reduced.first() {
                buckets[lead].push(reduced);
            }
        }
        out.push(pivot);
    }
    out
}

/// Reduced row echelon form with unit pivots from an integer echelon form.
pub(crate) fn rref_from_echelon(ncols: usize, mut rows: Vec<IntRow>) -> Vec<SparseVec> {
    let mut owner = vec![usize::MAX; ncols];
    for (idx, r) in rows.iter().enumerate() {
        owner[r[0].0] = idx;
    }
    for i in (0..rows.len()).rev() {
        loop {
            let target = rows[i]
                .iter()
                .skip(1)
                .find(|(c, _)| owner[*c] != usize::MAX)
                .map(|(c, v)| (*c, v.clone()));
            let Some((c, v)) = target else { break };
            let j = owner[c];
            let pj = rows[j][0].1.clone();
            let g = pj.gcd(&v);
            let mut next = combine(&(&pj / &g), &rows[i], &(&v / &g), &rows[j]);
            make_primitive(&mut next);
            rows[i] = next;
        }
    }
    rows.into_iter()
        .map(|r| {
            let p = r[0].1.clone();
            r.into_iter()
                .map(|(c, x)| (c, Rational::new(x, p.clone())))
                .collect()
        })
        .collect()
}

/// Sparse rational matrix, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].push((i, Rational::one()));
        }
        m
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        ExactMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| sparse_from_dense(r)).collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_dense(&dense)
    }

    /// Builds a matrix from sparse rows; entries must be sorted and in range.
    pub fn from_sparse_rows(cols: usize, data: Vec<SparseVec>) -> Self {
        assert!(data.iter().flatten().all(|(c, _)| *c < cols));
        ExactMatrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut data: Vec<SparseVec> = vec![Vec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col {
                data[*i].push((j, x.clone()));
            }
        }
        ExactMatrix {
            rows,
            cols: columns.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rational {
        self.data[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|k| self.data[i][k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols);
        let row = &mut self.data[i];
        match row.binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (j, v)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data: Vec<SparseVec> = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (j, x) in r {
                data[*j].push((i, x.clone()));
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn scale(&self, c: &Rational) -> ExactMatrix {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|r| r.iter().map(|(j, x)| (*j, x * c)).collect())
                .collect(),
        }
    }

    /// `self * v` for a sparse column vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let dense = dense_from_sparse(v, self.cols);
        let mut out = Vec::new();
        for (i, r) in self.data.iter().enumerate() {
            let s = r
                .iter()
                .fold(Rational::zero(), |acc, (j, x)| acc + x * &dense[*j]);
            if !s.is_zero() {
                out.push((i, s));
            }
        }
        out
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVec {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, _)| {
                let x = self.get(i, j);
                (!x.is_zero()).then_some((i, x))
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// One solution of `self * x = b`, if any.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::LengthMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        // Augmented rows [A | b]; a pivot in the last column means no solution.
        let aug: Vec<IntRow> = self
            .data
            .iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut v = r.clone();
                if !bi.is_zero() {
                    v.push((self.cols, bi.clone()));
                }
                integer_row(&v)
            })
            .collect();
        let rref = rref_from_echelon(self.cols + 1, echelon_int(self.cols + 1, aug));
        let mut x = vec![Rational::zero(); self.cols];
        for r in &rref {
            let (p, _) = r[0];
            if p == self.cols {
                return Ok(None);
            }
            if let Some((c, v)) = r.last() {
                if *c == self.cols {
                    x[p] = v.clone();
                }
            }
        }
        Ok(Some(x))
    }
}

/// Exact rank.
pub fn rank(m: &ExactMatrix) -> usize {
    let rows: Vec<IntRow> = m.data.iter().map(integer_row).collect();
    echelon_int(m.cols, rows).len()
}

/// Basis of the null space `{v : m v = 0}`.
pub fn kernel_basis(m: &ExactMatrix) -> Subspace {
    let rows: Vec<IntRow> = m.data.iter().map(integer_row).collect();
    let rref = rref_from_echelon(m.cols, echelon_int(m.cols, rows));
    let mut is_pivot = vec![false; m.cols];
    for r in &rref {
        is_pivot[r[0].0] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..m.cols).filter(|c| !is_pivot[*c]) {
        let mut v: SparseVec = Vec::new();
        for r in &rref {
            if let Ok(k) = r.binary_search_by_key(&free, |(c, _)| *c) {
                v.push((r[0].0, -r[k].1.clone()));
            }
        }
        v.push((free, Rational::one()));
        v.sort_by_key(|(c, _)| *c);
        vectors.push(v);
    }
    Subspace::span(m.cols, vectors)
}

/// Canonical representative of `v + s`.
pub fn reduce_mod(v: &[Rational], s: &Subspace) -> Result<Vec<Rational>, LinalgError> {
    if v.len() != s.ambient_dim() {
        return Err(LinalgError::LengthMismatch {
            expected: s.ambient_dim(),
            got: v.len(),
        });
    }
    Ok(dense_from_sparse(&s.reduce(&sparse_from_dense(v)), v.len()))
}

/// Dimension of the image of the induced map
/// `(ambient_src / rel_src) -> (ambient_dst / rel_dst)`.
pub fn image_dim_through_quotient(
    m: &ExactMatrix,
    rel_src: &Subspace,
    rel_dst: &Subspace,
) -> Result<usize, LinalgError> {
    if rel_src.ambient_dim() != m.cols() {
        return Err(LinalgError::LengthMismatch {
            expected: m.cols(),
            got: rel_src.ambient_dim(),
        });
    }
    if rel_dst.ambient_dim() != m.rows() {
        return Err(LinalgError::LengthMismatch {
            expected: m.rows(),
            got: rel_dst.ambient_dim(),
        });
    }
    for (i, b) in rel_src.basis().iter().enumerate() {
        if !rel_dst.reduce(&m.apply(b)).is_empty() {
            return Err(LinalgError::NotWellDefined(i));
        }
    }
    let images: Vec<SparseVec> = rel_src
        .complement_indices()
        .into_iter()
        .map(|j| rel_dst.reduce(&m.column(j)))
        .collect();
    Ok(Subspace::span(m.rows(), images).dim())
}

/// Linear subspace of `Q^ambient_dim` held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<SparseVec>,
    owner: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
            owner: vec![usize::MAX; ambient_dim],
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| vec![(i, Rational::one())]).collect();
        Self::from_rref(ambient_dim, basis)
    }

    /// Span of arbitrary sparse vectors.
    pub fn span(ambient_dim: usize, vectors: Vec<SparseVec>) -> Self {
        let rows = vectors.iter().map(integer_row).collect();
        Self::from_int_rows(ambient_dim, rows)
    }

    pub fn span_dense(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Self {
        Self::span(ambient_dim, vectors.iter().map(|v| sparse_from_dense(v)).collect())
    }

    pub(crate) fn from_int_rows(ambient_dim: usize, rows: Vec<IntRow>) -> Self {
        let echelon = echelon_int(ambient_dim, rows);
        Self::from_rref(ambient_dim, rref_from_echelon(ambient_dim, echelon))
    }

    fn from_rref(ambient_dim: usize, basis: Vec<SparseVec>) -> Self {
        let mut owner = vec![usize::MAX; ambient_dim];
        for (i, r) in basis.iter().enumerate() {
            owner[r[0].0] = i;
        }
        Subspace {
            ambient_dim,
            basis,
            owner,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r[0].0).collect()
    }

    pub fn is_pivot(&self, i: usize) -> bool {
        self.owner[i] != usize::MAX
    }

    /// Coordinates not occupied by a pivot; their unit vectors form a basis
    /// of the quotient.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|i| !self.is_pivot(*i)).collect()
    }

    /// Canonical representative of `v` modulo the subspace: all pivot
    /// coordinates are eliminated.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: std::collections::BTreeMap<usize, Rational> = std::collections::BTreeMap::new();
        for (c, x) in v {
            let j = self.owner[*c];
            if j == usize::MAX {
                *acc.entry(*c).or_insert_with(Rational::zero) += x;
            } else {
                for (k, y) in self.basis[j].iter().skip(1) {
                    *acc.entry(*k).or_insert_with(Rational::zero) -= x * y;
                }
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient_dim, vectors)
    }
}
