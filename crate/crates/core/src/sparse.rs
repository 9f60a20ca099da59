//! Sparse matrices over an exact field and Markowitz elimination.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Sparse vector: sorted `(index, value)` pairs without zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Column-major sparse matrix. Each column is sorted by row and holds no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> SparseMatrix {
        SparseMatrix { rows, cols, field, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: Field, n: usize) -> SparseMatrix {
        let columns = (0..n).map(|i| vec![(i, field.one())]).collect();
        SparseMatrix { rows: n, cols: n, field, columns }
    }

    /// Builds a matrix from triples; repeated positions are summed.
    pub fn from_entries(
        field: Field,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<SparseMatrix> {
        let mut acc: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            if v.field() != field {
                return Err(Error::FieldMismatch);
            }
            let slot = acc[c].entry(r).or_insert_with(|| field.zero());
            *slot += &v;
        }
        let columns = acc.into_iter().map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Ok(SparseMatrix { rows, cols, field, columns })
    }

    /// Builds a matrix from already assembled columns, summing duplicates.
    pub fn from_columns(field: Field, rows: usize, columns: Vec<SparseVec>) -> SparseMatrix {
        let cols = columns.len();
        let columns = columns.into_iter().map(normalize_vec).collect::<Vec<_>>();
        debug_assert!(columns.iter().all(|c| c.iter().all(|(r, _)| *r < rows)));
        SparseMatrix { rows, cols, field, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.columns.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        match self.columns[c].binary_search_by_key(&r, |e| e.0) {
            Ok(i) => self.columns[c][i].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            cols[r].push((c, v.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, field: self.field, columns: cols }
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, x) in v {
            for (r, y) in &self.columns[*c] {
                let t = x * y;
                acc.entry(*r).and_modify(|s| *s += &t).or_insert(t);
            }
        }
        acc.into_iter().filter(|(_, s)| !s.is_zero()).collect()
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, field: self.field, columns })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.combine(other, &self.field.one())
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.combine(other, &-self.field.one())
    }

    fn combine(&self, other: &SparseMatrix, k: &Scalar) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut v = a.clone();
                v.extend(b.iter().map(|(r, x)| (*r, x * k)));
                normalize_vec(v)
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, field: self.field, columns })
    }

    /// Concatenates columns of `self` and `other`.
    pub fn hcat(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hcat".into()));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Ok(SparseMatrix { rows: self.rows, cols: self.cols + other.cols, field: self.field, columns })
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn rank(&self) -> usize {
        Elimination::run(self, false).pivots.len()
    }

    /// Basis of the null space, one sparse vector per free column.
    pub fn kernel_basis(&self) -> Vec<SparseVec> {
        Elimination::run(self, true).kernel()
    }
}

/// Sorts by index, merges duplicates and drops zeros.
pub fn normalize_vec(mut v: SparseVec) -> SparseVec {
    v.sort_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, x) in v {
        match out.last_mut() {
            Some((j, y)) if *j == i => *y += &x,
            _ => out.push((i, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Row-wise Gaussian elimination with Markowitz pivoting: the pivot minimises
/// `(r_i - 1)(c_j - 1)` over nonzero entries, ties going to the lowest row and
/// then the lowest column.
pub struct Elimination {
    field: Field,
    cols: usize,
    rows: Vec<BTreeMap<usize, Scalar>>,
    col_rows: Vec<BTreeSet<usize>>,
    col_count: Vec<usize>,
    active: Vec<bool>,
    /// `(row, col)` in the order chosen.
    pub pivots: Vec<(usize, usize)>,
}

impl Elimination {
    /// With `reduce_all`, eliminated columns are also cleared from earlier
    /// pivot rows, leaving a reduced echelon form.
    pub fn run(m: &SparseMatrix, reduce_all: bool) -> Elimination {
        let mut rows = vec![BTreeMap::new(); m.rows];
        let mut col_rows = vec![BTreeSet::new(); m.cols];
        for (r, c, v) in m.entries() {
            rows[r].insert(c, v.clone());
            col_rows[c].insert(r);
        }
        let col_count = col_rows.iter().map(BTreeSet::len).collect();
        let mut e = Elimination { field: m.field, cols: m.cols, rows, col_rows, col_count, active: vec![true; m.rows], pivots: Vec::new() };
        while let Some((r, c)) = e.choose_pivot() {
            e.eliminate(r, c, reduce_all);
        }
        e
    }

    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            if !self.active[r] || row.is_empty() {
                continue;
            }
            let rc = row.len() - 1;
            if rc == 0 {
                return row.keys().next().map(|c| (r, *c));
            }
            for c in row.keys() {
                let cc = self.active_count(*c) - 1;
                let cost = rc * cc;
                if best.is_none_or(|(b, _, _)| cost < b) {
                    best = Some((cost, r, *c));
                    if cost == 0 {
                        return Some((r, *c));
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    fn active_count(&self, c: usize) -> usize {
        self.col_count[c]
    }

    fn eliminate(&mut self, r: usize, c: usize, reduce_all: bool) {
        self.active[r] = false;
        for k in self.rows[r].keys() {
            self.col_count[*k] -= 1;
        }
        self.pivots.push((r, c));
        let inv = self.rows[r][&c].inv().expect("pivot is nonzero");
        let pivot_row: Vec<(usize, Scalar)> = self.rows[r].iter().map(|(k, v)| (*k, v * &inv)).collect();
        let targets: Vec<usize> = self.col_rows[c].iter().copied().filter(|t| *t != r && (reduce_all || self.active[*t])).collect();
        for t in targets {
            let live = usize::from(self.active[t]);
            let factor = self.rows[t][&c].clone();
            for (k, v) in &pivot_row {
                let delta = v * &factor;
                let entry = self.rows[t].entry(*k).or_insert_with(|| self.field.zero());
                *entry -= &delta;
                if entry.is_zero() {
                    self.rows[t].remove(k);
                    self.col_rows[*k].remove(&t);
                    self.col_count[*k] -= live;
                } else if self.col_rows[*k].insert(t) {
                    self.col_count[*k] += live;
                }
            }
        }
    }

    fn kernel(&self) -> Vec<SparseVec> {
        let pivot_col: BTreeMap<usize, usize> = self.pivots.iter().map(|(r, c)| (*c, *r)).collect();
        let mut out = Vec::new();
        for f in 0..self.cols {
            if pivot_col.contains_key(&f) {
                continue;
            }
            let mut v: SparseVec = vec![(f, self.field.one())];
            for (pc, pr) in &pivot_col {
                let row = &self.rows[*pr];
                if let Some(a) = row.get(&f) {
                    let lead = &row[pc];
                    v.push((*pc, -(a * &lead.inv().expect("pivot is nonzero"))));
                }
            }
            out.push(normalize_vec(v));
        }
        out
    }
}

/// Dense Gaussian elimination, used as an independent check of the sparse path.
pub fn dense_rank(field: Field, mut a: Vec<Vec<Scalar>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|r| !a[*r][c].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = a[rank][c].inv().expect("nonzero");
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] * &inv;
                for k in c..cols {
                    let d = &f * &a[rank][k];
                    a[r][k] -= &d;
                }
            }
        }
        rank += 1;
    }
    let _ = field;
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small_matrix(field: Field) -> impl Strategy<Value = SparseMatrix> {
        (1usize..7, 1usize..7).prop_flat_map(move |(r, c)| {
            proptest::collection::vec((0..r, 0..c, -3i64..4), 0..20).prop_map(move |es| {
                SparseMatrix::from_entries(field, r, c, es.into_iter().map(|(i, j, v)| (i, j, field.from_i64(v)))).unwrap()
            })
        })
    }

    #[test]
    fn rank_of_boundary_of_triangle() {
        let q = Field::Rationals;
        let m = SparseMatrix::from_entries(
            q,
            3,
            3,
            vec![
                (0, 0, q.from_i64(-1)),
                (1, 0, q.from_i64(1)),
                (1, 1, q.from_i64(-1)),
                (2, 1, q.from_i64(1)),
                (0, 2, q.from_i64(-1)),
                (2, 2, q.from_i64(1)),
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.kernel_basis().len(), 1);
    }

    #[test]
    fn rank_depends_on_characteristic() {
        for (p, r) in [(2u64, 1usize), (3, 2)] {
            let f = Field::Prime(p);
            let m = SparseMatrix::from_entries(f, 2, 2, vec![(0, 0, f.one()), (0, 1, f.one()), (1, 0, f.one()), (1, 1, f.from_i64(-1))])
                .unwrap();
            assert_eq!(m.rank(), r);
        }
    }

    #[test]
    fn pivot_tie_break_prefers_low_row_then_column() {
        let q = Field::Rationals;
        let m = SparseMatrix::identity(q, 3);
        let e = Elimination::run(&m, false);
        assert_eq!(e.pivots, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn out_of_range_entry_is_rejected() {
        let q = Field::Rationals;
        assert!(SparseMatrix::from_entries(q, 2, 2, vec![(2, 0, q.one())]).is_err());
        assert_eq!(SparseMatrix::from_entries(q, 2, 2, vec![(0, 0, Field::Prime(2).one())]), Err(Error::FieldMismatch));
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(m in small_matrix(Field::Rationals)) {
            prop_assert_eq!(m.rank(), dense_rank(m.field(), m.to_dense()));
        }

        #[test]
        fn sparse_rank_matches_dense_mod3(m in small_matrix(Field::Prime(3))) {
            prop_assert_eq!(m.rank(), dense_rank(m.field(), m.to_dense()));
        }

        #[test]
        fn kernel_vectors_are_annihilated(m in small_matrix(Field::Prime(5))) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.len() + m.rank(), m.cols());
            for v in &k {
                prop_assert!(m.apply(v).is_empty());
            }
            if !k.is_empty() {
                let km = SparseMatrix::from_columns(m.field(), m.cols(), k.clone());
                prop_assert_eq!(km.rank(), k.len());
            }
        }

        #[test]
        fn rank_is_transpose_invariant(m in small_matrix(Field::Rationals)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }
    }
}
