//! Finite windows of chain complexes and their homology over a field.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::sparse::{SparseMatrix, SparseVec};

/// Degrees `min_degree..=max_degree` of a chain complex. `differentials[k]`
/// maps degree `min_degree + k` to the degree below; the lowest one has zero
/// rows. A degree is complete when its basis is the full basis of the
/// underlying complex in that degree.
#[derive(Clone, Debug)]
pub struct ChainComplexSlice {
    pub field: Field,
    pub min_degree: usize,
    pub dims: Vec<usize>,
    pub differentials: Vec<SparseMatrix>,
    pub complete: Vec<bool>,
}

impl ChainComplexSlice {
    pub fn new(
        field: Field,
        min_degree: usize,
        dims: Vec<usize>,
        differentials: Vec<SparseMatrix>,
        complete: Vec<bool>,
    ) -> Result<ChainComplexSlice> {
        if dims.len() != differentials.len() || dims.len() != complete.len() {
            return Err(Error::DimensionMismatch("slice arrays differ in length".into()));
        }
        for (k, d) in differentials.iter().enumerate() {
            let rows = if k == 0 { 0 } else { dims[k - 1] };
            if d.cols() != dims[k] || d.rows() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "differential out of degree {} is {}x{}, expected {}x{}",
                    min_degree + k,
                    d.rows(),
                    d.cols(),
                    rows,
                    dims[k]
                )));
            }
        }
        let s = ChainComplexSlice { field, min_degree, dims, differentials, complete };
        s.check_square_zero()?;
        Ok(s)
    }

    pub fn max_degree(&self) -> usize {
        self.min_degree + self.dims.len() - 1
    }

    fn idx(&self, degree: usize) -> Option<usize> {
        degree.checked_sub(self.min_degree).filter(|k| *k < self.dims.len())
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.idx(degree).map_or(0, |k| self.dims[k])
    }

    /// The matrix out of `degree`, if it lies in the window.
    pub fn differential(&self, degree: usize) -> Option<&SparseMatrix> {
        self.idx(degree).map(|k| &self.differentials[k])
    }

    /// Degrees below the window are zero and count as complete; degrees above
    /// it are unknown.
    pub fn is_complete(&self, degree: isize) -> bool {
        if degree < self.min_degree as isize {
            return true;
        }
        self.idx(degree as usize).is_some_and(|k| self.complete[k])
    }

    /// `d ∘ d` must vanish out of every degree whose target is complete.
    pub fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.dims.len() {
            if !self.complete[k - 1] {
                continue;
            }
            let comp = self.differentials[k - 1].mul(&self.differentials[k])?;
            if !comp.is_zero() {
                return Err(Error::InternalConsistency(format!("d∘d is nonzero out of degree {}", self.min_degree + k)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiEntry {
    pub degree: usize,
    pub betti: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub field: Field,
    pub entries: Vec<BettiEntry>,
}

impl BettiTable {
    pub fn numbers(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.betti).collect()
    }

    pub fn all_exact(&self) -> bool {
        self.entries.iter().all(|e| e.exact)
    }

    pub fn get(&self, degree: usize) -> Option<&BettiEntry> {
        self.entries.iter().find(|e| e.degree == degree)
    }

    pub fn truncated(mut self, max_degree: usize) -> BettiTable {
        self.entries.retain(|e| e.degree <= max_degree);
        self
    }
}

/// Betti numbers of every degree in the window. A degree is flagged exact
/// when it and both neighbours are complete.
pub fn homology(c: &ChainComplexSlice) -> BettiTable {
    let ranks: Vec<usize> = crate::exec::map(&c.differentials, |d| d.rank());
    let entries = (0..c.dims.len())
        .map(|k| {
            let degree = c.min_degree + k;
            let out = ranks[k];
            let inc = ranks.get(k + 1).copied().unwrap_or(0);
            let d = degree as isize;
            BettiEntry { degree, betti: c.dims[k] - out - inc, exact: c.is_complete(d - 1) && c.is_complete(d) && c.is_complete(d + 1) }
        })
        .collect();
    BettiTable { field: c.field, entries }
}

/// Cycles of `degree` that are independent modulo boundaries.
pub fn representative_cycles(c: &ChainComplexSlice, degree: usize) -> Vec<SparseVec> {
    let Some(d) = c.differential(degree) else { return Vec::new() };
    let cycles = d.kernel_basis();
    let n = c.dim(degree);
    let boundaries = match c.differential(degree + 1) {
        Some(up) => up.clone(),
        None => SparseMatrix::zero(c.field, n, 0),
    };
    let mut current = boundaries;
    let mut rank = current.rank();
    let mut reps = Vec::new();
    for z in cycles {
        let col = SparseMatrix::from_columns(c.field, n, vec![z.clone()]);
        let next = current.hcat(&col).expect("same height");
        let r = next.rank();
        if r > rank {
            reps.push(z);
            current = next;
            rank = r;
        }
    }
    reps
}

/// Outcome of comparing the map induced on homology in one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedDegree {
    pub degree: usize,
    pub source_betti: usize,
    pub target_betti: usize,
    pub induced_rank: usize,
    pub exact: bool,
}

impl InducedDegree {
    pub fn is_iso(&self) -> bool {
        self.source_betti == self.target_betti && self.induced_rank == self.source_betti
    }
}

/// Compares homology of `src` and `dst` under the chain map `f`, where
/// `f[k]` maps degree `min_degree + k` of `src` to the same degree of `dst`.
pub fn induced_on_homology(src: &ChainComplexSlice, dst: &ChainComplexSlice, f: &[SparseMatrix]) -> Result<Vec<InducedDegree>> {
    if src.min_degree != dst.min_degree {
        return Err(Error::DimensionMismatch("windows start in different degrees".into()));
    }
    let hs = homology(src);
    let ht = homology(dst);
    let top = src.max_degree().min(dst.max_degree());
    let degrees: Vec<usize> = (src.min_degree..=top).collect();
    let out = crate::exec::map(&degrees, |&degree| -> Result<InducedDegree> {
        let k = degree - src.min_degree;
        let fk = f.get(k).ok_or_else(|| Error::DimensionMismatch("chain map too short".into()))?;
        if fk.cols() != src.dim(degree) || fk.rows() != dst.dim(degree) {
            return Err(Error::DimensionMismatch(format!("chain map in degree {degree}")));
        }
        let cycles = src.differentials[k].kernel_basis();
        let images: Vec<SparseVec> = cycles.iter().map(|z| fk.apply(z)).collect();
        let img = SparseMatrix::from_columns(dst.field, dst.dim(degree), images);
        let bnd = match dst.differential(degree + 1) {
            Some(b) => b.clone(),
            None => SparseMatrix::zero(dst.field, dst.dim(degree), 0),
        };
        let base = bnd.rank();
        let induced_rank = bnd.hcat(&img)?.rank() - base;
        let se = hs.get(degree).expect("in window");
        let te = ht.get(degree).expect("in window");
        Ok(InducedDegree { degree, source_betti: se.betti, target_betti: te.betti, induced_rank, exact: se.exact && te.exact })
    });
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Scalar;

    fn circle(field: Field) -> ChainComplexSlice {
        // one vertex, one edge, zero differential
        ChainComplexSlice::new(
            field,
            0,
            vec![1, 1],
            vec![SparseMatrix::zero(field, 0, 1), SparseMatrix::zero(field, 1, 1)],
            vec![true, true],
        )
        .unwrap()
    }

    #[test]
    fn top_degree_is_not_exact() {
        let h = homology(&circle(Field::Rationals));
        assert_eq!(h.numbers(), vec![1, 1]);
        assert!(h.entries[0].exact);
        assert!(!h.entries[1].exact);
    }

    #[test]
    fn torsion_depends_on_field() {
        for (p, betti) in [(Field::Rationals, vec![1, 0, 0]), (Field::Prime(2), vec![1, 1, 1])] {
            let two: Scalar = p.from_i64(2);
            let d2 = SparseMatrix::from_entries(p, 1, 1, vec![(0, 0, two)]).unwrap();
            let c = ChainComplexSlice::new(
                p,
                0,
                vec![1, 1, 1, 0],
                vec![SparseMatrix::zero(p, 0, 1), SparseMatrix::zero(p, 1, 1), d2, SparseMatrix::zero(p, 1, 0)],
                vec![true; 4],
            )
            .unwrap();
            assert_eq!(homology(&c).truncated(2).numbers(), betti);
        }
    }

    #[test]
    fn nonzero_square_is_reported() {
        let q = Field::Rationals;
        let d1 = SparseMatrix::from_entries(q, 1, 1, vec![(0, 0, q.one())]).unwrap();
        let d2 = SparseMatrix::from_entries(q, 1, 1, vec![(0, 0, q.one())]).unwrap();
        let r = ChainComplexSlice::new(q, 0, vec![1, 1, 1], vec![SparseMatrix::zero(q, 0, 1), d1, d2], vec![true; 3]);
        assert!(matches!(r, Err(Error::InternalConsistency(_))));
    }

    #[test]
    fn representatives_span_homology() {
        let c = circle(Field::Prime(3));
        assert_eq!(representative_cycles(&c, 1).len(), 1);
        assert_eq!(representative_cycles(&c, 0).len(), 1);
    }

    #[test]
    fn zero_map_is_not_iso() {
        let q = Field::Rationals;
        let c = circle(q);
        let f = vec![SparseMatrix::identity(q, 1), SparseMatrix::zero(q, 1, 1)];
        let r = induced_on_homology(&c, &c, &f).unwrap();
        assert!(r[0].is_iso());
        assert!(!r[1].is_iso());
    }
}
