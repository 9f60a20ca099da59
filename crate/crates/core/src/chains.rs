//! Normalized chains with the Alexander–Whitney coproduct.

use std::collections::BTreeMap;

use crate::coalgebra::{CoalgebraMap, SimplicialCoalgebra};
use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::homology::{homology, BettiTable, ChainComplexSlice};
use crate::simplicial::{SSet, SSetMap, SimplexId, SimplexRef};
use crate::sparse::{normalize_vec, SparseMatrix, SparseVec};

/// A basis element `(degree, index)`.
pub type Cell = (usize, usize);

/// Element of `N ⊗ N` keyed by both factors.
pub type Tensor = BTreeMap<(Cell, Cell), Scalar>;

pub fn add_term<K: Ord>(acc: &mut BTreeMap<K, Scalar>, key: K, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(&key) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            acc.insert(key, c);
        }
    }
}

/// Truncated dg coalgebra with explicit bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCoalgebra {
    pub name: String,
    pub field: Field,
    pub labels: Vec<Vec<String>>,
    /// `differential[n] : N_n → N_{n-1}`; `differential[0]` has no rows.
    pub differential: Vec<SparseMatrix>,
    pub coproduct: Vec<Vec<Vec<(Cell, Cell, Scalar)>>>,
    pub counit: Vec<Scalar>,
    pub coaugmentation: Option<usize>,
    /// Position of each basis element in the level it came from.
    pub origin: Vec<Vec<usize>>,
}

impl DgCoalgebra {
    pub fn truncation(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn label(&self, c: Cell) -> &str {
        &self.labels[c.0][c.1]
    }

    /// The underlying complex; every stored degree is complete.
    pub fn chain_complex(&self) -> Result<ChainComplexSlice> {
        ChainComplexSlice::new(self.field, 0, self.dims(), self.differential.clone(), vec![true; self.dims().len()])
    }

    pub fn coproduct_of(&self, x: Cell) -> Tensor {
        let mut t = Tensor::new();
        for (a, b, c) in &self.coproduct[x.0][x.1] {
            add_term(&mut t, (*a, *b), c.clone());
        }
        t
    }

    pub fn is_reduced_cell(&self, c: Cell) -> bool {
        c.0 > 0 || Some(c.1) != self.coaugmentation
    }

    /// `Δ̄` on a basis element of `N̄`.
    pub fn reduced_coproduct(&self, x: Cell) -> Tensor {
        let mut t = self.coproduct_of(x);
        t.retain(|(a, b), _| self.is_reduced_cell(*a) && self.is_reduced_cell(*b));
        t
    }

    fn boundary(&self, x: Cell) -> Vec<(Cell, Scalar)> {
        if x.0 == 0 {
            return Vec::new();
        }
        self.differential[x.0].column(x.1).iter().map(|(i, c)| ((x.0 - 1, *i), c.clone())).collect()
    }

    /// `∂² = 0`, coassociativity, the counit law, the coderivation identity
    /// with Koszul signs and conilpotence, all exactly.
    pub fn check_invariants(&self) -> Result<()> {
        let f = self.field;
        let bad = |m: String| Err(Error::InternalConsistency(format!("{}: {m}", self.name)));
        self.chain_complex()?;
        for n in 0..=self.truncation() {
            for i in 0..self.dim(n) {
                let x = (n, i);
                let delta = self.coproduct_of(x);
                for (a, b) in delta.keys() {
                    if a.0 + b.0 != n {
                        return bad(format!("coproduct of {} is not homogeneous", self.label(x)));
                    }
                }
                // counit
                let mut l: BTreeMap<Cell, Scalar> = BTreeMap::new();
                let mut r: BTreeMap<Cell, Scalar> = BTreeMap::new();
                for ((a, b), c) in &delta {
                    if a.0 == 0 {
                        add_term(&mut l, *b, c * &self.counit[a.1]);
                    }
                    if b.0 == 0 {
                        add_term(&mut r, *a, c * &self.counit[b.1]);
                    }
                }
                let want: BTreeMap<Cell, Scalar> = [(x, f.one())].into_iter().collect();
                if l != want || r != want {
                    return bad(format!("counit law fails on {}", self.label(x)));
                }
                // coassociativity
                let mut lhs: BTreeMap<(Cell, Cell, Cell), Scalar> = BTreeMap::new();
                let mut rhs: BTreeMap<(Cell, Cell, Cell), Scalar> = BTreeMap::new();
                for ((a, b), c) in &delta {
                    for ((p, q), k) in self.coproduct_of(*a) {
                        add_term(&mut lhs, (p, q, *b), c * &k);
                    }
                    for ((p, q), k) in self.coproduct_of(*b) {
                        add_term(&mut rhs, (*a, p, q), c * &k);
                    }
                }
                if lhs != rhs {
                    return bad(format!("coproduct of {} is not coassociative", self.label(x)));
                }
                // Δ∂ = (∂ ⊗ 1 + 1 ⊗ ∂)Δ
                let mut lhs = Tensor::new();
                for (y, c) in self.boundary(x) {
                    for (k, v) in self.coproduct_of(y) {
                        add_term(&mut lhs, k, &c * &v);
                    }
                }
                let mut rhs = Tensor::new();
                for ((a, b), c) in &delta {
                    for (da, k) in self.boundary(*a) {
                        add_term(&mut rhs, (da, *b), c * &k);
                    }
                    let s = sign(f, a.0);
                    for (db, k) in self.boundary(*b) {
                        add_term(&mut rhs, (*a, db), &(c * &k) * &s);
                    }
                }
                if lhs != rhs {
                    return bad(format!("differential is not a coderivation on {}", self.label(x)));
                }
                if self.coaugmentation.is_some() && n > 0 && self.conilpotency(x).is_none() {
                    return bad(format!("{} is not conilpotent", self.label(x)));
                }
            }
        }
        Ok(())
    }

    /// Smallest `k` with `Δ̄^k x = 0`, searched up to `degree + 1`.
    pub fn conilpotency(&self, x: Cell) -> Option<usize> {
        let f = self.field;
        let mut cur: BTreeMap<Vec<Cell>, Scalar> = [(vec![x], f.one())].into_iter().collect();
        for k in 1..=x.0 + 1 {
            let mut next: BTreeMap<Vec<Cell>, Scalar> = BTreeMap::new();
            for (w, c) in &cur {
                let last = *w.last().expect("nonempty");
                for ((a, b), k) in self.reduced_coproduct(last) {
                    let mut v = w[..w.len() - 1].to_vec();
                    v.push(a);
                    v.push(b);
                    add_term(&mut next, v, c * &k);
                }
            }
            if next.is_empty() {
                return Some(k);
            }
            cur = next;
        }
        None
    }

    /// `(g ⊗ g) Δ = Δ' g` for maps given per degree.
    pub fn check_natural(&self, target: &DgCoalgebra, g: &[SparseMatrix]) -> Result<()> {
        for n in 0..=self.truncation().min(target.truncation()) {
            for i in 0..self.dim(n) {
                let mut lhs = Tensor::new();
                for ((a, b), c) in self.coproduct_of((n, i)) {
                    for (p, u) in g[a.0].column(a.1) {
                        for (q, v) in g[b.0].column(b.1) {
                            add_term(&mut lhs, ((a.0, *p), (b.0, *q)), &(&c * u) * v);
                        }
                    }
                }
                let mut rhs = Tensor::new();
                for (j, c) in g[n].column(i) {
                    for (k, v) in target.coproduct_of((n, *j)) {
                        add_term(&mut rhs, k, c * &v);
                    }
                }
                if lhs != rhs {
                    return Err(Error::InternalConsistency(format!("coproduct is not natural on {}", self.labels[n][i])));
                }
            }
        }
        Ok(())
    }
}

/// Nondegenerate positions of each level and the inverse map.
fn nondegenerate(c: &SimplicialCoalgebra, n: usize) -> (Vec<usize>, Vec<Option<usize>>) {
    let mask = c.degenerate_mask(n);
    let keep: Vec<usize> = (0..mask.len()).filter(|i| !mask[*i]).collect();
    let mut inv = vec![None; mask.len()];
    for (k, i) in keep.iter().enumerate() {
        inv[*i] = Some(k);
    }
    (keep, inv)
}

fn project(v: &[(usize, Scalar)], inv: &[Option<usize>]) -> SparseVec {
    normalize_vec(v.iter().filter_map(|(i, c)| inv[*i].map(|k| (k, c.clone()))).collect())
}

/// Alexander–Whitney on a level-`n` vector:
/// `Σ_{p=1}^{n+1} (d_p ⋯ d_n x') ⊗ (d_0^{p-1} x'')`, keyed by
/// `((p - 1, left), (n - p + 1, right))` in the bases of the levels.
pub fn aw_on_element(c: &SimplicialCoalgebra, n: usize, x: &[(usize, Scalar)]) -> Tensor {
    let mut out = Tensor::new();
    let apply = |level: usize, i: usize, v: &SparseVec| c.levels[level].faces[i].apply(v);
    for ((a, b), k) in c.coproduct_of(n, x) {
        let mut front: SparseVec = vec![(a, c.field.one())];
        let mut fronts = vec![front.clone()];
        for lvl in (1..=n).rev() {
            front = apply(lvl, lvl, &front);
            fronts.push(front.clone());
        }
        // fronts[t] lies in level n - t
        let mut back: SparseVec = vec![(b, c.field.one())];
        for p in 1..=n + 1 {
            if p > 1 {
                back = apply(n + 2 - p, 0, &back);
            }
            let left = &fronts[n + 1 - p];
            for (l, u) in left {
                for (r, v) in &back {
                    add_term(&mut out, ((p - 1, *l), (n + 1 - p, *r)), &(&k * u) * v);
                }
            }
        }
    }
    out
}

/// `N_*(C)` through the truncation of `c`.
pub fn normalized_chains(c: &SimplicialCoalgebra) -> Result<DgCoalgebra> {
    let field = c.field;
    let top = c.truncation();
    let nd: Vec<(Vec<usize>, Vec<Option<usize>>)> = (0..=top).map(|n| nondegenerate(c, n)).collect();
    let mut differential = Vec::with_capacity(top + 1);
    let mut coproduct = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let (keep, _) = &nd[n];
        if n == 0 {
            differential.push(SparseMatrix::zero(field, 0, keep.len()));
        } else {
            let cols = keep
                .iter()
                .map(|b| {
                    let mut acc = Vec::new();
                    for i in 0..=n {
                        let s = sign(field, i);
                        acc.extend(c.levels[n].faces[i].column(*b).iter().map(|(r, v)| (*r, v * &s)));
                    }
                    project(&normalize_vec(acc), &nd[n - 1].1)
                })
                .collect();
            differential.push(SparseMatrix::from_columns(field, nd[n - 1].0.len(), cols));
        }
        let terms = crate::exec::map(keep, |b| {
            let t = aw_on_element(c, n, &[(*b, field.one())]);
            t.into_iter()
                .filter_map(|(((dl, l), (dr, r)), k)| {
                    let li = nd[dl].1[l]?;
                    let ri = nd[dr].1[r]?;
                    Some(((dl, li), (dr, ri), k))
                })
                .collect::<Vec<_>>()
        });
        coproduct.push(terms);
    }
    let labels = nd.iter().enumerate().map(|(n, (keep, _))| keep.iter().map(|b| c.levels[n].labels[*b].clone()).collect()).collect();
    let counit = nd[0].0.iter().map(|b| c.levels[0].counit[*b].clone()).collect();
    Ok(DgCoalgebra {
        name: format!("N({})", c.name),
        field,
        labels,
        differential,
        coproduct,
        counit,
        coaugmentation: c.is_connected().then_some(0),
        origin: nd.into_iter().map(|(k, _)| k).collect(),
    })
}

/// `N_*(F[X])` computed from nondegenerate simplices directly. Works for
/// sets with several vertices.
pub fn sset_chains(x: &SSet, field: Field, level: usize) -> Result<DgCoalgebra> {
    let x = x.at_level(level)?;
    let cell = |r: &SimplexRef| (!r.is_degenerate()).then_some((r.base.dim, r.base.index));
    let mut differential = Vec::with_capacity(level + 1);
    let mut coproduct = Vec::with_capacity(level + 1);
    for n in 0..=level {
        let count = x.count(n);
        if n == 0 {
            differential.push(SparseMatrix::zero(field, 0, count));
        } else {
            let mut cols = Vec::with_capacity(count);
            for idx in 0..count {
                let faces = &x.simplices[n][idx].faces;
                let col: SparseVec =
                    normalize_vec(faces.iter().enumerate().filter_map(|(i, f)| cell(f).map(|(_, k)| (k, sign(field, i)))).collect());
                cols.push(col);
            }
            differential.push(SparseMatrix::from_columns(field, x.count(n - 1), cols));
        }
        let ids: Vec<usize> = (0..count).collect();
        let terms = crate::exec::map(&ids, |idx| -> Result<Vec<(Cell, Cell, Scalar)>> {
            let me = SimplexRef::nondegenerate(SimplexId::new(n, *idx));
            let mut out = Vec::new();
            for p in 1..=n + 1 {
                let front = if p <= n { x.faces_down(&me, p, n)? } else { me.clone() };
                let back = x.front_zero(&me, p - 1)?;
                if let (Some(a), Some(b)) = (cell(&front), cell(&back)) {
                    out.push((a, b, field.one()));
                }
            }
            Ok(out)
        });
        coproduct.push(terms.into_iter().collect::<Result<Vec<_>>>()?);
    }
    Ok(DgCoalgebra {
        name: format!("N({})", x.name),
        field,
        labels: x.simplices.iter().map(|l| l.iter().map(|s| s.label.clone()).collect()).collect(),
        differential,
        coproduct,
        counit: vec![field.one(); x.count(0)],
        coaugmentation: x.is_reduced().then_some(0),
        origin: x.simplices.iter().map(|l| (0..l.len()).collect()).collect(),
    })
}

/// `N_*(f)`: nondegenerate simplices to their images, degenerate images to 0.
pub fn sset_chain_map(f: &SSetMap, field: Field, level: usize) -> Result<Vec<SparseMatrix>> {
    let f = f.at_level(level)?;
    (0..=level)
        .map(|n| {
            let cols = (0..f.source.count(n))
                .map(|idx| {
                    let img = f.apply(&SimplexRef::nondegenerate(SimplexId::new(n, idx)))?;
                    Ok(if img.is_degenerate() { Vec::new() } else { vec![(img.base.index, field.one())] })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SparseMatrix::from_columns(field, f.target.count(n), cols))
        })
        .collect()
}

/// `N_*(f)` for a map of simplicial coalgebras, between `normalized_chains` of both ends.
pub fn coalgebra_chain_map(f: &CoalgebraMap, src: &DgCoalgebra, dst: &DgCoalgebra) -> Result<Vec<SparseMatrix>> {
    let top = src.truncation().min(dst.truncation()).min(f.truncation());
    let mut out = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut inv = vec![None; f.target.dim(n)];
        for (k, i) in dst.origin[n].iter().enumerate() {
            inv[*i] = Some(k);
        }
        let cols = src.origin[n].iter().map(|b| project(f.levels[n].column(*b), &inv)).collect();
        out.push(SparseMatrix::from_columns(src.field, dst.dim(n), cols));
    }
    Ok(out)
}

/// Homology of normalized chains; degrees up to `level` need the set to `level + 1`.
pub fn chain_homology(x: &SSet, field: Field, level: usize) -> Result<BettiTable> {
    let probe = level + 1;
    match x.at_level(probe) {
        Ok(_) => {
            let n = sset_chains(x, field, probe)?;
            Ok(homology(&n.chain_complex()?).truncated(level))
        }
        Err(Error::InsufficientTruncation { .. }) => {
            let n = sset_chains(x, field, x.truncation().min(level))?;
            Ok(homology(&n.chain_complex()?).truncated(level))
        }
        Err(e) => Err(e),
    }
}

pub fn dg_homology(n: &DgCoalgebra, level: usize) -> Result<BettiTable> {
    Ok(homology(&n.chain_complex()?).truncated(level))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{chains_coalgebra, cylinder, mapping_cylinder};
    use crate::simplicial::builtins::{delta, iota_s1, nerve_j, rp2, s1, s1_localized, sphere2_min, wedge};

    fn q() -> Field {
        Field::Rationals
    }

    fn strip(mut d: DgCoalgebra) -> DgCoalgebra {
        d.name.clear();
        d.labels = d.labels.iter().map(|l| vec![String::new(); l.len()]).collect();
        d.origin.clear();
        d
    }

    #[test]
    fn examples() {
        let n = sset_chains(&sphere2_min(2), q(), 2).unwrap();
        assert_eq!(n.dims(), vec![1, 0, 1]);
        assert!(n.differential.iter().all(SparseMatrix::is_zero));
        assert!(n.reduced_coproduct((2, 0)).is_empty());
        let c = sset_chains(&s1(1), q(), 1).unwrap();
        let d = c.coproduct_of((1, 0));
        assert_eq!(d.len(), 2);
        assert!(d.contains_key(&((0, 0), (1, 0))) && d.contains_key(&((1, 0), (0, 0))));
        assert!(c.reduced_coproduct((1, 0)).is_empty());
        assert_eq!(sset_chains(&s1_localized(3), q(), 3).unwrap().dims(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn homology_examples() {
        assert_eq!(chain_homology(&sphere2_min(3), q(), 2).unwrap().numbers(), vec![1, 0, 1]);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(chain_homology(&s1(2), f2, 1).unwrap().numbers(), vec![1, 1]);
        let h = chain_homology(&s1_localized(4), q(), 3).unwrap();
        assert_eq!(h.numbers(), vec![1, 1, 0, 0]);
        assert!(h.all_exact());
        let f3 = Field::prime(3).unwrap();
        assert_eq!(chain_homology(&rp2(3), f3, 2).unwrap().numbers(), vec![1, 0, 0]);
        assert_eq!(chain_homology(&rp2(3), f2, 2).unwrap().numbers(), vec![1, 1, 1]);
    }

    #[test]
    fn split_formula_on_interval() {
        // [0 0 1] = s_0 [01] in F[Δ¹]_2
        let c = chains_coalgebra(&delta(1), q(), 2).unwrap();
        let idx = c.levels[2].labels.iter().position(|l| l == "s[0][01]").unwrap();
        let t = aw_on_element(&c, 2, &[(idx, q().one())]);
        let name = |lvl: usize, i: usize| c.levels[lvl].labels[i].clone();
        let got: Vec<(String, String)> = t.keys().map(|((a, i), (b, j))| (name(*a, *i), name(*b, *j))).collect();
        let want = [("[0]", "s[0][01]"), ("s[0][0]", "[01]"), ("s[0][01]", "[1]")];
        assert_eq!(got.len(), 3);
        for (l, r) in want {
            assert!(got.contains(&(l.to_string(), r.to_string())), "{l} ⊗ {r} missing from {got:?}");
        }
        for ((a, _), (b, _)) in t.keys() {
            assert_eq!(a + b, 2);
        }
    }

    #[test]
    fn both_routes_agree() {
        for x in [s1(4), sphere2_min(4), rp2(4), s1_localized(4), wedge(&[s1(4), rp2(4)], 4).unwrap()] {
            let a = normalized_chains(&chains_coalgebra(&x, q(), 4).unwrap()).unwrap();
            let b = sset_chains(&x, q(), 4).unwrap();
            assert_eq!(a.labels, b.labels);
            assert_eq!(strip(a), strip(b));
        }
    }

    #[test]
    fn invariants_on_fixtures() {
        for field in [q(), Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
            for x in [s1(4), sphere2_min(4), rp2(4), s1_localized(4), nerve_j(4)] {
                sset_chains(&x, field, 4).unwrap().check_invariants().unwrap();
            }
            let c = chains_coalgebra(&s1_localized(3), field, 3).unwrap();
            let cy = cylinder(&c).unwrap();
            normalized_chains(&cy.cyl).unwrap().check_invariants().unwrap();
        }
    }

    #[test]
    fn naturality_on_maps() {
        let f = iota_s1(4);
        let src = sset_chains(&f.source, q(), 4).unwrap();
        let dst = sset_chains(&f.target, q(), 4).unwrap();
        let g = sset_chain_map(&f, q(), 4).unwrap();
        src.check_natural(&dst, &g).unwrap();
        let fc = CoalgebraMap::from_sset_map(&f, q(), 4).unwrap();
        let mc = mapping_cylinder(&fc).unwrap();
        let nm = normalized_chains(&mc.m).unwrap();
        nm.check_invariants().unwrap();
        let ns = normalized_chains(&mc.i.source).unwrap();
        let gi = coalgebra_chain_map(&mc.i, &ns, &nm).unwrap();
        ns.check_natural(&nm, &gi).unwrap();
        // a wrong map is caught
        let mut bad = g.clone();
        bad[0] = SparseMatrix::from_entries(q(), 1, 1, [(0, 0, q().from_i64(2))]).unwrap();
        assert!(src.check_natural(&dst, &bad).is_err());
    }

    #[test]
    fn conilpotency_bound() {
        let n = sset_chains(&s1_localized(4), q(), 4).unwrap();
        for d in 1..=4 {
            for i in 0..n.dim(d) {
                assert!(n.conilpotency((d, i)).unwrap() <= d + 1);
            }
        }
    }
}
