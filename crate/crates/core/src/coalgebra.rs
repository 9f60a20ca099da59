//! Simplicial cocommutative coalgebras presented on bases.
//!
//! Level `n` carries a basis, structure constants for `Δ_n` and `ε_n`, face
//! matrices `d_i : C_n → C_{n-1}` and degeneracy matrices
//! `s_j : C_{n-1} → C_n`. Degeneracies send basis elements to basis
//! elements, so the degenerate part of each level is spanned by a subset of
//! the basis. For connected coalgebras index `0` of every level is the
//! coaugmentation `e_n`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::simplicial::{SSet, SSetMap, SimplexRef};
use crate::sparse::{SparseMatrix, SparseVec};
use crate::verdict::Status;

/// `(left, right, coefficient)` in `C_n ⊗ C_n`.
pub type Tensor2 = BTreeMap<(usize, usize), Scalar>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoalgebraLevel {
    pub labels: Vec<String>,
    pub coproduct: Vec<Vec<(usize, usize, Scalar)>>,
    pub counit: Vec<Scalar>,
    /// `d_0, …, d_n`; empty at level 0.
    pub faces: Vec<SparseMatrix>,
    /// `s_0, …, s_{n-1}` into this level; empty at level 0.
    pub degeneracies: Vec<SparseMatrix>,
}

impl CoalgebraLevel {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

pub type CoalgebraRule = Arc<dyn Fn(usize) -> Result<SimplicialCoalgebra> + Send + Sync>;

#[derive(Clone)]
pub struct SimplicialCoalgebra {
    pub name: String,
    pub field: Field,
    pub levels: Vec<CoalgebraLevel>,
    pub rule: Option<CoalgebraRule>,
}

impl std::fmt::Debug for SimplicialCoalgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimplicialCoalgebra").field("name", &self.name).field("field", &self.field).field("dims", &self.dims()).finish()
    }
}

fn monomial(field: Field, rows: usize, targets: &[Option<usize>]) -> SparseMatrix {
    let cols = targets.iter().map(|t| t.map(|r| vec![(r, field.one())]).unwrap_or_default()).collect();
    SparseMatrix::from_columns(field, rows, cols)
}

fn add_to(acc: &mut Tensor2, key: (usize, usize), c: Scalar) {
    match acc.get_mut(&key) {
        Some(v) => {
            *v += &c;
            if v.is_zero() {
                acc.remove(&key);
            }
        }
        None => {
            if !c.is_zero() {
                acc.insert(key, c);
            }
        }
    }
}

impl SimplicialCoalgebra {
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(CoalgebraLevel::dim).collect()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.levels[n].dim()
    }

    pub fn is_connected(&self) -> bool {
        self.levels[0].dim() == 1
    }

    pub fn at_level(&self, level: usize) -> Result<SimplicialCoalgebra> {
        if level <= self.truncation() {
            let mut c = self.clone();
            c.levels.truncate(level + 1);
            return Ok(c);
        }
        match &self.rule {
            Some(r) => r(level),
            None => Err(Error::InsufficientTruncation { needed: level, available: self.truncation() }),
        }
    }

    /// Coproduct is the diagonal on the basis and the counit is `1` everywhere.
    pub fn is_set_like(&self) -> bool {
        self.levels.iter().all(|l| {
            l.counit.iter().all(Scalar::is_one)
                && l.coproduct.iter().enumerate().all(|(b, t)| t.len() == 1 && t[0].0 == b && t[0].1 == b && t[0].2.is_one())
        })
    }

    /// Basis elements in the image of some degeneracy.
    pub fn degenerate_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; self.dim(n)];
        for s in &self.levels[n].degeneracies {
            for (r, _, _) in s.entries() {
                mask[r] = true;
            }
        }
        mask
    }

    pub fn coproduct_of(&self, n: usize, v: &[(usize, Scalar)]) -> Tensor2 {
        let mut acc = Tensor2::new();
        for (b, c) in v {
            for (x, y, k) in &self.levels[n].coproduct[*b] {
                add_to(&mut acc, (*x, *y), c * k);
            }
        }
        acc
    }

    pub fn counit_of(&self, n: usize, v: &[(usize, Scalar)]) -> Scalar {
        let mut s = self.field.zero();
        for (b, c) in v {
            s += &(c * &self.levels[n].counit[*b]);
        }
        s
    }

    /// Exact check of the coalgebra axioms, the simplicial identities and
    /// compatibility of the structure maps with `Δ` and `ε`.
    pub fn validate(&self) -> Result<()> {
        let f = self.field;
        let bad = |m: String| Err(Error::InternalConsistency(format!("{}: {m}", self.name)));
        for (n, l) in self.levels.iter().enumerate() {
            let d = l.dim();
            if l.coproduct.len() != d || l.counit.len() != d {
                return bad(format!("level {n} structure has the wrong size"));
            }
            if n > 0 && (l.faces.len() != n + 1 || l.degeneracies.len() != n) {
                return bad(format!("level {n} has {} faces", l.faces.len()));
            }
            for s in &l.degeneracies {
                if s.rows() != d || (0..s.cols()).any(|c| s.column(c).len() != 1 || !s.column(c)[0].1.is_one()) {
                    return bad(format!("degeneracy into level {n} is not a basis map"));
                }
            }
            for b in 0..d {
                let delta = self.coproduct_of(n, &[(b, f.one())]);
                // counit laws
                let mut left: BTreeMap<usize, Scalar> = BTreeMap::new();
                let mut right: BTreeMap<usize, Scalar> = BTreeMap::new();
                for ((x, y), c) in &delta {
                    let a = c * &l.counit[*x];
                    *left.entry(*y).or_insert_with(|| f.zero()) += &a;
                    let a = c * &l.counit[*y];
                    *right.entry(*x).or_insert_with(|| f.zero()) += &a;
                }
                for m in [left, right] {
                    let v: Vec<_> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    if v != vec![(b, f.one())] {
                        return bad(format!("counit law fails on {}", l.labels[b]));
                    }
                }
                // cocommutativity
                for ((x, y), c) in &delta {
                    if delta.get(&(*y, *x)) != Some(c) {
                        return bad(format!("coproduct of {} is not cocommutative", l.labels[b]));
                    }
                }
                // coassociativity
                let mut lhs: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
                let mut rhs: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
                for ((x, y), c) in &delta {
                    for ((p, q), k) in self.coproduct_of(n, &[(*x, f.one())]) {
                        *lhs.entry((p, q, *y)).or_insert_with(|| f.zero()) += &(c * &k);
                    }
                    for ((p, q), k) in self.coproduct_of(n, &[(*y, f.one())]) {
                        *rhs.entry((*x, p, q)).or_insert_with(|| f.zero()) += &(c * &k);
                    }
                }
                lhs.retain(|_, c| !c.is_zero());
                rhs.retain(|_, c| !c.is_zero());
                if lhs != rhs {
                    return bad(format!("coproduct of {} is not coassociative", l.labels[b]));
                }
            }
            if n == 0 {
                continue;
            }
            let below = &self.levels[n - 1];
            // structure maps are coalgebra maps
            for (i, m) in l.faces.iter().enumerate() {
                if m.rows() != below.dim() || m.cols() != d {
                    return bad(format!("d_{i} on level {n} has the wrong shape"));
                }
                if let Err(e) = self.check_coalgebra_map(m, n, n - 1) {
                    return bad(format!("d_{i} on level {n}: {e}"));
                }
            }
            for (j, m) in l.degeneracies.iter().enumerate() {
                if let Err(e) = self.check_coalgebra_map(m, n - 1, n) {
                    return bad(format!("s_{j} into level {n}: {e}"));
                }
            }
            self.check_identities(n).or_else(bad)?;
        }
        Ok(())
    }

    fn check_coalgebra_map(&self, m: &SparseMatrix, from: usize, to: usize) -> std::result::Result<(), String> {
        for b in 0..m.cols() {
            let img = m.column(b);
            let lhs = self.coproduct_of(to, img);
            let mut rhs = Tensor2::new();
            for ((x, y), c) in self.coproduct_of(from, &[(b, self.field.one())]) {
                for (p, a) in m.column(x) {
                    for (q, k) in m.column(y) {
                        add_to(&mut rhs, (*p, *q), &(&c * a) * k);
                    }
                }
            }
            if lhs != rhs {
                return Err("does not commute with the coproduct".into());
            }
            if self.counit_of(to, img) != self.levels[from].counit[b] {
                return Err("does not preserve the counit".into());
            }
        }
        Ok(())
    }

    fn check_identities(&self, n: usize) -> std::result::Result<(), String> {
        let l = &self.levels[n];
        let eq = |a: Result<SparseMatrix>, b: Result<SparseMatrix>| matches!((a, b), (Ok(x), Ok(y)) if x == y);
        if n >= 2 {
            let below = &self.levels[n - 1];
            for j in 0..=n {
                for i in 0..j {
                    if !eq(below.faces[i].mul(&l.faces[j]), below.faces[j - 1].mul(&l.faces[i])) {
                        return Err(format!("d_{i} d_{j} ≠ d_{} d_{i} on level {n}", j - 1));
                    }
                }
            }
        }
        // d_i s_j with s_j : C_{n-1} → C_n
        let id = SparseMatrix::identity(self.field, self.dim(n - 1));
        for j in 0..n {
            for i in 0..=n {
                let lhs = l.faces[i].mul(&l.degeneracies[j]);
                let ok = if i == j || i == j + 1 {
                    eq(lhs, Ok(id.clone()))
                } else if i < j {
                    eq(lhs, self.levels[n - 1].degeneracies[j - 1].mul(&self.levels[n - 1].faces[i]))
                } else {
                    eq(lhs, self.levels[n - 1].degeneracies[j].mul(&self.levels[n - 1].faces[i - 1]))
                };
                if !ok {
                    return Err(format!("d_{i} s_{j} identity fails into level {n}"));
                }
            }
        }
        if n >= 2 {
            for j in 0..n - 1 {
                for i in 0..=j {
                    let lhs = self.levels[n].degeneracies[i].mul(&self.levels[n - 1].degeneracies[j]);
                    let rhs = self.levels[n].degeneracies[j + 1].mul(&self.levels[n - 1].degeneracies[i]);
                    if !eq(lhs, rhs) {
                        return Err(format!("s_{i} s_{j} identity fails into level {n}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `F[X]` with the basis of all simplices in each dimension; connected
/// exactly when `x` is reduced.
pub fn chains_coalgebra(x: &SSet, field: Field, level: usize) -> Result<SimplicialCoalgebra> {
    let x = x.at_level(level)?;
    let mut levels = Vec::with_capacity(level + 1);
    let mut prev: Option<std::collections::HashMap<SimplexRef, usize>> = None;
    let mut prev_simplices: Vec<SimplexRef> = Vec::new();
    for n in 0..=level {
        let simplices = x.all_simplices(n);
        let index = x.simplex_index(n);
        let d = simplices.len();
        let mut faces = Vec::new();
        let mut degeneracies = Vec::new();
        if let Some(pi) = &prev {
            for i in 0..=n {
                let t: Vec<Option<usize>> = simplices.iter().map(|s| x.face(i, s).map(|f| pi[&f])).map(|r| r.ok()).collect();
                if t.iter().any(Option::is_none) {
                    return Err(Error::InvalidSimplicialSet(format!("face d_{i} undefined in dimension {n}")));
                }
                faces.push(monomial(field, prev_simplices.len(), &t));
            }
            for j in 0..n {
                let t: Vec<Option<usize>> =
                    prev_simplices.iter().map(|s| s.degeneracy(j).ok().and_then(|u| index.get(&u).copied())).collect();
                degeneracies.push(monomial(field, d, &t));
            }
        }
        levels.push(CoalgebraLevel {
            labels: simplices.iter().map(|s| x.describe(s)).collect(),
            coproduct: (0..d).map(|b| vec![(b, b, field.one())]).collect(),
            counit: vec![field.one(); d],
            faces,
            degeneracies,
        });
        prev = Some(index);
        prev_simplices = simplices;
    }
    let rule: Option<CoalgebraRule> = match x.extension {
        crate::simplicial::Extension::Fixed => None,
        _ => {
            let x2 = x.clone();
            Some(Arc::new(move |lv| chains_coalgebra(&x2, field, lv)))
        }
    };
    Ok(SimplicialCoalgebra { name: format!("F[{}]", x.name), field, levels, rule })
}

/// The constant one-dimensional simplicial coalgebra.
pub fn constant(field: Field, level: usize) -> SimplicialCoalgebra {
    let levels = (0..=level)
        .map(|n| CoalgebraLevel {
            labels: vec!["1".into()],
            coproduct: vec![vec![(0, 0, field.one())]],
            counit: vec![field.one()],
            faces: (0..if n == 0 { 0 } else { n + 1 }).map(|_| SparseMatrix::identity(field, 1)).collect(),
            degeneracies: (0..n).map(|_| SparseMatrix::identity(field, 1)).collect(),
        })
        .collect();
    let rule: CoalgebraRule = Arc::new(move |lv| Ok(constant(field, lv)));
    SimplicialCoalgebra { name: "F".into(), field, levels, rule: Some(rule) }
}

/// `n`-simplices of `Δ¹` are `[0^r 1^{n+1-r}]`, indexed here by `r`.
fn interval_face(i: usize, r: usize) -> usize {
    if i < r {
        r - 1
    } else {
        r
    }
}

pub(crate) fn interval_degeneracy(j: usize, r: usize) -> usize {
    if j < r {
        r + 1
    } else {
        r
    }
}

pub fn interval_label(r: usize, n: usize) -> String {
    format!("[{}{}]", "0".repeat(r), "1".repeat(n + 1 - r))
}

/// A basis description of a product-like level: `slot(b, r)` returns the
/// image of `(b, [0^r 1^s])` as a vector.
struct Product<'a> {
    c: &'a SimplicialCoalgebra,
    slot: &'a dyn Fn(usize, usize, usize) -> SparseVec,
}

impl Product<'_> {
    fn lift(&self, n: usize, v: &[(usize, Scalar)], r: usize) -> SparseVec {
        let mut out = Vec::new();
        for (b, c) in v {
            for (i, k) in (self.slot)(n, *b, r) {
                out.push((i, c * &k));
            }
        }
        crate::sparse::normalize_vec(out)
    }

    fn face(&self, n: usize, i: usize, b: usize, r: usize) -> SparseVec {
        let v = self.c.levels[n].faces[i].column(b);
        self.lift(n - 1, v, interval_face(i, r))
    }

    fn degeneracy(&self, n: usize, j: usize, b: usize, r: usize) -> SparseVec {
        let v = self.c.levels[n + 1].degeneracies[j].column(b);
        self.lift(n + 1, v, interval_degeneracy(j, r))
    }

    fn coproduct(&self, n: usize, b: usize, r: usize) -> Vec<(usize, usize, Scalar)> {
        let mut acc = Tensor2::new();
        for (x, y, k) in &self.c.levels[n].coproduct[b] {
            for (p, a) in (self.slot)(n, *x, r) {
                for (q, e) in (self.slot)(n, *y, r) {
                    add_to(&mut acc, (p, q), &(k * &a) * &e);
                }
            }
        }
        acc.into_iter().map(|((p, q), c)| (p, q, c)).collect()
    }
}

fn single(field: Field, i: usize) -> SparseVec {
    vec![(i, field.one())]
}

/// `C ⊗ F[Δ¹]` with basis `(b, [0^r 1^s])` for every basis element `b`.
pub fn tensor_interval(c: &SimplicialCoalgebra) -> SimplicialCoalgebra {
    let field = c.field;
    let index = |n: usize, b: usize, r: usize| b * (n + 2) + (n + 1 - r);
    let slot = move |n: usize, b: usize, r: usize| single(field, index(n, b, r));
    let p = Product { c, slot: &slot };
    let mut levels = Vec::new();
    for n in 0..=c.truncation() {
        let d = c.dim(n);
        let mut labels = Vec::new();
        let mut coproduct = Vec::new();
        let mut counit = Vec::new();
        for b in 0..d {
            for r in (0..=n + 1).rev() {
                labels.push(format!("({}, {})", c.levels[n].labels[b], interval_label(r, n)));
                coproduct.push(p.coproduct(n, b, r));
                counit.push(c.levels[n].counit[b].clone());
            }
        }
        let dim = labels.len();
        let faces = if n == 0 {
            Vec::new()
        } else {
            (0..=n)
                .map(|i| {
                    let cols = (0..d).flat_map(|b| (0..=n + 1).rev().map(move |r| (b, r))).map(|(b, r)| p.face(n, i, b, r)).collect();
                    SparseMatrix::from_columns(field, c.dim(n - 1) * (n + 1), cols)
                })
                .collect()
        };
        let degeneracies = if n == 0 {
            Vec::new()
        } else {
            (0..n)
                .map(|j| {
                    let cols = (0..c.dim(n - 1))
                        .flat_map(|b| (0..=n).rev().map(move |r| (b, r)))
                        .map(|(b, r)| p.degeneracy(n - 1, j, b, r))
                        .collect();
                    SparseMatrix::from_columns(field, dim, cols)
                })
                .collect()
        };
        levels.push(CoalgebraLevel { labels, coproduct, counit, faces, degeneracies });
    }
    SimplicialCoalgebra { name: format!("{}⊗F[Δ¹]", c.name), field, levels, rule: None }
}

/// A map of simplicial coalgebras given levelwise.
#[derive(Clone, Debug)]
pub struct CoalgebraMap {
    pub name: String,
    pub source: SimplicialCoalgebra,
    pub target: SimplicialCoalgebra,
    pub levels: Vec<SparseMatrix>,
}

impl CoalgebraMap {
    pub fn truncation(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn identity(c: &SimplicialCoalgebra) -> CoalgebraMap {
        let levels = (0..=c.truncation()).map(|n| SparseMatrix::identity(c.field, c.dim(n))).collect();
        CoalgebraMap { name: format!("id({})", c.name), source: c.clone(), target: c.clone(), levels }
    }

    /// `F[f]` for a simplicial map.
    pub fn from_sset_map(f: &SSetMap, field: Field, level: usize) -> Result<CoalgebraMap> {
        let f = f.at_level(level)?;
        let source = chains_coalgebra(&f.source, field, level)?;
        let target = chains_coalgebra(&f.target, field, level)?;
        let mut levels = Vec::new();
        for n in 0..=level {
            let index = f.target.simplex_index(n);
            let t = f.source.all_simplices(n).iter().map(|s| f.apply(s).map(|u| index.get(&u).copied())).collect::<Result<Vec<_>>>()?;
            if t.iter().any(Option::is_none) {
                return Err(Error::InvalidMap(format!("{} leaves the target in dimension {n}", f.name)));
            }
            levels.push(monomial(field, target.dim(n), &t));
        }
        Ok(CoalgebraMap { name: format!("F[{}]", f.name), source, target, levels })
    }

    pub fn compose(g: &CoalgebraMap, f: &CoalgebraMap) -> Result<CoalgebraMap> {
        let n = g.truncation().min(f.truncation());
        let levels = (0..=n).map(|k| g.levels[k].mul(&f.levels[k])).collect::<Result<Vec<_>>>()?;
        Ok(CoalgebraMap { name: format!("{}∘{}", g.name, f.name), source: f.source.clone(), target: g.target.clone(), levels })
    }

    pub fn at_level(&self, level: usize) -> Result<CoalgebraMap> {
        if level > self.truncation() {
            return Err(Error::InsufficientTruncation { needed: level, available: self.truncation() });
        }
        let mut m = self.clone();
        m.levels.truncate(level + 1);
        m.source = m.source.at_level(level)?;
        m.target = m.target.at_level(level)?;
        Ok(m)
    }

    /// Commutes with faces, degeneracies, coproducts and counits.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidMap(format!("{}: {m}", self.name)));
        let (s, t) = (&self.source, &self.target);
        for (n, m) in self.levels.iter().enumerate() {
            if m.cols() != s.dim(n) || m.rows() != t.dim(n) {
                return bad(format!("level {n} has shape {}x{}", m.rows(), m.cols()));
            }
            for b in 0..s.dim(n) {
                let img = m.column(b);
                let lhs = t.coproduct_of(n, img);
                let mut rhs = Tensor2::new();
                for ((x, y), c) in s.coproduct_of(n, &[(b, s.field.one())]) {
                    for (p, a) in m.column(x) {
                        for (q, k) in m.column(y) {
                            add_to(&mut rhs, (*p, *q), &(&c * a) * k);
                        }
                    }
                }
                if lhs != rhs {
                    return bad(format!("coproduct fails on {}", s.levels[n].labels[b]));
                }
                if t.counit_of(n, img) != s.levels[n].counit[b] {
                    return bad(format!("counit fails on {}", s.levels[n].labels[b]));
                }
            }
            if n == 0 {
                continue;
            }
            for i in 0..=n {
                if t.levels[n].faces[i].mul(m)? != self.levels[n - 1].mul(&s.levels[n].faces[i])? {
                    return bad(format!("d_{i} fails on level {n}"));
                }
            }
            for j in 0..n {
                if t.levels[n].degeneracies[j].mul(&self.levels[n - 1])? != m.mul(&s.levels[n].degeneracies[j])? {
                    return bad(format!("s_{j} fails into level {n}"));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.levels.iter().all(|m| m.rank() == m.cols())
    }
}

pub struct Cylinder {
    pub cyl: SimplicialCoalgebra,
    pub i0: CoalgebraMap,
    pub i1: CoalgebraMap,
    pub q: CoalgebraMap,
}

/// Index of `(b, [0^r 1^s])` in `Cyl(C)_n` for `b ≠ e`.
pub fn cyl_index(n: usize, b: usize, r: usize) -> usize {
    1 + (b - 1) * (n + 2) + (n + 1 - r)
}

/// `Cyl(C) = F ⊕ coker(e ⊗ id)`: the unit at index 0, then `(b, [0^r 1^s])`
/// for `b ≠ e` with `r` from `n + 1` down to `0`.
pub fn cylinder(c: &SimplicialCoalgebra) -> Result<Cylinder> {
    if !c.is_connected() {
        return Err(Error::NotConnected(c.name.clone()));
    }
    let field = c.field;
    let slot = move |n: usize, b: usize, r: usize| {
        if b == 0 {
            single(field, 0)
        } else {
            single(field, cyl_index(n, b, r))
        }
    };
    let p = Product { c, slot: &slot };
    let mut levels = Vec::new();
    let (mut i0, mut i1, mut q) = (Vec::new(), Vec::new(), Vec::new());
    for n in 0..=c.truncation() {
        let d = c.dim(n);
        let dim = 1 + (d - 1) * (n + 2);
        let mut labels = vec!["1".to_string()];
        let mut coproduct = vec![vec![(0, 0, field.one())]];
        let mut counit = vec![field.one()];
        let pairs: Vec<(usize, usize)> = (1..d).flat_map(|b| (0..=n + 1).rev().map(move |r| (b, r))).collect();
        for &(b, r) in &pairs {
            labels.push(format!("({}, {})", c.levels[n].labels[b], interval_label(r, n)));
            coproduct.push(p.coproduct(n, b, r));
            counit.push(c.levels[n].counit[b].clone());
        }
        let (mut faces, mut degeneracies) = (Vec::new(), Vec::new());
        if n > 0 {
            let below = 1 + (c.dim(n - 1) - 1) * (n + 1);
            for i in 0..=n {
                let mut cols = vec![single(field, 0)];
                cols.extend(pairs.iter().map(|&(b, r)| p.face(n, i, b, r)));
                faces.push(SparseMatrix::from_columns(field, below, cols));
            }
            let pairs_below: Vec<(usize, usize)> = (1..c.dim(n - 1)).flat_map(|b| (0..=n).rev().map(move |r| (b, r))).collect();
            for j in 0..n {
                let mut cols = vec![single(field, 0)];
                cols.extend(pairs_below.iter().map(|&(b, r)| p.degeneracy(n - 1, j, b, r)));
                degeneracies.push(SparseMatrix::from_columns(field, dim, cols));
            }
        }
        levels.push(CoalgebraLevel { labels, coproduct, counit, faces, degeneracies });
        let end = |r: usize| -> Vec<Option<usize>> { (0..d).map(|b| Some(if b == 0 { 0 } else { cyl_index(n, b, r) })).collect() };
        i0.push(monomial(field, dim, &end(n + 1)));
        i1.push(monomial(field, dim, &end(0)));
        let mut qt = vec![Some(0)];
        qt.extend(pairs.iter().map(|&(b, _)| Some(b)));
        q.push(monomial(field, d, &qt));
    }
    let cyl = SimplicialCoalgebra { name: format!("Cyl({})", c.name), field, levels, rule: None };
    let mk = |name: &str, s: &SimplicialCoalgebra, t: &SimplicialCoalgebra, l: Vec<SparseMatrix>| CoalgebraMap {
        name: name.into(),
        source: s.clone(),
        target: t.clone(),
        levels: l,
    };
    Ok(Cylinder { i0: mk("i0", c, &cyl, i0), i1: mk("i1", c, &cyl, i1), q: mk("q", &cyl, c, q), cyl })
}

pub struct MappingCylinder {
    pub m: SimplicialCoalgebra,
    pub i: CoalgebraMap,
    pub p: CoalgebraMap,
    pub s: CoalgebraMap,
}

/// `M(f)`: `Cyl(C)` with its `1`-end glued to `C'` along `f`. Level `n`
/// has the basis of `C'_n` followed by `(b, [0^r 1^s])` with `b ≠ e`, `r ≥ 1`.
pub fn mapping_cylinder(f: &CoalgebraMap) -> Result<MappingCylinder> {
    let (c, c2) = (&f.source, &f.target);
    if !c.is_connected() || !c2.is_connected() {
        return Err(Error::NotConnected(format!("{} or {}", c.name, c2.name)));
    }
    let top = f.truncation().min(c.truncation()).min(c2.truncation());
    let field = c.field;
    let offset = |n: usize| c2.dim(n);
    let index = move |n: usize, b: usize, r: usize| offset(n) + (b - 1) * (n + 1) + (n + 1 - r);
    let slot = |n: usize, b: usize, r: usize| -> SparseVec {
        if b == 0 {
            single(field, 0)
        } else if r == 0 {
            f.levels[n].column(b).clone()
        } else {
            single(field, index(n, b, r))
        }
    };
    let p = Product { c, slot: &slot };
    let mut levels = Vec::new();
    let (mut im, mut pm, mut sm) = (Vec::new(), Vec::new(), Vec::new());
    for n in 0..=top {
        let d = c.dim(n);
        let d2 = c2.dim(n);
        let pairs: Vec<(usize, usize)> = (1..d).flat_map(|b| (1..=n + 1).rev().map(move |r| (b, r))).collect();
        let dim = d2 + pairs.len();
        let l2 = &c2.levels[n];
        let mut labels = l2.labels.clone();
        let mut coproduct = l2.coproduct.clone();
        let mut counit = l2.counit.clone();
        for &(b, r) in &pairs {
            labels.push(format!("({}, {})", c.levels[n].labels[b], interval_label(r, n)));
            coproduct.push(p.coproduct(n, b, r));
            counit.push(c.levels[n].counit[b].clone());
        }
        let (mut faces, mut degeneracies) = (Vec::new(), Vec::new());
        if n > 0 {
            let below = c2.dim(n - 1) + (c.dim(n - 1) - 1) * n;
            for i in 0..=n {
                let mut cols: Vec<SparseVec> = (0..d2).map(|b| l2.faces[i].column(b).clone()).collect();
                cols.extend(pairs.iter().map(|&(b, r)| p.face(n, i, b, r)));
                faces.push(SparseMatrix::from_columns(field, below, cols));
            }
            let pairs_below: Vec<(usize, usize)> = (1..c.dim(n - 1)).flat_map(|b| (1..=n).rev().map(move |r| (b, r))).collect();
            for j in 0..n {
                let mut cols: Vec<SparseVec> = (0..c2.dim(n - 1)).map(|b| l2.degeneracies[j].column(b).clone()).collect();
                cols.extend(pairs_below.iter().map(|&(b, r)| p.degeneracy(n - 1, j, b, r)));
                degeneracies.push(SparseMatrix::from_columns(field, dim, cols));
            }
        }
        levels.push(CoalgebraLevel { labels, coproduct, counit, faces, degeneracies });
        im.push(SparseMatrix::from_columns(field, dim, (0..d).map(|b| slot(n, b, n + 1)).collect()));
        let mut pcols: Vec<SparseVec> = (0..d2).map(|b| single(field, b)).collect();
        pcols.extend(pairs.iter().map(|&(b, _)| f.levels[n].column(b).clone()));
        pm.push(SparseMatrix::from_columns(field, d2, pcols));
        sm.push(SparseMatrix::from_columns(field, dim, (0..d2).map(|b| single(field, b)).collect()));
    }
    let m = SimplicialCoalgebra { name: format!("M({})", f.name), field, levels, rule: None };
    let c_top = c.at_level(top)?;
    let c2_top = c2.at_level(top)?;
    Ok(MappingCylinder {
        i: CoalgebraMap { name: "i".into(), source: c_top, target: m.clone(), levels: im },
        p: CoalgebraMap { name: "p".into(), source: m.clone(), target: c2_top.clone(), levels: pm },
        s: CoalgebraMap { name: "s'".into(), source: c2_top, target: m.clone(), levels: sm },
        m,
    })
}

/// Set-like elements per level, with the completeness of the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Points {
    pub levels: Vec<Vec<SparseVec>>,
    pub status: Status,
}

/// `P(C)_n = {x : Δx = x ⊗ x, ε(x) = 1}`. Exact on set-like bases; by
/// exhaustive search over small prime fields otherwise.
pub fn points(c: &SimplicialCoalgebra, budget: usize) -> Points {
    let field = c.field;
    if c.is_set_like() {
        let levels = c.levels.iter().map(|l| (0..l.dim()).map(|b| single(field, b)).collect()).collect();
        return Points { levels, status: Status::Verified };
    }
    let mut status = Status::Verified;
    let mut levels = Vec::new();
    for n in 0..=c.truncation() {
        let d = c.dim(n) as u32;
        let found = match field {
            Field::Prime(p) if (p as u128).checked_pow(d).is_some_and(|s| s <= budget as u128) => brute_force_points(c, n, p),
            _ => {
                status = Status::Inconclusive;
                Vec::new()
            }
        };
        levels.push(found);
    }
    Points { levels, status }
}

fn brute_force_points(c: &SimplicialCoalgebra, n: usize, p: u64) -> Vec<SparseVec> {
    let field = c.field;
    let d = c.dim(n);
    let mut out = Vec::new();
    let mut digits = vec![0u64; d];
    loop {
        let v: SparseVec = digits.iter().enumerate().filter(|(_, x)| **x != 0).map(|(i, x)| (i, field.from_i64(*x as i64))).collect();
        if c.counit_of(n, &v).is_one() {
            let lhs = c.coproduct_of(n, &v);
            let mut rhs = Tensor2::new();
            for (i, a) in &v {
                for (j, b) in &v {
                    add_to(&mut rhs, (*i, *j), a * b);
                }
            }
            if lhs == rhs {
                out.push(v);
            }
        }
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            digits[k] += 1;
            if digits[k] < p {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}
