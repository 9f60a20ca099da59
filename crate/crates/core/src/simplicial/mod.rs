//! Finite-type simplicial sets stored by their nondegenerate simplices.
//!
//! Every simplex is written in Eilenberg–Zilber normal form
//! `s_{i_1} s_{i_2} ⋯ s_{i_k} x` with `i_1 > i_2 > ⋯ > i_k` and `x`
//! nondegenerate.

pub mod builtins;
pub mod colimit;
pub mod cover;
pub mod presentation;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexId {
    pub dim: usize,
    pub index: usize,
}

impl SimplexId {
    pub const BASEPOINT: SimplexId = SimplexId { dim: 0, index: 0 };

    pub fn new(dim: usize, index: usize) -> SimplexId {
        SimplexId { dim, index }
    }
}

/// A possibly degenerate simplex `s_{i_1} ⋯ s_{i_k} base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexRef {
    pub degeneracies: Vec<usize>,
    pub base: SimplexId,
}

impl SimplexRef {
    pub fn nondegenerate(base: SimplexId) -> SimplexRef {
        SimplexRef { degeneracies: Vec::new(), base }
    }

    /// `s_{n-1} ⋯ s_0 x` for a vertex `x`.
    pub fn degenerate_vertex(vertex: usize, n: usize) -> SimplexRef {
        SimplexRef { degeneracies: (0..n).rev().collect(), base: SimplexId::new(0, vertex) }
    }

    pub fn dim(&self) -> usize {
        self.base.dim + self.degeneracies.len()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degeneracies.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        let k = self.degeneracies.len();
        self.degeneracies.windows(2).all(|w| w[0] > w[1])
            && self.degeneracies.iter().enumerate().all(|(pos, i)| *i <= self.base.dim + (k - 1 - pos))
    }

    /// `s_j` applied to this simplex, rewritten with `s_i s_j = s_{j+1} s_i`.
    pub fn degeneracy(&self, j: usize) -> Result<SimplexRef> {
        if j > self.dim() {
            return Err(Error::InvalidSimplicialSet(format!("s_{j} applied to a simplex of dimension {}", self.dim())));
        }
        let mut out = Vec::with_capacity(self.degeneracies.len() + 1);
        let mut cur = Some(j);
        for &i in &self.degeneracies {
            match cur {
                Some(c) if c > i => {
                    out.push(c);
                    cur = None;
                    out.push(i);
                }
                Some(_) => out.push(i + 1),
                None => out.push(i),
            }
        }
        if let Some(c) = cur {
            out.push(c);
        }
        Ok(SimplexRef { degeneracies: out, base: self.base })
    }

    /// Applies a list of degeneracies, innermost last: `s_{e_1} ⋯ s_{e_t}`.
    pub fn with_degeneracies(&self, outer: &[usize]) -> Result<SimplexRef> {
        let mut r = self.clone();
        for &j in outer.iter().rev() {
            r = r.degeneracy(j)?;
        }
        Ok(r)
    }
}

impl fmt::Display for SimplexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degeneracies.is_empty() {
            write!(f, "x{}_{}", self.base.dim, self.base.index)
        } else {
            let d: Vec<String> = self.degeneracies.iter().map(|i| i.to_string()).collect();
            write!(f, "[{} ; x{}_{}]", d.join(" > "), self.base.dim, self.base.index)
        }
    }
}

/// A face or degeneracy operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Face(usize),
    Degeneracy(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nondegenerate {
    pub label: String,
    /// `d_0, …, d_n`; empty for vertices.
    pub faces: Vec<SimplexRef>,
}

pub type LevelRule = Arc<dyn Fn(usize) -> Result<SSet> + Send + Sync>;

/// How an object is continued past its stored truncation.
#[derive(Clone)]
pub enum Extension {
    /// No nondegenerate simplices beyond the stored ones.
    Finite,
    /// Regenerated on demand.
    Rule(LevelRule),
    /// Only the stored levels are known.
    Fixed,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extension::Finite => f.write_str("Finite"),
            Extension::Rule(_) => f.write_str("Rule"),
            Extension::Fixed => f.write_str("Fixed"),
        }
    }
}

/// Simplicial set known through dimension `truncation`.
#[derive(Clone, Debug)]
pub struct SSet {
    pub name: String,
    pub simplices: Vec<Vec<Nondegenerate>>,
    pub extension: Extension,
}

impl PartialEq for SSet {
    fn eq(&self, o: &SSet) -> bool {
        self.simplices == o.simplices
    }
}

impl SSet {
    pub fn new(name: impl Into<String>, simplices: Vec<Vec<Nondegenerate>>, extension: Extension) -> SSet {
        SSet { name: name.into(), simplices, extension }
    }

    pub fn truncation(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    pub fn count(&self, n: usize) -> usize {
        self.simplices.get(n).map_or(0, Vec::len)
    }

    /// Nondegenerate simplex counts in dimensions `0..=truncation`.
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.count(0) == 1
    }

    pub fn simplex(&self, id: SimplexId) -> Result<&Nondegenerate> {
        self.simplices
            .get(id.dim)
            .and_then(|l| l.get(id.index))
            .ok_or_else(|| Error::InvalidSimplicialSet(format!("no simplex {id:?} in {}", self.name)))
    }

    pub fn label(&self, id: SimplexId) -> &str {
        &self.simplices[id.dim][id.index].label
    }

    pub fn find(&self, label: &str) -> Option<SimplexId> {
        self.simplices.iter().enumerate().find_map(|(d, l)| l.iter().position(|s| s.label == label).map(|i| SimplexId::new(d, i)))
    }

    pub fn describe(&self, r: &SimplexRef) -> String {
        let base = &self.simplices[r.base.dim][r.base.index].label;
        if r.degeneracies.is_empty() {
            base.clone()
        } else {
            let d: Vec<String> = r.degeneracies.iter().map(|i| i.to_string()).collect();
            format!("s[{}]{}", d.join(","), base)
        }
    }

    /// `d_i` applied to any simplex, via the simplicial identities.
    pub fn face(&self, i: usize, r: &SimplexRef) -> Result<SimplexRef> {
        let n = r.dim();
        if n == 0 || i > n {
            return Err(Error::InvalidSimplicialSet(format!("d_{i} on a {n}-simplex")));
        }
        let mut emitted = Vec::new();
        let mut cur = i;
        for (pos, &j) in r.degeneracies.iter().enumerate() {
            if cur < j {
                emitted.push(j - 1);
            } else if cur == j || cur == j + 1 {
                emitted.extend_from_slice(&r.degeneracies[pos + 1..]);
                return SimplexRef::nondegenerate(r.base).with_degeneracies(&emitted);
            } else {
                emitted.push(j);
                cur -= 1;
            }
        }
        let base = self.simplex(r.base)?;
        let face = base.faces.get(cur).ok_or_else(|| Error::InvalidSimplicialSet(format!("simplex {:?} lacks face {cur}", r.base)))?;
        face.with_degeneracies(&emitted)
    }

    pub fn degeneracy(&self, j: usize, r: &SimplexRef) -> Result<SimplexRef> {
        r.degeneracy(j)
    }

    /// Applies `ops` in order, first element first.
    pub fn normalize_operator(&self, ops: &[Op], r: &SimplexRef) -> Result<SimplexRef> {
        let mut cur = r.clone();
        for op in ops {
            cur = match *op {
                Op::Face(i) => self.face(i, &cur)?,
                Op::Degeneracy(j) => cur.degeneracy(j)?,
            };
        }
        Ok(cur)
    }

    /// Composite `d_a ∘ d_{a+1} ∘ ⋯ ∘ d_b` (apply `d_b` first).
    pub fn faces_down(&self, r: &SimplexRef, a: usize, b: usize) -> Result<SimplexRef> {
        let mut cur = r.clone();
        for i in (a..=b).rev() {
            cur = self.face(i, &cur)?;
        }
        Ok(cur)
    }

    /// `d_0` applied `k` times.
    pub fn front_zero(&self, r: &SimplexRef, k: usize) -> Result<SimplexRef> {
        let mut cur = r.clone();
        for _ in 0..k {
            cur = self.face(0, &cur)?;
        }
        Ok(cur)
    }

    /// All simplices of dimension `n`, nondegenerate bases in order of
    /// dimension then index, degeneracy words in lexicographic order.
    pub fn all_simplices(&self, n: usize) -> Vec<SimplexRef> {
        let mut out = Vec::new();
        for m in 0..=n.min(self.truncation()) {
            let words = degeneracy_words(m, n);
            for idx in 0..self.count(m) {
                for w in &words {
                    out.push(SimplexRef { degeneracies: w.clone(), base: SimplexId::new(m, idx) });
                }
            }
        }
        out
    }

    pub fn simplex_index(&self, n: usize) -> HashMap<SimplexRef, usize> {
        self.all_simplices(n).into_iter().enumerate().map(|(i, s)| (s, i)).collect()
    }

    /// Checks face references and the identities `d_i d_j = d_{j-1} d_i`.
    pub fn validate(&self) -> Result<()> {
        for (n, level) in self.simplices.iter().enumerate() {
            for (idx, s) in level.iter().enumerate() {
                let want = if n == 0 { 0 } else { n + 1 };
                if s.faces.len() != want {
                    return Err(Error::InvalidSimplicialSet(format!("{} has {} faces, expected {want}", s.label, s.faces.len())));
                }
                for f in &s.faces {
                    if f.dim() + 1 != n || !f.is_canonical() || self.simplex(f.base).is_err() {
                        return Err(Error::InvalidSimplicialSet(format!("face {} of {} is malformed", f, s.label)));
                    }
                }
                if n >= 2 {
                    let me = SimplexRef::nondegenerate(SimplexId::new(n, idx));
                    for j in 1..=n {
                        for i in 0..j {
                            let lhs = self.face(i, &self.face(j, &me)?)?;
                            let rhs = self.face(j - 1, &self.face(i, &me)?)?;
                            if lhs != rhs {
                                return Err(Error::InvalidSimplicialSet(format!("d_{i} d_{j} != d_{} d_{i} on {}", j - 1, s.label)));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The same object known through `level`.
    pub fn at_level(&self, level: usize) -> Result<SSet> {
        if level <= self.truncation() {
            let mut s = self.clone();
            s.simplices.truncate(level + 1);
            if !matches!(s.extension, Extension::Rule(_)) {
                s.extension = Extension::Fixed;
            }
            if matches!(self.extension, Extension::Finite) && self.simplices[level + 1..].iter().all(Vec::is_empty) {
                s.extension = Extension::Finite;
            }
            return Ok(s);
        }
        match &self.extension {
            Extension::Finite => {
                let mut s = self.clone();
                s.simplices.resize(level + 1, Vec::new());
                Ok(s)
            }
            Extension::Rule(f) => f(level),
            Extension::Fixed => Err(Error::InsufficientTruncation { needed: level, available: self.truncation() }),
        }
    }
}

/// Strictly decreasing degeneracy words taking dimension `m` to `n`.
pub fn degeneracy_words(m: usize, n: usize) -> Vec<Vec<usize>> {
    if m > n {
        return Vec::new();
    }
    let k = n - m;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            let mut w = cur.clone();
            w.reverse();
            out.push(w);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub type MapRule = Arc<dyn Fn(usize) -> Result<SSetMap> + Send + Sync>;

/// A simplicial map given on nondegenerate simplices.
#[derive(Clone)]
pub struct SSetMap {
    pub name: String,
    pub source: SSet,
    pub target: SSet,
    pub images: Vec<Vec<SimplexRef>>,
    pub rule: Option<MapRule>,
}

impl fmt::Debug for SSetMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SSetMap")
            .field("name", &self.name)
            .field("source", &self.source.name)
            .field("target", &self.target.name)
            .field("images", &self.images)
            .finish()
    }
}

impl SSetMap {
    pub fn new(name: impl Into<String>, source: SSet, target: SSet, images: Vec<Vec<SimplexRef>>) -> Result<SSetMap> {
        let m = SSetMap { name: name.into(), source, target, images, rule: None };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(x: &SSet) -> SSetMap {
        let images = x
            .simplices
            .iter()
            .enumerate()
            .map(|(d, l)| (0..l.len()).map(|i| SimplexRef::nondegenerate(SimplexId::new(d, i))).collect())
            .collect();
        let x2 = x.clone();
        let rule: MapRule = Arc::new(move |level| Ok(SSetMap::identity(&x2.at_level(level)?)));
        SSetMap { name: format!("id({})", x.name), source: x.clone(), target: x.clone(), images, rule: Some(rule) }
    }

    /// The map to the one-point set.
    pub fn collapse(x: &SSet) -> SSetMap {
        let pt = builtins::point(x.truncation());
        let images = x.simplices.iter().enumerate().map(|(d, l)| vec![SimplexRef::degenerate_vertex(0, d); l.len()]).collect();
        let x2 = x.clone();
        let rule: MapRule = Arc::new(move |level| Ok(SSetMap::collapse(&x2.at_level(level)?)));
        SSetMap { name: format!("collapse({})", x.name), source: x.clone(), target: pt, images, rule: Some(rule) }
    }

    pub fn truncation(&self) -> usize {
        self.source.truncation().min(self.target.truncation())
    }

    pub fn apply(&self, r: &SimplexRef) -> Result<SimplexRef> {
        let img = self
            .images
            .get(r.base.dim)
            .and_then(|l| l.get(r.base.index))
            .ok_or_else(|| Error::InvalidMap(format!("{} has no image for {:?}", self.name, r.base)))?;
        img.with_degeneracies(&r.degeneracies)
    }

    pub fn validate(&self) -> Result<()> {
        for (n, level) in self.source.simplices.iter().enumerate() {
            if n > self.target.truncation() {
                break;
            }
            let imgs = self.images.get(n).ok_or_else(|| Error::InvalidMap("missing level".into()))?;
            if imgs.len() != level.len() {
                return Err(Error::InvalidMap(format!("{} images in dimension {n}", imgs.len())));
            }
            for (idx, img) in imgs.iter().enumerate() {
                if img.dim() != n || !img.is_canonical() || self.target.simplex(img.base).is_err() {
                    return Err(Error::InvalidMap(format!("image of {} is malformed", level[idx].label)));
                }
                if n == 0 {
                    continue;
                }
                let me = SimplexRef::nondegenerate(SimplexId::new(n, idx));
                for i in 0..=n {
                    let lhs = self.target.face(i, img)?;
                    let rhs = self.apply(&self.source.face(i, &me)?)?;
                    if lhs != rhs {
                        return Err(Error::InvalidMap(format!("{} does not commute with d_{i} on {}", self.name, level[idx].label)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn compose(g: &SSetMap, f: &SSetMap) -> Result<SSetMap> {
        let images = f.images.iter().map(|l| l.iter().map(|r| g.apply(r)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let (g2, f2) = (g.clone(), f.clone());
        let rule: MapRule = Arc::new(move |level| SSetMap::compose(&g2.at_level(level)?, &f2.at_level(level)?));
        Ok(SSetMap {
            name: format!("{}∘{}", g.name, f.name), source: f.source.clone(), target: g.target.clone(), images, rule: Some(rule)
        })
    }

    pub fn at_level(&self, level: usize) -> Result<SSetMap> {
        if level <= self.truncation() {
            let mut m = self.clone();
            m.source = m.source.at_level(level)?;
            m.target = m.target.at_level(level)?;
            m.images.truncate(level + 1);
            return Ok(m);
        }
        if let Some(r) = &self.rule {
            return r(level);
        }
        // a finite source has nothing new to map
        let source = self.source.at_level(level)?;
        let target = self.target.at_level(level)?;
        if source.simplices.iter().skip(self.images.len()).any(|l| !l.is_empty()) {
            return Err(Error::InsufficientTruncation { needed: level, available: self.truncation() });
        }
        let mut m = self.clone();
        m.images.resize(level + 1, Vec::new());
        m.source = source;
        m.target = target;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn canonical_ref() -> impl Strategy<Value = SimplexRef> {
        (0usize..3, 0usize..4).prop_flat_map(|(m, k)| {
            let words = degeneracy_words(m, m + k);
            (0..words.len()).prop_map(move |w| SimplexRef { degeneracies: words[w].clone(), base: SimplexId::new(m, 0) })
        })
    }

    #[test]
    fn degeneracy_word_counts_are_binomial() {
        assert_eq!(degeneracy_words(0, 3).len(), 1);
        assert_eq!(degeneracy_words(1, 3).len(), 3);
        assert_eq!(degeneracy_words(2, 4).len(), 6);
        assert_eq!(degeneracy_words(3, 3), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn finite_map_extends_past_a_short_target() {
        let mut f = SSetMap::identity(&builtins::s1(5));
        f.target = builtins::s1(2);
        let g = f.at_level(3).unwrap();
        assert_eq!(g.images.len(), 4);
        g.validate().unwrap();
    }

    #[test]
    fn degeneracies_commute_into_normal_form() {
        let x = SimplexRef::nondegenerate(SimplexId::new(1, 0));
        let a = x.degeneracy(0).unwrap().degeneracy(2).unwrap();
        assert_eq!(a.degeneracies, vec![2, 0]);
        let b = x.degeneracy(0).unwrap().degeneracy(0).unwrap();
        assert_eq!(b.degeneracies, vec![1, 0]);
        assert!(x.degeneracy(2).is_err());
    }

    proptest! {
        #[test]
        fn degeneracy_keeps_canonical_form(r in canonical_ref(), j in 0usize..6) {
            prop_assume!(j <= r.dim());
            let s = r.degeneracy(j).unwrap();
            prop_assert!(s.is_canonical());
            prop_assert_eq!(s.dim(), r.dim() + 1);
        }

        #[test]
        fn ss_identity(r in canonical_ref(), i in 0usize..6, j in 0usize..6) {
            // s_i s_j = s_{j+1} s_i for i <= j
            prop_assume!(i <= j && j <= r.dim());
            let lhs = r.degeneracy(j).unwrap().degeneracy(i).unwrap();
            let rhs = r.degeneracy(i).unwrap().degeneracy(j + 1).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn face_degeneracy_identities_on_fixtures() {
        // d_i s_j against the three cases of the simplicial identities
        for x in [builtins::s1(5), builtins::rp2(5), builtins::nerve_j(4), builtins::delta(3)] {
            for n in 0..4 {
                for s in x.all_simplices(n) {
                    for j in 0..=n {
                        let sj = s.degeneracy(j).unwrap();
                        for i in 0..=n + 1 {
                            let lhs = x.face(i, &sj).unwrap();
                            let rhs = if i < j {
                                x.face(i, &s).unwrap().degeneracy(j - 1).unwrap()
                            } else if i == j || i == j + 1 {
                                s.clone()
                            } else {
                                x.face(i - 1, &s).unwrap().degeneracy(j).unwrap()
                            };
                            assert_eq!(lhs, rhs, "{} d_{i} s_{j} {s}", x.name);
                        }
                    }
                    if n >= 2 {
                        for j in 1..=n {
                            for i in 0..j {
                                let lhs = x.face(i, &x.face(j, &s).unwrap()).unwrap();
                                let rhs = x.face(j - 1, &x.face(i, &s).unwrap()).unwrap();
                                assert_eq!(lhs, rhs);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn map_validation_catches_face_mismatch() {
        let s1 = builtins::s1(2);
        let sphere = builtins::sphere2_min(2);
        let bad = SSetMap::new(
            "bad",
            sphere.clone(),
            s1.clone(),
            vec![
                vec![SimplexRef::nondegenerate(SimplexId::BASEPOINT)],
                vec![],
                vec![SimplexRef::nondegenerate(SimplexId::new(1, 0)).degeneracy(0).unwrap()],
            ],
        );
        assert!(bad.is_err());
        let ok = SSetMap::collapse(&sphere);
        assert!(ok.validate().is_ok());
    }

    #[test]
    fn wrong_face_count_is_rejected() {
        let mut x = builtins::s1(2);
        x.simplices[1][0].faces.pop();
        assert!(x.validate().is_err());
    }
}
