//! Covers from finite group labelings of edges.
//!
//! A simplex of the cover is `(σ, h)` with the sheet `h` read at the last
//! vertex of `σ`. Edges carry `ρ(e) ∈ G` and moving along `e` multiplies
//! the sheet on the right by `ρ(e)`, so
//! `d_n(σ, h) = (d_n σ, h · ρ(e)⁻¹)` where `e` is the last edge of `σ`,
//! and every other face keeps the sheet.

use std::sync::Arc;

use super::presentation::{pi1_presentation, FiniteGroup};
use super::{Extension, Nondegenerate, SSet, SSetMap, SimplexId, SimplexRef};
use crate::error::{Error, Result};

/// Multiplication table of a finite group with identity `0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
}

impl GroupTable {
    pub fn new(mul: Vec<Vec<usize>>) -> Result<GroupTable> {
        let n = mul.len();
        if n == 0 || mul.iter().any(|r| r.len() != n || r.iter().any(|x| *x >= n)) {
            return Err(Error::InvalidCover("multiplication table is not square".into()));
        }
        if (0..n).any(|a| mul[0][a] != a || mul[a][0] != a) {
            return Err(Error::InvalidCover("element 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidCover("multiplication is not associative".into()));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n).find(|b| mul[a][*b] == 0).ok_or_else(|| Error::InvalidCover(format!("element {a} has no inverse")))?;
        }
        Ok(GroupTable { mul, inv })
    }

    pub fn trivial() -> GroupTable {
        GroupTable { mul: vec![vec![0]], inv: vec![0] }
    }

    pub fn cyclic(n: usize) -> GroupTable {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupTable { mul, inv: (0..n).map(|a| (n - a) % n).collect() }
    }

    pub fn from_group(g: &FiniteGroup) -> GroupTable {
        let words = g.words();
        let n = g.order();
        let mul = (0..n).map(|a| (0..n).map(|b| g.mul(a, b, &words)).collect()).collect();
        let inv = (0..n).map(|a| g.inverse(a, &words)).collect();
        GroupTable { mul, inv }
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }
}

fn edge_label(labeling: &[usize], e: &SimplexRef) -> usize {
    if e.is_degenerate() {
        0
    } else {
        labeling[e.base.index]
    }
}

/// Label of the edge from the second to last vertex to the last one.
fn last_edge(x: &SSet, labeling: &[usize], r: &SimplexRef) -> Result<usize> {
    let e = x.front_zero(r, r.dim() - 1)?;
    Ok(edge_label(labeling, &e))
}

/// Checks `ρ(d_2 α) · ρ(d_0 α) = ρ(d_1 α)` on every nondegenerate 2-simplex.
pub fn check_cocycle(x: &SSet, g: &GroupTable, labeling: &[usize]) -> Result<()> {
    if labeling.len() != x.count(1) || labeling.iter().any(|h| *h >= g.order()) {
        return Err(Error::InvalidCover(format!("labeling has {} entries for {} edges", labeling.len(), x.count(1))));
    }
    for s in x.simplices.get(2).map(|v| v.as_slice()).unwrap_or(&[]) {
        let [a, b, c] = [0, 1, 2].map(|i| edge_label(labeling, &s.faces[i]));
        if g.mul[c][a] != b {
            return Err(Error::InvalidCover(format!("relation of {} is not sent to the identity", s.label)));
        }
    }
    Ok(())
}

/// The `|G|`-fold cover of `x` through `level`.
pub fn universal_cover(x: &SSet, g: &GroupTable, labeling: &[usize], level: usize) -> Result<SSet> {
    if !x.is_reduced() {
        return Err(Error::NotReduced);
    }
    let x = x.at_level(level.max(2))?;
    check_cocycle(&x, g, labeling)?;
    let order = g.order();
    let id = |b: SimplexId, h: usize| SimplexId::new(b.dim, b.index * order + h);
    let mut levels = Vec::with_capacity(level + 1);
    for n in 0..=level {
        let mut out = Vec::with_capacity(x.count(n) * order);
        for (idx, s) in x.simplices[n].iter().enumerate() {
            let me = SimplexRef::nondegenerate(SimplexId::new(n, idx));
            let back = if n == 0 { 0 } else { g.inv[last_edge(&x, labeling, &me)?] };
            for h in 0..order {
                let faces = s
                    .faces
                    .iter()
                    .enumerate()
                    .map(|(i, f)| {
                        let sheet = if i == n { g.mul[h][back] } else { h };
                        SimplexRef { degeneracies: f.degeneracies.clone(), base: id(f.base, sheet) }
                    })
                    .collect();
                out.push(Nondegenerate { label: format!("{}@{h}", s.label), faces });
            }
        }
        levels.push(out);
    }
    let extension = match &x.extension {
        Extension::Finite => Extension::Finite,
        Extension::Fixed => Extension::Fixed,
        Extension::Rule(_) => {
            let (x2, g2, l2) = (x.clone(), g.clone(), labeling.to_vec());
            Extension::Rule(Arc::new(move |lv| universal_cover(&x2, &g2, &l2, lv)))
        }
    };
    Ok(SSet::new(format!("cover({})", x.name), levels, extension))
}

/// A cover built from a coset enumeration of the fundamental group.
#[derive(Clone, Debug)]
pub struct CertifiedCover {
    pub group: GroupTable,
    pub labeling: Vec<usize>,
    pub cover: SSet,
}

/// Enumerates `π₁(x)` with at most `coset_limit` cosets and builds the
/// universal cover; an infinite or unenumerated group is an error.
pub fn certified_universal_cover(x: &SSet, coset_limit: usize, level: usize) -> Result<CertifiedCover> {
    let x2 = x.at_level(level.max(2))?;
    let pi = pi1_presentation(&x2)?;
    let fg = FiniteGroup::enumerate(&pi.presentation, coset_limit)
        .ok_or_else(|| Error::InvalidCover(format!("fundamental group not certified finite within {coset_limit} cosets")))?;
    let labeling: Vec<usize> = (0..x2.count(1)).map(|e| fg.eval(&[e as i32 + 1])).collect();
    let group = GroupTable::from_group(&fg);
    let cover = universal_cover(&x2, &group, &labeling, level)?;
    Ok(CertifiedCover { group, labeling, cover })
}

/// `(σ, h) ↦ (f σ, φ(h))` for a homomorphism `φ` compatible with the labelings.
pub fn cover_map(f: &SSetMap, src: &CertifiedCover, dst: &CertifiedCover, phi: &[usize], level: usize) -> Result<SSetMap> {
    let f = f.at_level(level)?;
    let (n_src, n_dst) = (src.group.order(), dst.group.order());
    if phi.len() != n_src || phi.iter().any(|h| *h >= n_dst) {
        return Err(Error::InvalidMap("group homomorphism has the wrong shape".into()));
    }
    let mut images = Vec::with_capacity(level + 1);
    for n in 0..=level {
        let mut out = Vec::with_capacity(f.source.count(n) * n_src);
        for idx in 0..f.source.count(n) {
            let img = f.apply(&SimplexRef::nondegenerate(SimplexId::new(n, idx)))?;
            for h in 0..n_src {
                out.push(SimplexRef {
                    degeneracies: img.degeneracies.clone(),
                    base: SimplexId::new(img.base.dim, img.base.index * n_dst + phi[h]),
                });
            }
        }
        images.push(out);
    }
    SSetMap::new(format!("cover({})", f.name), src.cover.at_level(level)?, dst.cover.at_level(level)?, images)
}

#[cfg(test)]
mod tests {
    use super::super::builtins::{point, rp2, s1, sphere2_min};
    use super::*;

    #[test]
    fn trivial_group_gives_the_base() {
        let x = sphere2_min(3);
        let c = universal_cover(&x, &GroupTable::trivial(), &[], 3).unwrap();
        assert_eq!(c.counts(), x.counts());
        c.validate().unwrap();
    }

    #[test]
    fn rp2_double_cover() {
        let c = certified_universal_cover(&rp2(3), 100, 3).unwrap();
        assert_eq!(c.group.order(), 2);
        assert_eq!(c.cover.counts(), vec![2, 2, 2, 0]);
        c.cover.validate().unwrap();
    }

    #[test]
    fn circle_double_cover_and_infinite_rejection() {
        let c = universal_cover(&s1(3), &GroupTable::cyclic(2), &[1], 3).unwrap();
        assert_eq!(c.counts(), vec![2, 2, 0, 0]);
        c.validate().unwrap();
        assert!(matches!(certified_universal_cover(&s1(3), 50, 3), Err(Error::InvalidCover(_))));
    }

    #[test]
    fn non_cocycle_is_rejected() {
        // the rp2 relation a·a = 1 fails in ℤ/3
        let e = universal_cover(&rp2(2), &GroupTable::cyclic(3), &[1], 2);
        assert!(matches!(e, Err(Error::InvalidCover(_))));
    }

    #[test]
    fn identity_and_collapse_lift() {
        let c = certified_universal_cover(&rp2(3), 100, 3).unwrap();
        let id = SSetMap::identity(&rp2(3));
        cover_map(&id, &c, &c, &[0, 1], 3).unwrap();
        let p = certified_universal_cover(&point(3), 100, 3).unwrap();
        cover_map(&SSetMap::collapse(&rp2(3)), &c, &p, &[0, 0], 3).unwrap();
        assert!(cover_map(&id, &c, &c, &[0, 0, 1], 3).is_err());
    }

    #[test]
    fn bad_tables_are_rejected() {
        assert!(GroupTable::new(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert_eq!(GroupTable::new(GroupTable::cyclic(4).mul).unwrap(), GroupTable::cyclic(4));
    }
}
