//! Pushouts and simplicial localization.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::builtins::{s1, s1_localized, wedge};
use super::{Extension, Nondegenerate, SSet, SSetMap, SimplexId, SimplexRef};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    B,
    C,
}

pub struct Pushout {
    pub object: SSet,
    pub from_b: SSetMap,
    pub from_c: SSetMap,
    /// Nondegenerate simplices of `B` and `C` making up each nondegenerate
    /// simplex of the pushout.
    pub members: Vec<Vec<Vec<(Side, SimplexId)>>>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// `B ⊔_A C` for `i: A → B` and `f: A → C`, computed levelwise through
/// `level`. Labels come from `C` when a simplex has a member there.
pub fn pushout(i: &SSetMap, f: &SSetMap, level: usize) -> Result<Pushout> {
    let i = i.at_level(level)?;
    let f = f.at_level(level)?;
    if i.source != f.source {
        return Err(Error::InvalidMap("pushout legs have different sources".into()));
    }
    let (a, b, c) = (&i.source, &i.target, &f.target);

    // per level: elements of B then C, with their classes
    let mut elems: Vec<Vec<(Side, SimplexRef)>> = Vec::new();
    let mut lookup: Vec<HashMap<(Side, SimplexRef), usize>> = Vec::new();
    let mut class_of: Vec<Vec<usize>> = Vec::new();
    let mut class_count: Vec<usize> = Vec::new();
    for n in 0..=level {
        let mut e: Vec<(Side, SimplexRef)> = b.all_simplices(n).into_iter().map(|s| (Side::B, s)).collect();
        e.extend(c.all_simplices(n).into_iter().map(|s| (Side::C, s)));
        let map: HashMap<(Side, SimplexRef), usize> = e.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
        let mut dsu = Dsu((0..e.len()).collect());
        for s in a.all_simplices(n) {
            let x = map[&(Side::B, i.apply(&s)?)];
            let y = map[&(Side::C, f.apply(&s)?)];
            dsu.union(x, y);
        }
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut cls = Vec::with_capacity(e.len());
        for k in 0..e.len() {
            let r = dsu.find(k);
            let next = ids.len();
            cls.push(*ids.entry(r).or_insert(next));
        }
        class_count.push(ids.len());
        class_of.push(cls);
        elems.push(e);
        lookup.push(map);
    }

    let side_set = |s: Side| if s == Side::B { b } else { c };

    // nondegenerate classes: not hit by any degeneracy
    let mut nondeg: Vec<Vec<usize>> = Vec::new();
    let mut rep: Vec<Vec<usize>> = Vec::new();
    for n in 0..=level {
        let mut hit = vec![false; class_count[n]];
        if n > 0 {
            for (side, s) in &elems[n - 1] {
                for j in 0..n {
                    let t = s.degeneracy(j)?;
                    hit[class_of[n][lookup[n][&(*side, t)]]] = true;
                }
            }
        }
        let mut first = vec![usize::MAX; class_count[n]];
        for (k, cl) in class_of[n].iter().enumerate() {
            if first[*cl] == usize::MAX {
                first[*cl] = k;
            }
        }
        let nd: Vec<usize> = (0..class_count[n]).filter(|cl| !hit[*cl]).collect();
        rep.push(nd.iter().map(|cl| first[*cl]).collect());
        nondeg.push(nd);
    }

    // canonical form of every class
    let mut canon: Vec<Vec<Option<SimplexRef>>> = class_count.iter().map(|n| vec![None; *n]).collect();
    for m in 0..=level {
        for (pos, &k) in rep[m].iter().enumerate() {
            let (side, s) = &elems[m][k];
            for n in m..=level {
                for w in super::degeneracy_words(m, n) {
                    let t = s.with_degeneracies(&w)?;
                    let cl = class_of[n][lookup[n][&(*side, t)]];
                    let r = SimplexRef { degeneracies: w.clone(), base: SimplexId::new(m, pos) };
                    match &canon[n][cl] {
                        Some(old) if *old != r => {
                            return Err(Error::InternalConsistency(format!("pushout class has two normal forms {old} and {r}")))
                        }
                        _ => canon[n][cl] = Some(r),
                    }
                }
            }
        }
    }
    let canon_of = |n: usize, side: Side, s: &SimplexRef| -> Result<SimplexRef> {
        let cl = class_of[n][lookup[n][&(side, s.clone())]];
        canon[n][cl].clone().ok_or_else(|| Error::InternalConsistency("pushout class without normal form".into()))
    };

    let mut simplices = Vec::with_capacity(level + 1);
    let mut members = Vec::with_capacity(level + 1);
    for n in 0..=level {
        let mut lvl = Vec::new();
        let mut mem_lvl = Vec::new();
        let mut by_class: HashMap<usize, Vec<(Side, SimplexId)>> = HashMap::new();
        for (k, (side, s)) in elems[n].iter().enumerate() {
            if !s.is_degenerate() {
                by_class.entry(class_of[n][k]).or_default().push((*side, s.base));
            }
        }
        for (pos, cl) in nondeg[n].iter().enumerate() {
            let (side, s) = &elems[n][rep[n][pos]];
            let x = side_set(*side);
            let mut faces = Vec::new();
            if n > 0 {
                for d in 0..=n {
                    faces.push(canon_of(n - 1, *side, &x.face(d, s)?)?);
                }
            }
            let mem = by_class.remove(cl).unwrap_or_default();
            let label = mem
                .iter()
                .find(|(sd, _)| *sd == Side::C)
                .map(|(_, id)| c.label(*id).to_string())
                .unwrap_or_else(|| x.label(s.base).to_string());
            lvl.push(Nondegenerate { label, faces });
            mem_lvl.push(mem);
        }
        simplices.push(lvl);
        members.push(mem_lvl);
    }

    let extension = match (&b.extension, &c.extension) {
        (Extension::Finite, Extension::Finite) => Extension::Finite,
        _ if i.rule.is_some() && f.rule.is_some() => {
            let (i2, f2) = (i.clone(), f.clone());
            Extension::Rule(Arc::new(move |l| Ok(pushout(&i2, &f2, l)?.object)))
        }
        _ => Extension::Fixed,
    };
    let object = SSet::new(format!("{}+{}", b.name, c.name), simplices, extension);
    object.validate()?;

    let leg = |x: &SSet, side: Side| -> Result<Vec<Vec<SimplexRef>>> {
        (0..=level)
            .map(|n| (0..x.count(n)).map(|k| canon_of(n, side, &SimplexRef::nondegenerate(SimplexId::new(n, k)))).collect())
            .collect()
    };
    let from_b = SSetMap::new("B->P", b.clone(), object.clone(), leg(b, Side::B)?)?;
    let from_c = SSetMap::new("C->P", c.clone(), object.clone(), leg(c, Side::C)?)?;
    Ok(Pushout { object, from_b, from_c, members })
}

/// A simplicial set with a set of marked nondegenerate edges.
#[derive(Clone, Debug)]
pub struct MarkedSSet {
    pub base: SSet,
    pub marked: BTreeSet<usize>,
}

impl MarkedSSet {
    /// Every nondegenerate edge marked.
    pub fn sharp(x: &SSet) -> MarkedSSet {
        MarkedSSet { base: x.clone(), marked: (0..x.count(1)).collect() }
    }
}

pub struct Localization {
    pub object: SSet,
    /// `S → K_ι(S, W)`.
    pub unit: SSetMap,
    /// Marked edges in the order of the glued copies.
    pub edges: Vec<usize>,
    pub pushout: Pushout,
}

/// Glues a copy of the invertible-edge circle along each marked edge.
pub fn simplicial_localization(m: &MarkedSSet, level: usize) -> Result<Localization> {
    let s = m.base.at_level(level)?;
    if !s.is_reduced() {
        return Err(Error::NotReduced);
    }
    let edges: Vec<usize> = m.marked.iter().copied().collect();
    if let Some(e) = edges.iter().find(|e| **e >= s.count(1)) {
        return Err(Error::InvalidMap(format!("marked edge {e} does not exist")));
    }
    let k = edges.len();
    let circles = wedge(&vec![s1(level); k], level)?;
    let loops = wedge(&vec![s1_localized(level); k], level)?;
    let nd = |d: usize, i: usize| SimplexRef::nondegenerate(SimplexId::new(d, i));
    let u = s1_localized(level).find("u").expect("u exists").index;
    // copies of 𝕊¹ have two nondegenerate simplices per positive dimension
    let imgs_i = (0..=level)
        .map(|d| match d {
            0 => vec![nd(0, 0)],
            1 => (0..k).map(|c| nd(1, 2 * c + u)).collect(),
            _ => vec![],
        })
        .collect();
    let imgs_f = (0..=level)
        .map(|d| match d {
            0 => vec![nd(0, 0)],
            1 => edges.iter().map(|e| nd(1, *e)).collect(),
            _ => vec![],
        })
        .collect();
    let i = SSetMap::new("circles->loops", circles.clone(), loops, imgs_i)?;
    let f = SSetMap::new("circles->S", circles, s.clone(), imgs_f)?;
    let p = pushout(&i, &f, level)?;
    let mut object = p.object.clone();
    object.name = format!("K({})", s.name);
    let mut unit = p.from_c.clone();
    unit.target = object.clone();
    unit.name = "unit".into();
    let m2 = m.clone();
    object.extension = Extension::Rule(Arc::new(move |l| Ok(simplicial_localization(&m2, l)?.object)));
    Ok(Localization { object, unit, edges, pushout: p })
}

/// `K_ι(f^♯): K_ι(S^♯) → K_ι(S'^♯)` with every nondegenerate edge marked.
/// A copy glued along an edge sent to a degenerate edge collapses.
pub fn localization_map(f: &SSetMap, level: usize) -> Result<(Localization, Localization, SSetMap)> {
    let f = f.at_level(level)?;
    let src = simplicial_localization(&MarkedSSet::sharp(&f.source), level)?;
    let dst = simplicial_localization(&MarkedSSet::sharp(&f.target), level)?;
    let edge_copy: HashMap<usize, usize> = dst.edges.iter().enumerate().map(|(c, e)| (*e, c)).collect();
    let per_copy = 2usize;
    let mut images = Vec::with_capacity(level + 1);
    for n in 0..=level {
        let mut lvl = Vec::new();
        for mem in &src.pushout.members[n] {
            let img = if let Some((_, id)) = mem.iter().find(|(s, _)| *s == Side::C) {
                dst.unit.apply(&f.apply(&SimplexRef::nondegenerate(*id))?)?
            } else {
                let (_, id) = mem.first().ok_or_else(|| Error::InternalConsistency("empty class".into()))?;
                if n == 0 {
                    SimplexRef::nondegenerate(SimplexId::BASEPOINT)
                } else {
                    let copy = id.index / per_copy;
                    let edge = src.edges[copy];
                    let e_img = f.apply(&SimplexRef::nondegenerate(SimplexId::new(1, edge)))?;
                    if e_img.is_degenerate() {
                        SimplexRef::degenerate_vertex(0, n)
                    } else {
                        let c2 = edge_copy[&e_img.base.index];
                        let target = SimplexId::new(n, c2 * per_copy + id.index % per_copy);
                        dst.pushout.from_b.apply(&SimplexRef::nondegenerate(target))?
                    }
                }
            };
            lvl.push(img);
        }
        images.push(lvl);
    }
    let map = SSetMap::new(format!("K({})", f.name), src.object.clone(), dst.object.clone(), images)?;
    Ok((src, dst, map))
}

#[cfg(test)]
mod tests {
    use super::super::builtins::{boundary_delta, delta, point, rp2, sphere2_min};
    use super::*;

    #[test]
    fn circle_as_pushout_of_boundary_inclusion() {
        let a = boundary_delta(1);
        let b = delta(1);
        let nd = |d, i| SimplexRef::nondegenerate(SimplexId::new(d, i));
        let inc = SSetMap::new("inc", a.clone(), b, vec![vec![nd(0, 0), nd(0, 1)]]).unwrap();
        let col = SSetMap::collapse(&a);
        let p = pushout(&inc, &col, 3).unwrap();
        assert_eq!(p.object.counts(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn localization_of_circle_is_localized_circle() {
        let l = simplicial_localization(&MarkedSSet::sharp(&s1(4)), 4).unwrap();
        assert_eq!(l.object.counts(), s1_localized(4).counts());
        l.unit.validate().unwrap();
    }

    #[test]
    fn empty_marking_changes_nothing() {
        let m = MarkedSSet { base: rp2(3), marked: BTreeSet::new() };
        let l = simplicial_localization(&m, 3).unwrap();
        assert_eq!(l.object.counts(), rp2(3).counts());
        let l2 = simplicial_localization(&MarkedSSet::sharp(&sphere2_min(3)), 3).unwrap();
        assert_eq!(l2.object.counts(), vec![1, 0, 1, 0]);
    }

    #[test]
    fn localization_maps_are_simplicial() {
        let (_, _, m) = localization_map(&super::super::builtins::iota_s1(3), 3).unwrap();
        m.validate().unwrap();
        let (_, dst, m2) = localization_map(&SSetMap::collapse(&rp2(3)), 3).unwrap();
        m2.validate().unwrap();
        assert_eq!(dst.object.counts(), point(3).counts());
    }

    #[test]
    fn mismatched_legs_are_rejected() {
        let i = SSetMap::identity(&s1(2));
        let f = SSetMap::identity(&rp2(2));
        assert!(pushout(&i, &f, 2).is_err());
    }
}
