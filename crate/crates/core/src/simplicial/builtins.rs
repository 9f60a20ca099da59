//! Builtin simplicial sets.

use std::collections::HashMap;
use std::sync::Arc;

use super::{colimit, Extension, Nondegenerate, SSet, SSetMap, SimplexId, SimplexRef};
use crate::error::{Error, Result};

fn vertex(label: &str) -> Nondegenerate {
    Nondegenerate { label: label.into(), faces: Vec::new() }
}

fn nd(dim: usize, index: usize) -> SimplexRef {
    SimplexRef::nondegenerate(SimplexId::new(dim, index))
}

fn padded(mut levels: Vec<Vec<Nondegenerate>>, level: usize) -> Vec<Vec<Nondegenerate>> {
    levels.resize_with(levels.len().max(level + 1), Vec::new);
    levels
}

pub fn point(level: usize) -> SSet {
    SSet::new("pt", padded(vec![vec![vertex("*")]], level), Extension::Finite)
}

/// One vertex and one nondegenerate edge `t`.
pub fn s1(level: usize) -> SSet {
    let t = Nondegenerate { label: "t".into(), faces: vec![nd(0, 0), nd(0, 0)] };
    SSet::new("s1", padded(vec![vec![vertex("*")], vec![t]], level), Extension::Finite)
}

/// One vertex and one 2-simplex all of whose faces are degenerate.
pub fn sphere2_min(level: usize) -> SSet {
    let e = Nondegenerate { label: "e".into(), faces: vec![SimplexRef::degenerate_vertex(0, 1); 3] };
    SSet::new("sphere2_min", padded(vec![vec![vertex("*")], vec![], vec![e]], level), Extension::Finite)
}

/// One loop `a` and one 2-simplex with faces `(a, s_0 *, a)`.
pub fn rp2(level: usize) -> SSet {
    let a = Nondegenerate { label: "a".into(), faces: vec![nd(0, 0), nd(0, 0)] };
    let alpha = Nondegenerate { label: "alpha".into(), faces: vec![nd(1, 0), SimplexRef::degenerate_vertex(0, 1), nd(1, 0)] };
    SSet::new("rp2_presentation", padded(vec![vec![vertex("*")], vec![a], vec![alpha]], level), Extension::Finite)
}

/// Nondegenerate core and canonical degeneracies of a vertex sequence:
/// a repeat at positions `k, k+1` contributes `s_k`.
pub fn sequence_normal_form(seq: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut core = Vec::with_capacity(seq.len());
    let mut degens = Vec::new();
    for (k, v) in seq.iter().enumerate() {
        if k > 0 && seq[k - 1] == *v {
            degens.push(k - 1);
        } else {
            core.push(*v);
        }
    }
    degens.reverse();
    (core, degens)
}

/// Simplicial set whose simplices are vertex sequences accepted by `keep`,
/// closed under deletion and repetition; nondegenerate ones have no repeats.
fn sequence_set(name: &str, cores: Vec<Vec<Vec<usize>>>, label: impl Fn(&[usize]) -> String, extension: Extension) -> Result<SSet> {
    let mut index: HashMap<Vec<usize>, SimplexId> = HashMap::new();
    for (d, l) in cores.iter().enumerate() {
        for (i, c) in l.iter().enumerate() {
            index.insert(c.clone(), SimplexId::new(d, i));
        }
    }
    let mut simplices = Vec::with_capacity(cores.len());
    for (d, l) in cores.iter().enumerate() {
        let mut level = Vec::with_capacity(l.len());
        for c in l {
            let mut faces = Vec::new();
            if d > 0 {
                for i in 0..=d {
                    let mut s = c.clone();
                    s.remove(i);
                    let (core, degens) = sequence_normal_form(&s);
                    let base =
                        *index.get(&core).ok_or_else(|| Error::InvalidSimplicialSet(format!("face {core:?} of {c:?} is missing")))?;
                    faces.push(SimplexRef { degeneracies: degens, base });
                }
            }
            level.push(Nondegenerate { label: label(c), faces });
        }
        simplices.push(level);
    }
    Ok(SSet::new(name, simplices, extension))
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn seq_label(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("[{}]", v.join(""))
}

/// The standard `n`-simplex.
pub fn delta(n: usize) -> SSet {
    let cores = (0..=n).map(|d| subsets(n, d + 1)).collect();
    sequence_set(&format!("delta({n})"), cores, seq_label, Extension::Finite).expect("faces of subsets exist")
}

/// Boundary of the standard `n`-simplex.
pub fn boundary_delta(n: usize) -> SSet {
    let cores = (0..n).map(|d| subsets(n, d + 1)).collect();
    sequence_set(&format!("boundary_delta({n})"), cores, seq_label, Extension::Finite).expect("faces of subsets exist")
}

/// Nerve of the contractible groupoid on objects `0, 1`. The nondegenerate
/// `n`-simplices are the two alternating sequences of length `n + 1`.
pub fn nerve_j(level: usize) -> SSet {
    let cores = (0..=level).map(|d| (0..2).map(|start| (0..=d).map(|k| (start + k) % 2).collect()).collect()).collect();
    let rule: super::LevelRule = Arc::new(|l| Ok(nerve_j(l)));
    sequence_set("nerve_j", cores, seq_label, Extension::Rule(rule)).expect("faces of alternating sequences")
}

/// `Δ¹ → N(J)` picking the edge `[01]`.
pub fn delta1_to_nerve(level: usize) -> SSetMap {
    let d1 = delta(1).at_level(level).expect("finite");
    let nj = nerve_j(level);
    // vertices [0],[1] and the edge [01] map to the same sequences
    let images = (0..=level)
        .map(|d| match d {
            0 => vec![nd(0, 0), nd(0, 1)],
            1 => vec![nd(1, 0)],
            _ => vec![],
        })
        .collect();
    SSetMap { name: "delta1->nerve_j".into(), source: d1, target: nj, images, rule: Some(Arc::new(|l| Ok(delta1_to_nerve(l)))) }
}

/// `Δ¹ → S¹` collapsing the boundary.
pub fn delta1_to_s1(level: usize) -> SSetMap {
    let d1 = delta(1).at_level(level).expect("finite");
    let images = (0..=level)
        .map(|d| match d {
            0 => vec![nd(0, 0), nd(0, 0)],
            1 => vec![nd(1, 0)],
            _ => vec![],
        })
        .collect();
    SSetMap { name: "delta1->s1".into(), source: d1, target: s1(level), images, rule: Some(Arc::new(|l| Ok(delta1_to_s1(l)))) }
}

/// The circle with the edge made invertible: `S¹ ∪_{Δ¹} N(J)`. Its loop `u`
/// is the image of `t` and `v` is the reverse edge.
pub fn s1_localized(level: usize) -> SSet {
    let p = colimit::pushout(&delta1_to_nerve(level), &delta1_to_s1(level), level).expect("pushout of finite data");
    let mut x = p.object;
    x.name = "s1_localized".into();
    let nj = nerve_j(level);
    for d in 1..=level {
        for (k, s) in x.simplices[d].iter_mut().enumerate() {
            if let Some((_, id)) = p.members[d][k].iter().find(|(side, _)| *side == colimit::Side::B) {
                s.label = alt_label(nj.label(*id).trim_matches(|c| c == '[' || c == ']'));
            }
        }
    }
    x.extension = Extension::Rule(Arc::new(|l| Ok(s1_localized(l))));
    x
}

fn alt_label(seq: &str) -> String {
    // "01" -> u, "10" -> v, longer words keep the vertex sequence
    match seq {
        "01" => "u".into(),
        "10" => "v".into(),
        s if s.starts_with('0') => format!("u{}", s.len() - 1),
        s => format!("v{}", s.len() - 1),
    }
}

/// The inclusion `S¹ → 𝕊¹` sending `t` to `u`.
pub fn iota_s1(level: usize) -> SSetMap {
    let src = s1(level);
    let dst = s1_localized(level);
    let u = dst.find("u").expect("u exists");
    let images = (0..=level)
        .map(|d| match d {
            0 => vec![nd(0, 0)],
            1 => vec![SimplexRef::nondegenerate(u)],
            _ => vec![],
        })
        .collect();
    SSetMap { name: "iota_s1".into(), source: src, target: dst, images, rule: Some(Arc::new(iota_s1_checked)) }
}

fn iota_s1_checked(level: usize) -> Result<SSetMap> {
    let m = iota_s1(level);
    m.validate()?;
    Ok(m)
}

/// One-point union of reduced simplicial sets. Labels of the `k`-th summand
/// get the suffix `_k`.
pub fn wedge(parts: &[SSet], level: usize) -> Result<SSet> {
    let parts: Vec<SSet> = parts.iter().map(|p| p.at_level(level)).collect::<Result<_>>()?;
    if parts.iter().any(|p| !p.is_reduced()) {
        return Err(Error::NotReduced);
    }
    let mut simplices: Vec<Vec<Nondegenerate>> = vec![Vec::new(); level + 1];
    simplices[0].push(vertex("*"));
    let mut offsets = vec![vec![0usize; level + 1]; parts.len()];
    for (k, p) in parts.iter().enumerate() {
        for d in 1..=level {
            offsets[k][d] = simplices[d].len();
            for s in &p.simplices[d] {
                let faces = s
                    .faces
                    .iter()
                    .map(|f| {
                        let base = if f.base.dim == 0 {
                            SimplexId::BASEPOINT
                        } else {
                            SimplexId::new(f.base.dim, f.base.index + offsets[k][f.base.dim])
                        };
                        SimplexRef { degeneracies: f.degeneracies.clone(), base }
                    })
                    .collect();
                simplices[d].push(Nondegenerate { label: format!("{}_{}", s.label, k + 1), faces });
            }
        }
    }
    let names: Vec<&str> = parts.iter().map(|p| p.name.as_str()).collect();
    let name = format!("wedge({})", names.join(","));
    let extension = if parts.iter().all(|p| matches!(p.extension, Extension::Finite)) {
        Extension::Finite
    } else {
        let owned = parts.clone();
        Extension::Rule(Arc::new(move |l| wedge(&owned, l)))
    };
    Ok(SSet::new(name, simplices, extension))
}

/// Inclusion of the `k`-th summand into a wedge.
pub fn wedge_inclusion(parts: &[SSet], k: usize, level: usize) -> Result<SSetMap> {
    let w = wedge(parts, level)?;
    let p = parts[k].at_level(level)?;
    let images = (0..=level)
        .map(|d| {
            if d == 0 {
                return vec![nd(0, 0)];
            }
            let off: usize = parts[..k].iter().map(|q| q.count(d)).sum();
            (0..p.count(d)).map(|i| nd(d, off + i)).collect()
        })
        .collect();
    SSetMap::new(format!("in_{}", k + 1), p, w, images)
}

/// Parses names such as `s1`, `delta(2)` or `wedge(s1,sphere2_min)`.
pub fn by_name(name: &str, level: usize) -> Result<SSet> {
    let name = name.trim();
    let arg =
        |prefix: &str| -> Option<&str> { name.strip_prefix(prefix).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')')) };
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::UnknownFixture(name.to_string()));
    let x = match name {
        "pt" | "point" => point(level),
        "s1" => s1(level),
        "sphere2_min" => sphere2_min(level),
        "rp2" | "rp2_presentation" => rp2(level),
        "nerve_j" => nerve_j(level),
        "s1_localized" => s1_localized(level),
        _ => {
            if let Some(a) = arg("delta") {
                delta(num(a)?).at_level(level)?
            } else if let Some(a) = arg("boundary_delta") {
                boundary_delta(num(a)?).at_level(level)?
            } else if let Some(a) = arg("wedge") {
                let parts = split_args(a).iter().map(|p| by_name(p, level)).collect::<Result<Vec<_>>>()?;
                wedge(&parts, level)?
            } else {
                return Err(Error::UnknownFixture(name.to_string()));
            }
        }
    };
    x.at_level(level)
}

fn split_args(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Builtin maps: `iota_s1`, `id(X)` and `collapse(X)`.
pub fn map_by_name(name: &str, level: usize) -> Result<SSetMap> {
    let name = name.trim();
    if name == "iota_s1" {
        return iota_s1_checked(level);
    }
    let inner = |p: &str| name.strip_prefix(p).and_then(|r| r.strip_prefix('(')).and_then(|r| r.strip_suffix(')'));
    if let Some(x) = inner("id") {
        return Ok(SSetMap::identity(&by_name(x, level)?));
    }
    if let Some(x) = inner("collapse") {
        return Ok(SSetMap::collapse(&by_name(x, level)?));
    }
    match name {
        "collapse_sphere2" => Ok(SSetMap::collapse(&sphere2_min(level))),
        "collapse_rp2" => Ok(SSetMap::collapse(&rp2(level))),
        _ => Err(Error::UnknownFixture(name.to_string())),
    }
}

/// Names of the fixture suite used by sweeps.
pub const SUITE: &[&str] = &["pt", "s1", "s1_localized", "sphere2_min", "rp2_presentation", "wedge(s1,s1)"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        for x in [
            point(3),
            s1(3),
            sphere2_min(3),
            rp2(3),
            nerve_j(4),
            s1_localized(4),
            delta(3),
            boundary_delta(3),
            wedge(&[s1(3), sphere2_min(3)], 3).unwrap(),
        ] {
            x.validate().unwrap_or_else(|e| panic!("{}: {e}", x.name));
        }
    }

    #[test]
    fn nerve_has_two_simplices_per_dimension() {
        assert_eq!(nerve_j(5).counts(), vec![2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn nerve_inner_face_is_degenerate() {
        let nj = nerve_j(3);
        // d_1 [010] = s_0 [0]
        let f = nj.face(1, &nd(2, 0)).unwrap();
        assert_eq!(f, SimplexRef::degenerate_vertex(0, 1));
    }

    #[test]
    fn localized_circle_counts() {
        assert_eq!(s1_localized(5).counts(), vec![1, 2, 2, 2, 2, 2]);
        let x = s1_localized(3);
        let u = x.find("u").unwrap();
        let v = x.find("v").unwrap();
        assert_ne!(u, v);
        // the middle face of each 2-simplex is the degenerate loop
        for i in 0..2 {
            let f = x.face(1, &nd(2, i)).unwrap();
            assert_eq!(f, SimplexRef::degenerate_vertex(0, 1));
        }
    }

    #[test]
    fn delta_counts_are_binomial() {
        assert_eq!(delta(3).counts(), vec![4, 6, 4, 1]);
        assert_eq!(boundary_delta(3).counts(), vec![4, 6, 4]);
        let all: Vec<usize> = (0..4).map(|n| delta(2).at_level(3).unwrap().all_simplices(n).len()).collect();
        // simplices of Δ² in dimension n are the C(n+3, 2) monotone sequences
        assert_eq!(all, vec![3, 6, 10, 15]);
    }

    #[test]
    fn iota_is_simplicial() {
        iota_s1(4).validate().unwrap();
    }

    #[test]
    fn names_resolve() {
        assert_eq!(by_name("wedge(s1,wedge(s1,sphere2_min))", 2).unwrap().counts(), vec![1, 2, 1]);
        assert!(matches!(by_name("torus", 2), Err(Error::UnknownFixture(_))));
        assert!(map_by_name("collapse(rp2)", 3).unwrap().validate().is_ok());
    }

    #[test]
    fn inconsistent_faces_are_rejected() {
        // edge e from v to w and a 2-simplex (e, e, e): d_0 d_2 != d_1 d_0
        let e = Nondegenerate { label: "e".into(), faces: vec![nd(0, 1), nd(0, 0)] };
        let bad = Nondegenerate { label: "b".into(), faces: vec![nd(1, 0); 3] };
        let x = SSet::new("bad", vec![vec![vertex("v"), vertex("w")], vec![e], vec![bad]], Extension::Finite);
        assert!(x.validate().is_err());
    }

    #[test]
    fn wedge_inclusions_are_simplicial() {
        let parts = [s1(3), rp2(3)];
        for k in 0..2 {
            wedge_inclusion(&parts, k, 3).unwrap();
        }
    }
}
