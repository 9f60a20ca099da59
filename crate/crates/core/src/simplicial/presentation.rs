//! Homotopy monoids, fundamental group presentations and word problems.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use super::{SSet, SimplexId, SimplexRef};
use crate::error::{Error, Result};
use crate::verdict::Status;

pub type Word = Vec<u32>;

fn shortlex_gt(a: &[u32], b: &[u32]) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a > b)
}

fn find_sub(w: &[u32], pat: &[u32], from: usize) -> Option<usize> {
    if pat.is_empty() || pat.len() > w.len() {
        return None;
    }
    (from..=w.len() - pat.len()).find(|&i| &w[i..i + pat.len()] == pat)
}

/// Confluent length-reducing rewriting system under shortlex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    pub rules: Vec<(Word, Word)>,
}

impl RewriteSystem {
    pub fn reduce(&self, w: &[u32]) -> Word {
        let mut cur = w.to_vec();
        'outer: loop {
            for (l, r) in &self.rules {
                if let Some(i) = find_sub(&cur, l, 0) {
                    let mut next = cur[..i].to_vec();
                    next.extend_from_slice(r);
                    next.extend_from_slice(&cur[i + l.len()..]);
                    cur = next;
                    continue 'outer;
                }
            }
            return cur;
        }
    }

    /// Knuth–Bendix completion; `None` when `max_rules` is exceeded.
    pub fn complete(relations: &[(Word, Word)], max_rules: usize) -> Option<RewriteSystem> {
        let mut sys = RewriteSystem { rules: Vec::new() };
        let mut pending: VecDeque<(Word, Word)> = relations.iter().cloned().collect();
        loop {
            while let Some((a, b)) = pending.pop_front() {
                let (a, b) = (sys.reduce(&a), sys.reduce(&b));
                if a == b {
                    continue;
                }
                let rule = if shortlex_gt(&a, &b) { (a, b) } else { (b, a) };
                sys.rules.push(rule);
                if sys.rules.len() > max_rules {
                    return None;
                }
            }
            // critical pairs
            let mut found = Vec::new();
            let n = sys.rules.len();
            for x in 0..n {
                for y in 0..n {
                    let (l1, r1) = &sys.rules[x];
                    let (l2, r2) = &sys.rules[y];
                    for k in 1..l1.len().min(l2.len()) {
                        if l1[l1.len() - k..] == l2[..k] {
                            let mut p = r1.clone();
                            p.extend_from_slice(&l2[k..]);
                            let mut q = l1[..l1.len() - k].to_vec();
                            q.extend_from_slice(r2);
                            found.push((p, q));
                        }
                    }
                    if x != y {
                        if let Some(i) = find_sub(l1, l2, 0) {
                            let mut q = l1[..i].to_vec();
                            q.extend_from_slice(r2);
                            q.extend_from_slice(&l1[i + l2.len()..]);
                            found.push((r1.clone(), q));
                        }
                    }
                }
            }
            for (p, q) in found {
                if sys.reduce(&p) != sys.reduce(&q) {
                    pending.push_back((p, q));
                }
            }
            if pending.is_empty() {
                break;
            }
        }
        sys.interreduce();
        Some(sys)
    }

    fn interreduce(&mut self) {
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..self.rules.len() {
                let others =
                    RewriteSystem { rules: self.rules.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, r)| r.clone()).collect() };
                let (l, r) = self.rules[i].clone();
                let lr = others.reduce(&l);
                if lr != l {
                    self.rules.remove(i);
                    let rr = others.reduce(&r);
                    if lr != rr {
                        let rule = if shortlex_gt(&lr, &rr) { (lr, rr) } else { (rr, lr) };
                        self.rules.push(rule);
                    }
                    changed = true;
                    break;
                }
                let rr = others.reduce(&r);
                if rr != r {
                    self.rules[i].1 = rr;
                    changed = true;
                    break;
                }
            }
        }
        self.rules.sort();
    }

    /// Irreducible words of each length `0..=max_len` over `gens` letters.
    pub fn normal_form_counts(&self, gens: usize, max_len: usize) -> Vec<usize> {
        let mut counts = vec![1usize];
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for g in 0..gens as u32 {
                    let mut v = w.clone();
                    v.push(g);
                    if self.rules.iter().all(|(l, _)| !v.ends_with(l)) {
                        next.push(v);
                    }
                }
            }
            counts.push(next.len());
            layer = next;
        }
        counts
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleTag {
    Free,
    Integers,
    Cyclic(usize),
    Finite(usize),
    Rewriting,
}

/// Normal forms certified by a complete rewriting system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidOracle {
    pub tag: OracleTag,
    pub system: RewriteSystem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<(Word, Word)>,
    pub oracle: Option<MonoidOracle>,
}

impl MonoidPresentation {
    pub fn new(generators: Vec<String>, relations: Vec<(Word, Word)>) -> MonoidPresentation {
        let mut p = MonoidPresentation { generators, relations, oracle: None };
        p.oracle = p.certify_oracle(64);
        p
    }

    /// Runs completion and classifies the resulting normal forms.
    pub fn certify_oracle(&self, max_rules: usize) -> Option<MonoidOracle> {
        let system = RewriteSystem::complete(&self.relations, max_rules)?;
        let k = self.generators.len();
        let tag = if system.rules.is_empty() {
            OracleTag::Free
        } else {
            let counts = system.normal_form_counts(k, 8);
            let size: usize = counts.iter().sum();
            if counts.last() == Some(&0) {
                if self.is_cyclic_group(&system, size) {
                    OracleTag::Cyclic(size)
                } else {
                    OracleTag::Finite(size)
                }
            } else if counts[1..].iter().all(|c| *c == 2) && self.is_integers(&system) {
                OracleTag::Integers
            } else {
                OracleTag::Rewriting
            }
        };
        Some(MonoidOracle { tag, system })
    }

    fn is_cyclic_group(&self, sys: &RewriteSystem, size: usize) -> bool {
        (0..self.generators.len() as u32).any(|g| {
            let mut seen = BTreeSet::new();
            let mut w: Word = Vec::new();
            for _ in 0..size {
                seen.insert(sys.reduce(&w));
                w.push(g);
            }
            seen.len() == size && sys.reduce(&w).is_empty()
        })
    }

    fn is_integers(&self, sys: &RewriteSystem) -> bool {
        // some generator a and inverse b with every generator equal to a, b or 1
        let k = self.generators.len() as u32;
        (0..k).any(|a| {
            (0..k).any(|b| {
                a != b
                    && sys.reduce(&[a, b]).is_empty()
                    && sys.reduce(&[b, a]).is_empty()
                    && (0..k).all(|g| {
                        let r = sys.reduce(&[g]);
                        r.is_empty() || r == [a] || r == [b]
                    })
                    && (1..8).all(|n| sys.reduce(&vec![a; n]) == vec![a; n])
            })
        })
    }

    pub fn render(&self, w: &[u32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|g| self.generators[*g as usize].clone()).collect::<Vec<_>>().join("·")
    }
}

fn edge_word(r: &SimplexRef) -> Word {
    if r.is_degenerate() {
        Vec::new()
    } else {
        vec![r.base.index as u32]
    }
}

/// Generators are the nondegenerate edges; each nondegenerate 2-simplex
/// `α` contributes `d_2 α · d_0 α = d_1 α` with degenerate edges read as 1.
pub fn homotopy_monoid(x: &SSet) -> Result<MonoidPresentation> {
    if !x.is_reduced() {
        return Err(Error::NotReduced);
    }
    let gens = (0..x.count(1)).map(|i| x.label(SimplexId::new(1, i)).to_string()).collect();
    let mut rels = Vec::new();
    for s in x.simplices.get(2).map(|v| v.as_slice()).unwrap_or(&[]) {
        let mut lhs = edge_word(&s.faces[2]);
        lhs.extend(edge_word(&s.faces[0]));
        let rhs = edge_word(&s.faces[1]);
        if lhs != rhs {
            rels.push((lhs, rhs));
        }
    }
    Ok(MonoidPresentation::new(gens, rels))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordVerdict {
    pub status: Status,
    pub steps: Option<usize>,
    pub evidence: String,
}

/// Breadth-first search for a chain of at most `budget` relation
/// applications joining `lhs` and `rhs`, then the oracle if present.
pub fn solve_word(p: &MonoidPresentation, lhs: &[u32], rhs: &[u32], budget: usize) -> WordVerdict {
    let rels: Vec<(Word, Word)> = p.relations.iter().flat_map(|(l, r)| [(l.clone(), r.clone()), (r.clone(), l.clone())]).collect();
    let cap = lhs.len().max(rhs.len()) + 2 * rels.iter().map(|(l, r)| l.len().max(r.len())).max().unwrap_or(0);
    let neighbours = |w: &Word| -> Vec<Word> {
        let mut out = Vec::new();
        for (l, r) in &rels {
            if l.is_empty() {
                for i in 0..=w.len() {
                    let mut v = w[..i].to_vec();
                    v.extend_from_slice(r);
                    v.extend_from_slice(&w[i..]);
                    out.push(v);
                }
                continue;
            }
            let mut from = 0;
            while let Some(i) = find_sub(w, l, from) {
                let mut v = w[..i].to_vec();
                v.extend_from_slice(r);
                v.extend_from_slice(&w[i + l.len()..]);
                out.push(v);
                from = i + 1;
            }
        }
        out.retain(|v| v.len() <= cap);
        out
    };
    if let Some(steps) = bfs_join(lhs.to_vec(), rhs.to_vec(), budget, neighbours) {
        return WordVerdict { status: Status::Verified, steps: Some(steps), evidence: format!("rewrite path of {steps} steps") };
    }
    match &p.oracle {
        Some(o) => {
            let (a, b) = (o.system.reduce(lhs), o.system.reduce(rhs));
            if a == b {
                WordVerdict { status: Status::Verified, steps: None, evidence: format!("common normal form {}", p.render(&a)) }
            } else {
                WordVerdict {
                    status: Status::Refuted,
                    steps: None,
                    evidence: format!("normal forms {} and {} differ", p.render(&a), p.render(&b)),
                }
            }
        }
        None => WordVerdict { status: Status::Inconclusive, steps: None, evidence: format!("no rewrite path within {budget} steps") },
    }
}

/// Meets two breadth-first searches; returns the total path length.
fn bfs_join<W, F>(a: W, b: W, budget: usize, next: F) -> Option<usize>
where
    W: Clone + Eq + std::hash::Hash,
    F: Fn(&W) -> Vec<W>,
{
    if a == b {
        return Some(0);
    }
    let mut seen_a: BTreeMap<usize, HashSet<W>> = BTreeMap::new();
    let mut all_a: HashSet<W> = HashSet::from([a.clone()]);
    let mut all_b: HashSet<W> = HashSet::from([b.clone()]);
    let mut fa = vec![a];
    let mut fb = vec![b];
    let (mut da, mut db) = (0usize, 0usize);
    seen_a.insert(0, all_a.clone());
    while da + db < budget {
        let expand_a = fa.len() <= fb.len();
        let (front, mine, other) = if expand_a { (&mut fa, &mut all_a, &all_b) } else { (&mut fb, &mut all_b, &all_a) };
        let mut nf = Vec::new();
        for w in front.iter() {
            for v in next(w) {
                if other.contains(&v) {
                    return Some(da + db + 1);
                }
                if mine.insert(v.clone()) {
                    nf.push(v);
                }
            }
        }
        if nf.is_empty() {
            return None;
        }
        *front = nf;
        if expand_a {
            da += 1;
        } else {
            db += 1;
        }
    }
    None
}

/// Group words: `k + 1` is the generator `k`, `-(k + 1)` its inverse.
pub type GWord = Vec<i32>;

pub fn free_reduce(w: &[i32]) -> GWord {
    let mut out: GWord = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> GWord {
    let mut v = free_reduce(w);
    while v.len() >= 2 && v[0] == -v[v.len() - 1] {
        v.pop();
        v.remove(0);
    }
    v
}

pub fn invert(w: &[i32]) -> GWord {
    w.iter().rev().map(|x| -x).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generators: Vec<String>,
    pub relators: Vec<GWord>,
}

impl GroupPresentation {
    pub fn render(&self, w: &[i32]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|x| {
                let g = &self.generators[(x.unsigned_abs() - 1) as usize];
                if *x > 0 {
                    g.clone()
                } else {
                    format!("{g}⁻¹")
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }

    /// Tietze elimination of generators occurring once in some relator.
    /// Returns the simplified presentation and, for each original generator,
    /// its expression in the remaining ones.
    pub fn simplify(&self) -> (GroupPresentation, Vec<GWord>) {
        let k = self.generators.len();
        let mut subst: Vec<GWord> = (1..=k as i32).map(|g| vec![g]).collect();
        let mut alive: Vec<bool> = vec![true; k];
        let mut rels: Vec<GWord> = self.relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty()).collect();
        loop {
            let mut pick = None;
            'search: for (ri, r) in rels.iter().enumerate() {
                for g in 1..=k as i32 {
                    if !alive[(g - 1) as usize] {
                        continue;
                    }
                    let occ: Vec<usize> = r.iter().enumerate().filter(|(_, x)| x.abs() == g).map(|(i, _)| i).collect();
                    if occ.len() == 1 {
                        pick = Some((ri, g, occ[0]));
                        break 'search;
                    }
                }
            }
            let Some((ri, g, pos)) = pick else { break };
            let r = rels.remove(ri);
            let (a, b) = (&r[..pos], &r[pos + 1..]);
            let mut val = invert(a);
            val.extend(invert(b));
            let val = if r[pos] > 0 { free_reduce(&val) } else { invert(&val) };
            let apply = |w: &[i32]| -> GWord {
                let mut out = Vec::new();
                for &x in w {
                    if x == g {
                        out.extend_from_slice(&val);
                    } else if x == -g {
                        out.extend(invert(&val));
                    } else {
                        out.push(x);
                    }
                }
                free_reduce(&out)
            };
            rels = rels.iter().map(|w| cyclic_reduce(&apply(w))).filter(|w| !w.is_empty()).collect();
            rels.sort();
            rels.dedup();
            subst = subst.iter().map(|w| apply(w)).collect();
            alive[(g - 1) as usize] = false;
        }
        // renumber survivors
        let mut renum = vec![0i32; k + 1];
        let mut gens = Vec::new();
        for g in 0..k {
            if alive[g] {
                gens.push(self.generators[g].clone());
                renum[g + 1] = gens.len() as i32;
            }
        }
        let re = |w: &[i32]| -> GWord { w.iter().map(|x| x.signum() * renum[x.unsigned_abs() as usize]).collect() };
        let simplified = GroupPresentation { generators: gens, relators: rels.iter().map(|w| re(w)).collect() };
        (simplified, subst.iter().map(|w| re(w)).collect())
    }
}

/// Fundamental group presentation with its Tietze simplification.
#[derive(Clone, Debug)]
pub struct Pi1 {
    pub presentation: GroupPresentation,
    pub simplified: GroupPresentation,
    pub substitution: Vec<GWord>,
}

impl Pi1 {
    /// Free of rank `r` when the simplified presentation has no relators.
    pub fn free_rank(&self) -> Option<usize> {
        self.simplified.relators.is_empty().then_some(self.simplified.generators.len())
    }

    /// Image of an original word in the simplified generators.
    pub fn to_simplified(&self, w: &[i32]) -> GWord {
        let mut out = Vec::new();
        for &x in w {
            let s = &self.substitution[(x.unsigned_abs() - 1) as usize];
            if x > 0 {
                out.extend_from_slice(s);
            } else {
                out.extend(invert(s));
            }
        }
        free_reduce(&out)
    }
}

fn gedge(r: &SimplexRef) -> GWord {
    if r.is_degenerate() {
        Vec::new()
    } else {
        vec![r.base.index as i32 + 1]
    }
}

/// Relator `d_2 α · d_0 α · (d_1 α)⁻¹` for each nondegenerate 2-simplex.
pub fn pi1_presentation(x: &SSet) -> Result<Pi1> {
    if !x.is_reduced() {
        return Err(Error::NotReduced);
    }
    let generators = (0..x.count(1)).map(|i| x.label(SimplexId::new(1, i)).to_string()).collect();
    let mut relators = Vec::new();
    for s in x.simplices.get(2).map(|v| v.as_slice()).unwrap_or(&[]) {
        let mut r = gedge(&s.faces[2]);
        r.extend(gedge(&s.faces[0]));
        r.extend(invert(&gedge(&s.faces[1])));
        let r = free_reduce(&r);
        if !r.is_empty() {
            relators.push(r);
        }
    }
    let presentation = GroupPresentation { generators, relators };
    let (simplified, substitution) = presentation.simplify();
    Ok(Pi1 { presentation, simplified, substitution })
}

/// Word problem in a group presentation by relator insertion and deletion
/// with free reduction, then a finite coset table if one can be built.
pub fn solve_group_word(p: &GroupPresentation, lhs: &[i32], rhs: &[i32], budget: usize, coset_limit: usize) -> WordVerdict {
    let (l, r) = (free_reduce(lhs), free_reduce(rhs));
    let mut rels: Vec<GWord> = Vec::new();
    for rel in &p.relators {
        for w in [rel.clone(), invert(rel)] {
            for k in 0..w.len() {
                let mut c = w[k..].to_vec();
                c.extend_from_slice(&w[..k]);
                rels.push(c);
            }
        }
    }
    rels.sort();
    rels.dedup();
    let cap = l.len().max(r.len()) + 2 * rels.iter().map(Vec::len).max().unwrap_or(0);
    let next = |w: &GWord| -> Vec<GWord> {
        let mut out = Vec::new();
        for rel in &rels {
            for i in 0..=w.len() {
                let mut v = w[..i].to_vec();
                v.extend_from_slice(rel);
                v.extend_from_slice(&w[i..]);
                let v = free_reduce(&v);
                if v.len() <= cap {
                    out.push(v);
                }
            }
        }
        out
    };
    if let Some(steps) = bfs_join(l.clone(), r.clone(), budget, next) {
        return WordVerdict { status: Status::Verified, steps: Some(steps), evidence: format!("relator path of {steps} steps") };
    }
    if let Some(g) = FiniteGroup::enumerate(p, coset_limit) {
        let (a, b) = (g.eval(&l), g.eval(&r));
        return if a == b {
            WordVerdict { status: Status::Verified, steps: None, evidence: format!("equal in the group of order {}", g.order()) }
        } else {
            WordVerdict { status: Status::Refuted, steps: None, evidence: format!("distinct in the group of order {}", g.order()) }
        };
    }
    WordVerdict { status: Status::Inconclusive, steps: None, evidence: format!("no relator path within {budget} steps") }
}

const UNDEF: usize = usize::MAX;

struct CosetEnumeration {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    limit: usize,
}

impl CosetEnumeration {
    fn col(x: i32) -> usize {
        let g = (x.unsigned_abs() - 1) as usize;
        if x > 0 {
            2 * g
        } else {
            2 * g + 1
        }
    }

    fn inv(c: usize) -> usize {
        c ^ 1
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> bool {
        if self.table.len() >= self.limit {
            return false;
        }
        let n = self.table.len();
        self.table.push(vec![UNDEF; self.cols]);
        self.parent.push(n);
        self.table[c][x] = n;
        self.table[n][Self::inv(x)] = c;
        true
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = c;
        while self.parent[y] != r {
            let n = self.parent[y];
            self.parent[y] = r;
            y = n;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (p, q) = (self.rep(a), self.rep(b));
        if p != q {
            let (lo, hi) = if p < q { (p, q) } else { (q, p) };
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == UNDEF {
                    continue;
                }
                self.table[d][Self::inv(x)] = UNDEF;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != UNDEF {
                    let t = self.table[mu][x];
                    self.merge(nu, t, &mut queue);
                } else if self.table[nu][Self::inv(x)] != UNDEF {
                    let t = self.table[nu][Self::inv(x)];
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][Self::inv(x)] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, alpha: usize, w: &[usize]) -> bool {
        let (mut f, mut b) = (alpha, alpha);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j && self.table[f][w[i]] != UNDEF {
                f = self.table[f][w[i]];
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return true;
            }
            while j > i && self.table[b][Self::inv(w[j - 1])] != UNDEF {
                b = self.table[b][Self::inv(w[j - 1])];
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return true;
            }
            if j == i + 1 {
                self.table[f][w[i]] = b;
                self.table[b][Self::inv(w[i])] = f;
                return true;
            }
            if !self.define(f, w[i]) {
                return false;
            }
        }
    }
}

/// A finite group as the regular action on cosets of the trivial subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    /// `right[c][2g]` is `c·g`, `right[c][2g+1]` is `c·g⁻¹`.
    pub right: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Todd–Coxeter enumeration; `None` when more than `limit` cosets are needed.
    pub fn enumerate(p: &GroupPresentation, limit: usize) -> Option<FiniteGroup> {
        let cols = 2 * p.generators.len();
        let mut e = CosetEnumeration { cols, table: vec![vec![UNDEF; cols]], parent: vec![0], limit };
        let rels: Vec<Vec<usize>> = p.relators.iter().map(|r| r.iter().map(|x| CosetEnumeration::col(*x)).collect()).collect();
        let mut alpha = 0;
        while alpha < e.table.len() {
            if e.live(alpha) {
                for r in &rels {
                    if !e.scan_and_fill(alpha, r) {
                        return None;
                    }
                    if !e.live(alpha) {
                        break;
                    }
                }
                if e.live(alpha) {
                    for x in 0..cols {
                        if e.table[alpha][x] == UNDEF && !e.define(alpha, x) {
                            return None;
                        }
                    }
                }
            }
            alpha += 1;
        }
        let live: Vec<usize> = (0..e.table.len()).filter(|c| e.live(*c)).collect();
        let mut index = vec![UNDEF; e.table.len()];
        for (k, c) in live.iter().enumerate() {
            index[*c] = k;
        }
        let mut right = Vec::with_capacity(live.len());
        for c in &live {
            let row = e.table[*c].clone();
            right.push(row.into_iter().map(|d| index[e.rep(d)]).collect());
        }
        Some(FiniteGroup { right })
    }

    pub fn order(&self) -> usize {
        self.right.len()
    }

    pub fn act(&self, c: usize, x: i32) -> usize {
        self.right[c][CosetEnumeration::col(x)]
    }

    /// Element represented by a word.
    pub fn eval(&self, w: &[i32]) -> usize {
        w.iter().fold(0, |c, x| self.act(c, *x))
    }

    /// Words reaching each element, by breadth-first search.
    pub fn words(&self) -> Vec<GWord> {
        let mut out: Vec<Option<GWord>> = vec![None; self.order()];
        out[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        let gens = self.right.first().map_or(0, |r| r.len() / 2) as i32;
        while let Some(c) = queue.pop_front() {
            for g in 1..=gens {
                let d = self.act(c, g);
                if out[d].is_none() {
                    let mut w = out[c].clone().expect("visited");
                    w.push(g);
                    out[d] = Some(w);
                    queue.push_back(d);
                }
            }
        }
        out.into_iter().map(|w| w.unwrap_or_default()).collect()
    }

    pub fn mul(&self, a: usize, b: usize, words: &[GWord]) -> usize {
        words[b].iter().fold(a, |c, x| self.act(c, *x))
    }

    pub fn inverse(&self, a: usize, words: &[GWord]) -> usize {
        invert(&words[a]).iter().fold(0, |c, x| self.act(c, *x))
    }
}

#[cfg(test)]
mod tests {
    use super::super::builtins::{rp2, s1, s1_localized, sphere2_min, wedge};
    use super::*;

    fn gp(k: usize, rels: Vec<GWord>) -> GroupPresentation {
        GroupPresentation { generators: (0..k).map(|i| format!("g{i}")).collect(), relators: rels }
    }

    #[test]
    fn homotopy_monoid_of_fixtures() {
        assert_eq!(homotopy_monoid(&s1(2)).unwrap().relations, vec![]);
        let r = homotopy_monoid(&rp2(2)).unwrap();
        assert_eq!(r.relations, vec![(vec![0, 0], vec![])]);
        assert_eq!(r.oracle.as_ref().unwrap().tag, OracleTag::Cyclic(2));
        let l = homotopy_monoid(&s1_localized(3)).unwrap();
        assert_eq!(l.oracle.as_ref().unwrap().tag, OracleTag::Integers);
        assert_eq!(homotopy_monoid(&s1(2)).unwrap().oracle.unwrap().tag, OracleTag::Free);
    }

    #[test]
    fn word_problems() {
        let r = homotopy_monoid(&rp2(2)).unwrap();
        let v = solve_word(&r, &[0, 0, 0], &[0], 3);
        assert_eq!(v.status, Status::Verified);
        assert_eq!(v.steps, Some(1));
        let l = homotopy_monoid(&s1_localized(3)).unwrap();
        let u = l.generators.iter().position(|g| g == "u").unwrap() as u32;
        let w = 1 - u;
        assert_eq!(solve_word(&l, &[u, w], &[], 3).status, Status::Verified);
        assert_eq!(solve_word(&l, &[w, u], &[], 3).status, Status::Verified);
        assert_eq!(solve_word(&l, &[u, u], &[], 3).status, Status::Refuted);
        let free = MonoidPresentation { generators: vec!["a".into()], relations: vec![], oracle: None };
        assert_eq!(solve_word(&free, &[0], &[], 3).status, Status::Inconclusive);
    }

    #[test]
    fn tietze_eliminates_inverse_edge() {
        let p = pi1_presentation(&s1_localized(3)).unwrap();
        assert_eq!(p.free_rank(), Some(1));
        let q = pi1_presentation(&rp2(2)).unwrap();
        assert_eq!(q.free_rank(), None);
        assert_eq!(pi1_presentation(&sphere2_min(2)).unwrap().free_rank(), Some(0));
        assert_eq!(pi1_presentation(&wedge(&[s1(2), s1(2)], 2).unwrap()).unwrap().free_rank(), Some(2));
    }

    #[test]
    fn todd_coxeter_orders() {
        assert_eq!(FiniteGroup::enumerate(&gp(1, vec![vec![1, 1]]), 100).unwrap().order(), 2);
        assert_eq!(FiniteGroup::enumerate(&gp(0, vec![]), 100).unwrap().order(), 1);
        let s3 = gp(2, vec![vec![1, 1], vec![2, 2, 2], vec![1, 2, 1, 2]]);
        assert_eq!(FiniteGroup::enumerate(&s3, 1000).unwrap().order(), 6);
        let q8 = gp(2, vec![vec![1, 1, 1, 1], vec![1, 1, -2, -2], vec![-2, 1, 2, 1]]);
        assert_eq!(FiniteGroup::enumerate(&q8, 1000).unwrap().order(), 8);
        assert!(FiniteGroup::enumerate(&gp(1, vec![]), 50).is_none());
    }

    #[test]
    fn group_words() {
        let p = pi1_presentation(&s1_localized(3)).unwrap().presentation;
        let u = p.generators.iter().position(|g| g == "u").unwrap() as i32 + 1;
        let v = 3 - u;
        assert_eq!(solve_group_word(&p, &[-u], &[v], 3, 50).status, Status::Verified);
        let c = gp(1, vec![vec![1, 1, 1]]);
        assert_eq!(solve_group_word(&c, &[1], &[-1], 0, 50).status, Status::Refuted);
    }

    #[test]
    fn completion_gives_normal_forms() {
        let sys = RewriteSystem::complete(&[(vec![0, 1], vec![]), (vec![1, 0], vec![])], 20).unwrap();
        assert_eq!(sys.reduce(&[0, 0, 1, 1, 0]), vec![0]);
        assert_eq!(sys.normal_form_counts(2, 3), vec![1, 2, 2, 2]);
    }
}
