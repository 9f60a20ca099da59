//! Free dg algebras, the cobar construction and finite slices of it.

use std::collections::HashMap;

use super::poly::{Monomial, NcPolynomial};
use crate::chains::{normalized_chains, DgCoalgebra};
use crate::coalgebra::chains_coalgebra;
use crate::error::{Error, Result};
use crate::field::{sign, Field, Scalar};
use crate::homology::{homology, BettiTable, ChainComplexSlice};
use crate::simplicial::SSet;
use crate::sparse::{normalize_vec, SparseMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: usize,
}

/// Tensor algebra on graded generators with a derivation `D` of degree -1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeDgAlgebra {
    pub name: String,
    pub field: Field,
    pub generators: Vec<Generator>,
    pub differential: Vec<NcPolynomial>,
    /// Value of the augmentation on each generator; zero off degree 0.
    pub augmentation: Vec<Scalar>,
    /// Every generator of degree at most this is present. `None` means the
    /// generator list is complete.
    pub complete_through: Option<usize>,
}

impl FreeDgAlgebra {
    pub fn generator(&self, g: usize) -> NcPolynomial {
        NcPolynomial::generator(self.field, g as u32, self.generators[g].degree)
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn degree0_generators(&self) -> Vec<usize> {
        (0..self.generators.len()).filter(|g| self.generators[*g].degree == 0).collect()
    }

    pub fn generators_complete_in(&self, degree: usize) -> bool {
        self.complete_through.is_none_or(|t| degree <= t)
    }

    /// `D(g_1 ⋯ g_k) = Σ_i (-1)^{|g_1|+…+|g_{i-1}|} g_1 ⋯ D(g_i) ⋯ g_k`.
    pub fn d_monomial(&self, m: &Monomial) -> NcPolynomial {
        let mut out = NcPolynomial::zero(self.field);
        let mut before = 0usize;
        for (i, g) in m.word.iter().enumerate() {
            let dg = &self.differential[*g as usize];
            if !dg.is_zero() {
                let s = sign(self.field, before);
                for (t, c) in dg.terms() {
                    let mut word = Vec::with_capacity(m.word.len() + t.word.len());
                    word.extend_from_slice(&m.word[..i]);
                    word.extend_from_slice(&t.word);
                    word.extend_from_slice(&m.word[i + 1..]);
                    out.add_term(Monomial { degree: m.degree - 1, word }, c * &s);
                }
            }
            before += self.generators[*g as usize].degree;
        }
        out
    }

    pub fn d(&self, p: &NcPolynomial) -> NcPolynomial {
        p.map_monomials(|m| self.d_monomial(m))
    }

    pub fn augment(&self, p: &NcPolynomial) -> Scalar {
        let mut s = self.field.zero();
        for (m, c) in p.terms() {
            if m.degree == 0 {
                let mut v = c.clone();
                for g in &m.word {
                    v = &v * &self.augmentation[*g as usize];
                }
                s += &v;
            }
        }
        s
    }

    /// Degrees of `D`, `D² = 0` and `ε ∘ D = 0` on every generator.
    pub fn validate(&self) -> Result<()> {
        let n = self.generators.len();
        if self.differential.len() != n || self.augmentation.len() != n {
            return Err(Error::DimensionMismatch(format!("{}: generator data lengths differ", self.name)));
        }
        for g in 0..n {
            let deg = self.generators[g].degree;
            let dg = &self.differential[g];
            if !dg.is_zero() && (deg == 0 || dg.degree() != Some(deg - 1)) {
                return Err(Error::InternalConsistency(format!(
                    "D({}) is not homogeneous of degree {}",
                    self.generators[g].label,
                    deg as isize - 1
                )));
            }
            if deg > 0 && !self.augmentation[g].is_zero() {
                return Err(Error::InternalConsistency(format!("augmentation is nonzero on {} of degree {deg}", self.generators[g].label)));
            }
            if !self.d(dg).is_zero() {
                return Err(Error::InternalConsistency(format!("D² is nonzero on {}", self.generators[g].label)));
            }
            if deg == 1 && !self.augment(dg).is_zero() {
                return Err(Error::InternalConsistency(format!("augmentation does not vanish on D({})", self.generators[g].label)));
            }
        }
        Ok(())
    }
}

/// Offsets of the generators coming from each degree of `n`.
pub fn cobar_offsets(n: &DgCoalgebra) -> Vec<usize> {
    let mut off = vec![0; n.truncation() + 2];
    for d in 1..=n.truncation() {
        off[d + 1] = off[d] + n.dim(d);
    }
    off
}

/// `Ω(N)`: generators `s⁻¹x` for the reduced basis of `N` and
/// `D(s⁻¹x) = -s⁻¹∂̄x + Σ (-1)^{|x'|} s⁻¹x' · s⁻¹x''` over `Δ̄x = Σ x' ⊗ x''`.
pub fn cobar(n: &DgCoalgebra) -> Result<FreeDgAlgebra> {
    if n.coaugmentation.is_none() {
        return Err(Error::NotConnected(format!("{} has no coaugmentation", n.name)));
    }
    if n.dim(0) != 1 {
        return Err(Error::NotConnected(format!("{} has {} reduced classes in degree 0", n.name, n.dim(0) - 1)));
    }
    let field = n.field;
    let top = n.truncation();
    let off = cobar_offsets(n);
    let gen = |c: (usize, usize)| (off[c.0] + c.1) as u32;
    let mut generators = Vec::new();
    let mut differential = Vec::new();
    for d in 1..=top {
        for i in 0..n.dim(d) {
            generators.push(Generator { label: n.label((d, i)).to_string(), degree: d - 1 });
            let mut p = NcPolynomial::zero(field);
            if d >= 2 {
                for (r, c) in n.differential[d].column(i) {
                    p.add_term(Monomial { degree: d - 2, word: vec![gen((d - 1, *r))] }, -c);
                }
            }
            for ((a, b), c) in n.reduced_coproduct((d, i)) {
                let s = sign(field, a.0);
                p.add_term(Monomial { degree: d - 2, word: vec![gen(a), gen(b)] }, &c * &s);
            }
            differential.push(p);
        }
    }
    let k = generators.len();
    let a = FreeDgAlgebra {
        name: format!("Ω({})", n.name),
        field,
        generators,
        differential,
        augmentation: vec![field.zero(); k],
        complete_through: Some(top.saturating_sub(1)),
    };
    a.validate()?;
    Ok(a)
}

/// `Λ(X; F) = Ω(N_*(F[X]))` through `level`.
pub fn lambda(x: &SSet, field: Field, level: usize) -> Result<FreeDgAlgebra> {
    cobar(&normalized_chains(&chains_coalgebra(x, field, level)?)?)
}

/// Degree and word-length bounds for a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationSpec {
    pub max_degree: usize,
    pub max_length: Option<usize>,
}

impl TruncationSpec {
    pub fn degree(max_degree: usize) -> TruncationSpec {
        TruncationSpec { max_degree, max_length: None }
    }

    pub fn bounded(max_degree: usize, max_length: usize) -> TruncationSpec {
        TruncationSpec { max_degree, max_length: Some(max_length) }
    }

    /// Degree `d` is complete when all generators of degree ≤ `d` are known
    /// and no word of degree `d` is longer than the length bound.
    pub fn completeness(&self, a: &FreeDgAlgebra) -> Result<Vec<bool>> {
        let has_zero = a.generators.iter().any(|g| g.degree == 0);
        let min_deg = a.generators.iter().map(|g| g.degree).min();
        if has_zero && self.max_length.is_none() {
            return Err(Error::UnboundedTruncation(format!("{} has degree-0 generators and no length bound", a.name)));
        }
        Ok((0..=self.max_degree)
            .map(|d| {
                let gens_ok = a.generators_complete_in(d);
                let len_ok = match (self.max_length, min_deg) {
                    (None, _) | (_, None) => true,
                    (Some(_), Some(0)) => false,
                    (Some(l), Some(m)) => d / m <= l,
                };
                gens_ok && len_ok
            })
            .collect())
    }
}

/// A slice of `Ω` with the word basis of each degree.
#[derive(Clone, Debug)]
pub struct CobarSlice {
    pub spec: TruncationSpec,
    pub bases: Vec<Vec<Monomial>>,
    pub complex: ChainComplexSlice,
    index: Vec<HashMap<Vec<u32>, usize>>,
}

impl CobarSlice {
    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m.degree)?.get(&m.word).copied()
    }

    pub fn is_complete(&self, degree: usize) -> bool {
        self.complex.is_complete(degree as isize)
    }

    /// Coordinates of `p` in the slice basis; terms outside the slice are dropped.
    pub fn coordinates(&self, p: &NcPolynomial) -> Vec<(usize, Vec<(usize, Scalar)>)> {
        let mut by_degree: std::collections::BTreeMap<usize, Vec<(usize, Scalar)>> = Default::default();
        for (m, c) in p.terms() {
            if let Some(i) = self.index_of(m) {
                by_degree.entry(m.degree).or_default().push((i, c.clone()));
            }
        }
        by_degree.into_iter().map(|(d, v)| (d, normalize_vec(v))).collect()
    }
}

pub(crate) fn enumerate_words(a: &FreeDgAlgebra, max_degree: usize, max_length: usize) -> Vec<Vec<Monomial>> {
    // table[d][l]: words of degree d and length l
    let mut table: Vec<Vec<Vec<Vec<u32>>>> = vec![vec![Vec::new(); max_length + 1]; max_degree + 1];
    table[0][0].push(Vec::new());
    for l in 1..=max_length {
        for d in 0..=max_degree {
            let mut out = Vec::new();
            for (g, gen) in a.generators.iter().enumerate() {
                if gen.degree > d {
                    continue;
                }
                for w in &table[d - gen.degree][l - 1] {
                    let mut v = Vec::with_capacity(l);
                    v.push(g as u32);
                    v.extend_from_slice(w);
                    out.push(v);
                }
            }
            table[d][l] = out;
        }
    }
    table
        .into_iter()
        .enumerate()
        .map(|(d, by_len)| {
            let mut v: Vec<Monomial> = by_len.into_iter().flatten().map(|word| Monomial { degree: d, word }).collect();
            v.sort();
            v
        })
        .collect()
}

/// Words of degree ≤ `max_degree` within the length bound, with the matrices of `D`.
pub fn cobar_complex_slice(a: &FreeDgAlgebra, t: TruncationSpec) -> Result<CobarSlice> {
    let complete = t.completeness(a)?;
    let max_length = match t.max_length {
        Some(l) => l,
        None => t.max_degree,
    };
    let bases = enumerate_words(a, t.max_degree, max_length);
    let index: Vec<HashMap<Vec<u32>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(i, m)| (m.word.clone(), i)).collect()).collect();
    let mut differentials = Vec::with_capacity(bases.len());
    for d in 0..=t.max_degree {
        if d == 0 {
            differentials.push(SparseMatrix::zero(a.field, 0, bases[0].len()));
            continue;
        }
        let cols = crate::exec::map(&bases[d], |m| -> Result<Vec<(usize, Scalar)>> {
            let dm = a.d_monomial(m);
            let mut col = Vec::with_capacity(dm.num_terms());
            for (w, c) in dm.terms() {
                match index[d - 1].get(&w.word) {
                    Some(i) => col.push((*i, c.clone())),
                    None if complete[d - 1] => {
                        return Err(Error::InternalConsistency(format!("D leaves the complete degree {} of the slice", d - 1)))
                    }
                    None => {}
                }
            }
            Ok(normalize_vec(col))
        });
        let cols = cols.into_iter().collect::<Result<Vec<_>>>()?;
        differentials.push(SparseMatrix::from_columns(a.field, bases[d - 1].len(), cols));
    }
    let dims = bases.iter().map(Vec::len).collect();
    let complex = ChainComplexSlice::new(a.field, 0, dims, differentials, complete)?;
    Ok(CobarSlice { spec: t, bases, complex, index })
}

/// Homology in degrees `0..=t.max_degree`, computed on the slice one degree higher.
pub fn cobar_homology(a: &FreeDgAlgebra, t: TruncationSpec) -> Result<BettiTable> {
    let wide = TruncationSpec { max_degree: t.max_degree + 1, ..t };
    Ok(homology(&cobar_complex_slice(a, wide)?.complex).truncated(t.max_degree))
}

/// An algebra map between free algebras given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeDgMap {
    pub name: String,
    pub images: Vec<NcPolynomial>,
}

impl FreeDgMap {
    pub fn identity(a: &FreeDgAlgebra) -> FreeDgMap {
        FreeDgMap { name: format!("id({})", a.name), images: (0..a.generators.len()).map(|g| a.generator(g)).collect() }
    }

    pub fn apply(&self, p: &NcPolynomial) -> NcPolynomial {
        p.substitute(&self.images)
    }

    /// Degrees, augmentation and `D ∘ F = F ∘ D` on generators.
    pub fn check(&self, src: &FreeDgAlgebra, dst: &FreeDgAlgebra) -> Result<()> {
        if self.images.len() != src.generators.len() {
            return Err(Error::InvalidMap(format!("{}: {} images for {} generators", self.name, self.images.len(), src.generators.len())));
        }
        for (g, img) in self.images.iter().enumerate() {
            let label = &src.generators[g].label;
            if !img.is_zero() && img.degree() != Some(src.generators[g].degree) {
                return Err(Error::InvalidMap(format!("{}: image of {label} has the wrong degree", self.name)));
            }
            if dst.augment(img) != src.augmentation[g] {
                return Err(Error::InvalidMap(format!("{}: augmentation not preserved on {label}", self.name)));
            }
            if dst.d(img) != self.apply(&src.differential[g]) {
                return Err(Error::InvalidMap(format!("{}: does not commute with D on {label}", self.name)));
            }
        }
        Ok(())
    }

    /// Matrices of the map between two slices, degree by degree.
    pub fn slice_map(&self, src: &CobarSlice, dst: &CobarSlice) -> Vec<SparseMatrix> {
        let top = src.bases.len().min(dst.bases.len());
        (0..top)
            .map(|d| {
                let cols = crate::exec::map(&src.bases[d], |m| {
                    let img = self.apply(&NcPolynomial::term(src.complex.field, m.clone(), src.complex.field.one()));
                    dst.coordinates(&img).into_iter().find(|(e, _)| *e == d).map(|(_, v)| v).unwrap_or_default()
                });
                SparseMatrix::from_columns(src.complex.field, dst.bases[d].len(), cols)
            })
            .collect()
    }
}

/// `Ω(g)` for a chain map `g` of coalgebras given degreewise between the
/// bases of `src` and `dst`.
pub fn cobar_map(g: &[SparseMatrix], src: &DgCoalgebra, dst: &DgCoalgebra) -> Result<FreeDgMap> {
    if dst.truncation() < src.truncation() || g.len() <= src.truncation() {
        return Err(Error::InsufficientTruncation { needed: src.truncation(), available: dst.truncation().min(g.len().saturating_sub(1)) });
    }
    let field = src.field;
    let off = cobar_offsets(dst);
    let mut images = Vec::new();
    for d in 1..=src.truncation() {
        for i in 0..src.dim(d) {
            let mut p = NcPolynomial::zero(field);
            for (r, c) in g[d].column(i) {
                p.add_term(Monomial { degree: d - 1, word: vec![(off[d] + r) as u32] }, c.clone());
            }
            images.push(p);
        }
    }
    Ok(FreeDgMap { name: format!("Ω({}→{})", src.name, dst.name), images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::{sset_chain_map, sset_chains};
    use crate::coalgebra::constant;
    use crate::simplicial::builtins::{iota_s1, point, rp2, s1, s1_localized, sphere2_min, wedge};

    #[test]
    fn unit_coalgebra_gives_the_ground_field() {
        let a = cobar(&normalized_chains(&constant(Field::Rationals, 4)).unwrap()).unwrap();
        assert!(a.generators.is_empty());
        let h = cobar_homology(&a, TruncationSpec::degree(3)).unwrap();
        assert_eq!(h.numbers(), vec![1, 0, 0, 0]);
        assert!(lambda(&point(3), Field::Rationals, 3).unwrap().generators.is_empty());
    }

    #[test]
    fn sphere_has_one_degree_one_generator() {
        for f in [Field::Rationals, Field::Prime(2)] {
            let a = lambda(&sphere2_min(8), f, 8).unwrap();
            assert_eq!(a.generators.len(), 1);
            assert_eq!(a.generators[0].degree, 1);
            assert!(a.differential[0].is_zero());
            let s = cobar_complex_slice(&a, TruncationSpec::degree(6)).unwrap();
            assert_eq!(s.complex.dims, vec![1; 7]);
            assert!(s.complex.complete.iter().all(|c| *c));
            let h = cobar_homology(&a, TruncationSpec::degree(6)).unwrap();
            assert_eq!(h.numbers(), vec![1; 7]);
            assert!(h.all_exact());
        }
    }

    #[test]
    fn circle_has_a_free_degree_zero_generator() {
        let a = lambda(&s1(3), Field::Rationals, 3).unwrap();
        assert_eq!(a.generators.len(), 1);
        assert_eq!(a.generators[0].degree, 0);
        assert!(a.differential[0].is_zero());
        let s = cobar_complex_slice(&a, TruncationSpec::bounded(0, 3)).unwrap();
        let words: Vec<Vec<u32>> = s.bases[0].iter().map(|m| m.word.clone()).collect();
        assert_eq!(words, vec![vec![], vec![0], vec![0, 0], vec![0, 0, 0]]);
        assert!(!s.is_complete(0));
        assert!(matches!(cobar_complex_slice(&a, TruncationSpec::degree(2)), Err(Error::UnboundedTruncation(_))));
    }

    #[test]
    fn rp2_relation_generator() {
        let a = lambda(&rp2(3), Field::Rationals, 3).unwrap();
        let names = a.names();
        let rel = a.degree0_generators().len();
        assert_eq!(rel, 1);
        let alpha = a.generators.iter().position(|g| g.degree == 1).unwrap();
        // D(α) = -2a - a·a, so (a+1)² = 1 in degree 0
        let t = a.generator(0);
        let want = t.scale(&Field::Rationals.from_i64(-2)).minus(&t.times(&t));
        assert_eq!(a.differential[alpha], want, "{}", a.differential[alpha].render(&names));
    }

    #[test]
    fn d_squares_to_zero_on_fixtures() {
        for f in [Field::Rationals, Field::Prime(2), Field::Prime(3)] {
            for x in [s1_localized(4), rp2(4), wedge(&[s1(4), sphere2_min(4)], 4).unwrap()] {
                let a = lambda(&x, f, 4).unwrap();
                a.validate().unwrap();
                let s = cobar_complex_slice(&a, TruncationSpec::bounded(3, 3)).unwrap();
                s.complex.check_square_zero().unwrap();
            }
        }
    }

    #[test]
    fn naive_sign_breaks_d_squared() {
        let n = sset_chains(&s1_localized(4), Field::Rationals, 4).unwrap();
        let mut a = cobar(&n).unwrap();
        let off = cobar_offsets(&n);
        for d in 2..=4 {
            for i in 0..n.dim(d) {
                let g = off[d] + i;
                let mut p = NcPolynomial::zero(a.field);
                for (r, c) in n.differential[d].column(i) {
                    p.add_term(Monomial { degree: d - 2, word: vec![(off[d - 1] + r) as u32] }, -c);
                }
                for ((x, y), c) in n.reduced_coproduct((d, i)) {
                    p.add_term(Monomial { degree: d - 2, word: vec![(off[x.0] + x.1) as u32, (off[y.0] + y.1) as u32] }, c);
                }
                a.differential[g] = p;
            }
        }
        assert!(a.validate().is_err());
    }

    #[test]
    fn cobar_is_functorial_on_iota() {
        let q = Field::Rationals;
        let f = iota_s1(4);
        let sn = sset_chains(&f.source, q, 4).unwrap();
        let tn = sset_chains(&f.target, q, 4).unwrap();
        let g = sset_chain_map(&f, q, 4).unwrap();
        let (sa, ta) = (cobar(&sn).unwrap(), cobar(&tn).unwrap());
        let m = cobar_map(&g, &sn, &tn).unwrap();
        m.check(&sa, &ta).unwrap();
        let mut bad = m.clone();
        bad.images[0] = ta.generator(ta.generators.iter().position(|g| g.degree == 1).unwrap());
        assert!(bad.check(&sa, &ta).is_err());
    }
}
