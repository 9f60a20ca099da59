//! Presentations of degree-0 algebras, bounded ideal membership and maps
//! between presentations.

use std::collections::{BTreeMap, HashMap};

use super::free::{cobar, FreeDgAlgebra};
use super::poly::{Monomial, NcPolynomial};
use crate::chains::{add_term, normalized_chains};
use crate::coalgebra::SimplicialCoalgebra;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::simplicial::presentation::{homotopy_monoid, RewriteSystem};
use crate::simplicial::SSet;
use crate::sparse::SparseMatrix;
use crate::verdict::{Status, Verdict};

/// Element of `A ⊗ A` for a degree-0 algebra, keyed by pairs of words.
pub type PolyTensor = BTreeMap<(Vec<u32>, Vec<u32>), Scalar>;

/// A decision procedure for the ideal of a presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraOracle {
    /// No relations.
    Free,
    /// One generator; the ideal is generated by this polynomial.
    Univariate(NcPolynomial),
    /// Ideal spanned by `l - r` for a complete rewriting system.
    Monoid(RewriteSystem),
}

impl AlgebraOracle {
    pub fn tag(&self) -> &'static str {
        match self {
            AlgebraOracle::Free => "free",
            AlgebraOracle::Univariate(_) => "univariate",
            AlgebraOracle::Monoid(_) => "monoid-rewriting",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub name: String,
    pub field: Field,
    pub generators: Vec<String>,
    pub ideal_generators: Vec<NcPolynomial>,
    pub coproduct: Option<Vec<PolyTensor>>,
    pub counit: Option<Vec<Scalar>>,
    pub oracle: Option<AlgebraOracle>,
}

fn word_poly(field: Field, w: &[u32]) -> NcPolynomial {
    NcPolynomial::term(field, Monomial { degree: 0, word: w.to_vec() }, field.one())
}

// univariate arithmetic on coefficient vectors indexed by power

fn to_coeffs(p: &NcPolynomial) -> Vec<Scalar> {
    let mut v = vec![p.field.zero(); p.max_length() + 1];
    for (m, c) in p.terms() {
        v[m.len()] = c.clone();
    }
    trim(v)
}

fn trim(mut v: Vec<Scalar>) -> Vec<Scalar> {
    while v.last().is_some_and(Scalar::is_zero) {
        v.pop();
    }
    v
}

fn from_coeffs(field: Field, v: &[Scalar]) -> NcPolynomial {
    NcPolynomial::from_words(field, v.iter().enumerate().map(|(k, c)| (vec![0; k], c.clone())))
}

fn poly_rem(mut a: Vec<Scalar>, b: &[Scalar]) -> Vec<Scalar> {
    let lead = b.last().expect("nonzero divisor").inv().expect("field element");
    while a.len() >= b.len() {
        let q = a.last().expect("nonempty") * &lead;
        let shift = a.len() - b.len();
        for (k, c) in b.iter().enumerate() {
            let v = &a[shift + k] - &(&q * c);
            a[shift + k] = v;
        }
        a = trim(a);
    }
    a
}

fn poly_gcd(mut a: Vec<Scalar>, mut b: Vec<Scalar>) -> Vec<Scalar> {
    while !b.is_empty() {
        let r = poly_rem(a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last() {
        let inv = l.inv().expect("field element");
        a = a.iter().map(|c| c * &inv).collect();
    }
    a
}

impl AlgebraPresentation {
    pub fn free(field: Field, name: &str, generators: Vec<String>) -> AlgebraPresentation {
        AlgebraPresentation {
            name: name.into(),
            field,
            generators,
            ideal_generators: Vec::new(),
            coproduct: None,
            counit: None,
            oracle: Some(AlgebraOracle::Free),
        }
    }

    pub fn generator(&self, g: usize) -> NcPolynomial {
        NcPolynomial::generator(self.field, g as u32, 0)
    }

    /// Chooses an oracle from the shape of the ideal when one applies.
    pub fn detect_oracle(&mut self) {
        if self.ideal_generators.iter().all(NcPolynomial::is_zero) {
            self.oracle = Some(AlgebraOracle::Free);
        } else if self.generators.len() == 1 {
            let g = self.ideal_generators.iter().fold(Vec::new(), |acc, p| poly_gcd(acc, to_coeffs(p)));
            self.oracle = Some(AlgebraOracle::Univariate(from_coeffs(self.field, &g)));
        }
    }

    pub fn render(&self) -> String {
        let rels: Vec<String> = self.ideal_generators.iter().map(|p| p.render(&self.generators)).collect();
        format!("⟨{} | {}⟩", self.generators.join(", "), rels.join(", "))
    }

    /// Normal form modulo the ideal when an oracle is available.
    pub fn normal_form(&self, q: &NcPolynomial) -> Option<NcPolynomial> {
        match self.oracle.as_ref()? {
            AlgebraOracle::Free => Some(q.clone()),
            AlgebraOracle::Univariate(g) => {
                let g = to_coeffs(g);
                if g.is_empty() {
                    return Some(q.clone());
                }
                Some(from_coeffs(self.field, &poly_rem(to_coeffs(q), &g)))
            }
            AlgebraOracle::Monoid(sys) => {
                let mut out = NcPolynomial::zero(self.field);
                for (m, c) in q.terms() {
                    out.add_term(Monomial { degree: 0, word: sys.reduce(&m.word) }, c.clone());
                }
                Some(out)
            }
        }
    }

    pub fn counit_of(&self, p: &NcPolynomial) -> Option<Scalar> {
        let e = self.counit.as_ref()?;
        let consts: Vec<NcPolynomial> = e.iter().map(|c| NcPolynomial::constant(self.field, c.clone())).collect();
        Some(p.substitute(&consts).constant_term())
    }

    /// `∇` extended multiplicatively from the generators.
    pub fn coproduct_of(&self, p: &NcPolynomial) -> Option<PolyTensor> {
        let gens = self.coproduct.as_ref()?;
        let mut out = PolyTensor::new();
        for (m, c) in p.terms() {
            let mut acc = PolyTensor::from([((Vec::new(), Vec::new()), c.clone())]);
            for g in &m.word {
                acc = tensor_mul(&acc, &gens[*g as usize]);
            }
            for (k, v) in acc {
                add_term(&mut out, k, v);
            }
        }
        Some(out)
    }

    /// `{w · g · w'}` with `|w| + |w'| + length(g) ≤ budget`.
    fn bounded_span(&self, budget: usize) -> Vec<NcPolynomial> {
        let k = self.generators.len() as u32;
        let words = words_up_to(k, budget);
        let mut out = Vec::new();
        for g in &self.ideal_generators {
            let len = g.max_length();
            if g.is_zero() || len > budget {
                continue;
            }
            for w in words.iter().filter(|w| w.len() + len <= budget) {
                let left = word_poly(self.field, w);
                for v in words.iter().filter(|v| w.len() + v.len() + len <= budget) {
                    out.push(left.times(g).times(&word_poly(self.field, v)));
                }
            }
        }
        out
    }
}

fn words_up_to(k: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..k {
                let mut v = w.clone();
                v.push(g);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn tensor_mul(a: &PolyTensor, b: &PolyTensor) -> PolyTensor {
    let mut out = PolyTensor::new();
    for ((l1, r1), x) in a {
        for ((l2, r2), y) in b {
            let l = [l1.as_slice(), l2].concat();
            let r = [r1.as_slice(), r2].concat();
            add_term(&mut out, (l, r), x * y);
        }
    }
    out
}

/// `Σ c · F(a) ⊗ F(b)`.
pub fn map_tensor(t: &PolyTensor, images: &[NcPolynomial]) -> PolyTensor {
    let field = images.first().map(|p| p.field);
    let mut out = PolyTensor::new();
    let Some(field) = field else {
        for (k, v) in t {
            if k.0.is_empty() && k.1.is_empty() {
                add_term(&mut out, k.clone(), v.clone());
            }
        }
        return out;
    };
    for ((l, r), c) in t {
        let a = word_poly(field, l).substitute(images);
        let b = word_poly(field, r).substitute(images);
        for (x, u) in a.terms() {
            for (y, v) in b.terms() {
                add_term(&mut out, (x.word.clone(), y.word.clone()), &(c * u) * v);
            }
        }
    }
    out
}

/// Whether the columns span `target`, all over the same monomial index.
fn in_span(field: Field, columns: &[Vec<(usize, Scalar)>], target: &[(usize, Scalar)], rows: usize) -> bool {
    let m = SparseMatrix::from_columns(field, rows, columns.to_vec());
    let base = m.rank();
    let ext = m.hcat(&SparseMatrix::from_columns(field, rows, vec![target.to_vec()])).expect("same row count");
    ext.rank() == base
}

/// Echelon basis of the bounded span `{w · g · w'}`, keyed by leading monomial.
#[derive(Clone, Debug)]
pub struct BoundedQuotient {
    pub budget: usize,
    pub span_size: usize,
    pivots: BTreeMap<Vec<u32>, NcPolynomial>,
}

fn lead_word(p: &NcPolynomial) -> Option<(Vec<u32>, Scalar)> {
    p.leading().map(|(m, c)| (m.word.clone(), c.clone()))
}

impl BoundedQuotient {
    pub fn new(p: &AlgebraPresentation, budget: usize) -> BoundedQuotient {
        let span = p.bounded_span(budget);
        let mut q = BoundedQuotient { budget, span_size: span.len(), pivots: BTreeMap::new() };
        for v in span {
            let r = q.reduce(&v);
            if let Some((w, c)) = lead_word(&r) {
                let inv = c.inv().expect("nonzero leading coefficient");
                q.pivots.insert(w, r.scale(&inv));
            }
        }
        q
    }

    /// Cancels leading terms against pivots until the leading term has none.
    fn reduce_lead(&self, v: &NcPolynomial) -> NcPolynomial {
        let mut r = v.clone();
        while let Some((w, c)) = lead_word(&r) {
            match self.pivots.get(&w) {
                Some(piv) => r = r.minus(&piv.scale(&c)),
                None => break,
            }
        }
        r
    }

    /// Full reduction: every term that has a pivot is cancelled.
    pub fn reduce(&self, v: &NcPolynomial) -> NcPolynomial {
        let mut head = NcPolynomial::zero(v.field);
        let mut r = self.reduce_lead(v);
        while let Some((w, c)) = lead_word(&r) {
            head.add_term(Monomial { degree: 0, word: w.clone() }, c.clone());
            r.add_term(Monomial { degree: 0, word: w }, -c);
            r = self.reduce_lead(&r);
        }
        head
    }

    pub fn contains(&self, v: &NcPolynomial) -> bool {
        self.reduce_lead(v).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Membership of `q` in the two-sided ideal of `p`.
pub fn ideal_membership(p: &AlgebraPresentation, q: &NcPolynomial, budget_length: usize) -> Verdict {
    if q.is_zero() {
        return Verdict::with(Status::Verified, "the element is 0");
    }
    if p.oracle.is_some() {
        return oracle_membership(p, q);
    }
    membership_in(&BoundedQuotient::new(p, budget_length), q)
}

fn oracle_membership(p: &AlgebraPresentation, q: &NcPolynomial) -> Verdict {
    let nf = p.normal_form(q).expect("oracle present");
    let tag = p.oracle.as_ref().map_or("", AlgebraOracle::tag);
    if nf.is_zero() {
        Verdict::with(Status::Verified, format!("normal form is 0 ({tag} oracle)"))
    } else {
        Verdict::with(Status::Refuted, format!("normal form {} is nonzero ({tag} oracle)", nf.render(&p.generators)))
    }
}

/// Membership against a precomputed bounded span.
pub fn membership_in(b: &BoundedQuotient, q: &NcPolynomial) -> Verdict {
    if b.contains(q) {
        Verdict::with(Status::Verified, format!("combination of the {} products w·g·w' within length budget {}", b.span_size, b.budget))
    } else {
        Verdict::with(Status::Inconclusive, format!("outside the span of products within length budget {}, no oracle", b.budget))
    }
}

/// Decides membership through the oracle or a shared bounded span.
pub struct IdealTest<'a> {
    pub presentation: &'a AlgebraPresentation,
    quotient: Option<BoundedQuotient>,
}

impl<'a> IdealTest<'a> {
    pub fn new(p: &'a AlgebraPresentation, budget: usize) -> IdealTest<'a> {
        let quotient = p.oracle.is_none().then(|| BoundedQuotient::new(p, budget));
        IdealTest { presentation: p, quotient }
    }

    pub fn check(&self, q: &NcPolynomial) -> Verdict {
        if q.is_zero() {
            return Verdict::with(Status::Verified, "the element is 0");
        }
        match &self.quotient {
            Some(b) => membership_in(b, q),
            None => oracle_membership(self.presentation, q),
        }
    }
}

/// Membership of `t` in `I ⊗ A + A ⊗ I`.
pub fn tensor_ideal_membership(p: &AlgebraPresentation, t: &PolyTensor, budget_length: usize) -> Verdict {
    if t.is_empty() {
        return Verdict::with(Status::Verified, "the tensor is 0");
    }
    if p.oracle.is_some() {
        let mut out = PolyTensor::new();
        for ((l, r), c) in t {
            let a = p.normal_form(&word_poly(p.field, l)).expect("oracle present");
            let b = p.normal_form(&word_poly(p.field, r)).expect("oracle present");
            for (x, u) in a.terms() {
                for (y, v) in b.terms() {
                    add_term(&mut out, (x.word.clone(), y.word.clone()), &(c * u) * v);
                }
            }
        }
        let tag = p.oracle.as_ref().map_or("", AlgebraOracle::tag);
        return if out.is_empty() {
            Verdict::with(Status::Verified, format!("normal form of the tensor is 0 ({tag} oracle)"))
        } else {
            Verdict::with(Status::Refuted, format!("normal form of the tensor has {} terms ({tag} oracle)", out.len()))
        };
    }
    let span = p.bounded_span(budget_length);
    let len = t.keys().map(|(l, r)| l.len().max(r.len())).max().unwrap_or(0);
    let mons = words_up_to(p.generators.len() as u32, len);
    let mut index: HashMap<(Vec<u32>, Vec<u32>), usize> = HashMap::new();
    let mut key = |k: (Vec<u32>, Vec<u32>)| {
        let n = index.len();
        *index.entry(k).or_insert(n)
    };
    let mut cols = Vec::new();
    for u in &span {
        for m in &mons {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (x, c) in u.terms() {
                left.push((key((x.word.clone(), m.clone())), c.clone()));
                right.push((key((m.clone(), x.word.clone())), c.clone()));
            }
            left.sort_by_key(|e| e.0);
            right.sort_by_key(|e| e.0);
            cols.push(left);
            cols.push(right);
        }
    }
    let mut target: Vec<(usize, Scalar)> = t.iter().map(|(k, c)| (key(k.clone()), c.clone())).collect();
    target.sort_by_key(|e| e.0);
    if in_span(p.field, &cols, &target, index.len()) {
        Verdict::with(Status::Verified, format!("in I⊗A + A⊗I within length budget {budget_length}"))
    } else {
        Verdict::with(Status::Inconclusive, format!("not found in I⊗A + A⊗I within length budget {budget_length}"))
    }
}

/// Outcome of checking a generator assignment between presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCheck {
    pub algebra: Verdict,
    /// Present when both sides carry coproduct and counit.
    pub bialgebra: Option<Verdict>,
}

fn merge(parts: Vec<(String, Verdict)>, ok: &str) -> Verdict {
    let status = parts.iter().fold(Status::Verified, |s, (_, v)| s.and(v.status));
    let mut out = Verdict::new(status);
    if parts.is_empty() {
        out.note(ok);
    }
    for (what, v) in parts {
        for e in v.evidence {
            out.note(format!("{what}: {} ({e})", v.status));
        }
    }
    out
}

/// Checks that `g ↦ images[g]` carries the ideal of `src` into that of
/// `dst`, and compatibility with counit and coproduct when both are present.
pub fn presentation_map_check(
    src: &AlgebraPresentation,
    dst: &AlgebraPresentation,
    images: &[NcPolynomial],
    budget: usize,
) -> Result<MapCheck> {
    if images.len() != src.generators.len() {
        return Err(Error::InvalidMap(format!("{} images for {} generators", images.len(), src.generators.len())));
    }
    if images.iter().any(|p| p.terms().any(|(m, _)| m.degree != 0 || m.word.iter().any(|g| *g as usize >= dst.generators.len()))) {
        return Err(Error::InvalidMap("images must be degree-0 polynomials in the target generators".into()));
    }
    let test = IdealTest::new(dst, budget);
    let parts = src
        .ideal_generators
        .iter()
        .map(|r| {
            let img = r.substitute(images);
            (format!("relation {}", r.render(&src.generators)), test.check(&img))
        })
        .collect();
    let algebra = merge(parts, "source is free");
    let bialgebra = match (&src.coproduct, &src.counit, &dst.coproduct, &dst.counit) {
        (Some(nabla), Some(eps), Some(_), Some(_)) => {
            let mut parts = Vec::new();
            for (g, name) in src.generators.iter().enumerate() {
                let e_img = dst.counit_of(&images[g]).expect("counit present");
                if e_img != eps[g] {
                    parts.push((
                        format!("counit on {name}"),
                        Verdict::with(Status::Refuted, format!("ε(F({name})) = {e_img} but ε({name}) = {}", eps[g])),
                    ));
                }
                let lhs = dst.coproduct_of(&images[g]).expect("coproduct present");
                let rhs = map_tensor(&nabla[g], images);
                let mut diff = lhs;
                for (k, v) in rhs {
                    add_term(&mut diff, k, -v);
                }
                let v = tensor_ideal_membership(dst, &diff, budget);
                if !v.is_verified() {
                    parts.push((format!("coproduct on {name}"), v));
                }
            }
            Some(merge(parts, "counit and coproduct agree on generators"))
        }
        _ => None,
    };
    Ok(MapCheck { algebra, bialgebra })
}

/// Degree-0 homology of a free dg algebra: degree-0 generators modulo the
/// boundaries of degree-1 generators.
pub fn h0_presentation(a: &FreeDgAlgebra) -> Result<AlgebraPresentation> {
    if !a.generators_complete_in(1) {
        return Err(Error::InsufficientTruncation { needed: 1, available: 0 });
    }
    let zero = a.degree0_generators();
    let mut slot = vec![None; a.generators.len()];
    for (k, g) in zero.iter().enumerate() {
        slot[*g] = Some(k as u32);
    }
    let relabel = |p: &NcPolynomial| -> NcPolynomial {
        let mut out = NcPolynomial::zero(a.field);
        for (m, c) in p.terms() {
            let word = m.word.iter().map(|g| slot[*g as usize].expect("degree-0 letter")).collect();
            out.add_term(Monomial { degree: 0, word }, c.clone());
        }
        out
    };
    let ideal = (0..a.generators.len())
        .filter(|g| a.generators[*g].degree == 1)
        .map(|g| relabel(&a.differential[g]))
        .filter(|p| !p.is_zero())
        .collect();
    let mut p = AlgebraPresentation {
        name: format!("H₀({})", a.name),
        field: a.field,
        generators: zero.iter().map(|g| a.generators[*g].label.clone()).collect(),
        ideal_generators: ideal,
        coproduct: None,
        counit: Some(zero.iter().map(|g| a.augmentation[*g].clone()).collect()),
        oracle: None,
    };
    p.detect_oracle();
    Ok(p)
}

/// `π(C) = H₀(Ω(C))` with `∇(s⁻¹x̄) = Σ s⁻¹x̄' ⊗ s⁻¹x̄'' + 1 ⊗ s⁻¹x̄ + s⁻¹x̄ ⊗ 1`
/// over `Δ_1 x = Σ x' ⊗ x''`.
pub fn fundamental_bialgebra(c: &SimplicialCoalgebra) -> Result<AlgebraPresentation> {
    let c2 = c.at_level(2)?;
    let n = normalized_chains(&c2)?;
    let a = cobar(&n)?;
    let mut p = h0_presentation(&a)?;
    p.name = format!("π({})", c.name);
    let mut inv = vec![None; c2.dim(1)];
    for (k, b) in n.origin[1].iter().enumerate() {
        inv[*b] = Some(k as u32);
    }
    let nabla = n.origin[1]
        .iter()
        .enumerate()
        .map(|(k, b)| {
            let mut t = PolyTensor::new();
            for (x, y, coef) in &c2.levels[1].coproduct[*b] {
                if let (Some(i), Some(j)) = (inv[*x], inv[*y]) {
                    add_term(&mut t, (vec![i], vec![j]), coef.clone());
                }
            }
            let g = k as u32;
            add_term(&mut t, (Vec::new(), vec![g]), c.field.one());
            add_term(&mut t, (vec![g], Vec::new()), c.field.one());
            t
        })
        .collect();
    p.coproduct = Some(nabla);
    p.counit = Some(vec![c.field.zero(); p.generators.len()]);
    Ok(p)
}

/// `𝔽[τ(X)]`: the monoid algebra of the homotopy monoid with group-like generators.
pub fn tau_algebra(x: &SSet, field: Field) -> Result<AlgebraPresentation> {
    let m = homotopy_monoid(&x.at_level(2)?)?;
    let ideal = m.relations.iter().map(|(l, r)| word_poly(field, l).minus(&word_poly(field, r))).collect();
    let k = m.generators.len() as u32;
    Ok(AlgebraPresentation {
        name: format!("𝔽[τ({})]", x.name),
        field,
        generators: m.generators.iter().map(|g| format!("[{g}]")).collect(),
        ideal_generators: ideal,
        coproduct: Some((0..k).map(|g| PolyTensor::from([((vec![g], vec![g]), field.one())])).collect()),
        counit: Some(vec![field.one(); k as usize]),
        oracle: m.oracle.map(|o| AlgebraOracle::Monoid(o.system)),
    })
}

/// `φ: π(F[X]) → 𝔽[τ(X)]`, `s⁻¹σ̄ ↦ [σ] - 1`.
pub fn phi_images(field: Field, edges: usize) -> Vec<NcPolynomial> {
    (0..edges as u32).map(|g| NcPolynomial::generator(field, g, 0).minus(&NcPolynomial::one(field))).collect()
}

/// `ψ: 𝔽[τ(X)] → π(F[X])`, `[σ] ↦ s⁻¹σ̄ + 1`.
pub fn psi_images(field: Field, edges: usize) -> Vec<NcPolynomial> {
    (0..edges as u32).map(|g| NcPolynomial::generator(field, g, 0).plus(&NcPolynomial::one(field))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{chains_coalgebra, constant};
    use crate::simplicial::builtins::{rp2, s1, s1_localized};

    fn pi(x: &SSet, f: Field) -> AlgebraPresentation {
        fundamental_bialgebra(&chains_coalgebra(x, f, 2).unwrap()).unwrap()
    }

    #[test]
    fn circle_bialgebra_is_free_and_group_like() {
        let q = Field::Rationals;
        let p = pi(&s1(2), q);
        assert_eq!(p.generators.len(), 1);
        assert!(p.ideal_generators.is_empty());
        let t1 = p.generator(0).plus(&NcPolynomial::one(q));
        let want = PolyTensor::from([
            ((vec![], vec![]), q.one()),
            ((vec![0], vec![]), q.one()),
            ((vec![], vec![0]), q.one()),
            ((vec![0], vec![0]), q.one()),
        ]);
        assert_eq!(p.coproduct_of(&t1).unwrap(), want);
        assert!(ideal_membership(&p, &p.generator(0).pow(2), 6).is_refuted());
        assert!(ideal_membership(&p, &NcPolynomial::zero(q), 0).is_verified());
    }

    #[test]
    fn constant_bialgebra_has_no_generators() {
        let p = fundamental_bialgebra(&constant(Field::Rationals, 2)).unwrap();
        assert!(p.generators.is_empty() && p.ideal_generators.is_empty());
    }

    #[test]
    fn rp2_group_like_squares_to_one() {
        for f in [Field::Rationals, Field::Prime(3)] {
            let mut p = pi(&rp2(2), f);
            assert_eq!(p.ideal_generators.len(), 1);
            let a1 = p.generator(0).plus(&NcPolynomial::one(f));
            let q = a1.times(&a1).minus(&NcPolynomial::one(f));
            assert!(ideal_membership(&p, &q, 3).is_verified());
            assert!(ideal_membership(&p, &p.generator(0), 3).is_refuted());
            // without the oracle the bounded span still finds it
            p.oracle = None;
            assert!(ideal_membership(&p, &q, 3).is_verified());
            assert_eq!(ideal_membership(&p, &p.generator(0), 3).status, Status::Inconclusive);
            assert_eq!(ideal_membership(&p, &q, 1).status, Status::Inconclusive);
        }
    }

    #[test]
    fn phi_and_psi_for_the_circle() {
        let q = Field::Rationals;
        let src = pi(&s1(2), q);
        let dst = tau_algebra(&s1(2), q).unwrap();
        let phi = presentation_map_check(&src, &dst, &phi_images(q, 1), 6).unwrap();
        assert!(phi.algebra.is_verified());
        assert!(phi.bialgebra.unwrap().is_verified());
        let psi = presentation_map_check(&dst, &src, &psi_images(q, 1), 6).unwrap();
        assert!(psi.algebra.is_verified());
        assert!(psi.bialgebra.unwrap().is_verified());
        let back = phi_images(q, 1)[0].substitute(&psi_images(q, 1));
        assert!(ideal_membership(&src, &back.minus(&src.generator(0)), 6).is_verified());
    }

    #[test]
    fn phi_and_psi_for_rp2_in_odd_characteristic() {
        for f in [Field::Rationals, Field::Prime(3)] {
            let src = pi(&rp2(2), f);
            let dst = tau_algebra(&rp2(2), f).unwrap();
            for (a, b, im) in [(&src, &dst, phi_images(f, 1)), (&dst, &src, psi_images(f, 1))] {
                let m = presentation_map_check(a, b, &im, 4).unwrap();
                assert!(m.algebra.is_verified(), "{:?}", m.algebra);
                assert!(m.bialgebra.unwrap().is_verified());
            }
        }
    }

    #[test]
    fn counit_violation_is_reported() {
        let q = Field::Rationals;
        let src = pi(&s1(2), q);
        let mut unit = AlgebraPresentation::free(q, "𝔽", Vec::new());
        unit.coproduct = Some(Vec::new());
        unit.counit = Some(Vec::new());
        // t ↦ 0 is the counit itself
        let zero = presentation_map_check(&src, &unit, &[NcPolynomial::zero(q)], 3).unwrap();
        assert!(zero.algebra.is_verified() && zero.bialgebra.unwrap().is_verified());
        let minus_one = presentation_map_check(&src, &unit, &[NcPolynomial::constant(q, q.from_i64(-1))], 3).unwrap();
        assert!(minus_one.algebra.is_verified());
        let b = minus_one.bialgebra.unwrap();
        assert!(b.is_refuted());
        assert!(b.evidence.iter().any(|e| e.contains("ε(F(")), "{:?}", b.evidence);
    }

    #[test]
    fn identity_maps_and_the_integers() {
        let q = Field::Rationals;
        let loc = pi(&s1_localized(2), q);
        assert_eq!(loc.generators.len(), 2);
        let id: Vec<NcPolynomial> = (0..2).map(|g| loc.generator(g)).collect();
        let m = presentation_map_check(&loc, &loc, &id, 4).unwrap();
        assert!(m.algebra.is_verified());
        assert!(m.bialgebra.unwrap().is_verified());
        let tau = tau_algebra(&s1_localized(2), q).unwrap();
        let m = presentation_map_check(&loc, &tau, &phi_images(q, 2), 4).unwrap();
        assert!(m.algebra.is_verified());
        let (u, v) = (loc.generator(0).plus(&NcPolynomial::one(q)), loc.generator(1).plus(&NcPolynomial::one(q)));
        let inv = u.times(&v).minus(&NcPolynomial::one(q));
        assert!(ideal_membership(&loc, &inv, 3).is_verified());
    }

    fn by_rank(p: &AlgebraPresentation, q: &NcPolynomial, budget: usize) -> bool {
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        let mut col = |v: &NcPolynomial| -> Vec<(usize, Scalar)> {
            let mut out: Vec<(usize, Scalar)> = v
                .terms()
                .map(|(m, c)| {
                    let n = index.len();
                    (*index.entry(m.word.clone()).or_insert(n), c.clone())
                })
                .collect();
            out.sort_by_key(|e| e.0);
            out
        };
        let cols: Vec<_> = p.bounded_span(budget).iter().map(&mut col).collect();
        let target = col(q);
        in_span(p.field, &cols, &target, index.len())
    }

    proptest::proptest! {
        #[test]
        fn echelon_and_rank_agree(coeffs in proptest::collection::vec(-2i64..3, 15), budget in 2usize..5) {
            let q = Field::Prime(5);
            let mut p = pi(&s1_localized(2), q);
            p.oracle = None;
            // words up to length 3 in two letters
            let words = words_up_to(2, 3);
            let poly = NcPolynomial::from_words(q, words.into_iter().zip(coeffs).map(|(w, c)| (w, q.from_i64(c))));
            let b = BoundedQuotient::new(&p, budget);
            proptest::prop_assert_eq!(b.contains(&poly), by_rank(&p, &poly, budget));
            let rel = p.ideal_generators[0].times(&poly);
            if rel.max_length() <= budget {
                proptest::prop_assert!(b.contains(&rel));
            }
        }
    }

    #[test]
    fn univariate_gcd() {
        let q = Field::Rationals;
        let t = NcPolynomial::generator(q, 0, 0);
        let one = NcPolynomial::one(q);
        // gcd(t² - 1, t² + 2t + 1) = t + 1
        let a = t.times(&t).minus(&one);
        let b = t.plus(&one).pow(2);
        let g = from_coeffs(q, &poly_gcd(to_coeffs(&a), to_coeffs(&b)));
        assert_eq!(g, t.plus(&one));
    }
}
