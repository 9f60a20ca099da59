//! The cylinder homotopy `H` on `N_*(Cyl(C))`, its coderivation property,
//! the extension `H_Ω` to the cobar construction and the Eilenberg–Zilber
//! description of `H` on the 0-end, all checked as exact identities.

use crate::chains::{add_term, coalgebra_chain_map, normalized_chains, Cell, DgCoalgebra, Tensor};
use crate::coalgebra::{cyl_index, cylinder, interval_degeneracy, Cylinder, SimplicialCoalgebra};
use crate::cobar::free::enumerate_words;
use crate::cobar::{cobar, cobar_complex_slice, cobar_map, CobarSlice, FreeDgAlgebra, FreeDgMap, Monomial, NcPolynomial, TruncationSpec};
use crate::error::{Error, Result};
use crate::field::{sign, Scalar};
use crate::homology::induced_on_homology;
use crate::sparse::{normalize_vec, SparseMatrix, SparseVec};
use crate::verdict::Status;

/// Degreewise matrices `N_n → N'_{n + shift}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub name: String,
    pub shift: isize,
    pub matrices: Vec<SparseMatrix>,
}

/// Outcome of an exact identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: String,
    pub passed: bool,
    pub max_degree: usize,
    pub checked: usize,
    pub witness: Option<String>,
}

impl IdentityReport {
    fn new(identity: impl Into<String>, max_degree: usize) -> IdentityReport {
        IdentityReport { identity: identity.into(), passed: true, max_degree, checked: 0, witness: None }
    }

    fn fail(&mut self, witness: String) {
        if self.passed {
            self.passed = false;
            self.witness = Some(witness);
        }
    }

    pub fn status(&self) -> Status {
        if self.passed {
            Status::Verified
        } else {
            Status::Refuted
        }
    }

    pub fn into_result(self) -> Result<IdentityReport> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::InternalConsistency(format!("{}: {}", self.identity, self.witness.unwrap_or_default())))
        }
    }
}

/// Where the sign of `H` passing a factor of degree `k` is inserted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// `(−1)^k`.
    Koszul,
    /// No sign.
    Naive,
}

impl SignConvention {
    fn sign(self, field: crate::field::Field, k: usize) -> Scalar {
        match self {
            SignConvention::Koszul => sign(field, k),
            SignConvention::Naive => field.one(),
        }
    }
}

/// `N_*(Cyl(C))` with `𝔮`, `𝔦₁` and `H`. Chains are kept through
/// `level + 1` and `H` is stored on degrees `≤ level`.
pub struct CylinderHomotopy {
    pub coalgebra: SimplicialCoalgebra,
    pub cylinder: Cylinder,
    pub chains: DgCoalgebra,
    pub base: DgCoalgebra,
    pub q: Vec<SparseMatrix>,
    pub i1: Vec<SparseMatrix>,
    pub i1q: Vec<SparseMatrix>,
    pub h: GradedMap,
    pub level: usize,
    pub sign: HSign,
    /// Nondegenerate position of each basis element of `Cyl_n`.
    inverse: Vec<Vec<Option<usize>>>,
}

fn inverse_of(origin: &[usize], dim: usize) -> Vec<Option<usize>> {
    let mut inv = vec![None; dim];
    for (k, i) in origin.iter().enumerate() {
        inv[*i] = Some(k);
    }
    inv
}

fn project(v: &[(usize, Scalar)], inv: &[Option<usize>]) -> SparseVec {
    normalize_vec(v.iter().filter_map(|(i, c)| inv[*i].map(|k| (k, c.clone()))).collect())
}

/// `(b, r)` for a basis element of `Cyl_n` other than the unit.
fn decode(n: usize, o: usize) -> (usize, usize) {
    (1 + (o - 1) / (n + 2), n + 1 - (o - 1) % (n + 2))
}

/// Sign of the `j`-th summand of `H(x, [0^{k+1} 1^{n-k}])`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HSign {
    /// `(−1)^{k−j}`: satisfies the homotopy and coderivation identities.
    Corrected,
    /// `(−1)^j`, which differs by `(−1)^k` on each representative.
    AsPrinted,
}

/// `H(b, [0^r 1^s]) = Σ_{j=0}^{r-1} ± (s_{r-1-j} b, [0^{r-j} 1^{s+j+1}])` in `Cyl_{n+1}`.
fn h_formula(c: &SimplicialCoalgebra, n: usize, b: usize, r: usize, hs: HSign) -> SparseVec {
    let field = c.field;
    let mut out = Vec::new();
    for j in 0..r {
        let t = r - 1 - j;
        let s = sign(field, if hs == HSign::Corrected { t } else { j });
        for (b2, a) in c.levels[n + 1].degeneracies[t].column(b) {
            let idx = if *b2 == 0 { 0 } else { cyl_index(n + 1, *b2, t + 1) };
            out.push((idx, a * &s));
        }
    }
    normalize_vec(out)
}

impl CylinderHomotopy {
    fn h_on_basis(&self, n: usize, o: usize) -> SparseVec {
        if o == 0 {
            return Vec::new();
        }
        let (b, r) = decode(n, o);
        h_formula(&self.coalgebra, n, b, r, self.sign)
    }

    /// `H` of a cell of `N_n(Cyl(C))`.
    pub fn h_cell(&self, c: Cell) -> &SparseVec {
        self.h.matrices[c.0].column(c.1)
    }

    fn apply_h(&self, n: usize, v: &[(usize, Scalar)]) -> SparseVec {
        self.h.matrices[n].apply(v)
    }

    /// `H` sends every representative of the unit and every degenerate
    /// element to degenerate elements.
    pub fn check_well_defined(&self) -> IdentityReport {
        let mut rep = IdentityReport::new("H is defined on normalized chains", self.level);
        let c = &self.coalgebra;
        for n in 0..=self.level {
            for r in 0..=n + 1 {
                rep.checked += 1;
                if !project(&h_formula(c, n, 0, r, self.sign), &self.inverse[n + 1]).is_empty() {
                    rep.fail(format!("H(e, {}) is not degenerate", crate::coalgebra::interval_label(r, n)));
                }
            }
            let mask = self.cylinder.cyl.degenerate_mask(n);
            for (o, _) in mask.iter().enumerate().filter(|(_, d)| **d) {
                rep.checked += 1;
                if !project(&self.h_on_basis(n, o), &self.inverse[n + 1]).is_empty() {
                    rep.fail(format!("H of the degenerate {} is not degenerate", self.cylinder.cyl.levels[n].labels[o]));
                }
            }
        }
        rep
    }
}

/// `H: N_*(Cyl(C)) → N_{*+1}(Cyl(C))` for degrees `≤ level`.
pub fn homotopy_h(c: &SimplicialCoalgebra, level: usize) -> Result<CylinderHomotopy> {
    homotopy_h_with(c, level, HSign::Corrected)
}

pub fn homotopy_h_with(c: &SimplicialCoalgebra, level: usize, sign: HSign) -> Result<CylinderHomotopy> {
    let c = c.at_level(level + 1)?;
    let cyl = cylinder(&c)?;
    let chains = normalized_chains(&cyl.cyl)?;
    let base = normalized_chains(&c)?;
    let q = coalgebra_chain_map(&cyl.q, &chains, &base)?;
    let i1 = coalgebra_chain_map(&cyl.i1, &base, &chains)?;
    let i1q = i1.iter().zip(&q).map(|(a, b)| a.mul(b)).collect::<Result<Vec<_>>>()?;
    let inverse: Vec<Vec<Option<usize>>> = (0..=level + 1).map(|n| inverse_of(&chains.origin[n], cyl.cyl.dim(n))).collect();
    let field = c.field;
    let mut out = CylinderHomotopy {
        coalgebra: c,
        cylinder: cyl,
        chains,
        base,
        q,
        i1,
        i1q,
        h: GradedMap { name: "H".into(), shift: 1, matrices: Vec::new() },
        level,
        sign,
        inverse,
    };
    let matrices = (0..=level)
        .map(|n| {
            let cols = crate::exec::map(&out.chains.origin[n], |o| project(&out.h_on_basis(n, *o), &out.inverse[n + 1]));
            SparseMatrix::from_columns(field, out.chains.dim(n + 1), cols)
        })
        .collect();
    out.h.matrices = matrices;
    Ok(out)
}

fn sub(a: &[(usize, Scalar)], b: &[(usize, Scalar)]) -> SparseVec {
    normalize_vec(a.iter().cloned().chain(b.iter().map(|(i, c)| (*i, -c))).collect())
}

/// `H ∘ ∂ + ∂ ∘ H = ε (𝔦₁ ∘ 𝔮 − id)`.
fn homotopy_report(ch: &CylinderHomotopy, epsilon: i64) -> IdentityReport {
    let level = ch.level;
    let mut rep = ch.check_well_defined();
    rep.identity = if epsilon < 0 { "H∂ + ∂H = id − i₁q" } else { "H∂ + ∂H = i₁q − id" }.into();
    let eps = ch.chains.field.from_i64(epsilon);
    let field = ch.chains.field;
    for n in 0..=level {
        for i in 0..ch.chains.dim(n) {
            rep.checked += 1;
            let mut lhs = ch.chains.differential[n + 1].apply(ch.h_cell((n, i)));
            if n > 0 {
                let dh = ch.apply_h(n - 1, ch.chains.differential[n].column(i));
                lhs = normalize_vec(lhs.into_iter().chain(dh).collect());
            }
            let rhs: SparseVec = sub(ch.i1q[n].column(i), &[(i, field.one())]).into_iter().map(|(k, a)| (k, &a * &eps)).collect();
            if lhs != rhs {
                rep.fail(format!("degree {n}, {}", ch.chains.label((n, i))));
            }
        }
    }
    rep
}

/// `H ∘ ∂ + ∂ ∘ H = 𝔦₁ ∘ 𝔮 − id` on `N_n(Cyl(C))`, `n ≤ level`.
pub fn check_chain_homotopy(c: &SimplicialCoalgebra, level: usize) -> Result<IdentityReport> {
    Ok(homotopy_report(&homotopy_h(c, level)?, 1))
}

fn coderivation_report(ch: &CylinderHomotopy, conv: SignConvention) -> IdentityReport {
    let field = ch.chains.field;
    let mut rep = IdentityReport::new(format!("(H⊗i₁q + id⊗H)Δ = ΔH [{conv:?}]"), ch.level);
    for n in 0..=ch.level {
        for i in 0..ch.chains.dim(n) {
            rep.checked += 1;
            let mut lhs = Tensor::new();
            for ((a, b), k) in ch.chains.coproduct_of((n, i)) {
                for (x, u) in ch.h_cell(a) {
                    for (y, v) in ch.i1q[b.0].column(b.1) {
                        add_term(&mut lhs, ((a.0 + 1, *x), (b.0, *y)), &(&k * u) * v);
                    }
                }
                let s = &k * &conv.sign(field, a.0);
                for (y, v) in ch.h_cell(b) {
                    add_term(&mut lhs, (a, (b.0 + 1, *y)), &s * v);
                }
            }
            let mut rhs = Tensor::new();
            for (j, c) in ch.h_cell((n, i)) {
                for (key, v) in ch.chains.coproduct_of((n + 1, *j)) {
                    add_term(&mut rhs, key, c * &v);
                }
            }
            if lhs != rhs {
                rep.fail(format!("degree {n}, {}", ch.chains.label((n, i))));
            }
        }
    }
    rep
}

/// `(H ⊗ 𝔦₁𝔮 + id ⊗ H) ∘ 𝚫 = 𝚫 ∘ H` on degrees `≤ level` with Koszul signs.
pub fn check_coderivation(c: &SimplicialCoalgebra, level: usize) -> Result<IdentityReport> {
    Ok(coderivation_report(&homotopy_h(c, level)?, SignConvention::Koszul))
}

/// Side of `H̄` on which the factors `f̄ = s⁻¹ 𝔦₁𝔮 s⁺¹` stand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Placement {
    /// `Σ id^{⊗i} ⊗ H̄ ⊗ f̄^{⊗j}`, matching `(H ⊗ f + id ⊗ H) Δ = Δ H`.
    Right,
    /// `Σ f̄^{⊗i} ⊗ H̄ ⊗ id^{⊗j}`.
    Left,
}

/// `H_Ω` on `Ω(Cyl(C))` with `f = 𝔦₁𝔮`.
pub struct CobarHomotopy {
    pub algebra: FreeDgAlgebra,
    pub base: FreeDgAlgebra,
    pub q: FreeDgMap,
    pub i1: FreeDgMap,
    /// `Ω(i₁) ∘ Ω(q)`.
    pub composite: FreeDgMap,
    /// `s⁻¹ H s⁺¹` on generators where `H` is defined.
    pub h: Vec<Option<NcPolynomial>>,
    pub convention: SignConvention,
    pub placement: Placement,
    pub spec: TruncationSpec,
}

impl CobarHomotopy {
    pub fn apply_word(&self, m: &Monomial) -> Result<NcPolynomial> {
        let field = self.algebra.field;
        let gens = &self.algebra.generators;
        let word: Vec<usize> = m.word.iter().map(|g| *g as usize).collect();
        let plain = |w: &[usize]| {
            let degree = w.iter().map(|x| gens[*x].degree).sum();
            NcPolynomial::term(field, Monomial { degree, word: w.iter().map(|x| *x as u32).collect() }, field.one())
        };
        let mapped = |w: &[usize]| w.iter().fold(NcPolynomial::one(field), |acc, x| acc.times(&self.composite.images[*x]));
        let mut out = NcPolynomial::zero(field);
        let mut passed = 0usize;
        for (k, g) in word.iter().enumerate() {
            let hg = self.h[*g]
                .as_ref()
                .ok_or_else(|| Error::InsufficientTruncation { needed: gens[*g].degree + 2, available: gens[*g].degree + 1 })?;
            let (left, right) = (&word[..k], &word[k + 1..]);
            let (left, right) = match self.placement {
                Placement::Right => (plain(left), mapped(right)),
                Placement::Left => (mapped(left), plain(right)),
            };
            let s = self.convention.sign(field, passed);
            out = out.plus(&left.times(hg).times(&right).scale(&s));
            passed += gens[*g].degree;
        }
        Ok(out)
    }

    pub fn apply(&self, p: &NcPolynomial) -> Result<NcPolynomial> {
        let mut out = NcPolynomial::zero(self.algebra.field);
        for (m, c) in p.terms() {
            out = out.plus(&self.apply_word(m)?.scale(c));
        }
        Ok(out)
    }

    /// Matrices of `H_Ω` between consecutive degrees of a slice.
    pub fn slice_matrices(&self, slice: &CobarSlice) -> Result<GradedMap> {
        let field = self.algebra.field;
        let top = slice.bases.len();
        let mut matrices = Vec::new();
        for d in 0..top.saturating_sub(1) {
            let cols = slice.bases[d]
                .iter()
                .map(|m| {
                    let img = self.apply_word(m)?;
                    Ok(slice.coordinates(&img).into_iter().find(|(e, _)| *e == d + 1).map(|(_, v)| v).unwrap_or_default())
                })
                .collect::<Result<Vec<_>>>()?;
            matrices.push(SparseMatrix::from_columns(field, slice.bases[d + 1].len(), cols));
        }
        Ok(GradedMap { name: "H_Ω".into(), shift: 1, matrices })
    }
}

/// Assembles `H_Ω` for words of degree `≤ t.max_degree`.
pub fn homotopy_h_omega(c: &SimplicialCoalgebra, t: TruncationSpec, conv: SignConvention, placement: Placement) -> Result<CobarHomotopy> {
    let level = t.max_degree + 1;
    let ch = homotopy_h(c, level)?;
    let algebra = cobar(&ch.chains)?;
    let base = cobar(&ch.base)?;
    let q = cobar_map(&ch.q, &ch.chains, &ch.base)?;
    let i1 = cobar_map(&ch.i1, &ch.base, &ch.chains)?;
    let composite = FreeDgMap { name: "Ω(i₁)Ω(q)".into(), images: q.images.iter().map(|p| i1.apply(p)).collect() };
    let field = algebra.field;
    let off = crate::cobar::free::cobar_offsets(&ch.chains);
    let mut h = Vec::with_capacity(algebra.generators.len());
    for d in 1..=ch.chains.truncation() {
        for i in 0..ch.chains.dim(d) {
            if d > level {
                h.push(None);
                continue;
            }
            let mut p = NcPolynomial::zero(field);
            for (j, a) in ch.h_cell((d, i)) {
                p.add_term(Monomial { degree: d, word: vec![(off[d + 1] + j) as u32] }, a.clone());
            }
            h.push(Some(p));
        }
    }
    Ok(CobarHomotopy { algebra, base, q, i1, composite, h, convention: conv, placement, spec: t })
}

fn cobar_homotopy_report(hw: &CobarHomotopy) -> Result<IdentityReport> {
    let t = hw.spec;
    let a = &hw.algebra;
    t.completeness(a)?;
    let length = t.max_length.unwrap_or(t.max_degree);
    let words: Vec<Monomial> = enumerate_words(a, t.max_degree, length).into_iter().flatten().collect();
    let field = a.field;
    let outcomes = crate::exec::map(&words, |m| -> Result<bool> {
        let w = NcPolynomial::term(field, m.clone(), field.one());
        let lhs = a.d(&hw.apply(&w)?).plus(&hw.apply(&a.d(&w))?);
        let rhs = w.minus(&hw.composite.apply(&w));
        Ok(lhs == rhs)
    });
    let bound = t.max_length.map_or(String::new(), |l| format!(", length ≤ {l}"));
    let mut rep =
        IdentityReport::new(format!("DH_Ω + H_ΩD = id − Ω(i₁)Ω(q) [{:?}, f̄ {:?}{bound}]", hw.convention, hw.placement), t.max_degree);
    let names = a.names();
    for (m, ok) in words.iter().zip(outcomes) {
        rep.checked += 1;
        if !ok? {
            let w = NcPolynomial::term(field, m.clone(), field.one());
            rep.fail(format!("degree {}, word {}", m.degree, w.render(&names)));
        }
    }
    Ok(rep)
}

/// `D ∘ H_Ω + H_Ω ∘ D = id − Ω(i₁) ∘ Ω(q)` on every word of the slice.
pub fn check_cobar_homotopy(c: &SimplicialCoalgebra, t: TruncationSpec) -> Result<IdentityReport> {
    cobar_homotopy_report(&homotopy_h_omega(c, t, SignConvention::Koszul, Placement::Right)?)
}

/// `Ω(q)` and `Ω(i₁)` are mutually inverse on the exact part of the homology window.
pub fn check_projection_qi(c: &SimplicialCoalgebra, t: TruncationSpec) -> Result<IdentityReport> {
    let hw = homotopy_h_omega(c, t, SignConvention::Koszul, Placement::Right)?;
    let mut rep = IdentityReport::new("Ω(q), Ω(i₁) inverse on homology", t.max_degree);
    for (g, img) in hw.i1.images.iter().enumerate() {
        rep.checked += 1;
        if hw.q.apply(img) != hw.base.generator(g) {
            rep.fail(format!("Ω(q)Ω(i₁) moves {}", hw.base.generators[g].label));
        }
    }
    let wide = TruncationSpec { max_degree: t.max_degree + 1, ..t };
    let (sc, sb) = (cobar_complex_slice(&hw.algebra, wide)?, cobar_complex_slice(&hw.base, wide)?);
    let mut fq = induced_on_homology(&sc.complex, &sb.complex, &hw.q.slice_map(&sc, &sb))?;
    let mut fi = induced_on_homology(&sb.complex, &sc.complex, &hw.i1.slice_map(&sb, &sc))?;
    fq.truncate(t.max_degree + 1);
    fi.truncate(t.max_degree + 1);
    for (a, b) in fq.iter().zip(&fi) {
        if a.exact && b.exact {
            rep.checked += 1;
            if !a.is_iso() || !b.is_iso() {
                rep.fail(format!("degree {}: Betti {} vs {}", a.degree, a.source_betti, a.target_betti));
            }
        }
    }
    Ok(rep)
}

/// `(p, q)`-shuffles `(μ, ν)` with the parity of the shuffle permutation.
pub fn shuffles(p: usize, q: usize) -> Vec<(Vec<usize>, Vec<usize>, bool)> {
    let n = p + q;
    let mut out = Vec::new();
    let mut nu = Vec::with_capacity(q);
    fn rec(start: usize, n: usize, q: usize, nu: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if nu.len() == q {
            out.push(nu.clone());
            return;
        }
        for j in start..n {
            nu.push(j);
            rec(j + 1, n, q, nu, out);
            nu.pop();
        }
    }
    let mut subsets = Vec::new();
    rec(0, n, q, &mut nu, &mut subsets);
    for nu in subsets {
        let mu: Vec<usize> = (0..n).filter(|j| !nu.contains(j)).collect();
        let inversions: usize = mu.iter().map(|m| nu.iter().filter(|v| *v < m).count()).sum();
        out.push((mu, nu, inversions % 2 == 1));
    }
    out
}

/// Shuffle map `EZ(x ⊗ [0^r 1^{q+1-r}])` for `x ∈ C_p`, in the basis of
/// `(C ⊗ F[Δ¹])_{p+q}` used by `tensor_interval`.
pub fn eilenberg_zilber(c: &SimplicialCoalgebra, p: usize, x: &[(usize, Scalar)], q: usize, r: usize) -> SparseVec {
    let field = c.field;
    let n = p + q;
    let mut out = Vec::new();
    for (mu, nu, odd) in shuffles(p, q) {
        let mut v: SparseVec = x.to_vec();
        for (t, j) in nu.iter().enumerate() {
            v = c.levels[p + t + 1].degeneracies[*j].apply(&v);
        }
        let zeros = mu.iter().fold(r, |z, j| interval_degeneracy(*j, z));
        let s = sign(field, usize::from(odd));
        out.extend(v.iter().map(|(b, a)| (b * (n + 2) + (n + 1 - zeros), a * &s)));
    }
    normalize_vec(out)
}

/// `p: C ⊗ F[Δ¹] → Cyl(C)` on a level-`n` vector.
fn pushout_projection(n: usize, v: &[(usize, Scalar)]) -> SparseVec {
    normalize_vec(
        v.iter()
            .map(|(idx, a)| {
                let (b, r) = (idx / (n + 2), n + 1 - idx % (n + 2));
                (if b == 0 { 0 } else { cyl_index(n, b, r) }, a.clone())
            })
            .collect(),
    )
}

/// `H(x, [0^{n+1}])` against `(N_*(p) ∘ EZ)(x ⊗ [01])` for `1 ≤ n ≤ level`:
/// equal up to `(−1)^n` for the corrected `H`, equal on the nose for the
/// printed signs. Degenerate `x` must give `0` on both sides.
pub fn ez_check(c: &SimplicialCoalgebra, level: usize) -> Result<IdentityReport> {
    let ch = homotopy_h(c, level)?;
    let cc = &ch.coalgebra;
    let field = cc.field;
    let mut rep = IdentityReport::new("H(x,[0ⁿ⁺¹]) = (−1)ⁿ N(p)EZ(x⊗[01])", level);
    for n in 1..=level {
        let mask = cc.degenerate_mask(n);
        let s = sign(field, n);
        for b in 0..cc.dim(n) {
            rep.checked += 1;
            let ez = eilenberg_zilber(cc, n, &[(b, field.one())], 1, 1);
            let rhs = project(&pushout_projection(n + 1, &ez), &ch.inverse[n + 1]);
            let lhs = project(&h_formula(cc, n, b, n + 1, HSign::Corrected), &ch.inverse[n + 1]);
            let printed = project(&h_formula(cc, n, b, n + 1, HSign::AsPrinted), &ch.inverse[n + 1]);
            let signed: SparseVec = rhs.iter().map(|(i, a)| (*i, a * &s)).collect();
            if lhs != signed || printed != rhs || (mask[b] && !lhs.is_empty()) {
                rep.fail(format!("degree {n}, {}", cc.levels[n].labels[b]));
            }
        }
    }
    Ok(rep)
}

/// Coderivation and `H_Ω` identities under each sign convention and placement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignDiagnostic {
    pub convention: SignConvention,
    pub placement: Placement,
    pub coderivation: IdentityReport,
    pub cobar_homotopy: IdentityReport,
}

impl SignDiagnostic {
    pub fn passed(&self) -> bool {
        self.coderivation.passed && self.cobar_homotopy.passed
    }
}

pub fn sign_diagnostic(c: &SimplicialCoalgebra, level: usize, t: TruncationSpec) -> Result<Vec<SignDiagnostic>> {
    let ch = homotopy_h(c, level)?;
    let mut out = Vec::new();
    for convention in [SignConvention::Koszul, SignConvention::Naive] {
        for placement in [Placement::Right, Placement::Left] {
            out.push(SignDiagnostic {
                convention,
                placement,
                coderivation: coderivation_report(&ch, convention),
                cobar_homotopy: cobar_homotopy_report(&homotopy_h_omega(c, t, convention, placement)?)?,
            });
        }
    }
    Ok(out)
}

/// The four identities: chain homotopy, coderivation, `H_Ω`, Eilenberg–Zilber.
pub fn verify_appendix(c: &SimplicialCoalgebra, level: usize, t: TruncationSpec) -> Result<Vec<IdentityReport>> {
    let ch = homotopy_h(c, level)?;
    Ok(vec![homotopy_report(&ch, 1), coderivation_report(&ch, SignConvention::Koszul), check_cobar_homotopy(c, t)?, ez_check(c, level)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalgebra::{chains_coalgebra, constant, interval_label, tensor_interval};
    use crate::field::Field;
    use crate::simplicial::builtins::{rp2, s1, s1_localized, sphere2_min, wedge};

    const FIELDS: [Field; 3] = [Field::Rationals, Field::Prime(2), Field::Prime(3)];

    fn label_of(ch: &CylinderHomotopy, n: usize, v: &SparseVec) -> Vec<(String, String)> {
        v.iter().map(|(i, c)| (ch.chains.labels[n][*i].clone(), c.to_string())).collect()
    }

    #[test]
    fn h_on_a_two_simplex() {
        let c = chains_coalgebra(&sphere2_min(4), Field::Rationals, 4).unwrap();
        let ch = homotopy_h_with(&c, 2, HSign::AsPrinted).unwrap();
        let x = c.levels[2].labels.iter().position(|l| !l.starts_with('s')).unwrap();
        let cell = ch.inverse[2][cyl_index(2, x, 2)].unwrap();
        let find = |t: usize, r: usize| {
            let b = c.levels[3].degeneracies[t].column(x)[0].0;
            format!("({}, {})", c.levels[3].labels[b], interval_label(r, 3))
        };
        // (s₁x, [0²1²]) − (s₀x, [01³]) as printed; k = 1 flips both signs
        let sorted = |mut v: Vec<(String, String)>| {
            v.sort();
            v
        };
        let want = sorted(vec![(find(1, 2), "1".to_string()), (find(0, 1), "-1".to_string())]);
        assert_eq!(sorted(label_of(&ch, 3, ch.h_cell((2, cell)))), want);
        let corrected = homotopy_h(&c, 2).unwrap();
        let negated: Vec<(usize, Scalar)> = ch.h_cell((2, cell)).iter().map(|(i, a)| (*i, -a)).collect();
        assert_eq!(corrected.h_cell((2, cell)), &negated);
        let top = ch.inverse[2][cyl_index(2, x, 0)].unwrap();
        assert!(ch.h_cell((2, top)).is_empty());
        assert!(ch.h_cell((0, 0)).is_empty());
    }

    #[test]
    fn printed_signs_are_not_a_homotopy() {
        for x in [s1(5), rp2(5)] {
            let c = chains_coalgebra(&x, Field::Rationals, 4).unwrap();
            let printed = homotopy_h_with(&c, 2, HSign::AsPrinted).unwrap();
            assert!(!homotopy_report(&printed, 1).passed);
            assert!(!homotopy_report(&printed, -1).passed);
            let ch = homotopy_h(&c, 2).unwrap();
            assert!(homotopy_report(&ch, 1).passed);
            assert!(!homotopy_report(&ch, -1).passed);
        }
        let c = chains_coalgebra(&rp2(5), Field::Rationals, 4).unwrap();
        let printed = homotopy_h_with(&c, 2, HSign::AsPrinted).unwrap();
        assert!(!coderivation_report(&printed, SignConvention::Koszul).passed);
    }

    #[test]
    fn constant_coalgebra_is_trivial() {
        let c = constant(Field::Rationals, 4);
        for r in [
            check_chain_homotopy(&c, 3).unwrap(),
            check_coderivation(&c, 3).unwrap(),
            check_cobar_homotopy(&c, TruncationSpec::degree(3)).unwrap(),
            ez_check(&c, 3).unwrap(),
        ] {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn identities_on_fixtures() {
        for f in FIELDS {
            for (x, level) in [(s1(6), 3), (sphere2_min(6), 4), (rp2(6), 3), (s1_localized(5), 3)] {
                let c = chains_coalgebra(&x, f, level + 1).unwrap();
                for r in [check_chain_homotopy(&c, level).unwrap(), check_coderivation(&c, level).unwrap(), ez_check(&c, level).unwrap()] {
                    assert!(r.passed, "{} {f}: {r:?}", x.name);
                    assert!(r.checked > 0);
                }
            }
        }
    }

    #[test]
    fn cobar_homotopy_on_circle_and_sphere() {
        let q = Field::Rationals;
        let c = chains_coalgebra(&s1(6), q, 6).unwrap();
        let r = check_cobar_homotopy(&c, TruncationSpec::bounded(2, 3)).unwrap();
        assert!(r.passed, "{r:?}");
        let c = chains_coalgebra(&sphere2_min(7), q, 7).unwrap();
        let r = check_cobar_homotopy(&c, TruncationSpec::degree(4)).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(matches!(
            check_cobar_homotopy(&chains_coalgebra(&s1(4), q, 4).unwrap(), TruncationSpec::degree(2)),
            Err(Error::UnboundedTruncation(_))
        ));
    }

    #[test]
    fn cobar_homotopy_on_wedge() {
        let w = wedge(&[s1(6), sphere2_min(6)], 6).unwrap();
        let c = chains_coalgebra(&w, Field::Prime(2), 5).unwrap();
        assert!(check_cobar_homotopy(&c, TruncationSpec::bounded(2, 2)).unwrap().passed);
    }

    #[test]
    fn projection_is_an_omega_quasi_isomorphism() {
        let c = chains_coalgebra(&sphere2_min(7), Field::Rationals, 7).unwrap();
        let r = check_projection_qi(&c, TruncationSpec::degree(4)).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(r.checked > 0);
    }

    #[test]
    fn exactly_one_sign_convention_passes() {
        let c = chains_coalgebra(&rp2(6), Field::Rationals, 6).unwrap();
        let d = sign_diagnostic(&c, 3, TruncationSpec::bounded(2, 2)).unwrap();
        let passing: Vec<_> = d.iter().filter(|x| x.passed()).map(|x| (x.convention, x.placement)).collect();
        assert_eq!(passing, vec![(SignConvention::Koszul, Placement::Right)]);
    }

    #[test]
    fn all_four_on_rp2_over_f3() {
        let c = chains_coalgebra(&rp2(5), Field::Prime(3), 5).unwrap();
        let reps = verify_appendix(&c, 3, TruncationSpec::bounded(2, 2)).unwrap();
        assert_eq!(reps.len(), 4);
        for r in &reps {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn shuffle_signs() {
        let s = shuffles(1, 1);
        assert_eq!(s, vec![(vec![1], vec![0], true), (vec![0], vec![1], false)]);
        assert_eq!(shuffles(2, 2).len(), 6);
        assert_eq!(shuffles(2, 1).iter().filter(|x| x.2).count(), 1);
    }

    /// The shuffle map is a chain map `N(C) ⊗ N(F[Δ¹]) → N(C ⊗ F[Δ¹])`.
    #[test]
    fn eilenberg_zilber_is_a_chain_map() {
        for f in [Field::Rationals, Field::Prime(3)] {
            let c = chains_coalgebra(&sphere2_min(4), f, 4).unwrap();
            let t = tensor_interval(&c);
            let n = normalized_chains(&t).unwrap();
            let nc = normalized_chains(&c).unwrap();
            let inv: Vec<_> = (0..=4).map(|k| inverse_of(&n.origin[k], t.dim(k))).collect();
            for p in 1..=2 {
                for (i, b) in nc.origin[p].iter().enumerate() {
                    let lhs = n.differential[p + 1].apply(&project(&eilenberg_zilber(&c, p, &[(*b, f.one())], 1, 1), &inv[p + 1]));
                    // ∂(x ⊗ [01]) = ∂x ⊗ [01] + (−1)^p (x ⊗ [1] − x ⊗ [0])
                    let dx: SparseVec = nc.differential[p].column(i).iter().map(|(j, a)| (nc.origin[p - 1][*j], a.clone())).collect();
                    let mut rhs = eilenberg_zilber(&c, p - 1, &dx, 1, 1);
                    let s = sign(f, p);
                    rhs.extend(eilenberg_zilber(&c, p, &[(*b, s.clone())], 0, 0));
                    rhs.extend(eilenberg_zilber(&c, p, &[(*b, -&s)], 0, 1));
                    assert_eq!(lhs, project(&normalize_vec(rhs), &inv[p]), "p = {p}, {}", nc.labels[p][i]);
                }
            }
        }
    }
}
