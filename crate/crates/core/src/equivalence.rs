//! Three-valued checks for R-equivalence, Ω- and Ω̂-quasi-isomorphism and
//! π₁-R-equivalence, and the comparison of `π(F[X])` with `𝔽[τ(X)]`.

use crate::chains::{coalgebra_chain_map, normalized_chains, sset_chain_map, sset_chains, DgCoalgebra};
use crate::coalgebra::{chains_coalgebra, CoalgebraMap};
use crate::cobar::algebra::{phi_images, psi_images, IdealTest};
use crate::cobar::{
    cobar, cobar_complex_slice, cobar_map, fundamental_bialgebra, h0_presentation, localized_cobar, monoidlike_reps,
    presentation_map_check, tau_algebra, AlgebraOracle, AlgebraPresentation, FreeDgAlgebra, FreeDgMap, Monomial, NcPolynomial,
    TruncationSpec,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::homology::{induced_on_homology, InducedDegree};
use crate::simplicial::colimit::localization_map;
use crate::simplicial::cover::{certified_universal_cover, cover_map};
use crate::simplicial::presentation::{pi1_presentation, FiniteGroup, GWord, Pi1};
use crate::simplicial::{SSetMap, SimplexId, SimplexRef};
use crate::sparse::SparseMatrix;
use crate::verdict::{Status, Verdict};

/// Search limits shared by the checkers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    /// Length budget for ideal membership.
    pub ideal: usize,
    /// Coset limit for enumerating fundamental groups.
    pub cosets: usize,
    /// Maximum number of candidate inverse maps tried on `H₀`.
    pub inverse_candidates: usize,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets { ideal: 6, cosets: 200, inverse_candidates: 256 }
    }
}

fn betti_row(ind: &[InducedDegree], src: bool) -> String {
    let v: Vec<String> = ind.iter().map(|d| (if src { d.source_betti } else { d.target_betti }).to_string()).collect();
    format!("({})", v.join(","))
}

/// Verified when every exact degree is an isomorphism and some degree is exact.
fn window_verdict(ind: &[InducedDegree], what: &str) -> Verdict {
    let mut v = Verdict::new(Status::Verified);
    v.note(format!("{what}: source Betti {}, target Betti {}", betti_row(ind, true), betti_row(ind, false)));
    let exact: Vec<usize> = ind.iter().filter(|d| d.exact).map(|d| d.degree).collect();
    for d in ind.iter().filter(|d| d.exact && !d.is_iso()) {
        v.status = Status::Refuted;
        v.note(format!(
            "{what}: degree {} is not an isomorphism (Betti {} vs {}, induced rank {})",
            d.degree, d.source_betti, d.target_betti, d.induced_rank
        ));
    }
    if v.status == Status::Verified {
        if exact.is_empty() {
            v.status = Status::Inconclusive;
            v.note(format!("{what}: no degree of the window is exact"));
        } else {
            v.note(format!("{what}: induced map is an isomorphism in exact degrees {exact:?}"));
        }
    }
    v
}

/// Chains of both ends to `level + 1` when available, with the chain map.
fn chains_pair(f: &SSetMap, field: Field, level: usize) -> Result<(DgCoalgebra, DgCoalgebra, Vec<SparseMatrix>)> {
    let top = match f.at_level(level + 1) {
        Ok(_) => level + 1,
        Err(Error::InsufficientTruncation { .. }) => f.truncation().min(level),
        Err(e) => return Err(e),
    };
    let f = f.at_level(top)?;
    Ok((sset_chains(&f.source, field, top)?, sset_chains(&f.target, field, top)?, sset_chain_map(&f, field, top)?))
}

fn chain_window(src: &DgCoalgebra, dst: &DgCoalgebra, g: &[SparseMatrix], level: usize) -> Result<Vec<InducedDegree>> {
    let mut ind = induced_on_homology(&src.chain_complex()?, &dst.chain_complex()?, g)?;
    ind.truncate(level + 1);
    Ok(ind)
}

/// `N_*(f)` is a quasi-isomorphism in degrees `≤ level`.
pub fn check_r_equivalence(f: &SSetMap, field: Field, level: usize) -> Result<Verdict> {
    let (src, dst, g) = chains_pair(f, field, level)?;
    let ind = chain_window(&src, &dst, &g, level)?;
    Ok(window_verdict(&ind, &format!("chains over {field}")))
}

/// Does `p` have a two-sided inverse of the form `w + 1`, `w` a generator?
fn find_unit_inverse(p: &AlgebraPresentation, test: &IdealTest, x: &NcPolynomial) -> Option<usize> {
    let one = NcPolynomial::one(p.field);
    (0..p.generators.len()).find(|w| {
        let y = p.generator(*w).plus(&one);
        test.check(&x.times(&y).minus(&one)).is_verified() && test.check(&y.times(x).minus(&one)).is_verified()
    })
}

/// Compares `H₀` presentations under the generator images `images`.
pub fn h0_isomorphism(src: &AlgebraPresentation, dst: &AlgebraPresentation, images: &[NcPolynomial], budgets: Budgets) -> Result<Verdict> {
    let f = src.field;
    let src_test = IdealTest::new(src, budgets.ideal);
    let dst_test = IdealTest::new(dst, budgets.ideal);
    // candidate inverse: generators hit exactly are sent back, others try each source generator or 0
    let mut fixed: Vec<Option<NcPolynomial>> = vec![None; dst.generators.len()];
    for (x, img) in images.iter().enumerate() {
        if let Some((m, c)) = img.leading() {
            if img.num_terms() == 1 && m.len() == 1 && c.is_one() && fixed[m.word[0] as usize].is_none() {
                fixed[m.word[0] as usize] = Some(src.generator(x));
            }
        }
    }
    let free_slots: Vec<usize> = (0..dst.generators.len()).filter(|y| fixed[*y].is_none()).collect();
    let mut choices: Vec<NcPolynomial> = (0..src.generators.len()).map(|x| src.generator(x)).collect();
    choices.push(NcPolynomial::zero(f));
    let total = (choices.len() as f64).powi(free_slots.len() as i32);
    let mut tried = 0usize;
    if total <= budgets.inverse_candidates as f64 {
        let mut pick = vec![0usize; free_slots.len()];
        loop {
            tried += 1;
            let mut g: Vec<NcPolynomial> = fixed.iter().map(|p| p.clone().unwrap_or_else(|| NcPolynomial::zero(f))).collect();
            for (slot, k) in free_slots.iter().zip(&pick) {
                g[*slot] = choices[*k].clone();
            }
            let ok = dst.ideal_generators.iter().all(|r| src_test.check(&r.substitute(&g)).is_verified())
                && (0..src.generators.len()).all(|x| src_test.check(&images[x].substitute(&g).minus(&src.generator(x))).is_verified())
                && (0..dst.generators.len()).all(|y| dst_test.check(&g[y].substitute(images).minus(&dst.generator(y))).is_verified());
            if ok {
                let text: Vec<String> =
                    (0..dst.generators.len()).map(|y| format!("{} ↦ {}", dst.generators[y], g[y].render(&src.generators))).collect();
                return Ok(Verdict::with(
                    Status::Verified,
                    format!("H₀: inverse {} verified within budget {}", text.join(", "), budgets.ideal),
                ));
            }
            // next assignment
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < choices.len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }
    // an isomorphism reflects units; units of a free algebra are scalars
    let one = NcPolynomial::one(f);
    if src.oracle == Some(AlgebraOracle::Free) {
        for (x, img) in images.iter().enumerate() {
            if let Some(w) = find_unit_inverse(dst, &dst_test, &img.plus(&one)) {
                return Ok(Verdict::with(
                    Status::Refuted,
                    format!(
                        "H₀: {}+1 has the inverse {}+1 in the target, but {}+1 is not a unit of the free source algebra",
                        img.render(&dst.generators),
                        dst.generators[w],
                        src.generators[x]
                    ),
                ));
            }
        }
    }
    Ok(Verdict::with(
        Status::Inconclusive,
        format!("H₀: {tried} candidate inverses failed within budget {}, no invertibility witness", budgets.ideal),
    ))
}

fn h0_images(src: &FreeDgAlgebra, dst: &FreeDgAlgebra, map: &FreeDgMap) -> Vec<NcPolynomial> {
    let mut slot = vec![0u32; dst.generators.len()];
    for (k, g) in dst.degree0_generators().iter().enumerate() {
        slot[*g] = k as u32;
    }
    src.degree0_generators()
        .iter()
        .map(|g| {
            let mut p = NcPolynomial::zero(src.field);
            for (m, c) in map.images[*g].terms() {
                p.add_term(Monomial { degree: 0, word: m.word.iter().map(|x| slot[*x as usize]).collect() }, c.clone());
            }
            p
        })
        .collect()
}

/// Ω-quasi-isomorphism test between free dg algebras: induced maps on the
/// exact part of the slices, plus `H₀` presentations when there are
/// degree-0 generators.
pub fn check_omega_qi_algebras(
    src: &FreeDgAlgebra,
    dst: &FreeDgAlgebra,
    map: &FreeDgMap,
    t: TruncationSpec,
    budgets: Budgets,
) -> Result<Verdict> {
    map.check(src, dst)?;
    let degree_zero = !src.degree0_generators().is_empty() || !dst.degree0_generators().is_empty();
    // with degree-0 generators no degree of a length-bounded window is exact,
    // so the window is only evidence and stops at degree 1
    let top = if degree_zero { t.max_degree.min(1) } else { t.max_degree };
    let wide = TruncationSpec { max_degree: top + 1, ..t };
    let (s, d) = (cobar_complex_slice(src, wide)?, cobar_complex_slice(dst, wide)?);
    let mut ind = induced_on_homology(&s.complex, &d.complex, &map.slice_map(&s, &d))?;
    ind.truncate(top + 1);
    let window = window_verdict(&ind, "cobar window");
    if !degree_zero || window.is_refuted() {
        return Ok(window);
    }
    let (hs, hd) = (h0_presentation(src)?, h0_presentation(dst)?);
    let h0 = h0_isomorphism(&hs, &hd, &h0_images(src, dst, map), budgets)?;
    let mut v = Verdict::new(h0.status);
    v.evidence.extend(h0.evidence);
    v.note(format!("H₀ presentations {} and {}", hs.render(), hd.render()));
    v.evidence.extend(window.evidence);
    if v.is_verified() {
        v.note("degrees ≥ 1 are compared on length-truncated windows only; verified at the H₀ level");
    }
    Ok(v)
}

/// R-homology is necessary for every notion checked here.
fn with_chain_condition(mut v: Verdict, chains: Verdict) -> Verdict {
    if chains.is_refuted() {
        v.status = Status::Refuted;
    } else if v.is_verified() && !chains.is_verified() {
        v.status = Status::Inconclusive;
    }
    v.evidence.extend(chains.evidence);
    v
}

fn coalgebra_level(t: TruncationSpec) -> usize {
    t.max_degree + 3
}

/// `Ω(N_*(F[f]))` on a simplicial map.
pub fn check_omega_qi(f: &SSetMap, field: Field, t: TruncationSpec, budgets: Budgets) -> Result<Verdict> {
    let level = coalgebra_level(t);
    let (src, dst, g) = chains_pair(f, field, level - 1)?;
    let (a, b) = (cobar(&src)?, cobar(&dst)?);
    let m = cobar_map(&g, &src, &dst)?;
    let v = check_omega_qi_algebras(&a, &b, &m, t, budgets)?;
    let chains = window_verdict(&chain_window(&src, &dst, &g, t.max_degree)?, &format!("chains over {field}"));
    Ok(with_chain_condition(v, chains))
}

/// `Ω(N_*(f))` for a map of simplicial coalgebras.
pub fn check_omega_qi_coalgebra(f: &CoalgebraMap, t: TruncationSpec, budgets: Budgets) -> Result<Verdict> {
    let level = coalgebra_level(t).min(f.truncation());
    let f = f.at_level(level)?;
    let (src, dst) = (normalized_chains(&f.source)?, normalized_chains(&f.target)?);
    let g = coalgebra_chain_map(&f, &src, &dst)?;
    let (a, b) = (cobar(&src)?, cobar(&dst)?);
    let m = cobar_map(&g, &src, &dst)?;
    let v = check_omega_qi_algebras(&a, &b, &m, t, budgets)?;
    let top = t.max_degree.min(level.saturating_sub(1));
    let chains = window_verdict(&chain_window(&src, &dst, &g, top)?, "normalized chains");
    Ok(with_chain_condition(v, chains))
}

/// `N_*(f)` is a quasi-isomorphism in degrees `≤ level`, for a map of
/// simplicial coalgebras known through `level + 1`.
pub fn check_qi_coalgebra(f: &CoalgebraMap, level: usize) -> Result<Verdict> {
    let top = (level + 1).min(f.truncation());
    let f = f.at_level(top)?;
    let (src, dst) = (normalized_chains(&f.source)?, normalized_chains(&f.target)?);
    let g = coalgebra_chain_map(&f, &src, &dst)?;
    Ok(window_verdict(&chain_window(&src, &dst, &g, level.min(top))?, "normalized chains"))
}

/// Ω̂ through the simplicial localization `K_ι(S^♯) → K_ι(S'^♯)`.
pub fn check_omegahat_qi(f: &SSetMap, field: Field, t: TruncationSpec, budgets: Budgets) -> Result<Verdict> {
    let level = coalgebra_level(t);
    let (_, _, kf) = localization_map(f, level)?;
    let mut v = check_omega_qi(&kf, field, t, budgets)?;
    v.evidence.insert(0, format!("via {} : {} → {}", kf.name, kf.source.name, kf.target.name));
    Ok(v)
}

/// Ω̂ through `localized_cobar` on both sides for a map of set-like coalgebras.
pub fn check_omegahat_qi_coalgebra(f: &CoalgebraMap, t: TruncationSpec, budgets: Budgets) -> Result<Verdict> {
    let level = coalgebra_level(t).min(f.truncation());
    let f = f.at_level(level)?;
    let field = f.source.field;
    let (sn, dn) = (normalized_chains(&f.source)?, normalized_chains(&f.target)?);
    let g = coalgebra_chain_map(&f, &sn, &dn)?;
    let base = cobar_map(&g, &sn, &dn)?;
    let (sreps, dreps) = (monoidlike_reps(&f.source, None)?, monoidlike_reps(&f.target, None)?);
    let a = localized_cobar(&f.source, &sreps, level)?;
    let b = localized_cobar(&f.target, &dreps, level)?;
    let (na, nb) = (cobar(&sn)?.generators.len(), cobar(&dn)?.generators.len());
    let per_copy = if sreps.is_empty() { 0 } else { (a.generators.len() - na) / sreps.len() };
    let mut images = base.images.clone();
    for p in &sreps {
        let q = base.apply(p);
        let one = NcPolynomial::one(field);
        match dreps.iter().position(|r| *r == q) {
            Some(j) => {
                for k in 0..per_copy {
                    let id = nb + j * per_copy + k;
                    images.push(NcPolynomial::generator(field, id as u32, b.generators[id].degree));
                }
            }
            None if q == one => images.extend((0..per_copy).map(|_| NcPolynomial::zero(field))),
            None => return Err(Error::Unsupported(format!("representative image {} is not a representative", q.render(&b.names())))),
        }
    }
    let m = FreeDgMap { name: format!("Ω̂({})", f.name), images };
    let v = check_omega_qi_algebras(&a, &b, &m, t, budgets)?;
    let top = t.max_degree.min(level.saturating_sub(1));
    let chains = window_verdict(&chain_window(&sn, &dn, &g, top)?, "normalized chains");
    Ok(with_chain_condition(v, chains))
}

/// Both routes of the π₁-R-equivalence check and their combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi1Verdict {
    pub verdict: Verdict,
    pub presentation_route: Verdict,
    pub algebraic_route: Verdict,
}

fn edge_image(f: &SSetMap, e: usize) -> Result<GWord> {
    let r = f.apply(&SimplexRef::nondegenerate(SimplexId::new(1, e)))?;
    Ok(if r.is_degenerate() { Vec::new() } else { vec![r.base.index as i32 + 1] })
}

fn map_word(f: &SSetMap, w: &[i32]) -> Result<GWord> {
    let mut out = Vec::new();
    for x in w {
        let img = edge_image(f, (x.unsigned_abs() - 1) as usize)?;
        if *x > 0 {
            out.extend(img);
        } else {
            out.extend(img.iter().rev().map(|y| -y));
        }
    }
    Ok(out)
}

/// Route (a): fundamental groups and, when finite, universal covers.
fn presentation_route(f: &SSetMap, field: Field, level: usize, budgets: Budgets) -> Result<Verdict> {
    let f2 = f.at_level(level.max(2) + 1).or_else(|_| f.at_level(level.max(2)))?;
    let (ps, pt): (Pi1, Pi1) = (pi1_presentation(&f2.source)?, pi1_presentation(&f2.target)?);
    let gs = FiniteGroup::enumerate(&ps.presentation, budgets.cosets);
    let gt = FiniteGroup::enumerate(&pt.presentation, budgets.cosets);
    let mut v = Verdict::new(Status::Inconclusive);
    v.note(format!(
        "π₁ presentations ⟨{} | {}⟩ and ⟨{} | {}⟩",
        ps.simplified.generators.join(", "),
        ps.simplified.relators.iter().map(|r| ps.simplified.render(r)).collect::<Vec<_>>().join(", "),
        pt.simplified.generators.join(", "),
        pt.simplified.relators.iter().map(|r| pt.simplified.render(r)).collect::<Vec<_>>().join(", ")
    ));
    match (&gs, &gt) {
        (Some(a), Some(b)) => {
            let words = a.words();
            let phi: Vec<usize> = words.iter().map(|w| map_word(&f2, w).map(|u| b.eval(&u))).collect::<Result<_>>()?;
            let mut seen = phi.clone();
            seen.sort_unstable();
            seen.dedup();
            let covers = || -> Result<Verdict> {
                let cs = certified_universal_cover(&f2.source, budgets.cosets, level + 1)?;
                let ct = certified_universal_cover(&f2.target, budgets.cosets, level + 1)?;
                let cm = cover_map(f, &cs, &ct, &phi, level + 1)?;
                check_r_equivalence(&cm, field, level)
            };
            if a.order() != b.order() || seen.len() != a.order() {
                v.status = Status::Refuted;
                v.note(format!("π₁ has order {} and {}; induced map has image of size {}", a.order(), b.order(), seen.len()));
                // the lift still exists and its cover homology is reported alongside
                if let Ok(cv) = covers() {
                    v.evidence.extend(cv.evidence.into_iter().map(|e| format!("universal covers: {e}")));
                }
                return Ok(v);
            }
            v.note(format!("π₁ ≅ group of order {} on both sides under the induced map", a.order()));
            let cv = covers()?;
            v.status = cv.status;
            v.evidence.extend(cv.evidence.into_iter().map(|e| format!("universal covers: {e}")));
        }
        (Some(a), None) | (None, Some(a)) => {
            let other = if gs.is_some() { &pt } else { &ps };
            if other.free_rank().is_some_and(|r| r > 0) {
                v.status = Status::Refuted;
                v.note(format!("one π₁ has order {}, the other is free of rank {}", a.order(), other.free_rank().unwrap_or(0)));
            } else {
                v.note(format!("one π₁ not enumerated within {} cosets", budgets.cosets));
            }
        }
        (None, None) => match (ps.free_rank(), pt.free_rank()) {
            (Some(r), Some(s)) if r != s => {
                v.status = Status::Refuted;
                v.note(format!("π₁ free of ranks {r} and {s}"));
            }
            (Some(r), Some(_)) => {
                // survivors of the Tietze pass are original edges
                let survivors: Vec<usize> = (0..ps.presentation.generators.len())
                    .filter(|e| ps.substitution[*e].len() == 1 && ps.substitution[*e][0] > 0)
                    .filter(|e| ps.simplified.generators.contains(&ps.presentation.generators[*e]))
                    .collect();
                let mut hit = vec![false; r];
                let mut signed_perm = survivors.len() == r;
                for e in &survivors {
                    let img = pt.to_simplified(&edge_image(&f2, *e)?);
                    if img.len() == 1 && !hit[(img[0].unsigned_abs() - 1) as usize] {
                        hit[(img[0].unsigned_abs() - 1) as usize] = true;
                    } else {
                        signed_perm = false;
                    }
                }
                if signed_perm {
                    v.note(format!("π₁ free of rank {r}; induced map permutes free generators up to inversion"));
                    v.note("universal cover is infinite; cover homology not computed");
                } else {
                    v.note("π₁ free of equal rank; induced map not recognised as an isomorphism");
                }
            }
            _ => v.note(format!("π₁ not certified finite within {} cosets and not recognised as free", budgets.cosets)),
        },
    }
    Ok(v)
}

/// Route (a) through presentations and covers, route (b) through Ω̂.
pub fn check_pi1_r_equivalence(f: &SSetMap, field: Field, level: usize, t: TruncationSpec, budgets: Budgets) -> Result<Pi1Verdict> {
    let a = presentation_route(f, field, level, budgets)?;
    let b = check_omegahat_qi(f, field, t, budgets)?;
    let contradictory = (a.is_verified() && b.is_refuted()) || (a.is_refuted() && b.is_verified());
    if contradictory {
        return Err(Error::InternalConsistency(format!(
            "π₁ routes disagree on {}: presentation route {}, algebraic route {}",
            f.name, a.status, b.status
        )));
    }
    let status = if a.is_refuted() || b.is_refuted() {
        Status::Refuted
    } else if a.is_verified() || b.is_verified() {
        Status::Verified
    } else {
        Status::Inconclusive
    };
    let mut verdict = Verdict::new(status);
    verdict.note(format!("presentation route: {}", a.status));
    verdict.note(format!("algebraic route: {}", b.status));
    Ok(Pi1Verdict { verdict, presentation_route: a, algebraic_route: b })
}

/// `φ: π(F[X]) ⇄ 𝔽[τ(X)] : ψ` are mutually inverse bialgebra maps on generators.
pub fn verify_phi_psi(x: &crate::simplicial::SSet, field: Field, budget: usize) -> Result<Verdict> {
    let src = fundamental_bialgebra(&chains_coalgebra(x, field, 2)?)?;
    let dst = tau_algebra(x, field)?;
    if dst.oracle.is_none() {
        return Ok(Verdict::with(Status::Inconclusive, "no normal form oracle for the homotopy monoid"));
    }
    let k = src.generators.len();
    let (phi, psi) = (phi_images(field, k), psi_images(field, k));
    let m1 = presentation_map_check(&src, &dst, &phi, budget)?;
    let m2 = presentation_map_check(&dst, &src, &psi, budget)?;
    let (ts, td) = (IdealTest::new(&src, budget), IdealTest::new(&dst, budget));
    let mut status = m1.algebra.status.and(m2.algebra.status);
    let mut v = Verdict::new(Status::Verified);
    v.note(format!("{} = {}", src.name, src.render()));
    v.note(format!("{} = {}", dst.name, dst.render()));
    for (what, m) in [("φ", &m1), ("ψ", &m2)] {
        let b = m.bialgebra.clone().unwrap_or_else(|| Verdict::with(Status::Inconclusive, "no coproduct data"));
        status = status.and(b.status);
        v.note(format!("{what}: algebra map {}, bialgebra map {}", m.algebra.status, b.status));
        v.evidence.extend(m.algebra.evidence.iter().chain(&b.evidence).map(|e| format!("{what}: {e}")));
    }
    for g in 0..k {
        let back = phi[g].substitute(&psi).minus(&src.generator(g));
        let there = psi[g].substitute(&phi).minus(&dst.generator(g));
        let (a, b) = (ts.check(&back), td.check(&there));
        status = status.and(a.status).and(b.status);
        v.note(format!("ψφ({}) {}; φψ({}) {}", src.generators[g], a.status, dst.generators[g], b.status));
    }
    v.status = status;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::chain_homology;
    use crate::simplicial::builtins::{iota_s1, point, rp2, s1, s1_localized, sphere2_min, wedge};

    const Q: Field = Field::Rationals;

    fn b() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn r_equivalence() {
        assert!(check_r_equivalence(&SSetMap::identity(&rp2(4)), Q, 3).unwrap().is_verified());
        assert!(check_r_equivalence(&iota_s1(5), Q, 3).unwrap().is_verified());
        let c = check_r_equivalence(&SSetMap::collapse(&sphere2_min(4)), Q, 3).unwrap();
        assert!(c.is_refuted());
        assert!(c.evidence.iter().any(|e| e.contains("degree 2")));
        assert!(check_r_equivalence(&SSetMap::collapse(&rp2(4)), Q, 2).unwrap().is_verified());
        assert!(check_r_equivalence(&SSetMap::collapse(&rp2(4)), Field::Prime(2), 2).unwrap().is_refuted());
    }

    #[test]
    fn coalgebra_route_agrees_with_chains() {
        for (f, field) in [(iota_s1(5), Q), (SSetMap::collapse(&rp2(4)), Field::Prime(2)), (SSetMap::collapse(&sphere2_min(4)), Q)] {
            let c = CoalgebraMap::from_sset_map(&f, field, 4).unwrap();
            let a = check_qi_coalgebra(&c, 3).unwrap();
            let b = check_r_equivalence(&f, field, 3).unwrap();
            assert_eq!(a.status, b.status, "{}", f.name);
        }
    }

    #[test]
    fn omega_on_simply_connected_and_circle() {
        let id = SSetMap::identity(&sphere2_min(9));
        let v = check_omega_qi(&id, Q, TruncationSpec::degree(6), b()).unwrap();
        assert!(v.is_verified(), "{:?}", v);
        let v = check_omega_qi(&SSetMap::identity(&s1(5)), Q, TruncationSpec::bounded(2, 3), b()).unwrap();
        assert!(v.is_verified(), "{:?}", v);
        let v = check_omega_qi(&iota_s1(6), Q, TruncationSpec::bounded(2, 3), b()).unwrap();
        assert!(v.is_refuted(), "{:?}", v);
        assert!(v.evidence.iter().any(|e| e.contains("not a unit of the free")));
    }

    #[test]
    fn omegahat_separates_iota() {
        let t = TruncationSpec::bounded(1, 3);
        let v = check_omegahat_qi(&iota_s1(5), Q, t, b()).unwrap();
        assert!(v.is_verified(), "{:?}", v);
        let c = CoalgebraMap::from_sset_map(&iota_s1(5), Q, 5).unwrap();
        let w = check_omegahat_qi_coalgebra(&c, t, b()).unwrap();
        assert!(w.is_verified(), "{:?}", w);
        let r = check_omegahat_qi(&SSetMap::collapse(&sphere2_min(6)), Q, TruncationSpec::degree(2), b()).unwrap();
        assert!(r.is_refuted());
    }

    #[test]
    fn pi1_routes() {
        let t = TruncationSpec::bounded(1, 3);
        let id = check_pi1_r_equivalence(&SSetMap::identity(&rp2(4)), Field::Prime(3), 2, t, b()).unwrap();
        assert!(id.verdict.is_verified(), "{:?}", id);
        assert!(id.presentation_route.is_verified());
        let cover = certified_universal_cover(&rp2(4), 100, 3).unwrap();
        assert_eq!(chain_homology(&cover.cover, Field::Prime(3), 2).unwrap().numbers(), vec![1, 0, 1]);
        let col = check_pi1_r_equivalence(&SSetMap::collapse(&rp2(4)), Q, 2, t, b()).unwrap();
        assert!(col.verdict.is_refuted());
        assert!(col.presentation_route.is_refuted());
        let c2 = check_pi1_r_equivalence(&SSetMap::collapse(&rp2(4)), Field::Prime(2), 2, t, b()).unwrap();
        assert!(c2.presentation_route.is_refuted());
        assert!(c2.presentation_route.evidence.iter().any(|e| e.starts_with("universal covers")), "{:?}", c2);
        let io = check_pi1_r_equivalence(&iota_s1(5), Field::Prime(2), 2, t, b()).unwrap();
        assert!(io.verdict.is_verified(), "{:?}", io);
        assert!(io.algebraic_route.is_verified());
        let sp = check_pi1_r_equivalence(&SSetMap::collapse(&sphere2_min(5)), Q, 2, TruncationSpec::degree(2), b()).unwrap();
        assert!(sp.verdict.is_refuted());
    }

    #[test]
    fn wedge_with_a_sphere_is_not_an_equivalence() {
        let w = wedge(&[s1(5), sphere2_min(5)], 5).unwrap();
        let f = crate::simplicial::builtins::wedge_inclusion(&[s1(5), sphere2_min(5)], 0, 5).unwrap();
        assert_eq!(f.target.counts(), w.counts());
        let v = check_omegahat_qi(&f, Q, TruncationSpec::bounded(2, 2), b()).unwrap();
        assert!(v.is_refuted(), "{:?}", v);
    }

    #[test]
    fn phi_psi_on_fixtures() {
        for f in [Q, Field::Prime(2)] {
            for x in [s1(2), s1_localized(2), rp2(2), point(2)] {
                let v = verify_phi_psi(&x, f, 6).unwrap();
                assert!(v.is_verified(), "{} {f}: {:?}", x.name, v);
            }
        }
    }
}
