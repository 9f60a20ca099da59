//! Monoid-like representatives and the localized cobar construction.

use super::free::{cobar, lambda, FreeDgAlgebra, Generator};
use super::poly::NcPolynomial;
use crate::chains::normalized_chains;
use crate::coalgebra::SimplicialCoalgebra;
use crate::error::{Error, Result};
use crate::simplicial::builtins::s1_localized;

/// Degree-0 cycles to invert. For chains on a simplicial set these are
/// `s⁻¹σ̄ + 1` over the nondegenerate edges; otherwise the caller must
/// supply them.
pub fn monoidlike_reps(c: &SimplicialCoalgebra, supplied: Option<&[NcPolynomial]>) -> Result<Vec<NcPolynomial>> {
    if let Some(reps) = supplied {
        for p in reps {
            check_rep(p)?;
        }
        return Ok(reps.to_vec());
    }
    if !c.is_set_like() {
        return Err(Error::Unsupported(format!("{} is not set-like; monoid-like representatives must be supplied", c.name)));
    }
    let n = normalized_chains(&c.at_level(1)?)?;
    let f = c.field;
    Ok((0..n.dim(1) as u32).map(|g| NcPolynomial::generator(f, g, 0).plus(&NcPolynomial::one(f))).collect())
}

fn check_rep(p: &NcPolynomial) -> Result<()> {
    if !p.terms().all(|(m, _)| m.degree == 0) || !p.constant_term().is_one() {
        return Err(Error::InternalConsistency(format!("representative {} is not a degree-0 element with augmentation 1", p.render(&[]))));
    }
    Ok(())
}

/// `Ω̂(C)`: for each representative `p` a copy of `Ω(F[𝕊¹])` is glued on
/// with its loop generator `u` replaced by `p - 1`.
pub fn localized_cobar(c: &SimplicialCoalgebra, reps: &[NcPolynomial], level: usize) -> Result<FreeDgAlgebra> {
    let base = cobar(&normalized_chains(&c.at_level(level)?)?)?;
    if reps.is_empty() {
        return Ok(base);
    }
    let f = c.field;
    let circle = s1_localized(level);
    let u = circle.find("u").ok_or_else(|| Error::InternalConsistency("loop model has no edge u".into()))?.index;
    let model = lambda(&circle, f, level)?;
    if model.generators[u].degree != 0 {
        return Err(Error::InternalConsistency("loop generator is not in degree 0".into()));
    }
    let mut out = base.clone();
    out.name = format!("Ω̂({})", c.name);
    for (copy, p) in reps.iter().enumerate() {
        check_rep(p)?;
        if p.terms().any(|(m, _)| m.word.iter().any(|g| *g as usize >= base.generators.len())) {
            return Err(Error::InternalConsistency("representative uses unknown generators".into()));
        }
        let mut images = Vec::with_capacity(model.generators.len());
        let start = out.generators.len();
        for (j, g) in model.generators.iter().enumerate() {
            if j == u {
                images.push(p.minus(&NcPolynomial::one(f)));
            } else {
                let id = start + j - usize::from(j > u);
                images.push(NcPolynomial::generator(f, id as u32, g.degree));
            }
        }
        for (j, g) in model.generators.iter().enumerate() {
            if j == u {
                continue;
            }
            let label = if reps.len() == 1 { g.label.clone() } else { format!("{}_{copy}", g.label) };
            out.generators.push(Generator { label, degree: g.degree });
            out.differential.push(model.differential[j].substitute(&images));
            out.augmentation.push(f.zero());
        }
    }
    out.complete_through = match (base.complete_through, model.complete_through) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    out.validate()?;
    Ok(out)
}
