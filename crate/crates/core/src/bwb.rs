//! Formal Borel-Weil-Bott presentations of Hall-induced generators.
//!
//! For an anti-dominant `lambda` and a Levi-dominant weight `w`, the induced
//! generator has a presentation with one term per sub-multiset `J` of the
//! negative slice of `wt(V)` whose shifted weight `w - v_J` is regular for
//! the dotted Weyl action: the term carries the dominant representative
//! `(w - v_J)^+` and the homological shift `|J| - l(pi)`. The differential
//! is not represented; downstream checks only use weights and shifts.

use crate::ratlin::{pair_int, IntVec, RatVec};
use crate::sod::{lambda_data, SodConfig, SUBMULTISET_CAP};
use crate::weights::{lambda_slice, submultisets};
use crate::{Error, Result};
use num_traits::Signed;

/// One graded piece: a dominant weight with a homological shift, counted
/// with multiplicity over the sub-multisets that produce it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BwbTerm {
    pub weight: IntVec,
    pub shift: i64,
    pub multiplicity: u64,
}

/// The formal graded object attached to `(lambda, w)`.
#[derive(Clone, Debug)]
pub struct BwbPresentation {
    pub lambda: RatVec,
    pub source: IntVec,
    /// Terms sorted by (shift, weight).
    pub terms: Vec<BwbTerm>,
    /// Sub-multisets with a dotted-regular shifted weight, counted with
    /// multiplicity.
    pub admissible: u64,
    /// Sub-multisets dropped for lying on a dotted wall.
    pub dropped: u64,
}

fn validate(cfg: &SodConfig, lambda: &RatVec, w: &[i64]) -> Result<()> {
    if !cfg.root_datum().is_anti_dominant_cochar(lambda) {
        return Err(Error::NotAntiDominant(lambda.to_string()));
    }
    let lam = lambda_data(cfg, lambda)?;
    let rd = cfg.root_datum();
    let w_rat = RatVec::from_ints(w);
    for &i in rd.positive_indices() {
        if lam.levi_roots.contains(&i)
            && pair_int(&w_rat, &rd.roots()[i].coroot).is_negative()
        {
            return Err(Error::NotDominant { weight: w.to_vec() });
        }
    }
    Ok(())
}

/// Enumerate all sub-multisets of the negative slice, regularize, and
/// collect terms. Multiplicities follow binomial sub-multiset counting: a
/// weight of multiplicity `m` contributes `C(m, k)` selections of `k`
/// copies.
pub fn presentation(cfg: &SodConfig, lambda: &RatVec, w: &[i64]) -> Result<BwbPresentation> {
    validate(cfg, lambda, w)?;
    let rd = cfg.root_datum();
    let (_, _, negative) = lambda_slice(cfg.representation(), lambda);
    let classes = submultisets(&negative, SUBMULTISET_CAP, cfg.rank())?;
    let mut terms: Vec<BwbTerm> = Vec::new();
    let mut admissible = 0u64;
    let mut dropped = 0u64;
    for class in &classes {
        let shifted: IntVec = w.iter().zip(&class.sum).map(|(&a, &b)| a - b).collect();
        match rd.dotted_regularize(&RatVec::from_ints(&shifted)) {
            None => dropped += class.count,
            Some((w_plus, pi)) => {
                admissible += class.count;
                let weight = w_plus
                    .to_ints()
                    .expect("dotted regularization preserves integrality");
                let shift = i64::from(class.size) - pi.length as i64;
                match terms
                    .iter_mut()
                    .find(|t| t.weight == weight && t.shift == shift)
                {
                    Some(t) => t.multiplicity += class.count,
                    None => terms.push(BwbTerm {
                        weight,
                        shift,
                        multiplicity: class.count,
                    }),
                }
            }
        }
    }
    terms.sort_by(|a, b| a.shift.cmp(&b.shift).then_with(|| a.weight.cmp(&b.weight)));
    Ok(BwbPresentation {
        lambda: lambda.clone(),
        source: w.to_vec(),
        terms,
        admissible,
        dropped,
    })
}

/// Counts of sub-multisets with and without trivial dotted stabilizer.
/// The two add up to `2^(size of the negative slice)`.
pub fn count_admissible(cfg: &SodConfig, lambda: &RatVec, w: &[i64]) -> Result<(u64, u64)> {
    let p = presentation(cfg, lambda, w)?;
    Ok((p.admissible, p.dropped))
}
