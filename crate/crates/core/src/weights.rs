//! Signed weight multisets: the weights of `V`, of the adjoint
//! representation, and their difference, together with slicing along a
//! cocharacter and line-by-line symmetry tests.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::ratlin::{pair_int, rat, IntVec, RatVec};
use crate::root_datum::RootDatum;
use crate::{Error, Result};

/// Weights with integer (possibly negative) multiplicities. Zero
/// multiplicities are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignedWeightMultiset {
    entries: BTreeMap<IntVec, i64>,
}

impl SignedWeightMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (IntVec, i64)>) -> Self {
        let mut m = Self::new();
        for (w, mult) in entries {
            m.add(w, mult);
        }
        m
    }

    pub fn add(&mut self, weight: IntVec, mult: i64) {
        if mult == 0 {
            return;
        }
        let entry = self.entries.entry(weight).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            let key = self
                .entries
                .iter()
                .find(|(_, &m)| m == 0)
                .map(|(k, _)| k.clone())
                .expect("just inserted");
            self.entries.remove(&key);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IntVec, i64)> {
        self.entries.iter().map(|(w, &m)| (w, m))
    }

    pub fn get(&self, weight: &[i64]) -> i64 {
        self.entries.get(weight).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Total count with multiplicities (absolute values).
    pub fn total_abs(&self) -> u64 {
        self.entries.values().map(|m| m.unsigned_abs()).sum()
    }

    pub fn negated(&self) -> Self {
        Self::from_entries(
            self.entries
                .iter()
                .map(|(w, &m)| (w.iter().map(|&x| -x).collect(), m)),
        )
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (w, mult) in other.iter() {
            m.add(w.clone(), mult);
        }
        m
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut m = self.clone();
        for (w, mult) in other.iter() {
            m.add(w.clone(), -mult);
        }
        m
    }

    /// Equal to its negation as a multiset.
    pub fn is_symmetric(&self) -> bool {
        self == &self.negated()
    }

    /// All multiplicities strictly positive (a genuine representation).
    pub fn is_representation(&self) -> Result<()> {
        for (w, m) in self.iter() {
            if m <= 0 {
                return Err(Error::NotRepresentation {
                    weight: w.clone(),
                    mult: m,
                });
            }
        }
        Ok(())
    }

    /// Stability under the Weyl group of `rd`.
    pub fn is_weyl_stable(&self, rd: &RootDatum) -> bool {
        rd.weyl().iter().all(|pi| {
            self.iter()
                .all(|(w, m)| self.get(&pi.apply_weight(w)) == m)
        })
    }

    /// Image under a Weyl element.
    pub fn apply_weyl(&self, pi: &crate::root_datum::WeylElement) -> Self {
        Self::from_entries(self.iter().map(|(w, m)| (pi.apply_weight(w), m)))
    }

    /// Distinct primitive directions spanned by the nonzero support weights,
    /// sign-canonicalized (first nonzero coordinate positive).
    pub fn primitive_directions(&self) -> Vec<IntVec> {
        let mut dirs: Vec<IntVec> = Vec::new();
        for (w, _) in self.iter() {
            if let Some(d) = primitive_direction(w) {
                if !dirs.contains(&d) {
                    dirs.push(d);
                }
            }
        }
        dirs.sort();
        dirs
    }

    /// Quasi-symmetry: on every rational line through the origin spanned by a
    /// support weight, the multiplicity-weighted sum of weights vanishes.
    /// Returns the primitive direction of the first violating line.
    pub fn quasi_symmetry_violation(&self) -> Option<(IntVec, IntVec)> {
        let rank = self.rank()?;
        for dir in self.primitive_directions() {
            let mut sum = vec![0i64; rank];
            for (w, m) in self.iter() {
                if primitive_direction(w).as_ref() == Some(&dir) {
                    for (s, &x) in sum.iter_mut().zip(w) {
                        *s += m * x;
                    }
                }
            }
            if sum.iter().any(|&x| x != 0) {
                return Some((dir, sum));
            }
        }
        None
    }

    pub fn is_quasi_symmetric(&self) -> bool {
        self.quasi_symmetry_violation().is_none()
    }

    /// Ambient rank read off the first entry; `None` when empty.
    pub fn rank(&self) -> Option<usize> {
        self.entries.keys().next().map(|w| w.len())
    }
}

/// `w / gcd(w)` with canonical sign; `None` for the zero vector.
pub fn primitive_direction(w: &[i64]) -> Option<IntVec> {
    let gcd = w.iter().fold(0i64, |g, &x| g.gcd(&x));
    if gcd == 0 {
        return None;
    }
    let mut v: IntVec = w.iter().map(|&x| x / gcd).collect();
    if let Some(first) = v.iter().find(|&&x| x != 0) {
        if *first < 0 {
            v = v.iter().map(|&x| -x).collect();
        }
    }
    Some(v)
}

/// Weight multiset of the adjoint representation: every root once, plus the
/// zero weight with multiplicity `rank` (the Cartan).
pub fn adjoint_multiset(rd: &RootDatum) -> SignedWeightMultiset {
    let mut m = SignedWeightMultiset::new();
    for rp in rd.roots() {
        m.add(rp.root.clone(), 1);
    }
    m.add(vec![0; rd.rank()], rd.rank() as i64);
    m
}

/// `wt(V) - wt(g)`, the signed multiset governing the weight polytope.
/// Zero weights are retained for bookkeeping; they never affect polytopes
/// or half-sums.
pub fn vg_multiset(v: &SignedWeightMultiset, rd: &RootDatum) -> Result<SignedWeightMultiset> {
    v.is_representation()?;
    Ok(v.difference(&adjoint_multiset(rd)))
}

/// Partition of a multiset by the sign of the pairing against `lambda`:
/// `(fixed, positive, negative)`. Invariant under positive rescaling of
/// `lambda`.
pub fn lambda_slice(
    m: &SignedWeightMultiset,
    lambda: &RatVec,
) -> (
    SignedWeightMultiset,
    SignedWeightMultiset,
    SignedWeightMultiset,
) {
    let mut fixed = SignedWeightMultiset::new();
    let mut positive = SignedWeightMultiset::new();
    let mut negative = SignedWeightMultiset::new();
    for (w, mult) in m.iter() {
        let p = pair_int(lambda, w);
        if p.is_zero() {
            fixed.add(w.clone(), mult);
        } else if p.is_positive() {
            positive.add(w.clone(), mult);
        } else {
            negative.add(w.clone(), mult);
        }
    }
    (fixed, positive, negative)
}

/// Half the multiplicity-weighted sum of the positive slice.
pub fn half_positive_sum(vg: &SignedWeightMultiset, lambda: &RatVec) -> RatVec {
    let rank = lambda.len();
    let mut sum = RatVec::zeros(rank);
    for (w, mult) in vg.iter() {
        if pair_int(lambda, w).is_positive() {
            sum = &sum + &RatVec::from_ints(w).scale(&rat(mult, 1));
        }
    }
    sum.scale(&rat(1, 2))
}

/// A sub-multiset class of a representation multiset: `k_v` copies chosen
/// from each weight `v` of multiplicity `m_v`, counted `prod C(m_v, k_v)`
/// times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submultiset {
    /// Chosen weights with their selection counts (only nonzero counts).
    pub chosen: Vec<(IntVec, u32)>,
    /// Sum of the chosen weights with multiplicity.
    pub sum: IntVec,
    /// Number of elements chosen, with multiplicity.
    pub size: u32,
    /// Number of distinct selections giving this class.
    pub count: u64,
}

fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * u64::from(n - i) / u64::from(i + 1);
    }
    acc
}

/// All sub-multiset classes of `m` (which must be a representation
/// multiset), in a deterministic order. The `cap` bounds the total number
/// of elements counted with multiplicity; `rank` is the ambient rank, needed
/// when `m` is empty.
pub fn submultisets(m: &SignedWeightMultiset, cap: u64, rank: usize) -> Result<Vec<Submultiset>> {
    m.is_representation()?;
    let total = m.total_abs();
    if total > cap {
        return Err(Error::Capacity(format!(
            "sub-multiset enumeration over {total} elements exceeds the cap {cap}"
        )));
    }
    let entries: Vec<(IntVec, u32)> = m.iter().map(|(w, mult)| (w.clone(), mult as u32)).collect();
    let mut out = Vec::new();
    let mut counts = vec![0u32; entries.len()];
    loop {
        let mut chosen = Vec::new();
        let mut sum = vec![0i64; rank];
        let mut size = 0u32;
        let mut count = 1u64;
        for (i, &k) in counts.iter().enumerate() {
            let (w, mult) = &entries[i];
            count *= binomial(*mult, k);
            if k > 0 {
                chosen.push((w.clone(), k));
                size += k;
                for (s, &x) in sum.iter_mut().zip(w) {
                    *s += i64::from(k) * x;
                }
            }
        }
        out.push(Submultiset {
            chosen,
            sum,
            size,
            count,
        });
        // odometer over selection counts
        let mut i = 0;
        loop {
            if i == entries.len() {
                return Ok(out);
            }
            counts[i] += 1;
            if counts[i] <= entries[i].1 {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}
