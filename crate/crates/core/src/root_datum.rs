//! Root data, Weyl groups, dominance, the rho-shifted action, and Levi
//! subgroups.
//!
//! A [`RootDatum`] is user-supplied (roots plus coroots plus a choice of
//! simple roots) with the Weyl group generated eagerly at construction,
//! under a size cap. Presets cover products of general linear groups and
//! tori, which is everything the bundled examples exercise.

use std::collections::BTreeSet;

use crate::ratlin::{kernel_basis, pair_int, rat, rint, IntVec, RatMat, RatVec};
use crate::sod::QuadraticNorm;
use crate::{Error, Result};
use num_traits::{Signed, Zero};

/// Default cap on the generated Weyl group size.
pub const DEFAULT_WEYL_CAP: usize = 10080;

/// A root together with its coroot, both with integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootPair {
    pub root: IntVec,
    pub coroot: IntVec,
}

/// An element of the Weyl group, acting on both lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on the character lattice, row-major `rank x rank`.
    char_matrix: Vec<IntVec>,
    /// Action on the cocharacter lattice (inverse transpose of the above).
    cochar_matrix: Vec<IntVec>,
    /// Word length in simple reflections.
    pub length: usize,
}

impl WeylElement {
    fn identity(rank: usize) -> Self {
        let id: Vec<IntVec> = (0..rank)
            .map(|i| (0..rank).map(|j| i64::from(i == j)).collect())
            .collect();
        WeylElement {
            char_matrix: id.clone(),
            cochar_matrix: id,
            length: 0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.char_matrix
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    pub fn apply_weight(&self, w: &[i64]) -> IntVec {
        self.char_matrix
            .iter()
            .map(|row| row.iter().zip(w).map(|(&m, &x)| m * x).sum())
            .collect()
    }

    pub fn apply_rat(&self, w: &RatVec) -> RatVec {
        RatVec(
            self.char_matrix
                .iter()
                .map(|row| row.iter().zip(&w.0).map(|(&m, x)| rint(m) * x).sum())
                .collect(),
        )
    }

    pub fn apply_cochar(&self, lambda: &RatVec) -> RatVec {
        RatVec(
            self.cochar_matrix
                .iter()
                .map(|row| row.iter().zip(&lambda.0).map(|(&m, x)| rint(m) * x).sum())
                .collect(),
        )
    }

    /// Cocharacter-side matrix as a rational matrix.
    pub fn cochar_mat(&self) -> RatMat {
        RatMat::from_int_rows(&self.cochar_matrix).expect("square by construction")
    }

    fn key(&self) -> Vec<i64> {
        self.char_matrix.concat()
    }
}

/// Subset of simple roots together with the roots of the Levi it generates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviType {
    /// Indices into the simple-root list of the datum.
    pub simple_subset: Vec<usize>,
    /// Indices into the root list of all roots lying in the span.
    pub root_indices: Vec<usize>,
}

/// Root datum with eagerly generated Weyl group. Immutable after
/// construction; all queries are pure.
#[derive(Clone, Debug)]
pub struct RootDatum {
    rank: usize,
    roots: Vec<RootPair>,
    /// Indices of the simple roots within `roots`.
    simple: Vec<usize>,
    /// Indices of the positive roots within `roots`.
    positive: Vec<usize>,
    weyl: Vec<WeylElement>,
    rho: RatVec,
}

impl RootDatum {
    pub fn new(rank: usize, roots: Vec<RootPair>, simple: Vec<usize>) -> Result<Self> {
        Self::with_cap(rank, roots, simple, DEFAULT_WEYL_CAP)
    }

    pub fn with_cap(
        rank: usize,
        roots: Vec<RootPair>,
        simple: Vec<usize>,
        weyl_cap: usize,
    ) -> Result<Self> {
        for rp in &roots {
            if rp.root.len() != rank || rp.coroot.len() != rank {
                return Err(Error::Dimension {
                    expected: rank,
                    got: rp.root.len().max(rp.coroot.len()),
                });
            }
            let p: i64 = rp.root.iter().zip(&rp.coroot).map(|(&a, &b)| a * b).sum();
            if p != 2 {
                return Err(Error::RootDatum(format!(
                    "pairing of root {:?} with its coroot is {p}, expected 2",
                    rp.root
                )));
            }
        }
        let root_set: BTreeSet<IntVec> = roots.iter().map(|r| r.root.clone()).collect();
        if root_set.len() != roots.len() {
            return Err(Error::RootDatum("repeated root".into()));
        }
        for rp in &roots {
            let neg: IntVec = rp.root.iter().map(|&x| -x).collect();
            if !root_set.contains(&neg) {
                return Err(Error::RootDatum(format!(
                    "root {:?} has no negative counterpart",
                    rp.root
                )));
            }
        }
        for &s in &simple {
            if s >= roots.len() {
                return Err(Error::RootDatum(format!("simple index {s} out of range")));
            }
        }
        if !roots.is_empty() && simple.is_empty() {
            return Err(Error::RootDatum(
                "nonempty root list requires a choice of simple roots".into(),
            ));
        }

        // Classify roots as positive or negative combinations of the simple ones.
        let simple_mat = RatMat::from_rows(
            simple
                .iter()
                .map(|&s| RatVec::from_ints(&roots[s].root))
                .collect::<Vec<_>>(),
        )?
        .transpose();
        let mut positive = Vec::new();
        for (i, rp) in roots.iter().enumerate() {
            let coeffs = simple_mat
                .solve(&RatVec::from_ints(&rp.root))
                .ok_or_else(|| {
                    Error::RootDatum(format!(
                        "root {:?} is not in the span of the simple roots",
                        rp.root
                    ))
                })?;
            let nonneg = coeffs.0.iter().all(|c| !c.is_negative());
            let nonpos = coeffs.0.iter().all(|c| !c.is_positive());
            match (nonneg, nonpos) {
                (true, false) => positive.push(i),
                (false, true) => {}
                _ => {
                    return Err(Error::RootDatum(format!(
                        "root {:?} is neither positive nor negative",
                        rp.root
                    )))
                }
            }
        }
        if 2 * positive.len() != roots.len() {
            return Err(Error::RootDatum(
                "positive roots are not half of all roots".into(),
            ));
        }

        // Each reflection must permute the root set.
        for rp in &roots {
            for other in &roots {
                let p: i64 = rp.coroot.iter().zip(&other.root).map(|(&a, &b)| a * b).sum();
                let image: IntVec = other
                    .root
                    .iter()
                    .zip(&rp.root)
                    .map(|(&w, &r)| w - p * r)
                    .collect();
                if !root_set.contains(&image) {
                    return Err(Error::RootDatum(format!(
                        "reflection in {:?} maps {:?} outside the root set",
                        rp.root, other.root
                    )));
                }
            }
        }

        let mut rho = RatVec::zeros(rank);
        for &i in &positive {
            rho = &rho + &RatVec::from_ints(&roots[i].root).scale(&rat(1, 2));
        }

        let weyl = generate_weyl(rank, &roots, &simple, weyl_cap)?;

        Ok(RootDatum {
            rank,
            roots,
            simple,
            positive,
            weyl,
            rho,
        })
    }

    /// Torus of the given rank: no roots, trivial Weyl group.
    pub fn torus(rank: usize) -> Self {
        Self::new(rank, Vec::new(), Vec::new()).expect("torus datum is always valid")
    }

    /// Datum of `GL(d_1) x ... x GL(d_k)` on the product of the standard
    /// maximal tori, rank `sum d_i`.
    pub fn gl_blocks(blocks: &[usize]) -> Result<Self> {
        let rank: usize = blocks.iter().sum();
        let mut roots = Vec::new();
        let mut simple = Vec::new();
        let mut offset = 0;
        for &d in blocks {
            for i in 0..d {
                for j in 0..d {
                    if i == j {
                        continue;
                    }
                    let mut v = vec![0i64; rank];
                    v[offset + i] = 1;
                    v[offset + j] = -1;
                    if i + 1 == j {
                        simple.push(roots.len());
                    }
                    roots.push(RootPair {
                        root: v.clone(),
                        coroot: v,
                    });
                }
            }
            offset += d;
        }
        Self::new(rank, roots, simple)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[RootPair] {
        &self.roots
    }

    pub fn simple_indices(&self) -> &[usize] {
        &self.simple
    }

    pub fn positive_indices(&self) -> &[usize] {
        &self.positive
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &RootPair> {
        self.positive.iter().map(|&i| &self.roots[i])
    }

    /// Elements in breadth-first order: by length, then lexicographic matrix.
    pub fn weyl(&self) -> &[WeylElement] {
        &self.weyl
    }

    pub fn weyl_order(&self) -> usize {
        self.weyl.len()
    }

    /// Half sum of positive roots.
    pub fn rho(&self) -> &RatVec {
        &self.rho
    }

    /// `pair(coroot_alpha, w) >= 0` for every simple root `alpha`.
    pub fn is_dominant(&self, w: &RatVec) -> bool {
        self.simple
            .iter()
            .all(|&s| !pair_int(w, &self.roots[s].coroot).is_negative())
    }

    fn is_strictly_dominant(&self, w: &RatVec) -> bool {
        self.simple
            .iter()
            .all(|&s| pair_int(w, &self.roots[s].coroot).is_positive())
    }

    /// `pair(lambda, alpha) <= 0` for every simple root `alpha`.
    pub fn is_anti_dominant_cochar(&self, lambda: &RatVec) -> bool {
        self.simple
            .iter()
            .all(|&s| !pair_int(lambda, &self.roots[s].root).is_positive())
    }

    /// Unique dominant translate of `w`, with a Weyl element achieving it.
    /// Ties between elements (stabilized weights) resolve to the minimal
    /// length one, then breadth-first order.
    pub fn dominant_representative(&self, w: &RatVec) -> (RatVec, &WeylElement) {
        for pi in &self.weyl {
            let image = pi.apply_rat(w);
            if self.is_dominant(&image) {
                return (image, pi);
            }
        }
        unreachable!("every orbit meets the dominant chamber")
    }

    /// Unique anti-dominant translate of a cocharacter, with a witnessing
    /// element chosen as in [`Self::dominant_representative`].
    pub fn anti_dominant_cochar(&self, lambda: &RatVec) -> (RatVec, &WeylElement) {
        for pi in &self.weyl {
            let image = pi.apply_cochar(lambda);
            if self.is_anti_dominant_cochar(&image) {
                return (image, pi);
            }
        }
        unreachable!("every orbit meets the anti-dominant chamber")
    }

    /// Regularization for the shifted action `pi * w = pi(w + rho) - rho`.
    ///
    /// `None` when `w + rho` lies on a wall (nontrivial stabilizer);
    /// otherwise the unique `pi` making `pi * w` dominant regular, returned
    /// with `pi * w`.
    pub fn dotted_regularize(&self, w: &RatVec) -> Option<(RatVec, &WeylElement)> {
        let shifted = w + &self.rho;
        for &i in &self.positive {
            if pair_int(&shifted, &self.roots[i].coroot).is_zero() {
                return None;
            }
        }
        for pi in &self.weyl {
            let image = pi.apply_rat(&shifted);
            if self.is_strictly_dominant(&image) {
                return Some((&image - &self.rho, pi));
            }
        }
        unreachable!("regular orbits meet the open dominant chamber")
    }

    /// Independent length computation: positive roots sent to negative ones.
    pub fn inversion_count(&self, pi: &WeylElement) -> usize {
        self.positive
            .iter()
            .filter(|&&i| {
                let image = pi.apply_weight(&self.roots[i].root);
                let neg: IntVec = image.iter().map(|&x| -x).collect();
                self.positive.iter().any(|&p| self.roots[p].root == neg)
            })
            .count()
    }

    /// The Levi determined by a subset of simple roots: all roots in their span.
    pub fn levi(&self, simple_subset: &[usize]) -> Result<LeviType> {
        let mut subset: Vec<usize> = simple_subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        for &s in &subset {
            if s >= self.simple.len() {
                return Err(Error::Invalid(format!(
                    "simple-root index {s} out of range (have {})",
                    self.simple.len()
                )));
            }
        }
        let span_rows: Vec<RatVec> = subset
            .iter()
            .map(|&s| RatVec::from_ints(&self.roots[self.simple[s]].root))
            .collect();
        // A root is in the span iff it pairs to zero with the span's annihilator.
        let annihilator = kernel_basis(&span_rows, self.rank)?;
        let root_indices = (0..self.roots.len())
            .filter(|&i| {
                annihilator
                    .iter()
                    .all(|k| pair_int(k, &self.roots[i].root).is_zero())
            })
            .collect();
        Ok(LeviType {
            simple_subset: subset,
            root_indices,
        })
    }

    /// `rho_L` and the positive roots outside the Levi.
    pub fn levi_data(&self, levi: &LeviType) -> (RatVec, Vec<IntVec>) {
        let mut rho_l = RatVec::zeros(self.rank);
        let mut complement = Vec::new();
        for &i in &self.positive {
            if levi.root_indices.contains(&i) {
                rho_l = &rho_l + &RatVec::from_ints(&self.roots[i].root).scale(&rat(1, 2));
            } else {
                complement.push(self.roots[i].root.clone());
            }
        }
        (rho_l, complement)
    }

    /// Positive root indices belonging to the Levi.
    pub fn levi_positive(&self, levi: &LeviType) -> Vec<usize> {
        self.positive
            .iter()
            .copied()
            .filter(|i| levi.root_indices.contains(i))
            .collect()
    }

    /// Dominance with respect to a Levi subgroup.
    pub fn is_levi_dominant(&self, levi: &LeviType, w: &RatVec) -> bool {
        self.levi_positive(levi)
            .iter()
            .all(|&i| !pair_int(w, &self.roots[i].coroot).is_negative())
    }

    pub fn is_levi_invariant(&self, levi: &LeviType, w: &RatVec) -> bool {
        levi.simple_subset.iter().all(|&s| {
            let rp = &self.roots[self.simple[s]];
            // reflection fixes w iff the coroot pairing vanishes
            pair_int(w, &rp.coroot).is_zero()
        })
    }

    /// Slope map and positivity test for the central cone of a Levi.
    ///
    /// `w` must be invariant under the Levi Weyl group. The slope `mu(w)` is
    /// `w` itself in invariant coordinates (inverse of restriction). The flag
    /// is true iff the `norm`-dual pairing of `mu(w)` against every positive
    /// root outside the Levi is strictly positive.
    pub fn slope_and_plus_test(
        &self,
        levi: &LeviType,
        w: &RatVec,
        norm: &QuadraticNorm,
    ) -> Result<(RatVec, bool)> {
        if w.len() != self.rank {
            return Err(Error::Dimension {
                expected: self.rank,
                got: w.len(),
            });
        }
        if !self.is_levi_invariant(levi, w) {
            return Err(Error::NotLeviInvariant(format!(
                "{w} moves under a simple reflection of the Levi"
            )));
        }
        let mu = w.clone();
        let in_plus = self.plus_test_violation(levi, &mu, norm)?.is_none();
        Ok((mu, in_plus))
    }

    /// First positive root outside the Levi whose dual pairing with `w` is
    /// not positive, if any. Used for error reporting.
    pub fn plus_test_violation(
        &self,
        levi: &LeviType,
        w: &RatVec,
        norm: &QuadraticNorm,
    ) -> Result<Option<IntVec>> {
        let (_, complement) = self.levi_data(levi);
        for v in complement {
            if !norm.dual_pairing(&RatVec::from_ints(&v), w)?.is_positive() {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }
}

fn reflection_matrices(rank: usize, rp: &RootPair) -> (Vec<IntVec>, Vec<IntVec>) {
    let char_m: Vec<IntVec> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| i64::from(i == j) - rp.coroot[j] * rp.root[i])
                .collect()
        })
        .collect();
    let cochar_m: Vec<IntVec> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| i64::from(i == j) - rp.root[j] * rp.coroot[i])
                .collect()
        })
        .collect();
    (char_m, cochar_m)
}

fn mat_mul(a: &[IntVec], b: &[IntVec]) -> Vec<IntVec> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Closure of the simple reflections, breadth first by word length with
/// lexicographic matrix order inside each level.
fn generate_weyl(
    rank: usize,
    roots: &[RootPair],
    simple: &[usize],
    cap: usize,
) -> Result<Vec<WeylElement>> {
    let generators: Vec<(Vec<IntVec>, Vec<IntVec>)> = simple
        .iter()
        .map(|&s| reflection_matrices(rank, &roots[s]))
        .collect();
    let identity = WeylElement::identity(rank);
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    seen.insert(identity.key());
    let mut all = vec![identity];
    let mut frontier: Vec<usize> = vec![0];
    let mut length = 0;
    while !frontier.is_empty() {
        length += 1;
        let mut level: Vec<WeylElement> = Vec::new();
        for &idx in &frontier {
            let current = all[idx].clone();
            for (gc, gk) in &generators {
                let char_matrix = mat_mul(gc, &current.char_matrix);
                let key = char_matrix.concat();
                if seen.contains(&key) {
                    continue;
                }
                level.push(WeylElement {
                    cochar_matrix: mat_mul(gk, &current.cochar_matrix),
                    char_matrix,
                    length,
                });
            }
        }
        level.sort_by_key(|e| e.key());
        level.dedup_by_key(|e| e.key());
        frontier = (all.len()..all.len() + level.len()).collect();
        for e in level {
            seen.insert(e.key());
            all.push(e);
            if all.len() > cap {
                return Err(Error::WeylCap { cap });
            }
        }
    }
    Ok(all)
}
