//! The weight polytope of a signed multiset, queried through its support
//! function, plus face enumeration for the dual hyperplane arrangement.
//!
//! The polytope is never built as a vertex list. Membership uses the
//! interval criterion: `u` lies inside iff `pair(r, u) <= U(r)` for every
//! test ray `r`, where `U` is the signed support function. The gap
//! `U(r) - pair(r, u)` is linear on each cone of the arrangement of
//! hyperplanes dual to the generators, so checking the one-dimensional
//! faces (modulo lineality) and the lineality directions is exhaustive.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::ratlin::{
    kernel_basis, pair_int, rat, AffineForm, IntVec, LinearSystem, Rat, RatVec,
};
use crate::weights::SignedWeightMultiset;
use crate::{Error, Result};

/// H-description of the weight polytope of a signed generator multiset.
#[derive(Clone, Debug)]
pub struct WeightPolytope {
    rank: usize,
    generators: SignedWeightMultiset,
    rays: Vec<IntVec>,
    lineality: Vec<IntVec>,
    empty: bool,
}

impl WeightPolytope {
    pub fn new(rank: usize, generators: SignedWeightMultiset) -> Result<Self> {
        if let Some(r) = generators.rank() {
            if r != rank {
                return Err(Error::Dimension {
                    expected: rank,
                    got: r,
                });
            }
        }
        let directions = generators.primitive_directions();
        let lineality = lineality_basis(rank, &directions)?;
        let rays = enumerate_rays(rank, &directions, &lineality)?;
        let mut p = WeightPolytope {
            rank,
            generators,
            rays,
            lineality,
            empty: false,
        };
        p.empty = p
            .rays
            .iter()
            .any(|r| (p.upper_support_int(r) + p.upper_support_int(&negate(r))).is_negative());
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &SignedWeightMultiset {
        &self.generators
    }

    /// Test rays: primitive generators of the one-dimensional arrangement
    /// faces (modulo lineality), both orientations, plus the lineality basis
    /// in both orientations.
    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn lineality_basis(&self) -> &[IntVec] {
        &self.lineality
    }

    /// No point satisfies the interval criterion.
    pub fn is_empty(&self) -> bool {
        self.empty
    }

    /// `U(lambda) = (1/2) sum of mult(v) pair(lambda, v)` over generators
    /// with positive pairing. The lower interval bound is `-U(-lambda)`.
    pub fn upper_support(&self, lambda: &RatVec) -> Rat {
        let mut sum = Rat::zero();
        for (v, mult) in self.generators.iter() {
            let p = pair_int(lambda, v);
            if p.is_positive() {
                sum += p * rat(mult, 1);
            }
        }
        sum / rat(2, 1)
    }

    fn upper_support_int(&self, lambda: &[i64]) -> Rat {
        self.upper_support(&RatVec::from_ints(lambda))
    }

    /// Closed-interval membership of `u` in the polytope shifted by `shift`.
    pub fn member(&self, u: &RatVec, shift: &RatVec) -> bool {
        let x = u - shift;
        self.rays.iter().all(|r| {
            let rv = RatVec::from_ints(r);
            let lhs = crate::ratlin::pair(&rv, &x).expect("rank checked");
            lhs <= self.upper_support(&rv)
        })
    }

    /// All integral points of the polytope shifted by `shift`, in
    /// lexicographic order. A coordinate bounding box comes from the support
    /// values of the standard directions; members are filtered exactly.
    pub fn lattice_points(&self, shift: &RatVec) -> Vec<IntVec> {
        if self.empty || self.rank == 0 {
            return Vec::new();
        }
        let mut lo = Vec::with_capacity(self.rank);
        let mut hi = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let mut e = vec![0i64; self.rank];
            e[i] = 1;
            let up = self.upper_support_int(&e);
            e[i] = -1;
            let down = self.upper_support_int(&e);
            let hi_i = (&shift.0[i] + up).floor().to_integer();
            let lo_i = (&shift.0[i] - down).ceil().to_integer();
            match (i64::try_from(lo_i), i64::try_from(hi_i)) {
                (Ok(l), Ok(h)) => {
                    lo.push(l);
                    hi.push(h);
                }
                _ => return Vec::new(),
            }
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Vec::new();
        }
        let mut out = Vec::new();
        let mut point = lo.clone();
        'scan: loop {
            if self.member(&RatVec::from_ints(&point), shift) {
                out.push(point.clone());
            }
            for i in (0..self.rank).rev() {
                point[i] += 1;
                if point[i] <= hi[i] {
                    continue 'scan;
                }
                point[i] = lo[i];
            }
            break;
        }
        out
    }

    /// Faces of the arrangement of hyperplanes dual to the support weights.
    pub fn enumerate_faces(&self, fm_cap: usize) -> Result<Vec<ArrangementFace>> {
        let arr = Arrangement::build(self.rank, self.generators.primitive_directions(), fm_cap)?;
        Ok(arr.faces)
    }
}

fn negate(v: &[i64]) -> IntVec {
    v.iter().map(|&x| -x).collect()
}

fn lineality_basis(rank: usize, directions: &[IntVec]) -> Result<Vec<IntVec>> {
    let rows: Vec<RatVec> = directions.iter().map(|d| RatVec::from_ints(d)).collect();
    let basis = kernel_basis(&rows, rank)?;
    Ok(basis
        .iter()
        .map(|v| v.primitive().expect("kernel basis vectors are nonzero"))
        .collect())
}

/// Primitive generators of the one-dimensional intersections (modulo the
/// lineality space) of subsets of the dual hyperplanes, both orientations,
/// plus the lineality basis directions.
fn enumerate_rays(
    rank: usize,
    directions: &[IntVec],
    lineality: &[IntVec],
) -> Result<Vec<IntVec>> {
    let ell = lineality.len();
    let mut rays: BTreeSet<IntVec> = BTreeSet::new();
    for l in lineality {
        rays.insert(l.clone());
        rays.insert(negate(l));
    }
    if rank == 0 || rank < ell + 1 {
        return Ok(rays.into_iter().collect());
    }
    let take = rank - ell - 1;
    let in_lineality = |v: &RatVec| -> bool {
        directions
            .iter()
            .all(|d| pair_int(v, d).is_zero())
    };
    let mut chosen = vec![0usize; take];
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    fn subsets_rec(
        start: usize,
        left: usize,
        n: usize,
        chosen: &mut Vec<usize>,
        depth: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if left == 0 {
            out.push(chosen[..depth].to_vec());
            return;
        }
        for i in start..=n.saturating_sub(left) {
            chosen[depth] = i;
            subsets_rec(i + 1, left - 1, n, chosen, depth + 1, out);
        }
    }
    if take == 0 {
        subsets.push(Vec::new());
    } else if directions.len() >= take {
        subsets_rec(0, take, directions.len(), &mut chosen, 0, &mut subsets);
    }
    for subset in subsets {
        let rows: Vec<RatVec> = subset
            .iter()
            .map(|&i| RatVec::from_ints(&directions[i]))
            .collect();
        let kernel = kernel_basis(&rows, rank)?;
        if kernel.len() != ell + 1 {
            continue;
        }
        // lift: first kernel basis vector outside the lineality space
        let Some(lift) = kernel.iter().find(|v| !in_lineality(v)) else {
            continue;
        };
        let prim = lift.primitive().expect("nonzero by construction");
        rays.insert(negate(&prim));
        rays.insert(prim);
    }
    Ok(rays.into_iter().collect())
}

/// A relatively open face of a central hyperplane arrangement, recorded by
/// its sign vector on the (sign-canonical, primitive) normal directions.
#[derive(Clone, Debug)]
pub struct ArrangementFace {
    /// One sign per arrangement direction: -1, 0, or 1.
    pub signs: Vec<i8>,
    /// Basis of the linear span of the face (kernel of the zero-set normals).
    pub span_basis: Vec<RatVec>,
    /// An interior point realizing the sign vector exactly.
    pub witness: RatVec,
}

impl ArrangementFace {
    pub fn dim(&self) -> usize {
        self.span_basis.len()
    }
}

/// Central hyperplane arrangement on the cocharacter side.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub rank: usize,
    /// Primitive sign-canonical normals, sorted.
    pub directions: Vec<IntVec>,
    pub faces: Vec<ArrangementFace>,
}

impl Arrangement {
    /// Depth-first enumeration of realizable sign vectors, exact feasibility
    /// via Fourier-Motzkin at every prefix.
    pub fn build(rank: usize, mut directions: Vec<IntVec>, fm_cap: usize) -> Result<Self> {
        directions.sort();
        directions.dedup();
        let mut faces = Vec::new();
        let mut signs: Vec<i8> = Vec::with_capacity(directions.len());
        build_rec(rank, &directions, fm_cap, &mut signs, &mut faces)?;
        Ok(Arrangement {
            rank,
            directions,
            faces,
        })
    }

    /// Sign vector of an arbitrary point with respect to `directions`.
    pub fn sign_vector(&self, lambda: &RatVec) -> Vec<i8> {
        self.directions
            .iter()
            .map(|d| {
                let p = pair_int(lambda, d);
                if p.is_zero() {
                    0
                } else if p.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }
}

fn build_rec(
    rank: usize,
    directions: &[IntVec],
    fm_cap: usize,
    signs: &mut Vec<i8>,
    faces: &mut Vec<ArrangementFace>,
) -> Result<()> {
    let k = signs.len();
    let mut sys = LinearSystem::new(rank);
    for (d, &s) in directions.iter().zip(signs.iter()) {
        let base = RatVec::from_ints(d);
        match s {
            1 => sys.strict.push(AffineForm::new(base, Rat::zero())),
            -1 => sys.strict.push(AffineForm::new(-&base, Rat::zero())),
            _ => sys.eqs.push(AffineForm::new(base, Rat::zero())),
        }
    }
    let witness = match sys.feasible(fm_cap)? {
        Some(w) => w,
        None => return Ok(()),
    };
    if k == directions.len() {
        let zero_rows: Vec<RatVec> = directions
            .iter()
            .zip(signs.iter())
            .filter(|(_, &s)| s == 0)
            .map(|(d, _)| RatVec::from_ints(d))
            .collect();
        let span_basis = kernel_basis(&zero_rows, rank)?;
        faces.push(ArrangementFace {
            signs: signs.clone(),
            span_basis,
            witness,
        });
        return Ok(());
    }
    for s in [-1i8, 0, 1] {
        signs.push(s);
        build_rec(rank, directions, fm_cap, signs, faces)?;
        signs.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{rint, DEFAULT_FM_CAP};
    use crate::root_datum::RootDatum;
    use crate::weights::vg_multiset;

    fn rv(v: &[i64]) -> RatVec {
        RatVec::from_ints(v)
    }

    fn fig1_vg() -> SignedWeightMultiset {
        let rd = RootDatum::torus(2);
        let v = SignedWeightMultiset::from_entries([
            (vec![2, 0], 1),
            (vec![-2, 0], 1),
            (vec![1, 2], 1),
            (vec![-1, -2], 1),
        ]);
        vg_multiset(&v, &rd).unwrap()
    }

    fn toy_vg(n: i64) -> SignedWeightMultiset {
        let rd = RootDatum::torus(1);
        let v = SignedWeightMultiset::from_entries([(vec![1], n), (vec![-1], n)]);
        vg_multiset(&v, &rd).unwrap()
    }

    #[test]
    fn upper_support_examples() {
        let p = WeightPolytope::new(2, fig1_vg()).unwrap();
        assert_eq!(p.upper_support(&RatVec::zeros(2)), rint(0));
        assert_eq!(p.upper_support(&rv(&[1, 0])), rat(3, 2));

        let toy = WeightPolytope::new(1, toy_vg(2)).unwrap();
        assert_eq!(toy.upper_support(&rv(&[1])), rint(1));
    }

    #[test]
    fn ray_enumeration() {
        let p = WeightPolytope::new(2, fig1_vg()).unwrap();
        let mut expected: Vec<IntVec> = vec![
            vec![0, 1],
            vec![0, -1],
            vec![2, -1],
            vec![-2, 1],
        ];
        expected.sort();
        assert_eq!(p.rays(), &expected[..]);

        let line = WeightPolytope::new(1, toy_vg(1)).unwrap();
        assert_eq!(line.rays(), &[vec![-1], vec![1]]);

        // generators spanning only the x axis: lineality along y
        let gens = SignedWeightMultiset::from_entries([(vec![2, 0], 1), (vec![-2, 0], 1)]);
        let p = WeightPolytope::new(2, gens).unwrap();
        assert!(p.rays().contains(&vec![0, 1]));
        assert!(p.rays().contains(&vec![0, -1]));
        assert_eq!(p.lineality_basis(), &[vec![0, 1]]);
        // and the transverse direction is still constrained
        assert!(p.rays().contains(&vec![1, 0]));
        assert!(!p.member(&rv(&[5, 0]), &RatVec::zeros(2)));
        assert!(p.member(&rv(&[1, 0]), &RatVec::zeros(2)));
        assert!(!p.member(&rv(&[0, 1]), &RatVec::zeros(2)));
    }

    #[test]
    fn membership_examples() {
        let p = WeightPolytope::new(2, fig1_vg()).unwrap();
        let zero = RatVec::zeros(2);
        assert!(p.member(&rv(&[1, 1]), &zero));
        assert!(!p.member(&rv(&[1, -1]), &zero));
        assert!(p.member(&zero, &zero));
        // boundary points belong (closed intervals)
        assert!(p.member(&RatVec(vec![rat(3, 2), rint(1)]), &zero));
    }

    #[test]
    fn lattice_points_fig1() {
        let p = WeightPolytope::new(2, fig1_vg()).unwrap();
        let pts = p.lattice_points(&RatVec::zeros(2));
        let expected: Vec<IntVec> = vec![
            vec![-1, -1],
            vec![-1, 0],
            vec![0, -1],
            vec![0, 0],
            vec![0, 1],
            vec![1, 0],
            vec![1, 1],
        ];
        assert_eq!(pts, expected);
    }

    #[test]
    fn lattice_points_toy_and_empty() {
        let toy = WeightPolytope::new(1, toy_vg(2)).unwrap();
        assert_eq!(
            toy.lattice_points(&RatVec::zeros(1)),
            vec![vec![-1], vec![0], vec![1]]
        );

        // pure classifying-stack generators for a nonabelian group: empty
        let rd = RootDatum::gl_blocks(&[2]).unwrap();
        let v = SignedWeightMultiset::new();
        let vg = v.difference(&crate::weights::adjoint_multiset(&rd));
        let p = WeightPolytope::new(2, vg).unwrap();
        assert!(p.is_empty());
        assert!(p.lattice_points(&RatVec::zeros(2)).is_empty());
    }

    #[test]
    fn lattice_points_with_shift() {
        let p = WeightPolytope::new(1, toy_vg(2)).unwrap();
        let shifted = p.lattice_points(&RatVec(vec![rat(-7, 2)]));
        assert_eq!(shifted, vec![vec![-4], vec![-3]]);
    }

    #[test]
    fn face_enumeration_counts() {
        // one hyperplane in rank 1
        let m = SignedWeightMultiset::from_entries([(vec![1], 1), (vec![-1], 1)]);
        let p = WeightPolytope::new(1, m).unwrap();
        assert_eq!(p.enumerate_faces(DEFAULT_FM_CAP).unwrap().len(), 3);

        // two distinct lines through the origin in rank 2
        let p = WeightPolytope::new(2, fig1_vg()).unwrap();
        let faces = p.enumerate_faces(DEFAULT_FM_CAP).unwrap();
        assert_eq!(faces.len(), 9);
        assert_eq!(faces.iter().filter(|f| f.dim() == 0).count(), 1);
        assert_eq!(faces.iter().filter(|f| f.dim() == 1).count(), 4);
        assert_eq!(faces.iter().filter(|f| f.dim() == 2).count(), 4);

        // one hyperplane in rank 2
        let gens = SignedWeightMultiset::from_entries([(vec![1, -1], 1), (vec![-1, 1], 1)]);
        let p = WeightPolytope::new(2, gens).unwrap();
        assert_eq!(p.enumerate_faces(DEFAULT_FM_CAP).unwrap().len(), 3);
    }

    #[test]
    fn face_witness_realizes_signs() {
        let p = WeightPolytope::new(2, fig1_vg()).unwrap();
        let arr = Arrangement::build(2, p.generators().primitive_directions(), DEFAULT_FM_CAP)
            .unwrap();
        for face in &arr.faces {
            assert_eq!(arr.sign_vector(&face.witness), face.signs);
        }
    }

    #[test]
    fn symmetry_of_membership() {
        let p = WeightPolytope::new(2, fig1_vg()).unwrap();
        let zero = RatVec::zeros(2);
        for x in -3..=3 {
            for y in -3..=3 {
                let u = rv(&[x, y]);
                assert_eq!(p.member(&u, &zero), p.member(&(-&u), &zero));
            }
        }
    }

    #[test]
    fn adding_symmetric_pairs_grows_the_polytope() {
        let base = fig1_vg();
        let mut bigger = base.clone();
        bigger.add(vec![1, 1], 1);
        bigger.add(vec![-1, -1], 1);
        let p0 = WeightPolytope::new(2, base).unwrap();
        let p1 = WeightPolytope::new(2, bigger).unwrap();
        let zero = RatVec::zeros(2);
        for x in -4..=4 {
            for y in -4..=4 {
                let u = rv(&[x, y]);
                if p0.member(&u, &zero) {
                    assert!(p1.member(&u, &zero));
                }
            }
        }
    }

    /// Direct zonotope membership via exact feasibility: after cancelling
    /// negative multiplicities against positive ones weight by weight,
    /// solve `u = sum t_v (m_v / 2) v` with `t_v` in `[0, 1]`.
    fn zonotope_member_oracle(gens: &SignedWeightMultiset, u: &RatVec) -> Option<bool> {
        let mut weights = Vec::new();
        for (w, m) in gens.iter() {
            if w.iter().all(|&x| x == 0) {
                continue;
            }
            if m < 0 {
                return None; // not totally cancelled; different semantics
            }
            weights.push((w.clone(), m));
        }
        let rank = u.len();
        let mut sys = LinearSystem::new(weights.len());
        for i in 0..rank {
            let coeffs: Vec<Rat> = weights
                .iter()
                .map(|(w, m)| rat(w[i] * *m, 2))
                .collect();
            sys.eqs
                .push(AffineForm::new(RatVec(coeffs), -u.0[i].clone()));
        }
        for j in 0..weights.len() {
            let mut e = vec![Rat::zero(); weights.len()];
            e[j] = Rat::one();
            sys.weak.push(AffineForm::new(RatVec(e.clone()), Rat::zero()));
            let neg: Vec<Rat> = e.iter().map(|x| -x).collect();
            sys.weak.push(AffineForm::new(RatVec(neg), Rat::one()));
        }
        Some(sys.feasible(DEFAULT_FM_CAP).unwrap().is_some())
    }

    use num_traits::One;

    #[test]
    fn member_matches_zonotope_oracle() {
        let polys = [
            (2usize, fig1_vg()),
            (1, toy_vg(2)),
            (1, toy_vg(3)),
            (
                2,
                SignedWeightMultiset::from_entries([
                    (vec![1, 0], 2),
                    (vec![-2, 0], 1),
                    (vec![0, 1], 1),
                    (vec![0, -1], 1),
                ]),
            ),
        ];
        for (rank, gens) in polys {
            let p = WeightPolytope::new(rank, gens.clone()).unwrap();
            let zero = RatVec::zeros(rank);
            let mut coords = vec![-3i64; rank];
            'scan: loop {
                let u = rv(&coords);
                if let Some(expected) = zonotope_member_oracle(&gens, &u) {
                    assert_eq!(
                        p.member(&u, &zero),
                        expected,
                        "disagreement at {u} for {gens:?}"
                    );
                }
                for i in 0..rank {
                    coords[i] += 1;
                    if coords[i] <= 3 {
                        continue 'scan;
                    }
                    coords[i] = -3;
                }
                break;
            }
        }
    }
}
