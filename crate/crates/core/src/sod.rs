//! Decomposition engine: quadratic norms, window data for a cocharacter,
//! the lattice partition and its locator, summand enumeration, and the
//! semiorthogonality / full-faithfulness inequality checks.
//!
//! The weight lattice is partitioned into cells `nabla_fixed(lambda) +
//! delta_lambda` with `delta_lambda = delta - v_lambda - q(lambda)`. The
//! locator scans the faces of the cocharacter arrangement dual to
//! `wt(V) union roots`: on each face the fixed slice and half-sum are
//! constant, so the cell condition pins `lambda` down to one exact linear
//! solve. Coverage and disjointness are asserted, not assumed; both kinds
//! of failure surface as structured errors.

use std::collections::BTreeMap;

use crate::polytope::{Arrangement, WeightPolytope};
use crate::ratlin::{
    pair, pair_int, rat, IntVec, Rat, RatMat, RatVec, DEFAULT_FM_CAP,
};
use crate::root_datum::RootDatum;
use crate::weights::{
    half_positive_sum, lambda_slice, submultisets, vg_multiset, SignedWeightMultiset,
};
use crate::{Error, Result};
use num_traits::{Signed, Zero};

/// Cap on sub-multiset enumeration size, counted with multiplicity.
pub const SUBMULTISET_CAP: u64 = 20;

/// A positive-definite symmetric rational form on the cocharacter lattice.
///
/// Seen as an isomorphism towards the character side: `apply` sends a
/// cocharacter `lambda` to the covector `Q lambda`, so
/// `pair(lambda, apply(lambda)) = |lambda|^2`.
#[derive(Clone, Debug)]
pub struct QuadraticNorm {
    mat: RatMat,
    inv: RatMat,
}

impl QuadraticNorm {
    pub fn new(mat: RatMat) -> Result<Self> {
        if !mat.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        for k in 1..=mat.rows {
            if !mat.leading_minor(k).is_positive() {
                return Err(Error::NotPositiveDefinite { index: k });
            }
        }
        let inv = mat
            .inverse()
            .ok_or(Error::NotPositiveDefinite { index: mat.rows })?;
        Ok(QuadraticNorm { mat, inv })
    }

    /// Standard sum-of-squares form.
    pub fn standard(rank: usize) -> Self {
        Self::new(RatMat::identity(rank)).expect("identity is positive definite")
    }

    pub fn rank(&self) -> usize {
        self.mat.rows
    }

    pub fn matrix(&self) -> &RatMat {
        &self.mat
    }

    /// `Q lambda`, the covector of a cocharacter.
    pub fn apply(&self, lambda: &RatVec) -> Result<RatVec> {
        self.mat.mul_vec(lambda)
    }

    /// `lambda^T Q mu` on the cocharacter side.
    pub fn pairing(&self, lambda: &RatVec, mu: &RatVec) -> Result<Rat> {
        pair(lambda, &self.mat.mul_vec(mu)?)
    }

    pub fn norm_sq(&self, lambda: &RatVec) -> Result<Rat> {
        self.pairing(lambda, lambda)
    }

    /// Induced form on the character side: `v^T Q^{-1} w`.
    pub fn dual_pairing(&self, v: &RatVec, w: &RatVec) -> Result<Rat> {
        pair(v, &self.inv.mul_vec(w)?)
    }

    /// `pi^T Q pi = Q` for every Weyl element (cocharacter action).
    pub fn check_weyl_invariance(&self, rd: &RootDatum) -> Result<()> {
        for pi in rd.weyl() {
            let m = pi.cochar_mat();
            let conj = m.transpose().mul(&self.mat.mul(&m)?)?;
            if conj != self.mat {
                return Err(Error::NormNotInvariant);
            }
        }
        Ok(())
    }
}

/// Everything cached about one arrangement face for the locator.
#[derive(Clone, Debug)]
struct FaceData {
    signs: Vec<i8>,
    span: Vec<RatVec>,
    /// Inverse Gram matrix of the span basis under `q`; `None` for the
    /// zero-dimensional span.
    gram_inv: Option<RatMat>,
    v_f: RatVec,
    fixed_poly: WeightPolytope,
}

/// Validated configuration: root datum, representation weights, quadratic
/// norm, and the invariant shift, with eager caches for the locator.
/// Immutable after construction; all queries are pure.
#[derive(Clone, Debug)]
pub struct SodConfig {
    rd: RootDatum,
    rep: SignedWeightMultiset,
    vg: SignedWeightMultiset,
    q: QuadraticNorm,
    delta: RatVec,
    fm_cap: usize,
    arrangement: Arrangement,
    face_data: Vec<FaceData>,
    central_basis: Vec<IntVec>,
}

impl SodConfig {
    pub fn new(
        rd: RootDatum,
        rep: SignedWeightMultiset,
        q: QuadraticNorm,
        delta: RatVec,
    ) -> Result<Self> {
        Self::with_fm_cap(rd, rep, q, delta, DEFAULT_FM_CAP)
    }

    pub fn with_fm_cap(
        rd: RootDatum,
        rep: SignedWeightMultiset,
        q: QuadraticNorm,
        delta: RatVec,
        fm_cap: usize,
    ) -> Result<Self> {
        let rank = rd.rank();
        if let Some(r) = rep.rank() {
            if r != rank {
                return Err(Error::Dimension {
                    expected: rank,
                    got: r,
                });
            }
        }
        if q.rank() != rank {
            return Err(Error::Dimension {
                expected: rank,
                got: q.rank(),
            });
        }
        if delta.len() != rank {
            return Err(Error::Dimension {
                expected: rank,
                got: delta.len(),
            });
        }
        rep.is_representation()?;
        if !rep.is_weyl_stable(&rd) {
            return Err(Error::NotWeylStable);
        }
        if let Some((line, sum)) = rep.quasi_symmetry_violation() {
            return Err(Error::NotQuasiSymmetric { line, sum });
        }
        q.check_weyl_invariance(&rd)?;
        for pi in rd.weyl() {
            if pi.apply_rat(&delta) != delta {
                return Err(Error::DeltaNotInvariant);
            }
        }

        let vg = vg_multiset(&rep, &rd)?;

        // Arrangement of hyperplanes dual to wt(V) and the roots.
        let mut dirs = rep.primitive_directions();
        for rp in rd.roots() {
            if let Some(d) = crate::weights::primitive_direction(&rp.root) {
                if !dirs.contains(&d) {
                    dirs.push(d);
                }
            }
        }
        let arrangement = Arrangement::build(rank, dirs, fm_cap)?;

        let mut face_data = Vec::with_capacity(arrangement.faces.len());
        for face in &arrangement.faces {
            let (fixed, _, _) = lambda_slice(&vg, &face.witness);
            let fixed_poly = WeightPolytope::new(rank, fixed)?;
            let v_f = half_positive_sum(&vg, &face.witness);
            let k = face.span_basis.len();
            let gram_inv = if k == 0 {
                None
            } else {
                let mut gram = RatMat::zeros(k, k);
                for i in 0..k {
                    let qi = q.apply(&face.span_basis[i])?;
                    for j in 0..k {
                        gram[(i, j)] = pair(&face.span_basis[j], &qi)?;
                    }
                }
                Some(gram.inverse().ok_or_else(|| {
                    Error::Invalid("degenerate Gram matrix on a face span".into())
                })?)
            };
            face_data.push(FaceData {
                signs: face.signs.clone(),
                span: face.span_basis.clone(),
                gram_inv,
                v_f,
                fixed_poly,
            });
        }

        let central_rows: Vec<RatVec> = arrangement
            .directions
            .iter()
            .map(|d| RatVec::from_ints(d))
            .collect();
        let central_basis = crate::ratlin::kernel_basis(&central_rows, rank)?
            .iter()
            .map(|v| v.primitive().expect("kernel basis vectors are nonzero"))
            .collect();

        Ok(SodConfig {
            rd,
            rep,
            vg,
            q,
            delta,
            fm_cap,
            arrangement,
            face_data,
            central_basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.rd.rank()
    }

    pub fn root_datum(&self) -> &RootDatum {
        &self.rd
    }

    pub fn representation(&self) -> &SignedWeightMultiset {
        &self.rep
    }

    pub fn vg(&self) -> &SignedWeightMultiset {
        &self.vg
    }

    pub fn norm(&self) -> &QuadraticNorm {
        &self.q
    }

    pub fn delta(&self) -> &RatVec {
        &self.delta
    }

    pub fn fm_cap(&self) -> usize {
        self.fm_cap
    }

    pub fn arrangement(&self) -> &Arrangement {
        &self.arrangement
    }

    /// Primitive basis of the maximal central sublattice: cocharacters
    /// pairing to zero with every weight of `V` and every root.
    pub fn central_basis(&self) -> &[IntVec] {
        &self.central_basis
    }

    /// Restriction of `delta - q(lambda, .)` to the central sublattice,
    /// in the coordinates of [`Self::central_basis`].
    pub fn central_weight(&self, lambda: &RatVec) -> Result<RatVec> {
        let q_lambda = self.q.apply(lambda)?;
        Ok(RatVec(
            self.central_basis
                .iter()
                .map(|b| {
                    let bv = RatVec::from_ints(b);
                    Ok(pair(&bv, &self.delta)? - pair(&bv, &q_lambda)?)
                })
                .collect::<Result<_>>()?,
        ))
    }
}

/// Exact data attached to one summand label `lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaData {
    /// Anti-dominant representative of the label.
    pub lambda: RatVec,
    /// Indices (into the root list) of roots fixed by `lambda`.
    pub levi_roots: Vec<usize>,
    /// `lambda`-fixed slice of `wt(V/G)`.
    pub fixed: SignedWeightMultiset,
    /// Half sum of the positive slice of `wt(V/G)`.
    pub v_lambda: RatVec,
    /// `delta - v_lambda - q(lambda)`.
    pub delta_lambda: RatVec,
    /// `q(lambda, lambda)`.
    pub norm_sq: Rat,
}

/// All fields of [`LambdaData`], computed after replacing `lambda` by its
/// anti-dominant Weyl representative.
pub fn lambda_data(cfg: &SodConfig, lambda: &RatVec) -> Result<LambdaData> {
    if lambda.len() != cfg.rank() {
        return Err(Error::Dimension {
            expected: cfg.rank(),
            got: lambda.len(),
        });
    }
    let (lam, _) = cfg.rd.anti_dominant_cochar(lambda);
    let levi_roots = (0..cfg.rd.roots().len())
        .filter(|&i| pair_int(&lam, &cfg.rd.roots()[i].root).is_zero())
        .collect();
    let (fixed, _, _) = lambda_slice(&cfg.vg, &lam);
    let v_lambda = half_positive_sum(&cfg.vg, &lam);
    let delta_lambda = &(&cfg.delta - &v_lambda) - &cfg.q.apply(&lam)?;
    let norm_sq = cfg.q.norm_sq(&lam)?;
    Ok(LambdaData {
        lambda: lam,
        levi_roots,
        fixed,
        v_lambda,
        delta_lambda,
        norm_sq,
    })
}

/// The window centre `delta - v_lambda - q(lambda)` at the given
/// cocharacter, without anti-dominant normalization. Conjugate labels give
/// Weyl-translated centres.
pub fn delta_lambda_at(cfg: &SodConfig, lambda: &RatVec) -> Result<RatVec> {
    let v_lambda = half_positive_sum(&cfg.vg, lambda);
    Ok(&(&cfg.delta - &v_lambda) - &cfg.q.apply(lambda)?)
}

/// A summand label with its window cell data.
#[derive(Clone, Debug)]
pub struct Window {
    pub lam: LambdaData,
    /// Integral points of the cell `nabla_fixed + delta_lambda`.
    pub cell_points: Vec<IntVec>,
    /// The subset dominant for the Levi of `lambda`.
    pub dominant_points: Vec<IntVec>,
    /// Central weight in the coordinates of the config's central basis.
    pub central_weight: RatVec,
}

impl Window {
    pub fn sort_key(&self) -> &Rat {
        &self.lam.norm_sq
    }
}

/// Window cell of `lambda`: integral points of the shifted fixed-slice
/// polytope, with the Levi-dominant subset singled out.
pub fn window(cfg: &SodConfig, lambda: &RatVec) -> Result<Window> {
    let lam = lambda_data(cfg, lambda)?;
    let poly = WeightPolytope::new(cfg.rank(), lam.fixed.clone())?;
    let cell_points = poly.lattice_points(&lam.delta_lambda);
    let levi_positive: Vec<usize> = cfg
        .rd
        .positive_indices()
        .iter()
        .copied()
        .filter(|i| lam.levi_roots.contains(i))
        .collect();
    let dominant_points = cell_points
        .iter()
        .filter(|w| {
            levi_positive
                .iter()
                .all(|&i| !pair_int(&RatVec::from_ints(w), &cfg.rd.roots()[i].coroot).is_negative())
        })
        .cloned()
        .collect();
    let central_weight = cfg.central_weight(&lam.lambda)?;
    Ok(Window {
        lam,
        cell_points,
        dominant_points,
        central_weight,
    })
}

/// Raw locator output: the cocharacter whose cell contains the weight,
/// before anti-dominant normalization.
#[derive(Clone, Debug)]
pub struct Located {
    pub raw_lambda: RatVec,
    pub data: LambdaData,
}

/// The unique `lambda` with `w` in its window cell, found by one exact
/// linear solve per arrangement face. Zero accepted candidates is a
/// coverage violation, two or more a disjointness violation; both are
/// reported verbatim.
pub fn locate(cfg: &SodConfig, w: &[i64]) -> Result<Located> {
    let raw = locate_raw(cfg, w)?;
    let data = lambda_data(cfg, &raw)?;
    Ok(Located {
        raw_lambda: raw,
        data,
    })
}

pub fn locate_raw(cfg: &SodConfig, w: &[i64]) -> Result<RatVec> {
    if w.len() != cfg.rank() {
        return Err(Error::Dimension {
            expected: cfg.rank(),
            got: w.len(),
        });
    }
    let w_rat = RatVec::from_ints(w);
    let mut accepted: Vec<RatVec> = Vec::new();
    for fd in &cfg.face_data {
        let lambda = match face_candidate(cfg, fd, &w_rat)? {
            Some(l) => l,
            None => continue,
        };
        if cfg.arrangement.sign_vector(&lambda) != fd.signs {
            continue;
        }
        let delta_lambda = &(&cfg.delta - &fd.v_f) - &cfg.q.apply(&lambda)?;
        if fd.fixed_poly.member(&w_rat, &delta_lambda) {
            accepted.push(lambda);
        }
    }
    match accepted.len() {
        0 => Err(Error::Coverage { weight: w.to_vec() }),
        1 => Ok(accepted.pop_first()),
        _ => Err(Error::Disjointness {
            weight: w.to_vec(),
            first: accepted[0].to_string(),
            second: accepted[1].to_string(),
        }),
    }
}

trait PopFirst<T> {
    fn pop_first(self) -> T;
}

impl<T> PopFirst<T> for Vec<T> {
    fn pop_first(mut self) -> T {
        self.remove(0)
    }
}

/// Solve `pair(s_j, q(lambda) + w - delta + v_F) = 0` for `lambda` in the
/// span of the face. Positive definiteness of `q` makes the solution unique.
fn face_candidate(cfg: &SodConfig, fd: &FaceData, w_rat: &RatVec) -> Result<Option<RatVec>> {
    let c = &(w_rat - &cfg.delta) + &fd.v_f;
    if fd.span.is_empty() {
        return Ok(Some(RatVec::zeros(cfg.rank())));
    }
    let rhs = RatVec(
        fd.span
            .iter()
            .map(|s| pair(s, &c).map(|p| -p))
            .collect::<Result<_>>()?,
    );
    let gram_inv = fd.gram_inv.as_ref().expect("nonempty span has a Gram matrix");
    let t = gram_inv.mul_vec(&rhs)?;
    let mut lambda = RatVec::zeros(cfg.rank());
    for (ti, s) in t.0.iter().zip(&fd.span) {
        lambda = &lambda + &s.scale(ti);
    }
    Ok(Some(lambda))
}

/// Independent check of the locator for torus configurations with
/// nonnegative weight multiplicities: the located `lambda` must be the
/// unique minimizer of the convex function
/// `F(mu) = q(mu,mu)/2 + (1/2) sum_v mult_v max(pair(mu,v), 0) + pair(mu, w - delta)`.
///
/// Candidates are the face-span critical points whose sign vector matches
/// their face; acceptance is by exact comparison of `F` values rather than
/// by cell membership, which is what makes this an independent route.
pub fn descent_locate(cfg: &SodConfig, w: &[i64]) -> Result<RatVec> {
    if !cfg.rd.roots().is_empty() {
        return Err(Error::Invalid(
            "descent oracle is defined for torus configurations only".into(),
        ));
    }
    if cfg.vg.iter().any(|(v, m)| m < 0 && v.iter().any(|&x| x != 0)) {
        return Err(Error::Invalid(
            "descent oracle needs nonnegative multiplicities off the zero weight".into(),
        ));
    }
    let w_rat = RatVec::from_ints(w);
    let value = |mu: &RatVec| -> Result<Rat> {
        let mut f = cfg.q.norm_sq(mu)? / rat(2, 1);
        for (v, mult) in cfg.vg.iter() {
            let p = pair_int(mu, v);
            if p.is_positive() {
                f += p * rat(mult, 2);
            }
        }
        f += pair(mu, &(&w_rat - &cfg.delta))?;
        Ok(f)
    };
    let mut candidates: Vec<(Rat, RatVec)> = Vec::new();
    for fd in &cfg.face_data {
        let lambda = match face_candidate(cfg, fd, &w_rat)? {
            Some(l) => l,
            None => continue,
        };
        if cfg.arrangement.sign_vector(&lambda) != fd.signs {
            continue;
        }
        let f = value(&lambda)?;
        candidates.push((f, lambda));
    }
    let min = candidates
        .iter()
        .map(|(f, _)| f.clone())
        .min()
        .ok_or(Error::Coverage { weight: w.to_vec() })?;
    let mut minimizers: Vec<RatVec> = candidates
        .into_iter()
        .filter(|(f, _)| *f == min)
        .map(|(_, l)| l)
        .collect();
    minimizers.dedup();
    if minimizers.len() > 1 {
        // strict convexity makes this impossible; surface it loudly
        return Err(Error::Invalid(format!(
            "descent found two minimizers {} and {} of equal value",
            minimizers[0], minimizers[1]
        )));
    }
    Ok(minimizers.pop().expect("nonempty by the min computation"))
}

/// One summand of the enumerated decomposition within a radius.
#[derive(Clone, Debug)]
pub struct Summand {
    pub window: Window,
    /// Integral weights inside the enumeration box located to this label.
    pub box_points: Vec<IntVec>,
}

/// Deterministically ordered summand table: descending `q`-norm, ties by
/// central weight then label.
#[derive(Clone, Debug)]
pub struct SummandTable {
    pub radius: Rat,
    pub central_basis: Vec<IntVec>,
    pub summands: Vec<Summand>,
}

impl SummandTable {
    /// Indices of summands grouped by central weight; groups are mutually
    /// orthogonal blocks.
    pub fn blocks(&self) -> Vec<(RatVec, Vec<usize>)> {
        let mut map: BTreeMap<RatVec, Vec<usize>> = BTreeMap::new();
        for (i, s) in self.summands.iter().enumerate() {
            map.entry(s.window.central_weight.clone()).or_default().push(i);
        }
        map.into_iter().collect()
    }
}

/// Locate every integral weight with coordinates bounded by `radius`, group
/// by anti-dominant label, and sort. Windows with no Levi-dominant integral
/// points are dropped. The result is complete within the radius box.
pub fn enumerate_summands(cfg: &SodConfig, radius: &Rat) -> Result<SummandTable> {
    if !radius.is_positive() {
        return Err(Error::Invalid("radius must be positive".into()));
    }
    let bound = i64::try_from(radius.floor().to_integer())
        .map_err(|_| Error::Capacity("radius too large".into()))?;
    let rank = cfg.rank();
    let mut groups: BTreeMap<RatVec, Vec<IntVec>> = BTreeMap::new();
    let mut point = vec![-bound; rank];
    'scan: loop {
        let located = locate(cfg, &point)?;
        groups
            .entry(located.data.lambda.clone())
            .or_default()
            .push(point.clone());
        for i in (0..rank).rev() {
            point[i] += 1;
            if point[i] <= bound {
                continue 'scan;
            }
            point[i] = -bound;
        }
        break;
    }
    let mut summands = Vec::new();
    for (lambda, box_points) in groups {
        let win = window(cfg, &lambda)?;
        if win.dominant_points.is_empty() {
            continue;
        }
        summands.push(Summand {
            window: win,
            box_points,
        });
    }
    summands.sort_by(|a, b| {
        b.window
            .lam
            .norm_sq
            .cmp(&a.window.lam.norm_sq)
            .then_with(|| a.window.central_weight.cmp(&b.window.central_weight))
            .then_with(|| a.window.lam.lambda.cmp(&b.window.lam.lambda))
    });
    Ok(SummandTable {
        radius: radius.clone(),
        central_basis: cfg.central_basis.clone(),
        summands,
    })
}

/// Deterministic sub-sampling parameters for the inequality suites.
#[derive(Clone, Copy, Debug)]
pub struct Sampling {
    pub seed: u64,
    pub cap: u64,
}

/// One checked (or violated) inequality instance.
#[derive(Clone, Debug)]
pub struct MarginEntry {
    pub w: IntVec,
    pub w_prime: IntVec,
    /// Chosen sub-multiset, as (weight, count) pairs.
    pub j: Vec<(IntVec, u32)>,
    pub lhs: Rat,
    pub rhs: Rat,
}

impl MarginEntry {
    pub fn margin(&self) -> Rat {
        &self.lhs - &self.rhs
    }
}

/// Outcome of an inequality suite between two labels.
#[derive(Clone, Debug)]
pub struct InequalityReport {
    pub lambda: RatVec,
    pub lambda_prime: RatVec,
    /// Number of (w, w', J) triples actually checked.
    pub checked: u64,
    /// Number of J classes skipped for lying on a dotted wall.
    pub dropped: u64,
    pub min_margin: Option<Rat>,
    /// Histogram of observed margins.
    pub margins: BTreeMap<Rat, u64>,
    pub violations: Vec<MarginEntry>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, entry: MarginEntry) {
        let margin = entry.margin();
        self.checked += 1;
        *self.margins.entry(margin.clone()).or_insert(0) += 1;
        if self.min_margin.as_ref().map_or(true, |m| margin < *m) {
            self.min_margin = Some(margin.clone());
        }
        if !margin.is_positive() {
            self.violations.push(entry);
        }
    }
}

/// Strict semiorthogonality margins between two distinct labels with
/// `|lambda|_q <= |lambda'|_q`: for every window point `w` of `lambda`,
/// `w'` of `lambda'`, and admissible sub-multiset `J` of the negative
/// slice of `wt(V)`, require
/// `pair(lambda', (w - v_J)^+) > pair(lambda', w')`.
pub fn check_semiorthogonality(
    cfg: &SodConfig,
    lambda: &RatVec,
    lambda_prime: &RatVec,
    sampling: Option<Sampling>,
) -> Result<InequalityReport> {
    let lam = lambda_data(cfg, lambda)?;
    let lam_p = lambda_data(cfg, lambda_prime)?;
    if lam.lambda == lam_p.lambda {
        return Err(Error::Invalid(
            "semiorthogonality needs two distinct labels".into(),
        ));
    }
    if lam.norm_sq > lam_p.norm_sq {
        return Err(Error::Invalid(format!(
            "expected |lambda|_q <= |lambda'|_q, got {} > {}",
            lam.norm_sq, lam_p.norm_sq
        )));
    }
    let win = window(cfg, &lam.lambda)?;
    let win_p = window(cfg, &lam_p.lambda)?;
    check_semiorthogonality_points(
        cfg,
        &lam.lambda,
        &win.dominant_points,
        &lam_p.lambda,
        &win_p.dominant_points,
        sampling,
    )
}

/// Same inequality suite with externally supplied window points. Lets a
/// corrupted window act as a negative control.
pub fn check_semiorthogonality_points(
    cfg: &SodConfig,
    lambda: &RatVec,
    points: &[IntVec],
    lambda_prime: &RatVec,
    points_prime: &[IntVec],
    sampling: Option<Sampling>,
) -> Result<InequalityReport> {
    let lam_p_rat = lambda_prime.clone();
    let (_, _, negative) = lambda_slice(&cfg.rep, lambda);
    let classes = submultisets(&negative, SUBMULTISET_CAP, cfg.rank())?;
    let mut report = InequalityReport {
        lambda: lambda.clone(),
        lambda_prime: lambda_prime.clone(),
        checked: 0,
        dropped: 0,
        min_margin: None,
        margins: BTreeMap::new(),
        violations: Vec::new(),
    };
    let total = points.len() as u64 * classes.len() as u64 * points_prime.len() as u64;
    let stride = match sampling {
        Some(s) if s.cap > 0 && total > s.cap => total.div_ceil(s.cap),
        _ => 1,
    };
    let offset = sampling.map_or(0, |s| s.seed % stride.max(1));
    let mut index: u64 = 0;
    for w in points {
        for class in &classes {
            let shifted: IntVec = w.iter().zip(&class.sum).map(|(&a, &b)| a - b).collect();
            let reg = cfg.rd.dotted_regularize(&RatVec::from_ints(&shifted));
            let Some((w_plus, _)) = reg else {
                report.dropped += 1;
                index += points_prime.len() as u64;
                continue;
            };
            let lhs = pair(&lam_p_rat, &w_plus)?;
            for w_prime in points_prime {
                let take = stride == 1 || index % stride == offset;
                index += 1;
                if !take {
                    continue;
                }
                let rhs = pair_int(&lam_p_rat, w_prime);
                report.record(MarginEntry {
                    w: w.clone(),
                    w_prime: w_prime.clone(),
                    j: class.chosen.clone(),
                    lhs: lhs.clone(),
                    rhs,
                });
            }
        }
    }
    Ok(report)
}

/// Full-faithfulness margins of one label: the `lambda' = lambda`
/// specialization over nonempty `J` only, where equality would break
/// faithfulness. The empty `J` gives equality by the level-set identity and
/// is excluded.
pub fn check_full_faithfulness(
    cfg: &SodConfig,
    lambda: &RatVec,
    sampling: Option<Sampling>,
) -> Result<InequalityReport> {
    let lam = lambda_data(cfg, lambda)?;
    let win = window(cfg, &lam.lambda)?;
    let (_, _, negative) = lambda_slice(&cfg.rep, &lam.lambda);
    let classes = submultisets(&negative, SUBMULTISET_CAP, cfg.rank())?;
    let mut report = InequalityReport {
        lambda: lam.lambda.clone(),
        lambda_prime: lam.lambda.clone(),
        checked: 0,
        dropped: 0,
        min_margin: None,
        margins: BTreeMap::new(),
        violations: Vec::new(),
    };
    let points = &win.dominant_points;
    let total =
        points.len() as u64 * classes.len().saturating_sub(1) as u64 * points.len() as u64;
    let stride = match sampling {
        Some(s) if s.cap > 0 && total > s.cap => total.div_ceil(s.cap),
        _ => 1,
    };
    let offset = sampling.map_or(0, |s| s.seed % stride.max(1));
    let mut index: u64 = 0;
    for w in points {
        for class in &classes {
            if class.size == 0 {
                continue;
            }
            let shifted: IntVec = w.iter().zip(&class.sum).map(|(&a, &b)| a - b).collect();
            let reg = cfg.rd.dotted_regularize(&RatVec::from_ints(&shifted));
            let Some((w_plus, _)) = reg else {
                report.dropped += 1;
                index += points.len() as u64;
                continue;
            };
            let lhs = pair(&lam.lambda, &w_plus)?;
            for w_prime in points {
                let take = stride == 1 || index % stride == offset;
                index += 1;
                if !take {
                    continue;
                }
                let rhs = pair_int(&lam.lambda, w_prime);
                report.record(MarginEntry {
                    w: w.clone(),
                    w_prime: w_prime.clone(),
                    j: class.chosen.clone(),
                    lhs: lhs.clone(),
                    rhs,
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::rint;

    fn rv(v: &[i64]) -> RatVec {
        RatVec::from_ints(v)
    }

    fn fig1_config() -> SodConfig {
        let rd = RootDatum::torus(2);
        let rep = SignedWeightMultiset::from_entries([
            (vec![2, 0], 1),
            (vec![-2, 0], 1),
            (vec![1, 2], 1),
            (vec![-1, -2], 1),
        ]);
        SodConfig::new(rd, rep, QuadraticNorm::standard(2), RatVec::zeros(2)).unwrap()
    }

    fn toy_config(n: i64, delta: Rat) -> SodConfig {
        let rd = RootDatum::torus(1);
        let rep = SignedWeightMultiset::from_entries([(vec![1], n), (vec![-1], n)]);
        SodConfig::new(rd, rep, QuadraticNorm::standard(1), RatVec(vec![delta])).unwrap()
    }

    #[test]
    fn norm_validates() {
        assert!(QuadraticNorm::new(RatMat::identity(3)).is_ok());
        let bad = RatMat::from_int_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(
            QuadraticNorm::new(bad),
            Err(Error::NotPositiveDefinite { index: 1 })
        ));
        let asym = RatMat::from_int_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(QuadraticNorm::new(asym), Err(Error::NotSymmetric)));
    }

    #[test]
    fn norm_directions() {
        let q = QuadraticNorm::standard(2);
        let lam = rv(&[2, -1]);
        assert_eq!(q.apply(&lam).unwrap(), lam);
        assert_eq!(q.norm_sq(&lam).unwrap(), rint(5));

        let m = RatMat::from_int_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        let q2 = QuadraticNorm::new(m).unwrap();
        assert_eq!(
            q2.dual_pairing(&rv(&[1, 0]), &rv(&[1, 0])).unwrap(),
            rat(1, 2)
        );
    }

    #[test]
    fn weyl_invariance_check() {
        let rd = RootDatum::gl_blocks(&[2]).unwrap();
        QuadraticNorm::standard(2)
            .check_weyl_invariance(&rd)
            .unwrap();
        let skew = RatMat::from_int_rows(&[vec![1, 0], vec![0, 2]]).unwrap();
        assert!(QuadraticNorm::new(skew)
            .unwrap()
            .check_weyl_invariance(&rd)
            .is_err());
    }

    #[test]
    fn config_validation_errors() {
        let rd = RootDatum::gl_blocks(&[2]).unwrap();
        // delta not Weyl-invariant
        let rep = crate::weights::adjoint_multiset(&rd);
        let err = SodConfig::new(
            rd.clone(),
            rep.clone(),
            QuadraticNorm::standard(2),
            rv(&[1, 0]),
        );
        assert!(matches!(err, Err(Error::DeltaNotInvariant)));

        // not quasi-symmetric
        let rd2 = RootDatum::torus(2);
        let skew = SignedWeightMultiset::from_entries([(vec![1, 0], 1)]);
        let err = SodConfig::new(rd2, skew, QuadraticNorm::standard(2), RatVec::zeros(2));
        assert!(matches!(err, Err(Error::NotQuasiSymmetric { .. })));
    }

    #[test]
    fn lambda_data_trivial() {
        let cfg = fig1_config();
        let d = lambda_data(&cfg, &RatVec::zeros(2)).unwrap();
        assert_eq!(d.delta_lambda, RatVec::zeros(2));
        assert_eq!(d.fixed, cfg.vg().clone());
        assert_eq!(d.norm_sq, rint(0));
        assert!(d.v_lambda.is_zero());
    }

    #[test]
    fn lambda_data_fig1_segment() {
        let cfg = fig1_config();
        let d = lambda_data(&cfg, &rv(&[0, 1])).unwrap();
        assert_eq!(d.v_lambda, RatVec(vec![rat(1, 2), rint(1)]));
        assert_eq!(d.delta_lambda, RatVec(vec![rat(-1, 2), rint(-2)]));
        assert_eq!(d.fixed.get(&[2, 0]), 1);
        assert_eq!(d.fixed.get(&[-2, 0]), 1);
        assert_eq!(d.norm_sq, rint(1));
    }

    #[test]
    fn lambda_data_toy() {
        // delta_lambda = delta - n/2 - t for the scaling cocharacter t > 0
        let cfg = toy_config(2, rint(0));
        let d = lambda_data(&cfg, &rv(&[1])).unwrap();
        assert_eq!(d.delta_lambda, RatVec(vec![rint(-2)]));
        let d3 = lambda_data(&cfg, &rv(&[3])).unwrap();
        assert_eq!(d3.delta_lambda, RatVec(vec![rint(-4)]));
    }

    #[test]
    fn window_examples() {
        let cfg = fig1_config();
        let w0 = window(&cfg, &RatVec::zeros(2)).unwrap();
        assert_eq!(w0.cell_points.len(), 7);
        assert_eq!(w0.dominant_points.len(), 7);

        let w1 = window(&cfg, &rv(&[0, 1])).unwrap();
        assert_eq!(w1.cell_points, vec![vec![-1, -2], vec![0, -2]]);

        let toy = toy_config(2, rint(0));
        let w3 = window(&toy, &rv(&[3])).unwrap();
        assert_eq!(w3.cell_points, vec![vec![-4]]);
    }

    #[test]
    fn locate_examples() {
        let cfg = fig1_config();
        let at_zero = locate(&cfg, &[0, 0]).unwrap();
        assert!(at_zero.raw_lambda.is_zero());
        assert_eq!(at_zero.data.norm_sq, rint(0));

        let at_30 = locate(&cfg, &[3, 0]).unwrap();
        assert_eq!(at_30.raw_lambda, RatVec(vec![rat(-8, 5), rat(4, 5)]));
        assert_eq!(at_30.data.norm_sq, rat(16, 5));

        let toy = toy_config(2, rint(0));
        let at_m3 = locate(&toy, &[-3]).unwrap();
        assert_eq!(at_m3.raw_lambda, rv(&[2]));
    }

    #[test]
    fn locate_equivariance() {
        let rd = RootDatum::gl_blocks(&[2]).unwrap();
        let rep = {
            let mut m = SignedWeightMultiset::new();
            for (w, mult) in crate::weights::adjoint_multiset(&rd).iter() {
                m.add(w.clone(), 2 * mult);
            }
            m
        };
        let cfg = SodConfig::new(rd, rep, QuadraticNorm::standard(2), RatVec::zeros(2)).unwrap();
        for w in [[2i64, 0], [3, 1], [0, 2], [-1, 2]] {
            let raw = locate_raw(&cfg, &w).unwrap();
            for pi in cfg.root_datum().weyl() {
                let moved = pi.apply_weight(&w);
                let raw_moved = locate_raw(&cfg, &moved).unwrap();
                assert_eq!(raw_moved, pi.apply_cochar(&raw));
            }
        }
    }

    #[test]
    fn scale_coherence() {
        let cfg = fig1_config();
        let base = lambda_data(&cfg, &rv(&[0, 1])).unwrap();
        let scaled = lambda_data(&cfg, &RatVec(vec![rint(0), rat(7, 3)])).unwrap();
        assert_eq!(base.fixed, scaled.fixed);
        assert_eq!(base.v_lambda, scaled.v_lambda);
        assert_eq!(scaled.norm_sq, rat(49, 9));
    }

    #[test]
    fn level_set_identity() {
        let cfg = fig1_config();
        for lambda in [rv(&[0, 1]), rv(&[2, -1]), rv(&[1, 1])] {
            let win = window(&cfg, &lambda).unwrap();
            let level = pair(&win.lam.lambda, &win.lam.delta_lambda).unwrap();
            for p in &win.cell_points {
                assert_eq!(pair_int(&win.lam.lambda, p), level);
            }
        }
    }

    #[test]
    fn toy_enumeration() {
        let cfg = toy_config(2, rint(0));
        let table = enumerate_summands(&cfg, &rint(3)).unwrap();
        let labels: Vec<RatVec> = table
            .summands
            .iter()
            .map(|s| s.window.lam.lambda.clone())
            .collect();
        assert_eq!(
            labels,
            vec![rv(&[-2]), rv(&[2]), rv(&[-1]), rv(&[1]), rv(&[0])]
        );
        let windows: Vec<&Vec<IntVec>> = table
            .summands
            .iter()
            .map(|s| &s.window.cell_points)
            .collect();
        assert_eq!(windows[0], &vec![vec![3]]);
        assert_eq!(windows[1], &vec![vec![-3]]);
        assert_eq!(windows[2], &vec![vec![2]]);
        assert_eq!(windows[3], &vec![vec![-2]]);
        assert_eq!(windows[4], &vec![vec![-1], vec![0], vec![1]]);
    }

    #[test]
    fn empty_representation_gives_singleton_cells() {
        let rd = RootDatum::torus(1);
        let rep = SignedWeightMultiset::new();
        let cfg = SodConfig::new(rd, rep, QuadraticNorm::standard(1), RatVec::zeros(1)).unwrap();
        let table = enumerate_summands(&cfg, &rint(2)).unwrap();
        assert_eq!(table.summands.len(), 5);
        let mut norms: Vec<Rat> = table
            .summands
            .iter()
            .map(|s| s.window.lam.norm_sq.clone())
            .collect();
        norms.dedup();
        assert_eq!(norms.len(), 3, "mirror labels share a norm");
        for s in &table.summands {
            assert_eq!(s.window.cell_points.len(), 1);
        }
    }

    #[test]
    fn fig1_partition_at_radius_4() {
        let cfg = fig1_config();
        let table = enumerate_summands(&cfg, &rint(4)).unwrap();
        let total: usize = table.summands.iter().map(|s| s.box_points.len()).sum();
        assert_eq!(total, 81, "every box point is in exactly one cell");

        // central cell
        let central = table
            .summands
            .iter()
            .find(|s| s.window.lam.norm_sq.is_zero())
            .unwrap();
        assert_eq!(central.window.cell_points.len(), 7);

        // segment at y = -2 spans x in [-3/2, 1/2]
        let seg = table
            .summands
            .iter()
            .find(|s| s.window.lam.lambda == rv(&[0, 1]))
            .unwrap();
        assert_eq!(
            seg.window.cell_points,
            vec![vec![-1, -2], vec![0, -2]]
        );
    }

    #[test]
    fn toy_semiorthogonality_margins() {
        let cfg = toy_config(2, rint(0));
        let report = check_semiorthogonality(&cfg, &rv(&[1]), &rv(&[2]), None).unwrap();
        assert!(report.passed());
        // w = -2, w' = -3, J of size k in {0, 1, 2}: margins {2, 4, 6}
        let margins: Vec<Rat> = report.margins.keys().cloned().collect();
        assert_eq!(margins, vec![rint(2), rint(4), rint(6)]);
        assert_eq!(report.min_margin, Some(rint(2)));
        assert_eq!(report.checked, 3);
        assert_eq!(report.dropped, 0);
    }

    #[test]
    fn toy_mirror_pair_margin_bound() {
        let cfg = toy_config(2, rint(0));
        // lambda' = -lambda: margin at least |l'|^2 - |l||l'| = 0, strictly
        // positive in every checked instance
        let report = check_semiorthogonality(&cfg, &rv(&[1]), &rv(&[-1]), None).unwrap();
        assert!(report.passed());
        assert!(report.min_margin.unwrap().is_positive());
    }

    #[test]
    fn dropped_j_classes_are_skipped() {
        // GL(2) with V = g ⊕ g: some J land on dotted walls and are dropped
        let rd = RootDatum::gl_blocks(&[2]).unwrap();
        let rep = {
            let mut m = SignedWeightMultiset::new();
            for (w, mult) in crate::weights::adjoint_multiset(&rd).iter() {
                m.add(w.clone(), 2 * mult);
            }
            m
        };
        let cfg = SodConfig::new(rd, rep, QuadraticNorm::standard(2), RatVec::zeros(2)).unwrap();
        let table = enumerate_summands(&cfg, &rint(2)).unwrap();
        let mut total_dropped = 0;
        for (i, a) in table.summands.iter().enumerate() {
            for b in table.summands.iter().skip(i + 1) {
                let (small, large) = if a.window.lam.norm_sq <= b.window.lam.norm_sq {
                    (a, b)
                } else {
                    (b, a)
                };
                let rep = check_semiorthogonality(
                    &cfg,
                    &small.window.lam.lambda,
                    &large.window.lam.lambda,
                    None,
                )
                .unwrap();
                assert!(rep.passed());
                total_dropped += rep.dropped;
            }
        }
        assert!(total_dropped > 0, "expected some walls at this scale");
    }

    #[test]
    fn full_faithfulness_toy() {
        let cfg = toy_config(2, rint(0));
        let report = check_full_faithfulness(&cfg, &rv(&[1]), None).unwrap();
        assert!(report.passed());
        // single window point -2, J in {1 element, 2 elements}
        assert_eq!(report.checked, 2);
        assert_eq!(report.min_margin, Some(rint(1)));

        let fig1 = fig1_config();
        let report = check_full_faithfulness(&fig1, &rv(&[0, 1]), None).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn corrupted_window_is_caught() {
        let cfg = toy_config(2, rint(0));
        // genuine windows: lambda = 1 -> {-2}, lambda' = 2 -> {-3};
        // corrupt the second by +1
        let report = check_semiorthogonality_points(
            &cfg,
            &rv(&[1]),
            &[vec![-2]],
            &rv(&[2]),
            &[vec![-2]],
            None,
        )
        .unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn descent_oracle_matches_locator() {
        let cfg = fig1_config();
        for x in -4..=4 {
            for y in -4..=4 {
                let w = [x, y];
                let raw = locate_raw(&cfg, &w).unwrap();
                let desc = descent_locate(&cfg, &w).unwrap();
                assert_eq!(raw, desc, "disagreement at {w:?}");
            }
        }
    }

    #[test]
    fn delta_lambda_is_levi_invariant() {
        // the window centre is fixed by every reflection of the Levi of lambda
        let rd = RootDatum::gl_blocks(&[3]).unwrap();
        let mut rep = SignedWeightMultiset::new();
        for (w, mult) in crate::weights::adjoint_multiset(&rd).iter() {
            rep.add(w.clone(), 2 * mult);
        }
        let cfg = SodConfig::new(rd, rep, QuadraticNorm::standard(3), RatVec::zeros(3)).unwrap();
        for lambda in [rv(&[-1, 0, 0]), rv(&[-1, -1, 0]), rv(&[0, 0, 0]), rv(&[-2, 1, 1])] {
            let d = lambda_data(&cfg, &lambda).unwrap();
            for &i in &d.levi_roots {
                let rp = &cfg.root_datum().roots()[i];
                let p = pair_int(&d.delta_lambda, &rp.coroot);
                let reflected = &d.delta_lambda
                    - &RatVec::from_ints(&rp.root).scale(&p);
                assert_eq!(reflected, d.delta_lambda, "lambda = {lambda}");
            }
        }
    }

    #[test]
    fn central_weights_separate_blocks() {
        // two-block GL(1) x GL(1) quiver-like config with a central direction
        let rd = RootDatum::torus(2);
        let rep = SignedWeightMultiset::from_entries([
            (vec![1, -1], 1),
            (vec![-1, 1], 1),
        ]);
        let cfg = SodConfig::new(rd, rep, QuadraticNorm::standard(2), RatVec::zeros(2)).unwrap();
        assert_eq!(cfg.central_basis(), &[vec![1, 1]]);
        let table = enumerate_summands(&cfg, &rint(2)).unwrap();
        let blocks = table.blocks();
        assert!(blocks.len() > 1);
        // windows with equal central weight and equal norm never share a cell point
        for s in &table.summands {
            for t in &table.summands {
                if s.window.lam.lambda == t.window.lam.lambda {
                    continue;
                }
                if s.window.central_weight == t.window.central_weight
                    && s.window.lam.norm_sq == t.window.lam.norm_sq
                {
                    for p in &s.window.cell_points {
                        assert!(!t.window.cell_points.contains(p));
                    }
                }
            }
        }
    }
}
