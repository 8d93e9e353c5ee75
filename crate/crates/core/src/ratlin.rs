//! Exact rational linear algebra and feasibility primitives.
//!
//! Everything downstream (root data, polytopes, window cells) is built on the
//! types here. All arithmetic is exact; parsing and printing of rationals
//! round-trip.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rat = num_rational::BigRational;

/// Integer lattice vector (a point of a character or cocharacter lattice).
pub type IntVec = Vec<i64>;

/// `n/d` as a [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `n` as a [`Rat`].
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Fixed-length vector over the rationals.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct RatVec(pub Vec<Rat>);

impl RatVec {
    pub fn zeros(n: usize) -> Self {
        RatVec(vec![Rat::zero(); n])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        RatVec(v.iter().map(|&x| rint(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, c: &Rat) -> RatVec {
        RatVec(self.0.iter().map(|x| x * c).collect())
    }

    /// Entrywise check that every coordinate is an integer.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|x| x.is_integer())
    }

    /// Conversion to an integer vector; fails on non-integral coordinates
    /// or coordinates outside the `i64` range.
    pub fn to_ints(&self) -> Option<IntVec> {
        self.0
            .iter()
            .map(|x| {
                if x.is_integer() {
                    i64::try_from(x.to_integer()).ok()
                } else {
                    None
                }
            })
            .collect()
    }

    /// Clears denominators and divides by the content, keeping orientation.
    /// Returns `None` for the zero vector.
    pub fn primitive(&self) -> Option<IntVec> {
        if self.is_zero() {
            return None;
        }
        let mut lcm = BigInt::one();
        for x in &self.0 {
            lcm = lcm.lcm(x.denom());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        let mut gcd = BigInt::zero();
        for x in &ints {
            gcd = gcd.gcd(x);
        }
        ints.iter()
            .map(|x| i64::try_from(x / &gcd).ok())
            .collect()
    }
}

impl fmt::Debug for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &RatVec {
    type Output = RatVec;
    fn add(self, rhs: &RatVec) -> RatVec {
        debug_assert_eq!(self.len(), rhs.len());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RatVec {
    type Output = RatVec;
    fn sub(self, rhs: &RatVec) -> RatVec {
        debug_assert_eq!(self.len(), rhs.len());
        RatVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RatVec {
    type Output = RatVec;
    fn neg(self) -> RatVec {
        RatVec(self.0.iter().map(|a| -a).collect())
    }
}

/// Natural pairing `sum_i a_i b_i` in dual bases.
pub fn pair(a: &RatVec, b: &RatVec) -> Result<Rat> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.0.iter().zip(&b.0).map(|(x, y)| x * y).sum())
}

/// Pairing of a rational vector against an integer lattice vector.
pub fn pair_int(a: &RatVec, b: &[i64]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.0.iter()
        .zip(b)
        .map(|(x, &y)| x * rint(y))
        .sum()
}

/// Rectangular matrix over the rationals, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        for v in &rows {
            if v.len() != c {
                return Err(Error::Dimension {
                    expected: c,
                    got: v.len(),
                });
            }
        }
        Ok(RatMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flat_map(|v| v.0).collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| RatVec::from_ints(r)).collect())
    }

    pub fn row(&self, i: usize) -> RatVec {
        RatVec(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul_vec(&self, v: &RatVec) -> Result<RatVec> {
        if v.len() != self.cols {
            return Err(Error::Dimension {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(RatVec(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v.0[j]).sum())
                .collect(),
        ))
    }

    pub fn transpose(&self) -> RatMat {
        let mut t = RatMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMat) -> Result<RatMat> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut m = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                m[(i, j)] = (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum();
            }
        }
        Ok(m)
    }

    /// Determinant of the leading `k x k` block, exact Gaussian elimination.
    pub fn leading_minor(&self, k: usize) -> Rat {
        let mut a: Vec<Vec<Rat>> = (0..k)
            .map(|i| (0..k).map(|j| self[(i, j)].clone()).collect())
            .collect();
        let mut det = Rat::one();
        for col in 0..k {
            let pivot = (col..k).find(|&r| !a[r][col].is_zero());
            let Some(p) = pivot else {
                return Rat::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pv = a[col][col].clone();
            det *= &pv;
            for r in col + 1..k {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pv;
                for c in col..k {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
        det
    }

    /// Exact inverse; `None` for singular matrices.
    pub fn inverse(&self) -> Option<RatMat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut row: Vec<Rat> = (0..n).map(|j| self[(i, j)].clone()).collect();
                row.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(p, col);
            let pv = a[col][col].clone();
            for c in 0..2 * n {
                a[col][c] /= pv.clone();
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
        let mut inv = RatMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = a[i][n + j].clone();
            }
        }
        Some(inv)
    }

    /// Solves `A x = b`; `None` when the system is singular or inconsistent.
    pub fn solve(&self, b: &RatVec) -> Option<RatVec> {
        if b.len() != self.rows {
            return None;
        }
        let mut a: Vec<Vec<Rat>> = (0..self.rows)
            .map(|i| {
                let mut row: Vec<Rat> = (0..self.cols).map(|j| self[(i, j)].clone()).collect();
                row.push(b.0[i].clone());
                row
            })
            .collect();
        let (pivots, rank) = row_reduce(&mut a, self.cols);
        // Inconsistency: a zero row with nonzero constant.
        for r in rank..self.rows {
            if !a[r][self.cols].is_zero() {
                return None;
            }
        }
        let mut x = vec![Rat::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = a[r][self.cols].clone();
        }
        // Free variables stay zero; verify in case of rank deficiency.
        let sol = RatVec(x);
        let check = self.mul_vec(&sol).ok()?;
        if &check == b {
            Some(sol)
        } else {
            None
        }
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// In-place reduced row echelon form on `cols` leading columns
/// (extra columns are carried along). Returns pivot columns and rank.
fn row_reduce(a: &mut [Vec<Rat>], cols: usize) -> (Vec<usize>, usize) {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c].clone();
        let width = a[r].len();
        for j in 0..width {
            a[r][j] /= pv.clone();
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in 0..width {
                let sub = &f * &a[r][j];
                a[i][j] -= sub;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (pivots, r)
}

/// Exact basis of `{ x : row . x = 0 for every row }` in ambient rank `n`.
///
/// The basis comes from the reduced row echelon form: one vector per free
/// column, with a `1` in the free coordinate. Deterministic.
pub fn kernel_basis(rows: &[RatVec], n: usize) -> Result<Vec<RatVec>> {
    for v in rows {
        if v.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: v.len(),
            });
        }
    }
    let mut a: Vec<Vec<Rat>> = rows.iter().map(|v| v.0.clone()).collect();
    let (pivots, _) = if a.is_empty() {
        (Vec::new(), 0)
    } else {
        row_reduce(&mut a, n)
    };
    let mut basis = Vec::new();
    for free in 0..n {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(RatVec(v));
    }
    Ok(basis)
}

/// Affine functional `coeffs . x + constant`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub coeffs: RatVec,
    pub constant: Rat,
}

impl AffineForm {
    pub fn new(coeffs: RatVec, constant: Rat) -> Self {
        AffineForm { coeffs, constant }
    }

    pub fn eval(&self, x: &RatVec) -> Result<Rat> {
        Ok(pair(&self.coeffs, x)? + &self.constant)
    }
}

/// A conjunction of affine constraints over a common rank:
/// `strict`: `f(x) > 0`, `weak`: `f(x) >= 0`, `eqs`: `f(x) = 0`.
#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub rank: usize,
    pub strict: Vec<AffineForm>,
    pub weak: Vec<AffineForm>,
    pub eqs: Vec<AffineForm>,
}

/// Default cap on the number of variables handled by Fourier-Motzkin.
pub const DEFAULT_FM_CAP: usize = 8;

#[derive(Clone)]
struct FmConstraint {
    coeffs: Vec<Rat>,
    constant: Rat,
    strict: bool,
}

impl FmConstraint {
    fn eval_tail(&self, from: usize, x: &[Rat]) -> Rat {
        let mut v = self.constant.clone();
        for (j, c) in self.coeffs.iter().enumerate().skip(from) {
            if !c.is_zero() {
                v += c * &x[j];
            }
        }
        v
    }
}

impl LinearSystem {
    pub fn new(rank: usize) -> Self {
        LinearSystem {
            rank,
            ..Default::default()
        }
    }

    fn check_dims(&self) -> Result<()> {
        for f in self.strict.iter().chain(&self.weak).chain(&self.eqs) {
            if f.coeffs.len() != self.rank {
                return Err(Error::Dimension {
                    expected: self.rank,
                    got: f.coeffs.len(),
                });
            }
        }
        Ok(())
    }

    /// Exact feasibility by Fourier-Motzkin elimination in variable index
    /// order. Returns a rational witness when feasible: back-substitution
    /// picks the midpoint of each residual interval, so the output is
    /// deterministic.
    pub fn feasible(&self, cap: usize) -> Result<Option<RatVec>> {
        self.check_dims()?;
        if self.rank > cap {
            return Err(Error::Capacity(format!(
                "Fourier-Motzkin limited to {cap} variables, got {}",
                self.rank
            )));
        }
        let mut constraints: Vec<FmConstraint> = Vec::new();
        for f in &self.strict {
            constraints.push(FmConstraint {
                coeffs: f.coeffs.0.clone(),
                constant: f.constant.clone(),
                strict: true,
            });
        }
        for f in &self.weak {
            constraints.push(FmConstraint {
                coeffs: f.coeffs.0.clone(),
                constant: f.constant.clone(),
                strict: false,
            });
        }
        for f in &self.eqs {
            constraints.push(FmConstraint {
                coeffs: f.coeffs.0.clone(),
                constant: f.constant.clone(),
                strict: false,
            });
            constraints.push(FmConstraint {
                coeffs: f.coeffs.0.iter().map(|x| -x).collect(),
                constant: -f.constant.clone(),
                strict: false,
            });
        }

        // levels[k] holds the system before eliminating variable k.
        let mut levels: Vec<Vec<FmConstraint>> = Vec::with_capacity(self.rank);
        let mut current = constraints;
        for k in 0..self.rank {
            levels.push(current.clone());
            let mut next: Vec<FmConstraint> = Vec::new();
            let mut lowers: Vec<&FmConstraint> = Vec::new();
            let mut uppers: Vec<&FmConstraint> = Vec::new();
            for c in &current {
                match c.coeffs[k].cmp(&Rat::zero()) {
                    std::cmp::Ordering::Greater => lowers.push(c),
                    std::cmp::Ordering::Less => uppers.push(c),
                    std::cmp::Ordering::Equal => next.push(c.clone()),
                }
            }
            for lo in &lowers {
                for up in &uppers {
                    // (-up_k) * lo + lo_k * up has zero coefficient on x_k.
                    let a = -&up.coeffs[k];
                    let b = lo.coeffs[k].clone();
                    let coeffs: Vec<Rat> = lo
                        .coeffs
                        .iter()
                        .zip(&up.coeffs)
                        .map(|(l, u)| l * &a + u * &b)
                        .collect();
                    let constant = &lo.constant * &a + &up.constant * &b;
                    next.push(FmConstraint {
                        coeffs,
                        constant,
                        strict: lo.strict || up.strict,
                    });
                }
            }
            current = next;
        }

        // Variable-free constraints decide feasibility.
        for c in &current {
            if (c.strict && !c.constant.is_positive())
                || (!c.strict && c.constant.is_negative())
            {
                return Ok(None);
            }
        }

        // Back-substitute from the innermost level outwards.
        let mut x = vec![Rat::zero(); self.rank];
        for k in (0..self.rank).rev() {
            let mut lo: Option<(Rat, bool)> = None;
            let mut hi: Option<(Rat, bool)> = None;
            for c in &levels[k] {
                let ck = &c.coeffs[k];
                if ck.is_zero() {
                    continue;
                }
                let rest = c.eval_tail(k + 1, &x);
                let bound = -rest / ck;
                if ck.is_positive() {
                    // x_k >= bound (or >)
                    if lo.as_ref().map_or(true, |(b, s)| {
                        bound > *b || (bound == *b && c.strict && !s)
                    }) {
                        lo = Some((bound, c.strict));
                    }
                } else if hi.as_ref().map_or(true, |(b, s)| {
                    bound < *b || (bound == *b && c.strict && !s)
                }) {
                    hi = Some((bound, c.strict));
                }
            }
            x[k] = match (&lo, &hi) {
                (Some((l, _)), Some((h, _))) => (l + h) / rint(2),
                (Some((l, strict)), None) => {
                    if *strict {
                        l + Rat::one()
                    } else {
                        l.clone()
                    }
                }
                (None, Some((h, strict))) => {
                    if *strict {
                        h - Rat::one()
                    } else {
                        h.clone()
                    }
                }
                (None, None) => Rat::zero(),
            };
        }
        Ok(Some(RatVec(x)))
    }
}
