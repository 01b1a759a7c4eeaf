//! Orbits of points in `ℙ^s` under integer linear automorphisms, incidence
//! with hypersurfaces, and the point-separation rank test.
//!
//! Everything is exact over `BigInt`; orbit coordinates grow geometrically.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sparse::SparseSetWindow;

/// A point of `ℙ^s` stored as its primitive integer vector whose first
/// nonzero entry is positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<BigInt>,
}

impl ProjectivePoint {
    pub fn new(coords: Vec<BigInt>) -> Result<Self> {
        let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Err(Error::Input("a projective point needs a nonzero coordinate".into()));
        }
        let lead_negative = coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        let g = if lead_negative { -g } else { g };
        Ok(ProjectivePoint { coords: coords.into_iter().map(|c| c / &g).collect() })
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// `s + 1`.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(BigInt::to_string).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.coords.iter().map(BigInt::to_string).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        let coords = parts
            .iter()
            .map(|p| p.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        ProjectivePoint::new(coords).map_err(serde::de::Error::custom)
    }
}

type Matrix = Vec<Vec<BigInt>>;

/// Rank by fraction-free (Bareiss) elimination; every intermediate entry
/// is a minor of the input, so the divisions are exact.
pub fn bareiss_rank(matrix: &[Vec<BigInt>]) -> usize {
    let mut a: Matrix = matrix.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Determinant of a square matrix by Bareiss elimination.
pub fn determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Matrix = matrix.to_vec();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank by Gaussian elimination over `ℚ`, the slow reference for
/// [`bareiss_rank`].
pub fn rational_rank(matrix: &[Vec<BigInt>]) -> usize {
    let mut a: Vec<Vec<BigRational>> =
        matrix.iter().map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    reduce_rational(&mut a).len()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn reduce_rational(a: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, v) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= v * &f;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of the integer kernel of `matrix` (vectors `v` with `Av = 0`),
/// each scaled to be primitive.
pub fn integer_kernel(matrix: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigRational>> =
        matrix.iter().map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let pivots = reduce_rational(&mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        basis.push(ints.into_iter().map(|x| x / &g).collect());
    }
    basis
}

/// An invertible integer matrix acting on `ℙ^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearAutomorphism {
    rows: Matrix,
}

impl LinearAutomorphism {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n < 2 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!(
                "automorphism of ℙ^s needs a square matrix of size at least 2, got {n} rows"
            )));
        }
        if determinant(&rows).is_zero() {
            return Err(Error::Input("matrix is singular".into()));
        }
        Ok(LinearAutomorphism { rows })
    }

    /// Row-major entries; the size is the square root of their number.
    pub fn from_row_major(entries: &[i64]) -> Result<Self> {
        let n = (1..=entries.len()).find(|k| k * k >= entries.len()).unwrap_or(0);
        if n * n != entries.len() {
            return Err(Error::Input(format!("{} matrix entries do not form a square", entries.len())));
        }
        Self::new(entries.chunks(n).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn diagonal(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let mut flat = vec![0; n * n];
        for (i, &e) in entries.iter().enumerate() {
            flat[i * n + i] = e;
        }
        Self::from_row_major(&flat)
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn apply(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        if p.len() != self.size() {
            return Err(Error::Input(format!("point {p} has {} coordinates, matrix acts on {}", p.len(), self.size())));
        }
        let image = self.rows.iter().map(|row| row.iter().zip(p.coords()).map(|(a, x)| a * x).sum()).collect();
        ProjectivePoint::new(image)
    }

    /// The adjugate, which acts on `ℙ^s` as the inverse.
    pub fn inverse(&self) -> Self {
        let n = self.size();
        let cofactor = |i: usize, j: usize| {
            let minor: Matrix = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| self.rows[r][c].clone()).collect())
                .collect();
            let d = determinant(&minor);
            if (i + j).is_multiple_of(2) {
                d
            } else {
                -d
            }
        };
        let adj = (0..n).map(|j| (0..n).map(|i| cofactor(i, j)).collect()).collect();
        LinearAutomorphism { rows: adj }
    }
}

/// A homogeneous polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousForm {
    vars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl HomogeneousForm {
    pub fn new(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Result<Self> {
        let mut map: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        let mut degree = None;
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::Input(format!("exponent vector {e:?} should have {vars} entries")));
            }
            let d: u32 = e.iter().sum();
            if *degree.get_or_insert(d) != d {
                return Err(Error::Input("form is not homogeneous".into()));
            }
            *map.entry(e).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        if map.is_empty() {
            return Err(Error::Input("the zero form has no zero locus to test".into()));
        }
        let degree = map.keys().next().map_or(0, |e| e.iter().sum());
        Ok(HomogeneousForm { vars, degree, terms: map })
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear(coeffs: &[BigInt]) -> Result<Self> {
        let n = coeffs.len();
        Self::new(
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c.clone())
            }),
        )
    }

    /// Parses either a polynomial in `x0, …, xs` such as `x1 - x0` or
    /// `3*x0^2 - x1*x2`, or the list form `c:e0,e1,…;c:e0,e1,…`.
    pub fn parse(vars: usize, s: &str) -> Result<Self> {
        if s.contains(':') {
            let terms = s
                .split(';')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    let (c, e) = t.split_once(':').ok_or_else(|| Error::Parse(format!("form term {t:?}")))?;
                    let c = c.trim().parse::<BigInt>().map_err(|e| Error::Parse(format!("coefficient {c:?}: {e}")))?;
                    let e = e
                        .split(',')
                        .map(|x| x.trim().parse::<u32>().map_err(|err| Error::Parse(format!("exponent {x:?}: {err}"))))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((e, c))
                })
                .collect::<Result<Vec<_>>>()?;
            return Self::new(vars, terms);
        }
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'-' => (true, &rest[1..]),
                b'+' => (false, &rest[1..]),
                _ => (false, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (e, c) = parse_form_term(vars, &body[..end])?;
            terms.push((e, if negative { -c } else { c }));
            rest = &body[end..];
        }
        Self::new(vars, terms)
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn eval(&self, p: &ProjectivePoint) -> Result<BigInt> {
        if p.len() != self.vars {
            return Err(Error::Input(format!("form in {} variables evaluated at {p}", self.vars)));
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| e.iter().zip(p.coords()).fold(c.clone(), |acc, (&k, x)| acc * x.pow(k)))
            .sum())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.vars != other.vars {
            return Err(Error::VarMismatch(self.vars, other.vars));
        }
        let mut out = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.push((e1.iter().zip(e2).map(|(a, b)| a + b).collect(), c1 * c2));
            }
        }
        Self::new(self.vars, out)
    }

    /// A nonzero form of degree `d` vanishing at all the given points, if one
    /// exists, from an exact kernel vector of the evaluation matrix.
    pub fn vanishing_at(points: &[ProjectivePoint], d: u32) -> Result<Option<Self>> {
        let vars = points.first().map_or(0, ProjectivePoint::len);
        let monos = monomials_of_degree(vars, d);
        let rows: Matrix = points.iter().map(|p| monos.iter().map(|e| monomial_value(e, p)).collect()).collect();
        match integer_kernel(&rows).into_iter().next() {
            None => Ok(None),
            Some(v) => Self::new(vars, monos.into_iter().zip(v)).map(Some),
        }
    }
}

fn parse_form_term(vars: usize, t: &str) -> Result<(Vec<u32>, BigInt)> {
    let err = || Error::Parse(format!("form term {t:?}; expected e.g. 3*x0^2*x1"));
    let mut coeff = BigInt::one();
    let mut e = vec![0u32; vars];
    let digits = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
    if digits > 0 {
        coeff = t[..digits].parse().map_err(|_| err())?;
    }
    let rest = t[digits..].trim_start_matches('*');
    if rest.is_empty() {
        return if digits > 0 && vars > 0 && e.iter().all(|&x| x == 0) { Ok((e, coeff)) } else { Err(err()) };
    }
    for factor in rest.split('*') {
        let f = factor.strip_prefix('x').ok_or_else(err)?;
        let (idx, pow) = match f.split_once('^') {
            Some((i, p)) => (i, p.parse::<u32>().map_err(|_| err())?),
            None => (f, 1),
        };
        let i: usize = idx.parse().map_err(|_| err())?;
        if i >= vars {
            return Err(Error::Parse(format!("variable x{i} out of range for ℙ^{}", vars.saturating_sub(1))));
        }
        e[i] += pow;
    }
    Ok((e, coeff))
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let sep = if first { "" } else { " " };
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => mono.join("*"),
                (false, false) => format!("{mag}*{}", mono.join("*")),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, "{sep}{sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Exponent vectors of degree `d` in `vars` variables, lexicographically
/// descending.
pub fn monomials_of_degree(vars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == vars {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            rec(vars, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars > 0 {
        rec(vars, d, &mut Vec::new(), &mut out);
    }
    out
}

fn monomial_value(e: &[u32], p: &ProjectivePoint) -> BigInt {
    e.iter().zip(p.coords()).map(|(&k, x)| x.pow(k)).product()
}

/// Evaluation matrix: one row per point, one column per degree-`d` monomial.
pub fn evaluation_matrix(points: &[ProjectivePoint], d: u32) -> Vec<Vec<BigInt>> {
    let vars = points.first().map_or(0, ProjectivePoint::len);
    let monos = monomials_of_degree(vars, d);
    points.iter().map(|p| monos.iter().map(|e| monomial_value(e, p)).collect()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub direction: Direction,
    pub points: Vec<ProjectivePoint>,
    /// First `(i, j)` with `j < i` and `p_i = p_j`.
    pub repetition: Option<(usize, usize)>,
}

/// `σ^{±i}(x)` for `0 ≤ i < h`.
pub fn orbit(x: &ProjectivePoint, sigma: &LinearAutomorphism, h: usize, direction: Direction) -> Result<Orbit> {
    if h == 0 {
        return Err(Error::Input("orbit length must be positive".into()));
    }
    let map = match direction {
        Direction::Forward => sigma.clone(),
        Direction::Backward => sigma.inverse(),
    };
    let mut points = vec![x.clone()];
    let mut seen = BTreeMap::from([(x.clone(), 0usize)]);
    let mut repetition = None;
    for i in 1..h {
        let next = map.apply(&points[i - 1])?;
        if repetition.is_none() {
            if let Some(&j) = seen.get(&next) {
                repetition = Some((i, j));
            }
        }
        seen.entry(next.clone()).or_insert(i);
        points.push(next);
    }
    Ok(Orbit { direction, points, repetition })
}

/// `{i : F(p_i) = 0}` as a set on the window `ℕ_{len}`.
pub fn incidence_set(points: &[ProjectivePoint], form: &HomogeneousForm) -> Result<SparseSetWindow> {
    let mut members = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if form.eval(p)?.is_zero() {
            members.push(i as u64);
        }
    }
    SparseSetWindow::new(members, points.len() as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub ok: bool,
    pub degree: u32,
    pub rank: usize,
    /// First point lying in the span of the others at this degree.
    pub failing_index: Option<usize>,
}

/// Whether degree-`d` forms separate the points: for each point there is a
/// form vanishing at all others but not at it. Equivalently the evaluation
/// matrix has full row rank.
pub fn separates(points: &[ProjectivePoint], d: u32) -> Result<SeparationReport> {
    check_distinct(points)?;
    let e = evaluation_matrix(points, d);
    let rank = bareiss_rank(&e);
    if rank == points.len() {
        return Ok(SeparationReport { ok: true, degree: d, rank, failing_index: None });
    }
    let failing_index = (0..points.len()).find(|&i| {
        let without: Matrix = e.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, r)| r.clone()).collect();
        bareiss_rank(&without) == rank
    });
    Ok(SeparationReport { ok: false, degree: d, rank, failing_index })
}

fn check_distinct(points: &[ProjectivePoint]) -> Result<()> {
    let vars = points.first().map_or(0, ProjectivePoint::len);
    if let Some(p) = points.iter().find(|p| p.len() != vars) {
        return Err(Error::Input(format!("point {p} does not lie in ℙ^{}", vars.saturating_sub(1))));
    }
    let mut seen = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = seen.insert(p, i) {
            return Err(Error::Input(format!("points {j} and {i} coincide at {p}")));
        }
    }
    Ok(())
}

/// Smallest `D` with `separates(points, D)`; distinct points are always
/// separated in degree `n - 1`, so the search stays in `[0, n-1]`.
pub fn min_separating_degree(points: &[ProjectivePoint]) -> Result<u32> {
    check_distinct(points)?;
    let (mut lo, mut hi) = (0u32, points.len().saturating_sub(1) as u32);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if separates(points, mid)?.ok {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub n: usize,
    pub degree: u32,
    /// `⌊δn⌋`.
    pub budget: u64,
    pub within_budget: bool,
    /// `D(n)` of the translate `σ^p(P_n)` for each sampled `p`.
    pub translates: BTreeMap<i64, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationProfile {
    pub delta: String,
    pub n_max: usize,
    pub rows: Vec<ProfileRow>,
    /// Smallest `n₁` with `D(n) ≤ ⌊δn⌋` for all `n₁ ≤ n ≤ n_max`; a window
    /// observation only.
    pub observed_threshold: Option<usize>,
    pub translation_invariant: bool,
}

/// `D(n)` for `P_n = {σ^{-i}(x) : 0 ≤ i < n}` and `1 ≤ n ≤ n_max`, with the
/// same search repeated on `σ^p(P_n)` for every `p` in `shifts`.
pub fn separation_profile(
    x: &ProjectivePoint,
    sigma: &LinearAutomorphism,
    delta: Ratio<u64>,
    n_max: usize,
    shifts: &[i64],
) -> Result<SeparationProfile> {
    if *delta.numer() == 0 {
        return Err(Error::Input("δ must be positive".into()));
    }
    let ahead = shifts.iter().copied().filter(|p| *p > 0).max().unwrap_or(0) as usize;
    let behind = shifts.iter().copied().filter(|p| *p < 0).map(|p| (-p) as usize).max().unwrap_or(0);
    let back = orbit(x, sigma, n_max + behind, Direction::Backward)?;
    let fwd = orbit(x, sigma, ahead + 1, Direction::Forward)?;
    // `line[k + ahead]` is σ^{k}(x) for −(n_max+behind−1) ≤ k ≤ ahead, stored in reverse.
    let mut line: Vec<ProjectivePoint> = fwd.points.iter().rev().cloned().collect();
    line.extend(back.points.iter().skip(1).cloned());
    if let Some((i, j)) = first_repeat(&line) {
        return Err(Error::Input(format!(
            "the orbit of {x} is finite: σ^{}(x) = σ^{}(x)",
            ahead as i64 - i as i64,
            ahead as i64 - j as i64
        )));
    }
    // σ^{p−i}(x) sits at index ahead − p + i.
    let window = |p: i64, n: usize| -> Vec<ProjectivePoint> {
        let start = (ahead as i64 - p) as usize;
        line[start..start + n].to_vec()
    };
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let degree = min_separating_degree(&window(0, n))?;
        let budget = (delta * n as u64).to_integer();
        let mut translates = BTreeMap::new();
        for &p in shifts {
            translates.insert(p, min_separating_degree(&window(p, n))?);
        }
        rows.push(ProfileRow { n, degree, budget, within_budget: u64::from(degree) <= budget, translates });
    }
    let observed_threshold = match rows.iter().rposition(|r| !r.within_budget) {
        None => Some(1),
        Some(k) if k + 1 < rows.len() => Some(rows[k + 1].n),
        Some(_) => None,
    };
    let translation_invariant = rows.iter().all(|r| r.translates.values().all(|&d| d == r.degree));
    Ok(SeparationProfile {
        delta: format!("{}/{}", delta.numer(), delta.denom()),
        n_max,
        rows,
        observed_threshold,
        translation_invariant,
    })
}

fn first_repeat(points: &[ProjectivePoint]) -> Option<(usize, usize)> {
    let mut seen = BTreeMap::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(&j) = seen.get(p) {
            return Some((i, j));
        }
        seen.insert(p, i);
    }
    None
}

/// `diag(1, 2, 3)` acting on `(1:1:1)`.
pub fn diagonal_fixture() -> (ProjectivePoint, LinearAutomorphism) {
    let x = ProjectivePoint::from_i64(&[1, 1, 1]).expect("nonzero point");
    let sigma = LinearAutomorphism::diagonal(&[1, 2, 3]).expect("invertible diagonal");
    (x, sigma)
}

/// Parses `a/b` or an integer as a positive rational.
pub fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let err = || Error::Parse(format!("rational {s:?}; expected e.g. 1/2"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (n.trim().parse::<u64>().map_err(|_| err())?, d.trim().parse::<u64>().map_err(|_| err())?),
        None => (s.trim().parse::<u64>().map_err(|_| err())?, 1),
    };
    if d == 0 {
        return Err(err());
    }
    Ok(Ratio::new(n, d))
}

/// Helper for reports: coordinates that fit in `i64`.
pub fn small_coords(p: &ProjectivePoint) -> Option<Vec<i64>> {
    p.coords().iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> ProjectivePoint {
        ProjectivePoint::from_i64(c).unwrap()
    }

    fn big(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn canonical_points() {
        assert_eq!(pt(&[-2, 4, 6]), pt(&[1, -2, -3]));
        assert_eq!(pt(&[0, -3, 6]).coords(), &[BigInt::from(0), BigInt::from(1), BigInt::from(-2)]);
        assert!(ProjectivePoint::from_i64(&[0, 0]).is_err());
        assert_eq!(pt(&[2, 4]).to_string(), "(1:2)");
    }

    #[test]
    fn ranks_and_determinants() {
        let m = big(&[&[2, 4, 6], &[1, 2, 3], &[0, 1, 1]]);
        assert_eq!(bareiss_rank(&m), 2);
        assert_eq!(rational_rank(&m), 2);
        assert_eq!(determinant(&m), BigInt::zero());
        let m = big(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m), BigInt::from(-1));
        let m = big(&[&[0, 0, 1], &[0, 2, 5]]);
        assert_eq!(bareiss_rank(&m), 2);
    }

    #[test]
    fn adjugate_inverts_up_to_scale() {
        let s = LinearAutomorphism::from_row_major(&[2, 1, 0, 0, 1, 0, 1, 0, 3]).unwrap();
        let p = pt(&[5, -7, 2]);
        assert_eq!(s.inverse().apply(&s.apply(&p).unwrap()).unwrap(), p);
        assert!(LinearAutomorphism::from_row_major(&[1, 2, 2, 4]).is_err());
        assert!(LinearAutomorphism::from_row_major(&[1, 2, 3]).is_err());
    }

    #[test]
    fn orbit_examples() {
        let (x, s) = diagonal_fixture();
        let o = orbit(&x, &s, 5, Direction::Forward).unwrap();
        assert_eq!(o.points[3], pt(&[1, 8, 27]));
        assert!(o.repetition.is_none());
        let b = orbit(&x, &s, 3, Direction::Backward).unwrap();
        assert_eq!(b.points[2], pt(&[36, 9, 4]));
        let id = LinearAutomorphism::diagonal(&[1, 1, 1]).unwrap();
        assert_eq!(orbit(&x, &id, 4, Direction::Forward).unwrap().repetition, Some((1, 0)));
        let cyc = LinearAutomorphism::from_row_major(&[0, 0, 1, 1, 0, 0, 0, 1, 0]).unwrap();
        assert_eq!(orbit(&pt(&[1, 2, 3]), &cyc, 6, Direction::Forward).unwrap().repetition, Some((3, 0)));
    }

    #[test]
    fn form_parsing() {
        let f = HomogeneousForm::parse(3, "x1-x0").unwrap();
        assert_eq!(f, HomogeneousForm::parse(3, "-1:1,0,0;1:0,1,0").unwrap());
        assert_eq!(f.to_string(), "-x0 + x1");
        let g = HomogeneousForm::parse(3, "3*x0^2 - x1*x2 + 2x2^2").unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(g.eval(&pt(&[1, 1, 1])).unwrap(), BigInt::from(4));
        assert!(HomogeneousForm::parse(3, "x0 + x1^2").is_err());
        assert!(HomogeneousForm::parse(3, "x0 - x0").is_err());
        assert!(HomogeneousForm::parse(3, "x3").is_err());
    }

    #[test]
    fn incidence_examples() {
        let (x, s) = diagonal_fixture();
        let o = orbit(&x, &s, 50, Direction::Forward).unwrap();
        assert!(incidence_set(&o.points, &HomogeneousForm::parse(3, "x0").unwrap()).unwrap().is_empty());
        let s1 = incidence_set(&o.points, &HomogeneousForm::parse(3, "x1-x0").unwrap()).unwrap();
        assert_eq!(s1.members(), &[0]);
        let line = HomogeneousForm::vanishing_at(&[o.points[2].clone(), o.points[5].clone()], 1).unwrap().unwrap();
        let s2 = incidence_set(&o.points, &line).unwrap();
        assert!(s2.contains(2) && s2.contains(5));
    }

    #[test]
    fn separation_examples() {
        assert!(separates(&[pt(&[1, 0, 0]), pt(&[0, 1, 0])], 1).unwrap().ok);
        let collinear: Vec<_> = (0..4).map(|i| pt(&[1, i, 0])).collect();
        let r = separates(&collinear, 2).unwrap();
        assert!(!r.ok);
        assert_eq!(r.failing_index, Some(0));
        assert!(separates(&collinear, 3).unwrap().ok);
        assert!(separates(&[pt(&[1, 1, 1]), pt(&[2, 2, 2])], 1).is_err());
        assert_eq!(min_separating_degree(&[pt(&[1, 2, 3])]).unwrap(), 0);
    }

    #[test]
    fn small_profile() {
        let (x, s) = diagonal_fixture();
        let prof = separation_profile(&x, &s, Ratio::new(1, 2), 6, &[-1, 0, 2]).unwrap();
        assert_eq!(prof.rows[0].degree, 0);
        assert!(prof.translation_invariant);
        let id = LinearAutomorphism::diagonal(&[1, 1, 1]).unwrap();
        assert!(separation_profile(&x, &id, Ratio::new(1, 2), 3, &[]).is_err());
    }

    #[test]
    fn ratio_parsing() {
        assert_eq!(parse_ratio("1/2").unwrap(), Ratio::new(1, 2));
        assert_eq!(parse_ratio("3").unwrap(), Ratio::new(3, 1));
        assert!(parse_ratio("1/0").is_err());
    }
}
