//! Right and left torsion extensions of a generalized naive sequence.
//!
//! The right extension is `ℋ_n = ℐ_{n+m} : ℐ_m^{σ^n}` and the left one
//! `ℋ^ℓ_n = (ℐ_{n+m} : ℐ_m)^{σ^{-m}}`, both independent of `m ≥ M`. Each is
//! computed at several values of `m`, compared, and then packaged as a
//! stabilized sequence whose stable form shares `A` and `B` (right) or
//! `B` and `C` (left) with the input.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::data::{OrbitId, OrbitIdealData};
use super::seq::{validate_gen_naive, IdealSequence, ValidationReport};
use super::stable::{decompose_stable, extract, verify_recomposition, StableDecomposition};
use crate::error::{Error, Result};
use crate::monomial::MonomialIdeal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Right => "right",
            Side::Left => "left",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionResult {
    pub side: Side,
    /// The torsion sequence `ℋ_n` (or `ℋ^ℓ_n`).
    pub sequence: IdealSequence,
    /// `𝒟` on the right, `𝒟^ℓ` on the left, per orbit.
    pub d: BTreeMap<OrbitId, Vec<MonomialIdeal>>,
    /// Stable decomposition of the input sequence.
    pub source: StableDecomposition,
    /// Stable decomposition of the torsion sequence.
    pub stable: StableDecomposition,
    /// Values of `m` at which every `ℋ_n(m)` was computed and compared.
    pub checked_m: Vec<usize>,
    /// `ℋ_n` was computed directly for `0 ≤ n ≤ direct_window`.
    pub direct_window: usize,
    pub validation: ValidationReport,
}

impl TorsionResult {
    /// The part of the input's stable form that `d` is compared against:
    /// `𝒞` on the right, `𝒜` on the left.
    pub fn reference(&self) -> BTreeMap<OrbitId, Vec<MonomialIdeal>> {
        match self.side {
            Side::Right => self.source.c_lists(),
            Side::Left => self.source.a_lists(),
        }
    }
}

/// `ℋ_n(m)` on the given side from precomputed terms `ℐ_0, ℐ_1, …`.
pub fn torsion_term(terms: &[OrbitIdealData], side: Side, n: usize, m: usize) -> Result<OrbitIdealData> {
    match side {
        Side::Right => terms[n + m].colon(&terms[m].twist(n as i64)),
        Side::Left => Ok(terms[n + m].colon(&terms[m])?.twist(-(m as i64))),
    }
}

/// Maximal right torsion extension `ℋ_n = ℐ_{n+m} : ℐ_m^{σ^n}`.
pub fn right_torsion(seq: &IdealSequence) -> Result<TorsionResult> {
    torsion(seq, Side::Right)
}

/// Maximal left torsion extension `ℋ^ℓ_n = (ℐ_{n+m} : ℐ_m)^{σ^{-m}}`.
pub fn left_torsion(seq: &IdealSequence) -> Result<TorsionResult> {
    torsion(seq, Side::Left)
}

pub fn torsion(seq: &IdealSequence, side: Side) -> Result<TorsionResult> {
    let report = validate_gen_naive(seq)?;
    if !report.ok {
        let v = report.first_violation.expect("failed report carries a witness");
        return Err(Error::NotGenNaive(format!(
            "{:?} violated at (m, n) = ({}, {}), orbit {:?}, slot {:?}",
            v.kind, v.m, v.n, v.orbit, v.slot
        )));
    }
    let source = decompose_stable(seq)?;
    let big_m = source.threshold;
    let h = seq.horizon();

    // Sequences with closed-form terms are checked on the whole window;
    // tables only as far as two values of m reach.
    let (direct_window, upper) = match seq.last_index() {
        None => (h, h + big_m + 2),
        Some(last) => {
            let window = last.saturating_sub(big_m + 1);
            if last < big_m + 1 || window < big_m + 1 {
                return Err(Error::Input(format!(
                    "table horizon {last} is too short for torsion at M = {big_m}; need at least {}",
                    3 * big_m + 2
                )));
            }
            (window, last)
        }
    };
    let terms = seq.terms(upper)?;

    let mut hs = Vec::with_capacity(direct_window + 1);
    let mut checked_m: Vec<usize> = (big_m..=big_m + 2).collect();
    for n in 0..=direct_window {
        let ms: Vec<usize> = (big_m..=big_m + 2).filter(|m| n + m <= upper).collect();
        checked_m.retain(|m| ms.contains(m));
        let first = torsion_term(&terms, side, n, ms[0])?;
        for &m in &ms[1..] {
            let other = torsion_term(&terms, side, n, m)?;
            if let Some((a, j)) = other.first_difference(&first) {
                return Err(Error::NotStabilized(format!(
                    "{side} torsion term n = {n} depends on m: m = {} gives {} but m = {m} gives {} at orbit {a} slot {j}",
                    ms[0],
                    first.slot(a, j),
                    other.slot(a, j)
                )));
            }
        }
        if let Some((a, j)) = terms[n].first_non_contained(&first)? {
            return Err(Error::Invariant(format!(
                "term n = {n} is not contained in its {side} torsion at orbit {a} slot {j}"
            )));
        }
        hs.push(first);
    }

    let frames: BTreeMap<OrbitId, (i64, usize)> = source.orbits.iter().map(|(a, o)| (*a, (o.base, o.width))).collect();
    let stable = extract(&hs, &frames, big_m, big_m)?;
    verify_recomposition(&stable, &hs, big_m)
        .map_err(|e| Error::Invariant(format!("{side} torsion stable form: {e}")))?;

    let mut d = BTreeMap::new();
    for (a, o) in &stable.orbits {
        let src = &source.orbits[a];
        let (kept_same, extension, reference) = match side {
            Side::Right => (o.a == src.a && o.b == src.b, &o.c, &src.c),
            Side::Left => (o.c == src.c && o.b == src.b, &o.a, &src.a),
        };
        if !kept_same {
            return Err(Error::Invariant(format!(
                "{side} torsion changed the fixed part of the stable form on orbit {a}"
            )));
        }
        for (r, e) in reference.iter().zip(extension) {
            if !r.is_subset(e)? {
                return Err(Error::Invariant(format!(
                    "{side} torsion extension {e} does not contain {r} on orbit {a}"
                )));
            }
        }
        d.insert(*a, extension.clone());
    }

    let head = hs[..big_m].to_vec();
    let sequence = IdealSequence::stabilized(head, stable.clone(), h)?;
    let validation = validate_gen_naive(&sequence)?;
    if !validation.ok {
        return Err(Error::Invariant(format!(
            "{side} torsion sequence is not generalized naive: {:?}",
            validation.first_violation
        )));
    }
    Ok(TorsionResult { side, sequence, d, source, stable, checked_m, direct_window, validation })
}

/// Where the torsion extension differs from the input's stable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureWitness {
    pub orbit: OrbitId,
    /// Offset inside the `𝒞` (right) or `𝒜` (left) list.
    pub index: usize,
    pub expected: MonomialIdeal,
    pub found: MonomialIdeal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideVerdict {
    pub closed: bool,
    pub witness: Option<ClosureWitness>,
    /// First `n ≤ H` with `ℋ_n ≠ ℐ_n`.
    pub first_differing_term: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionVerdict {
    pub right: SideVerdict,
    pub left: SideVerdict,
}

impl TorsionVerdict {
    pub fn right_closed(&self) -> bool {
        self.right.closed
    }

    pub fn left_closed(&self) -> bool {
        self.left.closed
    }
}

/// Closedness of one side: `𝒟 = 𝒞` (right) or `𝒟^ℓ = 𝒜` (left) on every orbit,
/// cross-checked against `ℋ_n = ℐ_n` for `M ≤ n ≤ H`.
pub fn side_verdict(seq: &IdealSequence, res: &TorsionResult) -> Result<SideVerdict> {
    let mut witness = None;
    'orbits: for (a, reference) in res.reference() {
        for (k, (r, e)) in reference.iter().zip(&res.d[&a]).enumerate() {
            if r != e {
                witness = Some(ClosureWitness { orbit: a, index: k, expected: r.clone(), found: e.clone() });
                break 'orbits;
            }
        }
    }
    let first_differing_term = seq.first_difference(&res.sequence)?;
    let big_m = res.source.threshold;
    let h = seq.horizon().min(res.sequence.horizon());
    let stable_differs = (big_m..=h)
        .map(|n| Ok(seq.term(n)? != res.sequence.term(n)?))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .any(|b| b);
    if stable_differs != witness.is_some() {
        return Err(Error::Invariant(format!(
            "{} verdict from the stable form disagrees with the term comparison",
            res.side
        )));
    }
    Ok(SideVerdict { closed: witness.is_none(), witness, first_differing_term })
}

/// Both one-sided verdicts.
pub fn torsion_verdict(seq: &IdealSequence) -> Result<TorsionVerdict> {
    let r = right_torsion(seq)?;
    let l = left_torsion(seq)?;
    Ok(TorsionVerdict { right: side_verdict(seq, &r)?, left: side_verdict(seq, &l)? })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosurePath {
    pub start: Side,
    /// Sides applied, in order.
    pub applied: Vec<Side>,
    /// First term `ℐ_1` of every distinct sequence visited, the input first.
    pub visited: Vec<OrbitIdealData>,
    pub converged: bool,
    /// First term of the two-sided fixed point, when reached.
    pub fixed_seed: Option<OrbitIdealData>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub right_first: ClosurePath,
    pub left_first: ClosurePath,
    /// Both orders reach the same fixed point.
    pub same_limit: bool,
    /// Number of distinct fixed points reached.
    pub fixed_points: usize,
}

fn closure_path(seq: &IdealSequence, start: Side, max_iter: usize) -> Result<(ClosurePath, Option<IdealSequence>)> {
    let mut cur = seq.clone();
    let mut side = start;
    let mut applied = Vec::new();
    let mut visited = vec![cur.seed()?];
    let mut unchanged = 0;
    for _ in 0..max_iter {
        let next = torsion(&cur, side)?.sequence;
        applied.push(side);
        if next.window_eq(&cur)? {
            unchanged += 1;
            if unchanged == 2 {
                let path = ClosurePath { start, applied, visited, converged: true, fixed_seed: Some(cur.seed()?) };
                return Ok((path, Some(cur)));
            }
        } else {
            unchanged = 0;
            visited.push(next.seed()?);
            cur = next;
        }
        side = side.other();
    }
    Ok((ClosurePath { start, applied, visited, converged: false, fixed_seed: None }, None))
}

/// Alternates right and left torsion extensions from both starting sides
/// until both leave the sequence unchanged on the window.
pub fn closure_orbit(seq: &IdealSequence, max_iter: usize) -> Result<ClosureReport> {
    if max_iter == 0 {
        return Err(Error::Input("max_iter must be positive".into()));
    }
    let (right_first, right_fixed) = closure_path(seq, Side::Right, max_iter)?;
    let (left_first, left_fixed) = closure_path(seq, Side::Left, max_iter)?;
    let (same_limit, fixed_points) = match (&right_fixed, &left_fixed) {
        (Some(a), Some(b)) => {
            let same = a.window_eq(b)?;
            (same, if same { 1 } else { 2 })
        }
        (Some(_), None) | (None, Some(_)) => (false, 1),
        (None, None) => (false, 0),
    };
    Ok(ClosureReport { right_first, left_first, same_limit, fixed_points })
}
